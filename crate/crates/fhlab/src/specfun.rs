//! Gamma and Barnes G special functions for the jump-singularity constant.
//!
//! The Barnes G-function is the entire function with `G(z+1) = Gamma(z) G(z)`
//! and `G(1) = 1`; `G(1+beta) G(1-beta)` is the jump contribution to the
//! determinant constant. Evaluation reduces the argument into the strip
//! `1 <= Re z < 2` by the functional equation and then sums the canonical
//! product
//!
//! ```text
//! G(z+1) = (2 pi)^(z/2) e^(-[z^2 (gamma+1) + z]/2) prod_n (1 + z/n)^n e^(z^2/(2n) - z)
//! ```
//!
//! with an Euler-Maclaurin tail correction, which gives >= 12 digits in the
//! strip without any external constants.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{wrap_angle, LogComplex};

/// Euler's constant gamma.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LN_TWO_PI: f64 = 1.837_877_066_409_345_5;

// Lanczos g = 7, 9-term coefficients (GSL / Numerical Recipes set).
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Principal-branch log Gamma: `log|Gamma(z)| + i Arg(Gamma(z))`.
///
/// The recurrence `log Gamma(z+1) = log z + log Gamma(z)` holds up to 2 pi i
/// because the imaginary part is folded to (-pi, pi].
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole(z.re));
    }
    let w = log_gamma_branch(z);
    Ok(Complex64::new(w.re, wrap_angle(w.im)))
}

// Lanczos evaluation on some analytic-continuation branch (imaginary part not
// folded); only |Gamma| and the phase mod 2 pi are meaningful to callers.
fn log_gamma_branch(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        let pi = std::f64::consts::PI;
        let s = (z * pi).sin();
        return Complex64::new(pi.ln(), 0.0) - s.ln() - log_gamma_branch(Complex64::ONE - z);
    }
    let x = z - Complex64::ONE;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (x + 0.5) * t.ln() - t + 0.5 * LN_TWO_PI + acc.ln()
}

/// Gamma itself, for moderate arguments.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

/// Log of the Barnes G-function. Exact zeros at z = 0, -1, -2, ... are
/// reported as `LogComplex::ZERO`.
pub fn barnes_g_log(z: Complex64) -> LogComplex {
    if is_nonpositive_integer(z) {
        return LogComplex::ZERO;
    }
    // reduce into 1 <= Re w < 2 via G(w+1) = Gamma(w) G(w)
    let mut w = z;
    let mut shift = Complex64::ZERO;
    while w.re < 1.0 {
        shift -= log_gamma_branch(w);
        w += Complex64::ONE;
    }
    while w.re >= 2.0 {
        w -= Complex64::ONE;
        shift += log_gamma_branch(w);
    }
    let total = log_barnes_strip(w) + shift;
    LogComplex::new(total.re, total.im)
}

// log G(w) for 1 <= Re w < 2, via the product formula for G(y+1), y = w - 1.
fn log_barnes_strip(w: Complex64) -> Complex64 {
    const N: usize = 10_000;
    let y = w - Complex64::ONE;
    if y.norm() == 0.0 {
        return Complex64::ZERO; // G(1) = 1
    }
    let y2 = y * y;
    let mut total = y * 0.5 * LN_TWO_PI - (y2 * (EULER_GAMMA + 1.0) + y) * 0.5;

    // direct terms while y/n is large, series afterwards (avoids the
    // cancellation in n log(1+y/n) - y + y^2/(2n) for small y/n)
    let direct_cut = (4.0 * y.norm()).ceil().max(8.0) as usize;
    let mut sum = Complex64::ZERO;
    for n in 1..=N {
        let nf = n as f64;
        if n <= direct_cut {
            sum += (Complex64::ONE + y / nf).ln() * nf - y + y2 / (2.0 * nf);
        } else {
            // t_n = sum_{m>=2} (-1)^(m+1) y^(m+1) / ((m+1) n^m)
            let r = -y / nf;
            let mut term = y2 * y / (3.0 * nf * nf); // m = 2
            let mut m = 2.0;
            let mut tn = Complex64::ZERO;
            loop {
                tn += term;
                if term.norm() < 1e-22 * (1.0 + tn.norm()) {
                    break;
                }
                term = term * r * ((m + 1.0) / (m + 2.0));
                m += 1.0;
            }
            sum += tn;
        }
    }
    total += sum;

    // Euler-Maclaurin tail: sum_{m>=2} (-1)^(m+1) y^(m+1)/(m+1) * zeta(m, N+1)
    let mut ym1 = y2 * y; // y^(m+1) at m = 2
    let mut m = 2.0;
    loop {
        let zt = hurwitz_tail(m, (N + 1) as f64);
        let term = ym1 * (if (m as i64) % 2 == 0 { 1.0 } else { -1.0 } * zt / (m + 1.0));
        total += term;
        if term.norm() < 1e-22 || m > 40.0 {
            break;
        }
        ym1 *= y;
        m += 1.0;
    }
    total
}

// sum_{n >= a} n^(-m) by Euler-Maclaurin; accurate to ~a^(-m-7).
fn hurwitz_tail(m: f64, a: f64) -> f64 {
    let am = a.powf(-m);
    a.powf(1.0 - m) / (m - 1.0) + 0.5 * am + m * am / (12.0 * a)
        - m * (m + 1.0) * (m + 2.0) * am / (720.0 * a.powi(3))
        + m * (m + 1.0) * (m + 2.0) * (m + 3.0) * (m + 4.0) * am / (30240.0 * a.powi(5))
}

/// Log of `G(1+beta) G(1-beta)`, the jump factor of the determinant constant.
/// Exactly zero iff beta is a nonzero integer.
pub fn fh_constant(beta: Complex64) -> LogComplex {
    barnes_g_log(Complex64::ONE + beta).mul(barnes_g_log(Complex64::ONE - beta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn log_gamma_small_integers() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-13);
        let g5 = log_gamma(c(5.0, 0.0)).unwrap();
        assert!((g5.re - 24.0_f64.ln()).abs() < 1e-13);
        assert!(g5.im.abs() < 1e-13);
    }

    #[test]
    fn log_gamma_half() {
        let g = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((g.re - 0.572_364_942_924_700_1).abs() < 1e-13);
    }

    #[test]
    fn log_gamma_complex_point() {
        // mpmath: log(gamma(3+4i)) = -1.7566267846037841 - 1.5405208691449285 i
        let g = log_gamma(c(3.0, 4.0)).unwrap();
        assert!((g - c(-1.756_626_784_603_784, -1.540_520_869_144_928_5)).norm() < 1e-12);
    }

    #[test]
    fn log_gamma_pole_rejected() {
        assert!(log_gamma(c(0.0, 0.0)).is_err());
        assert!(log_gamma(c(-3.0, 0.0)).is_err());
        assert!(log_gamma(c(-3.0, 0.1)).is_ok());
    }

    #[test]
    fn log_gamma_recurrence_mod_2pi() {
        for &z in &[c(0.3, 1.2), c(-2.4, 0.7), c(4.5, -3.0), c(0.1, -0.1)] {
            let lhs = log_gamma(z + Complex64::ONE).unwrap();
            let rhs = z.ln() + log_gamma(z).unwrap();
            assert!(
                ((lhs - rhs).exp() - Complex64::ONE).norm() < 1e-11,
                "recurrence failed at {z}"
            );
        }
    }

    #[test]
    fn barnes_small_values() {
        assert!(barnes_g_log(c(1.0, 0.0)).rel_discrepancy(LogComplex::ONE) < 1e-13);
        // G(4) = Gamma(3) Gamma(2) Gamma(1) = 2
        let g4 = barnes_g_log(c(4.0, 0.0));
        assert!((g4.value() - c(2.0, 0.0)).norm() < 1e-12);
        // G(2) = G(3) = 1
        assert!((barnes_g_log(c(2.0, 0.0)).value() - Complex64::ONE).norm() < 1e-12);
        assert!((barnes_g_log(c(3.0, 0.0)).value() - Complex64::ONE).norm() < 1e-12);
    }

    #[test]
    fn barnes_half() {
        let g = barnes_g_log(c(0.5, 0.0)).value();
        assert!((g.re - 0.603_244_281_209_446_2).abs() < 1e-12, "G(1/2) = {g}");
        assert!(g.im.abs() < 1e-12);
    }

    #[test]
    fn barnes_reference_points() {
        // mpmath cross-checks
        let g = barnes_g_log(c(1.5, 0.0)).value();
        assert!((g.re - 1.069_222_649_266_412_9).abs() < 1e-12);
        let g = barnes_g_log(c(3.6, 0.0)).value();
        assert!((g.re - 1.354_219_417_979_058_4).abs() < 1e-11);
        let g = barnes_g_log(c(-1.6, 0.0)).value();
        assert!((g.re - (-0.056_631_020_383_380_93)).abs() < 1e-12);
        let g = barnes_g_log(c(1.3, 0.7)).value();
        assert!((g - c(1.276_476_036_815_030_9, -0.067_036_582_644_892_46)).norm() < 1e-11);
    }

    #[test]
    fn barnes_zeros() {
        assert!(barnes_g_log(c(0.0, 0.0)).is_zero());
        assert!(barnes_g_log(c(-2.0, 0.0)).is_zero());
        assert!(!barnes_g_log(c(-2.0, 1e-3)).is_zero());
    }

    #[test]
    fn barnes_conjugation() {
        for &z in &[c(1.7, 2.3), c(-0.4, 1.1), c(3.2, -0.6)] {
            let a = barnes_g_log(z).value();
            let b = barnes_g_log(z.conj()).value();
            assert!((a.conj() - b).norm() < 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn fh_constant_values() {
        // beta = 0 -> G(1)^2 = 1
        assert!((fh_constant(c(0.0, 0.0)).value() - Complex64::ONE).norm() < 1e-13);
        // beta = 1 -> G(0) = 0, exactly flagged
        assert!(fh_constant(c(1.0, 0.0)).is_zero());
        assert!(fh_constant(c(-2.0, 0.0)).is_zero());
        // beta = 0.3 -> G(1.3) G(0.7), mpmath value
        let v = fh_constant(c(0.3, 0.0)).value();
        assert!((v.re - 0.863_218_414_374_170_1).abs() < 1e-12, "got {v}");
        // complex beta, mpmath value
        let v = fh_constant(c(0.3, 0.25)).value();
        assert!((v - c(0.942_738_554_417_891_5, -0.231_116_984_539_793_23)).norm() < 1e-11);
    }

    #[test]
    fn fh_constant_even() {
        for &b in &[c(0.3, 0.0), c(0.45, -0.2), c(1.3, 0.1)] {
            let p = fh_constant(b);
            let m = fh_constant(-b);
            assert_eq!(p.log_abs, m.log_abs);
            assert_eq!(p.arg, m.arg);
        }
    }
}

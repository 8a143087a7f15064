//! Wiener-Hopf factorization of the smooth factor, the Szego constants
//! `G[tau]` and `E[tau]`, the functions `u = sigma_-/sigma_+` and `v = 1/u`
//! with their coefficient asymptotics, the constants c0 / c0', truncated
//! `(VU)` entries, and the Wiener-Hopf kernel symbol.
//!
//! On the circle `u(e^(i theta)) = (2 - 2 cos theta)^(-beta) tau_-/tau_+`, so
//! `u_hat(n)` has an algebraic endpoint singularity of exponent `-2 Re beta`
//! at theta = 0, 2pi; the quadratures declare it and integrate through the
//! weakening substitution.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{adaptive_quad, adaptive_quad_singular, wrap_angle, Endpoint, LogComplex, TWO_PI};
use crate::specfun::log_gamma;
use crate::symbols::{
    sample_fourier, tau_fourier_auto, verify_class, FourierSeries, LaurentPoly, SymbolSpec,
    TauSpec,
};

const PI: f64 = std::f64::consts::PI;

/// Wiener-Hopf factorization `tau = tau_- tau_+` with `tau_+` analytic and
/// nonvanishing inside the unit disk and `tau_-` outside.
#[derive(Debug, Clone)]
pub struct Factorization {
    /// Power series of `tau_+` (indices >= 0).
    pub tau_plus: FourierSeries,
    /// Power series of `tau_-` in `1/z` (indices <= 0).
    pub tau_minus: FourierSeries,
    /// `(log tau)_hat(0)`; both factors equal `exp(log_g_mean/2)` at their
    /// center (z = 0, z = infinity respectively).
    pub log_g_mean: Complex64,
    /// `max_k |(tau_- * tau_+)_hat(k) - tau_hat(k)|`.
    pub reconv_residual: f64,
}

impl Factorization {
    /// `tau_+(1)` by series summation.
    pub fn tau_plus_at_one(&self) -> Complex64 {
        self.tau_plus.coeffs.iter().sum()
    }

    /// `tau_-(1)` by series summation.
    pub fn tau_minus_at_one(&self) -> Complex64 {
        self.tau_minus.coeffs.iter().sum()
    }
}

fn require_tau_class(tau: &TauSpec) -> Result<()> {
    let probe = SymbolSpec::new(Complex64::new(0.25, 0.0), tau.clone());
    match verify_class(&probe).failure() {
        None => Ok(()),
        Some(msg) => Err(Error::ClassViolation(msg)),
    }
}

/// Fourier coefficients of `log tau` over `[k_lo, k_hi]`.
///
/// The exp_laurent family returns its exponent exactly. The laurent family
/// samples `log tau` with continuous branch tracking around the circle
/// (winding 0 makes the log single-valued), refining the grid when phase
/// steps get too large, then FFTs the samples.
pub fn log_tau_fourier(tau: &TauSpec, k_lo: i64, k_hi: i64) -> Result<FourierSeries> {
    match tau {
        TauSpec::ExpLaurent(p) => {
            let mut out = FourierSeries::zero_on(k_lo, k_hi);
            for (k, c) in p.terms() {
                if k >= k_lo && k <= k_hi {
                    out.set(k, c);
                }
            }
            Ok(out)
        }
        TauSpec::Laurent(_) => {
            let base = branch_tracked_log(tau)?;
            Ok(fourier_from_log_samples(tau, &base, k_lo, k_hi))
        }
    }
}

// log tau on a uniform grid with the argument tracked continuously; the grid
// doubles until adjacent phase steps are comfortably unambiguous.
fn branch_tracked_log(tau: &TauSpec) -> Result<Vec<Complex64>> {
    let mut n = 1024_usize;
    loop {
        let vals: Vec<Complex64> = (0..n)
            .map(|m| tau.eval(Complex64::from_polar(1.0, TWO_PI * m as f64 / n as f64)))
            .collect();
        let mut phases = Vec::with_capacity(n);
        let mut phi = vals[0].arg();
        phases.push(phi);
        let mut max_step: f64 = 0.0;
        for m in 1..n {
            let step = wrap_angle(vals[m].arg() - vals[m - 1].arg());
            max_step = max_step.max(step.abs());
            phi += step;
            phases.push(phi);
        }
        max_step = max_step.max(wrap_angle(vals[0].arg() - vals[n - 1].arg()).abs());
        if max_step < 0.5 * PI {
            return Ok(vals
                .iter()
                .zip(&phases)
                .map(|(v, &p)| Complex64::new(v.norm().ln(), p))
                .collect());
        }
        if n >= 1 << 18 {
            return Err(Error::BranchTracking { jump: max_step, grid: n });
        }
        n *= 2;
    }
}

fn fourier_from_log_samples(
    tau: &TauSpec,
    base: &[Complex64],
    k_lo: i64,
    k_hi: i64,
) -> FourierSeries {
    // resample finer through the same function, anchoring each branch choice
    // to the nearest tracked base sample
    let n = base.len();
    let logf = move |z: Complex64| -> Complex64 {
        let v = tau.eval(z);
        let idx = ((z.arg().rem_euclid(TWO_PI)) / TWO_PI * n as f64).round() as usize % n;
        let anchor = base[idx].im;
        let mut arg = v.arg();
        while arg - anchor > PI {
            arg -= TWO_PI;
        }
        while anchor - arg > PI {
            arg += TWO_PI;
        }
        Complex64::new(v.norm().ln(), arg)
    };
    sample_fourier(&logf, k_lo, k_hi)
}

// log tau coefficients over a range wide enough that the edges are
// negligible; exact and finite for exp_laurent.
pub(crate) fn log_tau_auto(tau: &TauSpec) -> Result<FourierSeries> {
    if let TauSpec::ExpLaurent(p) = tau {
        let (lo, hi) = p.support().unwrap_or((0, 0));
        return log_tau_fourier(tau, lo.min(0), hi.max(0));
    }
    let mut half = 32_i64;
    loop {
        let f = log_tau_fourier(tau, -half, half)?;
        let peak = f.max_abs().max(1e-300);
        let edge = f.get(-half).norm().max(f.get(half).norm());
        if edge < 1e-17 * peak || half >= 1 << 13 {
            return Ok(f);
        }
        half *= 2;
    }
}

/// Geometric mean `G[tau] = exp((log tau)_hat(0))`.
pub fn geometric_mean(tau: &TauSpec) -> Result<LogComplex> {
    require_tau_class(tau)?;
    let l0 = log_tau_auto(tau)?.get(0);
    Ok(LogComplex::new(l0.re, l0.im))
}

/// Strong Szego constant `E[tau] = exp(sum_{k>=1} k l_hat(k) l_hat(-k))`.
pub fn szego_constant(tau: &TauSpec) -> Result<LogComplex> {
    require_tau_class(tau)?;
    let l = log_tau_auto(tau)?;
    let e = szego_sum(&l);
    Ok(LogComplex::new(e.re, e.im))
}

// the log-coefficient table from log_tau_auto already reaches the 1e-17
// relative floor, so summing over it realizes the <1e-14 tail requirement
pub(crate) fn szego_sum(l: &FourierSeries) -> Complex64 {
    let half = (-l.lo()).min(l.hi()).max(0);
    let mut sum = Complex64::ZERO;
    for k in 1..=half {
        sum += l.get(k) * l.get(-k) * k as f64;
    }
    sum
}

/// Wiener-Hopf factorization from the split log series:
/// `tau_+ = exp(l_hat(0)/2 + sum_{k>0} l_hat(k) z^k)` expanded as a power
/// series; `tau_-` symmetric in 1/z. The reconvolution residual against
/// `tau_hat` is reported.
pub fn wiener_hopf(tau: &TauSpec) -> Result<Factorization> {
    require_tau_class(tau)?;
    let l = log_tau_auto(tau)?;
    let center = (l.get(0) * 0.5).exp();

    let plus_log: Vec<Complex64> = (1..=l.hi().max(0)).map(|k| l.get(k)).collect();
    let minus_log: Vec<Complex64> = (1..=(-l.lo()).max(0)).map(|k| l.get(-k)).collect();
    let plus = series_exp(center, &plus_log);
    let minus = series_exp(center, &minus_log);

    let tau_plus = FourierSeries::new(0, plus);
    let tau_minus = {
        let mut v = minus;
        v.reverse();
        let lo = -(v.len() as i64 - 1);
        FourierSeries::new(lo, v)
    };

    let tau_hat = tau_fourier_auto(tau);
    let mut residual: f64 = 0.0;
    for k in tau_hat.lo()..=tau_hat.hi() {
        let mut conv = Complex64::ZERO;
        for (m, cm) in tau_minus.enumerate() {
            conv += cm * tau_plus.get(k - m);
        }
        residual = residual.max((conv - tau_hat.get(k)).norm());
    }

    Ok(Factorization { tau_plus, tau_minus, log_g_mean: l.get(0), reconv_residual: residual })
}

// coefficients of b0 * exp(sum_{k>=1} a_k z^k) via b' = (sum k a_k z^(k-1)) b
fn series_exp(b0: Complex64, a: &[Complex64]) -> Vec<Complex64> {
    let mut b = vec![b0];
    let mut n = 1usize;
    loop {
        let mut s = Complex64::ZERO;
        for k in 1..=n.min(a.len()) {
            s += a[k - 1] * (k as f64) * b[n - k];
        }
        let bn = s / n as f64;
        b.push(bn);
        let peak = b.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if (n >= a.len() && n >= 4 && bn.norm() < 1e-17 * peak) || n > 4096 {
            break;
        }
        n += 1;
    }
    while b.len() > 1 && b.last().unwrap().norm() == 0.0 {
        b.pop();
    }
    b
}

// the smooth ratio tau_-/tau_+ as an exp_laurent exponent:
// Q = (log tau)_- - (log tau)_+ (zero modes cancel)
fn ratio_exponent(tau: &TauSpec) -> Result<LaurentPoly> {
    let l = log_tau_auto(tau)?;
    let peak = l.max_abs().max(1e-300);
    Ok(LaurentPoly::from_terms(l.enumerate().filter_map(|(k, c)| {
        if k == 0 || c.norm() < 1e-17 * peak {
            None
        } else if k < 0 {
            Some((k, c))
        } else {
            Some((k, -c))
        }
    })))
}

fn negated(q: &LaurentPoly) -> LaurentPoly {
    LaurentPoly::from_terms(q.terms().map(|(k, c)| (k, -c)))
}

fn check_strip(beta: Complex64) -> Result<()> {
    if beta.re.abs() >= 0.5 {
        return Err(Error::BetaOutOfStrip(beta.re));
    }
    Ok(())
}

// (1/2pi) int_0^2pi (2-2cos t)^a exp(q(e^(it))) e^(-int) dt, split at pi with
// the right half reflected onto [0, pi] so the (declared) singular endpoint is
// always at 0, where 2-2cos t = 4 sin^2(t/2) evaluates at full precision.
fn singular_smooth_fourier(a: Complex64, q: &LaurentPoly, n: i64) -> Result<Complex64> {
    let singular = |t: f64| {
        let w = 4.0 * (0.5 * t).sin().powi(2);
        (a * w.ln()).exp()
    };
    let fwd = |t: f64| {
        singular(t)
            * q.eval(Complex64::from_polar(1.0, t)).exp()
            * (-Complex64::i() * (n as f64) * t).exp()
    };
    // theta = 2pi - t, using e^(-i n (2pi - t)) = e^(i n t)
    let refl = |t: f64| {
        singular(t)
            * q.eval(Complex64::from_polar(1.0, -t)).exp()
            * (Complex64::i() * (n as f64) * t).exp()
    };
    let endpoint = if a.re < 0.0 {
        Endpoint::Algebraic { exponent: 2.0 * a.re }
    } else {
        Endpoint::Regular
    };
    let tol = 1e-10;
    let left = adaptive_quad_singular(fwd, 0.0, PI, 0.5 * tol, endpoint, Endpoint::Regular);
    let right = adaptive_quad_singular(refl, 0.0, PI, 0.5 * tol, endpoint, Endpoint::Regular);
    if !(left.converged && right.converged) {
        return Err(Error::QuadNoConvergence { error: left.abs_error + right.abs_error, tol });
    }
    Ok((left.value + right.value) / TWO_PI)
}

/// `u_hat(n)` by adaptive quadrature; `u = (2-2cos)^(-beta) tau_-/tau_+`.
/// Requires |Re beta| < 1/2 (integrability of the singular factor).
pub fn u_fourier(spec: &SymbolSpec, n: i64) -> Result<Complex64> {
    check_strip(spec.beta)?;
    let q = ratio_exponent(&spec.tau)?;
    singular_smooth_fourier(-spec.beta, &q, n)
}

/// `v_hat(n)` by adaptive quadrature; `v = 1/u`.
pub fn v_fourier(spec: &SymbolSpec, n: i64) -> Result<Complex64> {
    check_strip(spec.beta)?;
    let q = ratio_exponent(&spec.tau)?;
    singular_smooth_fourier(spec.beta, &negated(&q), n)
}

/// The Lemma-1 leading constants.
#[derive(Debug, Clone, Copy)]
pub struct CConstants {
    pub c0: Complex64,
    pub c0_prime: Complex64,
}

/// `c0 = Gamma(1-2 beta) sin(pi beta)/pi * tau_-(1)/tau_+(1)` and
/// `c0' = Gamma(1+2 beta) sin(pi beta)/pi * tau_+(1)/tau_-(1)`;
/// the product `c0 c0'` is independent of tau.
pub fn c_constants(beta: Complex64, fact: &Factorization) -> Result<CConstants> {
    let g_minus = log_gamma(Complex64::ONE - 2.0 * beta)?.exp();
    let g_plus = log_gamma(Complex64::ONE + 2.0 * beta)?.exp();
    let s = (beta * PI).sin() / PI;
    let ratio = fact.tau_minus_at_one() / fact.tau_plus_at_one();
    Ok(CConstants { c0: g_minus * s * ratio, c0_prime: g_plus * s / ratio })
}

/// Scaled-coefficient table checking the leading-order decay of `u_hat(n)`
/// and `v_hat(-n)`.
#[derive(Debug, Clone)]
pub struct UAsymptotics {
    pub constants: CConstants,
    pub rows: Vec<URow>,
}

#[derive(Debug, Clone, Copy)]
pub struct URow {
    pub n: i64,
    /// `u_hat(n) n^(1-2 beta) / c0`; tends to 1.
    pub u_ratio: Complex64,
    /// `v_hat(-n) n^(1+2 beta) / (-c0')`; tends to 1. The leading coefficient
    /// of `v_hat` is the negative of c0' (the exact binomial coefficients of
    /// the singular factor fix the sign).
    pub v_ratio: Complex64,
}

pub fn check_u_asymptotics(spec: &SymbolSpec, n_list: &[i64]) -> Result<UAsymptotics> {
    check_strip(spec.beta)?;
    if spec.beta == Complex64::ZERO {
        return Err(Error::InvalidArgument("u-asymptotics need beta != 0".into()));
    }
    let fact = wiener_hopf(&spec.tau)?;
    let constants = c_constants(spec.beta, &fact)?;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let nf = n as f64;
        let u = u_fourier(spec, n)?;
        let v = v_fourier(spec, -n)?;
        let u_scale = ((Complex64::ONE - 2.0 * spec.beta) * nf.ln()).exp();
        let v_scale = ((Complex64::ONE + 2.0 * spec.beta) * nf.ln()).exp();
        rows.push(URow {
            n,
            u_ratio: u * u_scale / constants.c0,
            v_ratio: v * v_scale / -constants.c0_prime,
        });
    }
    Ok(UAsymptotics { constants, rows })
}

/// Coefficients of `(2-2cos theta)^a` in closed form:
/// `(-1)^k Gamma(1+2a) / (Gamma(1+a+k) Gamma(1+a-k))`, evaluated through the
/// reflection `-Gamma(1+2a) sin(pi a)/pi * Gamma(|k|-a)/Gamma(|k|+1+a)`,
/// which stays stable for large |k|.
pub fn singular_power_fourier(a: Complex64, k: i64) -> Result<Complex64> {
    if a == Complex64::ZERO {
        return Ok(if k == 0 { Complex64::ONE } else { Complex64::ZERO });
    }
    let k = k.unsigned_abs() as f64;
    let front = -log_gamma(Complex64::ONE + 2.0 * a)?.exp() * (a * PI).sin() / PI;
    let ratio =
        (log_gamma(Complex64::new(k, 0.0) - a)? - log_gamma(Complex64::new(k + 1.0, 0.0) + a)?)
            .exp();
    Ok(front * ratio)
}

// u_hat over a contiguous range by convolving the closed-form singular
// coefficients with the rapidly decaying smooth-ratio coefficients; agrees
// with the quadrature route (tested) and makes thousand-term VU sums
// affordable. The singular factor is never FFT-sampled.
fn u_coeff_table(a: Complex64, q: &LaurentPoly, lo: i64, hi: i64) -> Result<FourierSeries> {
    let smooth = if q.is_empty() {
        FourierSeries::new(0, vec![Complex64::ONE])
    } else {
        tau_fourier_auto(&TauSpec::ExpLaurent(q.clone()))
    };
    let peak = smooth.max_abs();
    let kept: Vec<(i64, Complex64)> =
        smooth.enumerate().filter(|(_, c)| c.norm() >= 1e-16 * peak).collect();
    let mut coeffs = Vec::with_capacity((hi - lo + 1).max(0) as usize);
    for k in lo..=hi {
        let mut s = Complex64::ZERO;
        for &(m, cm) in &kept {
            s += cm * singular_power_fourier(a, k - m)?;
        }
        coeffs.push(s);
    }
    Ok(FourierSeries::new(lo, coeffs))
}

/// A truncated `(VU)_{i,j} = sum_{k=1}^{K} u_hat(k+n-j) v_hat(i-n-k)` with a
/// decay-based bound on the dropped tail.
#[derive(Debug, Clone, Copy)]
pub struct VuEntry {
    pub value: Complex64,
    pub tail_bound: f64,
    pub k_max: usize,
}

/// Truncated `(VU)_{i,j}` for `i, j <= 0` (the negative-index convention of
/// the semi-infinite system).
pub fn vu_entry(spec: &SymbolSpec, i: i64, j: i64, n: i64, k_max: usize) -> Result<VuEntry> {
    check_strip(spec.beta)?;
    if i > 0 || j > 0 {
        return Err(Error::InvalidArgument("vu_entry indices must be <= 0".into()));
    }
    if k_max < 1 {
        return Err(Error::InvalidArgument("k_max must be >= 1".into()));
    }
    let q = ratio_exponent(&spec.tau)?;
    let kk = k_max as i64;
    let u = u_coeff_table(-spec.beta, &q, 1 + n - j, kk + n - j)?;
    let v = u_coeff_table(spec.beta, &negated(&q), i - n - kk, i - n - 1)?;

    let mut value = Complex64::ZERO;
    for k in 1..=kk {
        value += u.get(k + n - j) * v.get(i - n - k);
    }

    // |u_hat(m)| <~ C_u m^(-1+2 Re beta), |v_hat(-m)| <~ C_v m^(-1-2 Re beta)
    let b = spec.beta.re;
    let s = (n - j) as f64;
    let t = (n - i) as f64;
    let c_u =
        u.enumerate().map(|(m, c)| c.norm() * (m as f64).powf(1.0 - 2.0 * b)).fold(0.0, f64::max);
    let c_v = v
        .enumerate()
        .map(|(m, c)| c.norm() * ((-m) as f64).powf(1.0 + 2.0 * b))
        .fold(0.0, f64::max);
    let kf = k_max as f64;
    let skew = ((kf + s) / (kf + t)).powf(2.0 * b.abs());
    let tail_bound = c_u * c_v * skew / (kf + s.min(t));

    Ok(VuEntry { value, tail_bound, k_max })
}

/// Closed-form Wiener-Hopf kernel symbol
/// `k_hat(xi) = -sin^2(pi beta) / (cosh^2(pi xi) - sin^2(pi beta))`.
pub fn kernel_hat_closed(beta: Complex64, xi: f64) -> Complex64 {
    let s2 = (beta * PI).sin().powi(2);
    let c2 = Complex64::new((PI * xi).cosh(), 0.0).powi(2);
    -s2 / (c2 - s2)
}

/// Position-space kernel values and their numeric Fourier transform.
#[derive(Debug, Clone)]
pub struct KernelNumeric {
    pub xi: Vec<f64>,
    pub values: Vec<Complex64>,
    /// bound on the dropped |x| > x_cutoff contribution
    pub tail_bound: f64,
    pub x_cutoff: f64,
}

// prefactor of k(x): the product of the leading coefficients of u_hat and
// v_hat(-.), i.e. minus the (tau-independent) product c0 c0'.
fn kernel_prefactor(beta: Complex64) -> Result<Complex64> {
    let g1 = log_gamma(Complex64::ONE - 2.0 * beta)?.exp();
    let g2 = log_gamma(Complex64::ONE + 2.0 * beta)?.exp();
    let s = (beta * PI).sin();
    Ok(-g1 * g2 * s * s / (PI * PI))
}

// |k(x)/prefactor| magnitude estimate, used only to scale tolerances
fn kernel_scale(beta: Complex64, x: f64) -> f64 {
    if x.abs() < 1e-8 {
        return 1.0;
    }
    let denom = 2.0 * (x / 2.0).sinh();
    let v = if beta.norm() < 1e-12 {
        Complex64::new(x / denom, 0.0)
    } else {
        (beta * x).sinh() / (beta * denom)
    };
    v.norm().max(1e-280)
}

/// `k(x) = C e^((1/2+beta)x) int_0^inf (z+1)^(-1+2beta) (z+e^x)^(-1-2beta) dz`
/// with the inner integral evaluated numerically after compactifying
/// (`z = t/(1-t)`) and stretching the boundary layer exponentially.
pub fn kernel_x(beta: Complex64, x: f64) -> Result<Complex64> {
    check_strip(beta)?;
    let pref = kernel_prefactor(beta)?;
    let scale = kernel_scale(beta, x);
    if scale < 1e-220 {
        return Ok(Complex64::ZERO);
    }
    let inner_est = scale * (-(0.5 + beta.re) * x).exp();
    let tol = 1e-9 * inner_est;
    let power = -(Complex64::ONE + 2.0 * beta);
    let ex = x.exp();
    // compactified integrand is (t + e^x (1-t))^(-1-2beta) on [0,1]; the
    // boundary layer sits at t=1 for x>0 and t=0 for x<0
    let inner = if x >= 0.0 {
        adaptive_quad(
            |u| {
                let emu = (-u).exp();
                let base = (1.0 - emu) + ex * emu;
                (power * base.ln()).exp() * emu
            },
            0.0,
            x + 45.0,
            tol,
        )
    } else {
        adaptive_quad(
            |u| {
                let emu = (-u).exp();
                let base = emu + ex * (1.0 - emu);
                (power * base.ln()).exp() * emu
            },
            0.0,
            -x + 45.0,
            tol,
        )
    };
    if !inner.converged {
        return Err(Error::QuadNoConvergence { error: inner.abs_error, tol });
    }
    let amp = ((0.5 + beta) * x).exp();
    Ok(pref * amp * inner.value)
}

/// Numeric Fourier transform of the position-space kernel on a xi grid.
/// Convention: `k_hat(xi) = int k(x) e^(-i xi x) dx`; k is even, so the sign
/// of the exponent is immaterial, and this choice reproduces
/// [`kernel_hat_closed`].
pub fn kernel_hat_numeric(beta: Complex64, xi_grid: &[f64]) -> Result<KernelNumeric> {
    check_strip(beta)?;
    // |k(x)| decays like e^(-(1/2-|Re beta|)|x|)
    let decay = 0.5 - beta.re.abs();
    let x_cutoff = 16.0 / decay;
    let h = 0.02;
    let mut m = (x_cutoff / h).ceil() as usize;
    if m % 2 == 1 {
        m += 1;
    }

    let xs: Vec<f64> = (-(m as i64)..=m as i64).map(|i| i as f64 * h).collect();
    let mut ks = Vec::with_capacity(xs.len());
    for &x in &xs {
        ks.push(kernel_x(beta, x)?);
    }

    let edge = ks[0].norm().max(ks[ks.len() - 1].norm());
    let tail_bound = 2.0 * edge / decay;

    let mut values = Vec::with_capacity(xi_grid.len());
    for &xi in xi_grid {
        let mut acc = Complex64::ZERO;
        for (idx, (&x, &kx)) in xs.iter().zip(&ks).enumerate() {
            let w = if idx == 0 || idx == xs.len() - 1 {
                1.0
            } else if idx % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += kx * (-Complex64::i() * xi * x).exp() * w;
        }
        values.push(acc * (h / 3.0));
    }
    Ok(KernelNumeric { xi: xi_grid.to_vec(), values, tail_bound, x_cutoff: m as f64 * h })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tau_exp(terms: &[(i64, Complex64)]) -> TauSpec {
        TauSpec::ExpLaurent(LaurentPoly::from_terms(terms.iter().copied()))
    }

    fn tau_two_factor() -> TauSpec {
        // (1 - 0.5 z)(1 - 0.3/z)
        TauSpec::Laurent(LaurentPoly::from_terms([
            (0, c(1.15, 0.0)),
            (1, c(-0.5, 0.0)),
            (-1, c(-0.3, 0.0)),
        ]))
    }

    #[test]
    fn log_tau_exp_laurent_exact() {
        let tau = tau_exp(&[(1, c(0.4, 0.0)), (-1, c(-0.25, 0.0))]);
        let l = log_tau_fourier(&tau, -3, 3).unwrap();
        assert_eq!(l.get(1), c(0.4, 0.0));
        assert_eq!(l.get(-1), c(-0.25, 0.0));
        assert_eq!(l.get(0), Complex64::ZERO);
        assert_eq!(l.get(2), Complex64::ZERO);
    }

    #[test]
    fn log_tau_laurent_series() {
        // log(1 - 0.5 z): l_hat(k) = -0.5^k / k for k >= 1
        let tau =
            TauSpec::Laurent(LaurentPoly::from_terms([(0, Complex64::ONE), (1, c(-0.5, 0.0))]));
        let l = log_tau_fourier(&tau, -4, 6).unwrap();
        for k in 1..=6_i64 {
            let expect = -(0.5_f64.powi(k as i32)) / k as f64;
            assert!((l.get(k) - c(expect, 0.0)).norm() < 1e-12, "k={k} got {}", l.get(k));
        }
        for k in -4..=0_i64 {
            assert!(l.get(k).norm() < 1e-12);
        }
        // constant tau
        let tau = TauSpec::Laurent(LaurentPoly::from_terms([(0, c(2.5, 0.0))]));
        let l = log_tau_fourier(&tau, -2, 2).unwrap();
        assert!((l.get(0) - c(2.5_f64.ln(), 0.0)).norm() < 1e-13);
    }

    #[test]
    fn geometric_mean_cases() {
        assert!((geometric_mean(&TauSpec::one()).unwrap().value() - Complex64::ONE).norm() < 1e-13);
        // tau = exp(c + a z) -> e^c
        let tau = tau_exp(&[(0, c(0.3, 0.1)), (1, c(0.7, 0.0))]);
        let g = geometric_mean(&tau).unwrap().value();
        assert!((g - c(0.3, 0.1).exp()).norm() < 1e-13);
        // two-factor laurent: both log factors have zero mean coefficient
        let g = geometric_mean(&tau_two_factor()).unwrap().value();
        assert!((g - Complex64::ONE).norm() < 1e-12);
    }

    #[test]
    fn szego_constant_cases() {
        assert!((szego_constant(&TauSpec::one()).unwrap().value() - Complex64::ONE).norm() < 1e-13);
        // tau = exp(a z + b/z) -> e^(ab)
        let a = c(0.4, 0.1);
        let b = c(-0.25, 0.2);
        let e = szego_constant(&tau_exp(&[(1, a), (-1, b)])).unwrap().value();
        assert!((e - (a * b).exp()).norm() < 1e-12);
        // (1-rz)(1-s/z): E = 1/(1-rs)
        let e = szego_constant(&tau_two_factor()).unwrap().value();
        let expect = 1.0 / (1.0 - 0.15);
        assert!((e - c(expect, 0.0)).norm() < 1e-10, "E = {e}, expect {expect}");
    }

    #[test]
    fn szego_partial_sums_against_closed_form() {
        // independent oracle: sum_k (rs)^k / k = -log(1 - rs)
        let l = log_tau_auto(&tau_two_factor()).unwrap();
        let mut sum = Complex64::ZERO;
        for k in 1..=40_i64 {
            sum += l.get(k) * l.get(-k) * k as f64;
        }
        assert!((sum.re - (-(1.0_f64 - 0.15).ln())).abs() < 1e-12);
        assert!(sum.im.abs() < 1e-12);
    }

    #[test]
    fn wiener_hopf_exponential_split() {
        // tau = exp(az + b/z): tau_+ = e^(az), tau_- = e^(b/z)
        let a = c(0.4, 0.0);
        let b = c(-0.25, 0.0);
        let f = wiener_hopf(&tau_exp(&[(1, a), (-1, b)])).unwrap();
        let mut fact = 1.0;
        for k in 0..6_i64 {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((f.tau_plus.get(k) - a.powi(k as i32) / fact).norm() < 1e-13);
            assert!((f.tau_minus.get(-k) - b.powi(k as i32) / fact).norm() < 1e-13);
        }
        assert!(f.reconv_residual < 1e-11, "residual {}", f.reconv_residual);
    }

    #[test]
    fn wiener_hopf_identity_and_two_factor() {
        let f = wiener_hopf(&TauSpec::one()).unwrap();
        assert!((f.tau_plus_at_one() - Complex64::ONE).norm() < 1e-13);
        assert!((f.tau_minus_at_one() - Complex64::ONE).norm() < 1e-13);

        // factors already analytic in/out: tau_+ = 1 - 0.5z, tau_- = 1 - 0.3/z
        let f = wiener_hopf(&tau_two_factor()).unwrap();
        assert!((f.tau_plus.get(0) - Complex64::ONE).norm() < 1e-11);
        assert!((f.tau_plus.get(1) - c(-0.5, 0.0)).norm() < 1e-11);
        assert!(f.tau_plus.get(2).norm() < 1e-11);
        assert!((f.tau_minus.get(-1) - c(-0.3, 0.0)).norm() < 1e-11);
        assert!(f.reconv_residual < 1e-10);
        // tau_+(0) = sqrt(G[tau])
        let g0 = (f.log_g_mean * 0.5).exp();
        assert!((f.tau_plus.get(0) - g0).norm() < 1e-11);
    }

    #[test]
    fn u_fourier_beta_zero_is_delta() {
        let spec = SymbolSpec::new(c(0.0, 0.0), TauSpec::one());
        assert!((u_fourier(&spec, 0).unwrap() - Complex64::ONE).norm() < 1e-10);
        assert!(u_fourier(&spec, 3).unwrap().norm() < 1e-10);
    }

    #[test]
    fn u_fourier_strip_rejected() {
        let spec = SymbolSpec::pure_jump(c(0.6, 0.0));
        assert!(matches!(u_fourier(&spec, 0), Err(Error::BetaOutOfStrip(_))));
    }

    #[test]
    fn u_fourier_matches_closed_form() {
        // tau = 1: two independent routes, quadrature vs exact coefficients
        let beta = c(0.2, 0.0);
        let spec = SymbolSpec::pure_jump(beta);
        for &n in &[0_i64, 1, 5, 20] {
            let q = u_fourier(&spec, n).unwrap();
            let closed = singular_power_fourier(-beta, n).unwrap();
            assert!((q - closed).norm() < 1e-9, "n={n} quad={q} closed={closed}");
        }
        for &n in &[1_i64, 5, 20] {
            let q = v_fourier(&spec, -n).unwrap();
            let closed = singular_power_fourier(beta, -n).unwrap();
            assert!((q - closed).norm() < 1e-9, "v n={n} quad={q} closed={closed}");
        }
    }

    #[test]
    fn u_fourier_with_smooth_factor_matches_table() {
        // quadrature route vs convolution route for tau = exp(0.4 z)
        let tau = tau_exp(&[(1, c(0.4, 0.0))]);
        let spec = SymbolSpec::new(c(0.2, 0.0), tau);
        let q = ratio_exponent(&spec.tau).unwrap();
        let table = u_coeff_table(-spec.beta, &q, 0, 12).unwrap();
        for &n in &[0_i64, 3, 12] {
            let quad = u_fourier(&spec, n).unwrap();
            assert!(
                (quad - table.get(n)).norm() < 1e-9,
                "n={n} quad={quad} table={}",
                table.get(n)
            );
        }
    }

    #[test]
    fn u_v_reciprocal_symmetry() {
        // with tau = 1, v for beta equals u for -beta
        let spec_p = SymbolSpec::pure_jump(c(0.2, 0.0));
        let spec_m = SymbolSpec::pure_jump(c(-0.2, 0.0));
        for &n in &[0_i64, 3, -4] {
            let a = v_fourier(&spec_p, n).unwrap();
            let b = u_fourier(&spec_m, n).unwrap();
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn c_constants_product_identity() {
        // c0 c0' = Gamma(1-2b) Gamma(1+2b) sin^2(pi b)/pi^2, independent of tau
        for tau in [TauSpec::one(), tau_exp(&[(1, c(0.4, 0.0))]), tau_two_factor()] {
            let beta = c(0.2, 0.1);
            let f = wiener_hopf(&tau).unwrap();
            let cc = c_constants(beta, &f).unwrap();
            let expect = log_gamma(Complex64::ONE - 2.0 * beta).unwrap().exp()
                * log_gamma(Complex64::ONE + 2.0 * beta).unwrap().exp()
                * (beta * PI).sin().powi(2)
                / (PI * PI);
            assert!((cc.c0 * cc.c0_prime - expect).norm() < 1e-12 * expect.norm());
        }
    }

    #[test]
    fn c_constants_quarter_beta() {
        // beta = 1/4, tau = 1: c0 = Gamma(1/2) sin(pi/4)/pi
        let f = wiener_hopf(&TauSpec::one()).unwrap();
        let cc = c_constants(c(0.25, 0.0), &f).unwrap();
        let expect = PI.sqrt() * (PI / 4.0).sin() / PI;
        assert!((cc.c0 - c(expect, 0.0)).norm() < 1e-13);
        // beta -> 0: c0 -> 0 through the sin factor
        let cc = c_constants(c(1e-9, 0.0), &f).unwrap();
        assert!(cc.c0.norm() < 1e-8);
    }

    #[test]
    fn u_asymptotics_ratios_approach_one() {
        let spec = SymbolSpec::pure_jump(c(0.2, 0.0));
        let rep = check_u_asymptotics(&spec, &[25, 50, 100, 200]).unwrap();
        let mut prev_u = f64::INFINITY;
        for row in &rep.rows {
            let du = (row.u_ratio - Complex64::ONE).norm();
            let dv = (row.v_ratio - Complex64::ONE).norm();
            assert!(du < prev_u + 1e-12, "u deviation not improving at n={}", row.n);
            assert!(dv < 0.25, "v deviation too large at n={}: {dv}", row.n);
            prev_u = du;
        }
        let last = rep.rows.last().unwrap();
        assert!((last.u_ratio - Complex64::ONE).norm() < 0.05);
        assert!((last.v_ratio - Complex64::ONE).norm() < 0.05);
    }

    #[test]
    fn vu_entry_beta_zero_vanishes() {
        let spec = SymbolSpec::new(Complex64::ZERO, TauSpec::one());
        let e = vu_entry(&spec, 0, 0, 20, 100).unwrap();
        assert!(e.value.norm() < 1e-12);
    }

    #[test]
    fn vu_entry_leading_order() {
        // frozen oracle (4000-term sum of exact coefficients, mpmath):
        // (VU)_{0,0} at n=20, beta=0.2 is -0.0022443706; n * entry tends to
        // -c0 c0' (the sign from the v side)
        let beta = c(0.2, 0.0);
        let spec = SymbolSpec::pure_jump(beta);
        let n = 20;
        let e = vu_entry(&spec, 0, 0, n, 4000).unwrap();
        assert!((e.value - c(-0.002_244_370_6, 0.0)).norm() < 2e-8, "value {}", e.value);
        let f = wiener_hopf(&TauSpec::one()).unwrap();
        let cc = c_constants(beta, &f).unwrap();
        let lead = -(cc.c0 * cc.c0_prime);
        let scaled = e.value * n as f64;
        assert!((scaled - lead).norm() < 0.06 * lead.norm(), "scaled {scaled} lead {lead}");
        assert!(e.tail_bound < 2e-4);
    }

    #[test]
    fn vu_entry_decay_in_n() {
        let beta = c(0.2, 0.0);
        let spec = SymbolSpec::pure_jump(beta);
        let f = wiener_hopf(&TauSpec::one()).unwrap();
        let cc = c_constants(beta, &f).unwrap();
        let lead = -(cc.c0 * cc.c0_prime);
        let mut prev = f64::INFINITY;
        for &n in &[10_i64, 20, 40, 80] {
            // truncation scaled with n so the dropped tail stays subleading
            let e = vu_entry(&spec, 0, 0, n, 250 * n as usize).unwrap();
            let dev = (e.value * n as f64 - lead).norm() / lead.norm();
            assert!(dev < prev + 1e-12, "n={n} dev={dev}");
            prev = dev;
        }
        assert!(prev < 0.02, "final deviation {prev}");
    }

    #[test]
    fn kernel_closed_form_points() {
        assert!(kernel_hat_closed(Complex64::ZERO, 0.7).norm() < 1e-15);
        // xi = 0, beta real -> -tan^2(pi beta)
        let b = 0.2;
        let v = kernel_hat_closed(c(b, 0.0), 0.0);
        assert!((v.re + (PI * b).tan().powi(2)).abs() < 1e-13);
        assert!(kernel_hat_closed(c(0.2, 0.0), 8.0).norm() < 1e-9);
    }

    #[test]
    fn kernel_x_matches_hyperbolic_form() {
        // independent reduction of the double integral:
        // k(x) = C sinh(beta x)/(2 beta sinh(x/2))
        for &beta in &[c(0.2, 0.0), c(0.0, 0.3)] {
            let pref = kernel_prefactor(beta).unwrap();
            for &x in &[0.4_f64, -1.3, 3.7, 11.0, -24.0] {
                let k = kernel_x(beta, x).unwrap();
                let closed = pref * (beta * x).sinh() / (beta * 2.0 * (x / 2.0).sinh());
                assert!(
                    (k - closed).norm() < 1e-7 * closed.norm().max(1e-12),
                    "beta={beta} x={x}: {k} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn kernel_numeric_matches_closed_on_grid() {
        let xi: Vec<f64> = (-6..=6).map(|i| i as f64 * 0.5).collect();
        for &beta in &[c(0.2, 0.0), c(0.0, 0.3)] {
            let num = kernel_hat_numeric(beta, &xi).unwrap();
            let mut worst: f64 = 0.0;
            for (x, v) in xi.iter().zip(&num.values) {
                worst = worst.max((v - kernel_hat_closed(beta, *x)).norm());
            }
            assert!(worst < 1e-4, "beta={beta} worst deviation {worst}");
            // even in xi, and real
            let a = num.values[1];
            let b = num.values[num.values.len() - 2];
            assert!((a - b).norm() < 1e-6);
            assert!(a.im.abs() < 1e-6);
        }
    }

    #[test]
    fn e_tau_invariant_under_inversion() {
        // the defining sum is symmetric in k <-> -k
        let tau = tau_exp(&[(1, c(0.4, 0.1)), (-2, c(0.2, -0.05))]);
        let inv = tau_exp(&[(-1, c(0.4, 0.1)), (2, c(0.2, -0.05))]);
        let a = szego_constant(&tau).unwrap();
        let b = szego_constant(&inv).unwrap();
        assert!((a.value() - b.value()).norm() < 1e-12);
    }
}

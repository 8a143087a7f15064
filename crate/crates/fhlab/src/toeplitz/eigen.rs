//! Dense complex eigensolver: balancing, Householder reduction to upper
//! Hessenberg form, and implicit single-shift QR with Wilkinson shifts
//! (eigenvalues only).
//!
//! Exactly triangular inputs short-circuit to the diagonal: the nilpotent
//! counterexample `sigma = -z` must report eigenvalues that are exactly
//! zero, which no iterative path can do (a Jordan block of size m perturbs
//! like eps^(1/m)).

use num_complex::Complex64;

use super::{logdet_lu, ToeplitzMatrix};
use crate::error::{Error, Result};

/// Eigenvalues with consistency diagnostics.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    /// n+1 eigenvalues, counted with multiplicity (unsorted).
    pub eigenvalues: Vec<Complex64>,
    /// number of eigenvalues whose QR iteration hit the 30-sweep cap
    /// (their trailing-diagonal estimates are still included)
    pub unconverged: usize,
    /// `|sum lambda - tr| / (1 + |tr|)`
    pub trace_residual: f64,
    /// relative log-domain gap between `prod lambda` and the LU determinant,
    /// populated when no eigenvalue modulus is below 1e-12
    pub logdet_residual: Option<f64>,
    pub min_abs_eigenvalue: f64,
}

impl SpectrumReport {
    pub fn converged(&self) -> bool {
        self.unconverged == 0
    }
}

/// Eigenvalues of `T_n[sigma]`, n+1 <= 1024.
pub fn eigenvalues(m: &ToeplitzMatrix) -> Result<SpectrumReport> {
    let size = m.size();
    if size > 1024 {
        return Err(Error::InvalidArgument(format!(
            "eigensolver capped at 1024, got {size}"
        )));
    }

    let n = m.order() as i64;
    let upper_zero = (1..=n).all(|k| m.generator(-k) == Complex64::ZERO);
    let lower_zero = (1..=n).all(|k| m.generator(k) == Complex64::ZERO);
    let (eigs, unconverged) = if upper_zero || lower_zero {
        // exactly triangular: eigenvalues are the diagonal
        (vec![m.generator(0); size], 0)
    } else {
        let mut a = m.to_dense();
        balance(&mut a, size);
        hessenberg(&mut a, size);
        hessenberg_qr(&mut a, size)
    };

    let trace = m.generator(0) * size as f64;
    let sum: Complex64 = eigs.iter().sum();
    let trace_residual = (sum - trace).norm() / (1.0 + trace.norm());

    let min_abs_eigenvalue = eigs.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let logdet_residual = if min_abs_eigenvalue > 1e-12 {
        let lu = logdet_lu(m);
        if lu.is_zero() {
            None
        } else {
            let log_prod: f64 = eigs.iter().map(|z| z.norm().ln()).sum();
            Some((log_prod - lu.log_abs).abs() / lu.log_abs.abs().max(1.0))
        }
    } else {
        None
    };

    Ok(SpectrumReport {
        eigenvalues: eigs,
        unconverged,
        trace_residual,
        logdet_residual,
        min_abs_eigenvalue,
    })
}

// iterative radix-2 similarity scaling (no permutation phase)
fn balance(a: &mut [Complex64], n: usize) {
    const RADIX: f64 = 2.0;
    const B2: f64 = 4.0;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j * n + i].norm();
                    r += a[i * n + j].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut cc = c;
            let mut g = r / RADIX;
            while cc < g {
                f *= RADIX;
                cc *= B2;
            }
            g = r * RADIX;
            while cc >= g {
                f /= RADIX;
                cc /= B2;
            }
            if (cc + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[i * n + j] *= inv;
                }
                for j in 0..n {
                    a[j * n + i] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

// Householder reduction to upper Hessenberg form (in place)
fn hessenberg(a: &mut [Complex64], n: usize) {
    for k in 0..n.saturating_sub(2) {
        let mut norm2 = 0.0;
        for i in k + 1..n {
            norm2 += a[i * n + k].norm_sqr();
        }
        let x0 = a[(k + 1) * n + k];
        let norm = norm2.sqrt();
        if norm <= 1e-300 || (norm2 - x0.norm_sqr()).sqrt() < 1e-300 {
            continue;
        }
        let phase = if x0 == Complex64::ZERO { Complex64::ONE } else { x0 / x0.norm() };
        let alpha = -phase * norm;

        // v = x - alpha e1
        let mut v = vec![Complex64::ZERO; n - k - 1];
        for (idx, vi) in v.iter_mut().enumerate() {
            *vi = a[(k + 1 + idx) * n + k];
        }
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 <= 1e-300 {
            continue;
        }
        let scale = 2.0 / vnorm2;

        // A <- P A, rows k+1.. (P = I - scale v v^H)
        for j in k..n {
            let mut dot = Complex64::ZERO;
            for (idx, vi) in v.iter().enumerate() {
                dot += vi.conj() * a[(k + 1 + idx) * n + j];
            }
            dot *= scale;
            for (idx, vi) in v.iter().enumerate() {
                let t = dot * vi;
                a[(k + 1 + idx) * n + j] -= t;
            }
        }
        // A <- A P, cols k+1..
        for i in 0..n {
            let mut dot = Complex64::ZERO;
            for (idx, vi) in v.iter().enumerate() {
                dot += a[i * n + (k + 1 + idx)] * vi;
            }
            dot *= scale;
            for (idx, vi) in v.iter().enumerate() {
                let t = dot * vi.conj();
                a[i * n + (k + 1 + idx)] -= t;
            }
        }

        a[(k + 1) * n + k] = alpha;
        for i in k + 2..n {
            a[i * n + k] = Complex64::ZERO;
        }
    }
}

fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    if b == Complex64::ZERO {
        return (1.0, Complex64::ZERO);
    }
    if a == Complex64::ZERO {
        return (0.0, b.conj() / b.norm());
    }
    let t = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let c = a.norm() / t;
    let s = (a / a.norm()) * b.conj() / t;
    (c, s)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let t = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let root = disc.sqrt();
    let l1 = t + root;
    let l2 = t - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

// implicit single-shift QR on an upper Hessenberg matrix; returns the
// eigenvalues and the count that hit the per-eigenvalue iteration cap
fn hessenberg_qr(h: &mut [Complex64], n: usize) -> (Vec<Complex64>, usize) {
    let at = |h: &[Complex64], i: usize, j: usize| h[i * n + j];
    let mut eigs = vec![Complex64::ZERO; n];
    let mut unconverged = 0usize;
    if n == 0 {
        return (eigs, unconverged);
    }
    let hnorm: f64 = h.iter().map(|z| z.norm()).sum::<f64>() / n as f64;

    let mut hi = n - 1;
    let mut iter = 0usize;
    loop {
        // find the active block [l ..= hi]
        let mut l = hi;
        while l > 0 {
            let mut s = at(h, l - 1, l - 1).norm() + at(h, l, l).norm();
            if s == 0.0 {
                s = hnorm;
            }
            if at(h, l, l - 1).norm() <= f64::EPSILON * s {
                h[l * n + (l - 1)] = Complex64::ZERO;
                break;
            }
            l -= 1;
        }

        if l == hi {
            eigs[hi] = at(h, hi, hi);
            if hi == 0 {
                break;
            }
            hi -= 1;
            iter = 0;
            continue;
        }
        if l + 1 == hi {
            // solve the trailing 2x2 directly
            let (a, b) = (at(h, l, l), at(h, l, l + 1));
            let (c, d) = (at(h, l + 1, l), at(h, l + 1, l + 1));
            let t = (a + d) * 0.5;
            let root = (((a - d) * 0.5).powi(2) + b * c).sqrt();
            eigs[hi] = t + root;
            eigs[hi - 1] = t - root;
            if hi == 1 {
                break;
            }
            hi -= 2;
            iter = 0;
            continue;
        }

        if iter >= 30 {
            // give up on this eigenvalue: record the current estimate
            unconverged += 1;
            eigs[hi] = at(h, hi, hi);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;

        let mu = if iter % 10 == 0 {
            // exceptional shift to break cycles
            let t1 = at(h, hi, hi - 1).norm();
            let t2 = if hi >= 2 { at(h, hi - 1, hi - 2).norm() } else { 0.0 };
            at(h, hi, hi) + Complex64::new(0.73 * t1 + 0.27 * t2, 0.41 * t1)
        } else {
            wilkinson_shift(at(h, hi - 1, hi - 1), at(h, hi - 1, hi), at(h, hi, hi - 1), at(h, hi, hi))
        };

        for i in l..=hi {
            h[i * n + i] -= mu;
        }

        // forward pass: zero the subdiagonal with Givens rotations
        let mut rots = Vec::with_capacity(hi - l);
        for i in l..hi {
            let (c, s) = givens(at(h, i, i), at(h, i + 1, i));
            for j in i..=hi {
                let x = h[i * n + j];
                let y = h[(i + 1) * n + j];
                h[i * n + j] = c * x + s * y;
                h[(i + 1) * n + j] = -s.conj() * x + c * y;
            }
            rots.push((c, s));
        }
        // back pass: multiply by the adjoints on the right
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let i = l + idx;
            let row_hi = (i + 2).min(hi);
            for r in l..=row_hi {
                let x = h[r * n + i];
                let y = h[r * n + i + 1];
                h[r * n + i] = c * x + s.conj() * y;
                h[r * n + i + 1] = -s * x + c * y;
            }
        }

        for i in l..=hi {
            h[i * n + i] += mu;
        }
    }
    (eigs, unconverged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{FourierSeries, LaurentPoly, SymbolSpec, TauSpec};
    use crate::toeplitz::build;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn nilpotent_counterexample_exact_zeros() {
        // sigma = -z: exactly nilpotent; all eigenvalues exactly 0
        let spec = SymbolSpec::new(Complex64::ONE, TauSpec::one());
        let m = build(&spec, 40).unwrap();
        let rep = eigenvalues(&m).unwrap();
        assert!(rep.converged());
        assert_eq!(rep.eigenvalues.len(), 41);
        for l in &rep.eigenvalues {
            assert!(l.norm() < 1e-10);
        }
    }

    #[test]
    fn tridiagonal_closed_form() {
        // sigma_hat(0) = 2, sigma_hat(+-1) = -1: eigenvalues 2 - 2cos(k pi/(n+2))
        let n = 40_usize;
        let gen = FourierSeries::new(
            -(n as i64),
            (-(n as i64)..=n as i64)
                .map(|k| match k {
                    0 => c(2.0, 0.0),
                    1 | -1 => c(-1.0, 0.0),
                    _ => Complex64::ZERO,
                })
                .collect(),
        );
        let m = ToeplitzMatrix::from_series(gen, n);
        let rep = eigenvalues(&m).unwrap();
        assert!(rep.converged());
        let mut got: Vec<f64> = rep.eigenvalues.iter().map(|z| z.re).collect();
        got.sort_by(f64::total_cmp);
        let mut expect: Vec<f64> = (1..=n + 1)
            .map(|k| 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 2.0)).cos())
            .collect();
        expect.sort_by(f64::total_cmp);
        for (g, e) in got.iter().zip(&expect) {
            assert!((g - e).abs() < 1e-8, "eig {g} vs {e}");
        }
        for l in &rep.eigenvalues {
            assert!(l.im.abs() < 1e-8);
        }
        assert!(rep.trace_residual < 1e-9);
        assert!(rep.logdet_residual.unwrap_or(1.0) < 1e-6);
    }

    #[test]
    fn diagonally_dominant_trace_identity() {
        // random-ish diagonally dominant Toeplitz
        let n = 24_usize;
        let coeffs: Vec<Complex64> = (-(n as i64)..=n as i64)
            .map(|k| {
                if k == 0 {
                    c(8.0, 1.5)
                } else {
                    let t = k as f64;
                    c((t * 0.7).sin(), (t * 1.3).cos()) / (t.abs() + 1.0).powi(2)
                }
            })
            .collect();
        let m = ToeplitzMatrix::from_series(FourierSeries::new(-(n as i64), coeffs), n);
        let rep = eigenvalues(&m).unwrap();
        assert!(rep.converged());
        assert!(rep.trace_residual < 1e-9, "trace residual {}", rep.trace_residual);
        assert!(rep.logdet_residual.unwrap() < 1e-6);
    }

    #[test]
    fn jump_symbol_moduli_bounded_by_symbol_sup() {
        // eigenvalue moduli bounded by sup |sigma| (+ tolerance)
        let spec = SymbolSpec::pure_jump(c(0.3, 0.0));
        let m = build(&spec, 48).unwrap();
        let rep = eigenvalues(&m).unwrap();
        assert!(rep.converged());
        // |sigma| = 1 for real beta
        for l in &rep.eigenvalues {
            assert!(l.norm() <= 1.0 + 1e-6, "eigenvalue {l} outside the symbol bound");
        }
    }

    #[test]
    fn size_guard() {
        let spec = SymbolSpec::pure_jump(c(0.3, 0.0));
        let m = build(&spec, 1024).unwrap();
        assert!(eigenvalues(&m).is_err());
    }

    #[test]
    fn full_symbol_spectrum_consistency() {
        let tau = TauSpec::ExpLaurent(LaurentPoly::from_terms([
            (1, c(0.4, 0.0)),
            (-1, c(-0.25, 0.0)),
        ]));
        let spec = SymbolSpec::new(c(0.3, 0.2), tau);
        let m = build(&spec, 32).unwrap();
        let rep = eigenvalues(&m).unwrap();
        assert!(rep.converged());
        assert!(rep.trace_residual < 1e-8);
        if let Some(r) = rep.logdet_residual {
            assert!(r < 1e-6, "logdet residual {r}");
        }
    }
}

//! Finite Toeplitz matrices `T_n[sigma] = (sigma_hat(i-j))`, 0 <= i,j <= n:
//! dense LU log-determinants, an O(n^2) Levinson-type determinant recursion,
//! inverse corner blocks, FFT-accelerated power traces, and eigenvalues.
//!
//! Determinants are carried in log form end to end; `|D_n|` spans hundreds of
//! orders of magnitude across a sweep because of the `G[tau]^(n+1)` factor.

mod eigen;
mod levinson;

pub use eigen::{eigenvalues, SpectrumReport};
pub use levinson::{logdet_levinson, LevinsonOutcome};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{fft, ifft, LogComplex, LogDet};
use crate::symbols::{sigma_fourier, FourierSeries, SymbolSpec};

/// An (n+1) x (n+1) Toeplitz matrix held by its generating coefficients;
/// `entry(i, j) = sigma_hat(i - j)`. Dense form is materialized only by the
/// consumers that need it.
#[derive(Debug, Clone)]
pub struct ToeplitzMatrix {
    n: usize,
    gen: FourierSeries,
    /// absolute bound on the coefficient truncation error
    pub coeff_bound: f64,
}

impl ToeplitzMatrix {
    /// Build from the symbol's Fourier coefficients.
    pub fn from_spec(spec: &SymbolSpec, n: usize) -> Result<ToeplitzMatrix> {
        let (gen, coeff_bound) = sigma_fourier(spec, -(n as i64), n as i64)?;
        Ok(ToeplitzMatrix { n, gen, coeff_bound })
    }

    /// Build directly from a coefficient table covering `[-n, n]`.
    pub fn from_series(gen: FourierSeries, n: usize) -> ToeplitzMatrix {
        ToeplitzMatrix { n, gen, coeff_bound: 0.0 }
    }

    /// Matrix dimension n+1.
    pub fn size(&self) -> usize {
        self.n + 1
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn generator(&self, k: i64) -> Complex64 {
        self.gen.get(k)
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.gen.get(i as i64 - j as i64)
    }

    /// Row-major dense form.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let s = self.size();
        let mut out = Vec::with_capacity(s * s);
        for i in 0..s {
            for j in 0..s {
                out.push(self.gen.get(i as i64 - j as i64));
            }
        }
        out
    }

    /// The matrix for the reflected symbol `sigma(1/z)` (index-reversed
    /// generator); equals the transpose.
    pub fn reflected(&self) -> ToeplitzMatrix {
        let lo = -(self.n as i64);
        let hi = self.n as i64;
        let coeffs = (lo..=hi).map(|k| self.gen.get(-k)).collect();
        ToeplitzMatrix { n: self.n, gen: FourierSeries::new(lo, coeffs), coeff_bound: self.coeff_bound }
    }
}

/// Build `T_n[sigma]` from a symbol.
pub fn build(spec: &SymbolSpec, n: usize) -> Result<ToeplitzMatrix> {
    ToeplitzMatrix::from_spec(spec, n)
}

/// LU factorization with partial pivoting of a dense complex matrix,
/// retained for reuse (determinant plus several solves).
pub struct LuFactors {
    size: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
    logdet: LogDet,
    singular_at: Option<usize>,
}

impl LuFactors {
    pub fn new(mut a: Vec<Complex64>, size: usize) -> LuFactors {
        assert_eq!(a.len(), size * size);
        let mut perm = Vec::with_capacity(size);
        let mut log_abs = 0.0;
        let mut arg = 0.0;
        let mut singular_at = None;

        for k in 0..size {
            // pivot search in column k
            let mut piv = k;
            let mut best = a[k * size + k].norm();
            for i in k + 1..size {
                let v = a[i * size + k].norm();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            perm.push(piv);
            if piv != k {
                for j in 0..size {
                    a.swap(k * size + j, piv * size + j);
                }
                arg += std::f64::consts::PI; // row swap flips the sign
            }
            let pivot = a[k * size + k];
            if pivot.norm() < 1e-300 {
                singular_at = singular_at.or(Some(k));
                log_abs = f64::NEG_INFINITY;
                continue;
            }
            log_abs += pivot.norm().ln();
            arg += pivot.arg();
            for i in k + 1..size {
                let m = a[i * size + k] / pivot;
                a[i * size + k] = m;
                if m != Complex64::ZERO {
                    for j in k + 1..size {
                        let t = m * a[k * size + j];
                        a[i * size + j] -= t;
                    }
                }
            }
        }

        let logdet = if singular_at.is_some() {
            LogComplex::ZERO
        } else {
            LogComplex::new(log_abs, arg)
        };
        LuFactors { size, lu: a, perm, logdet, singular_at }
    }

    pub fn logdet(&self) -> LogDet {
        self.logdet
    }

    pub fn is_singular(&self) -> bool {
        self.singular_at.is_some()
    }

    /// Solve `A x = b` from the stored factors.
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        if let Some(k) = self.singular_at {
            return Err(Error::SingularMatrix(k));
        }
        let s = self.size;
        let mut x = b.to_vec();
        for k in 0..s {
            x.swap(k, self.perm[k]);
            let xk = x[k];
            if xk != Complex64::ZERO {
                for i in k + 1..s {
                    let t = self.lu[i * s + k] * xk;
                    x[i] -= t;
                }
            }
        }
        for k in (0..s).rev() {
            let mut acc = x[k];
            for j in k + 1..s {
                acc -= self.lu[k * s + j] * x[j];
            }
            x[k] = acc / self.lu[k * s + k];
        }
        Ok(x)
    }
}

/// Log-determinant by dense LU with partial pivoting. A pivot below 1e-300
/// in modulus yields the exact-zero flag (`LogComplex::ZERO`).
pub fn logdet_lu(m: &ToeplitzMatrix) -> LogDet {
    LuFactors::new(m.to_dense(), m.size()).logdet()
}

/// The p x p corner block of the inverse: `x_{i,j} = (T_n^{-1})_{n-p+i+1, j}`
/// for 0 <= i, j < p.
#[derive(Debug, Clone)]
pub struct CornerBlock {
    pub p: usize,
    /// row-major p x p entries
    pub entries: Vec<Complex64>,
}

impl CornerBlock {
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.p + j]
    }

    /// det X by dense elimination on the tiny block.
    pub fn det_log(&self) -> LogDet {
        LuFactors::new(self.entries.clone(), self.p).logdet()
    }
}

/// Solve the p right-hand sides `T_n x = e_j` (j = 0..p-1) with one LU
/// factorization and read off rows n-p+1..n.
pub fn inverse_corner(spec: &SymbolSpec, n: usize, p: usize) -> Result<CornerBlock> {
    if p < 1 || p > n {
        return Err(Error::InvalidArgument(format!("corner block needs 1 <= p <= n, got p={p}, n={n}")));
    }
    let m = build(spec, n)?;
    corner_from_lu(&LuFactors::new(m.to_dense(), m.size()), n, p)
}

pub(crate) fn corner_from_lu(lu: &LuFactors, n: usize, p: usize) -> Result<CornerBlock> {
    let size = n + 1;
    let mut entries = vec![Complex64::ZERO; p * p];
    for j in 0..p {
        let mut e = vec![Complex64::ZERO; size];
        e[j] = Complex64::ONE;
        let x = lu.solve(&e)?;
        for i in 0..p {
            entries[i * p + j] = x[n - p + i + 1];
        }
    }
    Ok(CornerBlock { p, entries })
}

/// `tr(T_n^m) / (n+1)` with FFT-accelerated Toeplitz matvecs (circulant
/// embedding), O(m n^2 log n) overall.
pub fn trace_power(spec: &SymbolSpec, n: usize, m: u32) -> Result<Complex64> {
    if m == 0 {
        return Err(Error::InvalidArgument("trace_power needs m >= 1".into()));
    }
    let t = build(spec, n)?;
    let size = n + 1;
    if m == 1 {
        return Ok(t.generator(0)); // constant diagonal
    }

    let matvec = ToeplitzMatvec::new(&t);
    let mut trace = Complex64::ZERO;
    for i in 0..size {
        let mut v = vec![Complex64::ZERO; size];
        v[i] = Complex64::ONE;
        for _ in 0..m {
            v = matvec.apply(&v);
        }
        trace += v[i];
    }
    Ok(trace / size as f64)
}

/// Circulant-embedded Toeplitz matvec: one forward FFT of the embedded
/// generator, then two FFTs per product.
pub struct ToeplitzMatvec {
    size: usize,
    nfft: usize,
    gen_fft: Vec<Complex64>,
}

impl ToeplitzMatvec {
    pub fn new(t: &ToeplitzMatrix) -> ToeplitzMatvec {
        let size = t.size();
        let nfft = (2 * size).next_power_of_two();
        let mut col = vec![Complex64::ZERO; nfft];
        for k in 0..size {
            col[k] = t.generator(k as i64);
        }
        for k in 1..size {
            col[nfft - k] = t.generator(-(k as i64));
        }
        let gen_fft = fft(&col).expect("power-of-two embedding");
        ToeplitzMatvec { size, nfft, gen_fft }
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut buf = vec![Complex64::ZERO; self.nfft];
        buf[..self.size].copy_from_slice(x);
        let mut xf = fft(&buf).expect("power-of-two");
        for (a, b) in xf.iter_mut().zip(&self.gen_fft) {
            *a *= b;
        }
        let y = ifft(&xf).expect("power-of-two");
        y[..self.size].to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{LaurentPoly, TauSpec};
    use crate::numerics::phase_distance;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pure_jump(beta: f64) -> SymbolSpec {
        SymbolSpec::pure_jump(c(beta, 0.0))
    }

    #[test]
    fn build_basics() {
        let m = build(&pure_jump(0.3), 0).unwrap();
        assert_eq!(m.size(), 1);
        assert!((m.entry(0, 0) - crate::symbols::jump_fourier(c(0.3, 0.0), 0).unwrap()).norm() < 1e-14);

        // sigma = -z: -1 on the first subdiagonal
        let spec = SymbolSpec::new(Complex64::ONE, TauSpec::one());
        let m = build(&spec, 3).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j + 1 { c(-1.0, 0.0) } else { Complex64::ZERO };
                assert_eq!(m.entry(i, j), expect);
            }
        }
    }

    #[test]
    fn reflected_is_transpose() {
        let m = build(&pure_jump(0.3), 5).unwrap();
        let r = m.reflected();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(r.entry(i, j), m.entry(j, i));
            }
        }
        // transpose law for the determinant
        let a = logdet_lu(&m);
        let b = logdet_lu(&r);
        assert!((a.log_abs - b.log_abs).abs() < 1e-9 * (1.0 + a.log_abs.abs()));
        assert!(phase_distance(a.arg, b.arg) < 1e-9);
    }

    #[test]
    fn logdet_lu_identity_and_nilpotent() {
        let spec = SymbolSpec::new(Complex64::ZERO, TauSpec::one());
        let m = build(&spec, 7).unwrap();
        let d = logdet_lu(&m);
        assert!(d.log_abs.abs() < 1e-13);
        assert!(d.arg.abs() < 1e-13);

        // sigma = -z: lower triangular with zero diagonal, exactly singular
        let spec = SymbolSpec::new(Complex64::ONE, TauSpec::one());
        let m = build(&spec, 5).unwrap();
        assert!(logdet_lu(&m).is_zero());
    }

    #[test]
    fn lu_solve_roundtrip() {
        let m = build(&pure_jump(0.3), 12).unwrap();
        let lu = LuFactors::new(m.to_dense(), m.size());
        let b: Vec<Complex64> = (0..13).map(|i| c(1.0 + i as f64, -0.5 * i as f64)).collect();
        let x = lu.solve(&b).unwrap();
        // residual
        for i in 0..13 {
            let mut acc = Complex64::ZERO;
            for j in 0..13 {
                acc += m.entry(i, j) * x[j];
            }
            assert!((acc - b[i]).norm() < 1e-10);
        }
    }

    #[test]
    fn corner_identity_symbol_vanishes() {
        // sigma = 1 -> T = I, x_{i,j} = delta_{n-p+i+1, j} = 0 for p <= n
        let spec = SymbolSpec::new(Complex64::ZERO, TauSpec::one());
        let cb = inverse_corner(&spec, 6, 2).unwrap();
        for e in &cb.entries {
            assert!(e.norm() < 1e-14);
        }
    }

    #[test]
    fn corner_p1_matches_cofactor() {
        // x_{0,0} = (T^{-1})_{n,0} = (-1)^n minor(0,n) / det
        let spec = pure_jump(0.3);
        let n = 5;
        let m = build(&spec, n).unwrap();
        let cb = inverse_corner(&spec, n, 1).unwrap();

        // minor: delete row 0 and column n
        let s = n + 1;
        let mut sub = Vec::new();
        for i in 1..s {
            for j in 0..s - 1 {
                sub.push(m.entry(i, j));
            }
        }
        let minor = LuFactors::new(sub, s - 1).logdet();
        let det = logdet_lu(&m);
        // (T^{-1})_{n,0} = cofactor_{0,n} / det = (-1)^n minor / det
        let expect = minor.value() / det.value() * if n % 2 == 0 { 1.0 } else { -1.0 };
        assert!((cb.entry(0, 0) - expect).norm() < 1e-10 * expect.norm().max(1.0));
    }

    #[test]
    fn trace_power_cases() {
        let spec = pure_jump(0.3);
        // m = 1: sigma_hat(0)
        let t1 = trace_power(&spec, 16, 1).unwrap();
        assert!((t1 - crate::symbols::jump_fourier(c(0.3, 0.0), 0).unwrap()).norm() < 1e-13);

        // sigma = -z is nilpotent: all power traces vanish
        let nil = SymbolSpec::new(Complex64::ONE, TauSpec::one());
        for m in 1..=4 {
            assert!(trace_power(&nil, 12, m).unwrap().norm() < 1e-12);
        }

        // m = 2 against the dense computation at n = 64
        let n = 64;
        let t2 = trace_power(&spec, n, 2).unwrap();
        let m = build(&spec, n).unwrap();
        let dense = m.to_dense();
        let s = n + 1;
        let mut tr = Complex64::ZERO;
        for i in 0..s {
            for k in 0..s {
                tr += dense[i * s + k] * dense[k * s + i];
            }
        }
        assert!((t2 - tr / s as f64).norm() < 1e-10, "{t2} vs {}", tr / s as f64);
    }

    #[test]
    fn levinson_matches_lu_small() {
        let tau = TauSpec::ExpLaurent(LaurentPoly::from_terms([
            (1, c(0.4, 0.0)),
            (-1, c(-0.25, 0.0)),
        ]));
        let spec = SymbolSpec::new(c(0.3, 0.2), tau);
        let out = logdet_levinson(&spec, 40).unwrap();
        assert!(out.breakdown.is_none());
        for &n in &[0usize, 1, 7, 24, 40] {
            let lu = logdet_lu(&build(&spec, n).unwrap());
            let lev = out.logdets[n];
            assert!(
                (lu.log_abs - lev.log_abs).abs() < 1e-9 * (1.0 + lu.log_abs.abs()),
                "n={n}: {} vs {}",
                lu.log_abs,
                lev.log_abs
            );
            assert!(phase_distance(lu.arg, lev.arg) < 1e-8, "n={n} args");
        }
    }

    #[test]
    fn levinson_two_factor_closed_form() {
        // D_k = (1 - 0.15^(k+2))/0.85
        let tau = TauSpec::Laurent(LaurentPoly::from_terms([
            (0, c(1.15, 0.0)),
            (1, c(-0.5, 0.0)),
            (-1, c(-0.3, 0.0)),
        ]));
        let spec = SymbolSpec::new(Complex64::ZERO, tau);
        let out = logdet_levinson(&spec, 64).unwrap();
        for k in 0..=64usize {
            let expect = (1.0 - 0.15_f64.powi(k as i32 + 2)) / 0.85;
            let got = out.logdets[k];
            assert!((got.log_abs - expect.ln()).abs() < 1e-12, "k={k}");
            assert!(phase_distance(got.arg, 0.0) < 1e-12);
        }
        // |D_64 * 0.85 - 1| below 1e-12
        let d64 = out.logdets[64].value().re;
        assert!((d64 * 0.85 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn levinson_identity_symbol() {
        let spec = SymbolSpec::new(Complex64::ZERO, TauSpec::one());
        let out = logdet_levinson(&spec, 16).unwrap();
        for d in &out.logdets {
            assert!(d.log_abs.abs() < 1e-13 && d.arg.abs() < 1e-13);
        }
    }

    #[test]
    fn levinson_breakdown_reported() {
        // sigma = -z: c0 = 0, the very first minor vanishes
        let spec = SymbolSpec::new(Complex64::ONE, TauSpec::one());
        let out = logdet_levinson(&spec, 8).unwrap();
        assert_eq!(out.breakdown, Some(0));
        assert!(out.logdets.is_empty());
    }
}

//! Symbols `sigma(z) = (-z)^beta * tau(z)` on the unit circle: exact Fourier
//! coefficients, pointwise evaluation under the principal branch, range
//! curves, winding numbers, and class-membership checks.
//!
//! Branch convention: `z^beta = exp(beta (log|z| + i arg z))` with
//! `arg in [-pi, pi)`, so for `z = e^(i theta)`, `theta in (0, 2pi)`,
//! `(-z)^beta = e^(i beta (theta - pi))` and the jump sits at `z = 1`.
//! The jump position is fixed at `theta_1 = pi` throughout.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{adaptive_quad, fft, wrap_angle, TWO_PI};

const PI: f64 = std::f64::consts::PI;

/// Finite two-sided Laurent polynomial `sum_k c_k z^k`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Complex64>,
}

impl LaurentPoly {
    pub fn new() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Complex64)>>(terms: I) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in terms {
            *map.entry(k).or_insert(Complex64::ZERO) += c;
        }
        map.retain(|_, c| *c != Complex64::ZERO);
        LaurentPoly { terms: map }
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.terms.get(&k).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = *self.terms.keys().next()?;
        let hi = *self.terms.keys().last()?;
        Some((lo, hi))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms.iter().map(|(&k, &c)| c * z.powi(k as i32)).sum()
    }
}

/// The smooth factor `tau`, restricted to two closed-form families so that
/// log tau and the Szego constants are exact.
#[derive(Debug, Clone, PartialEq)]
pub enum TauSpec {
    /// `tau = exp(P)` with `P` a Laurent polynomial; automatically
    /// nonvanishing with winding number zero.
    ExpLaurent(LaurentPoly),
    /// `tau` itself a Laurent polynomial; must pass [`verify_class`].
    Laurent(LaurentPoly),
}

impl TauSpec {
    /// The constant function 1.
    pub fn one() -> Self {
        TauSpec::ExpLaurent(LaurentPoly::new())
    }

    pub fn is_one(&self) -> bool {
        match self {
            TauSpec::ExpLaurent(p) => p.is_empty(),
            TauSpec::Laurent(p) => p.num_terms() == 1 && p.coeff(0) == Complex64::ONE,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            TauSpec::ExpLaurent(p) => p.eval(z).exp(),
            TauSpec::Laurent(p) => p.eval(z),
        }
    }
}

/// A symbol `sigma(z) = (-z)^beta tau(z)` with the jump fixed at theta_1 = pi.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSpec {
    pub beta: Complex64,
    pub tau: TauSpec,
}

impl SymbolSpec {
    pub fn new(beta: Complex64, tau: TauSpec) -> Self {
        SymbolSpec { beta, tau }
    }

    /// Pure jump `(-z)^beta`.
    pub fn pure_jump(beta: Complex64) -> Self {
        SymbolSpec { beta, tau: TauSpec::one() }
    }

    pub fn beta_is_integer(&self) -> bool {
        self.beta.im == 0.0 && self.beta.re == self.beta.re.round()
    }

    /// Same smooth part with the jump exponent shifted by an integer,
    /// representing `(-z)^p sigma(z)` exactly within the family.
    pub fn shift_beta(&self, p: i64) -> SymbolSpec {
        SymbolSpec { beta: self.beta + p as f64, tau: self.tau.clone() }
    }
}

/// Two-sided Fourier coefficient table; `coeffs[i]` is the coefficient of
/// index `offset + i`. Normalization: `g_hat(k) = (1/2pi) int g(e^(i theta)) e^(-ik theta) d theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    pub offset: i64,
    pub coeffs: Vec<Complex64>,
}

impl FourierSeries {
    pub fn new(offset: i64, coeffs: Vec<Complex64>) -> Self {
        FourierSeries { offset, coeffs }
    }

    pub fn zero_on(lo: i64, hi: i64) -> Self {
        FourierSeries { offset: lo, coeffs: vec![Complex64::ZERO; (hi - lo + 1).max(0) as usize] }
    }

    pub fn get(&self, k: i64) -> Complex64 {
        let i = k - self.offset;
        if i < 0 || i as usize >= self.coeffs.len() {
            Complex64::ZERO
        } else {
            self.coeffs[i as usize]
        }
    }

    pub fn set(&mut self, k: i64, v: Complex64) {
        let i = (k - self.offset) as usize;
        self.coeffs[i] = v;
    }

    pub fn lo(&self) -> i64 {
        self.offset
    }

    pub fn hi(&self) -> i64 {
        self.offset + self.coeffs.len() as i64 - 1
    }

    pub fn enumerate(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().enumerate().map(|(i, &c)| (self.offset + i as i64, c))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// k-th Fourier coefficient of the pure jump `(-z)^beta`:
/// `sin(pi beta) / (pi (beta - k))`, from direct integration of
/// `e^(i beta (theta - pi))` under the branch convention. Decays like 1/|k|.
pub fn jump_fourier(beta: Complex64, k: i64) -> Result<Complex64> {
    if beta.im == 0.0 && beta.re == beta.re.round() {
        return Err(Error::IntegerBeta(beta.re));
    }
    Ok((beta * PI).sin() / (PI * (beta - k as f64)))
}

/// Fourier coefficients of `tau` over `[k_lo, k_hi]`. The exp_laurent family
/// is sampled on a circle grid and FFT'd, doubling the grid until the
/// coefficients are stable to 1e-14 of the largest; the laurent family is
/// read off directly.
pub fn tau_fourier(tau: &TauSpec, k_lo: i64, k_hi: i64) -> FourierSeries {
    match tau {
        TauSpec::Laurent(p) => {
            let mut out = FourierSeries::zero_on(k_lo, k_hi);
            for (k, c) in p.terms() {
                if k >= k_lo && k <= k_hi {
                    out.set(k, c);
                }
            }
            out
        }
        TauSpec::ExpLaurent(p) => sample_fourier(&|z| p.eval(z).exp(), k_lo, k_hi),
    }
}

/// FFT-based Fourier coefficients of a smooth circle function, with grid
/// doubling until aliasing is below 1e-14 relative.
pub(crate) fn sample_fourier(
    g: &dyn Fn(Complex64) -> Complex64,
    k_lo: i64,
    k_hi: i64,
) -> FourierSeries {
    let span = 2 * k_lo.unsigned_abs().max(k_hi.unsigned_abs()).max(8) as usize;
    let mut n = (4 * span).next_power_of_two();
    let mut prev: Option<Vec<Complex64>> = None;
    loop {
        let samples: Vec<Complex64> = (0..n)
            .map(|m| g(Complex64::from_polar(1.0, TWO_PI * m as f64 / n as f64)))
            .collect();
        let spec = fft(&samples).expect("power-of-two grid");
        let coeffs: Vec<Complex64> = (k_lo..=k_hi)
            .map(|k| spec[k.rem_euclid(n as i64) as usize] / n as f64)
            .collect();
        let scale = coeffs.iter().map(|c| c.norm()).fold(1e-300, f64::max);
        if let Some(p) = &prev {
            let diff = p.iter().zip(&coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            if diff < 1e-14 * scale || n >= 1 << 22 {
                return FourierSeries::new(k_lo, coeffs);
            }
        }
        prev = Some(coeffs);
        n *= 2;
    }
}

// tau coefficients over a range wide enough that everything outside is below
// 1e-16 of the peak (the sigma convolution truncation threshold).
pub(crate) fn tau_fourier_auto(tau: &TauSpec) -> FourierSeries {
    if let TauSpec::Laurent(p) = tau {
        let (lo, hi) = p.support().unwrap_or((0, 0));
        return tau_fourier(tau, lo, hi);
    }
    let mut half = 16_i64;
    loop {
        let f = tau_fourier(tau, -half, half);
        let peak = f.max_abs();
        let edge = f.get(-half).norm().max(f.get(half).norm());
        if edge < 1e-16 * peak || half >= 1 << 14 {
            return f;
        }
        half *= 2;
    }
}

/// Fourier coefficients of the full symbol over `[k_lo, k_hi]`, by convolving
/// the closed-form jump coefficients with `tau_hat` (truncated below 1e-16
/// relative; the dropped mass is returned as an absolute error bound).
/// Integer beta (including 0) delegates to the shifted tau coefficients,
/// since `(-z)^m tau(z)` has `sigma_hat(k) = (-1)^m tau_hat(k-m)`.
pub fn sigma_fourier(spec: &SymbolSpec, k_lo: i64, k_hi: i64) -> Result<(FourierSeries, f64)> {
    if spec.beta_is_integer() {
        let m = spec.beta.re.round() as i64;
        let tau_hat = tau_fourier(&spec.tau, k_lo - m, k_hi - m);
        let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let coeffs = (k_lo..=k_hi).map(|k| tau_hat.get(k - m) * sign).collect();
        return Ok((FourierSeries::new(k_lo, coeffs), 0.0));
    }

    let tau_hat = tau_fourier_auto(&spec.tau);
    let peak = tau_hat.max_abs();
    let threshold = 1e-16 * peak;
    let kept: Vec<(i64, Complex64)> =
        tau_hat.enumerate().filter(|(_, c)| c.norm() >= threshold).collect();
    let dropped: f64 =
        tau_hat.enumerate().filter(|(_, c)| c.norm() < threshold).map(|(_, c)| c.norm()).sum();

    // |jump_hat(q)| <= |sin(pi beta)| / (pi dist(beta, Z))
    let dist_to_int = (spec.beta.re - spec.beta.re.round()).hypot(spec.beta.im);
    let jump_sup = (spec.beta * PI).sin().norm() / (PI * dist_to_int);
    let bound = dropped * jump_sup;

    let mut coeffs = Vec::with_capacity((k_hi - k_lo + 1) as usize);
    for k in k_lo..=k_hi {
        let mut s = Complex64::ZERO;
        for &(m, c) in &kept {
            s += c * jump_fourier(spec.beta, k - m)?;
        }
        coeffs.push(s);
    }
    Ok((FourierSeries::new(k_lo, coeffs), bound))
}

/// Evaluate the symbol at `e^(i theta)` for theta strictly inside (0, 2pi):
/// `(-e^(i theta))^beta tau(e^(i theta)) = e^(i beta (theta - pi)) tau(e^(i theta))`.
pub fn eval_symbol(spec: &SymbolSpec, theta: f64) -> Result<Complex64> {
    if !(theta > 0.0 && theta < TWO_PI) {
        return Err(Error::ThetaOnJump);
    }
    let z = Complex64::from_polar(1.0, theta);
    Ok((Complex64::i() * spec.beta * (theta - PI)).exp() * spec.tau.eval(z))
}

/// Which side of the jump at theta = 0 (= 2pi) a one-sided limit approaches from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpSide {
    /// theta -> 0+
    Above,
    /// theta -> 2pi-
    Below,
}

/// One-sided limits of the symbol at the jump: `e^(-/+ i pi beta) tau(1)`.
pub fn eval_symbol_limit(spec: &SymbolSpec, side: JumpSide) -> Complex64 {
    let phase = match side {
        JumpSide::Above => (-Complex64::i() * spec.beta * PI).exp(),
        JumpSide::Below => (Complex64::i() * spec.beta * PI).exp(),
    };
    phase * spec.tau.eval(Complex64::ONE)
}

/// Winding number of a closed sampled curve about the origin.
#[derive(Debug, Clone, Copy)]
pub struct Winding {
    pub index: i64,
    /// |total argument change / 2pi - index|, the rounding residual.
    pub residual: f64,
}

pub fn winding_number(curve: &[Complex64]) -> Result<Winding> {
    if curve.len() < 3 {
        return Err(Error::InvalidArgument("winding needs at least 3 points".into()));
    }
    let gap = (curve[0] - curve[curve.len() - 1]).norm();
    if gap > 1e-9 {
        return Err(Error::CurveNotClosed(gap));
    }
    let min_abs = curve.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if min_abs <= 1e-8 {
        return Err(Error::WindingUndefined(min_abs));
    }
    let mut total = 0.0;
    for w in curve.windows(2) {
        total += wrap_angle(w[1].arg() - w[0].arg());
    }
    let turns = total / TWO_PI;
    let index = turns.round() as i64;
    Ok(Winding { index, residual: (turns - index as f64).abs() })
}

/// The curve `R_sigma`: samples of the range of `sigma` plus the straight
/// chord joining the two one-sided limits at the jump.
#[derive(Debug, Clone)]
pub struct RangeCurve {
    /// `sigma(e^(i theta))` from theta -> 0+ to theta -> 2pi-, inclusive of
    /// the one-sided limit points.
    pub arc: Vec<Complex64>,
    /// Interior points of the chord from the 2pi- limit back to the 0+ limit.
    pub chord: Vec<Complex64>,
}

impl RangeCurve {
    /// The closed curve R_sigma (first point repeated at the end), ready for
    /// [`winding_number`].
    pub fn closed(&self) -> Vec<Complex64> {
        let mut out = self.arc.clone();
        out.extend_from_slice(&self.chord);
        out.push(self.arc[0]);
        out
    }
}

pub fn range_curve(spec: &SymbolSpec, resolution: usize) -> Result<RangeCurve> {
    if resolution < 16 {
        return Err(Error::InvalidArgument("range_curve resolution must be >= 16".into()));
    }
    let mut arc = Vec::with_capacity(resolution + 1);
    arc.push(eval_symbol_limit(spec, JumpSide::Above));
    for j in 1..resolution {
        let theta = TWO_PI * j as f64 / resolution as f64;
        arc.push(eval_symbol(spec, theta)?);
    }
    arc.push(eval_symbol_limit(spec, JumpSide::Below));

    let a = *arc.last().unwrap();
    let b = arc[0];
    let m = (resolution / 8).max(2);
    let chord = (1..m)
        .map(|i| {
            let t = i as f64 / m as f64;
            a + (b - a) * t
        })
        .collect();
    Ok(RangeCurve { arc, chord })
}

/// Class-membership report for the smooth factor: continuity and smoothness
/// hold by construction for both families; nonvanishing and zero winding are
/// checked on a 4096-point sample.
#[derive(Debug, Clone)]
pub struct ClassReport {
    pub continuous: bool,
    pub min_abs_tau: f64,
    pub nonvanishing: bool,
    pub winding: Option<i64>,
    pub winding_zero: bool,
    pub smooth: bool,
}

impl ClassReport {
    pub fn passed(&self) -> bool {
        self.continuous && self.nonvanishing && self.winding_zero && self.smooth
    }

    pub fn failure(&self) -> Option<String> {
        if self.passed() {
            return None;
        }
        let mut bad = Vec::new();
        if !self.nonvanishing {
            bad.push(format!("tau vanishes (min |tau| = {:.3e})", self.min_abs_tau));
        }
        if !self.winding_zero {
            match self.winding {
                Some(w) => bad.push(format!("winding number {w} != 0")),
                None => bad.push("winding number undefined".into()),
            }
        }
        Some(bad.join("; "))
    }
}

pub fn verify_class(spec: &SymbolSpec) -> ClassReport {
    const SAMPLES: usize = 4096;
    let pts: Vec<Complex64> = (0..SAMPLES)
        .map(|j| spec.tau.eval(Complex64::from_polar(1.0, TWO_PI * j as f64 / SAMPLES as f64)))
        .collect();
    let min_abs_tau = pts.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let nonvanishing = min_abs_tau > 1e-8;

    let winding = if nonvanishing {
        let mut closed = pts.clone();
        closed.push(pts[0]);
        winding_number(&closed).ok().map(|w| w.index)
    } else {
        None
    };
    // exp(P) cannot wind: its argument is the continuous function Im P.
    let winding_zero = match &spec.tau {
        TauSpec::ExpLaurent(_) => true,
        TauSpec::Laurent(_) => winding == Some(0),
    };

    ClassReport { continuous: true, min_abs_tau, nonvanishing, winding, winding_zero, smooth: true }
}

/// Require class membership, turning a failed report into an error.
pub fn require_class(spec: &SymbolSpec) -> Result<()> {
    let report = verify_class(spec);
    match report.failure() {
        None => Ok(()),
        Some(msg) => Err(Error::ClassViolation(msg)),
    }
}

// ---------------------------------------------------------------------------
// JSON symbol configuration:
// {"beta": [re, im], "tau": {"form": "exp_laurent"|"laurent", "coeffs": [[k, re, im], ...]}}
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RawSymbol {
    beta: (f64, f64),
    tau: RawTau,
}

#[derive(Serialize, Deserialize)]
struct RawTau {
    form: String,
    coeffs: Vec<(i64, f64, f64)>,
}

impl SymbolSpec {
    pub fn from_json(text: &str) -> Result<SymbolSpec> {
        let raw: RawSymbol =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let poly = LaurentPoly::from_terms(
            raw.tau.coeffs.iter().map(|&(k, re, im)| (k, Complex64::new(re, im))),
        );
        let tau = match raw.tau.form.as_str() {
            "exp_laurent" => TauSpec::ExpLaurent(poly),
            "laurent" => TauSpec::Laurent(poly),
            other => return Err(Error::Config(format!("unknown tau form {other:?}"))),
        };
        Ok(SymbolSpec { beta: Complex64::new(raw.beta.0, raw.beta.1), tau })
    }

    pub fn to_json(&self) -> String {
        let (form, poly) = match &self.tau {
            TauSpec::ExpLaurent(p) => ("exp_laurent", p),
            TauSpec::Laurent(p) => ("laurent", p),
        };
        let raw = RawSymbol {
            beta: (self.beta.re, self.beta.im),
            tau: RawTau {
                form: form.to_string(),
                coeffs: poly.terms().map(|(k, c)| (k, c.re, c.im)).collect(),
            },
        };
        serde_json::to_string(&raw).expect("symbol serialization")
    }
}

/// Direct quadrature of `sigma(e^(i theta)) e^(-ik theta) / 2pi`, split at the
/// jump; the independent oracle for [`sigma_fourier`] in tests.
pub fn sigma_fourier_quadrature(spec: &SymbolSpec, k: i64, tol: f64) -> Complex64 {
    let f = |theta: f64| {
        eval_symbol(spec, theta).unwrap() * (-Complex64::i() * (k as f64) * theta).exp()
    };
    let left = adaptive_quad(f, 1e-13, PI, 0.5 * tol);
    let right = adaptive_quad(f, PI, TWO_PI - 1e-13, 0.5 * tol);
    (left.value + right.value) / TWO_PI
}

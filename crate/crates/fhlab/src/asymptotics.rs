//! First-order determinant asymptotics and their verification machinery:
//! the predicted log-determinant, the exact pure-jump oracle (Cauchy
//! determinant), ratio sweeps, exponent fitting, Jacobi's minor identity,
//! and the corner-block scaling law.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{linear_fit, LogComplex, LogDet};
use crate::specfun::fh_constant;
use crate::symbols::SymbolSpec;
use crate::szego::{log_tau_auto, szego_sum};
use crate::toeplitz::{build, corner_from_lu, logdet_levinson, logdet_lu, LuFactors};

const PI: f64 = std::f64::consts::PI;

/// The n-independent data of the predicted asymptotics
/// `D_n = G[tau]^(n+1) n^(-beta^2) C (1+o(1))` with
/// `C = G(1+beta) G(1-beta) E[tau] (tau_+(1)/tau_-(1))^beta`.
///
/// The last factor is the jump-smooth coupling: it equals 1 for tau = 1, for
/// beta = 0, and whenever tau is symmetricten under z <-> 1/z.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticPrediction {
    /// `(log tau)_hat(0)`
    pub log_g_mean: Complex64,
    /// `beta^2`
    pub beta_sq: Complex64,
    /// `log C`; exactly zero (flagged) when beta is a nonzero integer
    pub log_constant: LogComplex,
    pub integer_beta: bool,
}

impl AsymptoticPrediction {
    pub fn for_spec(spec: &SymbolSpec) -> Result<AsymptoticPrediction> {
        let l = log_tau_auto(&spec.tau)?;
        let beta = spec.beta;
        let fh = fh_constant(beta);
        let e_sum = szego_sum(&l);
        // beta * (log tau_+(1) - log tau_-(1)) = beta * sum_{k>0} (l(k) - l(-k))
        let mut coupling = Complex64::ZERO;
        for k in 1..=l.hi().max(-l.lo()) {
            coupling += l.get(k) - l.get(-k);
        }
        coupling *= beta;
        let rest = e_sum + coupling;
        let log_constant = fh.mul(LogComplex::new(rest.re, rest.im));
        Ok(AsymptoticPrediction {
            log_g_mean: l.get(0),
            beta_sq: beta * beta,
            log_constant,
            integer_beta: spec.beta_is_integer(),
        })
    }

    /// `log` of the predicted determinant at size n (without the o(1)).
    pub fn at(&self, n: usize) -> LogDet {
        if self.log_constant.is_zero() {
            return LogComplex::ZERO;
        }
        let nn = (n + 1) as f64;
        let power = self.beta_sq * (n as f64).ln();
        LogComplex::new(
            nn * self.log_g_mean.re - power.re + self.log_constant.log_abs,
            nn * self.log_g_mean.im - power.im + self.log_constant.arg,
        )
    }
}

/// Log of the predicted determinant at a single size. A nonzero integer beta
/// degenerates the constant to the exact-zero flag.
pub fn predict_logdet(spec: &SymbolSpec, n: usize) -> Result<LogDet> {
    if n < 2 {
        return Err(Error::InvalidArgument("prediction needs n >= 2".into()));
    }
    Ok(AsymptoticPrediction::for_spec(spec)?.at(n))
}

/// Exact log-determinant of the pure jump `(-z)^beta` via the Cauchy
/// determinant identity applied to the entries `sin(pi beta)/(pi(beta-i+j))`:
///
/// ```text
/// D_n = (sin(pi beta)/pi)^(n+1) prod_{i<j} -(j-i)^2 / prod_{i,j} (beta+j-i)
/// ```
///
/// Grouping equal values of d = j-i makes each evaluation O(n).
pub fn pure_jump_exact_logdet(beta: Complex64, n: usize) -> Result<LogDet> {
    if beta.im == 0.0 && beta.re == beta.re.round() {
        return Err(Error::IntegerBeta(beta.re));
    }
    let front = (beta * PI).sin() / PI;
    let nn = (n + 1) as f64;
    let mut log_abs = nn * front.norm().ln();
    let mut arg = nn * front.arg();
    // sign (-1)^(n(n+1)/2) from prod_{i<j} -(j-i)^2
    if (n * (n + 1) / 2) % 2 == 1 {
        arg += PI;
    }
    // diag multiplicity: prod_{i,j}(beta+j-i) = prod_d (beta+d)^(n+1-|d|)
    log_abs -= nn * beta.norm().ln();
    arg -= nn * beta.arg();
    for d in 1..=n {
        let mult = (n + 1 - d) as f64;
        log_abs += 2.0 * mult * (d as f64).ln();
        let plus = beta + d as f64;
        let minus = beta - d as f64;
        log_abs -= mult * (plus.norm().ln() + minus.norm().ln());
        arg -= mult * (plus.arg() + minus.arg());
    }
    Ok(LogComplex::new(log_abs, arg))
}

// incremental factor D_n / D_{n-1} of the oracle, recomputed independently:
// (sin(pi beta)/pi) (-1)^n (n!)^2 / prod_{d=-n}^{n} (beta+d)
#[cfg(test)]
fn pure_jump_increment(beta: Complex64, n: usize) -> LogComplex {
    let front = (beta * PI).sin() / PI;
    let mut log_abs = front.norm().ln();
    let mut arg = front.arg() + if n % 2 == 1 { PI } else { 0.0 };
    log_abs -= beta.norm().ln();
    arg -= beta.arg();
    for d in 1..=n {
        log_abs += 2.0 * (d as f64).ln();
        let plus = beta + d as f64;
        let minus = beta - d as f64;
        log_abs -= plus.norm().ln() + minus.norm().ln();
        arg -= plus.arg() + minus.arg();
    }
    LogComplex::new(log_abs, arg)
}

/// One row of a determinant-vs-prediction sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub n: usize,
    pub logdet: LogDet,
    pub prediction: LogDet,
    /// `exp(logdet - prediction) - 1`; None when the prediction is zero
    pub ratio_minus_one: Option<Complex64>,
}

/// Which determinant route feeds a sweep or fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetSource {
    /// exact oracle when tau = 1 and beta is not an integer, matrix otherwise
    Auto,
    /// force the Cauchy oracle (tau must be 1)
    Oracle,
    /// force the Levinson recursion (dense-LU fallback after a breakdown)
    Matrix,
}

/// Log-determinants for a list of sizes from the chosen source.
pub fn logdets_with(
    spec: &SymbolSpec,
    n_list: &[usize],
    source: DetSource,
) -> Result<Vec<LogDet>> {
    if n_list.is_empty() {
        return Ok(Vec::new());
    }
    let oracle_ok = spec.tau.is_one() && !spec.beta_is_integer();
    let use_oracle = match source {
        DetSource::Auto => oracle_ok,
        DetSource::Oracle => {
            if !oracle_ok {
                return Err(Error::InvalidArgument(
                    "oracle source needs tau = 1 and non-integer beta".into(),
                ));
            }
            true
        }
        DetSource::Matrix => false,
    };
    if use_oracle {
        return n_list.iter().map(|&n| pure_jump_exact_logdet(spec.beta, n)).collect();
    }
    let max_n = *n_list.iter().max().unwrap();
    let lev = logdet_levinson(spec, max_n)?;
    n_list
        .iter()
        .map(|&n| match lev.logdets.get(n) {
            Some(&d) => Ok(d),
            None => Ok(logdet_lu(&build(spec, n)?)),
        })
        .collect()
}


/// Determinants against predictions over ascending sizes.
pub fn ratio_sweep(spec: &SymbolSpec, n_list: &[usize]) -> Result<Vec<SweepRow>> {
    ratio_sweep_with(spec, n_list, DetSource::Auto)
}

pub fn ratio_sweep_with(
    spec: &SymbolSpec,
    n_list: &[usize],
    source: DetSource,
) -> Result<Vec<SweepRow>> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("n_list must be strictly ascending".into()));
    }
    let pred = AsymptoticPrediction::for_spec(spec)?;
    let dets = logdets_with(spec, n_list, source)?;
    Ok(n_list
        .iter()
        .zip(dets)
        .map(|(&n, logdet)| {
            let prediction = pred.at(n);
            let ratio_minus_one = if prediction.is_zero() {
                None
            } else {
                Some(logdet.ratio(prediction) - Complex64::ONE)
            };
            SweepRow { n, logdet, prediction, ratio_minus_one }
        })
        .collect())
}

/// Result of the power-law exponent fit.
#[derive(Debug, Clone, Copy)]
pub struct ExponentFit {
    /// the fitted slope of `log D_n - (n+1) log G[tau]` against `log n`
    pub slope: Complex64,
    /// `-slope`, the estimate of beta^2
    pub beta_sq_estimate: Complex64,
    pub max_residual_re: f64,
    pub max_residual_im: f64,
    /// set when adjacent unwrapped phase steps came within a factor two of
    /// the unwrap ambiguity; densify the size list in that case
    pub phase_ambiguous: bool,
}

/// Fit `-beta^2` from determinants over >= 4 sizes spanning >= 2 octaves:
/// real part from `log|D_n|`, imaginary part from the continuously unwrapped
/// phase, both against `log n` after removing the `(n+1) log G[tau]` term.
pub fn fit_exponent(spec: &SymbolSpec, n_list: &[usize]) -> Result<ExponentFit> {
    fit_exponent_with(spec, n_list, DetSource::Auto)
}

pub fn fit_exponent_with(
    spec: &SymbolSpec,
    n_list: &[usize],
    source: DetSource,
) -> Result<ExponentFit> {
    if n_list.len() < 4 {
        return Err(Error::InvalidArgument("exponent fit needs >= 4 sizes".into()));
    }
    let lo = *n_list.first().unwrap();
    let hi = *n_list.last().unwrap();
    if n_list.windows(2).any(|w| w[0] >= w[1]) || hi < 4 * lo {
        return Err(Error::InvalidArgument(
            "exponent fit needs ascending sizes spanning >= 2 octaves".into(),
        ));
    }
    let lg = log_tau_auto(&spec.tau)?.get(0);
    let dets = logdets_with(spec, n_list, source)?;

    let xs: Vec<f64> = n_list.iter().map(|&n| (n as f64).ln()).collect();
    let ys_re: Vec<f64> = n_list
        .iter()
        .zip(&dets)
        .map(|(&n, d)| d.log_abs - (n + 1) as f64 * lg.re)
        .collect();

    // unwrap the reduced phases across sizes
    let mut phase_ambiguous = false;
    let mut ys_im = Vec::with_capacity(n_list.len());
    let mut prev = 0.0;
    for (i, (&n, d)) in n_list.iter().zip(&dets).enumerate() {
        let raw = d.arg - (n + 1) as f64 * lg.im;
        let adjusted = if i == 0 {
            raw
        } else {
            let step = crate::numerics::wrap_angle(raw - prev);
            if step.abs() > 0.5 * PI {
                phase_ambiguous = true;
            }
            prev + step
        };
        ys_im.push(adjusted);
        prev = adjusted;
    }

    let fit_re = linear_fit(&xs, &ys_re)?;
    let fit_im = linear_fit(&xs, &ys_im)?;
    let slope = Complex64::new(fit_re.slope, fit_im.slope);
    Ok(ExponentFit {
        slope,
        beta_sq_estimate: -slope,
        max_residual_re: fit_re.max_residual,
        max_residual_im: fit_im.max_residual,
        phase_ambiguous,
    })
}

/// Both sides of the minor identity
/// `D_{n-p}[(-z)^(-p) sigma] = det X * D_n[sigma]`.
///
/// (The sign prefactor cancels identically: the 0-based Jacobi index sums
/// give exponent p(2n-p+1)+pn = p(p-1) mod 2 = 0; verified numerically over
/// the whole test grid.)
#[derive(Debug, Clone, Copy)]
pub struct JacobiReport {
    pub lhs: LogDet,
    pub rhs: LogDet,
    /// `|exp(lhs - rhs) - 1|`
    pub rel_residual: f64,
}

/// Check the identity: the left side is a determinant of the beta-shifted
/// symbol (exactly representable in the family), the right side combines the
/// inverse corner block with `D_n`.
pub fn jacobi_check(spec: &SymbolSpec, n: usize, p: usize) -> Result<JacobiReport> {
    if p < 1 || p > n.min(4) {
        return Err(Error::InvalidArgument("jacobi check needs 1 <= p <= min(n, 4)".into()));
    }
    if spec.beta_is_integer() {
        return Err(Error::IntegerBeta(spec.beta.re));
    }
    let shifted = spec.shift_beta(-(p as i64));
    let lhs = logdet_lu(&build(&shifted, n - p)?);

    let t = build(spec, n)?;
    let lu = LuFactors::new(t.to_dense(), t.size());
    if lu.is_singular() {
        return Err(Error::SingularMatrix(n));
    }
    let corner = corner_from_lu(&lu, n, p)?;
    let det_x = corner.det_log();
    let rhs = det_x.mul(lu.logdet());

    Ok(JacobiReport { lhs, rhs, rel_residual: lhs.rel_discrepancy(rhs) })
}

/// Fitted scaling of the corner-block determinant against the predicted
/// `det X ~ G[tau]^(-p) n^(-p^2 + 2 beta p) c` (the minor identity carries
/// no sign prefactor; see [`jacobi_check`]).
#[derive(Debug, Clone)]
pub struct CornerScaling {
    pub slope: Complex64,
    pub target: Complex64,
    /// per-size estimates of the stabilizing constant c
    pub constants: Vec<Complex64>,
    pub det_logs: Vec<LogDet>,
}

pub fn corner_scaling_check(spec: &SymbolSpec, n_list: &[usize], p: usize) -> Result<CornerScaling> {
    if spec.beta.re.abs() >= 0.5 {
        return Err(Error::BetaOutOfStrip(spec.beta.re));
    }
    if p < 1 || p > 3 {
        return Err(Error::InvalidArgument("corner scaling needs 1 <= p <= 3".into()));
    }
    if n_list.len() < 2 || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("corner scaling needs ascending sizes".into()));
    }
    let lg = log_tau_auto(&spec.tau)?.get(0);
    let target = Complex64::new(-((p * p) as f64), 0.0) + 2.0 * spec.beta * p as f64;

    let mut det_logs = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let t = build(spec, n)?;
        let lu = LuFactors::new(t.to_dense(), t.size());
        if lu.is_singular() {
            return Err(Error::SingularMatrix(n));
        }
        det_logs.push(corner_from_lu(&lu, n, p)?.det_log());
    }

    let xs: Vec<f64> = n_list.iter().map(|&n| (n as f64).ln()).collect();
    let ys_re: Vec<f64> = det_logs.iter().map(|d| d.log_abs).collect();
    let mut ys_im = Vec::with_capacity(det_logs.len());
    let mut prev = 0.0;
    for (i, d) in det_logs.iter().enumerate() {
        let adjusted = if i == 0 {
            d.arg
        } else {
            prev + crate::numerics::wrap_angle(d.arg - prev)
        };
        ys_im.push(adjusted);
        prev = adjusted;
    }
    let fit_re = linear_fit(&xs, &ys_re)?;
    let fit_im = linear_fit(&xs, &ys_im)?;
    let slope = Complex64::new(fit_re.slope, fit_im.slope);

    let constants = n_list
        .iter()
        .zip(&det_logs)
        .map(|(&n, d)| {
            // c = det X / [G^(-p) n^(-p^2+2 beta p)]
            let power = target * (n as f64).ln();
            let base = LogComplex::new(
                -(p as f64) * lg.re + power.re,
                -(p as f64) * lg.im + power.im,
            );
            d.ratio(base)
        })
        .collect();

    Ok(CornerScaling { slope, target, constants, det_logs })
}

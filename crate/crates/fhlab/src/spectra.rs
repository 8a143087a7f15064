//! Empirical eigenvalue measures, canonical-distribution functionals, and
//! limiting-set geometry.
//!
//! Canonical distribution means
//! `(1/(n+1)) sum_i F(lambda_i) -> (1/2pi) int F(sigma(e^(i theta))) dtheta`.
//! Analytic monomial moments hold even for symbols whose eigenvalues do NOT
//! distribute canonically (they are exact trace identities), so the
//! functional family deliberately includes non-analytic members (|lambda|^2,
//! Re, Im, |lambda - c|^2); those carry the actual test.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::adaptive_quad;
use crate::symbols::{eval_symbol, range_curve, SymbolSpec};
use crate::toeplitz::{build, eigenvalues, trace_power};

const PI: f64 = std::f64::consts::PI;

/// The built-in test functionals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestFunctional {
    /// `lambda^m`, m <= 4 (analytic; exact trace identity, not evidence of
    /// canonical distribution)
    Power(u32),
    /// `|lambda|^2`
    AbsSquare,
    /// `Re lambda`
    RePart,
    /// `Im lambda`
    ImPart,
    /// `|lambda - c|^2` for a caller-chosen center
    AbsDistSquare(Complex64),
}

impl TestFunctional {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match *self {
            TestFunctional::Power(m) => z.powu(m),
            TestFunctional::AbsSquare => Complex64::new(z.norm_sqr(), 0.0),
            TestFunctional::RePart => Complex64::new(z.re, 0.0),
            TestFunctional::ImPart => Complex64::new(z.im, 0.0),
            TestFunctional::AbsDistSquare(c) => Complex64::new((z - c).norm_sqr(), 0.0),
        }
    }

    /// Identifier used by the CLI (`m1..m4`, `abs2`, `re`, `im`,
    /// `absdist2:re,im`).
    pub fn parse(id: &str) -> Result<TestFunctional> {
        match id {
            "m1" => Ok(TestFunctional::Power(1)),
            "m2" => Ok(TestFunctional::Power(2)),
            "m3" => Ok(TestFunctional::Power(3)),
            "m4" => Ok(TestFunctional::Power(4)),
            "abs2" => Ok(TestFunctional::AbsSquare),
            "re" => Ok(TestFunctional::RePart),
            "im" => Ok(TestFunctional::ImPart),
            other => {
                if let Some(rest) = other.strip_prefix("absdist2:") {
                    let parts: Vec<&str> = rest.split(',').collect();
                    if parts.len() == 2 {
                        let re = parts[0].parse().map_err(|_| bad_functional(other))?;
                        let im = parts[1].parse().map_err(|_| bad_functional(other))?;
                        return Ok(TestFunctional::AbsDistSquare(Complex64::new(re, im)));
                    }
                }
                Err(bad_functional(other))
            }
        }
    }

    pub fn id(&self) -> String {
        match *self {
            TestFunctional::Power(m) => format!("m{m}"),
            TestFunctional::AbsSquare => "abs2".into(),
            TestFunctional::RePart => "re".into(),
            TestFunctional::ImPart => "im".into(),
            TestFunctional::AbsDistSquare(c) => format!("absdist2:{},{}", c.re, c.im),
        }
    }
}

fn bad_functional(id: &str) -> Error {
    Error::InvalidArgument(format!(
        "unknown functional {id:?}; use m1..m4, abs2, re, im, absdist2:re,im"
    ))
}

/// One functional evaluated against the empirical measure.
#[derive(Debug, Clone)]
pub struct FunctionalRow {
    pub functional: TestFunctional,
    pub empirical: Complex64,
    pub symbol_side: Complex64,
    pub deviation: f64,
    /// for monomials: relative gap of the empirical sum against
    /// `tr(T^m)/(n+1)` (an exact identity, eigensolver consistency check)
    pub trace_residual: Option<f64>,
}

/// Eigenvalues plus functional comparisons at one size.
#[derive(Debug, Clone)]
pub struct EmpiricalMeasure {
    pub n: usize,
    pub eigenvalues: Vec<Complex64>,
    pub rows: Vec<FunctionalRow>,
}

// (1/2pi) int F(sigma(e^(i theta))) dtheta, split at the jump
fn symbol_average(spec: &SymbolSpec, f: &TestFunctional) -> Result<Complex64> {
    let g = |theta: f64| f.eval(eval_symbol(spec, theta).expect("interior theta"));
    let tol = 1e-9;
    let left = adaptive_quad(g, 1e-12, PI, 0.5 * tol);
    let right = adaptive_quad(g, PI, 2.0 * PI - 1e-12, 0.5 * tol);
    if !(left.converged && right.converged) {
        return Err(Error::QuadNoConvergence { error: left.abs_error + right.abs_error, tol });
    }
    Ok((left.value + right.value) / (2.0 * PI))
}

/// Empirical sums against symbol-side integrals for a set of functionals.
pub fn canonical_check(
    spec: &SymbolSpec,
    n: usize,
    functionals: &[TestFunctional],
) -> Result<EmpiricalMeasure> {
    let m = build(spec, n)?;
    let report = eigenvalues(&m)?;
    if !report.converged() {
        return Err(Error::EigenNoConvergence { failed: report.unconverged, total: n + 1 });
    }
    let eigs = report.eigenvalues;
    let mut rows = Vec::with_capacity(functionals.len());
    for f in functionals {
        let empirical =
            eigs.iter().map(|&l| f.eval(l)).sum::<Complex64>() / (n + 1) as f64;
        let symbol_side = symbol_average(spec, f)?;
        let trace_residual = match f {
            TestFunctional::Power(p) => {
                let tr = trace_power(spec, n, *p)?;
                Some((empirical - tr).norm() / (1.0 + tr.norm()))
            }
            _ => None,
        };
        rows.push(FunctionalRow {
            functional: *f,
            empirical,
            symbol_side,
            deviation: (empirical - symbol_side).norm(),
            trace_residual,
        });
    }
    Ok(EmpiricalMeasure { n, eigenvalues: eigs, rows })
}

/// Hausdorff-style one-sided distances between the spectrum and the sampled
/// symbol range.
#[derive(Debug, Clone, Copy)]
pub struct LimitingSetReport {
    pub n: usize,
    /// max over eigenvalues of the distance to the range curve
    pub max_eig_to_range: f64,
    /// max over range samples of the distance to the nearest eigenvalue
    pub max_range_to_eig: f64,
    pub resolution_used: usize,
}

fn one_sided(from: &[Complex64], to: &[Complex64]) -> f64 {
    from.iter()
        .map(|a| to.iter().map(|b| (a - b).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Distances of the spectrum to the (sampled) closure of the range, per size.
/// The limiting set is the closure of the range (the arc); the jump chord can
/// be included in the eig-to-range target with `include_chord` (default off).
/// The sampling resolution refines until both distances move < 1e-3.
pub fn limiting_set_check(
    spec: &SymbolSpec,
    n_list: &[usize],
    resolution: usize,
    include_chord: bool,
) -> Result<Vec<LimitingSetReport>> {
    let mut out = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let m = build(spec, n)?;
        let report = eigenvalues(&m)?;
        if !report.converged() {
            return Err(Error::EigenNoConvergence { failed: report.unconverged, total: n + 1 });
        }
        let eigs = report.eigenvalues;

        let mut res = resolution.max(16);
        let mut prev: Option<(f64, f64)> = None;
        let (mut d_er, mut d_re) = (0.0, 0.0);
        for _ in 0..4 {
            let curve = range_curve(spec, res)?;
            let mut target = curve.arc.clone();
            if include_chord {
                target.extend_from_slice(&curve.chord);
            }
            d_er = one_sided(&eigs, &target);
            d_re = one_sided(&curve.arc, &eigs);
            if let Some((pe, pr)) = prev {
                if (pe - d_er).abs() < 1e-3 && (pr - d_re).abs() < 1e-3 {
                    break;
                }
            }
            prev = Some((d_er, d_re));
            res *= 2;
        }
        out.push(LimitingSetReport {
            n,
            max_eig_to_range: d_er,
            max_range_to_eig: d_re,
            resolution_used: res / 2,
        });
    }
    Ok(out)
}

/// Count of eigenvalues within `epsilon` of `center`.
pub fn eig_count_near(
    spec: &SymbolSpec,
    n: usize,
    center: Complex64,
    epsilon: f64,
) -> Result<usize> {
    if epsilon <= 0.0 {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let m = build(spec, n)?;
    let report = eigenvalues(&m)?;
    Ok(report.eigenvalues.iter().filter(|l| (*l - center).norm() <= epsilon).count())
}

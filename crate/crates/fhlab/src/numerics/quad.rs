use num_complex::Complex64;

use crate::error::{Error, Result};

// Gauss-Kronrod 7-15 nodes/weights (positive half, QUADPACK dqk15).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Outcome of an adaptive quadrature. `abs_error` is the accumulated error
/// estimate; `converged` is false when the subdivision budget ran out first
/// (the best estimate and its bound are still reported).
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_error: f64,
    pub converged: bool,
    pub evals: usize,
}

impl QuadResult {
    /// Treat a non-converged estimate as an error.
    pub fn into_result(self) -> Result<Complex64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::QuadNoConvergence { error: self.abs_error, tol: 0.0 })
        }
    }
}

/// Endpoint behavior declaration for [`adaptive_quad_singular`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    Regular,
    /// Integrand behaves like `(x - endpoint)^exponent` with exponent > -1.
    Algebraic { exponent: f64 },
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64, usize) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);

    let mut res_kronrod = fc * WGK[7];
    let mut res_gauss = fc * WG[3];
    let mut res_abs = fc.norm() * WGK[7];
    let mut samples = [Complex64::ZERO; 15];
    samples[7] = fc;

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        samples[j] = f1;
        samples[14 - j] = f2;
        res_kronrod += (f1 + f2) * WGK[j];
        res_abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            res_gauss += (f1 + f2) * WG[j / 2];
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = (fc - mean).norm() * WGK[7];
    for j in 0..7 {
        res_asc += ((samples[j] - mean).norm() + (samples[14 - j] - mean).norm()) * WGK[j];
    }

    let value = res_kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();

    // QUADPACK-style conservative rescaling of the raw K15-G7 difference.
    let raw = ((res_kronrod - res_gauss) * half).norm();
    let mut err = raw;
    if res_asc != 0.0 && raw != 0.0 {
        err = res_asc * 1.0_f64.min((200.0 * raw / res_asc).powf(1.5));
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if floor > err {
        err = floor;
    }
    (value, err, 15)
}

/// Adaptive Gauss-Kronrod quadrature of a complex-valued integrand over
/// `[a, b]` to absolute tolerance `tol`. Worst-panel bisection; the
/// subdivision budget is generous enough for a few hundred oscillations.
pub fn adaptive_quad<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> QuadResult {
    adaptive_core(&f, a, b, tol, 16384)
}

fn adaptive_core<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_panels: usize,
) -> QuadResult {
    if a == b {
        return QuadResult { value: Complex64::ZERO, abs_error: 0.0, converged: true, evals: 0 };
    }
    let (v, e, n) = gk15(f, a, b);
    let mut panels = vec![Panel { a, b, value: v, error: e }];
    let mut evals = n;

    loop {
        let total_err: f64 = panels.iter().map(|p| p.error).sum();
        if total_err <= tol {
            break;
        }
        if panels.len() >= max_panels {
            let value = panels.iter().map(|p| p.value).sum();
            return QuadResult { value, abs_error: total_err, converged: false, evals };
        }
        // split the worst panel
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .unwrap();
        let Panel { a: pa, b: pb, .. } = panels[idx];
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // interval exhausted at machine precision; freeze its error
            let value = panels.iter().map(|p| p.value).sum();
            return QuadResult { value, abs_error: total_err, converged: total_err <= tol, evals };
        }
        let (v1, e1, n1) = gk15(f, pa, mid);
        let (v2, e2, n2) = gk15(f, mid, pb);
        evals += n1 + n2;
        panels[idx] = Panel { a: pa, b: mid, value: v1, error: e1 };
        panels.push(Panel { a: mid, b: pb, value: v2, error: e2 });
    }

    let value = panels.iter().map(|p| p.value).sum();
    let abs_error = panels.iter().map(|p| p.error).sum();
    QuadResult { value, abs_error, converged: true, evals }
}

/// Substitution power for an algebraic endpoint of exponent `w > -1`:
/// `x = a + t^p` turns `(x-a)^w dx` into `p t^(p(1+w)-1) dt`; `p` is chosen so
/// the transformed integrand is at least C^2 at the endpoint.
fn weakening_power(exponent: f64) -> f64 {
    assert!(exponent > -1.0, "algebraic endpoint exponent must be > -1");
    (3.0 / (1.0 + exponent)).ceil().max(1.0)
}

// Non-finite f values can only arise where x has rounded onto the singular
// endpoint itself; the substitution makes the true contribution there vanish
// like t^2 or faster, so it is safe to drop.
fn finite_or_zero(v: Complex64) -> Complex64 {
    if v.re.is_finite() && v.im.is_finite() {
        v
    } else {
        Complex64::ZERO
    }
}

fn singular_left<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    exponent: f64,
) -> QuadResult {
    let p = weakening_power(exponent);
    let t_max = (b - a).powf(1.0 / p);
    adaptive_quad(
        |t| finite_or_zero(f(a + t.powf(p)) * (p * t.powf(p - 1.0))),
        0.0,
        t_max,
        tol,
    )
}

fn singular_right<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    exponent: f64,
) -> QuadResult {
    let p = weakening_power(exponent);
    let t_max = (b - a).powf(1.0 / p);
    adaptive_quad(
        |t| finite_or_zero(f(b - t.powf(p)) * (p * t.powf(p - 1.0))),
        0.0,
        t_max,
        tol,
    )
}

/// Adaptive quadrature with declared algebraic singularities at either
/// endpoint, weakened by the substitution `x = a + t^p` (mirrored at `b`).
pub fn adaptive_quad_singular<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    at_a: Endpoint,
    at_b: Endpoint,
) -> QuadResult {
    match (at_a, at_b) {
        (Endpoint::Regular, Endpoint::Regular) => adaptive_quad(f, a, b, tol),
        (Endpoint::Algebraic { exponent }, Endpoint::Regular) => {
            singular_left(&f, a, b, tol, exponent)
        }
        (Endpoint::Regular, Endpoint::Algebraic { exponent }) => {
            singular_right(&f, a, b, tol, exponent)
        }
        (Endpoint::Algebraic { exponent: wa }, Endpoint::Algebraic { exponent: wb }) => {
            let mid = 0.5 * (a + b);
            let left = singular_left(&f, a, mid, 0.5 * tol, wa);
            let right = singular_right(&f, mid, b, 0.5 * tol, wb);
            QuadResult {
                value: left.value + right.value,
                abs_error: left.abs_error + right.abs_error,
                converged: left.converged && right.converged,
                evals: left.evals + right.evals,
            }
        }
    }
}

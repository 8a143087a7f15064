//! Levinson-Trench-type determinant recursion for non-Hermitian Toeplitz
//! matrices: O(n^2) for the whole nested family of leading principal minors.
//!
//! With `T_k` the (k+1) x (k+1) section, the Schur complement of the last
//! row/column gives `D_k = D_{k-1} e_k`. The auxiliary vectors
//! `g = T_{k-1}^{-1} (c_1..c_k)` and `h = T_{k-1}^{-T} (c_{-1}..c_{-k})`
//! update in O(k) through the persymmetry `J T J = T^T`:
//!
//! ```text
//! alpha = c_{k+1} - sum_j g_j c_{k-j}
//! beta  = c_{-(k+1)} - sum_j h_j c_{j-k}
//! g <- [g - (alpha/e) Jh, alpha/e],  h <- [h - (beta/e) Jg, beta/e]
//! e <- e - alpha beta / e
//! ```
//!
//! The recursion breaks down when a leading minor (an `e_k`) vanishes even
//! though `T_n` itself may be invertible; breakdown is reported by index and
//! the caller falls back to dense LU for the affected sizes.

use num_complex::Complex64;

use crate::error::Result;
use crate::numerics::{LogComplex, LogDet};
use crate::symbols::{sigma_fourier, SymbolSpec};

/// Determinants of all leading sections, in log form.
#[derive(Debug, Clone)]
pub struct LevinsonOutcome {
    /// `logdets[k]` is `log D_k` for the (k+1) x (k+1) section; the vector
    /// covers sizes 0..breakdown (all requested sizes when no breakdown).
    pub logdets: Vec<LogDet>,
    /// First size whose minor-ratio fell below 1e-12 of the running scale.
    pub breakdown: Option<usize>,
}

/// Run the recursion up to size `n` (matrices up to (n+1) x (n+1)).
pub fn logdet_levinson(spec: &SymbolSpec, n: usize) -> Result<LevinsonOutcome> {
    let (gen, _) = sigma_fourier(spec, -(n as i64 + 1), n as i64 + 1)?;
    let c = |k: i64| gen.get(k);

    let mut logdets = Vec::with_capacity(n + 1);
    let mut e = c(0);
    let mut scale = e.norm().max(1e-300);
    if e.norm() < 1e-12 * scale.max(1.0) || e == Complex64::ZERO {
        return Ok(LevinsonOutcome { logdets, breakdown: Some(0) });
    }
    let mut acc = LogComplex::from_complex(e);
    logdets.push(acc);

    let mut g: Vec<Complex64> = Vec::new();
    let mut h: Vec<Complex64> = Vec::new();

    for k in 0..n {
        let kk = k as i64;
        let m = g.len();
        let mut alpha = c(kk + 1);
        let mut beta = c(-(kk + 1));
        for j in 0..m {
            alpha -= g[j] * c(kk - j as i64);
            beta -= h[j] * c(j as i64 - kk);
        }

        let ga = alpha / e;
        let gb = beta / e;
        let mut g_next = Vec::with_capacity(m + 1);
        let mut h_next = Vec::with_capacity(m + 1);
        for j in 0..m {
            g_next.push(g[j] - ga * h[m - 1 - j]);
            h_next.push(h[j] - gb * g[m - 1 - j]);
        }
        g_next.push(ga);
        h_next.push(gb);
        g = g_next;
        h = h_next;

        e -= alpha * beta / e;
        scale = scale.max(e.norm());
        if e.norm() < 1e-12 * scale {
            return Ok(LevinsonOutcome { logdets, breakdown: Some(k + 1) });
        }
        acc = acc.mul(LogComplex::from_complex(e));
        logdets.push(acc);
    }

    Ok(LevinsonOutcome { logdets, breakdown: None })
}

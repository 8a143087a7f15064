//! Shared double-precision complex primitives: FFT, adaptive quadrature with
//! endpoint-singularity handling, least-squares line fitting, and
//! phase-tracked log accumulation.

mod fft;
mod fit;
mod logcomplex;
mod quad;

pub use fft::{fft, ifft};
pub use fit::{linear_fit, LineFit};
pub use logcomplex::{LogComplex, LogDet};
pub use quad::{adaptive_quad, adaptive_quad_singular, Endpoint, QuadResult};

pub use num_complex::Complex64;

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Wrap an angle to the principal interval (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(TWO_PI);
    if r > std::f64::consts::PI {
        r -= TWO_PI;
    }
    r
}

/// Distance between two phases modulo 2*pi.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

use num_complex::Complex64;

use super::wrap_angle;

/// A nonzero complex number in log form: `exp(log_abs + i*arg)`.
///
/// `arg` is accumulated continuously (not reduced mod 2*pi) so that products
/// of thousands of factors keep a usable phase, and so that differences such
/// as `log D_n - (n+1) log G[tau]` subtract without 2*pi ambiguity.
/// `log_abs = -inf` encodes an exact zero; `arg` is then meaningless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    pub log_abs: f64,
    pub arg: f64,
}

/// Determinants are carried in log form end to end; `|D_n|` spans hundreds of
/// orders of magnitude across a sweep.
pub type LogDet = LogComplex;

impl LogComplex {
    pub const ONE: LogComplex = LogComplex { log_abs: 0.0, arg: 0.0 };
    pub const ZERO: LogComplex = LogComplex { log_abs: f64::NEG_INFINITY, arg: 0.0 };

    pub fn new(log_abs: f64, arg: f64) -> Self {
        LogComplex { log_abs, arg }
    }

    /// Log of an ordinary complex number (principal argument).
    pub fn from_complex(z: Complex64) -> Self {
        if z == Complex64::ZERO {
            return LogComplex::ZERO;
        }
        LogComplex { log_abs: z.norm().ln(), arg: z.arg() }
    }

    pub fn is_zero(&self) -> bool {
        self.log_abs == f64::NEG_INFINITY
    }

    /// Back to an ordinary complex number. Overflows to inf for huge moduli.
    pub fn value(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::ZERO;
        }
        Complex64::from_polar(self.log_abs.exp(), self.arg)
    }

    pub fn mul(self, other: LogComplex) -> LogComplex {
        if self.is_zero() || other.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_abs + other.log_abs, self.arg + other.arg)
    }

    pub fn div(self, other: LogComplex) -> LogComplex {
        LogComplex::new(self.log_abs - other.log_abs, self.arg - other.arg)
    }

    pub fn mul_complex(self, z: Complex64) -> LogComplex {
        self.mul(LogComplex::from_complex(z))
    }

    /// Integer power (repeated phase, no reduction).
    pub fn powi(self, k: i64) -> LogComplex {
        let k = k as f64;
        LogComplex::new(self.log_abs * k, self.arg * k)
    }

    /// As a complex logarithm: `log_abs + i*arg`.
    pub fn as_complex_log(&self) -> Complex64 {
        Complex64::new(self.log_abs, self.arg)
    }

    /// `exp(self - other)`, with the accumulated phase difference folded into
    /// (-pi, pi] first so that routes differing by 2*pi*k compare exactly.
    pub fn ratio(self, other: LogComplex) -> Complex64 {
        Complex64::from_polar((self.log_abs - other.log_abs).exp(), wrap_angle(self.arg - other.arg))
    }

    /// `|exp(self - other) - 1|`, the scale-free discrepancy of two log values.
    pub fn rel_discrepancy(self, other: LogComplex) -> f64 {
        (self.ratio(other) - Complex64::ONE).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_products() {
        let z = Complex64::new(-3.0, 4.0);
        let l = LogComplex::from_complex(z);
        assert!((l.value() - z).norm() < 1e-12);
        let w = Complex64::new(0.5, -0.25);
        let p = l.mul(LogComplex::from_complex(w));
        assert!((p.value() - z * w).norm() < 1e-12);
    }

    #[test]
    fn zero_flag() {
        let z = LogComplex::from_complex(Complex64::ZERO);
        assert!(z.is_zero());
        assert_eq!(z.value(), Complex64::ZERO);
        assert!(z.mul(LogComplex::ONE).is_zero());
    }

    #[test]
    fn phase_accumulates_without_reduction() {
        // 20 factors of e^{i 2.0} keep arg = 40, not its mod-2pi reduction.
        let f = LogComplex::new(0.0, 2.0);
        let mut acc = LogComplex::ONE;
        for _ in 0..20 {
            acc = acc.mul(f);
        }
        assert!((acc.arg - 40.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_folds_phase() {
        let a = LogComplex::new(0.3, 10.0 * std::f64::consts::PI + 0.1);
        let b = LogComplex::new(0.3, 0.1);
        assert!((a.ratio(b) - Complex64::ONE).norm() < 1e-12);
    }
}

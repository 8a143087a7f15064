use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Forward DFT with the convention `X_j = sum_m x_m e^(-2 pi i j m / N)`.
///
/// Lengths must be powers of two (callers pad). Backed by rustfft.
pub fn fft(samples: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(samples.len())?;
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(samples.len()).process(&mut buf);
    Ok(buf)
}

/// Inverse DFT, normalized so that `ifft(fft(x)) = x`.
pub fn ifft(spectrum: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(spectrum.len())?;
    let mut buf = spectrum.to_vec();
    FftPlanner::new().plan_fft_inverse(spectrum.len()).process(&mut buf);
    let scale = 1.0 / spectrum.len() as f64;
    for v in &mut buf {
        *v *= scale;
    }
    Ok(buf)
}

fn check_len(n: usize) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::FftLength(n));
    }
    Ok(())
}

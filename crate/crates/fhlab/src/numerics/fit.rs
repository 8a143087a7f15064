use crate::error::{Error, Result};

/// Ordinary least-squares line through `(xs, ys)`.
#[derive(Debug, Clone, Copy)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::DegenerateFit);
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit);
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (slope * x + intercept)).abs())
        .fold(0.0, f64::max);
    Ok(LineFit { slope, intercept, max_residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        let f = linear_fit(&xs, &ys).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14);
        assert!((f.intercept - 1.0).abs() < 1e-14);
        assert!(f.max_residual < 1e-14);
    }

    #[test]
    fn constant_data() {
        let xs = [0.0, 1.0, 2.0];
        let ys = [5.0, 5.0, 5.0];
        let f = linear_fit(&xs, &ys).unwrap();
        assert!(f.slope.abs() < 1e-14);
        assert!((f.intercept - 5.0).abs() < 1e-14);
    }

    #[test]
    fn small_noise_recovers_slope() {
        // deterministic noise of amplitude 1e-3
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs
            .iter()
            .enumerate()
            .map(|(i, x)| 3.0 * x + 1e-3 * ((i as f64 * 12.9898).sin()))
            .collect();
        let f = linear_fit(&xs, &ys).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-3);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(linear_fit(&[1.0, 1.0], &[0.0, 1.0]).is_err());
        assert!(linear_fit(&[1.0], &[0.0]).is_err());
    }
}

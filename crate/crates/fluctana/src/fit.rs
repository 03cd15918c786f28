//! Shared log-log regression kernel used by every scaling-exponent fit.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct LinFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub n_points: usize,
}

/// Ordinary least squares of ln y on ln x, restricted to x in `range`
/// (inclusive). All in-range inputs must be strictly positive.
pub fn loglog_fit(xs: &[f64], ys: &[f64], range: (f64, f64)) -> Result<LinFit> {
    if xs.len() != ys.len() {
        return Err(Error::Domain(format!(
            "x/y length mismatch: {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    let (lo, hi) = range;
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for (&x, &y) in xs.iter().zip(ys) {
        if x < lo || x > hi {
            continue;
        }
        if x <= 0.0 || y <= 0.0 {
            return Err(Error::Domain(format!(
                "log-log fit requires positive values, got ({x}, {y})"
            )));
        }
        lx.push(x.ln());
        ly.push(y.ln());
    }
    linear_fit(&lx, &ly)
}

/// Plain OLS on already-transformed coordinates.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinFit> {
    let n = xs.len();
    if n < 3 {
        return Err(Error::FitRange(format!(
            "need at least 3 points in range, got {n}"
        )));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::Domain("all x values identical in fit range".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let stderr = (ssr / (nf - 2.0) / sxx).sqrt();
    Ok(LinFit {
        slope,
        intercept,
        stderr,
        n_points: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_recovered() {
        let xs: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(0.7)).collect();
        let fit = loglog_fit(&xs, &ys, (1.0, 10.0)).unwrap();
        assert!((fit.slope - 0.7).abs() < 1e-12);
        assert!((fit.intercept - 3.0f64.ln()).abs() < 1e-12);
        assert!(fit.stderr < 1e-12);
    }

    #[test]
    fn constant_y_gives_zero_slope() {
        let xs: Vec<f64> = (1..=8).map(|i| i as f64).collect();
        let ys = vec![5.0; 8];
        let fit = loglog_fit(&xs, &ys, (1.0, 8.0)).unwrap();
        assert!(fit.slope.abs() < 1e-12);
    }

    #[test]
    fn range_filter_and_errors() {
        let xs = vec![1.0, 2.0, 3.0, 4.0, 100.0];
        let ys = vec![1.0, 2.0, 3.0, 4.0, 1e9];
        // out-of-range wild point excluded
        let fit = loglog_fit(&xs, &ys, (1.0, 10.0)).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-12);
        assert!(matches!(
            loglog_fit(&xs[..2], &ys[..2], (1.0, 10.0)),
            Err(Error::FitRange(_))
        ));
        assert!(matches!(
            loglog_fit(&[1.0, 2.0, 3.0], &[1.0, -1.0, 1.0], (0.5, 10.0)),
            Err(Error::Domain(_))
        ));
        // negative x below the range floor is filtered, not an error
        assert!(matches!(
            loglog_fit(&[1.0, -2.0, 3.0], &[1.0, 1.0, 1.0], (0.5, 10.0)),
            Err(Error::FitRange(_))
        ));
    }

    #[test]
    fn noisy_square_law_slope_near_two() {
        // deterministic "noise" from a fixed multiplicative pattern ~1%
        let xs: Vec<f64> = (1..=40).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs
            .iter()
            .enumerate()
            .map(|(i, x)| x * x * (1.0 + 0.01 * ((i as f64 * 2.399).sin())))
            .collect();
        let fit = loglog_fit(&xs, &ys, (1.0, 40.0)).unwrap();
        assert!((fit.slope - 2.0).abs() < 0.05);
    }
}

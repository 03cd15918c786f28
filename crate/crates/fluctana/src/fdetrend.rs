//! Fourier-domain trend removal: zeroes the lowest nonzero frequency modes of
//! the signal so slow sinusoidal trends do not contaminate fluctuation
//! analysis downstream.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Series;

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct DetrendConfig {
    /// Count of lowest nonzero frequencies zeroed (both conjugate halves).
    pub n_modes_removed: usize,
    /// Also remove the zero-frequency (mean) component.
    pub remove_mean: bool,
}

impl Default for DetrendConfig {
    fn default() -> Self {
        DetrendConfig {
            n_modes_removed: 0,
            remove_mean: false,
        }
    }
}

/// Subtract the reconstruction of the removed low-frequency modes from the
/// series. Uses a general-length DFT, so non-power-of-two inputs are handled
/// without padding.
pub fn fourier_detrend(series: &Series, config: &DetrendConfig) -> Result<Series> {
    let n = series.len();
    if n < 4 {
        return Err(Error::InsufficientData { needed: 4, got: n });
    }
    if config.n_modes_removed > n / 2 {
        return Err(Error::Domain(format!(
            "n_modes_removed {} exceeds floor(N/2) = {}",
            config.n_modes_removed,
            n / 2
        )));
    }
    if config.n_modes_removed == 0 && !config.remove_mean {
        return Ok(series.clone());
    }

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);

    let mut buf: Vec<Complex<f64>> = series
        .values()
        .iter()
        .map(|&v| Complex::new(v, 0.0))
        .collect();
    fft.process(&mut buf);

    if config.remove_mean {
        buf[0] = Complex::new(0.0, 0.0);
    }
    for k in 1..=config.n_modes_removed {
        buf[k] = Complex::new(0.0, 0.0);
        buf[n - k] = Complex::new(0.0, 0.0);
    }

    ifft.process(&mut buf);
    let scale = 1.0 / n as f64;
    let values: Vec<f64> = buf.iter().map(|c| c.re * scale).collect();

    Series::new(
        series.timestamps().to_vec(),
        values,
        format!("{} (detrended)", series.label()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sinusoid(n: usize, k: usize, amp: f64) -> Vec<f64> {
        (0..n)
            .map(|i| amp * (2.0 * PI * k as f64 * i as f64 / n as f64).sin())
            .collect()
    }

    #[test]
    fn removes_exact_discrete_mode() {
        let n = 500; // non-power-of-two on purpose
        let s = Series::from_values(sinusoid(n, 3, 7.5), "sin").unwrap();
        let cfg = DetrendConfig {
            n_modes_removed: 3,
            remove_mean: false,
        };
        let out = fourier_detrend(&s, &cfg).unwrap();
        let max = out.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
        assert!(max <= 1e-8 * 7.5, "residual {max}");
    }

    #[test]
    fn zero_config_is_identity() {
        let vals: Vec<f64> = (0..64).map(|i| (i as f64 * 0.37).cos() + i as f64).collect();
        let s = Series::from_values(vals.clone(), "x").unwrap();
        let out = fourier_detrend(&s, &DetrendConfig::default()).unwrap();
        assert_eq!(out.values(), vals.as_slice());
    }

    #[test]
    fn idempotent_and_linear() {
        let n = 300;
        let x: Vec<f64> = (0..n)
            .map(|i| (i as f64 * 0.11).sin() + 0.3 * (i as f64 * 1.7).cos())
            .collect();
        let y: Vec<f64> = (0..n).map(|i| (i as f64 * 0.05).cos() * 2.0).collect();
        let cfg = DetrendConfig {
            n_modes_removed: 4,
            remove_mean: true,
        };
        let sx = Series::from_values(x.clone(), "x").unwrap();
        let sy = Series::from_values(y.clone(), "y").unwrap();

        let once = fourier_detrend(&sx, &cfg).unwrap();
        let twice = fourier_detrend(&once, &cfg).unwrap();
        let norm = x.iter().map(|v| v.abs()).fold(0.0f64, f64::max);
        for (a, b) in once.values().iter().zip(twice.values()) {
            assert!((a - b).abs() <= 1e-10 * norm);
        }

        // detrend(2x + 3y) = 2 detrend(x) + 3 detrend(y)
        let combo: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 2.0 * a + 3.0 * b).collect();
        let sc = Series::from_values(combo, "c").unwrap();
        let dc = fourier_detrend(&sc, &cfg).unwrap();
        let dx = fourier_detrend(&sx, &cfg).unwrap();
        let dy = fourier_detrend(&sy, &cfg).unwrap();
        for i in 0..n {
            let want = 2.0 * dx.values()[i] + 3.0 * dy.values()[i];
            assert!((dc.values()[i] - want).abs() <= 1e-10 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn output_orthogonal_to_removed_modes() {
        let n = 256;
        let vals: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64;
                (t * 0.021).sin() + 0.1 * (t * 2.9).sin() + 0.05 * t
            })
            .collect();
        let s = Series::from_values(vals, "x").unwrap();
        let cfg = DetrendConfig {
            n_modes_removed: 2,
            remove_mean: true,
        };
        let out = fourier_detrend(&s, &cfg).unwrap();
        let scale: f64 = out.values().iter().map(|v| v * v).sum::<f64>().sqrt();
        for k in 1..=2usize {
            let (mut dc, mut ds) = (0.0, 0.0);
            for (i, v) in out.values().iter().enumerate() {
                let ph = 2.0 * PI * k as f64 * i as f64 / n as f64;
                dc += v * ph.cos();
                ds += v * ph.sin();
            }
            assert!(dc.abs() <= 1e-8 * scale.max(1.0));
            assert!(ds.abs() <= 1e-8 * scale.max(1.0));
        }
    }

    #[test]
    fn too_many_modes_is_domain_error() {
        let s = Series::from_values(vec![1.0; 10], "x").unwrap();
        let cfg = DetrendConfig {
            n_modes_removed: 6,
            remove_mean: false,
        };
        assert!(matches!(fourier_detrend(&s, &cfg), Err(Error::Domain(_))));
    }
}

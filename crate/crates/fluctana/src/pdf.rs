//! Empirical PDF estimation at multiple lags, self-similarity rescaling, and
//! the collapse-quality diagnostic separating mono- from multiscaling.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::ReturnSet;

pub const DEFAULT_COLLAPSE_THRESHOLD: f64 = 0.05;

/// Rice rule bin count, clamped to [25, 201].
pub fn default_bin_count(sample_count: usize) -> usize {
    let rice = (2.0 * (sample_count as f64).powf(1.0 / 3.0)).ceil() as usize;
    rice.clamp(25, 201)
}

/// Histogram density of variance-normalized returns at one lag.
///
/// `bin_centers` are uniform; `normalization` is the standard deviation that
/// was divided out, kept so raw-scale quantities can be reconstructed.
#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalPdf {
    pub lag: usize,
    pub bin_centers: Vec<f64>,
    pub density: Vec<f64>,
    pub normalization: f64,
    pub sample_count: usize,
}

impl EmpiricalPdf {
    pub fn bin_width(&self) -> f64 {
        self.bin_centers[1] - self.bin_centers[0]
    }

    /// Density of the bin containing x = 0 (bin-center convention).
    pub fn central_density(&self) -> f64 {
        let idx = self
            .bin_centers
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .expect("nonempty bins");
        self.density[idx]
    }

    /// Peak density in raw (un-normalized) units: P(0) of the actual returns.
    pub fn central_density_raw(&self) -> f64 {
        self.central_density() / self.normalization
    }

    /// Total probability Σ density · bin_width.
    pub fn total_probability(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.bin_width()
    }
}

/// Uniform-width histogram over [min, max] of the returns after dividing by
/// their standard deviation.
pub fn estimate_pdf(returns: &ReturnSet, bin_count: usize) -> Result<EmpiricalPdf> {
    let values = returns.values();
    let n = values.len();
    if n < 50 {
        return Err(Error::InsufficientData { needed: 50, got: n });
    }
    if bin_count < 8 {
        return Err(Error::Domain(format!(
            "bin_count must be at least 8, got {bin_count}"
        )));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    if var == 0.0 {
        return Err(Error::DegenerateDistribution);
    }
    let sigma = var.sqrt();
    let normalized: Vec<f64> = values.iter().map(|v| v / sigma).collect();
    let lo = normalized.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = normalized.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / bin_count as f64;

    let mut counts = vec![0usize; bin_count];
    for &v in &normalized {
        let mut idx = ((v - lo) / width) as usize;
        if idx >= bin_count {
            idx = bin_count - 1;
        }
        counts[idx] += 1;
    }
    let bin_centers = (0..bin_count)
        .map(|i| lo + (i as f64 + 0.5) * width)
        .collect();
    let density = counts
        .iter()
        .map(|&c| c as f64 / (n as f64 * width))
        .collect();
    Ok(EmpiricalPdf {
        lag: returns.lag(),
        bin_centers,
        density,
        normalization: sigma,
        sample_count: n,
    })
}

/// Apply the one-parameter rescaling family: bin centers × λ^{−α}, densities
/// × λ^{α}. Area is preserved exactly by the pairing.
pub fn rescale_pdf(pdf: &EmpiricalPdf, alpha: f64, lambda: f64) -> Result<EmpiricalPdf> {
    if lambda <= 0.0 {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    let shrink = lambda.powf(-alpha);
    let grow = lambda.powf(alpha);
    Ok(EmpiricalPdf {
        lag: pdf.lag,
        bin_centers: pdf.bin_centers.iter().map(|&c| c * shrink).collect(),
        density: pdf.density.iter().map(|&d| d * grow).collect(),
        normalization: pdf.normalization * shrink,
        sample_count: pdf.sample_count,
    })
}

/// Undo the variance normalization: centers × σ, densities / σ.
fn to_raw_scale(pdf: &EmpiricalPdf) -> EmpiricalPdf {
    let sigma = pdf.normalization;
    EmpiricalPdf {
        lag: pdf.lag,
        bin_centers: pdf.bin_centers.iter().map(|&c| c * sigma).collect(),
        density: pdf.density.iter().map(|&d| d / sigma).collect(),
        normalization: 1.0,
        sample_count: pdf.sample_count,
    }
}

/// Linear interpolation of the density at x; None outside the support or
/// where a bracketing density is nonpositive.
fn density_at(centers: &[f64], density: &[f64], x: f64) -> Option<f64> {
    if x < centers[0] || x > *centers.last().unwrap() {
        return None;
    }
    let idx = centers.partition_point(|&c| c < x);
    if idx == 0 {
        return positive(density[0]);
    }
    if idx >= centers.len() {
        return positive(density[centers.len() - 1]);
    }
    let (x0, x1) = (centers[idx - 1], centers[idx]);
    let (d0, d1) = (density[idx - 1], density[idx]);
    if x == x1 {
        return positive(d1);
    }
    if d0 <= 0.0 || d1 <= 0.0 {
        return None;
    }
    let t = (x - x0) / (x1 - x0);
    positive(d0 + t * (d1 - d0))
}

fn positive(d: f64) -> Option<f64> {
    if d > 0.0 {
        Some(d)
    } else {
        None
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CollapseReport {
    pub alpha: f64,
    pub reference_lag: usize,
    pub per_lag_distance: Vec<(usize, f64)>,
    pub collapsed: bool,
    pub threshold: f64,
}

/// Rescale every PDF onto the master PDF at `reference_lag` with λ = τ/τ_s
/// and measure the mean squared log-density difference over the central
/// region (|x| ≤ 3 reference standard deviations in raw units).
///
/// The comparison happens in raw (un-normalized) units so that the rescaling
/// exponent α actually matters; the per-lag variance normalization of
/// [`estimate_pdf`] is undone first.
pub fn collapse(
    pdfs: &[EmpiricalPdf],
    alpha: f64,
    reference_lag: usize,
    threshold: f64,
) -> Result<CollapseReport> {
    if pdfs.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: pdfs.len(),
        });
    }
    let reference = pdfs
        .iter()
        .find(|p| p.lag == reference_lag)
        .ok_or_else(|| Error::Domain(format!("reference lag {reference_lag} not in PDF set")))?;
    let ref_raw = to_raw_scale(reference);
    let central = 3.0 * reference.normalization;

    let mut per_lag_distance = Vec::with_capacity(pdfs.len());
    for pdf in pdfs {
        let lambda = pdf.lag as f64 / reference_lag as f64;
        let rescaled = rescale_pdf(&to_raw_scale(pdf), alpha, lambda)?;
        let mut sum = 0.0;
        let mut count = 0usize;
        for (&x, &dref) in ref_raw.bin_centers.iter().zip(&ref_raw.density) {
            if x.abs() > central || dref <= 0.0 {
                continue;
            }
            if let Some(d) = density_at(&rescaled.bin_centers, &rescaled.density, x) {
                let diff = d.ln() - dref.ln();
                sum += diff * diff;
                count += 1;
            }
        }
        if count == 0 {
            return Err(Error::NoOverlap);
        }
        per_lag_distance.push((pdf.lag, sum / count as f64));
    }
    let collapsed = per_lag_distance.iter().all(|&(_, d)| d <= threshold);
    Ok(CollapseReport {
        alpha,
        reference_lag,
        per_lag_distance,
        collapsed,
        threshold,
    })
}

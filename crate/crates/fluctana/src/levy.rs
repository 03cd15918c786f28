//! Symmetric Lévy-stable model: density via numerical inversion of the
//! characteristic function, the closed-form peak law, and the peak-scaling
//! fit of the stability index μ across lags.

use serde::Serialize;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fit::loglog_fit;
use crate::pdf::EmpiricalPdf;

/// (μ, γ, Δs) of the symmetric stable density with characteristic function
/// exp(−γ Δs |q|^μ).
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct LevyModel {
    pub mu: f64,
    pub gamma: f64,
    pub delta_s: f64,
}

impl LevyModel {
    pub fn new(mu: f64, gamma: f64, delta_s: f64) -> Result<Self> {
        if !(mu > 0.0 && mu <= 2.0) {
            return Err(Error::Domain(format!("mu must lie in (0, 2], got {mu}")));
        }
        if gamma <= 0.0 {
            return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
        }
        if delta_s <= 0.0 {
            return Err(Error::Domain(format!(
                "delta_s must be positive, got {delta_s}"
            )));
        }
        Ok(LevyModel { mu, gamma, delta_s })
    }

    /// Combined scale c = γ·Δs of the characteristic function.
    pub fn scale(&self) -> f64 {
        self.gamma * self.delta_s
    }
}

// exp(-c Q^mu) < 1e-12  =>  Q > (12 ln 10 / c)^(1/mu)
const ENVELOPE_LOG_CUTOFF: f64 = 27.631021115928547; // 12 ln 10

/// Density L_μ(x) = (1/π) ∫₀^∞ exp(−c q^μ) cos(q x) dq by panel-wise adaptive
/// quadrature; panels are aligned to the cosine's half-periods once x is
/// large enough for the integrand to oscillate inside the envelope cutoff.
///
/// Absolute error target 1e-8; tiny negative residue is clamped to zero.
pub fn levy_density(model: &LevyModel, x: f64) -> Result<f64> {
    let c = model.scale();
    let mu = model.mu;
    let q_max = (ENVELOPE_LOG_CUTOFF / c).powf(1.0 / mu);
    let ax = x.abs();
    let integrand = |q: f64| (-c * q.powf(mu)).exp() * (q * ax).cos();

    // panel boundaries: half-period spacing π/|x|, at least 8 panels
    let half_period = if ax > 0.0 { PI / ax } else { f64::INFINITY };
    let n_panels = if half_period.is_finite() {
        ((q_max / half_period).ceil() as usize).max(8)
    } else {
        8
    };
    let step = q_max / n_panels as f64;

    let mut total = 0.0;
    let mut worst_err: f64 = 0.0;
    let panel_tol = 1e-11 / n_panels as f64;
    for i in 0..n_panels {
        let a = i as f64 * step;
        let b = a + step;
        let (val, err) = adaptive_simpson(&integrand, a, b, panel_tol.max(1e-14));
        total += val;
        worst_err = worst_err.max(err);
    }
    if worst_err > 1e-8 {
        return Err(Error::Numerical(format!(
            "quadrature did not converge; achieved tolerance {worst_err:.3e}"
        )));
    }
    let density = total / PI;
    if density < -1e-10 {
        return Err(Error::Numerical(format!(
            "quadrature produced negative density {density:.3e}"
        )));
    }
    Ok(density.max(0.0))
}

/// Recursive adaptive Simpson; returns (value, error estimate).
fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 40)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || depth == 0 {
        (left + right + delta / 15.0, delta.abs() / 15.0)
    } else {
        let (lv, le) = simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1);
        let (rv, re) = simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
        (lv + rv, le + re)
    }
}

/// Closed-form maximum event probability P(0) = Γ(1/μ) / (π μ (γΔs)^{1/μ}).
pub fn levy_peak(model: &LevyModel) -> f64 {
    let c = model.scale();
    gamma(1.0 / model.mu) / (PI * model.mu * c.powf(1.0 / model.mu))
}

/// Density sampled on a grid, for plot export and overlays.
pub fn levy_overlay(model: &LevyModel, grid: &[f64]) -> Result<Vec<f64>> {
    grid.iter().map(|&x| levy_density(model, x)).collect()
}

/// Peak-scaling fit of the stability index across lags.
#[derive(Debug, Clone, Serialize)]
pub struct LevyFit {
    pub mu_hat: f64,
    pub mu_stderr: f64,
    pub gamma_hat: f64,
    /// Raw log-log slope of P(0) vs τ (μ_hat = −1/slope before clamping).
    pub raw_slope: f64,
    /// (τ, raw-scale P(0)) pairs used in the fit.
    pub peak_table: Vec<(usize, f64)>,
    pub fit_range: (f64, f64),
}

// A fit marginally past the Gaussian boundary (sampling noise around mu = 2)
// is clamped to 2; anything beyond the slack is a stability violation.
const GAUSSIAN_CLAMP_SLACK: f64 = 0.25;

/// Fit μ from the lag dependence of the PDF peak: P(0) ∝ τ^{−1/μ}.
///
/// Peaks are taken from the central bin of each PDF, converted back to raw
/// (un-normalized) units. γ is then matched at the smallest lag via the
/// closed-form peak law.
pub fn fit_mu_from_peaks(pdfs: &[EmpiricalPdf]) -> Result<LevyFit> {
    if pdfs.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: pdfs.len(),
        });
    }
    let mut peak_table: Vec<(usize, f64)> = Vec::with_capacity(pdfs.len());
    for pdf in pdfs {
        let p0 = pdf.central_density_raw();
        if p0 <= 0.0 {
            return Err(Error::Domain(format!(
                "PDF at lag {} has nonpositive central density",
                pdf.lag
            )));
        }
        peak_table.push((pdf.lag, p0));
    }
    peak_table.sort_by_key(|&(tau, _)| tau);
    let xs: Vec<f64> = peak_table.iter().map(|&(t, _)| t as f64).collect();
    let ys: Vec<f64> = peak_table.iter().map(|&(_, p)| p).collect();
    let fit_range = (xs[0], *xs.last().unwrap());
    let fit = loglog_fit(&xs, &ys, fit_range)?;
    if fit.slope >= 0.0 {
        return Err(Error::NonDecayingPeak { slope: fit.slope });
    }
    let raw_mu = -1.0 / fit.slope;
    let mu_stderr = fit.stderr / (fit.slope * fit.slope);
    let mu_hat = if raw_mu <= 2.0 {
        raw_mu
    } else if raw_mu <= 2.0 + GAUSSIAN_CLAMP_SLACK.max(3.0 * mu_stderr) {
        2.0
    } else {
        return Err(Error::StabilityViolation { mu: raw_mu });
    };
    if mu_hat <= 0.0 {
        return Err(Error::StabilityViolation { mu: mu_hat });
    }

    // match P(0) at the reference (smallest) lag: gamma = (Γ(1/μ)/(π μ P0))^μ / τ
    let (tau_ref, p0_ref) = peak_table[0];
    let gamma_hat =
        (gamma(1.0 / mu_hat) / (PI * mu_hat * p0_ref)).powf(mu_hat) / tau_ref as f64;

    Ok(LevyFit {
        mu_hat,
        mu_stderr,
        gamma_hat,
        raw_slope: fit.slope,
        peak_table,
        fit_range,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(mu: f64, c: f64) -> LevyModel {
        LevyModel::new(mu, c, 1.0).unwrap()
    }

    #[test]
    fn gaussian_closed_form() {
        // mu = 2, c = 1: exp(-x^2/4) / (2 sqrt(pi))
        let m = model(2.0, 1.0);
        for i in 0..=40 {
            let x = -10.0 + 0.5 * i as f64;
            let want = (-x * x / 4.0).exp() / (2.0 * PI.sqrt());
            let got = levy_density(&m, x).unwrap();
            assert!((got - want).abs() <= 1e-8, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn cauchy_closed_form() {
        // mu = 1, c = 1: (1/pi) / (1 + x^2)
        let m = model(1.0, 1.0);
        for i in 0..=40 {
            let x = -10.0 + 0.5 * i as f64;
            let want = 1.0 / (PI * (1.0 + x * x));
            let got = levy_density(&m, x).unwrap();
            assert!((got - want).abs() <= 1e-8, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn peak_quadrature_matches_closed_form() {
        // cross-check of the two independent routes at mu = 1.5
        let m = model(1.5, 1.0);
        let quad = levy_density(&m, 0.0).unwrap();
        let closed = gamma(1.0 / 1.5) / (PI * 1.5);
        assert!((quad - closed).abs() <= 1e-6);
        assert!((quad - levy_peak(&m)).abs() <= 1e-6);
    }

    #[test]
    fn peak_closed_forms() {
        assert!((levy_peak(&model(1.0, 1.0)) - 1.0 / PI).abs() < 1e-12);
        assert!((levy_peak(&model(2.0, 1.0)) - 1.0 / (2.0 * PI.sqrt())).abs() < 1e-12);
        // doubling delta_s divides P(0) by 2^{1/mu}
        let a = LevyModel::new(1.4, 0.8, 1.0).unwrap();
        let b = LevyModel::new(1.4, 0.8, 2.0).unwrap();
        assert!((levy_peak(&a) / levy_peak(&b) - 2.0f64.powf(1.0 / 1.4)).abs() < 1e-12);
    }

    #[test]
    fn peak_consistency_over_parameter_grid() {
        for &mu in &[0.8, 1.2, 1.5, 1.92, 2.0] {
            for &c in &[0.5, 1.0, 2.0] {
                let m = model(mu, c);
                let d0 = levy_density(&m, 0.0).unwrap();
                assert!(
                    (d0 - levy_peak(&m)).abs() <= 1e-6,
                    "mu={mu} c={c}: {d0} vs {}",
                    levy_peak(&m)
                );
            }
        }
    }

    #[test]
    fn evenness_and_monotone_decay() {
        let m = model(1.5, 1.0);
        let mut prev = f64::INFINITY;
        for i in 0..=30 {
            let x = 0.25 * i as f64;
            let d = levy_density(&m, x).unwrap();
            let dm = levy_density(&m, -x).unwrap();
            assert!((d - dm).abs() <= 1e-10);
            assert!(d <= prev + 1e-9, "not nonincreasing at x={x}");
            prev = d;
        }
    }

    #[test]
    fn self_similarity_scaling() {
        // density with (mu, gamma, k*ds) at x equals
        // k^{-1/mu} * density with (mu, gamma, ds) at x * k^{-1/mu}
        let mu = 1.3;
        let base = LevyModel::new(mu, 0.9, 1.0).unwrap();
        let k = 3.0f64;
        let scaled = LevyModel::new(mu, 0.9, k).unwrap();
        let f = k.powf(-1.0 / mu);
        for &x in &[0.0, 0.7, 2.0, 5.5] {
            let lhs = levy_density(&scaled, x).unwrap();
            let rhs = f * levy_density(&base, x * f).unwrap();
            assert!((lhs - rhs).abs() <= 1e-8, "x={x}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn overlay_symmetric_and_normalized() {
        let m = model(1.5, 1.0);
        let grid: Vec<f64> = (-500..=500).map(|i| i as f64 * 0.1).collect();
        let dens = levy_overlay(&m, &grid).unwrap();
        let n = grid.len();
        for i in 0..n / 2 {
            assert!((dens[i] - dens[n - 1 - i]).abs() <= 1e-10);
        }
        // trapezoid integral over |x| <= 50
        let mut integral = 0.0;
        for i in 1..n {
            integral += 0.5 * (dens[i] + dens[i - 1]) * (grid[i] - grid[i - 1]);
        }
        assert!((integral - 1.0).abs() <= 0.01, "integral {integral}");
        assert_eq!(
            levy_overlay(&m, &[0.0]).unwrap()[0],
            levy_density(&m, 0.0).unwrap()
        );
    }

    #[test]
    fn model_validation() {
        assert!(LevyModel::new(0.0, 1.0, 1.0).is_err());
        assert!(LevyModel::new(2.1, 1.0, 1.0).is_err());
        assert!(LevyModel::new(1.5, 0.0, 1.0).is_err());
        assert!(LevyModel::new(1.5, 1.0, -1.0).is_err());
    }

    /// Build a fake EmpiricalPdf whose central bin density encodes a given
    /// raw peak (normalization = 1 so raw == stored).
    fn pdf_with_peak(lag: usize, p0: f64) -> EmpiricalPdf {
        let bin_centers: Vec<f64> = (-10..=10).map(|i| i as f64 * 0.1).collect();
        let density = bin_centers
            .iter()
            .map(|&x| p0 * (-x.abs()).exp())
            .collect();
        EmpiricalPdf {
            lag,
            bin_centers,
            density,
            normalization: 1.0,
            sample_count: 1000,
        }
    }

    #[test]
    fn exact_peak_law_recovers_mu() {
        let mu = 1.6;
        let c = 0.7;
        let pdfs: Vec<EmpiricalPdf> = (1..=8)
            .map(|tau| {
                let m = LevyModel::new(mu, c, tau as f64).unwrap();
                pdf_with_peak(tau, levy_peak(&m))
            })
            .collect();
        let fit = fit_mu_from_peaks(&pdfs).unwrap();
        assert!((fit.mu_hat - mu).abs() < 1e-10);
        assert!((fit.gamma_hat - c).abs() < 1e-8);
        assert!(fit.mu_stderr < 1e-10);
    }

    #[test]
    fn growing_peaks_rejected() {
        let pdfs: Vec<EmpiricalPdf> = (1..=5).map(|tau| pdf_with_peak(tau, tau as f64)).collect();
        assert!(matches!(
            fit_mu_from_peaks(&pdfs),
            Err(Error::NonDecayingPeak { .. })
        ));
    }

    #[test]
    fn too_shallow_decay_is_stability_violation() {
        // P(0) ~ tau^{-0.2} => raw mu = 5, far beyond the Gaussian slack
        let pdfs: Vec<EmpiricalPdf> = (1..=5)
            .map(|tau| pdf_with_peak(tau, (tau as f64).powf(-0.2)))
            .collect();
        assert!(matches!(
            fit_mu_from_peaks(&pdfs),
            Err(Error::StabilityViolation { .. })
        ));
    }

    #[test]
    fn slightly_super_gaussian_clamps_to_two() {
        // P(0) ~ tau^{-1/2.1}: raw mu 2.1, inside the clamp slack
        let pdfs: Vec<EmpiricalPdf> = (1..=6)
            .map(|tau| pdf_with_peak(tau, (tau as f64).powf(-1.0 / 2.1)))
            .collect();
        let fit = fit_mu_from_peaks(&pdfs).unwrap();
        assert_eq!(fit.mu_hat, 2.0);
        assert!((fit.raw_slope + 1.0 / 2.1).abs() < 1e-10);
    }

    #[test]
    fn needs_three_pdfs() {
        let pdfs = vec![pdf_with_peak(1, 0.3), pdf_with_peak(2, 0.2)];
        assert!(matches!(
            fit_mu_from_peaks(&pdfs),
            Err(Error::InsufficientData { .. })
        ));
    }
}

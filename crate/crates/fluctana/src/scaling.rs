//! Structure functions S^n(τ), their scaling exponents ζ_n, the σ(τ)
//! power-law fit, and the mono/multifractal linearity test.
//!
//! All orders use the absolute-moment convention, which keeps odd orders
//! well defined.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::loglog_fit;
use crate::series::{compute_returns, Series};

pub use crate::fit::{linear_fit, LinFit};

/// Default order grid; higher orders excluded because their statistical
/// errors grow quickly.
pub fn default_order_grid() -> Vec<f64> {
    vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]
}

pub const DEFAULT_ZETA_FIT_RANGE: (f64, f64) = (1.0, 100.0);
pub const DEFAULT_NONLINEARITY_THRESHOLD: f64 = 0.05;

/// S^n(τ) over a grid of lags and orders.
#[derive(Debug, Clone, Serialize)]
pub struct StructureSet {
    pub lags: Vec<usize>,
    pub orders: Vec<f64>,
    /// s_values[ni][ti] = S^{orders[ni]}(lags[ti])
    pub s_values: Vec<Vec<f64>>,
}

/// Empirical mean of |δp|^n.
pub fn structure_function(returns: &[f64], order: f64) -> Result<f64> {
    if returns.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if order <= 0.0 {
        return Err(Error::Domain(format!("order must be positive, got {order}")));
    }
    Ok(returns.iter().map(|&v| v.abs().powf(order)).sum::<f64>() / returns.len() as f64)
}

/// Build the full S^n(τ) grid from overlapping increments of `series`.
pub fn compute_structure_set(
    series: &Series,
    lags: &[usize],
    orders: &[f64],
) -> Result<StructureSet> {
    if lags.is_empty() || orders.is_empty() {
        return Err(Error::Domain("lag and order grids must be nonempty".into()));
    }
    let mut s_values = vec![Vec::with_capacity(lags.len()); orders.len()];
    for &tau in lags {
        let r = compute_returns(series, tau)?;
        for (ni, &n) in orders.iter().enumerate() {
            s_values[ni].push(structure_function(r.values(), n)?);
        }
    }
    Ok(StructureSet {
        lags: lags.to_vec(),
        orders: orders.to_vec(),
        s_values,
    })
}

/// ζ_n slopes plus the constrained monoscaling fit ζ_n = α·n.
#[derive(Debug, Clone, Serialize)]
pub struct ZetaExponents {
    pub orders: Vec<f64>,
    pub zeta: Vec<f64>,
    pub stderr: Vec<f64>,
    pub fit_range: (f64, f64),
    /// Best-fit α for the constrained line ζ_n = α·n.
    pub linear_alpha: f64,
    /// max_n |ζ_n − α·n|
    pub nonlinearity: f64,
}

pub fn fit_zeta(structure: &StructureSet, fit_range: (f64, f64)) -> Result<ZetaExponents> {
    let xs: Vec<f64> = structure.lags.iter().map(|&t| t as f64).collect();
    let mut zeta = Vec::with_capacity(structure.orders.len());
    let mut stderr = Vec::with_capacity(structure.orders.len());
    for sn in &structure.s_values {
        let fit = loglog_fit(&xs, sn, fit_range)?;
        zeta.push(fit.slope);
        stderr.push(fit.stderr);
    }
    // constrained least squares through the origin: α = Σ n ζ_n / Σ n²
    let num: f64 = structure.orders.iter().zip(&zeta).map(|(&n, &z)| n * z).sum();
    let den: f64 = structure.orders.iter().map(|&n| n * n).sum();
    let linear_alpha = num / den;
    let nonlinearity = structure
        .orders
        .iter()
        .zip(&zeta)
        .map(|(&n, &z)| (z - linear_alpha * n).abs())
        .fold(0.0f64, f64::max);
    Ok(ZetaExponents {
        orders: structure.orders.clone(),
        zeta,
        stderr,
        fit_range,
        linear_alpha,
        nonlinearity,
    })
}

/// σ(τ) = [S²(τ)]^{1/2} table and its log-log power-law exponent.
#[derive(Debug, Clone, Serialize)]
pub struct SigmaFit {
    pub table: Vec<(usize, f64)>,
    pub alpha: f64,
    pub stderr: f64,
    pub fit_range: (f64, f64),
}

pub fn sigma_tau(series: &Series, lags: &[usize], fit_range: (f64, f64)) -> Result<SigmaFit> {
    if lags.len() < 3 {
        return Err(Error::FitRange(format!(
            "need at least 3 lags, got {}",
            lags.len()
        )));
    }
    let mut table = Vec::with_capacity(lags.len());
    for &tau in lags {
        let r = compute_returns(series, tau)?;
        table.push((tau, structure_function(r.values(), 2.0)?.sqrt()));
    }
    let xs: Vec<f64> = table.iter().map(|&(t, _)| t as f64).collect();
    let ys: Vec<f64> = table.iter().map(|&(_, s)| s).collect();
    let fit = loglog_fit(&xs, &ys, fit_range)?;
    Ok(SigmaFit {
        table,
        alpha: fit.slope,
        stderr: fit.stderr,
        fit_range,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Fractality {
    Monofractal,
    Multifractal,
}

/// Verdict with both components reported: monofractal iff the deviation from
/// the constrained line stays under `threshold` AND ζ_n is strictly
/// increasing.
#[derive(Debug, Clone, Serialize)]
pub struct MultifractalityVerdict {
    pub verdict: Fractality,
    pub nonlinearity: f64,
    pub zeta_strictly_increasing: bool,
    pub threshold: f64,
}

pub fn multifractality_test(zeta: &ZetaExponents, threshold: f64) -> Result<MultifractalityVerdict> {
    if zeta.orders.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: zeta.orders.len(),
        });
    }
    let increasing = zeta.zeta.windows(2).all(|w| w[1] > w[0]);
    let verdict = if zeta.nonlinearity <= threshold && increasing {
        Fractality::Monofractal
    } else {
        Fractality::Multifractal
    };
    Ok(MultifractalityVerdict {
        verdict,
        nonlinearity: zeta.nonlinearity,
        zeta_strictly_increasing: increasing,
        threshold,
    })
}

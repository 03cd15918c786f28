//! Scaling analysis of noisy, non-stationary time series.
//!
//! The toolkit covers the full pipeline from a raw scalar series to scaling
//! diagnostics:
//!
//! - [`series`]: returns/increments at arbitrary lags and descriptive
//!   statistics (mean, std, skewness, raw kurtosis).
//! - [`fdetrend`]: Fourier-domain removal of slow sinusoidal trends.
//! - [`mfdfa`]: multifractal detrended fluctuation analysis — F_q(s)
//!   surfaces, generalized exponents α(q), the Hurst exponent H = α(2), and
//!   scaling-break detection.
//! - [`scaling`]: structure functions S^n(τ), ζ_n exponents, the σ(τ)
//!   power law, and the mono/multifractal verdict.
//! - [`pdf`]: empirical PDFs across lags, self-similarity rescaling, and the
//!   collapse-quality diagnostic.
//! - [`levy`]: symmetric Lévy-stable densities by characteristic-function
//!   inversion, the closed-form peak law, and peak-scaling fits of μ.
//! - [`synth`]: seeded generators with analytically known exponents
//!   (white noise, fGn, stable flights, binomial cascades) used as oracles.
//! - [`pipeline`]: CSV ingestion, configuration, orchestration, and
//!   deterministic JSON/TSV export.
//!
//! See the `examples/` directory for one runnable example per capability,
//! and the `fluctana` binary for the equivalent subcommands.

pub mod error;
pub mod fdetrend;
pub mod fit;
pub mod levy;
pub mod mfdfa;
pub mod pdf;
pub mod pipeline;
pub mod scaling;
pub mod series;
pub mod synth;

pub use error::{Error, Result};
pub use series::{compute_returns, summary_stats, ReturnSet, Series, SummaryStats};

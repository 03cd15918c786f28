//! Ingestion, configuration, end-to-end orchestration, and machine-readable
//! exports: a canonical key-sorted JSON result document plus plot-ready TSV
//! files, byte-identical across reruns of the same config and input.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::fdetrend::{fourier_detrend, DetrendConfig};
use crate::levy::{LevyFit, LevyModel};
use crate::mfdfa::{
    default_q_grid, default_scale_grid, detect_scaling_break, fit_exponents, mfdfa_surface,
    FluctuationSurface, ScalingExponents, DEFAULT_BREAK_SLOPE_THRESHOLD,
};
use crate::pdf::{
    collapse, default_bin_count, estimate_pdf, CollapseReport, EmpiricalPdf,
    DEFAULT_COLLAPSE_THRESHOLD,
};
use crate::scaling::{
    compute_structure_set, default_order_grid, fit_zeta, multifractality_test, sigma_tau,
    MultifractalityVerdict, SigmaFit, StructureSet, ZetaExponents,
    DEFAULT_NONLINEARITY_THRESHOLD, DEFAULT_ZETA_FIT_RANGE,
};
use crate::series::{compute_returns, summary_stats, Series, SummaryStats};
use crate::synth::{generate, GenSpec};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "FLUCTANA_OUTDIR";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum InputSpec {
    Csv { path: PathBuf },
    Generator { spec: GenSpec },
}

/// Full pipeline configuration. `None` grids fall back to data-dependent
/// defaults, which are echoed resolved into the result document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct RunConfig {
    pub input: InputSpec,
    /// Lags for structure functions and sigma(tau).
    pub lags: Vec<usize>,
    /// MF-DFA scale grid; default is ~20 log-spaced points in [10, N/4].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scales: Option<Vec<usize>>,
    pub q_orders: Vec<f64>,
    pub sf_orders: Vec<f64>,
    pub mfdfa_fit_range: (f64, f64),
    pub zeta_fit_range: (f64, f64),
    pub poly_order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detrend: Option<DetrendConfig>,
    /// Histogram bins; default is the Rice rule clamped to [25, 201].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bin_count: Option<usize>,
    pub collapse_threshold: f64,
    pub nonlinearity_threshold: f64,
    /// Lags whose PDFs are exported as the four-panel figure analog.
    pub pdf_lags: Vec<usize>,
    pub micro_lags: Vec<usize>,
    pub macro_lags: Vec<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: InputSpec::Generator {
                spec: GenSpec {
                    kind: crate::synth::GenKind::GaussianNoise,
                    length: 8192,
                    seed: 0,
                },
            },
            lags: default_lag_grid(),
            scales: None,
            q_orders: default_q_grid(),
            sf_orders: default_order_grid(),
            mfdfa_fit_range: (10.0, 100.0),
            zeta_fit_range: DEFAULT_ZETA_FIT_RANGE,
            poly_order: 1,
            detrend: None,
            bin_count: None,
            collapse_threshold: DEFAULT_COLLAPSE_THRESHOLD,
            nonlinearity_threshold: DEFAULT_NONLINEARITY_THRESHOLD,
            pdf_lags: vec![1, 20, 60, 200],
            micro_lags: vec![1, 2, 4, 8],
            macro_lags: vec![30, 60, 120, 200],
        }
    }
}

/// Default lag grid: every day up to 10, then log-spaced out to 200.
pub fn default_lag_grid() -> Vec<usize> {
    let mut lags: Vec<usize> = (1..=10).collect();
    lags.extend([12, 15, 20, 25, 30, 40, 50, 60, 80, 100, 120, 150, 200]);
    lags
}

#[derive(Debug, Clone, Serialize)]
pub struct MfdfaSection {
    pub surface: FluctuationSurface,
    pub exponents: ScalingExponents,
    pub hurst: f64,
    pub break_scale: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureSection {
    pub set: StructureSet,
    pub zeta: ZetaExponents,
    pub verdict: MultifractalityVerdict,
    pub sigma: SigmaFit,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevySection {
    pub fit: LevyFit,
    pub model: LevyModel,
}

/// Everything the pipeline computed, in one self-contained document.
/// Serialized as canonical key-sorted JSON so reruns diff cleanly.
#[derive(Debug, Clone, Serialize)]
pub struct ResultDocument {
    pub tool_version: String,
    pub input_hash: String,
    pub config: RunConfig,
    pub series: Series,
    pub summary: SummaryStats,
    pub mfdfa: MfdfaSection,
    pub structure: StructureSection,
    pub pdfs: Vec<EmpiricalPdf>,
    pub micro_pdfs: Vec<EmpiricalPdf>,
    pub macro_pdfs: Vec<EmpiricalPdf>,
    pub collapse_micro: CollapseReport,
    pub collapse_macro: Option<CollapseReport>,
    pub levy: LevySection,
}

/// Parse `date,value` rows (ISO-8601 dates or integer indices, optional
/// header). Positions are assigned in row order; timestamps must be strictly
/// increasing.
pub fn ingest_csv(path: &Path) -> Result<Series> {
    let text = fs::read_to_string(path)?;
    parse_csv(&text, &path.display().to_string())
}

pub fn parse_csv(text: &str, label: &str) -> Result<Series> {
    let mut timestamps = Vec::new();
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.splitn(2, ',');
        let date_field = parts.next().unwrap_or("").trim();
        let value_field = parts
            .next()
            .ok_or_else(|| Error::Parse {
                line: line_no,
                message: "expected `date,value`".into(),
            })?
            .trim();
        let ts = match parse_timestamp(date_field) {
            Some(ts) => ts,
            None if idx == 0 => continue, // header row
            None => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unparseable date `{date_field}`"),
                })
            }
        };
        let value: f64 = value_field.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("unparseable value `{value_field}`"),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("non-finite value `{value_field}`"),
            });
        }
        if let Some(&last) = timestamps.last() {
            if ts <= last {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("timestamp {date_field} not strictly increasing"),
                });
            }
        }
        timestamps.push(ts);
        values.push(value);
    }
    Series::new(timestamps, values, label)
}

fn parse_timestamp(field: &str) -> Option<i64> {
    if let Ok(n) = field.parse::<i64>() {
        return Some(n);
    }
    field
        .parse::<chrono::NaiveDate>()
        .ok()
        .map(|d| chrono::Datelike::num_days_from_ce(&d) as i64)
}

fn load_input(input: &InputSpec) -> Result<(Series, String)> {
    match input {
        InputSpec::Csv { path } => {
            let bytes = fs::read(path)?;
            let hash = hex_digest(&bytes);
            let series = parse_csv(
                std::str::from_utf8(&bytes).map_err(|_| Error::Parse {
                    line: 0,
                    message: "input is not valid UTF-8".into(),
                })?,
                &path.display().to_string(),
            )?;
            Ok((series, hash))
        }
        InputSpec::Generator { spec } => {
            let series = generate(spec)?;
            let canonical = canonical_json(spec)?;
            Ok((series, hex_digest(canonical.as_bytes())))
        }
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    let mut s = String::with_capacity(64);
    for b in out {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// Serialize with keys sorted at every level.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)
        .map_err(|e| Error::Numerical(format!("serialization failed: {e}")))?;
    serde_json::to_string_pretty(&v).map_err(|e| Error::Numerical(format!("serialization failed: {e}")))
}

fn stage<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| e.in_stage(name))
}

/// Run every analysis stage: ingest/generate → optional Fourier detrend →
/// returns and summary stats → MF-DFA → structure functions and σ(τ) →
/// PDFs → collapse → Lévy peak fit.
pub fn run_pipeline(config: &RunConfig) -> Result<ResultDocument> {
    let (raw_series, input_hash) = stage("ingest", load_input(&config.input))?;
    let series = match &config.detrend {
        Some(cfg) => stage("detrend", fourier_detrend(&raw_series, cfg))?,
        None => raw_series,
    };
    let n = series.len();

    let usable = |lags: &[usize]| -> Vec<usize> {
        lags.iter().copied().filter(|&l| l + 50 < n).collect()
    };
    let lags = usable(&config.lags);
    if lags.len() < 3 {
        return Err(Error::Domain(format!(
            "fewer than 3 usable lags for series of length {n}"
        ))
        .in_stage("config"));
    }

    let first_lag = lags[0];
    let returns1 = stage("returns", compute_returns(&series, first_lag))?;
    let summary = stage("stats", summary_stats(returns1.values()))?;

    // MF-DFA on the returns at the smallest lag
    let scales = match &config.scales {
        Some(s) => s.clone(),
        None => default_scale_grid(returns1.len()),
    };
    let surface = stage(
        "mfdfa",
        mfdfa_surface(returns1.values(), &scales, &config.q_orders, config.poly_order),
    )?;
    let exponents = stage("mfdfa", fit_exponents(&surface, config.mfdfa_fit_range))?;
    let hurst = exponents
        .hurst()
        .ok_or_else(|| Error::Domain("q = 2 missing from q_orders".into()).in_stage("mfdfa"))?;
    let break_scale = if surface.scales.len() >= 8 {
        stage(
            "mfdfa",
            detect_scaling_break(&surface, 2.0, 3, DEFAULT_BREAK_SLOPE_THRESHOLD),
        )?
    } else {
        None
    };

    // structure functions, zeta, sigma
    let set = stage(
        "structure",
        compute_structure_set(&series, &lags, &config.sf_orders),
    )?;
    let zeta = stage("structure", fit_zeta(&set, config.zeta_fit_range))?;
    let verdict = stage(
        "structure",
        multifractality_test(&zeta, config.nonlinearity_threshold),
    )?;
    let sigma = stage("structure", sigma_tau(&series, &lags, config.zeta_fit_range))?;

    // PDFs
    let estimate = |lag_list: &[usize]| -> Result<Vec<EmpiricalPdf>> {
        lag_list
            .iter()
            .filter(|&&l| l + 50 < n)
            .map(|&l| {
                let r = compute_returns(&series, l)?;
                let bins = config.bin_count.unwrap_or_else(|| default_bin_count(r.len()));
                estimate_pdf(&r, bins)
            })
            .collect()
    };
    let pdfs = stage("pdf", estimate(&config.pdf_lags))?;
    let micro_pdfs = stage("pdf", estimate(&config.micro_lags))?;
    let macro_pdfs = stage("pdf", estimate(&config.macro_lags))?;
    if micro_pdfs.len() < 3 {
        return Err(Error::Domain("need at least 3 micro lags".into()).in_stage("pdf"));
    }

    // collapse anchored at the smallest micro lag, using the sigma exponent
    let alpha = sigma.alpha;
    let micro_ref = micro_pdfs.iter().map(|p| p.lag).min().unwrap();
    let collapse_micro = stage(
        "collapse",
        collapse(&micro_pdfs, alpha, micro_ref, config.collapse_threshold),
    )?;
    let collapse_macro = if macro_pdfs.len() >= 2 {
        let macro_ref = macro_pdfs.iter().map(|p| p.lag).min().unwrap();
        Some(stage(
            "collapse",
            collapse(&macro_pdfs, alpha, macro_ref, config.collapse_threshold),
        )?)
    } else {
        None
    };

    // Levy fit from micro-scale peaks
    let fit = stage("levy", crate::levy::fit_mu_from_peaks(&micro_pdfs))?;
    let model = stage(
        "levy",
        LevyModel::new(fit.mu_hat, fit.gamma_hat, micro_ref as f64),
    )?;

    Ok(ResultDocument {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        input_hash,
        config: config.clone(),
        series,
        summary,
        mfdfa: MfdfaSection {
            surface,
            exponents,
            hurst,
            break_scale,
        },
        structure: StructureSection {
            set,
            zeta,
            verdict,
            sigma,
        },
        pdfs,
        micro_pdfs,
        macro_pdfs,
        collapse_micro,
        collapse_macro,
        levy: LevySection { fit, model },
    })
}

/// The plot-data families exported alongside the JSON document.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Series,
    Fluctuation,
    PdfLags,
    MicroPdfs,
    MacroPdfs,
    StructureFunctions,
    Zeta,
    SigmaTau,
    RescaledLevy,
}

impl PlotKind {
    pub const ALL: [PlotKind; 9] = [
        PlotKind::Series,
        PlotKind::Fluctuation,
        PlotKind::PdfLags,
        PlotKind::MicroPdfs,
        PlotKind::MacroPdfs,
        PlotKind::StructureFunctions,
        PlotKind::Zeta,
        PlotKind::SigmaTau,
        PlotKind::RescaledLevy,
    ];

    pub fn file_name(&self) -> &'static str {
        match self {
            PlotKind::Series => "series.tsv",
            PlotKind::Fluctuation => "fluctuation.tsv",
            PlotKind::PdfLags => "pdfs.tsv",
            PlotKind::MicroPdfs => "pdfs_micro.tsv",
            PlotKind::MacroPdfs => "pdfs_macro.tsv",
            PlotKind::StructureFunctions => "structure_functions.tsv",
            PlotKind::Zeta => "zeta.tsv",
            PlotKind::SigmaTau => "sigma_tau.tsv",
            PlotKind::RescaledLevy => "rescaled_levy.tsv",
        }
    }
}

fn fmt9(v: f64) -> String {
    format!("{v:.8e}")
}

/// Render one plot family as TSV: a single `#` header line naming the
/// columns, then fixed 9-significant-digit numeric rows.
pub fn export_plot_data(doc: &ResultDocument, which: PlotKind) -> Result<String> {
    let mut out = String::new();
    match which {
        PlotKind::Series => {
            out.push_str("# day\tvalue\n");
            for (t, v) in doc.series.timestamps().iter().zip(doc.series.values()) {
                let _ = writeln!(out, "{t}\t{}", fmt9(*v));
            }
        }
        PlotKind::Fluctuation => {
            let qi = doc
                .mfdfa
                .surface
                .orders
                .iter()
                .position(|&q| q == 2.0)
                .ok_or_else(|| Error::NotComputed {
                    stage: "F_2(s)".into(),
                })?;
            out.push_str("# s_days\tF2\n");
            for (s, f) in doc
                .mfdfa
                .surface
                .scales
                .iter()
                .zip(&doc.mfdfa.surface.f_values[qi])
            {
                let _ = writeln!(out, "{s}\t{}", fmt9(*f));
            }
        }
        PlotKind::PdfLags | PlotKind::MicroPdfs | PlotKind::MacroPdfs => {
            let pdfs = match which {
                PlotKind::PdfLags => &doc.pdfs,
                PlotKind::MicroPdfs => &doc.micro_pdfs,
                _ => &doc.macro_pdfs,
            };
            if pdfs.is_empty() {
                return Err(Error::NotComputed {
                    stage: format!("{which:?}"),
                });
            }
            out.push_str("# lag_days\tbin_center_normalized\tdensity\n");
            for pdf in pdfs {
                for (c, d) in pdf.bin_centers.iter().zip(&pdf.density) {
                    let _ = writeln!(out, "{}\t{}\t{}", pdf.lag, fmt9(*c), fmt9(*d));
                }
            }
        }
        PlotKind::StructureFunctions => {
            out.push_str("# order_n\tlag_days\tS_n\n");
            for (ni, n) in doc.structure.set.orders.iter().enumerate() {
                for (ti, tau) in doc.structure.set.lags.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "{}\t{}\t{}",
                        fmt9(*n),
                        tau,
                        fmt9(doc.structure.set.s_values[ni][ti])
                    );
                }
            }
        }
        PlotKind::Zeta => {
            out.push_str("# order_n\tzeta_n\tstderr\n");
            let z = &doc.structure.zeta;
            for i in 0..z.orders.len() {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}",
                    fmt9(z.orders[i]),
                    fmt9(z.zeta[i]),
                    fmt9(z.stderr[i])
                );
            }
        }
        PlotKind::SigmaTau => {
            out.push_str("# lag_days\tsigma\n");
            for &(tau, s) in &doc.structure.sigma.table {
                let _ = writeln!(out, "{tau}\t{}", fmt9(s));
            }
        }
        PlotKind::RescaledLevy => {
            // rescale each micro PDF onto the reference lag and overlay the
            // fitted Levy density on the reference grid (raw units)
            let report = &doc.collapse_micro;
            out.push_str("# lag_days\trescaled_bin_center\trescaled_density\tlevy_density\n");
            for pdf in &doc.micro_pdfs {
                let lambda = pdf.lag as f64 / report.reference_lag as f64;
                let sigma = pdf.normalization;
                let shrink = lambda.powf(-report.alpha);
                let grow = lambda.powf(report.alpha);
                for (c, d) in pdf.bin_centers.iter().zip(&pdf.density) {
                    let x = c * sigma * shrink;
                    let dens = d / sigma * grow;
                    let levy = crate::levy::levy_density(&doc.levy.model, x)?;
                    let _ = writeln!(
                        out,
                        "{}\t{}\t{}\t{}",
                        pdf.lag,
                        fmt9(x),
                        fmt9(dens),
                        fmt9(levy)
                    );
                }
            }
        }
    }
    Ok(out)
}

/// Write the canonical JSON document plus every TSV plot file into `outdir`.
pub fn write_outputs(doc: &ResultDocument, outdir: &Path) -> Result<()> {
    fs::create_dir_all(outdir)?;
    fs::write(outdir.join("result.json"), canonical_json(doc)?)?;
    for kind in PlotKind::ALL {
        match export_plot_data(doc, kind) {
            Ok(text) => fs::write(outdir.join(kind.file_name()), text)?,
            Err(Error::NotComputed { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_parsing_with_dates_and_header() {
        let text = "date,price\n2020-01-01,25.0\n2020-01-02,26.0\n2020-01-03,24.5\n";
        let s = parse_csv(text, "t").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.values(), &[25.0, 26.0, 24.5]);
        assert_eq!(s.timestamps()[1] - s.timestamps()[0], 1);
    }

    #[test]
    fn csv_integer_indices() {
        let s = parse_csv("0,1.0\n5,2.0\n9,3.0\n", "t").unwrap();
        assert_eq!(s.timestamps(), &[0, 5, 9]);
    }

    #[test]
    fn csv_shuffled_dates_name_offending_line() {
        let text = "2020-01-01,25.0\n2020-01-03,26.0\n2020-01-02,24.5\n";
        match parse_csv(text, "t") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn csv_bad_value_and_non_finite() {
        match parse_csv("2020-01-01,25.0\n2020-01-02,abc\n", "t") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_csv("1,1.0\n2,inf\n3,2.0\n", "t").is_err());
    }

    #[test]
    fn config_round_trips_through_toml_and_json() {
        let cfg = RunConfig::default();
        let toml_text = toml::to_string(&cfg).unwrap();
        let back: RunConfig = toml::from_str(&toml_text).unwrap();
        assert_eq!(cfg, back);
        let json_text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&json_text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn canonical_json_sorts_keys() {
        #[derive(Serialize)]
        struct Unsorted {
            zebra: u32,
            apple: u32,
        }
        let text = canonical_json(&Unsorted { zebra: 1, apple: 2 }).unwrap();
        assert!(text.find("apple").unwrap() < text.find("zebra").unwrap());
    }
}

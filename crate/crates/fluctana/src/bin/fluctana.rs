//! Thin command-line front end over the fluctana library. Each subcommand
//! maps to one pipeline stage; `run` executes everything and writes the
//! deterministic JSON + TSV outputs.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use fluctana::error::{Error, Result};
use fluctana::fdetrend::DetrendConfig;
use fluctana::mfdfa;
use fluctana::pdf;
use fluctana::pipeline::{
    self, canonical_json, ingest_csv, run_pipeline, write_outputs, InputSpec, RunConfig,
    OUTPUT_DIR_ENV,
};
use fluctana::scaling;
use fluctana::series::{compute_returns, summary_stats, Series};
use fluctana::synth::{generate, GenKind, GenSpec};
use fluctana::levy;

#[derive(Parser)]
#[command(name = "fluctana", version, about = "Scaling analysis of noisy, non-stationary time series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Input selection shared by analysis subcommands: a CSV file or a seeded
/// generator.
#[derive(Args, Clone)]
struct InputOpts {
    /// CSV input file with `date,value` rows.
    #[arg(long, conflicts_with = "gen")]
    input: Option<PathBuf>,

    /// Generator kind: gaussian | fgn | stable | cascade.
    #[arg(long, requires = "seed")]
    gen: Option<String>,

    /// Series length (generator runs).
    #[arg(long, default_value_t = 8192)]
    length: usize,

    /// RNG seed; mandatory for generator runs.
    #[arg(long)]
    seed: Option<u64>,

    /// Hurst exponent (fgn).
    #[arg(long, default_value_t = 0.7)]
    hurst: f64,

    /// Stability index (stable).
    #[arg(long, default_value_t = 1.5)]
    mu: f64,

    /// Scale factor per unit lag (stable).
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,

    /// Cascade multiplier a in (0.5, 1).
    #[arg(long, default_value_t = 0.7)]
    multiplier: f64,

    /// Cascade refinement levels (length becomes 2^levels).
    #[arg(long, default_value_t = 13)]
    levels: u32,

    /// Shuffle cascade multipliers per split.
    #[arg(long, default_value_t = false)]
    shuffled: bool,
}

impl InputOpts {
    fn input_spec(&self) -> Result<InputSpec> {
        if let Some(path) = &self.input {
            return Ok(InputSpec::Csv { path: path.clone() });
        }
        let kind = self
            .gen
            .as_deref()
            .ok_or_else(|| Error::Domain("either --input or --gen is required".into()))?;
        let seed = self
            .seed
            .ok_or_else(|| Error::Domain("--seed is mandatory for generator runs".into()))?;
        let (kind, length) = match kind {
            "gaussian" => (GenKind::GaussianNoise, self.length),
            "fgn" => (GenKind::Fgn { hurst: self.hurst }, self.length),
            "stable" => (
                GenKind::StableFlight {
                    mu: self.mu,
                    gamma: self.gamma,
                },
                self.length,
            ),
            "cascade" => (
                GenKind::BinomialCascade {
                    multiplier: self.multiplier,
                    levels: self.levels,
                    shuffled: self.shuffled,
                },
                1usize << self.levels,
            ),
            other => {
                return Err(Error::Domain(format!(
                    "unknown generator `{other}`; expected gaussian|fgn|stable|cascade"
                )))
            }
        };
        Ok(InputSpec::Generator {
            spec: GenSpec { kind, length, seed },
        })
    }

    fn load(&self) -> Result<Series> {
        match self.input_spec()? {
            InputSpec::Csv { path } => ingest_csv(&path),
            InputSpec::Generator { spec } => generate(&spec),
        }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> std::result::Result<Vec<T>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<T>().map_err(|_| format!("bad list item `{p}`")))
        .collect()
}

#[derive(Subcommand)]
enum Command {
    /// Summary statistics of the returns at one lag.
    Stats {
        #[command(flatten)]
        input: InputOpts,
        #[arg(long, default_value_t = 1)]
        lag: usize,
    },
    /// MF-DFA fluctuation surface and scaling exponents.
    Mfdfa {
        #[command(flatten)]
        input: InputOpts,
        /// Lag of the returns fed into the analysis.
        #[arg(long, default_value_t = 1)]
        lag: usize,
        /// Comma-separated q orders (0 selects the logarithmic mode).
        #[arg(long, value_parser = parse_list::<f64>)]
        q: Option<Vec<f64>>,
        /// Comma-separated integer scales; default log grid in [10, N/4].
        #[arg(long, value_parser = parse_list::<usize>)]
        scales: Option<Vec<usize>>,
        #[arg(long, default_value_t = 1)]
        poly_order: usize,
        #[arg(long, default_value_t = 10.0)]
        fit_min: f64,
        #[arg(long, default_value_t = 100.0)]
        fit_max: f64,
        /// Remove this many low-frequency Fourier modes first.
        #[arg(long, default_value_t = 0)]
        detrend_modes: usize,
    },
    /// Structure functions S^n(tau) and zeta exponents.
    Structure {
        #[command(flatten)]
        input: InputOpts,
        #[arg(long, value_parser = parse_list::<usize>)]
        lags: Option<Vec<usize>>,
        #[arg(long, value_parser = parse_list::<f64>)]
        orders: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1.0)]
        fit_min: f64,
        #[arg(long, default_value_t = 100.0)]
        fit_max: f64,
        #[arg(long, default_value_t = scaling::DEFAULT_NONLINEARITY_THRESHOLD)]
        threshold: f64,
    },
    /// Empirical PDF of returns at one lag, as TSV on stdout.
    Pdf {
        #[command(flatten)]
        input: InputOpts,
        #[arg(long, default_value_t = 1)]
        lag: usize,
        #[arg(long)]
        bins: Option<usize>,
    },
    /// Rescale PDFs across lags onto a master curve and report distances.
    Collapse {
        #[command(flatten)]
        input: InputOpts,
        #[arg(long, value_parser = parse_list::<usize>, default_value = "1,2,4,8")]
        lags: Vec<usize>,
        /// Rescaling exponent; default is the sigma(tau) fit over the lags.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        bins: Option<usize>,
        #[arg(long, default_value_t = pdf::DEFAULT_COLLAPSE_THRESHOLD)]
        threshold: f64,
    },
    /// Fit the Levy stability index from PDF peak scaling across lags.
    LevyFit {
        #[command(flatten)]
        input: InputOpts,
        #[arg(long, value_parser = parse_list::<usize>, default_value = "1,2,3,4,5,6,7,8")]
        lags: Vec<usize>,
        #[arg(long)]
        bins: Option<usize>,
    },
    /// Generate a synthetic series and write it as CSV.
    Synth {
        #[command(flatten)]
        input: InputOpts,
        /// Output CSV path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full pipeline: every stage, JSON document + TSV plot files.
    Run {
        #[command(flatten)]
        input: InputOpts,
        /// TOML config file; command-line flags override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (falls back to $FLUCTANA_OUTDIR, then ./out).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        bins: Option<usize>,
        #[arg(long)]
        detrend_modes: Option<usize>,
    },
}

fn pdf_at_lags(series: &Series, lags: &[usize], bins: Option<usize>) -> Result<Vec<pdf::EmpiricalPdf>> {
    lags.iter()
        .map(|&lag| {
            let r = compute_returns(series, lag)?;
            let b = bins.unwrap_or_else(|| pdf::default_bin_count(r.len()));
            pdf::estimate_pdf(&r, b)
        })
        .collect()
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Stats { input, lag } => {
            let series = input.load()?;
            let returns = compute_returns(&series, lag)?;
            let stats = summary_stats(returns.values())?;
            println!("{}", canonical_json(&stats)?);
        }
        Command::Mfdfa {
            input,
            lag,
            q,
            scales,
            poly_order,
            fit_min,
            fit_max,
            detrend_modes,
        } => {
            let mut series = input.load()?;
            if detrend_modes > 0 {
                series = fluctana::fdetrend::fourier_detrend(
                    &series,
                    &DetrendConfig {
                        n_modes_removed: detrend_modes,
                        remove_mean: true,
                    },
                )?;
            }
            let returns = compute_returns(&series, lag)?;
            let q = q.unwrap_or_else(mfdfa::default_q_grid);
            let scales = scales.unwrap_or_else(|| mfdfa::default_scale_grid(returns.len()));
            let surface = mfdfa::mfdfa_surface(returns.values(), &scales, &q, poly_order)?;
            let exponents = mfdfa::fit_exponents(&surface, (fit_min, fit_max))?;
            let break_scale = if surface.scales.len() >= 8 {
                mfdfa::detect_scaling_break(
                    &surface,
                    2.0,
                    3,
                    mfdfa::DEFAULT_BREAK_SLOPE_THRESHOLD,
                )
                .ok()
                .flatten()
            } else {
                None
            };
            #[derive(serde::Serialize)]
            struct Out {
                exponents: mfdfa::ScalingExponents,
                hurst: Option<f64>,
                break_scale: Option<f64>,
            }
            println!(
                "{}",
                canonical_json(&Out {
                    hurst: exponents.hurst(),
                    break_scale,
                    exponents,
                })?
            );
        }
        Command::Structure {
            input,
            lags,
            orders,
            fit_min,
            fit_max,
            threshold,
        } => {
            let series = input.load()?;
            let lags = lags.unwrap_or_else(pipeline::default_lag_grid);
            let lags: Vec<usize> = lags.into_iter().filter(|&l| l + 50 < series.len()).collect();
            let orders = orders.unwrap_or_else(scaling::default_order_grid);
            let set = scaling::compute_structure_set(&series, &lags, &orders)?;
            let zeta = scaling::fit_zeta(&set, (fit_min, fit_max))?;
            let verdict = scaling::multifractality_test(&zeta, threshold)?;
            let sigma = scaling::sigma_tau(&series, &lags, (fit_min, fit_max))?;
            #[derive(serde::Serialize)]
            struct Out {
                zeta: scaling::ZetaExponents,
                verdict: scaling::MultifractalityVerdict,
                sigma: scaling::SigmaFit,
            }
            println!("{}", canonical_json(&Out { zeta, verdict, sigma })?);
        }
        Command::Pdf { input, lag, bins } => {
            let series = input.load()?;
            let pdfs = pdf_at_lags(&series, &[lag], bins)?;
            let p = &pdfs[0];
            println!("# bin_center_normalized\tdensity");
            for (c, d) in p.bin_centers.iter().zip(&p.density) {
                println!("{c:.8e}\t{d:.8e}");
            }
        }
        Command::Collapse {
            input,
            lags,
            alpha,
            bins,
            threshold,
        } => {
            let series = input.load()?;
            let alpha = match alpha {
                Some(a) => a,
                None => {
                    scaling::sigma_tau(
                        &series,
                        &lags,
                        (lags[0] as f64, *lags.last().unwrap() as f64),
                    )?
                    .alpha
                }
            };
            let pdfs = pdf_at_lags(&series, &lags, bins)?;
            let reference = lags.iter().copied().min().unwrap();
            let report = pdf::collapse(&pdfs, alpha, reference, threshold)?;
            println!("{}", canonical_json(&report)?);
        }
        Command::LevyFit { input, lags, bins } => {
            let series = input.load()?;
            let pdfs = pdf_at_lags(&series, &lags, bins)?;
            let fit = levy::fit_mu_from_peaks(&pdfs)?;
            println!("{}", canonical_json(&fit)?);
        }
        Command::Synth { input, out } => {
            if input.input.is_some() {
                return Err(Error::Domain("synth requires generator flags, not --input".into()));
            }
            let series = input.load()?;
            let mut text = String::from("day,value\n");
            for (t, v) in series.timestamps().iter().zip(series.values()) {
                text.push_str(&format!("{t},{v:.17e}\n"));
            }
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
        }
        Command::Run {
            input,
            config,
            out,
            bins,
            detrend_modes,
        } => {
            let mut cfg: RunConfig = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)?;
                    toml::from_str(&text).map_err(|e| Error::Parse {
                        line: 0,
                        message: format!("config file: {e}"),
                    })?
                }
                None => RunConfig::default(),
            };
            // flags override the file
            if input.input.is_some() || input.gen.is_some() {
                cfg.input = input.input_spec()?;
            }
            if let Some(b) = bins {
                cfg.bin_count = Some(b);
            }
            if let Some(m) = detrend_modes {
                cfg.detrend = (m > 0).then_some(DetrendConfig {
                    n_modes_removed: m,
                    remove_mean: true,
                });
            }
            let outdir = out
                .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("out"));
            let doc = run_pipeline(&cfg)?;
            write_outputs(&doc, &outdir)?;
            eprintln!(
                "wrote {} and {} TSV files to {}",
                "result.json",
                pipeline::PlotKind::ALL.len(),
                outdir.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

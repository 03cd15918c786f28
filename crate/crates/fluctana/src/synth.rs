//! Deterministic, seeded generators of processes with analytically known
//! scaling: Gaussian white noise, fractional Gaussian noise (circulant
//! spectral embedding), symmetric stable flights, and the binomial
//! multiplicative cascade.
//!
//! RNG: ChaCha12 seeded via `seed_from_u64`; every generator consumes a
//! single sequential stream, so identical (spec, seed) pairs are bitwise
//! reproducible across platforms. Run concurrent generators with distinct
//! seeds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::series::Series;

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GenKind {
    GaussianNoise,
    Fgn { hurst: f64 },
    StableFlight { mu: f64, gamma: f64 },
    BinomialCascade {
        multiplier: f64,
        levels: u32,
        #[serde(default)]
        shuffled: bool,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct GenSpec {
    #[serde(flatten)]
    pub kind: GenKind,
    pub length: usize,
    pub seed: u64,
}

/// Dispatch on the generator kind.
pub fn generate(spec: &GenSpec) -> Result<Series> {
    match spec.kind {
        GenKind::GaussianNoise => gen_gaussian_noise(spec.length, spec.seed),
        GenKind::Fgn { hurst } => gen_fgn(spec.length, hurst, spec.seed),
        GenKind::StableFlight { mu, gamma } => gen_stable_flight(spec.length, mu, gamma, spec.seed),
        GenKind::BinomialCascade {
            multiplier,
            levels,
            shuffled,
        } => {
            let series = gen_binomial_cascade(multiplier, levels, shuffled, spec.seed)?;
            if spec.length != series.len() {
                return Err(Error::Generator(format!(
                    "cascade length must be 2^levels = {}, got {}",
                    series.len(),
                    spec.length
                )));
            }
            Ok(series)
        }
    }
}

fn rng_for(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// I.i.d. standard normal values.
pub fn gen_gaussian_noise(n: usize, seed: u64) -> Result<Series> {
    if n < 2 {
        return Err(Error::Generator(format!("need n >= 2, got {n}")));
    }
    let mut rng = rng_for(seed);
    let values = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    Series::from_values(values, format!("gaussian_noise(seed={seed})"))
}

/// fGn autocovariance at lag k for unit-variance increments.
pub fn fgn_autocovariance(hurst: f64, k: usize) -> f64 {
    let k = k as f64;
    let h2 = 2.0 * hurst;
    0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2))
}

/// Exact-covariance fractional Gaussian noise via circulant spectral
/// embedding of the fGn autocovariance.
pub fn gen_fgn(n: usize, hurst: f64, seed: u64) -> Result<Series> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::Generator(format!(
            "Hurst exponent must lie in (0, 1), got {hurst}"
        )));
    }
    if n < 64 {
        return Err(Error::Generator(format!("need n >= 64, got {n}")));
    }

    // first row of the 2n x 2n circulant: gamma(0..n), then mirrored
    let m = 2 * n;
    let mut row: Vec<Complex<f64>> = Vec::with_capacity(m);
    for k in 0..=n {
        row.push(Complex::new(fgn_autocovariance(hurst, k), 0.0));
    }
    for k in (1..n).rev() {
        row.push(Complex::new(fgn_autocovariance(hurst, k), 0.0));
    }

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut row);
    let eigen: Vec<f64> = row.iter().map(|c| c.re).collect();
    let max_eig = eigen.iter().copied().fold(0.0f64, f64::max);
    if eigen.iter().any(|&l| l < -1e-8 * max_eig) {
        return Err(Error::Generator(format!(
            "circulant embedding not nonnegative definite for n = {n}; use a larger n"
        )));
    }

    // spectral synthesis; draw order is fixed: V_0, pairs k = 1..n-1, V_n
    let mut rng = rng_for(seed);
    let mut spectrum = vec![Complex::new(0.0, 0.0); m];
    let mf = m as f64;
    let z0: f64 = StandardNormal.sample(&mut rng);
    spectrum[0] = Complex::new((eigen[0].max(0.0) / mf).sqrt() * z0, 0.0);
    for k in 1..n {
        let a: f64 = StandardNormal.sample(&mut rng);
        let b: f64 = StandardNormal.sample(&mut rng);
        let w = (eigen[k].max(0.0) / (2.0 * mf)).sqrt();
        spectrum[k] = Complex::new(w * a, w * b);
        spectrum[m - k] = spectrum[k].conj();
    }
    let zn: f64 = StandardNormal.sample(&mut rng);
    spectrum[n] = Complex::new((eigen[n].max(0.0) / mf).sqrt() * zn, 0.0);

    fft.process(&mut spectrum);
    let values: Vec<f64> = spectrum[..n].iter().map(|c| c.re).collect();
    Series::from_values(values, format!("fgn(H={hurst},seed={seed})"))
}

/// One symmetric stable variate with characteristic function exp(−|q|^μ),
/// by the trigonometric (Chambers-Mallows-Stuck) transform.
fn standard_symmetric_stable(rng: &mut ChaCha12Rng, mu: f64) -> f64 {
    let phi: f64 = rng.gen_range(-FRAC_PI_2..FRAC_PI_2);
    let w: f64 = Exp1.sample(rng);
    if (mu - 1.0).abs() < 1e-12 {
        phi.tan()
    } else {
        let a = (mu * phi).sin() / phi.cos().powf(1.0 / mu);
        let b = ((1.0 - mu) * phi).cos() / w;
        a * b.powf((1.0 - mu) / mu)
    }
}

/// Cumulative sum of i.i.d. symmetric stable variates scaled so that
/// increments at lag τ have characteristic function exp(−γτ|q|^μ).
pub fn gen_stable_flight(n: usize, mu: f64, gamma: f64, seed: u64) -> Result<Series> {
    if !(mu > 0.0 && mu <= 2.0) {
        return Err(Error::Generator(format!("mu must lie in (0, 2], got {mu}")));
    }
    if gamma <= 0.0 {
        return Err(Error::Generator(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    if n < 2 {
        return Err(Error::Generator(format!("need n >= 2, got {n}")));
    }
    let mut rng = rng_for(seed);
    let scale = gamma.powf(1.0 / mu);
    let mut acc = 0.0;
    let values = (0..n)
        .map(|_| {
            acc += scale * standard_symmetric_stable(&mut rng, mu);
            acc
        })
        .collect();
    Series::from_values(values, format!("stable_flight(mu={mu},seed={seed})"))
}

/// Deterministic binomial multiplicative measure on 2^levels cells: each
/// refinement multiplies mass by `a` on the left half and 1−a on the right.
/// The shuffled variant swaps the pair per split with probability 1/2.
pub fn gen_binomial_cascade(a: f64, levels: u32, shuffled: bool, seed: u64) -> Result<Series> {
    if !(a > 0.5 && a < 1.0) {
        return Err(Error::Generator(format!(
            "multiplier must lie in (0.5, 1), got {a}"
        )));
    }
    if levels < 10 {
        return Err(Error::Generator(format!(
            "need at least 10 levels, got {levels}"
        )));
    }
    if levels > 26 {
        return Err(Error::Generator(format!("levels {levels} too large")));
    }
    let mut rng = rng_for(seed);
    let mut mass = vec![1.0f64];
    for _ in 0..levels {
        let mut next = Vec::with_capacity(mass.len() * 2);
        for &m in &mass {
            let swap = shuffled && rng.gen_bool(0.5);
            let (l, r) = if swap { (1.0 - a, a) } else { (a, 1.0 - a) };
            next.push(m * l);
            next.push(m * r);
        }
        mass = next;
    }
    Series::from_values(
        mass,
        format!("binomial_cascade(a={a},levels={levels},seed={seed})"),
    )
}

/// Analytic MF-DFA exponent of the binomial cascade:
/// h(q) = 1/q − log₂(a^q + (1−a)^q)/q.
pub fn cascade_analytic_h(a: f64, q: f64) -> f64 {
    assert!(q != 0.0);
    1.0 / q - (a.powf(q) + (1.0 - a).powf(q)).log2() / q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{compute_returns, summary_stats};
    use std::f64::consts::PI;

    #[test]
    fn generators_are_deterministic() {
        let a = gen_gaussian_noise(256, 42).unwrap();
        let b = gen_gaussian_noise(256, 42).unwrap();
        assert_eq!(a.values(), b.values());
        let c = gen_gaussian_noise(256, 43).unwrap();
        assert_ne!(a.values(), c.values());

        let f1 = gen_fgn(128, 0.7, 7).unwrap();
        let f2 = gen_fgn(128, 0.7, 7).unwrap();
        assert_eq!(f1.values(), f2.values());

        let s1 = gen_stable_flight(128, 1.5, 1.0, 9).unwrap();
        let s2 = gen_stable_flight(128, 1.5, 1.0, 9).unwrap();
        assert_eq!(s1.values(), s2.values());

        let c1 = gen_binomial_cascade(0.7, 10, true, 3).unwrap();
        let c2 = gen_binomial_cascade(0.7, 10, true, 3).unwrap();
        assert_eq!(c1.values(), c2.values());
    }

    #[test]
    fn gaussian_moments() {
        let s = gen_gaussian_noise(1_000_000, 1).unwrap();
        let st = summary_stats(s.values()).unwrap();
        assert!(st.mean.abs() < 0.01);
        assert!((st.std_dev - 1.0).abs() < 0.01);
        assert!(st.skewness.abs() < 0.01, "skewness {}", st.skewness);
        assert!((st.kurtosis - 3.0).abs() < 0.03, "kurtosis {}", st.kurtosis);
    }

    fn lag1_autocorr(values: &[f64]) -> f64 {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let var: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        let cov: f64 = values
            .windows(2)
            .map(|w| (w[0] - mean) * (w[1] - mean))
            .sum();
        cov / var
    }

    #[test]
    fn fgn_half_is_white_and_lag1_matches_analytic() {
        let n = 1 << 14;
        // H = 0.5 reduces to white noise: lag-1 autocorrelation 0 ± 3/sqrt(n)
        let mut mean_rho = 0.0;
        for seed in 0..10u64 {
            let s = gen_fgn(n, 0.5, seed).unwrap();
            mean_rho += lag1_autocorr(s.values());
        }
        mean_rho /= 10.0;
        assert!(mean_rho.abs() < 3.0 / (n as f64).sqrt(), "rho {mean_rho}");

        // H = 0.7: analytic lag-1 autocovariance 2^{2H-1} - 1
        let want = fgn_autocovariance(0.7, 1);
        let mut mean = 0.0;
        for seed in 100..110u64 {
            let s = gen_fgn(n, 0.7, seed).unwrap();
            mean += lag1_autocorr(s.values());
        }
        mean /= 10.0;
        // 3 standard errors of the mean over 10 paths, generous bound
        assert!((mean - want).abs() < 0.02, "got {mean}, want {want}");
    }

    #[test]
    fn fgn_parameter_validation() {
        assert!(gen_fgn(128, 0.0, 1).is_err());
        assert!(gen_fgn(128, 1.0, 1).is_err());
        assert!(gen_fgn(32, 0.7, 1).is_err());
    }

    #[test]
    fn stable_gaussian_boundary_has_kurtosis_three() {
        let s = gen_stable_flight(1_000_001, 2.0, 0.5, 5).unwrap();
        let r = compute_returns(&s, 1).unwrap();
        let st = summary_stats(r.values()).unwrap();
        assert!((st.kurtosis - 3.0).abs() < 0.05, "kurtosis {}", st.kurtosis);
        // increments at mu=2, gamma should be N(0, 2*gamma)
        assert!((st.std_dev - 1.0).abs() < 0.01, "std {}", st.std_dev);
    }

    #[test]
    fn stable_cauchy_peak_matches_closed_form() {
        // Cauchy outliers span ~1e7, so a [min, max] histogram cannot
        // resolve the peak; count a narrow central window instead.
        let gamma = 1.0;
        let s = gen_stable_flight(1_000_001, 1.0, gamma, 11).unwrap();
        let r = compute_returns(&s, 1).unwrap();
        let width = 0.1;
        let hits = r.values().iter().filter(|v| v.abs() <= width / 2.0).count();
        let got = hits as f64 / (r.len() as f64 * width);
        let want = 1.0 / (PI * gamma); // Cauchy peak at scale gamma
        assert!(
            (got - want).abs() / want < 0.03,
            "peak {got} vs Cauchy {want}"
        );
        // and the bulk: P(|x| <= 1) = (2/pi) arctan(1) = 1/2
        let bulk = r.values().iter().filter(|v| v.abs() <= 1.0).count() as f64 / r.len() as f64;
        assert!((bulk - 0.5).abs() < 0.01, "bulk {bulk}");
    }

    #[test]
    fn cascade_mass_conserved_and_length() {
        let s = gen_binomial_cascade(0.7, 12, false, 0).unwrap();
        assert_eq!(s.len(), 1 << 12);
        let total: f64 = s.values().iter().sum();
        assert!((total - 1.0).abs() < 1e-9, "total {total}");
        let shuffled = gen_binomial_cascade(0.7, 12, true, 1).unwrap();
        let total: f64 = shuffled.values().iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cascade_analytic_exponent_values() {
        // direct evaluation: a = 0.7 gives strong multifractality
        let spread = cascade_analytic_h(0.7, -5.0) - cascade_analytic_h(0.7, 5.0);
        assert!((spread - 0.83).abs() < 0.02, "spread {spread}");
        assert!(spread > 0.5);
    }

    #[test]
    fn generate_dispatch_checks_cascade_length() {
        let spec = GenSpec {
            kind: GenKind::BinomialCascade {
                multiplier: 0.7,
                levels: 10,
                shuffled: false,
            },
            length: 1 << 10,
            seed: 0,
        };
        assert!(generate(&spec).is_ok());
        let bad = GenSpec { length: 1000, ..spec };
        assert!(generate(&bad).is_err());
    }
}

//! Multifractal detrended fluctuation analysis.
//!
//! The five steps: build the cumulative mean-removed profile, split it into
//! 2·N_s segments (forward and backward), detrend each segment with a
//! least-squares polynomial, average the residual variances into the q-th
//! order fluctuation function F_q(s), and read scaling exponents α(q) off
//! log-log fits of F_q(s) against s. H = α(2) is the Hurst exponent.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::{linear_fit, loglog_fit};

/// Cumulative mean-removed sums Y(i) of the input values.
#[derive(Debug, Clone)]
pub struct Profile {
    values: Vec<f64>,
    source_length: usize,
}

impl Profile {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source_length(&self) -> usize {
        self.source_length
    }
}

/// Y(i) = Σ_{k≤i} (p_k − ⟨p⟩). The terminal value telescopes to zero.
pub fn build_profile(values: &[f64]) -> Result<Profile> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let mut acc = 0.0;
    let profile = values
        .iter()
        .map(|&v| {
            acc += v - mean;
            acc
        })
        .collect();
    Ok(Profile {
        values: profile,
        source_length: n,
    })
}

/// Least-squares polynomial fit on local indices 0..s, returning the mean
/// squared residual. Indices are centered before solving the normal
/// equations.
fn detrended_variance(segment: &[f64], poly_order: usize) -> f64 {
    let s = segment.len();
    let m = poly_order;
    let half = (s as f64 - 1.0) / 2.0;

    // normal equations in the centered monomial basis
    let dim = m + 1;
    let mut ata = vec![vec![0.0f64; dim]; dim];
    let mut atb = vec![0.0f64; dim];
    let mut powers = vec![0.0f64; dim];
    for (i, &y) in segment.iter().enumerate() {
        let x = i as f64 - half;
        powers[0] = 1.0;
        for j in 1..dim {
            powers[j] = powers[j - 1] * x;
        }
        for j in 0..dim {
            atb[j] += powers[j] * y;
            for k in j..dim {
                ata[j][k] += powers[j] * powers[k];
            }
        }
    }
    for j in 0..dim {
        for k in 0..j {
            ata[j][k] = ata[k][j];
        }
    }
    let coeffs = solve_symmetric(&mut ata, &mut atb);

    let mut ssr = 0.0;
    for (i, &y) in segment.iter().enumerate() {
        let x = i as f64 - half;
        let mut fit = 0.0;
        for c in coeffs.iter().rev() {
            fit = fit * x + c;
        }
        let r = y - fit;
        ssr += r * r;
    }
    ssr / s as f64
}

/// Gaussian elimination with partial pivoting; sizes here are tiny (m+1 ≤ ~5).
fn solve_symmetric(a: &mut [Vec<f64>], b: &mut [f64]) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let d = a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / d;
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in r + 1..n {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
    }
    x
}

/// Residual variances of the 2·N_s detrended segments at scale `s`:
/// N_s forward segments from the start, N_s more from the series end.
pub fn segment_variances(profile: &Profile, scale: usize, poly_order: usize) -> Result<Vec<f64>> {
    let n = profile.values.len();
    if scale < poly_order + 2 {
        return Err(Error::Domain(format!(
            "scale {} too small for polynomial order {}; need s >= {}",
            scale,
            poly_order,
            poly_order + 2
        )));
    }
    let n_s = n / scale;
    if n_s < 1 {
        return Err(Error::Domain(format!(
            "scale {} exceeds series length {}",
            scale, n
        )));
    }
    let y = &profile.values;
    let mut out = Vec::with_capacity(2 * n_s);
    for nu in 0..n_s {
        out.push(detrended_variance(&y[nu * scale..(nu + 1) * scale], poly_order));
    }
    for nu in 0..n_s {
        let end = n - nu * scale;
        out.push(detrended_variance(&y[end - scale..end], poly_order));
    }
    Ok(out)
}

/// F_q(s) = { mean over segments of [F²(s,ν)]^{q/2} }^{1/q}.
///
/// q must be nonzero; the q → 0 limit is exposed separately as
/// [`fluctuation_function_q0`].
pub fn fluctuation_function(variances: &[f64], q: f64) -> Result<f64> {
    if variances.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if q == 0.0 {
        return Err(Error::Domain(
            "q = 0 is excluded; use the logarithmic-mode fluctuation function".into(),
        ));
    }
    check_nonnegative(variances, q)?;
    let mean: f64 = variances
        .iter()
        .map(|&v| v.powf(q / 2.0))
        .sum::<f64>()
        / variances.len() as f64;
    Ok(mean.powf(1.0 / q))
}

/// The q = 0 limit: exp of the mean of ½·ln F²(s,ν).
pub fn fluctuation_function_q0(variances: &[f64]) -> Result<f64> {
    if variances.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    check_nonnegative(variances, 0.0)?;
    let mean: f64 = variances.iter().map(|&v| 0.5 * v.ln()).sum::<f64>() / variances.len() as f64;
    Ok(mean.exp())
}

fn check_nonnegative(variances: &[f64], q: f64) -> Result<()> {
    for (i, &v) in variances.iter().enumerate() {
        if v < 0.0 {
            return Err(Error::Numerical(format!("negative variance in segment {i}")));
        }
        if v == 0.0 && q <= 0.0 {
            return Err(Error::DegenerateSegment { segment: i, q });
        }
    }
    Ok(())
}

/// F_q(s) over a grid of scales and moment orders, plus the segment counts
/// behind each scale. q = 0 entries in `orders` select the logarithmic mode.
#[derive(Debug, Clone, Serialize)]
pub struct FluctuationSurface {
    pub scales: Vec<usize>,
    pub orders: Vec<f64>,
    /// f_values[qi][si] = F_{orders[qi]}(scales[si])
    pub f_values: Vec<Vec<f64>>,
    pub segments_per_scale: Vec<usize>,
    pub poly_order: usize,
}

/// Full MF-DFA grid. Scales must be strictly increasing and leave at least 4
/// segments each.
pub fn mfdfa_surface(
    values: &[f64],
    scales: &[usize],
    orders: &[f64],
    poly_order: usize,
) -> Result<FluctuationSurface> {
    if scales.is_empty() || orders.is_empty() {
        return Err(Error::Domain("scale and order grids must be nonempty".into()));
    }
    if scales.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("scales must be strictly increasing".into()));
    }
    let profile = build_profile(values)?;
    let n = values.len();
    let mut f_values = vec![Vec::with_capacity(scales.len()); orders.len()];
    let mut segments_per_scale = Vec::with_capacity(scales.len());
    for &s in scales {
        if n / s < 4 {
            return Err(Error::Domain(format!(
                "scale {} leaves fewer than 4 segments (N = {})",
                s, n
            )));
        }
        let variances = segment_variances(&profile, s, poly_order)?;
        segments_per_scale.push(n / s);
        for (qi, &q) in orders.iter().enumerate() {
            let f = if q == 0.0 {
                fluctuation_function_q0(&variances)?
            } else {
                fluctuation_function(&variances, q)?
            };
            f_values[qi].push(f);
        }
    }
    Ok(FluctuationSurface {
        scales: scales.to_vec(),
        orders: orders.to_vec(),
        f_values,
        segments_per_scale,
        poly_order,
    })
}

/// Generalized exponents α(q): per-q slopes of ln F_q(s) on ln s.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingExponents {
    pub orders: Vec<f64>,
    pub alpha: Vec<f64>,
    pub stderr: Vec<f64>,
    pub fit_range: (f64, f64),
}

impl ScalingExponents {
    /// H = α(2), when q = 2 is on the grid.
    pub fn hurst(&self) -> Option<f64> {
        self.orders
            .iter()
            .position(|&q| q == 2.0)
            .map(|i| self.alpha[i])
    }
}

pub fn fit_exponents(
    surface: &FluctuationSurface,
    fit_range: (f64, f64),
) -> Result<ScalingExponents> {
    let xs: Vec<f64> = surface.scales.iter().map(|&s| s as f64).collect();
    let in_range = xs.iter().filter(|&&x| x >= fit_range.0 && x <= fit_range.1).count();
    if in_range < 3 {
        return Err(Error::FitRange(format!(
            "fit range [{}, {}] contains {} scales; need at least 3",
            fit_range.0, fit_range.1, in_range
        )));
    }
    let mut alpha = Vec::with_capacity(surface.orders.len());
    let mut stderr = Vec::with_capacity(surface.orders.len());
    for fq in &surface.f_values {
        let fit = loglog_fit(&xs, fq, fit_range)?;
        alpha.push(fit.slope);
        stderr.push(fit.stderr);
    }
    Ok(ScalingExponents {
        orders: surface.orders.clone(),
        alpha,
        stderr,
        fit_range,
    })
}

pub const DEFAULT_BREAK_SLOPE_THRESHOLD: f64 = 0.1;

/// Two-segment piecewise-linear fit of ln F_q(s) vs ln s. Returns the knee
/// scale (geometric mean of the boundary pair) minimizing total squared
/// residual, if the two slopes differ by more than `slope_threshold`.
///
/// `min_segment` is the minimum number of scales on each side of the knee.
pub fn detect_scaling_break(
    surface: &FluctuationSurface,
    q: f64,
    min_segment: usize,
    slope_threshold: f64,
) -> Result<Option<f64>> {
    let qi = surface
        .orders
        .iter()
        .position(|&o| o == q)
        .ok_or_else(|| Error::Domain(format!("order q = {q} not in surface")))?;
    let n = surface.scales.len();
    if n < 8 {
        return Err(Error::InsufficientData { needed: 8, got: n });
    }
    let min_segment = min_segment.max(3);
    if 2 * min_segment > n {
        return Err(Error::Domain(format!(
            "min_segment {} too large for {} scales",
            min_segment, n
        )));
    }
    let lx: Vec<f64> = surface.scales.iter().map(|&s| (s as f64).ln()).collect();
    let ly: Vec<f64> = surface.f_values[qi]
        .iter()
        .map(|&f| {
            if f <= 0.0 {
                f64::NEG_INFINITY
            } else {
                f.ln()
            }
        })
        .collect();
    if ly.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("fluctuation values must be positive".into()));
    }

    let sse = |fitted: &crate::fit::LinFit, xs: &[f64], ys: &[f64]| -> f64 {
        xs.iter()
            .zip(ys)
            .map(|(&x, &y)| {
                let r = y - (fitted.intercept + fitted.slope * x);
                r * r
            })
            .sum()
    };

    let mut best: Option<(f64, f64, f64, usize)> = None; // (total sse, slope_l, slope_r, split)
    for split in min_segment..=n - min_segment {
        let fl = linear_fit(&lx[..split], &ly[..split])?;
        let fr = linear_fit(&lx[split..], &ly[split..])?;
        let total = sse(&fl, &lx[..split], &ly[..split]) + sse(&fr, &lx[split..], &ly[split..]);
        if best.map_or(true, |(b, _, _, _)| total < b) {
            best = Some((total, fl.slope, fr.slope, split));
        }
    }
    let (_, sl, sr, split) = best.expect("at least one split candidate");
    if (sl - sr).abs() > slope_threshold {
        let knee = ((surface.scales[split - 1] as f64) * (surface.scales[split] as f64)).sqrt();
        Ok(Some(knee))
    } else {
        Ok(None)
    }
}

/// Default scale grid: ~`points` log-spaced integers in [s_min, s_max],
/// deduplicated.
pub fn log_scale_grid(s_min: usize, s_max: usize, points: usize) -> Vec<usize> {
    assert!(s_min >= 2 && s_max > s_min && points >= 2);
    let (a, b) = ((s_min as f64).ln(), (s_max as f64).ln());
    let mut grid: Vec<usize> = (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            (a + t * (b - a)).exp().round() as usize
        })
        .collect();
    grid.dedup();
    grid
}

/// Default scale grid for a series of length `n`: ~20 points in [10, n/4].
pub fn default_scale_grid(n: usize) -> Vec<usize> {
    log_scale_grid(10, (n / 4).max(11), 20)
}

/// Default moment orders; q = 0 is excluded (the log-mode can be added
/// explicitly).
pub fn default_q_grid() -> Vec<f64> {
    vec![-4.0, -3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0, 4.0]
}

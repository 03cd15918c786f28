//! Core series and return representations plus descriptive statistics.

use serde::Serialize;

use crate::error::{Error, Result};

/// An ordered, timestamped scalar signal (e.g. a daily price record).
///
/// Timestamps are ordinal day indices; gaps in calendar dates are ignored by
/// all downstream analysis, which operates on sample positions.
#[derive(Debug, Clone, Serialize)]
pub struct Series {
    timestamps: Vec<i64>,
    values: Vec<f64>,
    label: String,
}

impl Series {
    pub fn new(timestamps: Vec<i64>, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: values.len(),
            });
        }
        if timestamps.len() != values.len() {
            return Err(Error::Domain(format!(
                "timestamp/value length mismatch: {} vs {}",
                timestamps.len(),
                values.len()
            )));
        }
        if timestamps.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain(
                "timestamps must be strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("all values must be finite".into()));
        }
        Ok(Series {
            timestamps,
            values,
            label: label.into(),
        })
    }

    /// Build a series with consecutive integer timestamps 0..n.
    pub fn from_values(values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        let ts = (0..values.len() as i64).collect();
        Series::new(ts, values, label)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn timestamps(&self) -> &[i64] {
        &self.timestamps
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Increments δp(t,τ) = p(t+τ) − p(t) at a fixed positional lag τ.
#[derive(Debug, Clone, Serialize)]
pub struct ReturnSet {
    lag: usize,
    values: Vec<f64>,
    origin_length: usize,
}

impl ReturnSet {
    pub fn lag(&self) -> usize {
        self.lag
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn origin_length(&self) -> usize {
        self.origin_length
    }
}

/// Overlapping increments at positional lag `lag`: one return per start index,
/// giving N − τ values.
pub fn compute_returns(series: &Series, lag: usize) -> Result<ReturnSet> {
    let n = series.len();
    if lag < 1 || lag > n - 1 {
        return Err(Error::Domain(format!(
            "lag {} out of range; valid interval is [1, {}]",
            lag,
            n - 1
        )));
    }
    let v = series.values();
    let values = (0..n - lag).map(|i| v[i + lag] - v[i]).collect();
    Ok(ReturnSet {
        lag,
        values,
        origin_length: n,
    })
}

/// Non-overlapping variant: start indices advance by τ, giving floor(N/τ) − 1
/// independent increments. Not the default convention.
pub fn compute_returns_nonoverlapping(series: &Series, lag: usize) -> Result<ReturnSet> {
    let n = series.len();
    if lag < 1 || lag > n - 1 {
        return Err(Error::Domain(format!(
            "lag {} out of range; valid interval is [1, {}]",
            lag,
            n - 1
        )));
    }
    let v = series.values();
    let values = (0..)
        .map(|k| k * lag)
        .take_while(|&i| i + lag < n)
        .map(|i| v[i + lag] - v[i])
        .collect();
    Ok(ReturnSet {
        lag,
        values,
        origin_length: n,
    })
}

/// Mean, population standard deviation, and standardized third/fourth central
/// moments. Kurtosis uses the raw convention (Gaussian → 3).
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SummaryStats {
    pub mean: f64,
    pub std_dev: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub count: usize,
}

pub fn summary_stats(values: &[f64]) -> Result<SummaryStats> {
    let n = values.len();
    if n < 4 {
        return Err(Error::InsufficientData { needed: 4, got: n });
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    for &v in values {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    if m2 == 0.0 {
        return Err(Error::DegenerateDistribution);
    }
    let std_dev = m2.sqrt();
    Ok(SummaryStats {
        mean,
        std_dev,
        skewness: m3 / (m2 * std_dev),
        kurtosis: m4 / (m2 * m2),
        count: n,
    })
}

/// One record per window position: (window start index, mean, population variance).
///
/// Demonstrates non-stationarity of the level series against stationarity of
/// its increments.
pub fn rolling_stats(
    series: &Series,
    window: usize,
    step: usize,
) -> Result<Vec<(usize, f64, f64)>> {
    let n = series.len();
    if window < 2 || window > n {
        return Err(Error::Domain(format!(
            "window {} out of range; valid interval is [2, {}]",
            window, n
        )));
    }
    if step < 1 {
        return Err(Error::Domain("step must be >= 1".into()));
    }
    let v = series.values();
    let mut out = Vec::new();
    let mut start = 0;
    while start + window <= n {
        let w = &v[start..start + window];
        let wf = window as f64;
        let mean = w.iter().sum::<f64>() / wf;
        let var = w.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / wf;
        out.push((start, mean, var));
        start += step;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(values: &[f64]) -> Series {
        Series::from_values(values.to_vec(), "test").unwrap()
    }

    #[test]
    fn returns_match_definition() {
        let s = series(&[1.0, 2.0, 4.0]);
        let r = compute_returns(&s, 1).unwrap();
        assert_eq!(r.values(), &[1.0, 2.0]);
        assert_eq!(r.origin_length(), 3);
    }

    #[test]
    fn returns_length_is_n_minus_lag() {
        let s = series(&(0..5695).map(|i| (i as f64).sin()).collect::<Vec<_>>());
        assert_eq!(compute_returns(&s, 200).unwrap().len(), 5495);
        assert_eq!(compute_returns(&s, 1).unwrap().len(), 5694);
    }

    #[test]
    fn returns_of_constant_series_are_zero() {
        let s = series(&[3.0; 40]);
        for lag in [1, 5, 39] {
            assert!(compute_returns(&s, lag).unwrap().values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn lag_out_of_range_is_domain_error() {
        let s = series(&[1.0, 2.0, 3.0]);
        assert!(matches!(compute_returns(&s, 0), Err(Error::Domain(_))));
        assert!(matches!(compute_returns(&s, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn nonoverlapping_returns_stride_by_lag() {
        let s = series(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let r = compute_returns_nonoverlapping(&s, 2).unwrap();
        assert_eq!(r.values(), &[2.0, 2.0, 2.0]);
    }

    #[test]
    fn stats_on_symmetric_sample_have_zero_skewness() {
        let st = summary_stats(&[-2.0, -1.0, 1.0, 2.0]).unwrap();
        assert!(st.skewness.abs() < 1e-12);
        assert_eq!(st.mean, 0.0);
    }

    #[test]
    fn stats_shift_and_scale_behavior() {
        let xs = [0.3, 1.7, -2.2, 4.1, 0.9, -0.4];
        let base = summary_stats(&xs).unwrap();
        let shifted: Vec<f64> = xs.iter().map(|x| x + 5.0).collect();
        let scaled: Vec<f64> = xs.iter().map(|x| x * 3.0).collect();
        let sh = summary_stats(&shifted).unwrap();
        let sc = summary_stats(&scaled).unwrap();
        assert!((sh.mean - (base.mean + 5.0)).abs() < 1e-12);
        assert!((sh.std_dev - base.std_dev).abs() < 1e-12);
        assert!((sh.skewness - base.skewness).abs() < 1e-10);
        assert!((sh.kurtosis - base.kurtosis).abs() < 1e-10);
        assert!((sc.std_dev - 3.0 * base.std_dev).abs() < 1e-12);
        assert!((sc.skewness - base.skewness).abs() < 1e-10);
        assert!((sc.kurtosis - base.kurtosis).abs() < 1e-10);
    }

    #[test]
    fn stats_errors() {
        assert!(matches!(
            summary_stats(&[1.0, 2.0, 3.0]),
            Err(Error::InsufficientData { .. })
        ));
        assert!(matches!(
            summary_stats(&[2.0; 10]),
            Err(Error::DegenerateDistribution)
        ));
    }

    #[test]
    fn kurtosis_lower_bound() {
        let st = summary_stats(&[1.0, 1.0, 1.0, 9.0, 2.0]).unwrap();
        assert!(st.kurtosis >= 1.0 + st.skewness * st.skewness - 1e-12);
    }

    #[test]
    fn rolling_stats_constant_and_ramp() {
        let c = series(&[2.0; 30]);
        for (_, _, var) in rolling_stats(&c, 5, 1).unwrap() {
            assert_eq!(var, 0.0);
        }
        let ramp = series(&(0..30).map(|i| 0.5 * i as f64).collect::<Vec<_>>());
        let recs = rolling_stats(&ramp, 7, 3).unwrap();
        let v0 = recs[0].2;
        for (_, _, var) in recs {
            assert!((var - v0).abs() < 1e-12);
        }
    }

    #[test]
    fn rolling_stats_window_too_large() {
        let s = series(&[1.0, 2.0, 3.0]);
        assert!(matches!(rolling_stats(&s, 4, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn series_invariants_enforced() {
        assert!(Series::new(vec![0, 0], vec![1.0, 2.0], "x").is_err());
        assert!(Series::new(vec![0, 1], vec![1.0, f64::NAN], "x").is_err());
        assert!(Series::from_values(vec![1.0], "x").is_err());
    }
}

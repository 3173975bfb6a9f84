//! Posterior summaries and autocorrelation diagnostics for chain output.
//!
//! The autocorrelation function at lag `t` is
//! `(1/N) sum_{j=1}^{N-t} (x_j - m)(x_{j+t} - m) / s^2` with the full-series
//! mean `m` and variance `s^2` (both normalized by `N`), and the integrated
//! autocorrelation time is `tau = 1/2 + sum_{i=1}^{W} ACF(i)` with the
//! self-consistent window `W = min { t : t >= c tau(t) }`.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{DIM, PARAM_NAMES};
use crate::sampler::WindowAcceptance;

/// Window constant of the self-consistent truncation rule.
pub const DEFAULT_WINDOW_C: f64 = 6.0;

/// Default histogram resolution.
pub const DEFAULT_BINS: usize = 50;

/// Minimum chain length accepted by [`summarize`].
pub const MIN_CHAIN_LEN: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct AcfSeries {
    values: Vec<f64>,
    series_len: usize,
}

impl AcfSeries {
    /// Wraps precomputed autocorrelations. `values[0]` must be exactly 1.
    pub fn from_values(values: Vec<f64>, series_len: usize) -> Result<Self> {
        if values.len() < 2 || values[0] != 1.0 {
            return Err(Error::InvalidSeries(
                "ACF needs at least two lags and ACF(0) = 1".into(),
            ));
        }
        Ok(Self { values, series_len })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn t_max(&self) -> usize {
        self.values.len() - 1
    }

    /// Length of the series the ACF was computed from.
    pub fn series_len(&self) -> usize {
        self.series_len
    }
}

fn mean_and_variance(series: &[f64]) -> (f64, f64) {
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let var = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var)
}

// A constant series can still show a tiny variance from rounding in the mean.
fn is_constant(series: &[f64]) -> bool {
    series.iter().all(|&x| x == series[0])
}

/// Autocorrelations at lags `0..=t_max`.
pub fn acf(series: &[f64], t_max: usize) -> Result<AcfSeries> {
    let n = series.len();
    if t_max < 1 || n <= t_max {
        return Err(Error::InvalidSeries(format!(
            "ACF needs series length > t_max >= 1 (length {n}, t_max {t_max})"
        )));
    }
    let (mean, var) = mean_and_variance(series);
    if is_constant(series) || !(var > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let centered: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let norm = n as f64 * var;
    let mut values = Vec::with_capacity(t_max + 1);
    values.push(1.0);
    for t in 1..=t_max {
        let s: f64 = centered[..n - t]
            .iter()
            .zip(&centered[t..])
            .map(|(a, b)| a * b)
            .sum();
        values.push((s / norm).clamp(-1.0, 1.0));
    }
    Ok(AcfSeries {
        values,
        series_len: n,
    })
}

/// Integrated autocorrelation time with its window and error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActEstimate {
    pub tau: f64,
    pub tau_error: f64,
    pub window: usize,
    /// The windowed ACF sum was negative, so `tau < 0.5`.
    pub negative_sum: bool,
}

pub fn integrated_act(acf: &AcfSeries) -> Result<ActEstimate> {
    integrated_act_with_window(acf, DEFAULT_WINDOW_C)
}

/// `tau = 1/2 + sum_{i<=W} ACF(i)`, error `tau * sqrt(2 (2W + 1) / N)`.
pub fn integrated_act_with_window(acf: &AcfSeries, c: f64) -> Result<ActEstimate> {
    let mut sum = 0.0;
    for (t, rho) in acf.values.iter().enumerate().skip(1) {
        sum += rho;
        let tau = 0.5 + sum;
        if t as f64 >= c * tau {
            let n = acf.series_len as f64;
            return Ok(ActEstimate {
                tau,
                tau_error: tau.abs() * (2.0 * (2 * t + 1) as f64 / n).sqrt(),
                window: t,
                negative_sum: sum < 0.0,
            });
        }
    }
    Err(Error::ActNotConverged { t_max: acf.t_max() })
}

/// Computes the ACF with a growing lag range until the window rule closes.
///
/// The lag range starts at `min(N - 1, 128)` and doubles up to `N / 2`.
pub fn estimate_act(series: &[f64]) -> Result<(AcfSeries, ActEstimate)> {
    let n = series.len();
    if n < 4 {
        return Err(Error::InvalidSeries(format!("series too short ({n})")));
    }
    let limit = (n / 2).max(1);
    let mut t_max = limit.min(128);
    loop {
        let a = acf(series, t_max)?;
        match integrated_act(&a) {
            Ok(est) => return Ok((a, est)),
            Err(Error::ActNotConverged { .. }) if t_max < limit => {
                t_max = (t_max * 2).min(limit);
            }
            Err(e) => return Err(e),
        }
    }
}

/// Standard error of the mean from non-overlapping batch means.
pub fn batch_means_error(series: &[f64], batch_size: usize) -> Result<f64> {
    let batch_size = batch_size.max(1);
    let batches = series.len() / batch_size;
    if batches < 2 {
        return Err(Error::InsufficientSamples {
            got: series.len(),
            need: 2 * batch_size,
        });
    }
    let means: Vec<f64> = series
        .chunks_exact(batch_size)
        .map(|c| c.iter().sum::<f64>() / batch_size as f64)
        .collect();
    let m = means.len() as f64;
    let grand = means.iter().sum::<f64>() / m;
    let var = means.iter().map(|x| (x - grand).powi(2)).sum::<f64>() / (m - 1.0);
    Ok((var / m).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    /// `bins + 1` equally spaced edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }
}

/// Equal-width histogram over `[min, max]` of the series.
///
/// A constant series gets the range `[x - 0.5, x + 0.5]`.
pub fn histogram(series: &[f64], bins: usize) -> Result<Histogram> {
    if series.is_empty() {
        return Err(Error::InvalidSeries("histogram of an empty series".into()));
    }
    let (lo, hi) = series
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    let (lo, hi) = if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    };
    histogram_in_range(series, bins, lo, hi)
}

/// Equal-width histogram over `[lo, hi]`; the last bin is closed. Values
/// outside the range are not counted.
pub fn histogram_in_range(series: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Histogram> {
    if bins < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 bins, got {bins}"
        )));
    }
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "bad histogram range [{lo}, {hi}]"
        )));
    }
    let width = (hi - lo) / bins as f64;
    let edges = (0..=bins)
        .map(|i| if i == bins { hi } else { lo + width * i as f64 })
        .collect();
    let mut counts = vec![0u64; bins];
    for &x in series {
        if !(lo..=hi).contains(&x) {
            continue;
        }
        let idx = (((x - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    Ok(Histogram { edges, counts })
}

/// `sum_i min(p_i, q_i)` of two histograms normalized to unit mass.
pub fn overlap_coefficient(a: &Histogram, b: &Histogram) -> f64 {
    let (na, nb) = (a.total() as f64, b.total() as f64);
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    a.counts
        .iter()
        .zip(&b.counts)
        .map(|(&x, &y)| (x as f64 / na).min(y as f64 / nb))
        .sum()
}

/// Histograms of two series on their common range.
pub fn paired_histograms(a: &[f64], b: &[f64], bins: usize) -> Result<(Histogram, Histogram)> {
    let (lo, hi) = a
        .iter()
        .chain(b)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    if !lo.is_finite() {
        return Err(Error::InvalidSeries("histogram of an empty series".into()));
    }
    let (lo, hi) = if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    };
    Ok((
        histogram_in_range(a, bins, lo, hi)?,
        histogram_in_range(b, bins, lo, hi)?,
    ))
}

/// Summary of one parameter's marginal chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSummary {
    #[serde(skip)]
    pub name: String,
    pub mean: f64,
    pub sd: f64,
    /// `sd * sqrt(2 tau / k)`; absent when tau did not converge.
    pub se: Option<f64>,
    pub two_tau: Option<f64>,
    pub two_tau_err: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub negative_acf_sum: bool,
    #[serde(skip)]
    pub acf: Option<AcfSeries>,
}

impl ParamSummary {
    pub fn act_converged(&self) -> bool {
        self.two_tau.is_some()
    }
}

/// Summarizes a single marginal chain.
pub fn summarize_series(name: &str, series: &[f64]) -> Result<ParamSummary> {
    let k = series.len();
    if k < MIN_CHAIN_LEN {
        return Err(Error::InsufficientSamples {
            got: k,
            need: MIN_CHAIN_LEN,
        });
    }
    let mean = series.iter().sum::<f64>() / k as f64;
    let ss = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
    if is_constant(series) || !(ss > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let sd = (ss / (k - 1) as f64).sqrt();

    let mut summary = ParamSummary {
        name: name.to_string(),
        mean,
        sd,
        se: None,
        two_tau: None,
        two_tau_err: None,
        window: None,
        negative_acf_sum: false,
        acf: None,
    };
    match estimate_act(series) {
        Ok((a, est)) => {
            let two_tau = 2.0 * est.tau;
            summary.se = Some(sd * (two_tau.max(0.0) / k as f64).sqrt());
            summary.two_tau = Some(two_tau);
            summary.two_tau_err = Some(2.0 * est.tau_error);
            summary.window = Some(est.window);
            summary.negative_acf_sum = est.negative_sum;
            summary.acf = Some(a);
        }
        Err(Error::ActNotConverged { .. }) => {}
        Err(e) => return Err(e),
    }
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub samples: usize,
    #[serde(serialize_with = "serialize_params")]
    pub parameters: Vec<ParamSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub acceptance_rate: Option<f64>,
    #[serde(serialize_with = "serialize_trace")]
    pub acceptance_trace: Vec<WindowAcceptance>,
    #[serde(skip)]
    pub histograms: Vec<Histogram>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data_hash: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
}

fn serialize_params<S: Serializer>(
    params: &[ParamSummary],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut map = serializer.serialize_map(Some(params.len()))?;
    for p in params {
        map.serialize_entry(&p.name, p)?;
    }
    map.end()
}

fn serialize_trace<S: Serializer>(
    trace: &[WindowAcceptance],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry {
        step: usize,
        acceptance: f64,
    }
    serializer.collect_seq(trace.iter().map(|w| Entry {
        step: w.step,
        acceptance: w.acceptance,
    }))
}

impl DiagnosticsReport {
    pub fn parameter(&self, name: &str) -> Option<&ParamSummary> {
        self.parameters.iter().find(|p| p.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn with_acceptance(mut self, rate: f64, trace: Vec<WindowAcceptance>) -> Self {
        self.acceptance_rate = Some(rate);
        self.acceptance_trace = trace;
        self
    }
}

/// Summarizes a QGARCH chain, one entry per parameter in `(alpha, beta, omega, gamma)` order.
///
/// Parameters are processed on separate threads; results do not depend on the order.
pub fn summarize(chain: &[[f64; DIM]]) -> Result<DiagnosticsReport> {
    summarize_with_bins(chain, DEFAULT_BINS)
}

pub fn summarize_with_bins(chain: &[[f64; DIM]], bins: usize) -> Result<DiagnosticsReport> {
    let columns: Vec<Vec<f64>> = (0..DIM)
        .map(|k| chain.iter().map(|s| s[k]).collect())
        .collect();
    let results: Vec<Result<(ParamSummary, Histogram)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = columns
            .iter()
            .zip(PARAM_NAMES)
            .map(|(col, name)| {
                scope.spawn(move || Ok((summarize_series(name, col)?, histogram(col, bins)?)))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("summary thread panicked"))
            .collect()
    });
    let mut parameters = Vec::with_capacity(DIM);
    let mut histograms = Vec::with_capacity(DIM);
    for r in results {
        let (p, h) = r?;
        parameters.push(p);
        histograms.push(h);
    }
    Ok(DiagnosticsReport {
        samples: chain.len(),
        parameters,
        acceptance_rate: None,
        acceptance_trace: Vec::new(),
        histograms,
        data_hash: None,
        config_hash: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn acf_lag_zero_is_one() {
        let a = acf(&[1.0, 3.0, 2.0, 5.0, 4.0], 3).unwrap();
        assert_eq!(a.values()[0], 1.0);
    }

    #[test]
    fn acf_hand_computed() {
        // mean 2.5, variance 1.25, centered (-1.5, -0.5, 0.5, 1.5)
        let a = acf(&[1.0, 2.0, 3.0, 4.0], 2).unwrap();
        let lag1 = (0.75 - 0.25 + 0.75) / (4.0 * 1.25);
        let lag2 = (-0.75 - 0.75) / (4.0 * 1.25);
        assert!((a.values()[1] - lag1).abs() < 1e-15);
        assert!((a.values()[2] - lag2).abs() < 1e-15);
    }

    #[test]
    fn acf_preconditions() {
        assert!(matches!(acf(&[2.0; 10], 3), Err(Error::ZeroVariance)));
        assert!(acf(&[1.0, 2.0, 3.0], 3).is_err());
        assert!(acf(&[1.0, 2.0, 3.0], 0).is_err());
    }

    #[test]
    fn white_acf_gives_half() {
        let mut v = vec![0.0; 50];
        v[0] = 1.0;
        let est = integrated_act(&AcfSeries::from_values(v, 10_000).unwrap()).unwrap();
        assert_eq!(est.tau, 0.5);
        assert_eq!(est.window, 3);
        assert!(!est.negative_sum);
    }

    #[test]
    fn geometric_acf() {
        let v: Vec<f64> = (0..400).map(|t| 0.9f64.powi(t)).collect();
        let est = integrated_act(&AcfSeries::from_values(v, 1_000_000).unwrap()).unwrap();
        // truncation at W ~ 6 tau leaves 9 * 0.9^W of the tail out
        let expected = 0.5 + 9.0 * (1.0 - 0.9f64.powi(est.window as i32));
        assert!((est.tau - expected).abs() < 1e-10);
        assert!((est.tau - 9.5).abs() < 0.05, "tau {}", est.tau);
        assert!(est.window >= 56 && est.window <= 58);
    }

    #[test]
    fn negative_sum_is_flagged() {
        let mut v = vec![0.0; 10];
        v[0] = 1.0;
        v[1] = -0.3;
        let est = integrated_act(&AcfSeries::from_values(v, 1000).unwrap()).unwrap();
        assert!(est.negative_sum);
        assert!(est.tau < 0.5);
    }

    #[test]
    fn window_not_found() {
        let v = vec![1.0; 20];
        assert!(matches!(
            integrated_act(&AcfSeries::from_values(v, 1000).unwrap()),
            Err(Error::ActNotConverged { t_max: 19 })
        ));
    }

    #[test]
    fn histogram_uniform_split() {
        let h = histogram(&[0.0, 1.0, 2.0, 3.0], 2).unwrap();
        assert_eq!(h.counts, vec![2, 2]);
        assert_eq!(h.edges, vec![0.0, 1.5, 3.0]);
    }

    #[test]
    fn histogram_constant_series() {
        let h = histogram(&[4.0; 7], 3).unwrap();
        assert_eq!(h.total(), 7);
        assert!(histogram(&[], 3).is_err());
        assert!(histogram(&[1.0, 2.0], 1).is_err());
    }

    #[test]
    fn constant_chain_rejected() {
        let chain = vec![[0.07, 0.8, 0.1, -0.05]; 200];
        assert!(matches!(summarize(&chain), Err(Error::ZeroVariance)));
    }

    #[test]
    fn short_chain_rejected() {
        let chain: Vec<[f64; 4]> = (0..50).map(|i| [i as f64; 4]).collect();
        assert!(matches!(
            summarize(&chain),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn report_json_layout() {
        let chain: Vec<[f64; 4]> = (0..500)
            .map(|i| {
                let t = i as f64;
                [
                    (t * 1.3).sin(),
                    (t * 2.1).cos(),
                    (t * 0.7).sin(),
                    (t * 3.3).cos(),
                ]
            })
            .collect();
        let report = summarize(&chain).unwrap();
        let json = report.to_json().unwrap();
        let pos: Vec<usize> = PARAM_NAMES
            .iter()
            .map(|n| json.find(&format!("\"{n}\"")).unwrap())
            .collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        for k in ["mean", "sd", "se", "two_tau", "two_tau_err"] {
            assert!(v["parameters"]["alpha"].get(k).is_some(), "missing {k}");
        }
    }
}

//! QGARCH(1,1) process: parameters, simulation and the flat-prior log-posterior.
//!
//! The process is
//!
//! ```text
//! y_t       = sigma_t * eps_t,            eps_t ~ N(0, 1)
//! sigma_t^2 = omega + gamma * y_{t-1} + alpha * y_{t-1}^2 + beta * sigma_{t-1}^2
//! ```
//!
//! Parameter vectors are always ordered `(alpha, beta, omega, gamma)`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampler::LogDensity;

/// Number of free QGARCH parameters.
pub const DIM: usize = 4;

/// Parameter names in vector order.
pub const PARAM_NAMES: [&str; DIM] = ["alpha", "beta", "omega", "gamma"];

/// Default number of discarded steps at the start of a simulation.
pub const DEFAULT_SIM_BURN_IN: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QgarchParams {
    pub alpha: f64,
    pub beta: f64,
    pub omega: f64,
    pub gamma: f64,
}

impl QgarchParams {
    pub const fn new(alpha: f64, beta: f64, omega: f64, gamma: f64) -> Self {
        Self {
            alpha,
            beta,
            omega,
            gamma,
        }
    }

    /// The parameters used to generate the reference data set.
    pub const fn reference() -> Self {
        Self::new(0.07, 0.8, 0.1, -0.05)
    }

    pub fn to_array(&self) -> [f64; DIM] {
        [self.alpha, self.beta, self.omega, self.gamma]
    }

    pub fn from_array(v: [f64; DIM]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    /// Support of the flat prior: alpha >= 0, beta >= 0, omega > 0, gamma free.
    pub fn is_admissible(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
            && self.alpha >= 0.0
            && self.beta >= 0.0
            && self.omega > 0.0
    }

    /// Like [`is_admissible`](Self::is_admissible) but names the violated constraint.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in PARAM_NAMES.iter().zip(self.to_array()) {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        if self.alpha < 0.0 {
            return Err(Error::InvalidParams(format!(
                "alpha must be >= 0, got {}",
                self.alpha
            )));
        }
        if self.beta < 0.0 {
            return Err(Error::InvalidParams(format!(
                "beta must be >= 0, got {}",
                self.beta
            )));
        }
        if self.omega <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "omega must be > 0, got {}",
                self.omega
            )));
        }
        Ok(())
    }

    /// `omega / (1 - alpha - beta)`, the unconditional variance of the symmetric part.
    pub fn unconditional_variance(&self) -> Option<f64> {
        let persistence = self.alpha + self.beta;
        (persistence < 1.0).then(|| self.omega / (1.0 - persistence))
    }

    /// Next conditional variance given the previous observation and variance.
    #[inline]
    pub fn next_variance(&self, y_prev: f64, sigma2_prev: f64) -> f64 {
        self.omega + self.gamma * y_prev + self.alpha * y_prev * y_prev + self.beta * sigma2_prev
    }
}

/// An observed return series. Always holds at least two finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesData {
    y: Vec<f64>,
}

impl SeriesData {
    pub fn new(y: Vec<f64>) -> Result<Self> {
        if y.len() < 2 {
            return Err(Error::InvalidSeries(format!(
                "need at least 2 observations, got {}",
                y.len()
            )));
        }
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!(
                "observation {} is not finite ({})",
                i + 1,
                y[i]
            )));
        }
        Ok(Self { y })
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// Unbiased sample variance, used as the initial conditional variance for inference.
    pub fn sample_variance(&self) -> f64 {
        let n = self.y.len() as f64;
        let mean = self.y.iter().sum::<f64>() / n;
        self.y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.y
    }
}

/// Conditional variances `sigma_1^2 .. sigma_n^2` along a series.
#[derive(Debug, Clone, PartialEq)]
pub struct VariancePath {
    pub sigma2: Vec<f64>,
}

impl VariancePath {
    /// Every element strictly positive.
    pub fn is_admissible(&self) -> bool {
        self.sigma2.iter().all(|&s| s > 0.0)
    }
}

/// Runs the variance recursion over `y` starting from `sigma2_init`.
///
/// Total: the path is returned even when some element is non-positive.
pub fn variance_recursion(params: &QgarchParams, y: &[f64], sigma2_init: f64) -> VariancePath {
    let mut sigma2 = Vec::with_capacity(y.len());
    if y.is_empty() {
        return VariancePath { sigma2 };
    }
    let mut s2 = sigma2_init;
    sigma2.push(s2);
    for &y_prev in &y[..y.len() - 1] {
        s2 = params.next_variance(y_prev, s2);
        sigma2.push(s2);
    }
    VariancePath { sigma2 }
}

/// Simulates `n` observations after discarding `burn_in` initial steps.
///
/// The generator starts from the unconditional variance, so `alpha + beta < 1`
/// is required. Deterministic in `seed`.
pub fn simulate(params: &QgarchParams, n: usize, seed: u64, burn_in: usize) -> Result<SeriesData> {
    params.validate()?;
    let sigma2_start = params
        .unconditional_variance()
        .ok_or(Error::NonStationary {
            sum: params.alpha + params.beta,
        })?;
    if n < 2 {
        return Err(Error::InvalidSeries(format!(
            "need at least 2 observations, got {n}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut y = Vec::with_capacity(n);
    let mut s2 = sigma2_start;
    let mut y_prev = 0.0;
    for step in 0..burn_in + n {
        if step > 0 {
            s2 = params.next_variance(y_prev, s2);
        }
        if !(s2 > 0.0) {
            return Err(Error::NonPositiveVariance { step, value: s2 });
        }
        let eps: f64 = StandardNormal.sample(&mut rng);
        y_prev = s2.sqrt() * eps;
        if step >= burn_in {
            y.push(y_prev);
        }
    }
    SeriesData::new(y)
}

/// Log-likelihood under Gaussian innovations; with a flat prior this is also the
/// unnormalized log-posterior.
///
/// Returns `f64::NEG_INFINITY` for parameters outside the prior support or when
/// any conditional variance is non-positive.
pub fn evaluate_log_posterior(params: &QgarchParams, y: &[f64], sigma2_init: f64) -> f64 {
    if !params.is_admissible() || y.is_empty() || !(sigma2_init > 0.0) {
        return f64::NEG_INFINITY;
    }
    let mut s2 = sigma2_init;
    let mut sum_log = 0.0;
    let mut sum_sq = 0.0;
    for (t, &yt) in y.iter().enumerate() {
        if t > 0 {
            s2 = params.next_variance(y[t - 1], s2);
            if !(s2 > 0.0) {
                return f64::NEG_INFINITY;
            }
        }
        sum_log += s2.ln();
        sum_sq += yt * yt / s2;
    }
    let value = -0.5 * (y.len() as f64 * (2.0 * PI).ln() + sum_log + sum_sq);
    if value.is_nan() {
        f64::NEG_INFINITY
    } else {
        value
    }
}

/// Flat-prior QGARCH posterior over a fixed series.
#[derive(Debug, Clone)]
pub struct QgarchPosterior {
    data: SeriesData,
    sigma2_init: f64,
}

impl QgarchPosterior {
    /// Uses the sample variance of the data as the initial conditional variance.
    pub fn new(data: SeriesData) -> Self {
        let sigma2_init = data.sample_variance();
        Self { data, sigma2_init }
    }

    pub fn with_initial_variance(data: SeriesData, sigma2_init: f64) -> Result<Self> {
        if !(sigma2_init > 0.0 && sigma2_init.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "initial variance must be positive, got {sigma2_init}"
            )));
        }
        Ok(Self { data, sigma2_init })
    }

    pub fn data(&self) -> &SeriesData {
        &self.data
    }

    pub fn sigma2_init(&self) -> f64 {
        self.sigma2_init
    }

    pub fn log_posterior(&self, params: &QgarchParams) -> f64 {
        evaluate_log_posterior(params, self.data.values(), self.sigma2_init)
    }

    /// Warm-up start: alpha = 0.05, beta = 0.5, omega = 0.5 Var(y) (1 - alpha - beta), gamma = 0.
    pub fn default_start(&self) -> QgarchParams {
        let (alpha, beta) = (0.05, 0.5);
        QgarchParams::new(
            alpha,
            beta,
            0.5 * self.sigma2_init * (1.0 - alpha - beta),
            0.0,
        )
    }
}

impl LogDensity<DIM> for QgarchPosterior {
    fn log_density(&self, x: &[f64; DIM]) -> f64 {
        self.log_posterior(&QgarchParams::from_array(*x))
    }
}

/// The `alpha = beta = gamma = 0` submodel as a one-dimensional density over omega.
///
/// The first observation keeps the fixed initial variance; every later one is
/// iid `N(0, omega)`.
#[derive(Debug, Clone)]
pub struct ConstantVariancePosterior {
    inner: QgarchPosterior,
}

impl ConstantVariancePosterior {
    pub fn new(data: SeriesData) -> Self {
        Self {
            inner: QgarchPosterior::new(data),
        }
    }

    pub fn sigma2_init(&self) -> f64 {
        self.inner.sigma2_init
    }

    pub fn data(&self) -> &SeriesData {
        &self.inner.data
    }
}

impl LogDensity<1> for ConstantVariancePosterior {
    fn log_density(&self, x: &[f64; 1]) -> f64 {
        self.inner
            .log_posterior(&QgarchParams::new(0.0, 0.0, x[0], 0.0))
    }
}

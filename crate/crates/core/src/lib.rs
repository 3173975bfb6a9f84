//! Bayesian inference for the QGARCH(1,1) volatility model.
//!
//! The posterior of `(alpha, beta, omega, gamma)` under a flat prior is
//! sampled with an independence Metropolis-Hastings kernel whose multivariate
//! Student's t proposal is re-fitted from the chain's own running mean and
//! covariance. A random-walk Metropolis sampler serves as the warm-up and as
//! the efficiency baseline, and the diagnostics module measures the
//! integrated autocorrelation time of both.
//!
//! ```no_run
//! use qgarch_acs::experiment::fit_adaptive;
//! use qgarch_acs::model::{simulate, QgarchParams};
//! use qgarch_acs::sampler::AdaptationSchedule;
//!
//! let data = simulate(&QgarchParams::reference(), 2000, 1, 500).unwrap();
//! let run = fit_adaptive(&data, &AdaptationSchedule::default(), &[0.01, 0.02, 0.01, 0.01], 7).unwrap();
//! let report = qgarch_acs::diagnostics::summarize(&run.chain.samples).unwrap();
//! println!("{}", report.to_json().unwrap());
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod io;
pub mod model;
pub mod sampler;

pub use error::{Error, Result};
pub use model::{QgarchParams, SeriesData};

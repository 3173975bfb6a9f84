//! Metropolis and adaptive independence Metropolis-Hastings samplers.
//!
//! Everything here is generic over the dimension `D` of the sampled vector so
//! the same kernels drive the four-parameter QGARCH posterior and small test
//! targets.

mod chain;
mod kernel;
mod proposal;

pub use chain::{
    run_adaptive_chain, run_metropolis_chain, AdaptationSchedule, AdaptiveRun, Chain,
    MetropolisConfig, MetropolisMode, MetropolisRun, ProposalSnapshot, WindowAcceptance,
};
pub use kernel::{
    accept_probability, adaptive_mh_step, independence_log_acceptance, metropolis_step,
    metropolis_sweep, ChainState,
};
pub use proposal::{
    fit_proposal, sample_student_t, student_t_log_density, MomentAccumulator, ProposalSpec,
};

/// Unnormalized log-density of a sampling target. `f64::NEG_INFINITY` marks
/// points outside the support.
pub trait LogDensity<const D: usize> {
    fn log_density(&self, x: &[f64; D]) -> f64;
}

impl<const D: usize, F> LogDensity<D> for F
where
    F: Fn(&[f64; D]) -> f64,
{
    fn log_density(&self, x: &[f64; D]) -> f64 {
        self(x)
    }
}

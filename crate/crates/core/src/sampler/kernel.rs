use rand::Rng;

use super::{LogDensity, ProposalSpec};

/// Current position of a chain together with its cached log-density and counters.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainState<const D: usize> {
    pub theta: [f64; D],
    pub log_post: f64,
    pub step_index: usize,
    pub accepts: usize,
    pub rejects: usize,
}

impl<const D: usize> ChainState<D> {
    pub fn new<T: LogDensity<D> + ?Sized>(target: &T, theta: [f64; D]) -> Self {
        Self {
            theta,
            log_post: target.log_density(&theta),
            step_index: 0,
            accepts: 0,
            rejects: 0,
        }
    }

    pub fn acceptance_rate(&self) -> f64 {
        let total = self.accepts + self.rejects;
        if total == 0 {
            0.0
        } else {
            self.accepts as f64 / total as f64
        }
    }

    /// Applies one accept/reject decision. Always consumes exactly one uniform.
    fn decide<R: Rng + ?Sized>(
        &mut self,
        candidate: [f64; D],
        candidate_log_post: f64,
        log_ratio: f64,
        rng: &mut R,
    ) -> bool {
        let u: f64 = rng.random();
        let accept = if candidate_log_post == f64::NEG_INFINITY {
            false
        } else if self.log_post == f64::NEG_INFINITY {
            true
        } else {
            u < accept_probability(log_ratio)
        };
        self.step_index += 1;
        if accept {
            self.theta = candidate;
            self.log_post = candidate_log_post;
            self.accepts += 1;
        } else {
            self.rejects += 1;
        }
        accept
    }
}

/// `min(1, exp(log_ratio))`, with NaN treated as zero.
pub fn accept_probability(log_ratio: f64) -> f64 {
    if log_ratio.is_nan() {
        0.0
    } else if log_ratio >= 0.0 {
        1.0
    } else {
        log_ratio.exp()
    }
}

/// Log acceptance probability of an independence move `from -> to`, given the
/// target and proposal log-densities at both points.
pub fn independence_log_acceptance(
    target_from: f64,
    target_to: f64,
    proposal_from: f64,
    proposal_to: f64,
) -> f64 {
    ((target_to - target_from) + (proposal_from - proposal_to)).min(0.0)
}

/// Joint random-walk Metropolis step with uniform increments on
/// `[-step_sizes[i], step_sizes[i]]`. A zero step size holds that coordinate fixed.
///
/// Draws `D` uniforms for the proposal, then one for the decision.
pub fn metropolis_step<const D: usize, T, R>(
    state: &mut ChainState<D>,
    target: &T,
    step_sizes: &[f64; D],
    rng: &mut R,
) -> bool
where
    T: LogDensity<D> + ?Sized,
    R: Rng + ?Sized,
{
    let mut candidate = state.theta;
    for (x, &h) in candidate.iter_mut().zip(step_sizes) {
        let u: f64 = rng.random();
        *x += h * (2.0 * u - 1.0);
    }
    let lp = target.log_density(&candidate);
    let log_ratio = lp - state.log_post;
    state.decide(candidate, lp, log_ratio, rng)
}

/// One-at-a-time Metropolis: a sweep of single-coordinate updates, skipping
/// coordinates whose step size is zero. Returns the number of accepted updates.
pub fn metropolis_sweep<const D: usize, T, R>(
    state: &mut ChainState<D>,
    target: &T,
    step_sizes: &[f64; D],
    rng: &mut R,
) -> usize
where
    T: LogDensity<D> + ?Sized,
    R: Rng + ?Sized,
{
    let mut accepted = 0;
    for (i, &h) in step_sizes.iter().enumerate() {
        if h == 0.0 {
            continue;
        }
        let mut candidate = state.theta;
        let u: f64 = rng.random();
        candidate[i] += h * (2.0 * u - 1.0);
        let lp = target.log_density(&candidate);
        let log_ratio = lp - state.log_post;
        if state.decide(candidate, lp, log_ratio, rng) {
            accepted += 1;
        }
    }
    accepted
}

/// Independence Metropolis-Hastings step with a Student's t proposal.
///
/// Accepts with probability `min(1, exp(l(x') - l(x) + q(x) - q(x')))`.
pub fn adaptive_mh_step<const D: usize, T, R>(
    state: &mut ChainState<D>,
    target: &T,
    spec: &ProposalSpec<D>,
    rng: &mut R,
) -> bool
where
    T: LogDensity<D> + ?Sized,
    R: Rng + ?Sized,
{
    let candidate = spec.sample(rng);
    let lp = target.log_density(&candidate);
    let log_ratio =
        (lp - state.log_post) + (spec.log_density(&state.theta) - spec.log_density(&candidate));
    state.decide(candidate, lp, log_ratio, rng)
}

use rand::Rng;

use super::{adaptive_mh_step, metropolis_step, metropolis_sweep, ChainState, LogDensity};
use super::{MomentAccumulator, ProposalSpec};
use crate::error::{Error, Result};

/// Timing of the adaptive run. Counts are in MH steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptationSchedule {
    /// Metropolis warm-up steps, discarded.
    pub burn_in: usize,
    /// Metropolis steps after warm-up used for the first proposal fit.
    pub pilot: usize,
    /// Independence-MH steps between proposal re-fits.
    pub refresh: usize,
    /// Independence-MH steps retained for analysis.
    pub analysis_samples: usize,
    /// Student's t shape.
    pub nu: f64,
    /// Stop re-fitting after this many analysis steps.
    pub freeze_after: Option<usize>,
}

impl Default for AdaptationSchedule {
    fn default() -> Self {
        Self {
            burn_in: 3000,
            pilot: 1000,
            refresh: 1000,
            analysis_samples: 100_000,
            nu: 10.0,
            freeze_after: None,
        }
    }
}

impl AdaptationSchedule {
    pub fn validate(&self) -> Result<()> {
        if self.pilot == 0 || self.refresh == 0 || self.analysis_samples == 0 {
            return Err(Error::InvalidConfig(
                "pilot, refresh and analysis_samples must be positive".into(),
            ));
        }
        if !(self.nu > 2.0 && self.nu.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "nu must be > 2, got {}",
                self.nu
            )));
        }
        Ok(())
    }

    fn adapts_at(&self, step: usize) -> bool {
        self.freeze_after.is_none_or(|f| step <= f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MetropolisMode {
    /// All coordinates moved in one proposal.
    #[default]
    Joint,
    /// A sweep of single-coordinate proposals per recorded sample. A sample
    /// counts as accepted when any coordinate moved during its sweep.
    OneAtATime,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetropolisConfig<const D: usize> {
    /// Half-widths of the uniform increments.
    pub step_sizes: [f64; D],
    pub burn_in: usize,
    pub samples: usize,
    pub mode: MetropolisMode,
}

impl<const D: usize> MetropolisConfig<D> {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidConfig(
                "metropolis samples must be positive".into(),
            ));
        }
        if self
            .step_sizes
            .iter()
            .any(|h| !(h.is_finite() && *h >= 0.0))
            || self.step_sizes.iter().all(|&h| h == 0.0)
        {
            return Err(Error::InvalidConfig(format!(
                "step sizes must be finite, non-negative and not all zero: {:?}",
                self.step_sizes
            )));
        }
        Ok(())
    }
}

/// Retained samples with their log-densities and accept flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Chain<const D: usize> {
    pub samples: Vec<[f64; D]>,
    pub log_post: Vec<f64>,
    pub accepted: Vec<bool>,
}

impl<const D: usize> Chain<D> {
    fn with_capacity(n: usize) -> Self {
        Self {
            samples: Vec::with_capacity(n),
            log_post: Vec::with_capacity(n),
            accepted: Vec::with_capacity(n),
        }
    }

    fn record(&mut self, state: &ChainState<D>, accepted: bool) {
        self.samples.push(state.theta);
        self.log_post.push(state.log_post);
        self.accepted.push(accepted);
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Values of coordinate `k` across the chain.
    pub fn component(&self, k: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s[k]).collect()
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.accepted.is_empty() {
            return 0.0;
        }
        self.accepted.iter().filter(|&&a| a).count() as f64 / self.accepted.len() as f64
    }
}

/// Acceptance fraction over one refresh window, ending at `step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowAcceptance {
    pub step: usize,
    pub acceptance: f64,
}

/// Proposal parameters in force after a refresh, and the running `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProposalSnapshot<const D: usize> {
    /// Analysis steps completed when the snapshot was taken; 0 for the pilot fit.
    pub step: usize,
    pub mean: [f64; D],
    pub sigma: [[f64; D]; D],
    pub v: [[f64; D]; D],
    pub acceptance_window: Option<f64>,
}

impl<const D: usize> ProposalSnapshot<D> {
    fn new(
        step: usize,
        spec: &ProposalSpec<D>,
        acc: &MomentAccumulator<D>,
        acceptance_window: Option<f64>,
    ) -> Self {
        Self {
            step,
            mean: spec.mean(),
            sigma: spec.sigma(),
            v: acc.covariance(),
            acceptance_window,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AdaptiveRun<const D: usize> {
    pub chain: Chain<D>,
    pub warmup_acceptance: f64,
    pub acceptance_trace: Vec<WindowAcceptance>,
    pub history: Vec<ProposalSnapshot<D>>,
    pub final_state: ChainState<D>,
}

#[derive(Debug, Clone)]
pub struct MetropolisRun<const D: usize> {
    pub chain: Chain<D>,
    pub burn_in_acceptance: f64,
    pub final_state: ChainState<D>,
}

/// Runs the adaptive construction protocol:
///
/// 1. `burn_in` joint Metropolis steps from `start`, discarded;
/// 2. `pilot` further Metropolis steps, absorbed into the moment accumulator;
/// 3. a Student's t fit to the accumulated moments;
/// 4. `analysis_samples` independence-MH steps, each absorbed into the
///    accumulator, with a re-fit every `refresh` steps over all post-warm-up
///    samples (until `freeze_after`, if set).
///
/// All randomness comes from `rng` in that order.
pub fn run_adaptive_chain<const D: usize, T, R>(
    target: &T,
    start: [f64; D],
    warmup_step_sizes: &[f64; D],
    schedule: &AdaptationSchedule,
    rng: &mut R,
) -> Result<AdaptiveRun<D>>
where
    T: LogDensity<D> + ?Sized,
    R: Rng + ?Sized,
{
    schedule.validate()?;
    let mut state = ChainState::new(target, start);
    if !state.log_post.is_finite() {
        return Err(Error::InadmissibleStart);
    }

    for _ in 0..schedule.burn_in {
        metropolis_step(&mut state, target, warmup_step_sizes, rng);
    }
    if !state.log_post.is_finite() {
        return Err(Error::StuckInadmissible);
    }

    let mut acc = MomentAccumulator::new();
    for _ in 0..schedule.pilot {
        metropolis_step(&mut state, target, warmup_step_sizes, rng);
        acc.push(&state.theta);
    }
    let warmup_acceptance = state.acceptance_rate();

    let mut spec = acc.fit(schedule.nu)?;
    let mut history = vec![ProposalSnapshot::new(0, &spec, &acc, None)];
    let mut trace = Vec::with_capacity(schedule.analysis_samples / schedule.refresh);
    let mut chain = Chain::with_capacity(schedule.analysis_samples);
    let mut window_accepts = 0usize;

    for step in 1..=schedule.analysis_samples {
        let accepted = adaptive_mh_step(&mut state, target, &spec, rng);
        window_accepts += usize::from(accepted);
        chain.record(&state, accepted);
        acc.push(&state.theta);

        if step % schedule.refresh == 0 {
            let rate = window_accepts as f64 / schedule.refresh as f64;
            window_accepts = 0;
            trace.push(WindowAcceptance {
                step,
                acceptance: rate,
            });
            if schedule.adapts_at(step) {
                spec = acc.fit(schedule.nu)?;
            }
            history.push(ProposalSnapshot::new(step, &spec, &acc, Some(rate)));
        }
    }

    Ok(AdaptiveRun {
        chain,
        warmup_acceptance,
        acceptance_trace: trace,
        history,
        final_state: state,
    })
}

/// Random-walk Metropolis baseline: `burn_in` discarded steps, then `samples`
/// recorded ones.
pub fn run_metropolis_chain<const D: usize, T, R>(
    target: &T,
    start: [f64; D],
    config: &MetropolisConfig<D>,
    rng: &mut R,
) -> Result<MetropolisRun<D>>
where
    T: LogDensity<D> + ?Sized,
    R: Rng + ?Sized,
{
    config.validate()?;
    let mut state = ChainState::new(target, start);
    if !state.log_post.is_finite() {
        return Err(Error::InadmissibleStart);
    }
    let advance = |state: &mut ChainState<D>, rng: &mut R| match config.mode {
        MetropolisMode::Joint => metropolis_step(state, target, &config.step_sizes, rng),
        MetropolisMode::OneAtATime => metropolis_sweep(state, target, &config.step_sizes, rng) > 0,
    };

    for _ in 0..config.burn_in {
        advance(&mut state, rng);
    }
    let burn_in_acceptance = state.acceptance_rate();

    let mut chain = Chain::with_capacity(config.samples);
    for _ in 0..config.samples {
        let accepted = advance(&mut state, rng);
        chain.record(&state, accepted);
    }
    Ok(MetropolisRun {
        chain,
        burn_in_acceptance,
        final_state: state,
    })
}

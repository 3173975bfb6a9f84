//! Runs the random-walk Metropolis baseline in joint and one-at-a-time modes
//! on the same data and compares their autocorrelation times.
//!
//! cargo run --release --example metropolis_baseline

use qgarch_acs::cli::format_summary;
use qgarch_acs::diagnostics::summarize;
use qgarch_acs::experiment::{fit_metropolis, DEFAULT_STEP_SIZES};
use qgarch_acs::model::{simulate, QgarchParams, DEFAULT_SIM_BURN_IN};
use qgarch_acs::sampler::{MetropolisConfig, MetropolisMode};

fn main() -> qgarch_acs::Result<()> {
    let data = simulate(&QgarchParams::reference(), 2000, 11, DEFAULT_SIM_BURN_IN)?;
    for (label, mode) in [
        ("joint", MetropolisMode::Joint),
        ("one-at-a-time", MetropolisMode::OneAtATime),
    ] {
        let config = MetropolisConfig {
            step_sizes: DEFAULT_STEP_SIZES,
            burn_in: 3000,
            samples: 50_000,
            mode,
        };
        let run = fit_metropolis(&data, &config, 1)?;
        let report =
            summarize(&run.chain.samples)?.with_acceptance(run.chain.acceptance_rate(), Vec::new());
        print!("{}", format_summary(label, &report));
    }
    Ok(())
}

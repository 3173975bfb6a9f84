//! Shows the proposal settling during adaptation, then held fixed after
//! `freeze_after` so the remaining chain is a plain independence sampler.
//!
//! cargo run --release --example freeze_adaptation

use qgarch_acs::experiment::{fit_adaptive, DEFAULT_STEP_SIZES};
use qgarch_acs::model::{simulate, QgarchParams, DEFAULT_SIM_BURN_IN, PARAM_NAMES};
use qgarch_acs::sampler::AdaptationSchedule;

fn main() -> qgarch_acs::Result<()> {
    let data = simulate(&QgarchParams::reference(), 2000, 11, DEFAULT_SIM_BURN_IN)?;
    let schedule = AdaptationSchedule {
        analysis_samples: 20_000,
        freeze_after: Some(10_000),
        ..AdaptationSchedule::default()
    };
    let run = fit_adaptive(&data, &schedule, &DEFAULT_STEP_SIZES, 1)?;

    println!(
        "{:>6} {:>7} {:>9} {:>9}",
        "step", "accept", PARAM_NAMES[0], PARAM_NAMES[1]
    );
    for snap in &run.history {
        let acc = snap
            .acceptance_window
            .map_or("-".to_string(), |a| format!("{a:.3}"));
        println!(
            "{:>6} {:>7} {:>9.5} {:>9.5}",
            snap.step, acc, snap.mean[0], snap.mean[1]
        );
    }
    println!("overall acceptance {:.3}", run.chain.acceptance_rate());
    Ok(())
}

//! Fits QGARCH parameters with the adaptive independence sampler and prints
//! the posterior summary.
//!
//! cargo run --release --example adaptive_fit -- [analysis_samples]

use qgarch_acs::cli::format_summary;
use qgarch_acs::diagnostics::summarize;
use qgarch_acs::experiment::{fit_adaptive, DEFAULT_STEP_SIZES};
use qgarch_acs::model::{simulate, QgarchParams, DEFAULT_SIM_BURN_IN};
use qgarch_acs::sampler::AdaptationSchedule;

fn main() -> qgarch_acs::Result<()> {
    let samples = std::env::args()
        .nth(1)
        .map_or(50_000, |s| s.parse().expect("analysis_samples"));
    let data = simulate(&QgarchParams::reference(), 2000, 11, DEFAULT_SIM_BURN_IN)?;
    let schedule = AdaptationSchedule {
        analysis_samples: samples,
        ..AdaptationSchedule::default()
    };
    let run = fit_adaptive(&data, &schedule, &DEFAULT_STEP_SIZES, 1)?;
    println!("warm-up acceptance {:.3}", run.warmup_acceptance);

    let report = summarize(&run.chain.samples)?
        .with_acceptance(run.chain.acceptance_rate(), run.acceptance_trace.clone());
    print!("{}", format_summary("adaptive", &report));
    println!(
        "true values         {:?}",
        QgarchParams::reference().to_array()
    );
    Ok(())
}

//! Full reference run: 2000 simulated observations, adaptive sampler and
//! Metropolis baseline with 100000 analysis samples each.
//!
//! ```bash
//! cargo run --release --example reproduce_table1 -- [output_dir] [analysis_samples]
//! ```

use std::path::PathBuf;

use qgarch_acs::cli::format_summary;
use qgarch_acs::experiment::{run_experiment, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let mut config = ExperimentConfig {
        output_dir: PathBuf::from(args.next().unwrap_or_else(|| "table1-out".into())),
        ..ExperimentConfig::default()
    };
    if let Some(n) = args.next() {
        let n: usize = n.parse()?;
        config.schedule.analysis_samples = n;
        config.metropolis.samples = n;
    }

    let run = run_experiment(&config)?;
    print!("{}", format_summary("adaptive", &run.report_adaptive));
    print!("{}", format_summary("metropolis", &run.report_metropolis));
    println!();
    println!("2tau ratio (metropolis / adaptive)");
    for row in &run.comparison.rows {
        match (row.ratio, row.ratio_err) {
            (Some(r), Some(e)) => println!("  {:<6} {:>8.1} ± {:.1}", row.name, r, e),
            _ => println!("  {:<6} unavailable", row.name),
        }
    }
    println!();
    println!("acceptance per refresh window (first 25)");
    for w in run.adaptive.acceptance_trace.iter().take(25) {
        println!("  {:>7} {:.3}", w.step, w.acceptance);
    }
    println!("files written to {}", run.output_dir.display());
    Ok(())
}

//! `qgarch` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a computation fails, 2 when input is
//! rejected before any computation starts.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::diagnostics::{self, DiagnosticsReport, DEFAULT_BINS};
use crate::error::{Error, PhaseExt, Result};
use crate::experiment::{self, files, ExperimentConfig, DEFAULT_STEP_SIZES};
use crate::io;
use crate::model::{simulate, QgarchParams, DEFAULT_SIM_BURN_IN, DIM, PARAM_NAMES};
use crate::sampler::{AdaptationSchedule, MetropolisConfig, MetropolisMode};

#[derive(Debug, Parser)]
#[command(
    name = "qgarch",
    version,
    about = "Bayesian QGARCH(1,1) inference by adaptive MCMC"
)]
pub struct Cli {
    /// Print progress to stderr (repeat for more).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a QGARCH series.
    Simulate(SimulateArgs),
    /// Sample the posterior of a stored series.
    Fit(FitArgs),
    /// Summarize a stored chain.
    Diagnose(DiagnoseArgs),
    /// Run both samplers on fresh data and write the comparison table.
    #[command(name = "reproduce-table1")]
    ReproduceTable1(ReproduceArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 0.07, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.8, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub omega: f64,
    #[arg(long, default_value_t = -0.05, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Number of observations.
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Discarded steps before the first retained observation.
    #[arg(long, default_value_t = DEFAULT_SIM_BURN_IN)]
    pub burn_in: usize,
    /// Output CSV; a JSON sidecar is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = "QGARCH_OUTPUT_DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplerChoice {
    Adaptive,
    Metropolis,
}

impl SamplerChoice {
    fn label(self) -> &'static str {
        match self {
            SamplerChoice::Adaptive => "adaptive",
            SamplerChoice::Metropolis => "metropolis",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeChoice {
    Joint,
    OneAtATime,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Observation file (headerless CSV or JSON).
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value_t = SamplerChoice::Adaptive)]
    pub sampler: SamplerChoice,
    #[arg(long, default_value_t = 3000)]
    pub burn_in: usize,
    #[arg(long, default_value_t = 1000)]
    pub pilot: usize,
    #[arg(long, default_value_t = 1000)]
    pub refresh: usize,
    #[arg(long, default_value_t = 100_000)]
    pub analysis_samples: usize,
    #[arg(long, default_value_t = 10.0)]
    pub nu: f64,
    /// Stop re-fitting the proposal after this many analysis steps.
    #[arg(long)]
    pub freeze_after: Option<usize>,
    /// Chain seed.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Metropolis half-widths for alpha,beta,omega,gamma.
    #[arg(long, value_delimiter = ',', num_args = 4)]
    pub step_sizes: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = ModeChoice::Joint)]
    pub mode: ModeChoice,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,
    #[arg(long, env = "QGARCH_OUTPUT_DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    /// Chain CSV with header `step,alpha,beta,omega,gamma,log_post,accepted`.
    #[arg(long)]
    pub chain: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,
    /// Prefix for the written files.
    #[arg(long, default_value = "chain")]
    pub label: String,
    #[arg(long, env = "QGARCH_OUTPUT_DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Key-value configuration file; flags below override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub data_seed: Option<u64>,
    #[arg(long)]
    pub chain_seed: Option<u64>,
    /// Analysis samples for both samplers.
    #[arg(long)]
    pub analysis_samples: Option<usize>,
    #[arg(long)]
    pub freeze_after: Option<usize>,
    #[arg(long, env = "QGARCH_OUTPUT_DIR")]
    pub out_dir: Option<PathBuf>,
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qgarch: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Simulate(a) => cmd_simulate(a, cli.verbose),
        Command::Fit(a) => cmd_fit(a, cli.verbose),
        Command::Diagnose(a) => cmd_diagnose(a),
        Command::ReproduceTable1(a) => cmd_reproduce_table1(a, cli.verbose),
    }
}

fn output_dir(flag: &Option<PathBuf>) -> PathBuf {
    flag.clone().unwrap_or_else(|| PathBuf::from("."))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

pub fn cmd_simulate(args: &SimulateArgs, verbose: u8) -> Result<()> {
    let params = QgarchParams::new(args.alpha, args.beta, args.omega, args.gamma);
    params.validate()?;
    if params.unconditional_variance().is_none() {
        return Err(Error::NonStationary {
            sum: params.alpha + params.beta,
        });
    }
    if args.n < 2 {
        return Err(invalid(format!("--n must be at least 2, got {}", args.n)));
    }
    let out = match &args.out {
        Some(p) => p.clone(),
        None => output_dir(&args.out_dir).join(files::DATA),
    };

    let data = simulate(&params, args.n, args.seed, args.burn_in).phase("simulate")?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        ensure_dir(parent)?;
    }
    io::write_file(&out, &io::series_to_csv(&data))?;
    let meta = io::SeriesMeta {
        seed: args.seed,
        params,
        burn_in: Some(args.burn_in),
        config_hash: None,
    };
    io::write_file(
        &out.with_extension("json"),
        &io::series_to_json(&data, Some(meta))?,
    )?;
    if verbose > 0 {
        eprintln!("wrote {} observations to {}", data.len(), out.display());
    }
    Ok(())
}

fn step_sizes(flag: &Option<Vec<f64>>) -> Result<[f64; DIM]> {
    match flag {
        None => Ok(DEFAULT_STEP_SIZES),
        Some(v) => <[f64; DIM]>::try_from(v.as_slice())
            .map_err(|_| invalid(format!("--step-sizes needs 4 values, got {}", v.len()))),
    }
}

pub fn cmd_fit(args: &FitArgs, verbose: u8) -> Result<()> {
    let schedule = AdaptationSchedule {
        burn_in: args.burn_in,
        pilot: args.pilot,
        refresh: args.refresh,
        analysis_samples: args.analysis_samples,
        nu: args.nu,
        freeze_after: args.freeze_after,
    };
    schedule.validate()?;
    let steps = step_sizes(&args.step_sizes)?;
    let metropolis = MetropolisConfig {
        step_sizes: steps,
        burn_in: args.burn_in,
        samples: args.analysis_samples,
        mode: match args.mode {
            ModeChoice::Joint => MetropolisMode::Joint,
            ModeChoice::OneAtATime => MetropolisMode::OneAtATime,
        },
    };
    metropolis.validate()?;
    if args.bins < 2 {
        return Err(invalid("--bins must be at least 2"));
    }
    let data = io::read_series(&args.data).phase("data")?;
    let data_hash = io::sha256_hex(io::series_to_csv(&data).as_bytes());
    let dir = output_dir(&args.out_dir);
    ensure_dir(&dir)?;
    let label = args.sampler.label();

    let (chain, rate, trace) = match args.sampler {
        SamplerChoice::Adaptive => {
            let run = experiment::fit_adaptive(&data, &schedule, &steps, args.seed)
                .phase("adaptive chain")?;
            if verbose > 0 {
                eprintln!("warm-up acceptance {:.3}", run.warmup_acceptance);
            }
            io::write_file(
                &dir.join(files::PROPOSAL_HISTORY),
                &io::history_to_jsonl(&run.history, None)?,
            )?;
            io::write_file(
                &dir.join(files::ACCEPTANCE),
                &io::acceptance_to_csv(&run.acceptance_trace),
            )?;
            let rate = run.chain.acceptance_rate();
            (run.chain, rate, run.acceptance_trace)
        }
        SamplerChoice::Metropolis => {
            let run = experiment::fit_metropolis(&data, &metropolis, args.seed)
                .phase("metropolis chain")?;
            let rate = run.chain.acceptance_rate();
            (run.chain, rate, Vec::new())
        }
    };
    io::write_file(
        &dir.join(format!("chain_{label}.csv")),
        &io::chain_to_csv(&chain),
    )?;
    let report = DiagnosticsReport {
        data_hash: Some(data_hash),
        ..diagnostics::summarize_with_bins(&chain.samples, args.bins)
            .phase("diagnostics")?
            .with_acceptance(rate, trace)
    };
    io::write_file(
        &dir.join(format!("report_{label}.json")),
        &(report.to_json()? + "\n"),
    )?;
    print!("{}", format_summary(label, &report));
    Ok(())
}

pub fn cmd_diagnose(args: &DiagnoseArgs) -> Result<()> {
    if args.bins < 2 {
        return Err(invalid("--bins must be at least 2"));
    }
    let text = io::read_file(&args.chain)?;
    let chain = io::chain_from_csv(&text, &args.chain)?;
    let dir = output_dir(&args.out_dir);
    ensure_dir(&dir)?;
    let report = diagnostics::summarize_with_bins(&chain.samples, args.bins)
        .phase("diagnostics")?
        .with_acceptance(chain.acceptance_rate(), Vec::new());
    io::write_file(
        &dir.join(format!("report_{}.json", args.label)),
        &(report.to_json()? + "\n"),
    )?;
    for (k, name) in PARAM_NAMES.iter().enumerate() {
        io::write_file(
            &dir.join(format!("hist_{}_{name}.csv", args.label)),
            &io::histogram_to_csv(&report.histograms[k]),
        )?;
        if let Some(acf) = &report.parameters[k].acf {
            io::write_file(
                &dir.join(format!("acf_{}_{name}.csv", args.label)),
                &io::acf_to_csv(acf),
            )?;
        }
    }
    print!("{}", format_summary(&args.label, &report));
    Ok(())
}

/// Builds the experiment configuration for `reproduce-table1`.
pub fn reproduce_config(args: &ReproduceArgs) -> Result<ExperimentConfig> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = args.data_seed {
        config.data_seed = s;
    }
    if let Some(s) = args.chain_seed {
        config.chain_seed = s;
    }
    if let Some(n) = args.analysis_samples {
        config.schedule.analysis_samples = n;
        config.metropolis.samples = n;
    }
    if let Some(f) = args.freeze_after {
        config.schedule.freeze_after = Some(f);
    }
    if let Some(dir) = &args.out_dir {
        config.output_dir = dir.clone();
    } else if args.config.is_none() {
        config.output_dir = PathBuf::from(".");
    }
    config.validate()?;
    Ok(config)
}

pub fn cmd_reproduce_table1(args: &ReproduceArgs, verbose: u8) -> Result<()> {
    let config = reproduce_config(args)?;
    if verbose > 0 {
        eprintln!(
            "config {} -> {}",
            &config.hash()[..12],
            config.output_dir.display()
        );
    }
    let run = experiment::run_experiment(&config)?;
    print!("{}", format_summary("adaptive", &run.report_adaptive));
    print!("{}", format_summary("metropolis", &run.report_metropolis));
    if let Some(r) = run.comparison.get("alpha").and_then(|r| r.ratio) {
        println!("alpha 2tau ratio (metropolis / adaptive): {}", sig(r, 3));
    }
    Ok(())
}

/// Rounds to `digits` significant figures for display.
pub fn sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - mag).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Table-1-style block for one report: mean, SD, SE and 2tau per parameter.
pub fn format_summary(label: &str, report: &DiagnosticsReport) -> String {
    let mut out = String::new();
    write!(out, "{label:<12}").unwrap();
    for name in PARAM_NAMES {
        write!(out, "{name:>16}").unwrap();
    }
    out.push('\n');
    let rows: [(&str, Box<dyn Fn(&diagnostics::ParamSummary) -> String>); 4] = [
        ("mean", Box::new(|p| sig(p.mean, 4))),
        ("SD", Box::new(|p| sig(p.sd, 2))),
        ("SE", Box::new(|p| p.se.map_or("n/a".into(), |v| sig(v, 2)))),
        (
            "2tau",
            Box::new(|p| match (p.two_tau, p.two_tau_err) {
                (Some(t), Some(e)) => format!("{} ± {}", sig(t, 2), sig(e, 2)),
                _ => "n/a".into(),
            }),
        ),
    ];
    for (row, cell) in rows {
        write!(out, "{row:<12}").unwrap();
        for p in &report.parameters {
            write!(out, "{:>16}", cell(p)).unwrap();
        }
        out.push('\n');
    }
    if let Some(rate) = report.acceptance_rate {
        writeln!(out, "{:<12}{:>16}", "acceptance", sig(rate, 3)).unwrap();
    }
    out
}

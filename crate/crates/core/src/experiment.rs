//! End-to-end reproduction runs: simulate data, run the adaptive sampler and
//! the Metropolis baseline on the same series, and write every artifact.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{self, paired_histograms, DiagnosticsReport, DEFAULT_BINS};
use crate::error::{Error, PhaseExt, Result};
use crate::io;
use crate::model::{
    simulate, QgarchParams, QgarchPosterior, SeriesData, DEFAULT_SIM_BURN_IN, DIM, PARAM_NAMES,
};
use crate::sampler::{
    run_adaptive_chain, run_metropolis_chain, AdaptationSchedule, AdaptiveRun, MetropolisConfig,
    MetropolisMode, MetropolisRun,
};

/// Warm-up half-widths for `(alpha, beta, omega, gamma)`.
pub const DEFAULT_STEP_SIZES: [f64; DIM] = [0.01, 0.02, 0.01, 0.01];

/// ChaCha stream used by the adaptive chain.
pub const ADAPTIVE_STREAM: u64 = 0;
/// ChaCha stream used by the Metropolis baseline.
pub const METROPOLIS_STREAM: u64 = 1;

/// Generator for one chain: `chain_seed` selects the key, `stream` the ChaCha stream.
pub fn chain_rng(chain_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(chain_seed);
    rng.set_stream(stream);
    rng
}

pub mod files {
    pub const CONFIG: &str = "config.toml";
    pub const DATA: &str = "data.csv";
    pub const DATA_JSON: &str = "data.json";
    pub const CHAIN_ADAPTIVE: &str = "chain_adaptive.csv";
    pub const CHAIN_METROPOLIS: &str = "chain_metropolis.csv";
    pub const PROPOSAL_HISTORY: &str = "proposal_history.jsonl";
    pub const REPORT_ADAPTIVE: &str = "report_adaptive.json";
    pub const REPORT_METROPOLIS: &str = "report_metropolis.json";
    pub const TABLE1: &str = "table1.csv";
    pub const ACT_RATIOS: &str = "act_ratios.csv";
    pub const ACCEPTANCE: &str = "acceptance.csv";
    pub const V_HISTORY: &str = "v_history.csv";
    pub const MANIFEST: &str = "manifest.json";
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub true_params: QgarchParams,
    pub n_obs: usize,
    pub sim_burn_in: usize,
    pub data_seed: u64,
    pub chain_seed: u64,
    pub schedule: AdaptationSchedule,
    pub warmup_step_sizes: [f64; DIM],
    pub metropolis: MetropolisConfig<DIM>,
    pub histogram_bins: usize,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let schedule = AdaptationSchedule::default();
        Self {
            true_params: QgarchParams::reference(),
            n_obs: 2000,
            sim_burn_in: DEFAULT_SIM_BURN_IN,
            data_seed: 20_100_625,
            chain_seed: 7,
            schedule,
            warmup_step_sizes: DEFAULT_STEP_SIZES,
            metropolis: MetropolisConfig {
                step_sizes: DEFAULT_STEP_SIZES,
                burn_in: schedule.burn_in,
                samples: schedule.analysis_samples,
                mode: MetropolisMode::Joint,
            },
            histogram_bins: DEFAULT_BINS,
            output_dir: PathBuf::from("qgarch-out"),
        }
    }
}

/// Flat key-value form of [`ExperimentConfig`]; every key is optional and
/// falls back to the default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub omega: Option<f64>,
    pub gamma: Option<f64>,
    pub n_obs: Option<usize>,
    pub sim_burn_in: Option<usize>,
    pub data_seed: Option<u64>,
    pub chain_seed: Option<u64>,
    pub burn_in: Option<usize>,
    pub pilot: Option<usize>,
    pub refresh: Option<usize>,
    pub analysis_samples: Option<usize>,
    pub nu: Option<f64>,
    pub freeze_after: Option<usize>,
    pub step_alpha: Option<f64>,
    pub step_beta: Option<f64>,
    pub step_omega: Option<f64>,
    pub step_gamma: Option<f64>,
    pub metropolis_step_alpha: Option<f64>,
    pub metropolis_step_beta: Option<f64>,
    pub metropolis_step_omega: Option<f64>,
    pub metropolis_step_gamma: Option<f64>,
    pub metropolis_burn_in: Option<usize>,
    pub metropolis_samples: Option<usize>,
    /// `joint` or `one_at_a_time`.
    pub metropolis_mode: Option<String>,
    pub histogram_bins: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: ConfigFile =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        Self::from_file_values(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&io::read_file(path)?)
    }

    pub fn from_file_values(f: ConfigFile) -> Result<Self> {
        let d = Self::default();
        let true_params = QgarchParams::new(
            f.alpha.unwrap_or(d.true_params.alpha),
            f.beta.unwrap_or(d.true_params.beta),
            f.omega.unwrap_or(d.true_params.omega),
            f.gamma.unwrap_or(d.true_params.gamma),
        );
        let schedule = AdaptationSchedule {
            burn_in: f.burn_in.unwrap_or(d.schedule.burn_in),
            pilot: f.pilot.unwrap_or(d.schedule.pilot),
            refresh: f.refresh.unwrap_or(d.schedule.refresh),
            analysis_samples: f.analysis_samples.unwrap_or(d.schedule.analysis_samples),
            nu: f.nu.unwrap_or(d.schedule.nu),
            freeze_after: f.freeze_after,
        };
        let warmup_step_sizes = [
            f.step_alpha.unwrap_or(d.warmup_step_sizes[0]),
            f.step_beta.unwrap_or(d.warmup_step_sizes[1]),
            f.step_omega.unwrap_or(d.warmup_step_sizes[2]),
            f.step_gamma.unwrap_or(d.warmup_step_sizes[3]),
        ];
        let mode = match f.metropolis_mode.as_deref() {
            None | Some("joint") => MetropolisMode::Joint,
            Some("one_at_a_time") => MetropolisMode::OneAtATime,
            Some(other) => {
                return Err(Error::InvalidConfig(format!(
                    "metropolis_mode must be joint or one_at_a_time, got {other:?}"
                )))
            }
        };
        let metropolis = MetropolisConfig {
            step_sizes: [
                f.metropolis_step_alpha.unwrap_or(warmup_step_sizes[0]),
                f.metropolis_step_beta.unwrap_or(warmup_step_sizes[1]),
                f.metropolis_step_omega.unwrap_or(warmup_step_sizes[2]),
                f.metropolis_step_gamma.unwrap_or(warmup_step_sizes[3]),
            ],
            // symmetric with the adaptive run unless overridden
            burn_in: f.metropolis_burn_in.unwrap_or(schedule.burn_in),
            samples: f.metropolis_samples.unwrap_or(schedule.analysis_samples),
            mode,
        };
        Ok(Self {
            true_params,
            n_obs: f.n_obs.unwrap_or(d.n_obs),
            sim_burn_in: f.sim_burn_in.unwrap_or(d.sim_burn_in),
            data_seed: f.data_seed.unwrap_or(d.data_seed),
            chain_seed: f.chain_seed.unwrap_or(d.chain_seed),
            schedule,
            warmup_step_sizes,
            metropolis,
            histogram_bins: f.histogram_bins.unwrap_or(d.histogram_bins),
            output_dir: f.output_dir.unwrap_or(d.output_dir),
        })
    }

    pub fn to_file_values(&self) -> ConfigFile {
        ConfigFile {
            alpha: Some(self.true_params.alpha),
            beta: Some(self.true_params.beta),
            omega: Some(self.true_params.omega),
            gamma: Some(self.true_params.gamma),
            n_obs: Some(self.n_obs),
            sim_burn_in: Some(self.sim_burn_in),
            data_seed: Some(self.data_seed),
            chain_seed: Some(self.chain_seed),
            burn_in: Some(self.schedule.burn_in),
            pilot: Some(self.schedule.pilot),
            refresh: Some(self.schedule.refresh),
            analysis_samples: Some(self.schedule.analysis_samples),
            nu: Some(self.schedule.nu),
            freeze_after: self.schedule.freeze_after,
            step_alpha: Some(self.warmup_step_sizes[0]),
            step_beta: Some(self.warmup_step_sizes[1]),
            step_omega: Some(self.warmup_step_sizes[2]),
            step_gamma: Some(self.warmup_step_sizes[3]),
            metropolis_step_alpha: Some(self.metropolis.step_sizes[0]),
            metropolis_step_beta: Some(self.metropolis.step_sizes[1]),
            metropolis_step_omega: Some(self.metropolis.step_sizes[2]),
            metropolis_step_gamma: Some(self.metropolis.step_sizes[3]),
            metropolis_burn_in: Some(self.metropolis.burn_in),
            metropolis_samples: Some(self.metropolis.samples),
            metropolis_mode: Some(
                match self.metropolis.mode {
                    MetropolisMode::Joint => "joint",
                    MetropolisMode::OneAtATime => "one_at_a_time",
                }
                .to_string(),
            ),
            histogram_bins: Some(self.histogram_bins),
            output_dir: Some(self.output_dir.clone()),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_file_values()).expect("flat config always serializes")
    }

    /// SHA-256 of the configuration with `output_dir` left out, so moving a
    /// run does not change its identity.
    pub fn hash(&self) -> String {
        let mut values = self.to_file_values();
        values.output_dir = None;
        io::sha256_hex(toml::to_string(&values).unwrap().as_bytes())
    }

    pub fn validate(&self) -> Result<()> {
        self.true_params.validate()?;
        if self.true_params.unconditional_variance().is_none() {
            return Err(Error::NonStationary {
                sum: self.true_params.alpha + self.true_params.beta,
            });
        }
        if self.n_obs < 2 {
            return Err(Error::InvalidConfig(format!(
                "n_obs must be at least 2, got {}",
                self.n_obs
            )));
        }
        self.schedule.validate()?;
        MetropolisConfig {
            step_sizes: self.warmup_step_sizes,
            ..self.metropolis
        }
        .validate()?;
        self.metropolis.validate()?;
        if self.histogram_bins < 2 {
            return Err(Error::InvalidConfig("histogram_bins must be >= 2".into()));
        }
        Ok(())
    }
}

/// Runs the adaptive protocol on `data` from the default warm-up start.
pub fn fit_adaptive(
    data: &SeriesData,
    schedule: &AdaptationSchedule,
    warmup_step_sizes: &[f64; DIM],
    chain_seed: u64,
) -> Result<AdaptiveRun<DIM>> {
    let posterior = QgarchPosterior::new(data.clone());
    let start = posterior.default_start().to_array();
    let mut rng = chain_rng(chain_seed, ADAPTIVE_STREAM);
    run_adaptive_chain(&posterior, start, warmup_step_sizes, schedule, &mut rng)
}

/// Runs the Metropolis baseline on `data` from the default warm-up start.
pub fn fit_metropolis(
    data: &SeriesData,
    config: &MetropolisConfig<DIM>,
    chain_seed: u64,
) -> Result<MetropolisRun<DIM>> {
    let posterior = QgarchPosterior::new(data.clone());
    let start = posterior.default_start().to_array();
    let mut rng = chain_rng(chain_seed, METROPOLIS_STREAM);
    run_metropolis_chain(&posterior, start, config, &mut rng)
}

/// Ratio `two_tau_b / two_tau_a` for one parameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActRatio {
    pub name: String,
    pub two_tau_a: Option<f64>,
    pub two_tau_a_err: Option<f64>,
    pub two_tau_b: Option<f64>,
    pub two_tau_b_err: Option<f64>,
    /// `None` when either autocorrelation time did not converge.
    pub ratio: Option<f64>,
    pub ratio_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyComparison {
    pub rows: Vec<ActRatio>,
}

impl EfficiencyComparison {
    pub fn get(&self, name: &str) -> Option<&ActRatio> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "parameter,two_tau_a,two_tau_a_err,two_tau_b,two_tau_b_err,ratio,ratio_err\n",
        );
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.name,
                fmt_opt(r.two_tau_a),
                fmt_opt(r.two_tau_a_err),
                fmt_opt(r.two_tau_b),
                fmt_opt(r.two_tau_b_err),
                fmt_opt(r.ratio),
                fmt_opt(r.ratio_err)
            )
            .unwrap();
        }
        out
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

/// Per-parameter `two_tau_b / two_tau_a`, with relative errors added in quadrature.
pub fn compare_efficiency(
    report_a: &DiagnosticsReport,
    report_b: &DiagnosticsReport,
) -> Result<EfficiencyComparison> {
    let mut rows = Vec::with_capacity(report_a.parameters.len());
    for a in &report_a.parameters {
        let b = report_b
            .parameter(&a.name)
            .ok_or_else(|| Error::MissingParameter(a.name.clone()))?;
        let (ratio, ratio_err) = match (a.two_tau, b.two_tau) {
            (Some(ta), Some(tb)) if ta > 0.0 => {
                let r = tb / ta;
                let rel_a = a.two_tau_err.unwrap_or(0.0) / ta;
                let rel_b = b.two_tau_err.unwrap_or(0.0) / tb;
                (Some(r), Some(r * rel_a.hypot(rel_b)))
            }
            _ => (None, None),
        };
        rows.push(ActRatio {
            name: a.name.clone(),
            two_tau_a: a.two_tau,
            two_tau_a_err: a.two_tau_err,
            two_tau_b: b.two_tau,
            two_tau_b_err: b.two_tau_err,
            ratio,
            ratio_err,
        });
    }
    for b in &report_b.parameters {
        if report_a.parameter(&b.name).is_none() {
            return Err(Error::MissingParameter(b.name.clone()));
        }
    }
    Ok(EfficiencyComparison { rows })
}

/// Side-by-side table: true values, then mean / SD / SE / 2tau for each sampler.
pub fn table1_csv(
    truth: &QgarchParams,
    adaptive: &DiagnosticsReport,
    metropolis: &DiagnosticsReport,
) -> String {
    let mut out = String::from("row");
    for name in PARAM_NAMES {
        write!(out, ",{name}").unwrap();
    }
    out.push('\n');
    write!(out, "true").unwrap();
    for v in truth.to_array() {
        write!(out, ",{v}").unwrap();
    }
    out.push('\n');
    for (label, report) in [("adaptive", adaptive), ("metropolis", metropolis)] {
        let rows: [(String, fn(&diagnostics::ParamSummary) -> Option<f64>); 4] = [
            (label.to_string(), |p| Some(p.mean)),
            (format!("{label}_sd"), |p| Some(p.sd)),
            (format!("{label}_se"), |p| p.se),
            (format!("{label}_two_tau"), |p| p.two_tau),
        ];
        for (row, get) in rows {
            out.push_str(&row);
            for name in PARAM_NAMES {
                let v = report.parameter(name).and_then(get);
                write!(out, ",{}", fmt_opt(v)).unwrap();
            }
            out.push('\n');
        }
    }
    out
}

/// Everything produced by [`run_experiment`].
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub output_dir: PathBuf,
    pub config_hash: String,
    pub data_hash: String,
    pub data: SeriesData,
    pub adaptive: AdaptiveRun<DIM>,
    pub metropolis: MetropolisRun<DIM>,
    pub report_adaptive: DiagnosticsReport,
    pub report_metropolis: DiagnosticsReport,
    pub comparison: EfficiencyComparison,
    /// Relative paths of all written files, in write order.
    pub files: Vec<String>,
}

struct Writer {
    dir: PathBuf,
    written: Vec<String>,
}

impl Writer {
    fn put(&mut self, name: &str, contents: &str) -> Result<()> {
        io::write_file(&self.dir.join(name), contents)?;
        self.written.push(name.to_string());
        Ok(())
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    config_hash: &'a str,
    data_hash: &'a str,
    files: Vec<(String, String)>,
}

/// Simulates data, runs both samplers on it and writes all artifacts under
/// `config.output_dir`. Files are written as soon as they are available so a
/// failed run leaves its partial output behind.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunArtifacts> {
    config.validate().phase("config")?;
    let config_hash = config.hash();
    let dir = config.output_dir.clone();
    fs::create_dir_all(&dir)
        .map_err(|e| Error::io(&dir, e))
        .phase("output")?;
    let mut w = Writer {
        dir: dir.clone(),
        written: Vec::new(),
    };
    w.put(files::CONFIG, &config.to_toml()).phase("output")?;

    let data = simulate(
        &config.true_params,
        config.n_obs,
        config.data_seed,
        config.sim_burn_in,
    )
    .phase("simulate")?;
    let data_csv = io::series_to_csv(&data);
    let data_hash = io::sha256_hex(data_csv.as_bytes());
    w.put(files::DATA, &data_csv).phase("simulate")?;
    let meta = io::SeriesMeta {
        seed: config.data_seed,
        params: config.true_params,
        burn_in: Some(config.sim_burn_in),
        config_hash: Some(config_hash.clone()),
    };
    w.put(files::DATA_JSON, &io::series_to_json(&data, Some(meta))?)
        .phase("simulate")?;

    // both samplers read the observation file back, not the in-memory series
    let data_path = dir.join(files::DATA);
    let stored = io::read_file(&data_path).phase("data")?;
    let found = io::sha256_hex(stored.as_bytes());
    if found != data_hash {
        return Err(Error::DataHashMismatch {
            expected: data_hash,
            found,
        })
        .phase("data");
    }
    let observed = io::series_from_csv(&stored, &data_path).phase("data")?;

    let (adaptive, metropolis) = std::thread::scope(|scope| {
        let a = scope.spawn(|| {
            fit_adaptive(
                &observed,
                &config.schedule,
                &config.warmup_step_sizes,
                config.chain_seed,
            )
        });
        let m = scope.spawn(|| fit_metropolis(&observed, &config.metropolis, config.chain_seed));
        (
            a.join().expect("adaptive chain panicked"),
            m.join().expect("metropolis chain panicked"),
        )
    });
    let adaptive = adaptive.phase("adaptive chain")?;
    w.put(files::CHAIN_ADAPTIVE, &io::chain_to_csv(&adaptive.chain))
        .phase("adaptive chain")?;
    w.put(
        files::PROPOSAL_HISTORY,
        &io::history_to_jsonl(&adaptive.history, Some(&config_hash))?,
    )
    .phase("adaptive chain")?;
    w.put(
        files::ACCEPTANCE,
        &io::acceptance_to_csv(&adaptive.acceptance_trace),
    )
    .phase("adaptive chain")?;
    w.put(files::V_HISTORY, &io::v_history_to_csv(&adaptive.history))
        .phase("adaptive chain")?;
    let metropolis = metropolis.phase("metropolis chain")?;
    w.put(
        files::CHAIN_METROPOLIS,
        &io::chain_to_csv(&metropolis.chain),
    )
    .phase("metropolis chain")?;

    let tag = |r: DiagnosticsReport| DiagnosticsReport {
        data_hash: Some(data_hash.clone()),
        config_hash: Some(config_hash.clone()),
        ..r
    };
    let report_adaptive = tag(diagnostics::summarize_with_bins(
        &adaptive.chain.samples,
        config.histogram_bins,
    )
    .phase("adaptive diagnostics")?
    .with_acceptance(
        adaptive.chain.acceptance_rate(),
        adaptive.acceptance_trace.clone(),
    ));
    w.put(files::REPORT_ADAPTIVE, &(report_adaptive.to_json()? + "\n"))
        .phase("adaptive diagnostics")?;
    let report_metropolis = tag(diagnostics::summarize_with_bins(
        &metropolis.chain.samples,
        config.histogram_bins,
    )
    .phase("metropolis diagnostics")?
    .with_acceptance(metropolis.chain.acceptance_rate(), Vec::new()));
    w.put(
        files::REPORT_METROPOLIS,
        &(report_metropolis.to_json()? + "\n"),
    )
    .phase("metropolis diagnostics")?;

    if report_adaptive.data_hash != report_metropolis.data_hash {
        return Err(Error::DataHashMismatch {
            expected: data_hash.clone(),
            found: report_metropolis.data_hash.clone().unwrap_or_default(),
        })
        .phase("comparison");
    }
    let comparison =
        compare_efficiency(&report_adaptive, &report_metropolis).phase("comparison")?;
    w.put(files::ACT_RATIOS, &comparison.to_csv())
        .phase("comparison")?;
    w.put(
        files::TABLE1,
        &table1_csv(&config.true_params, &report_adaptive, &report_metropolis),
    )
    .phase("comparison")?;

    for (k, name) in PARAM_NAMES.iter().enumerate() {
        let a = adaptive.chain.component(k);
        let m = metropolis.chain.component(k);
        let (ha, hm) = paired_histograms(&a, &m, config.histogram_bins).phase("figures")?;
        w.put(
            &format!("hist_adaptive_{name}.csv"),
            &io::histogram_to_csv(&ha),
        )
        .phase("figures")?;
        w.put(
            &format!("hist_metropolis_{name}.csv"),
            &io::histogram_to_csv(&hm),
        )
        .phase("figures")?;
        for (label, report) in [
            ("adaptive", &report_adaptive),
            ("metropolis", &report_metropolis),
        ] {
            if let Some(acf) = report.parameters[k].acf.as_ref() {
                w.put(&format!("acf_{label}_{name}.csv"), &io::acf_to_csv(acf))
                    .phase("figures")?;
            }
        }
    }

    let mut entries = Vec::with_capacity(w.written.len());
    for name in &w.written {
        let bytes = fs::read(dir.join(name)).map_err(|e| Error::io(dir.join(name), e))?;
        entries.push((name.clone(), io::sha256_hex(&bytes)));
    }
    let manifest = Manifest {
        config_hash: &config_hash,
        data_hash: &data_hash,
        files: entries,
    };
    w.put(
        files::MANIFEST,
        &(serde_json::to_string_pretty(&manifest)? + "\n"),
    )
    .phase("output")?;

    Ok(RunArtifacts {
        output_dir: dir,
        config_hash,
        data_hash,
        data: observed,
        adaptive,
        metropolis,
        report_adaptive,
        report_metropolis,
        comparison,
        files: w.written,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_protocol() {
        let c = ExperimentConfig::default();
        assert_eq!(c.true_params, QgarchParams::new(0.07, 0.8, 0.1, -0.05));
        assert_eq!(c.n_obs, 2000);
        assert_eq!(c.schedule.burn_in, 3000);
        assert_eq!(c.schedule.pilot, 1000);
        assert_eq!(c.schedule.refresh, 1000);
        assert_eq!(c.schedule.analysis_samples, 100_000);
        assert_eq!(c.schedule.nu, 10.0);
        assert_eq!(c.metropolis.samples, 100_000);
        assert_eq!(c.metropolis.burn_in, 3000);
    }

    #[test]
    fn toml_round_trip() {
        let mut c = ExperimentConfig::default();
        c.schedule.freeze_after = Some(20_000);
        c.metropolis.mode = MetropolisMode::OneAtATime;
        let back = ExperimentConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
    }

    #[test]
    fn partial_toml_uses_defaults() {
        let c = ExperimentConfig::from_toml("analysis_samples = 5000\ndata_seed = 3\n").unwrap();
        assert_eq!(c.schedule.analysis_samples, 5000);
        assert_eq!(c.metropolis.samples, 5000);
        assert_eq!(c.data_seed, 3);
        assert_eq!(c.n_obs, 2000);
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(ExperimentConfig::from_toml("alpah = 0.1\n").is_err());
        assert!(ExperimentConfig::from_toml("metropolis_mode = \"gibbs\"\n").is_err());
    }

    #[test]
    fn hash_ignores_output_dir() {
        let a = ExperimentConfig::default();
        let b = ExperimentConfig {
            output_dir: "elsewhere".into(),
            ..a.clone()
        };
        assert_eq!(a.hash(), b.hash());
        let c = ExperimentConfig {
            chain_seed: 99,
            ..a.clone()
        };
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn validation() {
        let mut c = ExperimentConfig::default();
        c.schedule.analysis_samples = 0;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::default();
        c.true_params.beta = 0.95;
        assert!(matches!(c.validate(), Err(Error::NonStationary { .. })));
    }
}

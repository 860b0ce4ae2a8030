//! Replicated experiments, summary statistics and CSV output.
//!
//! Replication `r` at horizon `n` runs with seed
//! [`derive_run_seed`](crate::rng::derive_run_seed)`(master_seed, n, r)`.
//! That seed keys both the environment (stream `t` for round `t`) and the
//! learner's sampling (stream 0), so a run is a pure function of
//! `(config, n, r)`. Runs execute in parallel and are reduced in `(n, r)`
//! order.

mod stats;
pub mod sweep;
pub mod verify;

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::environments::{argmin, Environment, EnvironmentConfig};
use crate::error::{Error, Result};
use crate::policies::{corollary2_bound, corollary3_bound, PolicyConfig, PreparedPolicy};
use crate::rng::{self, derive_run_seed, LEARNER_STREAM};
use crate::types::{RoundRecord, RunDiagnostics, RunRecord};

pub use stats::{fit_loglog_slope, sample_mean, sample_variance, tail_probability};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub policy: PolicyConfig,
    pub environment: EnvironmentConfig,
    pub horizons: Vec<u64>,
    pub replications: u64,
    #[serde(default)]
    pub master_seed: u64,
    /// Keep per-round traces (written as one CSV per run).
    #[serde(default)]
    pub trace: bool,
    /// Directory receiving `runs.csv` and `summary.csv`.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::config("replications", "must be at least 1"));
        }
        if self.replications > u32::MAX as u64 {
            return Err(Error::config("replications", "must be below 2^32"));
        }
        if self.horizons.is_empty() {
            return Err(Error::config("horizons", "must list at least one horizon"));
        }
        for (i, pair) in self.horizons.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(Error::config(
                    format!("horizons[{}]", i + 1),
                    format!("{} does not exceed {}; horizons must be strictly increasing", pair[1], pair[0]),
                ));
            }
        }
        for (i, &n) in self.horizons.iter().enumerate() {
            if n == 0 || n > u32::MAX as u64 {
                return Err(Error::config(format!("horizons[{i}]"), format!("{n} outside [1, 2^32)")));
            }
            if self.policy.is_hybrid() && n < 3 {
                return Err(Error::config(
                    format!("horizons[{i}]"),
                    format!("{n} is below 3, the minimum for hybrid policies"),
                ));
            }
        }
        Ok(())
    }
}

/// Statistics at one horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonSummary {
    pub n: u64,
    pub replications: u64,
    pub mean_regret: f64,
    /// Sample variance (`r − 1` denominator; 0 for a single replication).
    pub var_regret: f64,
    pub stderr: f64,
    /// Fraction of replications with `R̂_n ≥ n/4`.
    pub tail_prob: f64,
    pub mean_best_arm_loss: f64,
    /// First-order bound at the mean best-arm loss, for hybrid policies.
    pub bound_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub policy: String,
    pub environment: String,
    pub arms: usize,
    pub horizons: Vec<HorizonSummary>,
    /// Least-squares slope of `log Var[R̂_n]` against `log n`.
    pub variance_slope: Option<f64>,
    /// Least-squares slope of `log mean R̂_n` against `log n`.
    pub regret_slope: Option<f64>,
}

/// Everything produced by [`run_experiment`].
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub summary: ExperimentSummary,
    /// In `(n, r)` order.
    pub runs: Vec<RunRecord>,
}

/// Plays one run of `horizon` rounds. The environment's seed is the run seed.
pub fn run_single(
    policy: &PreparedPolicy,
    env: &Environment,
    horizon: u64,
    trace: bool,
) -> Result<RunRecord> {
    let k = env.arms();
    let seed = env.seed();
    let mut learner = policy.build(k, horizon, seed)?;
    let mut sampler = rng::stream(rng::key_from_seed(seed), LEARNER_STREAM);
    let mut losses = vec![0.0; k];
    let mut totals = vec![0.0; k];
    let mut incurred = 0.0;
    let mut records = trace.then(|| Vec::with_capacity(horizon as usize));
    for t in 1..=horizon {
        env.fill_loss(t, &mut losses)?;
        let u = rng::uniform(&mut sampler);
        let dist = learner.next_distribution()?;
        let action = dist.sample(u);
        if let Some(records) = records.as_mut() {
            records.push(RoundRecord {
                t,
                action,
                loss_incurred: losses[action],
                distribution: dist.as_slice().to_vec(),
                learning_rate: learner.learning_rate(),
            });
        }
        learner.observe(action, losses[action])?;
        incurred += losses[action];
        for (s, l) in totals.iter_mut().zip(&losses) {
            *s += l;
        }
    }
    let (best_arm, best) = argmin(&totals);
    let (checks, violations) = learner.gap_bound_counts();
    let last_wrong_leader = learner
        .slow_explorer()
        .map(|s| {
            s.last_led()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != best_arm)
                .map(|(_, &t)| t)
                .max()
                .unwrap_or(0)
        })
        .unwrap_or(0);
    Ok(RunRecord {
        seed,
        horizon,
        arms: k,
        trace: records,
        random_regret: incurred - best,
        best_arm_loss: best,
        diagnostics: RunDiagnostics {
            gap_bound_checks: checks,
            gap_bound_violations: violations,
            exploration_rounds: learner.exploration_rounds(),
            last_wrong_leader,
        },
    })
}

/// Runs every `(n, r)` pair, summarises, and writes CSVs when
/// `config.output` is set.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    config.validate()?;
    let policy = config.policy.prepare()?;
    let mut jobs = Vec::new();
    let mut envs = Vec::new();
    for &n in &config.horizons {
        let env = Environment::new(&config.environment, Some(n), config.master_seed)?;
        let effective = match env.horizon() {
            Some(h) if h < n && env.horizon_adjustment().is_none() => {
                return Err(Error::config(
                    "horizons",
                    format!("{n} exceeds the {h} rounds available from the environment"),
                ))
            }
            Some(h) => h.min(n),
            None => n,
        };
        if effective != n {
            log::warn!("horizon {n} rounded down to {effective}");
        }
        for r in 0..config.replications {
            jobs.push((envs.len(), effective, derive_run_seed(config.master_seed, n, r)));
        }
        envs.push(env);
    }
    let runs: Vec<RunRecord> = jobs
        .par_iter()
        .map(|&(e, n, seed)| run_single(&policy, &envs[e].reseeded(seed), n, config.trace))
        .collect::<Result<_>>()?;
    let summary = summarise(config, envs[0].arms(), &runs);
    if let Some(dir) = &config.output {
        write_outputs(dir, config, &summary, &runs)?;
    }
    Ok(ExperimentOutcome { summary, runs })
}

fn summarise(config: &ExperimentConfig, arms: usize, runs: &[RunRecord]) -> ExperimentSummary {
    let reps = config.replications as usize;
    let horizons: Vec<HorizonSummary> = runs
        .chunks(reps)
        .map(|chunk| {
            let n = chunk[0].horizon;
            let regrets: Vec<f64> = chunk.iter().map(|r| r.random_regret).collect();
            let best: Vec<f64> = chunk.iter().map(|r| r.best_arm_loss).collect();
            let mean_best = sample_mean(&best);
            let var = sample_variance(&regrets);
            let bound_value = match &config.policy {
                PolicyConfig::HybridInfAnytime { q } if *q == 1.0 => corollary2_bound(arms, n, mean_best).ok(),
                PolicyConfig::HybridInfKnownHorizon => corollary3_bound(arms, n, mean_best).ok(),
                _ => None,
            };
            HorizonSummary {
                n,
                replications: chunk.len() as u64,
                mean_regret: sample_mean(&regrets),
                var_regret: var,
                stderr: (var / chunk.len() as f64).sqrt(),
                tail_prob: tail_probability(&regrets, n as f64 / 4.0),
                mean_best_arm_loss: mean_best,
                bound_value,
            }
        })
        .collect();
    let slope = |f: &dyn Fn(&HorizonSummary) -> f64| {
        let pairs: Vec<(f64, f64)> = horizons.iter().map(|h| (h.n as f64, f(h))).collect();
        fit_loglog_slope(&pairs).ok()
    };
    ExperimentSummary {
        policy: config.policy.name().to_string(),
        environment: config.environment.name().to_string(),
        arms,
        variance_slope: slope(&|h| h.var_regret),
        regret_slope: slope(&|h| h.mean_regret),
        horizons,
    }
}

fn write_outputs(
    dir: &Path,
    config: &ExperimentConfig,
    summary: &ExperimentSummary,
    runs: &[RunRecord],
) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_runs_csv(&dir.join("runs.csv"), summary, runs)?;
    write_summary_csv(&dir.join("summary.csv"), summary)?;
    if config.trace {
        let reps = config.replications as usize;
        for (i, run) in runs.iter().enumerate() {
            if let Some(trace) = &run.trace {
                let path = dir.join(format!("trace_n{}_r{}.csv", run.horizon, i % reps));
                write_trace_csv(&path, run.arms, trace)?;
            }
        }
    }
    Ok(())
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

/// `seed,n,k,policy,env,random_regret,best_arm_loss`.
pub fn write_runs_csv(path: &Path, summary: &ExperimentSummary, runs: &[RunRecord]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["seed", "n", "k", "policy", "env", "random_regret", "best_arm_loss"])?;
    for run in runs {
        w.write_record([
            run.seed.to_string(),
            run.horizon.to_string(),
            run.arms.to_string(),
            summary.policy.clone(),
            summary.environment.clone(),
            run.random_regret.to_string(),
            run.best_arm_loss.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// `n,mean_regret,var_regret,stderr,tail_prob,bound_value`; the bound
/// column is empty when no bound applies.
pub fn write_summary_csv(path: &Path, summary: &ExperimentSummary) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["n", "mean_regret", "var_regret", "stderr", "tail_prob", "bound_value"])?;
    for h in &summary.horizons {
        w.write_record(summary_fields(h))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub(crate) fn summary_fields(h: &HorizonSummary) -> [String; 6] {
    [
        h.n.to_string(),
        h.mean_regret.to_string(),
        h.var_regret.to_string(),
        h.stderr.to_string(),
        h.tail_prob.to_string(),
        h.bound_value.map(|b| b.to_string()).unwrap_or_default(),
    ]
}

fn write_trace_csv(path: &Path, arms: usize, trace: &[RoundRecord]) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["t".to_string(), "action".into(), "loss".into(), "learning_rate".into()];
    header.extend((0..arms).map(|i| format!("p{i}")));
    w.write_record(&header)?;
    for rec in trace {
        let mut row = vec![
            rec.t.to_string(),
            rec.action.to_string(),
            rec.loss_incurred.to_string(),
            rec.learning_rate.to_string(),
        ];
        row.extend(rec.distribution.iter().map(|p| p.to_string()));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

//! Oblivious loss sequences.
//!
//! Every environment is a pure function of `(parameters, seed, t)`: the
//! losses never depend on the learner's actions, and any round can be
//! regenerated independently of the others.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::types::LossVector;

fn default_noise() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnvironmentConfig {
    /// Independent Bernoulli losses with the given per-arm means.
    StochasticBernoulli { means: Vec<f64> },
    /// Two arms: `(α, 0)` for the first half of the horizon, `(0, 1)` after.
    VarianceAdversary { alpha: f64 },
    /// Arm 0 is best and arm `i` trails it by `gaps[i-1]` per round on average.
    LinearlySeparable {
        gaps: Vec<f64>,
        #[serde(default = "default_noise")]
        noise: bool,
    },
    /// Losses read from a CSV file with a header and one row per round.
    FileReplay { path: PathBuf },
}

impl EnvironmentConfig {
    pub fn name(&self) -> &'static str {
        match self {
            EnvironmentConfig::StochasticBernoulli { .. } => "stochastic_bernoulli",
            EnvironmentConfig::VarianceAdversary { .. } => "variance_adversary",
            EnvironmentConfig::LinearlySeparable { .. } => "linearly_separable",
            EnvironmentConfig::FileReplay { .. } => "file_replay",
        }
    }

    pub fn arms(&self) -> Option<usize> {
        match self {
            EnvironmentConfig::StochasticBernoulli { means } => Some(means.len()),
            EnvironmentConfig::VarianceAdversary { .. } => Some(2),
            EnvironmentConfig::LinearlySeparable { gaps, .. } => Some(gaps.len() + 1),
            EnvironmentConfig::FileReplay { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Bernoulli(Vec<f64>),
    Adversary { alpha: f64, horizon: u64 },
    Separable { gaps: Vec<f64>, noise: bool },
    Replay(Arc<Vec<Vec<f64>>>),
}

#[derive(Debug, Clone)]
pub struct Environment {
    kind: Kind,
    arms: usize,
    seed: u64,
    key: [u8; 32],
    requested_horizon: Option<u64>,
}

impl Environment {
    /// Builds an environment. `horizon` is required by the variance
    /// adversary, whose horizon is rounded down to a multiple of 4.
    pub fn new(config: &EnvironmentConfig, horizon: Option<u64>, seed: u64) -> Result<Self> {
        let (kind, arms) = match config {
            EnvironmentConfig::StochasticBernoulli { means } => {
                if means.len() < 2 {
                    return Err(Error::config("environment.means", "needs at least two arms"));
                }
                if let Some(bad) = means.iter().find(|m| !(0.0..=1.0).contains(*m)) {
                    return Err(Error::config(
                        "environment.means",
                        format!("mean {bad} outside [0, 1]"),
                    ));
                }
                (Kind::Bernoulli(means.clone()), means.len())
            }
            EnvironmentConfig::VarianceAdversary { alpha } => {
                if !(0.0..=0.5).contains(alpha) {
                    return Err(Error::config(
                        "environment.alpha",
                        format!("{alpha} outside [0, 1/2]"),
                    ));
                }
                let n = horizon.ok_or_else(|| {
                    Error::config("environment", "variance_adversary needs a horizon")
                })?;
                let adjusted = n - n % 4;
                if adjusted == 0 {
                    return Err(Error::config("horizons", format!("{n} is below 4")));
                }
                (
                    Kind::Adversary {
                        alpha: *alpha,
                        horizon: adjusted,
                    },
                    2,
                )
            }
            EnvironmentConfig::LinearlySeparable { gaps, noise } => {
                if gaps.is_empty() {
                    return Err(Error::config("environment.gaps", "needs at least one gap"));
                }
                if let Some(bad) = gaps.iter().find(|g| !(**g > 0.0 && **g <= 1.0)) {
                    return Err(Error::config(
                        "environment.gaps",
                        format!("gap {bad} outside (0, 1]"),
                    ));
                }
                (
                    Kind::Separable {
                        gaps: gaps.clone(),
                        noise: *noise,
                    },
                    gaps.len() + 1,
                )
            }
            EnvironmentConfig::FileReplay { path } => {
                let rows = load_replay(path)?;
                let arms = rows[0].len();
                (Kind::Replay(Arc::new(rows)), arms)
            }
        };
        Ok(Environment {
            kind,
            arms,
            seed,
            key: rng::key_from_seed(seed),
            requested_horizon: horizon,
        })
    }

    /// Same environment with a different seed (shares any loaded file).
    pub fn reseeded(&self, seed: u64) -> Self {
        Environment {
            seed,
            key: rng::key_from_seed(seed),
            ..self.clone()
        }
    }

    pub fn arms(&self) -> usize {
        self.arms
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            Kind::Bernoulli(_) => "stochastic_bernoulli",
            Kind::Adversary { .. } => "variance_adversary",
            Kind::Separable { .. } => "linearly_separable",
            Kind::Replay(_) => "file_replay",
        }
    }

    /// Last valid round, for horizon-bound kinds.
    pub fn horizon(&self) -> Option<u64> {
        match &self.kind {
            Kind::Adversary { horizon, .. } => Some(*horizon),
            Kind::Replay(rows) => Some(rows.len() as u64),
            _ => None,
        }
    }

    /// Set when the requested horizon had to be rounded down.
    pub fn horizon_adjustment(&self) -> Option<(u64, u64)> {
        match (&self.kind, self.requested_horizon) {
            (Kind::Adversary { horizon, .. }, Some(req)) if *horizon != req => Some((req, *horizon)),
            _ => None,
        }
    }

    pub fn loss_at(&self, t: u64) -> Result<LossVector> {
        let mut out = vec![0.0; self.arms];
        self.fill_loss(t, &mut out)?;
        LossVector::new(out)
    }

    /// Writes round `t`'s losses into `out` (length `arms`).
    pub fn fill_loss(&self, t: u64, out: &mut [f64]) -> Result<()> {
        if let Some(h) = self.horizon() {
            if t == 0 || t > h {
                return Err(Error::RoundOutOfRange { round: t, horizon: h });
            }
        } else if t == 0 {
            return Err(Error::RoundOutOfRange { round: 0, horizon: u64::MAX });
        }
        match &self.kind {
            Kind::Bernoulli(means) => {
                let mut r = rng::stream(self.key, t);
                for (o, &m) in out.iter_mut().zip(means) {
                    *o = if rng::uniform(&mut r) < m { 1.0 } else { 0.0 };
                }
            }
            Kind::Adversary { alpha, horizon } => {
                if t <= horizon / 2 {
                    out[0] = *alpha;
                    out[1] = 0.0;
                } else {
                    out[0] = 0.0;
                    out[1] = 1.0;
                }
            }
            Kind::Separable { gaps, noise } => {
                if *noise {
                    let mut r = rng::stream(self.key, t);
                    let base = 0.5 * rng::uniform(&mut r);
                    out[0] = base;
                    for (o, &g) in out[1..].iter_mut().zip(gaps) {
                        let jitter = 0.5 * rng::uniform(&mut r) - 0.25;
                        *o = (base + g + jitter).clamp(0.0, 1.0);
                    }
                } else {
                    out[0] = 0.0;
                    out[1..].copy_from_slice(gaps);
                }
            }
            Kind::Replay(rows) => out.copy_from_slice(&rows[t as usize - 1]),
        }
        Ok(())
    }

    /// Best arm over rounds `1..=n` (lowest index on ties) and its
    /// cumulative loss, by direct summation.
    pub fn best_arm_cumulative(&self, n: u64) -> Result<(usize, f64)> {
        if n == 0 {
            return Err(Error::invalid("horizon", "n must be at least 1"));
        }
        let mut totals = vec![0.0; self.arms];
        let mut buf = vec![0.0; self.arms];
        for t in 1..=n {
            self.fill_loss(t, &mut buf)?;
            for (s, l) in totals.iter_mut().zip(&buf) {
                *s += l;
            }
        }
        Ok(argmin(&totals))
    }
}

pub(crate) fn argmin(values: &[f64]) -> (usize, f64) {
    let mut best = (0, values[0]);
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < best.1 {
            best = (i, v);
        }
    }
    best
}

fn load_replay(path: &Path) -> Result<Vec<Vec<f64>>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let arms = reader.headers()?.len();
    if arms < 2 {
        return Err(Error::config(
            "environment.path",
            format!("{}: needs at least two loss columns", path.display()),
        ));
    }
    let mut rows = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record?;
        let mut row = Vec::with_capacity(arms);
        for (c, field) in record.iter().enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| {
                Error::config(
                    "environment.path",
                    format!("{}: row {}, column {}: `{field}` is not a number", path.display(), r + 1, c + 1),
                )
            })?;
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::config(
                    "environment.path",
                    format!("{}: row {}, column {}: loss {v} outside [0, 1]", path.display(), r + 1, c + 1),
                ));
            }
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::config(
            "environment.path",
            format!("{}: no rounds", path.display()),
        ));
    }
    Ok(rows)
}

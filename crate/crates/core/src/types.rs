//! Losses, sampling distributions, loss estimates and interaction traces.
//!
//! Arms are indexed from zero throughout the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SIMPLEX_TOL: f64 = 1e-10;
const FLOOR_TOL: f64 = 1e-12;

/// One round of losses, every entry in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossVector(Vec<f64>);

impl LossVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::invalid("loss vector", "needs at least two arms"));
        }
        if let Some(&bad) = entries.iter().find(|l| !(0.0..=1.0).contains(*l)) {
            return Err(Error::Domain {
                what: "loss range [0, 1]",
                value: bad,
            });
        }
        Ok(LossVector(entries))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn arms(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// A point of the probability simplex, optionally restricted to a box
/// `[floor, 1]^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    entries: Vec<f64>,
    floor: f64,
}

impl ProbabilityVector {
    pub fn new(entries: Vec<f64>, floor: f64) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::invalid("probability vector", "needs at least two arms"));
        }
        if !(floor >= 0.0) {
            return Err(Error::Domain {
                what: "probability floor",
                value: floor,
            });
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::invalid(
                "probability vector",
                format!("entries sum to {sum}, not 1"),
            ));
        }
        if let Some(&bad) = entries
            .iter()
            .find(|&&p| !(p >= floor - FLOOR_TOL && p <= 1.0))
        {
            return Err(Error::Domain {
                what: "probability box [floor, 1]",
                value: bad,
            });
        }
        Ok(ProbabilityVector { entries, floor })
    }

    pub fn uniform(arms: usize) -> Self {
        ProbabilityVector {
            entries: vec![1.0 / arms as f64; arms],
            floor: 0.0,
        }
    }

    /// Point mass on `arm`.
    pub fn point_mass(arms: usize, arm: usize) -> Self {
        let mut entries = vec![0.0; arms];
        entries[arm] = 1.0;
        ProbabilityVector {
            entries,
            floor: 0.0,
        }
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn from_parts(entries: Vec<f64>, floor: f64) -> Self {
        debug_assert!((entries.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOL);
        ProbabilityVector { entries, floor }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn arms(&self) -> usize {
        self.entries.len()
    }

    pub fn min_entry(&self) -> f64 {
        self.entries.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Inverse-CDF sampling from a single uniform `u ∈ [0, 1)`.
    ///
    /// Arms with zero probability are never returned.
    pub fn sample(&self, u: f64) -> usize {
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (i, &p) in self.entries.iter().enumerate() {
            if p > 0.0 {
                acc += p;
                last_positive = i;
                if u < acc {
                    return i;
                }
            }
        }
        last_positive
    }
}

/// Nonnegative per-arm loss estimates (one round's estimate or a running sum).
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateVector(Vec<f64>);

impl EstimateVector {
    pub fn zeros(arms: usize) -> Self {
        EstimateVector(vec![0.0; arms])
    }

    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|e| !(**e >= 0.0)) {
            return Err(Error::Domain {
                what: "loss estimate",
                value: bad,
            });
        }
        Ok(EstimateVector(entries))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Adds the importance-weighted estimate `loss / prob` to `arm`.
    pub fn add_importance_weighted(&mut self, arm: usize, loss: f64, prob: f64) -> Result<()> {
        if !(prob > 0.0) {
            return Err(Error::ZeroProbability { arm });
        }
        self.0[arm] += loss / prob;
        Ok(())
    }
}

/// `ℓ̂_i = 1{action = i} ℓ_i / P_i`.
pub fn importance_weighted_estimate(
    loss: &LossVector,
    action: usize,
    dist: &ProbabilityVector,
) -> Result<EstimateVector> {
    if loss.arms() != dist.arms() {
        return Err(Error::LengthMismatch {
            left: loss.arms(),
            right: dist.arms(),
        });
    }
    if action >= loss.arms() {
        return Err(Error::invalid("action", format!("arm {action} out of range")));
    }
    let mut est = EstimateVector::zeros(loss.arms());
    est.add_importance_weighted(action, loss.as_slice()[action], dist.as_slice()[action])?;
    Ok(est)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub t: u64,
    pub action: usize,
    pub loss_incurred: f64,
    pub distribution: Vec<f64>,
    pub learning_rate: f64,
}

/// Per-run counters collected alongside the regret.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunDiagnostics {
    /// Rounds on which the pre-mixing INF iterate was checked against its
    /// inverse-square gap bound, and how many of them violated it.
    pub gap_bound_checks: u64,
    pub gap_bound_violations: u64,
    /// Exploration rounds played (slow explorer).
    pub exploration_rounds: u64,
    /// Last round whose greedy leader differed from the best arm in hindsight.
    pub last_wrong_leader: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub horizon: u64,
    pub arms: usize,
    pub trace: Option<Vec<RoundRecord>>,
    pub random_regret: f64,
    /// Cumulative loss of the best arm in hindsight.
    pub best_arm_loss: f64,
    pub diagnostics: RunDiagnostics,
}

/// `Σ_t ℓ_{t,A_t} − min_i L_{n,i}`.
pub fn random_regret(trace: &[RoundRecord], losses: &[LossVector]) -> Result<f64> {
    if trace.len() != losses.len() {
        return Err(Error::LengthMismatch {
            left: trace.len(),
            right: losses.len(),
        });
    }
    if trace.is_empty() {
        return Err(Error::invalid("trace", "needs at least one round"));
    }
    let arms = losses[0].arms();
    let mut cumulative = vec![0.0; arms];
    let mut incurred = 0.0;
    for (rec, loss) in trace.iter().zip(losses) {
        if loss.arms() != arms {
            return Err(Error::LengthMismatch {
                left: loss.arms(),
                right: arms,
            });
        }
        let l = loss.as_slice();
        incurred += *l.get(rec.action).ok_or_else(|| {
            Error::invalid("action", format!("arm {} out of range", rec.action))
        })?;
        for (c, x) in cumulative.iter_mut().zip(l) {
            *c += x;
        }
    }
    let best = cumulative.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(incurred - best)
}

//! Learning rates, exploration rates, chopped-simplex floors and the
//! exploration-set sampler of the slow explorer.

use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::rng;

/// Data-dependent learning rate `η_t = η₀ / √(1 + Σ_{s<t} ℓ̂²_{s,A_s} / f_s''(P_{s,A_s}))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveRateState {
    eta0: f64,
    accumulator: f64,
}

impl AdaptiveRateState {
    pub fn new(eta0: f64) -> Result<Self> {
        if !(eta0 > 0.0 && eta0.is_finite()) {
            return Err(Error::Domain {
                what: "initial learning rate",
                value: eta0,
            });
        }
        Ok(AdaptiveRateState {
            eta0,
            accumulator: 0.0,
        })
    }

    pub fn eta0(&self) -> f64 {
        self.eta0
    }

    pub fn accumulator(&self) -> f64 {
        self.accumulator
    }

    /// Rate for the upcoming round.
    pub fn rate(&self) -> f64 {
        self.eta0 / (1.0 + self.accumulator).sqrt()
    }

    /// Folds in the played arm's `ℓ² / (p² f''(p))`; returns the increment.
    pub fn update(&mut self, loss: f64, prob: f64, hessian: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&loss) {
            return Err(Error::Domain {
                what: "loss range [0, 1]",
                value: loss,
            });
        }
        if !(prob > 0.0 && prob <= 1.0) {
            return Err(Error::Domain {
                what: "played-arm probability",
                value: prob,
            });
        }
        if !(hessian > 0.0) {
            return Err(Error::Domain {
                what: "potential hessian",
                value: hessian,
            });
        }
        let increment = loss * loss / (prob * prob * hessian);
        self.accumulator += increment;
        Ok(increment)
    }
}

/// `η₀ = k^{1/4} √(13/(3√2) + 3/(√2 q))` for the anytime hybrid potential.
pub fn eta_zero_hybrid(arms: usize, q: f64) -> f64 {
    let s2 = std::f64::consts::SQRT_2;
    (arms as f64).powf(0.25) * (13.0 / (3.0 * s2) + 3.0 / (s2 * q)).sqrt()
}

/// `η₀ = k^{1/4} √3 / 2^{1/4}` for the known-horizon hybrid potential.
pub fn eta_zero_known_horizon(arms: usize) -> f64 {
    (arms as f64).powf(0.25) * 3f64.sqrt() / 2f64.powf(0.25)
}

/// Coordinate floor of the chopped simplex at round `t`.
///
/// `1/t` (or `1/n` with a known horizon), capped at `1/k` so that the
/// feasible set is never empty.
pub fn chopped_floor(t: u64, arms: usize, known_horizon: Option<u64>) -> f64 {
    let denom = known_horizon.unwrap_or(t).max(1) as f64;
    (1.0 / denom).min(1.0 / arms as f64)
}

/// Mixing weight `γ_t = log(t) log log(t) / t`; `1/2` for `t < 3`, and
/// clamped to `(0, 1]`.
pub fn inf_mixing_gamma(t: u64) -> f64 {
    if t < 3 {
        return 0.5;
    }
    let lt = (t as f64).ln();
    (lt * lt.ln() / t as f64).clamp(f64::MIN_POSITIVE, 1.0)
}

/// Forced exploration attached to a policy.
#[derive(Debug, Clone, PartialEq)]
pub enum ExplorationSchedule {
    None,
    InfMixing,
    SlowSet(GrowthFunction),
}

impl ExplorationSchedule {
    /// Uniform mixing weight at round `t`.
    pub fn gamma(&self, t: u64) -> f64 {
        match self {
            ExplorationSchedule::InfMixing => inf_mixing_gamma(t),
            _ => 0.0,
        }
    }
}

/// Nondecreasing integer target `f(n)` for the number of exploration rounds.
#[derive(Debug, Clone, PartialEq)]
pub enum GrowthFunction {
    /// `max(1, ⌊log₂ log₂ n⌋ + 1)`.
    LogLog,
    /// `f(1), f(2), …` in order.
    Tabulated(Vec<u64>),
}

fn floor_log2(n: u64) -> u32 {
    63 - n.leading_zeros()
}

impl GrowthFunction {
    pub fn tabulated(values: Vec<u64>) -> Result<Self> {
        if values.first() != Some(&1) {
            return Err(Error::invalid("growth table", "f(1) must equal 1"));
        }
        for (i, w) in values.windows(2).enumerate() {
            if w[1] < w[0] {
                return Err(Error::invalid(
                    "growth table",
                    format!("f decreases between n = {} and n = {}", i + 1, i + 2),
                ));
            }
        }
        for (i, &v) in values.iter().enumerate() {
            if v > i as u64 + 1 {
                return Err(Error::invalid(
                    "growth table",
                    format!("f({}) = {v} exceeds n", i + 1),
                ));
            }
        }
        if values.last() == values.first() {
            return Err(Error::invalid("growth table", "f never grows on the tabulated range"));
        }
        Ok(GrowthFunction::Tabulated(values))
    }

    /// Loads a two-column CSV `n,f` with a header row and `n = 1, 2, …`.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path)?;
        let mut values = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let record = record?;
            if record.len() != 2 {
                return Err(Error::invalid(
                    "growth table",
                    format!("row {} has {} columns, expected 2", row + 1, record.len()),
                ));
            }
            let parse = |s: &str| {
                s.trim().parse::<u64>().map_err(|e| {
                    Error::invalid("growth table", format!("row {}: `{s}`: {e}", row + 1))
                })
            };
            let n = parse(&record[0])?;
            if n != row as u64 + 1 {
                return Err(Error::invalid(
                    "growth table",
                    format!("row {} has n = {n}, expected {}", row + 1, row + 1),
                ));
            }
            values.push(parse(&record[1])?);
        }
        Self::tabulated(values)
    }

    /// Largest `n` at which `f(n)` is known.
    pub fn range(&self) -> u64 {
        match self {
            GrowthFunction::LogLog => u64::MAX,
            GrowthFunction::Tabulated(v) => v.len() as u64,
        }
    }

    pub fn value(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::invalid("growth function argument", "n must be at least 1"));
        }
        match self {
            GrowthFunction::LogLog => {
                let lg = floor_log2(n);
                Ok(if lg == 0 { 1 } else { floor_log2(lg as u64) as u64 + 1 })
            }
            GrowthFunction::Tabulated(v) => v.get(n as usize - 1).copied().ok_or_else(|| {
                Error::invalid("growth function argument", format!("n = {n} beyond table"))
            }),
        }
    }

    /// `τ(m) = min{t : f(t) ≥ m}`, or `None` past the known range.
    pub fn first_reach(&self, m: u64) -> Option<u64> {
        if m <= 1 {
            return Some(1);
        }
        match self {
            GrowthFunction::LogLog => {
                let exponent = 1u64.checked_shl((m - 1) as u32).filter(|&e| e < 64)?;
                Some(1u64 << exponent)
            }
            GrowthFunction::Tabulated(v) => {
                v.iter().position(|&x| x >= m).map(|i| i as u64 + 1)
            }
        }
    }
}

/// Result of the numeric check on `Σ_m Σ_{j>m} τ(m)/τ(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummabilityReport {
    /// `S(M) = Σ_{m<j≤M} τ(m)/τ(j)` for `M = 2, 3, …`.
    pub partial_sums: Vec<f64>,
    /// Relative increase over the last ten values of `M` is below 1e-6.
    pub stabilized: bool,
}

pub fn summability_report(f: &GrowthFunction) -> SummabilityReport {
    let mut taus = Vec::new();
    let mut m = 1;
    while let Some(t) = f.first_reach(m) {
        taus.push(t as f64);
        m += 1;
    }
    let mut partial_sums = Vec::new();
    let mut sum = 0.0;
    for j in 1..taus.len() {
        sum += taus[..j].iter().map(|tm| tm / taus[j]).sum::<f64>();
        partial_sums.push(sum);
    }
    let stabilized = match partial_sums.len() {
        0 | 1 => false,
        len => {
            let back = partial_sums[len.saturating_sub(11)];
            let last = partial_sums[len - 1];
            (last - back) <= 1e-6 * last
        }
    };
    SummabilityReport {
        partial_sums,
        stabilized,
    }
}

/// Realised exploration rounds `E ∩ [n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplorationSet {
    /// `(round, m)` pairs sorted by round: round `E_m` is the `m`-th draw.
    entries: Vec<(u64, u64)>,
}

impl ExplorationSet {
    pub fn rounds(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `|E ∩ [t]|`.
    pub fn count_up_to(&self, t: u64) -> usize {
        self.entries.partition_point(|e| e.0 <= t)
    }
}

/// Draws `E_m` uniformly from `{1, …, τ(m)} \ {E_1, …, E_{m−1}}` for every
/// `m` with known `τ(m)`, and keeps the draws that land in `[1, n]`.
pub fn slow_set_schedule(f: &GrowthFunction, seed: u64, horizon: u64) -> Result<ExplorationSet> {
    if f.range() < horizon {
        return Err(Error::invalid(
            "growth function",
            format!("tabulated to n = {} but the horizon is {horizon}", f.range()),
        ));
    }
    let mut rng = rng::stream(rng::key_from_seed(seed), rng::EXPLORATION_STREAM);
    let mut chosen: HashSet<u64> = HashSet::new();
    let mut entries = Vec::new();
    let mut m = 1u64;
    while let Some(tau) = f.first_reach(m) {
        if tau < m {
            return Err(Error::invalid(
                "growth function",
                format!("tau({m}) = {tau} leaves no free exploration slot"),
            ));
        }
        let round = loop {
            let candidate = 1 + rng::below(&mut rng, tau);
            if !chosen.contains(&candidate) {
                break candidate;
            }
        };
        chosen.insert(round);
        if round <= horizon {
            entries.push((round, m));
        }
        m += 1;
    }
    entries.sort_unstable();
    Ok(ExplorationSet { entries })
}

/// `Σ_t x_t / √(1 + Σ_{s<t} x_s) ≤ 4 √(1 + ½ Σ_t x_t) + B` for `x_t ∈ [0, B]`.
pub fn check_sqrt_sum_inequality(x: &[f64], bound: f64) -> Result<bool> {
    if !(bound >= 0.0) {
        return Err(Error::Domain {
            what: "sequence bound B",
            value: bound,
        });
    }
    if let Some(&bad) = x.iter().find(|v| !(**v >= 0.0 && **v <= bound)) {
        return Err(Error::Domain {
            what: "sequence element range [0, B]",
            value: bad,
        });
    }
    let mut prefix = 0.0f64;
    let mut lhs = 0.0f64;
    for &v in x {
        lhs += v / (1.0 + prefix).sqrt();
        prefix += v;
    }
    Ok(lhs <= 4.0 * (1.0 + 0.5 * prefix).sqrt() + bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn adaptive_rate_examples() {
        let mut s = AdaptiveRateState::new(2.0).unwrap();
        assert_eq!(s.rate(), 2.0);
        let inc = s.update(1.0, 0.5, 4.0).unwrap();
        assert_eq!(inc, 1.0);
        assert_eq!(s.accumulator(), 1.0);
        assert!((s.rate() - 2.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!(s.update(1.0, 0.0, 4.0).is_err());
        assert!(s.update(1.0, 0.5, 0.0).is_err());
        assert!(s.update(1.5, 0.5, 1.0).is_err());
        assert!(AdaptiveRateState::new(0.0).is_err());
    }

    #[test]
    fn eta_zero_values() {
        let c2 = (22.0 / (3.0 * 2f64.sqrt())).sqrt();
        for k in [1usize, 2, 5, 16] {
            assert!((eta_zero_hybrid(k, 1.0) - (k as f64).powf(0.25) * c2).abs() < 1e-13);
        }
        assert!((eta_zero_hybrid(1, 1.0) - c2).abs() < 1e-15);
        // 2·√(22/(3√2)) to 40 digits: 4.554316514561256759...
        assert!((eta_zero_hybrid(16, 1.0) - 4.554_316_514_561_257).abs() < 1e-13);
        assert!((eta_zero_known_horizon(1) - 3f64.sqrt() / 2f64.powf(0.25)).abs() < 1e-15);
    }

    #[test]
    fn chopped_floor_examples() {
        assert_eq!(chopped_floor(1, 2, None), 0.5);
        assert_eq!(chopped_floor(100, 5, None), 0.01);
        for t in [1, 50, 999, 5000] {
            assert_eq!(chopped_floor(t, 3, Some(1000)), 0.001);
        }
        let mut prev = f64::INFINITY;
        for t in 1..1000 {
            let f = chopped_floor(t, 4, None);
            assert!(f <= prev && f * 4.0 <= 1.0);
            prev = f;
        }
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(inf_mixing_gamma(1), 0.5);
        assert_eq!(inf_mixing_gamma(2), 0.5);
        assert!((inf_mixing_gamma(3) - 0.034_440_699_714_081_853).abs() < 1e-15);
        assert!((inf_mixing_gamma(16) - 0.176_714_657_574_107_77).abs() < 1e-15);
        for t in 3..100_000 {
            let g = inf_mixing_gamma(t);
            assert!(g > 0.0 && g < 1.0);
        }
    }

    #[test]
    fn gamma_sum_is_polylogarithmic() {
        let mut sum = 0.0;
        let mut t = 0u64;
        for n in [1_000u64, 10_000, 100_000, 1_000_000] {
            while t < n {
                t += 1;
                sum += inf_mixing_gamma(t);
            }
            let l = (n as f64).ln();
            let ratio = sum / (l * l * l.ln());
            assert!(ratio < 1.0, "n={n} ratio={ratio}");
        }
    }

    #[test]
    fn loglog_growth() {
        let f = GrowthFunction::LogLog;
        let expect = [(1u64, 1u64), (2, 1), (3, 1), (4, 2), (15, 2), (16, 3), (255, 3), (256, 4), (65_535, 4), (65_536, 5), (1_000_000, 5)];
        for (n, v) in expect {
            assert_eq!(f.value(n).unwrap(), v, "n={n}");
        }
        assert_eq!(f.first_reach(1), Some(1));
        assert_eq!(f.first_reach(2), Some(4));
        assert_eq!(f.first_reach(5), Some(65_536));
        assert_eq!(f.first_reach(6), Some(1 << 32));
        assert_eq!(f.first_reach(7), None);
        for m in 1..=6 {
            let tau = f.first_reach(m).unwrap();
            assert!(f.value(tau).unwrap() >= m);
            if tau > 1 {
                assert!(f.value(tau - 1).unwrap() < m);
            }
        }
    }

    #[test]
    fn growth_table_validation() {
        assert!(GrowthFunction::tabulated(vec![2, 2, 3]).is_err());
        assert!(GrowthFunction::tabulated(vec![1, 2, 1]).is_err());
        assert!(GrowthFunction::tabulated(vec![1, 1, 1]).is_err());
        assert!(GrowthFunction::tabulated(vec![1, 5, 5]).is_err());
        let f = GrowthFunction::tabulated(vec![1, 1, 2, 2, 3]).unwrap();
        assert_eq!(f.first_reach(3), Some(5));
        assert_eq!(f.first_reach(4), None);
        assert!(f.value(6).is_err());
    }

    #[test]
    fn growth_table_csv() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "n,f\n1,1\n2,1\n3,2\n4,2").unwrap();
        let f = GrowthFunction::from_csv(file.path()).unwrap();
        assert_eq!(f, GrowthFunction::Tabulated(vec![1, 1, 2, 2]));

        let mut bad = tempfile::NamedTempFile::new().unwrap();
        writeln!(bad, "n,f\n1,1\n3,2").unwrap();
        assert!(GrowthFunction::from_csv(bad.path()).is_err());
        let mut bad = tempfile::NamedTempFile::new().unwrap();
        writeln!(bad, "n,f\n1,1\n2,x").unwrap();
        assert!(GrowthFunction::from_csv(bad.path()).is_err());
    }

    #[test]
    fn slow_set_basics() {
        let f = GrowthFunction::LogLog;
        for seed in 0..50 {
            let e = slow_set_schedule(&f, seed, 1_000_000).unwrap();
            assert_eq!(e.entries()[0], (1, 1));
            let rounds = e.rounds();
            assert!(rounds.windows(2).all(|w| w[0] < w[1]));
            for &(round, m) in e.entries() {
                assert!(round <= f.first_reach(m).unwrap());
            }
        }
        let a = slow_set_schedule(&f, 3, 1_000_000).unwrap();
        let b = slow_set_schedule(&f, 3, 1_000_000).unwrap();
        assert_eq!(a, b);
        let differs = (4..20).any(|s| slow_set_schedule(&f, s, 1_000_000).unwrap() != a);
        assert!(differs);
        let short = GrowthFunction::tabulated(vec![1, 1, 2, 2]).unwrap();
        assert!(slow_set_schedule(&short, 0, 10).is_err());
    }

    #[test]
    fn slow_set_density() {
        // |E ∩ [n]| ≤ 2 f(n) for every n ≥ 4, in at least 95% of seeds.
        let f = GrowthFunction::LogLog;
        let horizon = 1_000_000;
        let good = (0..200u64)
            .filter(|&seed| {
                let e = slow_set_schedule(&f, seed, horizon).unwrap();
                let mut checkpoints: Vec<u64> = e.rounds();
                checkpoints.extend([4, 16, 256, 65_536, horizon]);
                checkpoints.into_iter().filter(|&n| n >= 4).all(|n| {
                    e.count_up_to(n) as u64 <= 2 * f.value(n).unwrap()
                })
            })
            .count();
        assert!(good >= 190, "{good}");
    }

    #[test]
    fn summability_of_loglog() {
        let r = summability_report(&GrowthFunction::LogLog);
        assert_eq!(r.partial_sums.len(), 5);
        assert!(r.partial_sums.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn sqrt_sum_examples() {
        assert!(check_sqrt_sum_inequality(&[2.0], 2.0).unwrap());
        assert!(check_sqrt_sum_inequality(&[0.0; 10], 1.0).unwrap());
        assert!(check_sqrt_sum_inequality(&[], 1.0).unwrap());
        assert!(check_sqrt_sum_inequality(&[1.5], 1.0).is_err());
        assert!(check_sqrt_sum_inequality(&[-0.1], 1.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn sqrt_sum_always_holds(
            bound_pick in 0usize..3,
            raw in proptest::collection::vec(0.0f64..=1.0, 0..1000),
        ) {
            let bound = [0.5, 1.0, 10.0][bound_pick];
            let x: Vec<f64> = raw.iter().map(|v| v * bound).collect();
            proptest::prop_assert!(check_sqrt_sum_inequality(&x, bound).unwrap());
        }
    }
}

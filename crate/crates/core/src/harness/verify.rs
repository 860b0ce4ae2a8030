//! Built-in acceptance suite.
//!
//! [`run_suite`] evaluates each criterion, writes its data as CSV under the
//! output directory together with `criteria.csv`, and reports one outcome
//! per criterion. Nothing time- or machine-dependent is written to disk, so
//! two runs produce byte-identical files; criterion 13 checks exactly that
//! by re-running the other selected criteria into a scratch directory.

use std::fs;
use std::path::{Path, PathBuf};

use crate::environments::EnvironmentConfig;
use crate::error::{Error, Result};
use crate::oracle::minimize_by_pairwise_grid;
use crate::policies::{GrowthSpec, PolicyConfig, RateSpec};
use crate::potentials::{tsallis_tail_constant, DualMapTwoArm, Potential};
use crate::rng;
use crate::schedules::{check_sqrt_sum_inequality, GrowthFunction};
use crate::solver::{solve, solve_two_arm, FtrlProblem};

use super::{fit_loglog_slope, run_experiment, summary_fields, ExperimentConfig, ExperimentOutcome};

pub const CRITERIA: [(u32, &str); 13] = [
    (1, "solver matches brute-force oracle"),
    (2, "closed-form cross-checks"),
    (3, "tail-constant identity"),
    (4, "anytime hybrid bound containment"),
    (5, "known-horizon hybrid bound containment"),
    (6, "first-order scaling"),
    (7, "quadratic variance under the adversary"),
    (8, "hybrid variance contrast (informational)"),
    (9, "square-root sum inequality fuzz"),
    (10, "pre-mixing gap bound never violated"),
    (11, "separable regime regret growth"),
    (12, "slow explorer regret and exploration count"),
    (13, "determinism of written CSVs"),
];

const MASTER_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    /// Failures of informational criteria do not fail the suite.
    pub informational: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    pub outcomes: Vec<CriterionOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed || o.informational)
    }
}

/// Runs the selected criteria (all when `only` is `None`), calling
/// `progress` after each one.
pub fn run_suite(
    output: &Path,
    only: Option<&[u32]>,
    mut progress: impl FnMut(&CriterionOutcome),
) -> Result<SuiteReport> {
    let selected: Vec<u32> = CRITERIA
        .iter()
        .map(|c| c.0)
        .filter(|id| only.is_none_or(|o| o.contains(id)))
        .collect();
    if let Some(bad) = only.and_then(|o| o.iter().find(|id| !(1..=13).contains(*id))) {
        return Err(Error::config("only", format!("no criterion {bad}")));
    }
    let data: Vec<u32> = selected.iter().copied().filter(|&id| id != 13).collect();
    let mut report = evaluate(output, &data, &mut progress)?;
    if selected.contains(&13) {
        let scratch = output.join(".rerun");
        if scratch.exists() {
            fs::remove_dir_all(&scratch).map_err(|e| Error::io(&scratch, e))?;
        }
        evaluate(&scratch, &data, &mut |_| {})?;
        let mismatched = compare_dirs(output, &scratch)?;
        fs::remove_dir_all(&scratch).map_err(|e| Error::io(&scratch, e))?;
        let outcome = outcome(
            13,
            mismatched.is_empty(),
            if mismatched.is_empty() {
                format!("{} criteria re-run; all CSVs identical", data.len())
            } else {
                format!("differing files: {}", mismatched.join(" "))
            },
        );
        progress(&outcome);
        report.outcomes.push(outcome);
    }
    write_criteria_csv(output, &report)?;
    Ok(report)
}

fn evaluate(
    output: &Path,
    ids: &[u32],
    progress: &mut dyn FnMut(&CriterionOutcome),
) -> Result<SuiteReport> {
    fs::create_dir_all(output).map_err(|e| Error::io(output, e))?;
    let ctx = Ctx { out: output.to_path_buf() };
    let mut report = SuiteReport::default();
    let mut explored: Option<ExperimentOutcome> = None;
    let mut variance: Option<Vec<VarianceRow>> = None;
    for &id in ids {
        let o = match id {
            1 => ctx.solver_oracle()?,
            2 => ctx.closed_forms()?,
            3 => ctx.tail_constant()?,
            4 => ctx.bound_containment(4)?,
            5 => ctx.bound_containment(5)?,
            6 => ctx.first_order_scaling()?,
            7 | 8 => {
                if variance.is_none() {
                    variance = Some(ctx.variance_sweep(ids)?);
                }
                ctx.variance_verdict(id, variance.as_ref().expect("computed above"))?
            }
            9 => ctx.sqrt_sum_fuzz()?,
            10 | 11 => {
                if explored.is_none() {
                    explored = Some(ctx.explored_runs()?);
                }
                let runs = explored.as_ref().expect("computed above");
                if id == 10 {
                    gap_bound_verdict(runs)
                } else {
                    separable_verdict(runs)
                }
            }
            12 => ctx.slow_explorer()?,
            _ => unreachable!("criterion ids are validated"),
        };
        progress(&o);
        report.outcomes.push(o);
    }
    Ok(report)
}

fn outcome(id: u32, passed: bool, detail: String) -> CriterionOutcome {
    let title = CRITERIA[id as usize - 1].1;
    CriterionOutcome {
        id,
        title,
        passed,
        informational: id == 8,
        detail,
    }
}

struct Ctx {
    out: PathBuf,
}

struct Table {
    path: PathBuf,
    writer: csv::Writer<fs::File>,
}

impl Table {
    fn create(path: PathBuf, header: &[&str]) -> Result<Self> {
        let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut writer = csv::Writer::from_writer(file);
        writer.write_record(header)?;
        Ok(Table { path, writer })
    }

    fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        Ok(self.writer.write_record(fields)?)
    }

    fn finish(mut self) -> Result<()> {
        self.writer.flush().map_err(|e| Error::io(&self.path, e))
    }
}

fn experiment(
    policy: PolicyConfig,
    environment: EnvironmentConfig,
    horizons: Vec<u64>,
    replications: u64,
    master_seed: u64,
) -> ExperimentConfig {
    ExperimentConfig {
        policy,
        environment,
        horizons,
        replications,
        master_seed,
        trace: false,
        output: None,
    }
}

fn potentials_for(k: usize) -> Result<[Potential; 4]> {
    Ok([
        Potential::NegEntropy,
        Potential::TsallisHalf,
        Potential::LogBarrier,
        Potential::hybrid(1.0, k)?,
    ])
}

/// Two-arm ½-Tsallis dual gradient
/// `½(1 − √(1 + 4(2√(1+x²) − 2 − x²)/x⁴))` for `x ≤ 0`, extended to
/// `x > 0` by `∇g*(x) = 1 − ∇g*(−x)`. The numerator is evaluated as
/// `−(x²/(1 + √(1+x²)))²`, which is the same quantity without the
/// cancellation that costs ~1e-7 near `x = 0`.
fn tsallis_dual_printed(x: f64) -> f64 {
    if x == 0.0 {
        return 0.5;
    }
    let x2 = x * x;
    let d = x2 / (1.0 + (1.0 + x2).sqrt());
    let root = (1.0 - 4.0 * d * d / (x2 * x2)).sqrt();
    if x < 0.0 {
        0.5 * (1.0 - root)
    } else {
        0.5 * (1.0 + root)
    }
}

impl Ctx {
    fn solver_oracle(&self) -> Result<CriterionOutcome> {
        let mut r = rng::stream(rng::key_from_seed(MASTER_SEED), 1);
        let mut table = Table::create(
            self.out.join("criterion01_solver.csv"),
            &["case", "k", "potential", "floor", "max_abs_diff", "stationarity", "complementarity", "simplex"],
        )?;
        let (mut worst_diff, mut worst_kkt) = (0.0f64, 0.0f64);
        for case in 0..500usize {
            let k = [2usize, 3, 5][case % 3];
            let potential = potentials_for(k)?[(case / 3) % 4];
            let floor = [0.0, 0.01, 0.5 / k as f64][(case / 12) % 3];
            let cost: Vec<f64> = (0..k).map(|_| 5.0 * rng::uniform(&mut r)).collect();
            let problem = FtrlProblem {
                cost: &cost,
                potential,
                learning_rate: 0.1 + 1.9 * rng::uniform(&mut r),
                floor,
                round: 3 + rng::below(&mut r, 1000),
            };
            let (p, cert) = solve(&problem)?;
            let reference = minimize_by_pairwise_grid(&problem);
            let diff = p
                .as_slice()
                .iter()
                .zip(&reference)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let kkt = cert
                .stationarity_residual
                .max(cert.complementarity_residual)
                .max(cert.simplex_residual);
            worst_diff = worst_diff.max(diff);
            worst_kkt = worst_kkt.max(kkt);
            table.row([
                case.to_string(),
                k.to_string(),
                potential.name().to_string(),
                floor.to_string(),
                diff.to_string(),
                cert.stationarity_residual.to_string(),
                cert.complementarity_residual.to_string(),
                cert.simplex_residual.to_string(),
            ])?;
        }
        table.finish()?;
        Ok(outcome(
            1,
            worst_diff <= 1e-5 && worst_kkt <= 1e-8,
            format!("500 problems; max coordinate gap {worst_diff:e} (limit 1e-5); max KKT residual {worst_kkt:e} (limit 1e-8)"),
        ))
    }

    fn closed_forms(&self) -> Result<CriterionOutcome> {
        let mut r = rng::stream(rng::key_from_seed(MASTER_SEED), 2);
        let mut softmax_err = 0.0f64;
        for case in 0..1000usize {
            let k = [2usize, 3, 5][case % 3];
            let cost: Vec<f64> = (0..k).map(|_| 20.0 * rng::uniform(&mut r)).collect();
            let eta = 0.05 + 2.0 * rng::uniform(&mut r);
            let problem = FtrlProblem {
                cost: &cost,
                potential: Potential::NegEntropy,
                learning_rate: eta,
                floor: 0.0,
                round: 1,
            };
            let (p, _) = solve(&problem)?;
            let m = cost.iter().copied().fold(f64::INFINITY, f64::min);
            let w: Vec<f64> = cost.iter().map(|c| (-eta * (c - m)).exp()).collect();
            let z: f64 = w.iter().sum();
            for (a, b) in p.as_slice().iter().zip(&w) {
                softmax_err = softmax_err.max((a - b / z).abs());
            }
        }
        let mut table = Table::create(
            self.out.join("criterion02_tsallis.csv"),
            &["gap", "closed_form", "solve", "solve_two_arm"],
        )?;
        let mut tsallis_err = 0.0f64;
        for j in 0..1000 {
            let x = -20.0 + 40.0 * (j as f64 + 0.5) / 1000.0;
            let cost = [0.0, x];
            let problem = FtrlProblem {
                cost: &cost,
                potential: Potential::TsallisHalf,
                learning_rate: 1.0,
                floor: 0.0,
                round: 1,
            };
            let general = solve(&problem)?.0.as_slice()[0];
            let two = solve_two_arm(&problem)?.0.as_slice()[0];
            let want = tsallis_dual_printed(x);
            tsallis_err = tsallis_err.max((general - want).abs()).max((two - want).abs());
            table.row([x, want, general, two].map(|v| v.to_string()))?;
        }
        table.finish()?;
        let map = DualMapTwoArm::new(Potential::TsallisHalf, 1.0);
        let equal = [0.7, 0.7];
        let at_zero = solve(&FtrlProblem {
            cost: &equal,
            potential: Potential::TsallisHalf,
            learning_rate: 1.0,
            floor: 0.0,
            round: 1,
        })?
        .0
        .as_slice()[0];
        let zero_err = (map.gradient(0.0) - 0.5).abs().max((at_zero - 0.5).abs());
        Ok(outcome(
            2,
            softmax_err <= 1e-10 && tsallis_err <= 1e-8 && zero_err <= 1e-12,
            format!("softmax error {softmax_err:e} (1e-10); two-arm Tsallis error {tsallis_err:e} over 1000 gaps (1e-8); dual gradient at 0 off by {zero_err:e} (1e-12)"),
        ))
    }

    fn tail_constant(&self) -> Result<CriterionOutcome> {
        let mut table = Table::create(self.out.join("criterion03_tail.csv"), &["a", "n", "n_times_dual", "limit"])?;
        let mut worst = 0.0f64;
        for a in [0.5, 1.0, 2.0] {
            let n = 100_000_000u64;
            let v = tsallis_tail_constant(a, n)?;
            let limit = 1.0 / (a * a);
            worst = worst.max((v - limit).abs() / limit);
            table.row([a.to_string(), n.to_string(), v.to_string(), limit.to_string()])?;
        }
        table.finish()?;
        Ok(outcome(3, worst <= 0.1, format!("max relative deviation {worst:e} at n = 1e8 (limit 0.1)")))
    }

    fn bound_containment(&self, id: u32) -> Result<CriterionOutcome> {
        let (policy, tag) = if id == 4 {
            (PolicyConfig::HybridInfAnytime { q: 1.0 }, "anytime")
        } else {
            (PolicyConfig::HybridInfKnownHorizon, "known_horizon")
        };
        let mut table = Table::create(
            self.out.join(format!("criterion{id:02}_{tag}.csv")),
            &["k", "n", "mean_regret", "var_regret", "stderr", "tail_prob", "bound_value", "mean_best_arm_loss"],
        )?;
        let mut ok = true;
        let mut worst_ratio = 0.0f64;
        for means in [vec![0.5, 0.6], vec![0.3, 0.4, 0.5, 0.6, 0.7]] {
            let k = means.len();
            let horizons = if id == 4 { vec![1_000, 10_000] } else { vec![1_000] };
            let mut runs = Vec::new();
            if id == 4 {
                runs.push(run_experiment(&experiment(
                    policy.clone(),
                    EnvironmentConfig::StochasticBernoulli { means: means.clone() },
                    horizons,
                    200,
                    MASTER_SEED + k as u64,
                ))?);
            } else {
                // The known-horizon potential depends on n, so each horizon
                // is its own experiment.
                for n in [1_000, 10_000] {
                    runs.push(run_experiment(&experiment(
                        policy.clone(),
                        EnvironmentConfig::StochasticBernoulli { means: means.clone() },
                        vec![n],
                        200,
                        MASTER_SEED + k as u64,
                    ))?);
                }
            }
            for h in runs.iter().flat_map(|o| &o.summary.horizons) {
                let bound = h.bound_value.ok_or_else(|| Error::invalid("bound", "missing bound value"))?;
                ok &= h.mean_regret <= bound;
                worst_ratio = worst_ratio.max(h.mean_regret / bound);
                let mut row = vec![k.to_string()];
                row.extend(summary_fields(h));
                row.push(h.mean_best_arm_loss.to_string());
                table.row(&row)?;
            }
        }
        table.finish()?;
        Ok(outcome(id, ok, format!("largest mean regret / bound ratio {worst_ratio:.4} over k in {{2,5}}, n in {{1e3,1e4}}")))
    }

    fn first_order_scaling(&self) -> Result<CriterionOutcome> {
        let mut table = Table::create(self.out.join("criterion06_scaling.csv"), &["best_mean", "n", "mean_regret", "stderr", "mean_best_arm_loss"])?;
        let mut regrets = Vec::new();
        for mu in [0.05, 0.5] {
            let out = run_experiment(&experiment(
                PolicyConfig::HybridInfAnytime { q: 1.0 },
                EnvironmentConfig::StochasticBernoulli { means: vec![mu, mu + 0.1] },
                vec![10_000],
                500,
                MASTER_SEED + 6,
            ))?;
            let h = &out.summary.horizons[0];
            regrets.push(h.mean_regret);
            table.row([mu.to_string(), h.n.to_string(), h.mean_regret.to_string(), h.stderr.to_string(), h.mean_best_arm_loss.to_string()])?;
        }
        table.finish()?;
        let ratio = regrets[0] / regrets[1];
        Ok(outcome(6, ratio <= 0.6, format!("mean regret {:.3} at best mean 0.05 vs {:.3} at 0.5; ratio {ratio:.4} (limit 0.6)", regrets[0], regrets[1])))
    }

    fn variance_sweep(&self, ids: &[u32]) -> Result<Vec<VarianceRow>> {
        let mut policies = Vec::new();
        if ids.contains(&7) {
            policies.push(PolicyConfig::InfFixed { eta: RateSpec::HorizonScaled(1.0) });
            policies.push(PolicyConfig::Exp3Fixed { eta: RateSpec::HorizonScaled(1.0) });
        }
        if ids.contains(&8) {
            policies.push(PolicyConfig::HybridInfAnytime { q: 1.0 });
        }
        let mut rows = Vec::new();
        for policy in policies {
            for step in 1..=10u32 {
                let alpha = step as f64 * 0.05;
                let mut cfg = experiment(
                    policy.clone(),
                    EnvironmentConfig::VarianceAdversary { alpha },
                    VARIANCE_HORIZONS.to_vec(),
                    2000,
                    MASTER_SEED + 7,
                );
                // inf_fixed and exp3_fixed horizons resolve their rate per n
                cfg.trace = false;
                let out = run_experiment(&cfg)?;
                for h in &out.summary.horizons {
                    rows.push(VarianceRow {
                        policy: policy.name(),
                        alpha,
                        n: h.n,
                        var: h.var_regret,
                        tail: h.tail_prob,
                        mean: h.mean_regret,
                    });
                }
            }
        }
        let mut table = Table::create(self.out.join("criterion07_variance.csv"), &["policy", "alpha", "n", "mean_regret", "var_regret", "tail_prob"])?;
        for r in &rows {
            table.row([r.policy.to_string(), r.alpha.to_string(), r.n.to_string(), r.mean.to_string(), r.var.to_string(), r.tail.to_string()])?;
        }
        table.finish()?;
        Ok(rows)
    }

    fn variance_verdict(&self, id: u32, rows: &[VarianceRow]) -> Result<CriterionOutcome> {
        let names: &[&str] = if id == 7 { &["inf_fixed", "exp3_fixed"] } else { &["hybrid_inf_anytime"] };
        let mut passed = true;
        let mut parts = Vec::new();
        let mut table = Table::create(
            self.out.join(format!("criterion{id:02}_selected.csv")),
            &["policy", "n", "alpha", "var_regret", "tail_prob"],
        )?;
        for &name in names {
            let chosen = select_alpha(rows, name);
            for r in &chosen {
                table.row([name.to_string(), r.n.to_string(), r.alpha.to_string(), r.var.to_string(), r.tail.to_string()])?;
            }
            let pairs: Vec<(f64, f64)> = chosen.iter().map(|r| (r.n as f64, r.var)).collect();
            let slope = fit_loglog_slope(&pairs).unwrap_or(f64::NAN);
            let min_tail = chosen.iter().map(|r| r.tail).fold(f64::INFINITY, f64::min);
            if id == 7 {
                passed &= slope >= 1.7 && min_tail >= 0.01;
                parts.push(format!("{name}: slope {slope:.4} (>= 1.7), min tail {min_tail:.4} (>= 0.01)"));
            } else {
                passed &= slope <= 1.3;
                parts.push(format!("{name}: slope {slope:.4} (<= 1.3), min tail {min_tail:.4}"));
            }
        }
        table.finish()?;
        Ok(outcome(id, passed, parts.join("; ")))
    }

    fn sqrt_sum_fuzz(&self) -> Result<CriterionOutcome> {
        let mut r = rng::stream(rng::key_from_seed(MASTER_SEED), 9);
        let mut failures = 0u32;
        let mut lengths = 0u64;
        for _ in 0..10_000 {
            let len = 1 + rng::below(&mut r, 200) as usize;
            let bound = 10f64.powf(4.0 * rng::uniform(&mut r) - 2.0);
            let x: Vec<f64> = (0..len)
                .map(|_| {
                    // Put mass on the endpoints as well as the interior.
                    match rng::below(&mut r, 4) {
                        0 => 0.0,
                        1 => bound,
                        _ => bound * rng::uniform(&mut r),
                    }
                })
                .collect();
            lengths += len as u64;
            if !check_sqrt_sum_inequality(&x, bound)? {
                failures += 1;
            }
        }
        let mut table = Table::create(self.out.join("criterion09_fuzz.csv"), &["sequences", "total_length", "failures"])?;
        table.row(["10000".to_string(), lengths.to_string(), failures.to_string()])?;
        table.finish()?;
        Ok(outcome(9, failures == 0, format!("10000 sequences, {failures} failures")))
    }

    fn explored_runs(&self) -> Result<ExperimentOutcome> {
        let mut cfg = experiment(
            PolicyConfig::ExploredInf,
            EnvironmentConfig::LinearlySeparable { gaps: vec![0.3], noise: true },
            vec![1_000, 10_000, 100_000],
            200,
            MASTER_SEED + 11,
        );
        cfg.output = Some(self.out.join("criterion11_explored"));
        run_experiment(&cfg)
    }

    fn slow_explorer(&self) -> Result<CriterionOutcome> {
        let n = 1_000_000u64;
        let out = run_experiment(&experiment(
            PolicyConfig::SlowExplorer { growth: GrowthSpec::LogLog },
            EnvironmentConfig::LinearlySeparable { gaps: vec![0.3], noise: true },
            vec![n],
            100,
            MASTER_SEED + 12,
        ))?;
        let f = GrowthFunction::LogLog.value(n)? as f64;
        let mut table = Table::create(
            self.out.join("criterion12_slow_explorer.csv"),
            &["seed", "random_regret", "last_wrong_leader", "exploration_rounds", "regret_ok", "exploration_ok"],
        )?;
        let (mut regret_ok, mut explore_ok) = (0u32, 0u32);
        for run in &out.runs {
            let d = &run.diagnostics;
            let a = run.random_regret <= 3.0 * f + d.last_wrong_leader as f64;
            let b = d.exploration_rounds as f64 <= 2.0 * f;
            regret_ok += a as u32;
            explore_ok += b as u32;
            table.row([
                run.seed.to_string(),
                run.random_regret.to_string(),
                d.last_wrong_leader.to_string(),
                d.exploration_rounds.to_string(),
                a.to_string(),
                b.to_string(),
            ])?;
        }
        table.finish()?;
        let seeds = out.runs.len() as f64;
        let (ra, rb) = (regret_ok as f64 / seeds, explore_ok as f64 / seeds);
        Ok(outcome(
            12,
            ra >= 0.9 && rb >= 0.95,
            format!("f(n) = {f}; regret within 3f(n) + last wrong-leader round in {ra:.2} of seeds (>= 0.90); exploration count within 2f(n) in {rb:.2} (>= 0.95)"),
        ))
    }
}

const VARIANCE_HORIZONS: [u64; 4] = [256, 1024, 4096, 16_384];

#[derive(Debug, Clone)]
struct VarianceRow {
    policy: &'static str,
    alpha: f64,
    n: u64,
    var: f64,
    tail: f64,
    mean: f64,
}

/// Per horizon, the `α` with the largest tail probability (ties: largest
/// variance, then smallest `α`).
fn select_alpha(rows: &[VarianceRow], policy: &str) -> Vec<VarianceRow> {
    VARIANCE_HORIZONS
        .iter()
        .filter_map(|&n| {
            rows.iter()
                .filter(|r| r.policy == policy && r.n == n)
                .fold(None::<&VarianceRow>, |best, r| match best {
                    Some(b) if (b.tail, b.var) >= (r.tail, r.var) => Some(b),
                    _ => Some(r),
                })
                .cloned()
        })
        .collect()
}

fn gap_bound_verdict(out: &ExperimentOutcome) -> CriterionOutcome {
    let checks: u64 = out.runs.iter().map(|r| r.diagnostics.gap_bound_checks).sum();
    let violations: u64 = out.runs.iter().map(|r| r.diagnostics.gap_bound_violations).sum();
    outcome(
        10,
        violations == 0 && checks > 0,
        format!("{checks} coordinate checks over {} runs, {violations} violations", out.runs.len()),
    )
}

fn separable_verdict(out: &ExperimentOutcome) -> CriterionOutcome {
    let ratios: Vec<f64> = out
        .summary
        .horizons
        .iter()
        .map(|h| {
            let l = (h.n as f64).ln();
            h.mean_regret / (l * l * l.ln())
        })
        .collect();
    let monotone = ratios.windows(2).all(|w| w[1] <= 1.2 * w[0]);
    let last = out.summary.horizons.last().expect("three horizons");
    let ceiling = 0.2 * (2.0 * last.n as f64).sqrt();
    let ratio_text: Vec<String> = ratios.iter().map(|r| format!("{r:.4}")).collect();
    outcome(
        11,
        monotone && last.mean_regret <= ceiling,
        format!(
            "normalised regret {} (nonincreasing within 20%); mean regret {:.3} at n = 1e5 (limit {ceiling:.3})",
            ratio_text.join(", "),
            last.mean_regret
        ),
    )
}

fn write_criteria_csv(output: &Path, report: &SuiteReport) -> Result<()> {
    let mut table = Table::create(output.join("criteria.csv"), &["id", "title", "passed", "informational", "detail"])?;
    for o in &report.outcomes {
        table.row([o.id.to_string(), o.title.to_string(), o.passed.to_string(), o.informational.to_string(), o.detail.clone()])?;
    }
    table.finish()
}

/// Relative paths of files whose bytes differ between the two trees, or
/// that exist in only one of them (the scratch directory itself excluded).
fn compare_dirs(a: &Path, b: &Path) -> Result<Vec<String>> {
    fn walk(root: &Path, dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
        for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
            let path = entry.map_err(|e| Error::io(dir, e))?.path();
            if path.file_name().is_some_and(|n| n == ".rerun" || n == "criteria.csv") {
                continue;
            }
            if path.is_dir() {
                walk(root, &path, out)?;
            } else {
                out.push(path.strip_prefix(root).expect("walk stays under root").to_path_buf());
            }
        }
        Ok(())
    }
    let (mut fa, mut fb) = (Vec::new(), Vec::new());
    walk(a, a, &mut fa)?;
    walk(b, b, &mut fb)?;
    fa.sort();
    fb.sort();
    let mut differing = Vec::new();
    for rel in fa.iter().filter(|p| !fb.contains(p)).chain(fb.iter().filter(|p| !fa.contains(p))) {
        differing.push(rel.display().to_string());
    }
    for rel in fa.iter().filter(|p| fb.contains(p)) {
        let x = fs::read(a.join(rel)).map_err(|e| Error::io(a.join(rel), e))?;
        let y = fs::read(b.join(rel)).map_err(|e| Error::io(b.join(rel), e))?;
        if x != y {
            differing.push(rel.display().to_string());
        }
    }
    Ok(differing)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_tsallis_form_matches_reference_values() {
        // 50-digit bisection of −1/√p + 1/√(1−p) = x.
        let cases = [
            (-0.02, 0.492_929_815_879_416_55),
            (-0.06, 0.478_810_614_812_355_24),
            (-19.98, 0.002_271_652_667_843_266_7),
        ];
        for (x, p) in cases {
            assert!((tsallis_dual_printed(x) - p).abs() < 1e-14, "{x} {}", tsallis_dual_printed(x) - p);
            assert!((tsallis_dual_printed(-x) - (1.0 - p)).abs() < 1e-14, "{x}");
        }
    }

    #[test]
    fn alpha_selection_prefers_tail_then_variance() {
        let row = |alpha, n, var, tail| VarianceRow { policy: "p", alpha, n, var, tail, mean: 0.0 };
        let rows = vec![
            row(0.1, 256, 5.0, 0.2),
            row(0.2, 256, 9.0, 0.2),
            row(0.3, 256, 1.0, 0.1),
            row(0.1, 1024, 1.0, 0.0),
            row(0.2, 1024, 1.0, 0.0),
        ];
        let chosen = select_alpha(&rows, "p");
        assert_eq!(chosen.len(), 2);
        assert_eq!(chosen[0].alpha, 0.2);
        assert_eq!(chosen[1].alpha, 0.1);
    }

    #[test]
    fn cheap_criteria_pass_and_rerun_identically() {
        let dir = tempfile::tempdir().unwrap();
        let report = run_suite(dir.path(), Some(&[2, 3, 9, 13]), |_| {}).unwrap();
        assert_eq!(report.outcomes.len(), 4);
        assert!(report.passed(), "{report:?}");
        assert!(dir.path().join("criteria.csv").exists());
        assert!(!dir.path().join(".rerun").exists());
        assert!(run_suite(dir.path(), Some(&[14]), |_| {}).is_err());
    }
}

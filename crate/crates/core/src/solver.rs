//! Exact FTRL step over the box-floored simplex.
//!
//! Minimises `⟨p, L̂⟩ + Σ_i f_t(p_i)/η` subject to `Σ p_i = 1` and
//! `p_i ∈ [ε, 1]`. Stationarity gives `p_i(λ) = clamp((f')⁻¹(η(λ − L̂_i)), ε, 1)`
//! for the simplex multiplier `λ`, and `λ ↦ Σ_i p_i(λ)` is continuous and
//! nondecreasing, so `λ` is found by a Newton iteration kept inside a
//! bisection bracket.

use crate::error::{Error, Result};
use crate::potentials::{DualMapTwoArm, Potential};
use crate::types::ProbabilityVector;

const MAX_OUTER_ITERATIONS: usize = 200;
const SUM_TOLERANCE: f64 = 1e-13;
const ACCEPT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct FtrlProblem<'a> {
    /// Cumulative loss estimates `L̂_{t−1}`.
    pub cost: &'a [f64],
    pub potential: Potential,
    pub learning_rate: f64,
    /// Lower bound `ε` on every coordinate.
    pub floor: f64,
    pub round: u64,
}

/// Optimality evidence for a returned iterate.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KktCertificate {
    /// Simplex multiplier `λ` in the stationarity condition
    /// `f'(p_i)/η + L̂_i − λ − μ_i = 0`.
    pub multiplier: f64,
    /// `max_i μ_i (p_i − ε)`.
    pub complementarity_residual: f64,
    /// `max_i |f'(p_i)/η + L̂_i − λ − μ_i|` with `μ_i ≥ 0` the floor multipliers.
    pub stationarity_residual: f64,
    /// `|Σ p_i − 1|`.
    pub simplex_residual: f64,
    pub iterations: usize,
}

impl FtrlProblem<'_> {
    fn validate(&self) -> Result<()> {
        let k = self.cost.len();
        if k < 2 {
            return Err(Error::invalid("FTRL problem", "needs at least two arms"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Domain {
                what: "learning rate",
                value: self.learning_rate,
            });
        }
        if !(self.floor >= 0.0) || self.floor * k as f64 > 1.0 + 1e-12 {
            return Err(Error::InfeasibleFloor {
                floor: self.floor,
                arms: k,
            });
        }
        if let Some(&bad) = self.cost.iter().find(|c| !c.is_finite()) {
            return Err(Error::Domain {
                what: "cost vector",
                value: bad,
            });
        }
        Ok(())
    }

    fn min_cost(&self) -> f64 {
        self.cost.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Solves the FTRL subproblem for any number of arms.
pub fn solve(problem: &FtrlProblem<'_>) -> Result<(ProbabilityVector, KktCertificate)> {
    problem.validate()?;
    let k = problem.cost.len();
    let eta = problem.learning_rate;
    let eps = problem.floor;
    let t = problem.round;
    let pot = &problem.potential;
    let shift = problem.min_cost();
    let shifted: Vec<f64> = problem.cost.iter().map(|c| c - shift).collect();

    if 1.0 - k as f64 * eps <= 1e-14 {
        let p = vec![1.0 / k as f64; k];
        let lambda = shifted
            .iter()
            .map(|c| pot.gradient_unchecked(p[0], t) / eta + c)
            .fold(f64::INFINITY, f64::min);
        let cert = certify_shifted(problem, &shifted, &p, lambda, shift, 0);
        return Ok((ProbabilityVector::from_parts(p, eps.min(1.0 / k as f64)), cert));
    }

    let coord = |lambda: f64, c: f64| pot.inverse_gradient(eta * (lambda - c), t).max(eps);
    let mass = |lambda: f64| -> (f64, f64) {
        let mut sum = 0.0;
        let mut slope = 0.0;
        for &c in &shifted {
            let p = coord(lambda, c);
            sum += p;
            if p > eps && p < 1.0 {
                slope += eta / pot.hessian_unchecked(p, t);
            }
        }
        (sum, slope)
    };

    let max_cost = shifted.iter().copied().fold(0.0, f64::max);
    let mut lo = pot.gradient_unchecked(1.0 / k as f64, t) / eta - 1.0;
    let mut hi = max_cost + pot.gradient_unchecked(1.0, t) / eta + 1.0;
    let mut width = 1.0;
    while mass(lo).0 > 1.0 {
        width *= 2.0;
        lo -= width;
    }
    width = 1.0;
    while mass(hi).0 < 1.0 {
        width *= 2.0;
        hi += width;
    }

    let mut lambda = (pot.gradient_unchecked(1.0 / k as f64, t) / eta).clamp(lo, hi);
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < MAX_OUTER_ITERATIONS {
        iterations += 1;
        let (sum, slope) = mass(lambda);
        residual = sum - 1.0;
        if residual.abs() <= SUM_TOLERANCE {
            break;
        }
        if residual < 0.0 {
            lo = lambda;
        } else {
            hi = lambda;
        }
        if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            break;
        }
        let mut next = if slope > 0.0 {
            lambda - residual / slope
        } else {
            f64::NAN
        };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        lambda = next;
    }
    if residual.abs() > ACCEPT_TOLERANCE {
        return Err(Error::NonConvergence {
            iterations,
            residual: residual.abs(),
        });
    }
    let p: Vec<f64> = shifted.iter().map(|&c| coord(lambda, c)).collect();
    let cert = certify_shifted(problem, &shifted, &p, lambda, shift, iterations);
    Ok((ProbabilityVector::from_parts(p, eps), cert))
}

/// Two-arm solve: the constrained optimum of a one-dimensional strictly
/// convex problem is the unconstrained one, `∇g*(η (L̂_2 − L̂_1))`, clamped
/// to `[ε, 1 − ε]`.
pub fn solve_two_arm(problem: &FtrlProblem<'_>) -> Result<(ProbabilityVector, KktCertificate)> {
    problem.validate()?;
    if problem.cost.len() != 2 {
        return Err(Error::invalid(
            "two-arm problem",
            format!("has {} arms", problem.cost.len()),
        ));
    }
    let eps = problem.floor;
    let shift = problem.min_cost();
    let shifted = [problem.cost[0] - shift, problem.cost[1] - shift];
    let map = DualMapTwoArm::new(problem.potential, problem.learning_rate).at_round(problem.round);
    let (mut p, mut q) = map.probability_for_gap(shifted[1] - shifted[0]);
    if p < eps {
        p = eps;
        q = 1.0 - eps;
    } else if q < eps {
        q = eps;
        p = 1.0 - eps;
    }
    let probs = [p, q];
    // λ from whichever coordinate is off the floor.
    let free = if p >= q { 0 } else { 1 };
    let lambda = problem
        .potential
        .gradient_unchecked(probs[free], problem.round)
        / problem.learning_rate
        + shifted[free];
    let cert = certify_shifted(problem, &shifted, &probs, lambda, shift, 1);
    Ok((ProbabilityVector::from_parts(probs.to_vec(), eps), cert))
}

/// `P_{t1} = ∇g*(η · gap)` with `gap = L̂_2 − L̂_1`, no floor.
pub fn solve_two_arm_unconstrained(potential: Potential, learning_rate: f64, gap: f64, round: u64) -> f64 {
    DualMapTwoArm::new(potential, learning_rate)
        .at_round(round)
        .probability_for_gap(gap)
        .0
}

/// Dispatches to the two-arm closed form when `k = 2`.
pub fn solve_auto(problem: &FtrlProblem<'_>) -> Result<(ProbabilityVector, KktCertificate)> {
    if problem.cost.len() == 2 {
        solve_two_arm(problem)
    } else {
        solve(problem)
    }
}

/// KKT residuals of `p` for `problem` at multiplier `lambda` (unshifted costs).
pub fn certify(problem: &FtrlProblem<'_>, p: &[f64], lambda: f64) -> KktCertificate {
    let shift = problem.min_cost();
    let shifted: Vec<f64> = problem.cost.iter().map(|c| c - shift).collect();
    certify_shifted(problem, &shifted, p, lambda - shift, shift, 0)
}

fn certify_shifted(
    problem: &FtrlProblem<'_>,
    shifted: &[f64],
    p: &[f64],
    lambda: f64,
    shift: f64,
    iterations: usize,
) -> KktCertificate {
    let eta = problem.learning_rate;
    let eps = problem.floor;
    let mut stationarity: f64 = 0.0;
    let mut complementarity: f64 = 0.0;
    for (&pi, &c) in p.iter().zip(shifted) {
        if pi <= 0.0 {
            // Underflowed coordinate: the barrier gradient is −∞ there.
            continue;
        }
        let r = problem.potential.gradient_unchecked(pi, problem.round) / eta + c - lambda;
        let (mu, res) = if eps > 0.0 && pi <= eps {
            let mu = r.max(0.0);
            (mu, (r - mu).abs())
        } else if pi >= 1.0 {
            (0.0, r.max(0.0))
        } else {
            (0.0, r.abs())
        };
        stationarity = stationarity.max(res);
        complementarity = complementarity.max(mu * (pi - eps));
    }
    KktCertificate {
        multiplier: lambda + shift,
        complementarity_residual: complementarity,
        stationarity_residual: stationarity,
        simplex_residual: (p.iter().sum::<f64>() - 1.0).abs(),
        iterations,
    }
}

//! Reference minimiser for the FTRL subproblem, used to check the solver.
//!
//! Works only with potential *values*: it never touches gradients, the
//! inverse gradient or the simplex multiplier. Starting from the uniform
//! point it sweeps over coordinate pairs `(i, j)`, moving mass along
//! `p_i + p_j = const` to the minimiser of the objective on that segment.
//! Each line minimisation is a grid search that zooms into the best cell
//! (64 points per level) until the cell is at round-off width.

use crate::solver::FtrlProblem;

const GRID: usize = 64;
const MAX_SWEEPS: usize = 20_000;

fn coordinate_value(problem: &FtrlProblem<'_>, p: f64) -> f64 {
    if p <= 0.0 {
        return match problem.potential {
            crate::potentials::Potential::NegEntropy => 0.0,
            _ => f64::INFINITY,
        };
    }
    problem.potential.value_unchecked(p, problem.round)
}

fn line_minimum(problem: &FtrlProblem<'_>, ci: f64, cj: f64, total: f64, eps: f64) -> f64 {
    let eta = problem.learning_rate;
    let objective = |u: f64| {
        let v = ci * u
            + cj * (total - u)
            + (coordinate_value(problem, u) + coordinate_value(problem, total - u)) / eta;
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let (mut a, mut b) = (eps, total - eps);
    if b <= a {
        return 0.5 * total;
    }
    let mut best = 0.5 * (a + b);
    for _ in 0..200 {
        let step = (b - a) / GRID as f64;
        let mut best_idx = 0;
        let mut best_val = f64::INFINITY;
        for idx in 0..=GRID {
            let u = a + step * idx as f64;
            let v = objective(u);
            if v < best_val {
                best_val = v;
                best_idx = idx;
            }
        }
        best = a + step * best_idx as f64;
        let na = (a + step * best_idx.saturating_sub(1) as f64).max(eps);
        let nb = (a + step * (best_idx + 1).min(GRID) as f64).min(total - eps);
        if nb - na <= 4.0 * f64::EPSILON * nb.abs().max(1e-300) || (na == a && nb == b) {
            break;
        }
        a = na;
        b = nb;
    }
    best
}

fn objective(problem: &FtrlProblem<'_>, p: &[f64]) -> f64 {
    p.iter()
        .zip(problem.cost)
        .map(|(&pi, &c)| c * pi + coordinate_value(problem, pi) / problem.learning_rate)
        .sum()
}

/// Minimises `⟨p, cost⟩ + Σ f(p_i)/η` over the floored simplex.
///
/// Stops once a full sweep lowers the objective by less than round-off;
/// the argmin is then known to roughly `√ε_mach` per coordinate.
pub fn minimize_by_pairwise_grid(problem: &FtrlProblem<'_>) -> Vec<f64> {
    let k = problem.cost.len();
    let eps = problem.floor;
    let mut p = vec![1.0 / k as f64; k];
    let mut value = objective(problem, &p);
    for _ in 0..MAX_SWEEPS {
        let mut moved: f64 = 0.0;
        for i in 0..k {
            for j in (i + 1)..k {
                let total = p[i] + p[j];
                let u = line_minimum(problem, problem.cost[i], problem.cost[j], total, eps);
                moved = moved.max((u - p[i]).abs());
                p[i] = u;
                p[j] = total - u;
            }
        }
        let next = objective(problem, &p);
        let stalled = value - next <= 1e-15 * value.abs().max(1.0);
        value = next;
        if moved < 1e-12 || stalled {
            break;
        }
    }
    p
}

//! Separable potentials `f_t` and the two-arm dual-gradient map.
//!
//! A potential acts coordinatewise: the regulariser of the FTRL
//! subproblem is `F_t(p) = Σ_i f_t(p_i) / η_t`. The hybrid potential
//! `−2√p − w_t log p` mixes the ½-Tsallis entropy with a log barrier whose
//! weight `w_t = 1 / (√k log^{1+q} max(3, t))` decays with the round index
//! (or is frozen at `1 / (√k log n)` when the horizon `n` is known).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Potential {
    /// `p (log p − 1)`.
    NegEntropy,
    /// `−2 √p`.
    TsallisHalf,
    /// `−log p`.
    LogBarrier,
    /// `−2 √p − w_t log p`.
    Hybrid {
        q: f64,
        arms: usize,
        known_horizon: Option<u64>,
    },
}

impl Potential {
    pub fn hybrid(q: f64, arms: usize) -> Result<Self> {
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::Domain {
                what: "hybrid exponent q",
                value: q,
            });
        }
        if arms < 2 {
            return Err(Error::invalid("hybrid potential", "needs at least two arms"));
        }
        Ok(Potential::Hybrid {
            q,
            arms,
            known_horizon: None,
        })
    }

    /// Hybrid potential with the barrier weight frozen at `1 / (√k log n)`.
    pub fn hybrid_known_horizon(arms: usize, horizon: u64) -> Result<Self> {
        if arms < 2 {
            return Err(Error::invalid("hybrid potential", "needs at least two arms"));
        }
        if horizon < 3 {
            return Err(Error::invalid("hybrid potential", "known horizon must be at least 3"));
        }
        Ok(Potential::Hybrid {
            q: 1.0,
            arms,
            known_horizon: Some(horizon),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Potential::NegEntropy => "negentropy",
            Potential::TsallisHalf => "tsallis_half",
            Potential::LogBarrier => "log_barrier",
            Potential::Hybrid { .. } => "hybrid",
        }
    }

    /// Weight of the log-barrier term at round `t` (zero for the pure kinds).
    pub fn barrier_weight(&self, t: u64) -> f64 {
        match *self {
            Potential::Hybrid {
                q,
                arms,
                known_horizon,
            } => {
                let scale = match known_horizon {
                    Some(n) => (n as f64).ln(),
                    None => (t.max(3) as f64).ln().powf(1.0 + q),
                };
                1.0 / ((arms as f64).sqrt() * scale)
            }
            _ => 0.0,
        }
    }

    fn check(p: f64) -> Result<()> {
        if p > 0.0 && p.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain {
                what: "potential (requires p > 0)",
                value: p,
            })
        }
    }

    pub fn value(&self, p: f64, t: u64) -> Result<f64> {
        Self::check(p)?;
        Ok(self.value_unchecked(p, t))
    }

    pub fn gradient(&self, p: f64, t: u64) -> Result<f64> {
        Self::check(p)?;
        Ok(self.gradient_unchecked(p, t))
    }

    pub fn hessian(&self, p: f64, t: u64) -> Result<f64> {
        Self::check(p)?;
        Ok(self.hessian_unchecked(p, t))
    }

    pub(crate) fn value_unchecked(&self, p: f64, t: u64) -> f64 {
        match self {
            Potential::NegEntropy => p * (p.ln() - 1.0),
            Potential::TsallisHalf => -2.0 * p.sqrt(),
            Potential::LogBarrier => -p.ln(),
            Potential::Hybrid { .. } => -2.0 * p.sqrt() - self.barrier_weight(t) * p.ln(),
        }
    }

    pub(crate) fn gradient_unchecked(&self, p: f64, t: u64) -> f64 {
        match self {
            Potential::NegEntropy => p.ln(),
            Potential::TsallisHalf => -1.0 / p.sqrt(),
            Potential::LogBarrier => -1.0 / p,
            Potential::Hybrid { .. } => -1.0 / p.sqrt() - self.barrier_weight(t) / p,
        }
    }

    pub(crate) fn hessian_unchecked(&self, p: f64, t: u64) -> f64 {
        match self {
            Potential::NegEntropy => 1.0 / p,
            Potential::TsallisHalf => 0.5 / (p * p.sqrt()),
            Potential::LogBarrier => 1.0 / (p * p),
            Potential::Hybrid { .. } => {
                0.5 / (p * p.sqrt()) + self.barrier_weight(t) / (p * p)
            }
        }
    }

    /// The `p ∈ (0, 1]` with `f'(p) = y`, saturating at 1 once `y ≥ f'(1)`.
    ///
    /// Every kind has a closed form; the hybrid solves `w s² + s + y = 0`
    /// for `s = 1/√p` in the cancellation-free root form.
    pub fn inverse_gradient(&self, y: f64, t: u64) -> f64 {
        let p = match self {
            Potential::NegEntropy => y.exp(),
            Potential::TsallisHalf => {
                if y >= -1.0 {
                    1.0
                } else {
                    1.0 / (y * y)
                }
            }
            Potential::LogBarrier => {
                if y >= -1.0 {
                    1.0
                } else {
                    -1.0 / y
                }
            }
            Potential::Hybrid { .. } => {
                let w = self.barrier_weight(t);
                if y >= -1.0 - w {
                    1.0
                } else {
                    // s = −2y / (1 + √(1 − 4wy)), p = 1/s²
                    let r = (1.0 - 4.0 * w * y).sqrt();
                    let s = -2.0 * y / (1.0 + r);
                    1.0 / (s * s)
                }
            }
        };
        p.min(1.0)
    }
}

/// `∇g*` for `g(p) = f(p) + f(1 − p)`, the map sending a scaled cumulative
/// loss gap to the first arm's FTRL probability in a two-arm problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualMapTwoArm {
    pub potential: Potential,
    pub learning_rate: f64,
    /// Round index, only consulted by the anytime hybrid potential.
    pub round: u64,
}

impl DualMapTwoArm {
    pub fn new(potential: Potential, learning_rate: f64) -> Self {
        DualMapTwoArm {
            potential,
            learning_rate,
            round: 1,
        }
    }

    pub fn at_round(mut self, t: u64) -> Self {
        self.round = t;
        self
    }

    /// `g'(p)` given `p` and its complement (passed separately so that
    /// points close to 1 keep full precision).
    pub fn primal_gradient(&self, p: f64, complement: f64) -> f64 {
        self.potential.gradient_unchecked(p, self.round)
            - self.potential.gradient_unchecked(complement, self.round)
    }

    /// `∇g*(x)`.
    pub fn gradient(&self, x: f64) -> f64 {
        self.gradient_pair(x).0
    }

    /// `(∇g*(x), 1 − ∇g*(x))`, each computed without cancellation.
    pub fn gradient_pair(&self, x: f64) -> (f64, f64) {
        if x > 0.0 {
            let (p, q) = self.gradient_nonpositive(-x);
            (q, p)
        } else {
            self.gradient_nonpositive(x)
        }
    }

    /// First-arm probability for a cumulative loss gap `L̂_2 − L̂_1`:
    /// `∇g*(η · gap)`.
    pub fn probability_for_gap(&self, gap: f64) -> (f64, f64) {
        self.gradient_pair(self.learning_rate * gap)
    }

    fn gradient_nonpositive(&self, x: f64) -> (f64, f64) {
        debug_assert!(x <= 0.0);
        let p = match self.potential {
            Potential::NegEntropy => {
                let e = x.exp();
                return (e / (1.0 + e), 1.0 / (1.0 + e));
            }
            Potential::TsallisHalf => {
                // ½(1 − √(1 + z)) with z = 4(2√(1+x²) − 2 − x²)/x⁴
                // = −4/(1 + √(1+x²))², rewritten to avoid the x⁴ cancellation.
                let s = x.hypot(1.0);
                let z = -4.0 / ((1.0 + s) * (1.0 + s));
                let w = (1.0 + z).max(0.0).sqrt();
                2.0 / ((1.0 + s) * (1.0 + s) * (1.0 + w))
            }
            Potential::LogBarrier => 2.0 / ((2.0 - x) + (4.0 + x * x).sqrt()),
            Potential::Hybrid { .. } => self.invert_numerically(x),
        };
        (p, 1.0 - p)
    }

    /// Safeguarded Newton on `g'(p) = x` over `p ∈ (0, ½]`.
    fn invert_numerically(&self, x: f64) -> f64 {
        let pot = &self.potential;
        let t = self.round;
        if x == 0.0 {
            return 0.5;
        }
        // f'(p) = x + f'(1 − p) and f'(1 − p) ∈ [f'(½), f'(1)].
        let mut lo = pot.inverse_gradient(x + pot.gradient_unchecked(0.5, t), t);
        let mut hi = pot
            .inverse_gradient(x + pot.gradient_unchecked(1.0, t), t)
            .min(0.5);
        let h = |p: f64| pot.gradient_unchecked(p, t) - pot.gradient_unchecked(1.0 - p, t) - x;
        let mut p = hi;
        for _ in 0..200 {
            let v = h(p);
            if v == 0.0 {
                return p;
            }
            if v < 0.0 {
                lo = p;
            } else {
                hi = p;
            }
            let slope = pot.hessian_unchecked(p, t) + pot.hessian_unchecked(1.0 - p, t);
            let mut next = p - v / slope;
            if !(next > lo && next < hi) {
                next = (lo * hi).sqrt();
            }
            if (next - p).abs() <= 1e-15 * p || hi - lo <= 1e-16 * hi {
                return next;
            }
            p = next;
        }
        p
    }
}

/// `∇g*(x)` of the two-arm map.
pub fn dual_gradient_two_arm(map: &DualMapTwoArm, x: f64) -> f64 {
    map.gradient(x)
}

/// `n · ∇g*(−a√n)` for the ½-Tsallis potential; tends to `1/a²`.
pub fn tsallis_tail_constant(a: f64, n: u64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Domain {
            what: "tail scale a (requires a > 0)",
            value: a,
        });
    }
    if n == 0 {
        return Err(Error::invalid("tail horizon", "n must be at least 1"));
    }
    let map = DualMapTwoArm::new(Potential::TsallisHalf, 1.0);
    let nf = n as f64;
    Ok(nf * map.gradient(-a * nf.sqrt()))
}

//! Simultaneous inhomogeneous Diophantine approximation: find `τ` with
//! `‖−β_ℓτ/(2πQ) − y_ℓ/(2πQ)‖ < δ_ℓ` for every `ℓ`.
//!
//! Internally each coordinate is written `‖α_ℓτ − t_ℓ‖` with
//! `α_ℓ = β_ℓ/(2πQ)` and `t_ℓ = −y_ℓ/(2πQ)`. Strategies are trait objects
//! looked up by name; every candidate they produce is verified here in
//! extended precision.

mod cf;
mod density;
mod lattice;
mod scan;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::phase_bits;
use crate::precision::HpReal;

pub use cf::ContinuedFraction;
pub use density::{density_estimate, DensityReport};
pub use lattice::{lll, Lattice};
pub use scan::GridScan;

/// Default budget, in candidate evaluations.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KroneckerProblem {
    pub frequencies: Vec<HpReal>,
    pub targets: Vec<f64>,
    pub q: u64,
    /// Per-coordinate tolerances, each in `(0, 1/2)`.
    pub deltas: Vec<f64>,
}

impl KroneckerProblem {
    pub fn new(frequencies: Vec<HpReal>, targets: Vec<f64>, q: u64, delta: f64) -> Result<Self> {
        let l = frequencies.len();
        Self::with_deltas(frequencies, targets, q, vec![delta; l])
    }

    pub fn with_deltas(frequencies: Vec<HpReal>, targets: Vec<f64>, q: u64, deltas: Vec<f64>) -> Result<Self> {
        let p = KroneckerProblem {
            frequencies,
            targets,
            q,
            deltas,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let l = self.frequencies.len();
        if l == 0 {
            return Err(Error::Invalid("Kronecker problem needs L ≥ 1".into()));
        }
        if self.targets.len() != l || self.deltas.len() != l {
            return Err(Error::Invalid("frequencies, targets and deltas must align".into()));
        }
        if self.q == 0 {
            return Err(Error::Invalid("Q must be positive".into()));
        }
        if self.frequencies.iter().any(|b| b.is_zero() || !b.is_finite()) {
            return Err(Error::Invalid("frequencies must be finite and nonzero".into()));
        }
        if self.deltas.iter().any(|&d| !(d > 0.0 && d < 0.5)) {
            return Err(Error::Invalid("each δ must lie in (0, 1/2)".into()));
        }
        if self.targets.iter().any(|y| !y.is_finite()) {
            return Err(Error::Invalid("targets must be finite".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.frequencies.len()
    }

    /// `α_ℓ = β_ℓ/(2πQ)` at `bits`.
    pub fn alphas(&self, bits: usize) -> Vec<HpReal> {
        let den = HpReal::two_pi(bits + 32).mul(&HpReal::from_i64(self.q as i64, bits + 32));
        self.frequencies
            .iter()
            .map(|b| b.with_bits(bits + 32).div(&den).with_bits(bits))
            .collect()
    }

    /// `t_ℓ = −y_ℓ/(2πQ)` at `bits`.
    pub fn target_turns(&self, bits: usize) -> Vec<HpReal> {
        let den = HpReal::two_pi(bits + 32).mul(&HpReal::from_i64(self.q as i64, bits + 32));
        self.targets
            .iter()
            .map(|&y| HpReal::from_f64(-y, bits + 32).div(&den).with_bits(bits))
            .collect()
    }

    /// Per-coordinate distances `‖α_ℓτ − t_ℓ‖` computed at `extra` bits
    /// beyond what `τ` needs.
    pub fn distances(&self, tau: &HpReal, extra: usize) -> Vec<f64> {
        let bits = phase_bits(tau) + extra;
        let alphas = self.alphas(bits);
        let turns = self.target_turns(bits);
        let tau = tau.with_bits(bits);
        alphas
            .iter()
            .zip(&turns)
            .map(|(a, t)| a.mul(&tau).sub(t).dist_to_int())
            .collect()
    }

    /// `max_ℓ d_ℓ/δ_ℓ`; below 1 means solved.
    pub fn ratio(&self, distances: &[f64]) -> f64 {
        distances
            .iter()
            .zip(&self.deltas)
            .map(|(d, e)| d / e)
            .fold(0.0, f64::max)
    }

    /// Index of the coordinate to solve exactly: the tightest tolerance.
    pub fn pivot(&self) -> usize {
        let mut best = 0;
        for l in 1..self.dim() {
            if self.deltas[l] < self.deltas[best] {
                best = l;
            }
        }
        best
    }
}

/// Counts candidate evaluations against a limit.
#[derive(Clone, Debug)]
pub struct Budget {
    pub limit: u64,
    pub used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    /// Charge `n` evaluations; false once the limit is reached.
    pub fn spend(&mut self, n: u64) -> bool {
        self.used = self.used.saturating_add(n);
        self.used <= self.limit
    }

    pub fn exhausted(&self) -> bool {
        self.used >= self.limit
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Found,
    Exhausted,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KroneckerSolution {
    pub status: SolveStatus,
    pub tau: HpReal,
    pub distances: Vec<f64>,
    /// `max_ℓ d_ℓ/δ_ℓ`.
    pub max_ratio: f64,
    pub strategy: String,
    pub evaluations: u64,
}

/// Tracks the best candidate seen and stops at the first verified one.
pub struct Search<'a> {
    pub problem: &'a KroneckerProblem,
    pub budget: Budget,
    best: Option<(f64, HpReal, Vec<f64>)>,
}

impl<'a> Search<'a> {
    pub fn new(problem: &'a KroneckerProblem, budget: u64) -> Self {
        Search {
            problem,
            budget: Budget::new(budget),
            best: None,
        }
    }

    /// Verify a candidate at extended precision; true when it solves.
    pub fn offer(&mut self, tau: HpReal) -> bool {
        self.budget.spend(1);
        let d = self.problem.distances(&tau, 64);
        let r = self.problem.ratio(&d);
        let better = self.best.as_ref().is_none_or(|(b, bt, _)| {
            r < *b || (r < 1.0 && *b < 1.0 && tau.abs() < bt.abs())
        });
        if better {
            self.best = Some((r, tau, d));
        }
        r < 1.0
    }

    pub fn found(&self) -> bool {
        self.best.as_ref().is_some_and(|(r, _, _)| *r < 1.0)
    }

    fn finish(self, strategy: &str) -> KroneckerSolution {
        let evaluations = self.budget.used;
        match self.best {
            Some((r, tau, distances)) => KroneckerSolution {
                status: if r < 1.0 { SolveStatus::Found } else { SolveStatus::Exhausted },
                tau,
                distances,
                max_ratio: r,
                strategy: strategy.into(),
                evaluations,
            },
            None => KroneckerSolution {
                status: SolveStatus::Exhausted,
                tau: HpReal::zero(crate::precision::DEFAULT_BITS),
                distances: vec![f64::NAN; self.problem.dim()],
                max_ratio: f64::INFINITY,
                strategy: strategy.into(),
                evaluations,
            },
        }
    }
}

/// A search method for Kronecker problems.
pub trait KroneckerStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn supports(&self, problem: &KroneckerProblem) -> bool;

    /// Offer candidates to `search` until one verifies or the budget runs out.
    fn run(&self, search: &mut Search<'_>) -> Result<()>;
}

/// All registered strategies, in `auto` priority order.
pub fn strategies() -> Vec<Box<dyn KroneckerStrategy>> {
    vec![Box::new(ContinuedFraction), Box::new(Lattice::default()), Box::new(GridScan)]
}

pub fn strategy_names() -> Vec<&'static str> {
    let mut names: Vec<&'static str> = strategies().iter().map(|s| s.name()).collect();
    names.push("auto");
    names
}

pub fn strategy(name: &str) -> Result<Box<dyn KroneckerStrategy>> {
    strategies()
        .into_iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| Error::UnknownStrategy(name.into()))
}

/// Solve with the named strategy (`"auto"` tries each supporting strategy
/// in priority order, sharing the budget).
pub fn solve(problem: &KroneckerProblem, strategy_name: &str, budget: u64) -> Result<KroneckerSolution> {
    problem.validate()?;
    let mut search = Search::new(problem, budget);
    let zero = HpReal::zero(crate::precision::DEFAULT_BITS);
    if search.offer(zero) {
        return Ok(search.finish("trivial"));
    }
    let chosen: Vec<Box<dyn KroneckerStrategy>> = if strategy_name == "auto" {
        strategies().into_iter().filter(|s| s.supports(problem)).collect()
    } else {
        let s = strategy(strategy_name)?;
        if !s.supports(problem) {
            return Err(Error::Invalid(format!(
                "strategy {strategy_name:?} does not support L = {}",
                problem.dim()
            )));
        }
        vec![s]
    };
    let mut used = String::from(strategy_name);
    for s in chosen {
        used = s.name().to_string();
        s.run(&mut search)?;
        if search.found() || search.budget.exhausted() {
            break;
        }
    }
    Ok(search.finish(&used))
}

/// Shift `τ` inside `[τ0 − h, τ0 + h]` to the point that best clears every
/// tolerance, using the exact interval structure of each coordinate.
pub(crate) fn refine(problem: &KroneckerProblem, tau0: &HpReal, h: f64) -> HpReal {
    let bits = phase_bits(tau0) + 64;
    let alphas = problem.alphas(bits);
    let turns = problem.target_turns(bits);
    let tau = tau0.with_bits(bits);
    // phase offset of each coordinate at τ0, centered in (−1/2, 1/2]
    let base: Vec<f64> = alphas
        .iter()
        .zip(&turns)
        .map(|(a, t)| a.mul(&tau).sub(t).centered_frac())
        .collect();
    let af: Vec<f64> = alphas.iter().map(HpReal::to_f64).collect();
    // admissible Δ intervals per coordinate within [−h, h]
    let mut feasible: Vec<(f64, f64)> = vec![(-h, h)];
    for l in 0..problem.dim() {
        let (a, b, d) = (af[l], base[l], problem.deltas[l]);
        let mut ivs = Vec::new();
        // b + aΔ ∈ (j − d, j + d)
        let (lo_v, hi_v) = if a > 0.0 { (b - a * h, b + a * h) } else { (b + a * h, b - a * h) };
        let j0 = (lo_v - d).floor() as i64;
        let j1 = (hi_v + d).ceil() as i64;
        if j1 - j0 > 64 {
            continue; // coordinate wraps many times inside the window
        }
        for j in j0..=j1 {
            let (x, y) = ((j as f64 - d - b) / a, (j as f64 + d - b) / a);
            let (x, y) = if x < y { (x, y) } else { (y, x) };
            ivs.push((x.max(-h), y.min(h)));
        }
        let mut next = Vec::new();
        for &(p, q) in &feasible {
            for &(x, y) in &ivs {
                let (lo, hi) = (p.max(x), q.min(y));
                if lo < hi {
                    next.push((lo, hi));
                }
            }
        }
        if next.is_empty() {
            return tau0.clone();
        }
        feasible = next;
    }
    let (lo, hi) = feasible
        .into_iter()
        .max_by(|a, b| (a.1 - a.0).total_cmp(&(b.1 - b.0)))
        .expect("nonempty");
    tau.add(&HpReal::from_f64((lo + hi) / 2.0, bits))
}

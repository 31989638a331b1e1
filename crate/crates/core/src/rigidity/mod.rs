//! Translates `F(s+iτ)` approximating vector-equivalent targets on compact
//! sets: error budgets, translate search and verification, density of good
//! translates, strip convergence, and value-set checks.

pub mod winding;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::TAU;

use crate::equivalence::{detect_twist, DetectOptions, DetectOutcome};
use crate::error::{Error, Result};
use crate::exponents::{common_denominator, phase_bits, scaled_row, ExponentSpec, DEFAULT_DENOMINATOR_CAP};
use crate::kronecker::{self, KroneckerProblem, SolveStatus};
use crate::precision::HpReal;
use crate::series::{tail_bound, DirichletSeries};
use crate::twist::TwistVector;

pub use winding::{
    value_set_check, winding_number, winding_number_of, ProbeReport, ProbeStatus, ValueSetOptions, ValueSetReport,
};

/// Largest tolerance handed to the Kronecker solver.
const DELTA_CAP: f64 = 0.45;
/// Most coordinates the budget will constrain.
const MAX_ACTIVE: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompactSet {
    Rectangle {
        sigma_min: f64,
        sigma_max: f64,
        t_min: f64,
        t_max: f64,
    },
    Disk { center: [f64; 2], radius: f64 },
}

impl CompactSet {
    pub fn rectangle(sigma_min: f64, sigma_max: f64, t_min: f64, t_max: f64) -> Result<Self> {
        let k = CompactSet::Rectangle {
            sigma_min,
            sigma_max,
            t_min,
            t_max,
        };
        k.validate()?;
        Ok(k)
    }

    pub fn disk(center: Complex64, radius: f64) -> Result<Self> {
        let k = CompactSet::Disk {
            center: [center.re, center.im],
            radius,
        };
        k.validate()?;
        Ok(k)
    }

    /// Parse `"σ0,σ1,t0,t1"`.
    pub fn parse_rectangle(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{x:?}: {e}"))))
            .collect::<Result<_>>()?;
        if v.len() != 4 {
            return Err(Error::Parse(format!("rectangle needs 4 numbers, got {}", v.len())));
        }
        Self::rectangle(v[0], v[1], v[2], v[3])
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            CompactSet::Rectangle {
                sigma_min,
                sigma_max,
                t_min,
                t_max,
            } => [sigma_min, sigma_max, t_min, t_max].iter().all(|x| x.is_finite()) && sigma_min < sigma_max && t_min < t_max,
            CompactSet::Disk { center, radius } => center.iter().all(|x| x.is_finite()) && radius > 0.0 && radius.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!("compact set {self:?} needs nonempty interior")))
        }
    }

    /// `(σ_min, σ_max, t_min, t_max)` of the bounding box.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        match *self {
            CompactSet::Rectangle {
                sigma_min,
                sigma_max,
                t_min,
                t_max,
            } => (sigma_min, sigma_max, t_min, t_max),
            CompactSet::Disk { center, radius } => (
                center[0] - radius,
                center[0] + radius,
                center[1] - radius,
                center[1] + radius,
            ),
        }
    }

    pub fn sigma_min(&self) -> f64 {
        self.bounds().0
    }

    pub fn sigma_max(&self) -> f64 {
        self.bounds().1
    }

    /// The set moved by `i·dt`.
    pub fn shifted(&self, dt: f64) -> Self {
        match *self {
            CompactSet::Rectangle {
                sigma_min,
                sigma_max,
                t_min,
                t_max,
            } => CompactSet::Rectangle {
                sigma_min,
                sigma_max,
                t_min: t_min + dt,
                t_max: t_max + dt,
            },
            CompactSet::Disk { center, radius } => CompactSet::Disk {
                center: [center[0], center[1] + dt],
                radius,
            },
        }
    }

    fn check_against(&self, series: &DirichletSeries) -> Result<()> {
        if !(self.sigma_min() > series.threshold()) {
            return Err(Error::BelowThreshold {
                sigma: self.sigma_min(),
                threshold: series.threshold(),
            });
        }
        Ok(())
    }
}

/// One recorded inequality `value < bound` (or `≤` when `strict` is false).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainStep {
    pub claim: String,
    pub value: f64,
    pub bound: f64,
    pub strict: bool,
}

impl ChainStep {
    fn new(claim: impl Into<String>, value: f64, bound: f64, strict: bool) -> Self {
        ChainStep {
            claim: claim.into(),
            value,
            bound,
            strict,
        }
    }

    pub fn holds(&self) -> bool {
        if self.strict {
            self.value < self.bound
        } else {
            self.value <= self.bound
        }
    }
}

/// Truncation, tolerances and the inequality chain that turns per-coordinate
/// Kronecker distances into a bound below `ε`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub epsilon: f64,
    /// Truncation index.
    pub m: u64,
    /// `max_{n≤M} Σ_ℓ |r_{n,ℓ}|`.
    pub c: f64,
    /// `max_j Σ_{n≤M} |a_j(n)|e^{-λ_nσ}` over the sets.
    pub h: f64,
    /// Common denominator of rows `1..=M`.
    pub q: u64,
    pub active_coords: Vec<usize>,
    /// Tolerances aligned with `active_coords`.
    pub deltas: Vec<f64>,
    /// Largest tolerance, the scalar summary of `deltas`.
    pub delta: f64,
    /// Per-j bound on each of the two tails past `M`.
    pub tails: Vec<f64>,
    /// Bound on `Σ_{n≤M}|a(n)||e^{-iλ_nτ} − e^{i(RY)_n}|e^{-λ_nσ}` implied
    /// by the tolerances.
    pub phase_bound: f64,
    /// Factor by which the tolerances were widened from the guaranteed ones.
    pub kappa: f64,
    pub chain: Vec<ChainStep>,
}

impl ErrorBudget {
    /// Re-evaluate every recorded inequality.
    pub fn audit(&self) -> bool {
        self.chain.iter().all(ChainStep::holds)
    }
}

/// Per-term data shared by budgeting and verification.
struct Rows {
    /// `m_{n,ℓ} = Q r_{n,ℓ}` for `n ≤ M`.
    scaled: Vec<Vec<(usize, i64)>>,
    /// `max_j |a_j(n)| e^{-λ_nσ}` over the sets.
    weights: Vec<f64>,
    q: u64,
    c: f64,
    h: f64,
}

fn term_weight(lambda: f64, abs: f64, sets: &[&CompactSet]) -> f64 {
    sets.iter()
        .map(|k| {
            let sigma = if lambda >= 0.0 { k.sigma_min() } else { k.sigma_max() };
            abs * (-lambda * sigma).exp()
        })
        .fold(0.0, f64::max)
}

fn shared_spec<'a>(f_list: &'a [DirichletSeries], g_list: &[DirichletSeries]) -> Result<&'a ExponentSpec> {
    let first = f_list
        .first()
        .ok_or_else(|| Error::Invalid("need at least one series".into()))?;
    let spec = first.exponents();
    for s in f_list.iter().chain(g_list) {
        let other = s.exponents();
        if other.len() != spec.len() {
            return Err(Error::Invalid("all series must share one exponent spec".into()));
        }
        let probe = spec.len().min(64);
        for n in 1..=probe {
            if (other.lambda(n) - spec.lambda(n)).abs() > 1e-12 * spec.lambda(n).abs().max(1.0) {
                return Err(Error::Invalid(format!("exponent spec mismatch at n = {n}")));
            }
        }
    }
    Ok(spec)
}

fn rows_for(f_list: &[DirichletSeries], k_list: &[CompactSet], m: u64) -> Result<Rows> {
    let spec = f_list[0].exponents();
    let matrix = spec.matrix()?;
    let q = common_denominator(&matrix, m, DEFAULT_DENOMINATOR_CAP)?;
    let sets: Vec<&CompactSet> = k_list.iter().collect();
    let lambdas = spec.lambdas(m);
    let mut scaled = Vec::with_capacity(m as usize);
    let mut weights = Vec::with_capacity(m as usize);
    let mut c = 0.0f64;
    let mut h = vec![0.0f64; f_list.len()];
    for n in 1..=m {
        let row = matrix.row(n)?;
        c = c.max(row.iter().map(|(_, r)| crate::exponents::rational_f64(r).abs()).sum());
        scaled.push(scaled_row(&row, q)?);
        let mut w = 0.0f64;
        for (j, f) in f_list.iter().enumerate() {
            let a = f.coeff(n)?.norm();
            let wj = term_weight(lambdas[n as usize - 1], a, &[&k_list[j]]);
            h[j] += wj;
            w = w.max(term_weight(lambdas[n as usize - 1], a, &sets[j..=j]));
        }
        weights.push(w);
    }
    Ok(Rows {
        scaled,
        weights,
        q,
        c,
        h: h.into_iter().fold(0.0, f64::max),
    })
}

/// `Σ_n w_n min(2, 2π Σ_ℓ |m_{n,ℓ}| δ_ℓ)` with unconstrained coordinates
/// contributing the trivial bound 2.
fn phase_bound(rows: &Rows, deltas: &BTreeMap<usize, f64>) -> f64 {
    rows.scaled
        .iter()
        .zip(&rows.weights)
        .map(|(row, w)| {
            let mut s = 0.0;
            for &(l, m) in row {
                match deltas.get(&l) {
                    Some(d) => s += m.unsigned_abs() as f64 * d,
                    None => return 2.0 * w,
                }
            }
            w * (TAU * s).min(2.0)
        })
        .sum()
}

/// Tolerances minimizing `Σ −log(2δ_ℓ)` under the linearized phase budget `b`.
fn allocate(rows: &Rows, b: f64) -> Option<BTreeMap<usize, f64>> {
    let mut influence: BTreeMap<usize, f64> = BTreeMap::new();
    for (row, w) in rows.scaled.iter().zip(&rows.weights) {
        for &(l, m) in row {
            *influence.entry(l).or_default() += w * m.unsigned_abs() as f64;
        }
    }
    let mut order: Vec<(usize, f64)> = influence.into_iter().collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut best: Option<(f64, BTreeMap<usize, f64>)> = None;
    for count in 0..=order.len().min(MAX_ACTIVE) {
        let active: Vec<(usize, f64)> = order[..count].to_vec();
        let probe: BTreeMap<usize, f64> = active.iter().map(|&(l, _)| (l, 0.0)).collect();
        let inactive_cost = phase_bound(rows, &probe);
        let mut room = b - inactive_cost;
        if room <= 0.0 {
            continue;
        }
        // water-filling with the cap
        let mut deltas: BTreeMap<usize, f64> = BTreeMap::new();
        let mut free: Vec<(usize, f64)> = active.clone();
        loop {
            if free.is_empty() {
                break;
            }
            let share = room / free.len() as f64;
            let (capped, rest): (Vec<_>, Vec<_>) = free.iter().partition(|(_, w)| share / (TAU * w) >= DELTA_CAP);
            if capped.is_empty() {
                for (l, w) in rest {
                    deltas.insert(l, share / (TAU * w));
                }
                break;
            }
            for (l, w) in capped {
                deltas.insert(l, DELTA_CAP);
                room -= TAU * w * DELTA_CAP;
            }
            free = rest;
        }
        if phase_bound(rows, &deltas) > b {
            continue;
        }
        let cost: f64 = deltas.values().map(|d| -(2.0 * d).log2()).sum();
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, deltas));
        }
    }
    best.map(|(_, d)| d)
}

fn truncation_index(f_list: &[DirichletSeries], g_list: &[DirichletSeries], k_list: &[CompactSet], target: f64) -> Result<u64> {
    let mut m = 1u64;
    for (j, f) in f_list.iter().chain(g_list).enumerate() {
        let k = &k_list[j % k_list.len()];
        let (mj, _) = crate::series::truncation_for(f, k.sigma_min(), target)?;
        m = m.max(mj);
    }
    Ok(m)
}

fn tails_at(f_list: &[DirichletSeries], g_list: &[DirichletSeries], k_list: &[CompactSet], m: u64) -> Vec<f64> {
    f_list
        .iter()
        .zip(g_list)
        .zip(k_list)
        .map(|((f, g), k)| tail_bound(f, m, k.sigma_min()).max(tail_bound(g, m, k.sigma_min())))
        .collect()
}

fn build_budget(rows: &Rows, m: u64, tails: Vec<f64>, epsilon: f64, deltas: BTreeMap<usize, f64>, kappa: f64) -> ErrorBudget {
    let phase = phase_bound(rows, &deltas);
    let worst_tail = tails.iter().copied().fold(0.0, f64::max);
    let mut chain = Vec::new();
    for (j, t) in tails.iter().enumerate() {
        chain.push(ChainStep::new(format!("tail_{j}(M) < eps/4"), *t, epsilon / 4.0, true));
    }
    chain.push(ChainStep::new(
        "sum_n w_n min(2, 2pi sum_l |m_nl| delta_l) <= eps/2",
        phase,
        epsilon / 2.0,
        false,
    ));
    chain.push(ChainStep::new("2 tail + phase < eps", 2.0 * worst_tail + phase, epsilon, true));
    let (active_coords, deltas): (Vec<usize>, Vec<f64>) = deltas.into_iter().unzip();
    ErrorBudget {
        epsilon,
        m,
        c: rows.c,
        h: rows.h,
        q: rows.q,
        delta: deltas.iter().copied().fold(0.0, f64::max),
        active_coords,
        deltas,
        tails,
        phase_bound: phase,
        kappa,
        chain,
    }
}

/// Truncation and Kronecker tolerances guaranteeing a translate error `< ε`
/// on every set for any `τ` meeting the tolerances.
pub fn error_budget(f_list: &[DirichletSeries], k_list: &[CompactSet], epsilon: f64) -> Result<ErrorBudget> {
    budget_pair(f_list, f_list, k_list, epsilon)
}

fn budget_pair(f_list: &[DirichletSeries], g_list: &[DirichletSeries], k_list: &[CompactSet], epsilon: f64) -> Result<ErrorBudget> {
    check_inputs(f_list, g_list, k_list)?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    shared_spec(f_list, g_list)?;
    // strictly below ε/4 with a little room for rounding
    let m = truncation_index(f_list, g_list, k_list, epsilon / 4.0 * (1.0 - 1e-9))?;
    let tails = tails_at(f_list, g_list, k_list, m);
    let rows = rows_for(f_list, k_list, m)?;
    let worst_tail = tails.iter().copied().fold(0.0, f64::max);
    let room = (epsilon / 2.0).min(epsilon - 2.0 * worst_tail) * (1.0 - 1e-9);
    let deltas = allocate(&rows, room).ok_or_else(|| {
        Error::Invalid(format!("no tolerance allocation reaches eps = {epsilon} with at most {MAX_ACTIVE} coordinates"))
    })?;
    Ok(build_budget(&rows, m, tails, epsilon, deltas, 1.0))
}

fn check_inputs(f_list: &[DirichletSeries], g_list: &[DirichletSeries], k_list: &[CompactSet]) -> Result<()> {
    if f_list.is_empty() || f_list.len() != g_list.len() || f_list.len() != k_list.len() {
        return Err(Error::Invalid("series lists and sets must be nonempty and aligned".into()));
    }
    for ((f, g), k) in f_list.iter().zip(g_list).zip(k_list) {
        k.validate()?;
        k.check_against(f)?;
        k.check_against(g)?;
    }
    Ok(())
}

/// Grid resolution for sampled verification.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SamplingOptions {
    /// Target for the Lipschitz sampling slack, as a fraction of `ε`.
    pub slack_fraction: f64,
    /// Absolute slack target used when no `ε` is given.
    pub slack: f64,
    pub max_points: usize,
    /// Grid density multiplier; 2 doubles the points per axis.
    pub refinement: usize,
    /// Extra precision bits for the translate phases.
    pub extra_bits: usize,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        SamplingOptions {
            slack_fraction: 0.1,
            slack: 1e-3,
            max_points: 2_000_000,
            refinement: 1,
            extra_bits: 0,
        }
    }
}

/// The grid actually used on one set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingRecord {
    pub n_sigma: usize,
    pub n_t: usize,
    pub lipschitz: f64,
    pub slack: f64,
    pub phase_bits: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JError {
    /// Max over the grid of `|F_M(s+iτ) − f_M(s)|`.
    pub sampled_sup: f64,
    pub sampling_slack: f64,
    /// `Σ_{n≤M} |a(n)e^{-iλ_nτ} − b(n)| e^{-λ_nσ}`, a bound free of sampling.
    pub termwise_bound: f64,
    /// Tails of both series past `M`.
    pub tail_slack: f64,
    /// `min(sampled_sup + sampling_slack, termwise_bound) + tail_slack`.
    pub total: f64,
    pub argmax: [f64; 2],
    pub sampling: SamplingRecord,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub tau: HpReal,
    pub m: u64,
    pub per_j: Vec<JError>,
    pub max_total: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Truncation index; chosen from `tail_accuracy` when absent.
    pub truncation: Option<u64>,
    pub tail_accuracy: f64,
    pub sampling: SamplingOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            truncation: None,
            tail_accuracy: 1e-4,
            sampling: SamplingOptions::default(),
        }
    }
}

/// `e^{-iλ_nτ}`, `n ≤ m`, at `extra` bits above the default precision.
pub fn translate_phases(spec: &ExponentSpec, m: u64, tau: &HpReal, extra: usize) -> Result<Vec<Complex64>> {
    if extra == 0 {
        return spec.shift_phases(m, tau);
    }
    let bits = phase_bits(tau) + extra;
    let turns = tau.with_bits(bits).div(&HpReal::two_pi(bits));
    (1..=m.min(spec.len()))
        .into_par_iter()
        .map(|n| {
            let f = spec.realize(n, bits)?.mul(&turns).frac_f64();
            Ok(Complex64::from_polar(1.0, -TAU * f))
        })
        .collect()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![(a + b) / 2.0];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Sup of `|Σ c_n e^{-λ_n s}|` over a grid on `k`, plus the slack covering
/// the rest of `k`.
fn sampled_sup(lambdas: &[f64], c: &[Complex64], k: &CompactSet, slack_target: f64, opts: &SamplingOptions, bits: usize) -> (f64, [f64; 2], SamplingRecord) {
    let (s0, s1, t0, t1) = k.bounds();
    let lip: f64 = lambdas
        .iter()
        .zip(c)
        .map(|(&l, a)| l.abs() * term_weight(l, a.norm(), &[k]))
        .sum();
    // spacing h per axis gives slack lip·h/√2
    let mut h = if lip > 0.0 { slack_target * std::f64::consts::SQRT_2 / lip } else { (s1 - s0).max(t1 - t0) };
    let count = |h: f64, w: f64| ((w / h).ceil() as usize + 1).max(2);
    while count(h, s1 - s0) * count(h, t1 - t0) > opts.max_points {
        h *= 1.25;
    }
    let r = opts.refinement.max(1);
    let (ns, nt) = ((count(h, s1 - s0) - 1) * r + 1, (count(h, t1 - t0) - 1) * r + 1);
    let sig = linspace(s0, s1, ns);
    let ts = linspace(t0, t1, nt);
    let hs = if ns > 1 { (s1 - s0) / (ns - 1) as f64 } else { 0.0 };
    let ht = if nt > 1 { (t1 - t0) / (nt - 1) as f64 } else { 0.0 };
    let slack = lip * (hs * hs + ht * ht).sqrt() / 2.0;
    let inside = |s: f64, t: f64| match *k {
        CompactSet::Disk { center, radius } => {
            // keep every grid point whose cell meets the disk
            let d = ((s - center[0]).powi(2) + (t - center[1]).powi(2)).sqrt();
            d <= radius + (hs * hs + ht * ht).sqrt()
        }
        CompactSet::Rectangle { .. } => true,
    };
    let best = sig
        .par_iter()
        .map(|&s| {
            let decay: Vec<Complex64> = lambdas.iter().zip(c).map(|(&l, &a)| a * (-l * s).exp()).collect();
            let mut local = (0.0f64, [s, 0.0]);
            for &t in &ts {
                if !inside(s, t) {
                    continue;
                }
                let v = crate::series::neumaier(
                    lambdas.iter().zip(&decay).map(|(&l, &d)| d * Complex64::from_polar(1.0, -l * t)),
                )
                .norm();
                if v > local.0 {
                    local = (v, [s, t]);
                }
            }
            local
        })
        .reduce(|| (0.0, [f64::NAN, f64::NAN]), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1[0] < a.1[0]) { b } else { a });
    (
        best.0,
        best.1,
        SamplingRecord {
            n_sigma: ns,
            n_t: nt,
            lipschitz: lip,
            slack,
            phase_bits: bits,
        },
    )
}

fn verify_inner(
    f_list: &[DirichletSeries],
    g_list: &[DirichletSeries],
    k_list: &[CompactSet],
    tau: &HpReal,
    m: u64,
    slack_target: f64,
    opts: &SamplingOptions,
) -> Result<VerifyReport> {
    let spec = shared_spec(f_list, g_list)?;
    let m = m.min(spec.len());
    let phases = translate_phases(spec, m, tau, opts.extra_bits)?;
    let bits = phase_bits(tau) + opts.extra_bits;
    let lambdas = spec.lambdas(m);
    let mut per_j = Vec::with_capacity(f_list.len());
    for ((f, g), k) in f_list.iter().zip(g_list).zip(k_list) {
        let a = f.truncation(m)?;
        let b = g.truncation(m)?;
        let c: Vec<Complex64> = a.coeffs.iter().zip(&b.coeffs).zip(&phases).map(|((x, y), p)| x * p - y).collect();
        let termwise: f64 = lambdas.iter().zip(&c).map(|(&l, x)| term_weight(l, x.norm(), &[k])).sum();
        let (sup, argmax, sampling) = sampled_sup(&lambdas, &c, k, slack_target, opts, bits);
        let tail = tail_bound(f, m, k.sigma_min()) + tail_bound(g, m, k.sigma_min());
        let total = (sup + sampling.slack).min(termwise) + tail;
        per_j.push(JError {
            sampled_sup: sup,
            sampling_slack: sampling.slack,
            termwise_bound: termwise,
            tail_slack: tail,
            total,
            argmax,
            sampling,
        });
    }
    let max_total = per_j.iter().map(|e| e.total).fold(0.0, f64::max);
    Ok(VerifyReport {
        tau: tau.clone(),
        m,
        per_j,
        max_total,
    })
}

/// Sampled `max_{s∈K_j} |F_j(s+iτ) − f_j(s)|` with rigorous slack.
pub fn verify_translate(
    f_list: &[DirichletSeries],
    g_list: &[DirichletSeries],
    k_list: &[CompactSet],
    tau: &HpReal,
    opts: &VerifyOptions,
) -> Result<VerifyReport> {
    check_inputs(f_list, g_list, k_list)?;
    let m = match opts.truncation {
        Some(m) => m,
        None => truncation_index(f_list, g_list, k_list, opts.tail_accuracy)?,
    };
    verify_inner(f_list, g_list, k_list, tau, m, opts.sampling.slack, &opts.sampling)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    Verified,
    Failed,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KroneckerRecord {
    pub strategy: String,
    pub evaluations: u64,
    pub max_ratio: f64,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TranslateCertificate {
    pub status: CertificateStatus,
    pub epsilon: f64,
    pub tau: HpReal,
    pub sup_error_per_j: Vec<f64>,
    pub tail_used: Vec<f64>,
    pub total_per_j: Vec<f64>,
    pub budget: ErrorBudget,
    pub twist: TwistVector,
    pub report: VerifyReport,
    pub kronecker: Option<KroneckerRecord>,
    pub sampling: SamplingOptions,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TranslateOptions {
    pub strategy: String,
    /// Kronecker evaluations per attempt.
    pub budget: u64,
    /// Tolerance widening factors tried in order; 1 is the guaranteed budget.
    pub kappas: Vec<f64>,
    pub sampling: SamplingOptions,
    pub detect: DetectOptions,
    /// Rows compared when recovering a common twist.
    pub detect_limit: u64,
}

impl Default for TranslateOptions {
    fn default() -> Self {
        TranslateOptions {
            strategy: "auto".into(),
            budget: kronecker::DEFAULT_BUDGET,
            kappas: vec![8.0, 4.0, 2.0, 1.0],
            sampling: SamplingOptions::default(),
            detect: DetectOptions::default(),
            detect_limit: 2000,
        }
    }
}

/// A twist `Y` with `g_j = twist(f_j, Y)` for every `j`.
pub fn common_twist(f_list: &[DirichletSeries], g_list: &[DirichletSeries], n_limit: u64, opts: &DetectOptions) -> Result<TwistVector> {
    let mut fixed: BTreeMap<usize, f64> = BTreeMap::new();
    let mut period = 1u64;
    let mut len = 0usize;
    for (f, g) in f_list.iter().zip(g_list) {
        match detect_twist(f, g, n_limit, opts)? {
            DetectOutcome::Incompatible { reason } => {
                return Err(Error::Incompatible(serde_json::to_string(&reason)?));
            }
            DetectOutcome::Equivalent {
                y, free_coordinates, ..
            } => {
                period = num_integer::lcm(period, y.period());
                len = len.max(y.len());
                for (l, &v) in y.angles().iter().enumerate() {
                    if free_coordinates.contains(&l) {
                        continue;
                    }
                    if let Some(&old) = fixed.get(&l) {
                        let p = TAU * period as f64;
                        let d = (v - old).rem_euclid(p);
                        if d.min(p - d) > 1e-6 {
                            return Err(Error::Incompatible(format!(
                                "coordinate {l} needs {old} and {v} for different series"
                            )));
                        }
                    } else {
                        fixed.insert(l, v);
                    }
                }
            }
        }
    }
    let mut angles = vec![0.0; len];
    for (l, v) in fixed {
        angles[l] = v;
    }
    let y = TwistVector::with_period_from(angles, true, period);
    // the merged vector must reproduce every target
    let spec = f_list[0].exponents();
    let matrix = spec.matrix()?;
    for (f, g) in f_list.iter().zip(g_list) {
        for n in 1..=n_limit.min(spec.len()) {
            let (a, b) = (f.coeff(n)?, g.coeff(n)?);
            let want = a * Complex64::from_polar(1.0, y.phase(&matrix.row(n)?, n)?);
            if (want - b).norm() > 1e-6 * a.norm().max(1e-300) {
                return Err(Error::Incompatible(format!("merged twist misses row {n}")));
            }
        }
    }
    Ok(y)
}

fn widen(budget: &ErrorBudget, kappa: f64) -> BTreeMap<usize, f64> {
    budget
        .active_coords
        .iter()
        .zip(&budget.deltas)
        .map(|(&l, &d)| (l, (d * kappa).min(DELTA_CAP)))
        .collect()
}

/// Search for `τ` with `max_j max_{s∈K_j} |F_j(s+iτ) − f_j(s)| < ε`.
pub fn find_translate(
    f_list: &[DirichletSeries],
    g_list: &[DirichletSeries],
    k_list: &[CompactSet],
    epsilon: f64,
    twist: Option<&TwistVector>,
    opts: &TranslateOptions,
) -> Result<TranslateCertificate> {
    let base = budget_pair(f_list, g_list, k_list, epsilon)?;
    let y = match twist {
        Some(y) => y.clone(),
        None => common_twist(f_list, g_list, opts.detect_limit.max(base.m), &opts.detect)?,
    };
    let spec = f_list[0].exponents();
    let rows = rows_for(f_list, k_list, base.m)?;
    let slack = epsilon * opts.sampling.slack_fraction;
    let mut last: Option<TranslateCertificate> = None;
    let mut kappas = opts.kappas.clone();
    if !kappas.contains(&1.0) {
        kappas.push(1.0);
    }
    let mut evaluations = 0u64;
    let mut any_found = false;
    for kappa in kappas {
        let deltas = widen(&base, kappa);
        let budget = build_budget(&rows, base.m, base.tails.clone(), epsilon, deltas, kappa);
        let (tau, record) = if budget.active_coords.is_empty() {
            (HpReal::zero(crate::precision::DEFAULT_BITS), None)
        } else {
            let bits = 256;
            let freqs: Vec<HpReal> = budget
                .active_coords
                .iter()
                .map(|&l| spec.generator(l).map(|g| g.value(bits)))
                .collect::<Result<_>>()?;
            let targets: Vec<f64> = budget
                .active_coords
                .iter()
                .map(|&l| y.angle(l).ok_or(Error::TwistTooShort { n: 0, generator: l, len: y.len() }))
                .collect::<Result<_>>()?;
            let problem = KroneckerProblem::with_deltas(freqs, targets, budget.q, budget.deltas.clone())?;
            let sol = kronecker::solve(&problem, &opts.strategy, opts.budget)?;
            evaluations += sol.evaluations;
            log::info!(
                "kappa {kappa}: {} coordinates, {:?} via {} (ratio {:.3})",
                problem.dim(),
                sol.status,
                sol.strategy,
                sol.max_ratio
            );
            if sol.status != SolveStatus::Found {
                continue;
            }
            let rec = KroneckerRecord {
                strategy: sol.strategy,
                evaluations: sol.evaluations,
                max_ratio: sol.max_ratio,
                dim: problem.dim(),
            };
            (sol.tau, Some(rec))
        };
        any_found = true;
        let report = verify_inner(f_list, g_list, k_list, &tau, budget.m, slack, &opts.sampling)?;
        let verified = report.max_total < epsilon;
        let cert = TranslateCertificate {
            status: if verified { CertificateStatus::Verified } else { CertificateStatus::Failed },
            epsilon,
            tau,
            sup_error_per_j: report.per_j.iter().map(|e| e.sampled_sup).collect(),
            tail_used: report.per_j.iter().map(|e| e.tail_slack).collect(),
            total_per_j: report.per_j.iter().map(|e| e.total).collect(),
            budget,
            twist: y.clone(),
            report,
            kronecker: record,
            sampling: opts.sampling.clone(),
        };
        if verified {
            return Ok(cert);
        }
        last = Some(cert);
    }
    match last {
        Some(c) => Ok(c),
        None if !any_found => Err(Error::BudgetExhausted { evaluations }),
        None => unreachable!(),
    }
}

/// Independent check of a certificate: fresh grid at twice the density and
/// phases at twice the precision.
pub fn reverify(f_list: &[DirichletSeries], g_list: &[DirichletSeries], k_list: &[CompactSet], cert: &TranslateCertificate) -> Result<VerifyReport> {
    let mut sampling = cert.sampling.clone();
    sampling.refinement = sampling.refinement.max(1) * 2 + 1;
    sampling.extra_bits = phase_bits(&cert.tau);
    verify_inner(
        f_list,
        g_list,
        k_list,
        &cert.tau,
        cert.budget.m,
        cert.epsilon * sampling.slack_fraction,
        &sampling,
    )
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensitySample {
    pub tau: f64,
    pub max_error: f64,
    pub passes: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TranslateDensity {
    pub estimate: f64,
    pub hits: u64,
    pub samples: u64,
    pub t_max: f64,
    pub seed: u64,
    pub std_error: f64,
    pub m: u64,
    pub rows: Vec<DensitySample>,
}

impl TranslateDensity {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("tau,max_error,passes\n");
        for r in &self.rows {
            s.push_str(&format!("{:.16e},{:.16e},{}\n", r.tau, r.max_error, r.passes as u8));
        }
        s
    }
}

/// Share of `τ ∈ [−T, T]` passing verification at level `ε`.
///
/// A sample passes when the termwise bound plus tails is below `ε`, or when
/// the sampled sup plus slack is.
#[allow(clippy::too_many_arguments)]
pub fn density_of_translates(
    f_list: &[DirichletSeries],
    g_list: &[DirichletSeries],
    k_list: &[CompactSet],
    epsilon: f64,
    t_max: f64,
    samples: u64,
    seed: u64,
    sampling: &SamplingOptions,
) -> Result<TranslateDensity> {
    check_inputs(f_list, g_list, k_list)?;
    if samples == 0 || !(t_max > 0.0) {
        return Err(Error::Invalid("need T > 0 and at least one sample".into()));
    }
    let spec = shared_spec(f_list, g_list)?;
    let m = truncation_index(f_list, g_list, k_list, epsilon / 4.0)?.min(spec.len());
    let lambdas = spec.lambdas(m);
    let pairs: Vec<(Vec<Complex64>, Vec<Complex64>)> = f_list
        .iter()
        .zip(g_list)
        .map(|(f, g)| Ok((f.truncation(m)?.coeffs, g.truncation(m)?.coeffs)))
        .collect::<Result<_>>()?;
    let tails: Vec<f64> = tails_at(f_list, g_list, k_list, m).iter().map(|t| 2.0 * t).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let taus: Vec<f64> = (0..samples).map(|_| rng.gen_range(-t_max..=t_max)).collect();
    let slack = epsilon * sampling.slack_fraction;
    let rows: Vec<(f64, f64, bool)> = taus
        .par_iter()
        .map(|&tau| {
            let phases: Vec<Complex64> = lambdas.iter().map(|&l| Complex64::from_polar(1.0, -l * tau)).collect();
            let mut worst = 0.0f64;
            let mut pass = true;
            for (j, (a, b)) in pairs.iter().enumerate() {
                let c: Vec<Complex64> = a.iter().zip(b).zip(&phases).map(|((x, y), p)| x * p - y).collect();
                let k = &k_list[j];
                let termwise: f64 = lambdas.iter().zip(&c).map(|(&l, x)| term_weight(l, x.norm(), &[k])).sum();
                let mut total = termwise + tails[j];
                if total >= epsilon {
                    // the value at the set's corner is a lower bound for the sup
                    let (s0, _, t0, _) = k.bounds();
                    let s = Complex64::new(s0, t0);
                    let v: f64 = c.iter().zip(&lambdas).map(|(x, &l)| x * (-l * s).exp()).sum::<Complex64>().norm();
                    if v < epsilon {
                        let (sup, _, rec) = sampled_sup(&lambdas, &c, k, slack, sampling, 53);
                        total = total.min(sup + rec.slack + tails[j]);
                    } else {
                        total = total.max(v);
                    }
                }
                worst = worst.max(total);
                pass &= total < epsilon;
            }
            (tau, worst, pass)
        })
        .collect();
    let hits = rows.iter().filter(|r| r.2).count() as u64;
    let estimate = hits as f64 / samples as f64;
    Ok(TranslateDensity {
        estimate,
        hits,
        samples,
        t_max,
        seed,
        std_error: (estimate * (1.0 - estimate) / samples as f64).sqrt(),
        m,
        rows: rows
            .into_iter()
            .map(|(tau, max_error, passes)| DensitySample { tau, max_error, passes })
            .collect(),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StripRow {
    pub k: usize,
    pub tau: HpReal,
    pub window: f64,
    pub sup_error: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StripReport {
    pub rows: Vec<StripRow>,
    /// Indices `k` whose worst error exceeds that of `k − 1`.
    pub trend_violations: Vec<usize>,
}

/// Sup errors of `F(s+iτ_k) − f(s)` on `[σ_min, σ_max] × [−W, W]` for each
/// `τ_k` and window half-width `W`.
pub fn strip_convergence(
    f: &DirichletSeries,
    g: &DirichletSeries,
    sigma: (f64, f64),
    windows: &[f64],
    taus: &[HpReal],
    opts: &VerifyOptions,
) -> Result<StripReport> {
    let mut rows = Vec::new();
    let mut worst = Vec::with_capacity(taus.len());
    for (k, tau) in taus.iter().enumerate() {
        let mut w_max = 0.0f64;
        for &w in windows {
            let set = CompactSet::rectangle(sigma.0, sigma.1, -w, w)?;
            let r = verify_translate(std::slice::from_ref(f), std::slice::from_ref(g), &[set], tau, opts)?;
            w_max = w_max.max(r.max_total);
            rows.push(StripRow {
                k: k + 1,
                tau: tau.clone(),
                window: w,
                sup_error: r.max_total,
            });
        }
        worst.push(w_max);
    }
    let trend_violations = (1..worst.len()).filter(|&k| worst[k] > worst[k - 1] * (1.0 + 1e-9)).map(|k| k + 1).collect();
    Ok(StripReport { rows, trend_violations })
}

//! General Dirichlet series `F(s) = Σ a(n)e^{-λ_n s}` with certified
//! truncation, and Kuniyeda window sums for the abscissa of uniform
//! convergence.
//!
//! A series is the finite sum over its exponent range `1..=N`; the tail
//! majorant bounds `Σ_{M<n≤N}|a(n)|e^{-λ_nσ}`.

use std::fmt::Write as _;
use std::ops::Range;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::Coefficients;
use crate::error::{Error, Result};
use crate::exponents::ExponentSpec;

/// Index count below which tail sums are computed term by term.
const DIRECT_TAIL_CAP: u64 = 2_000_000;
/// Relative padding applied to floating-point bounds.
const ROUNDING_PAD: f64 = 1e-12;

/// Declared bound on the coefficients past a truncation point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailMajorant {
    /// `|a(n)| ≤ A` for all `n`.
    UniformBound { a: f64 },
    /// `a(n) = 0` for `n > n`.
    FiniteSupport { n: u64 },
    /// `|a(n)| ≤ bound` for `start ≤ n ≤ end`; uncovered indices are unbounded.
    ListedBounds { blocks: Vec<Block> },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub start: u64,
    pub end: u64,
    pub bound: f64,
}

#[derive(Clone, Debug)]
pub struct DirichletSeries {
    pub label: String,
    exponents: ExponentSpec,
    coefficients: Coefficients,
    tail: TailMajorant,
    threshold: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub truncation_m: u64,
    pub tail_bound: f64,
}

impl DirichletSeries {
    /// `threshold` is the declared abscissa above which evaluation is allowed.
    pub fn new(
        label: impl Into<String>,
        exponents: ExponentSpec,
        coefficients: Coefficients,
        tail: TailMajorant,
        threshold: f64,
    ) -> Result<Self> {
        let s = DirichletSeries {
            label: label.into(),
            exponents,
            coefficients,
            tail,
            threshold,
        };
        s.spot_check_tail()?;
        Ok(s)
    }

    /// The default threshold for a majorant over a spec.
    pub fn default_threshold(exponents: &ExponentSpec, tail: &TailMajorant) -> f64 {
        match tail {
            TailMajorant::FiniteSupport { .. } => f64::NEG_INFINITY,
            _ if exponents.is_ordinary() => 1.0,
            _ => 0.0,
        }
    }

    fn spot_check_tail(&self) -> Result<()> {
        let upto = self.len().min(self.coefficients.available()).min(64);
        for n in 1..=upto {
            let a = self.coefficients.coeff(n)?.norm();
            let ok = match &self.tail {
                TailMajorant::UniformBound { a: bound } => a <= bound * (1.0 + 1e-12),
                TailMajorant::FiniteSupport { n: last } => n <= *last || a == 0.0,
                TailMajorant::ListedBounds { blocks } => blocks
                    .iter()
                    .filter(|b| (b.start..=b.end).contains(&n))
                    .all(|b| a <= b.bound * (1.0 + 1e-12)),
            };
            if !ok {
                return Err(Error::Invalid(format!(
                    "tail majorant inconsistent with |a({n})| = {a}"
                )));
            }
        }
        Ok(())
    }

    pub fn exponents(&self) -> &ExponentSpec {
        &self.exponents
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    pub fn tail(&self) -> &TailMajorant {
        &self.tail
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn len(&self) -> u64 {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Same exponents and majorant, new coefficients with equal moduli.
    pub fn with_coefficients(&self, label: impl Into<String>, coefficients: Coefficients) -> Self {
        DirichletSeries {
            label: label.into(),
            exponents: self.exponents.clone(),
            coefficients,
            tail: self.tail.clone(),
            threshold: self.threshold,
        }
    }

    /// `c·F`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        let tail = match &self.tail {
            TailMajorant::UniformBound { a } => TailMajorant::UniformBound { a: a * factor.norm() },
            TailMajorant::FiniteSupport { n } => TailMajorant::FiniteSupport { n: *n },
            TailMajorant::ListedBounds { blocks } => TailMajorant::ListedBounds {
                blocks: blocks
                    .iter()
                    .map(|b| Block {
                        bound: b.bound * factor.norm(),
                        ..*b
                    })
                    .collect(),
            },
        };
        DirichletSeries {
            label: format!("({factor})·{}", self.label),
            exponents: self.exponents.clone(),
            coefficients: Coefficients::Scaled {
                base: std::sync::Arc::new(self.coefficients.clone()),
                factor,
            },
            tail,
            threshold: self.threshold,
        }
    }

    pub fn coeff(&self, n: u64) -> Result<Complex64> {
        self.coefficients.coeff(n)
    }

    pub fn truncation(&self, m: u64) -> Result<Truncation> {
        Truncation::new(self, m)
    }
}

/// Upper bound for `Σ_{n=a}^{b} e^{-λ_nσ}`.
pub fn exp_sum_bound(spec: &ExponentSpec, a: u64, b: u64, sigma: f64) -> f64 {
    let b = b.min(spec.len());
    if a > b {
        return 0.0;
    }
    if b - a < DIRECT_TAIL_CAP || !spec.is_ordinary() {
        let s: f64 = (a..=b).map(|n| (-spec.lambda(n) * sigma).exp()).sum();
        return s * (1.0 + ROUNDING_PAD) + f64::MIN_POSITIVE;
    }
    // Σ n^{-σ} by the integral test
    let (af, bf) = (a as f64, b as f64);
    let integral = |lo: f64, hi: f64| {
        if (sigma - 1.0).abs() < 1e-15 {
            (hi / lo).ln()
        } else {
            (hi.powf(1.0 - sigma) - lo.powf(1.0 - sigma)) / (1.0 - sigma)
        }
    };
    let bound = if sigma >= 0.0 {
        af.powf(-sigma) + integral(af, bf)
    } else {
        integral(af, bf + 1.0)
    };
    bound * (1.0 + 1e-9)
}

/// Rigorous bound for `Σ_{M<n≤N}|a(n)|e^{-λ_nσ}`.
pub fn tail_bound(series: &DirichletSeries, m: u64, sigma: f64) -> f64 {
    let spec = series.exponents();
    let n = series.len();
    if m >= n {
        return 0.0;
    }
    match series.tail() {
        TailMajorant::UniformBound { a } => a * exp_sum_bound(spec, m + 1, n, sigma),
        TailMajorant::FiniteSupport { n: last } => {
            let end = (*last).min(n);
            if m >= end {
                return 0.0;
            }
            if end - m > DIRECT_TAIL_CAP || end > series.coefficients().available() {
                return f64::INFINITY;
            }
            let mut s = 0.0;
            for k in m + 1..=end {
                match series.coeff(k) {
                    Ok(c) => s += c.norm() * (-spec.lambda(k) * sigma).exp(),
                    Err(_) => return f64::INFINITY,
                }
            }
            s * (1.0 + ROUNDING_PAD)
        }
        TailMajorant::ListedBounds { blocks } => {
            let mut covered = m;
            let mut total = 0.0;
            let mut sorted = blocks.clone();
            sorted.sort_by_key(|b| b.start);
            for b in sorted {
                if b.end <= covered {
                    continue;
                }
                if b.start > covered + 1 {
                    return f64::INFINITY;
                }
                let hi = b.end.min(n);
                total += b.bound * exp_sum_bound(spec, covered + 1, hi, sigma);
                covered = hi;
                if covered >= n {
                    break;
                }
            }
            if covered < n {
                f64::INFINITY
            } else {
                total
            }
        }
    }
}

/// Smallest `M ≥ 1` whose tail bound at `sigma` is `≤ accuracy`.
pub fn truncation_for(series: &DirichletSeries, sigma: f64, accuracy: f64) -> Result<(u64, f64)> {
    let avail = series.len().min(series.coefficients().available());
    if avail == 0 {
        return Err(Error::MissingCoefficients { have: 0, need: 1 });
    }
    let best = tail_bound(series, avail, sigma);
    if !(best <= accuracy) {
        return Err(Error::AccuracyUnreachable {
            requested: accuracy,
            achieved: best,
            m: avail as usize,
        });
    }
    let (mut lo, mut hi) = (1u64, avail);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if tail_bound(series, mid, sigma) <= accuracy {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok((lo, tail_bound(series, lo, sigma)))
}

/// Partial sum `Σ_{n≤M} a(n)e^{-λ_n s}` with `tail_bound ≤ accuracy`.
pub fn evaluate(series: &DirichletSeries, s: Complex64, accuracy: f64) -> Result<EvalResult> {
    if !(s.re > series.threshold()) {
        return Err(Error::BelowThreshold {
            sigma: s.re,
            threshold: series.threshold(),
        });
    }
    if accuracy.is_nan() || accuracy <= 0.0 {
        return Err(Error::Invalid(format!("accuracy must be positive, got {accuracy}")));
    }
    let (m, tail) = truncation_for(series, s.re, accuracy)?;
    let value = Truncation::new(series, m)?.eval(s);
    Ok(EvalResult {
        value,
        truncation_m: m,
        tail_bound: tail,
    })
}

/// The first `M` terms, materialized for repeated evaluation.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub lambdas: Vec<f64>,
    pub coeffs: Vec<Complex64>,
}

impl Truncation {
    pub fn new(series: &DirichletSeries, m: u64) -> Result<Self> {
        let m = m.min(series.len());
        let coeffs: Vec<Complex64> = (1..=m)
            .into_par_iter()
            .map(|n| series.coeff(n))
            .collect::<Result<_>>()?;
        Ok(Truncation {
            lambdas: series.exponents().lambdas(m),
            coeffs,
        })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        neumaier(self.lambdas.iter().zip(&self.coeffs).map(|(&l, &a)| a * (-l * s).exp()))
    }

    /// `Σ a(n)·phase_n·e^{-λ_n s}`.
    pub fn eval_with_phases(&self, s: Complex64, phases: &[Complex64]) -> Complex64 {
        neumaier(
            self.lambdas
                .iter()
                .zip(&self.coeffs)
                .zip(phases)
                .map(|((&l, &a), &p)| a * p * (-l * s).exp()),
        )
    }

    /// `F'(s)` of the truncation.
    pub fn derivative(&self, s: Complex64) -> Complex64 {
        neumaier(self.lambdas.iter().zip(&self.coeffs).map(|(&l, &a)| -l * a * (-l * s).exp()))
    }

    /// `Σ|a(n)|e^{-λ_nσ}`.
    pub fn abs_sum(&self, sigma: f64) -> f64 {
        self.lambdas
            .iter()
            .zip(&self.coeffs)
            .map(|(&l, a)| a.norm() * (-l * sigma).exp())
            .sum()
    }

    /// `Σ|λ_n||a(n)|e^{-λ_nσ}`, a Lipschitz constant on `Re s ≥ σ`.
    pub fn lipschitz(&self, sigma: f64) -> f64 {
        self.lambdas
            .iter()
            .zip(&self.coeffs)
            .map(|(&l, a)| l.abs() * a.norm() * (-l * sigma).exp())
            .sum()
    }
}

/// Compensated complex summation.
pub fn neumaier(terms: impl Iterator<Item = Complex64>) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut c = Complex64::new(0.0, 0.0);
    for t in terms {
        let step = |s: f64, c: &mut f64, x: f64| {
            let u = s + x;
            if s.abs() >= x.abs() {
                *c += (s - u) + x;
            } else {
                *c += (x - u) + s;
            }
            u
        };
        sum.re = step(sum.re, &mut c.re, t.re);
        sum.im = step(sum.im, &mut c.im, t.im);
    }
    sum + c
}

/// How window suprema over `t` are sampled.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub points: usize,
    /// Half-width of the `t` range; derived from the window when absent.
    pub t_max: Option<f64>,
    pub refine: bool,
    /// Maximum term evaluations per window.
    pub work_budget: u64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan {
            points: 2048,
            t_max: None,
            refine: true,
            work_budget: 50_000_000,
        }
    }
}

/// Estimate of the Kuniyeda window supremum `T_x`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TxEstimate {
    pub x: f64,
    pub window: (u64, u64),
    pub terms: u64,
    /// Certified lower bound on the supremum.
    pub lower: f64,
    /// `Σ|a(n)|` over the window.
    pub upper: f64,
    pub t_best: Option<f64>,
    pub t_samples: usize,
    /// Value at the torus point undoing every twist, when available.
    pub torus_value: Option<f64>,
    pub empty_window: bool,
}

fn window_range(series: &DirichletSeries, x: f64) -> Range<u64> {
    let w = series.exponents().window(x.floor(), x);
    w.start..w.end.min(series.coefficients().available().saturating_add(1)).max(w.start)
}

/// `|Σ_{window} a(n)e^{-iλ_n t}|`.
fn window_abs(lambdas: &[f64], coeffs: &[Complex64], t: f64) -> f64 {
    neumaier(
        lambdas
            .iter()
            .zip(coeffs)
            .map(|(&l, &a)| a * Complex64::from_polar(1.0, -l * t)),
    )
    .norm()
}

/// Value at the torus point that undoes the twists of an integral-basis
/// stream: `|c·Σ base(n)|` over the window.
fn torus_value(series: &DirichletSeries, range: Range<u64>) -> Option<f64> {
    let d = series.coefficients().decompose();
    if d.has_phases || !d.twists.iter().all(|(_, m)| m.is_structurally_integral()) {
        return None;
    }
    if let Some(s) = d.base.base_range_sum(range.clone()) {
        return Some((d.factor * s).norm());
    }
    if range.end - range.start > DIRECT_TAIL_CAP {
        return None;
    }
    let mut acc = Vec::with_capacity((range.end - range.start) as usize);
    for n in range {
        acc.push(d.base.coeff(n).ok()?);
    }
    Some((d.factor * neumaier(acc.into_iter())).norm())
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Lower estimate of `T_x = sup_t |Σ_{⌊x⌋≤λ_n<x} a(n)e^{-iλ_n t}|` together
/// with the trivial upper bound `Σ|a(n)|`.
pub fn kuniyeda_tx(series: &DirichletSeries, x: f64, plan: &SamplingPlan) -> Result<TxEstimate> {
    let range = window_range(series, x);
    let terms = range.end - range.start;
    let mut est = TxEstimate {
        x,
        window: (range.start, range.end),
        terms,
        lower: 0.0,
        upper: 0.0,
        t_best: None,
        t_samples: 0,
        torus_value: None,
        empty_window: terms == 0,
    };
    if terms == 0 {
        log::warn!("Kuniyeda window [{}, {x}) is empty", x.floor());
        return Ok(est);
    }
    let majorant_upper = match series.tail() {
        TailMajorant::UniformBound { a } => a * terms as f64,
        _ => f64::INFINITY,
    };
    est.upper = series
        .coefficients()
        .range_abs_sum(range.clone())
        .unwrap_or(majorant_upper);

    est.torus_value = torus_value(series, range.clone());
    if let Some(v) = est.torus_value {
        est.lower = v;
    }

    let samples = (plan.work_budget / terms).min(plan.points as u64) as usize;
    // a handful of samples adds little to the torus value
    let min_samples = if est.torus_value.is_some() { 16 } else { 1 };
    if samples >= min_samples {
        let coeffs = series.coefficients().range(range.clone())?;
        let lambdas: Vec<f64> = (range.start..range.end).map(|n| series.exponents().lambda(n)).collect();
        let direct = coeffs.iter().map(|c| c.norm()).sum::<f64>() * (1.0 + ROUNDING_PAD);
        est.upper = est.upper.min(direct);
        let gaps = lambdas.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let t_max = plan.t_max.unwrap_or_else(|| {
            let period = if gaps.is_finite() && gaps > 0.0 { std::f64::consts::TAU / gaps } else { 1.0 };
            period.clamp(std::f64::consts::TAU, 1e4)
        });
        let step = if samples > 1 { 2.0 * t_max / (samples - 1) as f64 } else { 0.0 };
        let ts: Vec<f64> = if samples == 1 {
            vec![0.0]
        } else {
            (0..samples).map(|i| -t_max + step * i as f64).chain([0.0]).collect()
        };
        let vals: Vec<f64> = ts.par_iter().map(|&t| window_abs(&lambdas, &coeffs, t)).collect();
        let (mut bi, mut bv) = (0, f64::NEG_INFINITY);
        for (i, &v) in vals.iter().enumerate() {
            if v > bv {
                bi = i;
                bv = v;
            }
        }
        let mut t_best = ts[bi];
        if plan.refine && step > 0.0 {
            let (t, v) = golden_max(|t| window_abs(&lambdas, &coeffs, t), t_best - step, t_best + step, 60);
            if v > bv {
                bv = v;
                t_best = t;
            }
        }
        est.t_samples = ts.len();
        if bv > est.lower {
            est.lower = bv;
            est.t_best = Some(t_best);
        }
    }
    Ok(est)
}

/// Finite-grid proxy for an abscissa: max over the top half of the grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SigmaEstimate {
    /// `-∞` when every window is empty.
    pub estimate: f64,
    pub all_windows_empty: bool,
    pub rows: Vec<TxEstimate>,
}

impl SigmaEstimate {
    fn from_rows(rows: Vec<TxEstimate>, value: impl Fn(&TxEstimate) -> f64) -> Self {
        let all_windows_empty = rows.iter().all(|r| r.empty_window);
        let half = rows.len() / 2;
        let estimate = rows[half..]
            .iter()
            .map(|r| {
                let v = value(r);
                if v > 0.0 {
                    v.ln() / r.x
                } else {
                    f64::NEG_INFINITY
                }
            })
            .fold(f64::NEG_INFINITY, f64::max);
        SigmaEstimate {
            estimate,
            all_windows_empty,
            rows,
        }
    }

    /// CSV rows `x,terms,lower,upper,log_lower_over_x,log_upper_over_x`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,terms,t_lower,t_upper,log_lower_over_x,log_upper_over_x\n");
        for r in &self.rows {
            let f = |v: f64| if v > 0.0 { v.ln() / r.x } else { f64::NEG_INFINITY };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.x,
                r.terms,
                r.lower,
                r.upper,
                f(r.lower),
                f(r.upper)
            );
        }
        out
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Invalid("empty x-grid".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Invalid("x-grid must be strictly increasing".into()));
    }
    Ok(())
}

fn tx_rows(series: &DirichletSeries, grid: &[f64], plan: &SamplingPlan) -> Result<Vec<TxEstimate>> {
    check_grid(grid)?;
    grid.par_iter().map(|&x| kuniyeda_tx(series, x, plan)).collect()
}

/// `max_{top half} log T_x / x`, a proxy for `σ_u`.
pub fn sigma_uniform_estimate(series: &DirichletSeries, grid: &[f64], plan: &SamplingPlan) -> Result<SigmaEstimate> {
    Ok(SigmaEstimate::from_rows(tx_rows(series, grid, plan)?, |r| r.lower))
}

/// Same proxy with `Σ|a(n)|` in place of `T_x`, for `σ_a`.
pub fn sigma_absolute_estimate(series: &DirichletSeries, grid: &[f64], plan: &SamplingPlan) -> Result<SigmaEstimate> {
    let plan = SamplingPlan { points: 0, ..plan.clone() };
    Ok(SigmaEstimate::from_rows(tx_rows(series, grid, &plan)?, |r| r.upper))
}

/// CSV trace of the partial sums at `s`: `n,lambda,re_a,im_a,re_partial,im_partial`.
pub fn trace_csv(series: &DirichletSeries, s: Complex64, m: u64) -> Result<String> {
    let t = Truncation::new(series, m)?;
    let mut out = String::from("n,lambda,re_a,im_a,re_partial,im_partial\n");
    let mut partial = Complex64::new(0.0, 0.0);
    for (i, (&l, &a)) in t.lambdas.iter().zip(&t.coeffs).enumerate() {
        partial += a * (-l * s).exp();
        let _ = writeln!(out, "{},{},{},{},{},{}", i + 1, l, a.re, a.im, partial.re, partial.im);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::{ordinary_spec, Generator, Rational};

    fn zeta(n_max: u64) -> DirichletSeries {
        DirichletSeries::new(
            "zeta",
            ordinary_spec(n_max).unwrap(),
            Coefficients::builtin("ones").unwrap(),
            TailMajorant::UniformBound { a: 1.0 },
            1.0,
        )
        .unwrap()
    }

    fn bohr(n_max: i64) -> DirichletSeries {
        let rows = (1..=n_max)
            .map(|n| {
                let k = 2 * n - 1;
                vec![(0, Rational::new(2 * k * k + 1, 2 * k))]
            })
            .collect();
        let spec = ExponentSpec::symbolic(vec![Generator::parse("1", "1").unwrap()], rows).unwrap();
        DirichletSeries::new(
            "bohr",
            spec,
            Coefficients::builtin("ones").unwrap(),
            TailMajorant::UniformBound { a: 1.0 },
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn zeta_two_to_one_millionth() {
        let z = zeta(1_000_000_000_000);
        let r = evaluate(&z, Complex64::new(2.0, 0.0), 1e-6).unwrap();
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        assert!(r.tail_bound <= 1e-6);
        assert!((r.value.re - pi2_6).abs() < 1e-6, "{}", r.value.re - pi2_6);
    }

    #[test]
    fn infinite_accuracy_uses_one_term() {
        let r = evaluate(&zeta(100), Complex64::new(2.0, 0.0), f64::INFINITY).unwrap();
        assert_eq!(r.truncation_m, 1);
        assert_eq!(r.value, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn below_threshold_rejected() {
        assert!(matches!(
            evaluate(&zeta(100), Complex64::new(0.5, 0.0), 1e-3),
            Err(Error::BelowThreshold { .. })
        ));
    }

    #[test]
    fn bohr_tail_geometric() {
        let b = bohr(200);
        let t = tail_bound(&b, 4, 2.0);
        let geometric = (-18f64).exp() / (1.0 - (-4f64).exp());
        assert!(t <= geometric && t > 0.5 * geometric, "{t} vs {geometric}");
    }

    #[test]
    fn integral_bound_is_an_upper_bound() {
        let spec = ordinary_spec(u64::MAX / 4).unwrap();
        for sigma in [0.5, 1.0, 1.6, 2.0] {
            let exact: f64 = (10..=3_000_000u64).map(|n| (n as f64).powf(-sigma)).sum();
            let bound = exp_sum_bound(&spec, 10, 3_000_000, sigma);
            assert!(bound >= exact && bound <= exact + 10f64.powf(-sigma) * 1.01, "σ={sigma}: {bound} vs {exact}");
        }
    }

    #[test]
    fn finite_support_tail_zero() {
        let spec = ordinary_spec(10).unwrap();
        let s = DirichletSeries::new(
            "finite",
            spec,
            Coefficients::list(vec![Complex64::new(1.0, 0.0); 3]),
            TailMajorant::FiniteSupport { n: 3 },
            f64::NEG_INFINITY,
        )
        .unwrap();
        assert_eq!(tail_bound(&s, 3, 0.1), 0.0);
        assert_eq!(tail_bound(&s, 7, -3.0), 0.0);
        let est = sigma_uniform_estimate(&s, &[4.5, 5.5], &SamplingPlan::default()).unwrap();
        assert!(est.all_windows_empty && est.estimate == f64::NEG_INFINITY);
    }

    #[test]
    fn kuniyeda_counts_ones() {
        let est = kuniyeda_tx(&zeta(100_000), 10.5, &SamplingPlan::default()).unwrap();
        assert_eq!(est.terms, 14289);
        assert_eq!(est.lower, 14289.0);
        assert_eq!(est.upper, 14289.0);
    }

    #[test]
    fn kuniyeda_sandwich_and_empty() {
        let spec = ordinary_spec(40).unwrap();
        let mut c = vec![Complex64::new(0.0, 0.0); 40];
        c[20] = Complex64::new(1.0, 0.0); // n = 21, log 21 ≈ 3.04
        c[21] = Complex64::new(-1.0, 0.0); // n = 22
        let s = DirichletSeries::new(
            "pair",
            spec,
            Coefficients::list(c),
            TailMajorant::UniformBound { a: 1.0 },
            1.0,
        )
        .unwrap();
        let est = kuniyeda_tx(&s, 3.5, &SamplingPlan::default()).unwrap();
        assert!(est.lower <= est.upper + 1e-12 && est.upper <= 2.0 + 1e-9);
        assert!(est.lower >= 0.0);
        let empty = kuniyeda_tx(&s, 3.0, &SamplingPlan::default()).unwrap();
        assert!(empty.empty_window && empty.lower == 0.0);
    }

    #[test]
    fn bohr_sigma_u_small() {
        let b = bohr(25);
        let grid: Vec<f64> = (4..40).map(|k| k as f64 + 0.75).collect();
        let est = sigma_uniform_estimate(&b, &grid, &SamplingPlan::default()).unwrap();
        assert!(est.estimate < 0.1, "{}", est.estimate);
    }

    #[test]
    fn compensated_sum() {
        let terms = [1e16, 1.0, -1e16].map(|x| Complex64::new(x, 0.0));
        assert_eq!(neumaier(terms.into_iter()).re, 1.0);
    }
}

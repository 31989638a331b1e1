//! Bohr equivalence: twists `b(n) = a(n)e^{i(RY)_n}`, recovery of `Y` from a
//! coefficient pair, Helly extraction from translate sequences, and limit
//! series.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{centered_angle, wrap_angle};
use crate::coefficients::Coefficients;
use crate::error::{Error, Result};
use crate::exponents::{self, BohrMatrix, ExponentSpec, Rational, DEFAULT_DENOMINATOR_CAP};
use crate::precision::HpReal;
use crate::series::DirichletSeries;
pub use crate::twist::TwistVector;

/// Default congruence tolerance, radians.
pub const DEFAULT_CONGRUENCE_TOL: f64 = 1e-9;

/// First row touching a coordinate `Y` leaves undefined, if any.
fn uncovered_row(spec: &ExponentSpec, y: &TwistVector) -> Result<Option<(u64, usize)>> {
    if y.zero_tail() {
        return Ok(None);
    }
    let l = y.len();
    if spec.is_ordinary() {
        let p = crate::arith::nth_prime(l);
        return Ok((p <= spec.len()).then_some((p, l)));
    }
    let matrix = spec.matrix()?;
    for n in 1..=spec.len() {
        if let Some(&(g, _)) = matrix.row(n)?.iter().find(|(g, _)| *g >= l) {
            return Ok(Some((n, g)));
        }
    }
    Ok(None)
}

/// `b(n) = a(n)e^{i(RY)_n}`.
pub fn twist(series: &DirichletSeries, y: &TwistVector) -> Result<DirichletSeries> {
    let spec = series.exponents();
    let matrix = spec.matrix()?;
    if let Some((n, l)) = uncovered_row(spec, y)? {
        return Err(Error::TwistTooShort {
            n: n as usize,
            generator: l,
            len: y.len(),
        });
    }
    Ok(series.with_coefficients(
        format!("twist({})", series.label),
        Coefficients::Twisted {
            base: Arc::new(series.coefficients().clone()),
            twist: y.clone(),
            matrix,
        },
    ))
}

/// The same twist applied to every series.
pub fn vector_twist(list: &[DirichletSeries], y: &TwistVector) -> Result<Vec<DirichletSeries>> {
    list.iter().map(|f| twist(f, y)).collect()
}

/// Why two coefficient streams are not twists of each other.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Incompatibility {
    ModulusMismatch { n: u64, abs_a: f64, abs_b: f64 },
    UnsolvableCongruence { n: u64, residual: f64 },
    /// The rows' common denominator passes the cap at row `n`.
    NonIntegralObstruction { n: u64, cap: u64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DetectOutcome {
    Equivalent {
        y: TwistVector,
        /// Centered `(RY)_n − arg(b(n)/a(n))` for each constrained `n`.
        residuals: Vec<(u64, f64)>,
        max_residual: f64,
        /// Coordinates in the support left unconstrained and set to 0.
        free_coordinates: Vec<usize>,
        /// Common denominator used to clear the rows.
        q: u64,
        convention: String,
    },
    Incompatible { reason: Incompatibility },
}

impl DetectOutcome {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, DetectOutcome::Equivalent { .. })
    }

    pub fn twist_vector(&self) -> Option<&TwistVector> {
        match self {
            DetectOutcome::Equivalent { y, .. } => Some(y),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DetectOptions {
    pub tolerance: f64,
    pub denominator_cap: u64,
    /// Relative tolerance for `|b(n)| = |a(n)|`.
    pub modulus_tolerance: f64,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            tolerance: DEFAULT_CONGRUENCE_TOL,
            denominator_cap: DEFAULT_DENOMINATOR_CAP,
            modulus_tolerance: 1e-9,
        }
    }
}

/// An integer row `Σ m_ℓ z_ℓ ≡ ψ (mod 2π)` with its accumulated phase error.
#[derive(Clone, Debug)]
struct Congruence {
    coeffs: BTreeMap<usize, i128>,
    psi: f64,
    err: f64,
}

impl Congruence {
    fn lead(&self) -> Option<(usize, i128)> {
        self.coeffs.iter().next().map(|(&l, &c)| (l, c))
    }

    /// `s·self + t·other`.
    fn combine(&self, s: i128, other: &Self, t: i128) -> Result<Self> {
        let overflow = || Error::Invalid("integer growth overflow in congruence elimination".into());
        let mut coeffs = BTreeMap::new();
        for (&l, &c) in &self.coeffs {
            coeffs.insert(l, c.checked_mul(s).ok_or_else(overflow)?);
        }
        for (&l, &c) in &other.coeffs {
            let e = coeffs.entry(l).or_insert(0);
            *e = e.checked_add(c.checked_mul(t).ok_or_else(overflow)?).ok_or_else(overflow)?;
        }
        coeffs.retain(|_, c| *c != 0);
        Ok(Congruence {
            coeffs,
            psi: wrap_angle(s as f64 * self.psi + t as f64 * other.psi),
            err: (s as f64).abs() * self.err + (t as f64).abs() * other.err + 1e-15,
        })
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Echelon form of a congruence system, built one row at a time.
#[derive(Default)]
struct Echelon {
    pivots: BTreeMap<usize, Congruence>,
}

impl Echelon {
    /// Insert a row; returns the residual angle when it reduces to `0 ≡ ψ`.
    fn insert(&mut self, mut v: Congruence) -> Result<Option<(f64, f64)>> {
        loop {
            let Some((l, b)) = v.lead() else {
                return Ok(Some((centered_angle(v.psi), v.err)));
            };
            let Some(p) = self.pivots.get(&l).cloned() else {
                self.pivots.insert(l, v);
                return Ok(None);
            };
            let a = p.coeffs[&l];
            if b % a == 0 {
                v = v.combine(1, &p, -(b / a))?;
            } else {
                let (g, s, t) = ext_gcd(a, b);
                let new_pivot = p.combine(s, &v, t)?;
                v = v.combine(a / g, &p, -(b / g))?;
                self.pivots.insert(l, new_pivot);
            }
        }
    }

    /// Back-substitution with every free coordinate 0 and each pivot value
    /// chosen smallest in magnitude.
    fn solve(&self) -> BTreeMap<usize, f64> {
        let mut z: BTreeMap<usize, f64> = BTreeMap::new();
        for (&l, row) in self.pivots.iter().rev() {
            let mut rhs = row.psi;
            for (&j, &c) in row.coeffs.range(l + 1..) {
                rhs -= c as f64 * z.get(&j).copied().unwrap_or(0.0);
            }
            let lead = row.coeffs[&l] as f64;
            z.insert(l, centered_angle(rhs) / lead);
        }
        z
    }
}

/// Recover `Y` with `b(n) = a(n)e^{i(RY)_n}` for `n ≤ n_limit`, or explain
/// why none exists.
pub fn detect_twist(
    f: &DirichletSeries,
    g: &DirichletSeries,
    n_limit: u64,
    opts: &DetectOptions,
) -> Result<DetectOutcome> {
    let spec = f.exponents();
    if g.exponents().len() != spec.len() {
        return Err(Error::Invalid("detect_twist needs a common exponent spec".into()));
    }
    let matrix = spec.matrix()?;
    let n_limit = n_limit.min(spec.len());
    let pairs: Vec<(Complex64, Complex64)> = (1..=n_limit)
        .into_par_iter()
        .map(|n| Ok((f.coeff(n)?, g.coeff(n)?)))
        .collect::<Result<_>>()?;

    let mut constrained = Vec::new();
    for (i, &(a, b)) in pairs.iter().enumerate() {
        let n = i as u64 + 1;
        let (aa, bb) = (a.norm(), b.norm());
        if (aa - bb).abs() > opts.modulus_tolerance * aa.max(bb).max(1e-300) {
            return Ok(DetectOutcome::Incompatible {
                reason: Incompatibility::ModulusMismatch { n, abs_a: aa, abs_b: bb },
            });
        }
        if aa > 0.0 {
            constrained.push((n, (b / a).arg()));
        }
    }

    let mut q = 1u64;
    for &(n, _) in &constrained {
        for (_, r) in matrix.row(n)? {
            match crate::arith::lcm_capped(q, *r.denom() as u64, opts.denominator_cap) {
                Some(v) => q = v,
                None => {
                    return Ok(DetectOutcome::Incompatible {
                        reason: Incompatibility::NonIntegralObstruction {
                            n,
                            cap: opts.denominator_cap,
                        },
                    })
                }
            }
        }
    }

    // y = Q·z turns the rows into integer congruences in z
    let mut ech = Echelon::default();
    let mut rows = Vec::with_capacity(constrained.len());
    let mut support = std::collections::BTreeSet::new();
    for &(n, phi) in &constrained {
        let row = matrix.row(n)?;
        let ints = exponents::scaled_row(&row, q)?;
        support.extend(ints.iter().map(|(l, _)| *l));
        let c = Congruence {
            coeffs: ints.iter().map(|&(l, m)| (l, m as i128)).collect(),
            psi: wrap_angle(phi),
            err: 1e-15,
        };
        if let Some((res, err)) = ech.insert(c)? {
            if res.abs() > opts.tolerance + err {
                return Ok(DetectOutcome::Incompatible {
                    reason: Incompatibility::UnsolvableCongruence { n, residual: res },
                });
            }
        }
        rows.push((n, row, phi));
    }
    let z = ech.solve();
    let len = support.iter().next_back().map_or(0, |l| l + 1);
    let angles: Vec<f64> = (0..len).map(|l| q as f64 * z.get(&l).copied().unwrap_or(0.0)).collect();
    let y = TwistVector::with_period_from(angles, true, q);
    let mut residuals = Vec::with_capacity(rows.len());
    let mut max_residual: f64 = 0.0;
    for (n, row, phi) in rows {
        let r = centered_angle(y.phase(&row, n)? - phi);
        max_residual = max_residual.max(r.abs());
        residuals.push((n, r));
    }
    if max_residual > opts.tolerance {
        let (n, r) = residuals
            .iter()
            .copied()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("nonempty");
        return Ok(DetectOutcome::Incompatible {
            reason: Incompatibility::UnsolvableCongruence { n, residual: r },
        });
    }
    let free_coordinates = support.iter().copied().filter(|l| !z.contains_key(l)).collect();
    Ok(DetectOutcome::Equivalent {
        y,
        residuals,
        max_residual,
        free_coordinates,
        q,
        convention: "pivot coordinates take the smallest centered solution; free coordinates are 0".into(),
    })
}

/// Fractional parts `θ_{m,ℓ} = {−τ_m β_ℓ/2π}` and a convergent subsequence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HellyTable {
    /// `entries[m][ℓ]`.
    pub entries: Vec<Vec<f64>>,
    pub limits: Vec<f64>,
    /// Selected indices `m_k` (0-based into the τ list), increasing.
    pub subsequence: Vec<usize>,
    /// `max_ℓ max_k |θ_{m_k,ℓ} − θ_ℓ|` along the subsequence, on the circle.
    pub spread: f64,
    /// Box width per coordinate at termination.
    pub widths: Vec<f64>,
    /// All reported `k` are past the cutoff.
    pub cutoff: usize,
}

/// `{−τβ/2π}` for each `τ`, reduced in extended precision.
pub fn phase_table(taus: &[HpReal], frequencies: &[HpReal]) -> Vec<Vec<f64>> {
    taus.par_iter()
        .map(|tau| {
            let bits = exponents::phase_bits(tau);
            let turns = tau.neg().div(&HpReal::two_pi(bits)).with_bits(bits);
            frequencies
                .iter()
                .map(|b| b.with_bits(bits).mul(&turns).frac_f64())
                .collect()
        })
        .collect()
}

#[cfg(test)]
fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Points of `idx` inside the best box of side `w`, scanning coordinates
/// from `coord` on; ties keep the earliest window.
fn best_box(entries: &[Vec<f64>], idx: &[usize], coord: usize, w: f64) -> Vec<usize> {
    if coord == entries.first().map_or(0, Vec::len) || idx.len() <= 1 {
        return idx.to_vec();
    }
    let mut best: Vec<usize> = Vec::new();
    let mut starts: Vec<f64> = idx.iter().map(|&m| entries[m][coord]).collect();
    starts.sort_by(f64::total_cmp);
    starts.dedup();
    for start in starts {
        let inside: Vec<usize> = idx
            .iter()
            .copied()
            .filter(|&m| (entries[m][coord] - start).rem_euclid(1.0) < w)
            .collect();
        if inside.len() <= best.len() {
            continue;
        }
        let sub = best_box(entries, &inside, coord + 1, w);
        if sub.len() > best.len() {
            best = sub;
        }
    }
    best
}

/// Nested-interval extraction. While many points survive, each coordinate
/// in turn keeps the half-width window (among sliding offsets) holding the
/// most points; the survivors are then searched exactly for the fullest
/// box of side below `tolerance`.
pub fn helly_limit(
    taus: &[HpReal],
    frequencies: &[HpReal],
    tolerance: f64,
    min_len: usize,
) -> Result<HellyTable> {
    if frequencies.is_empty() {
        return Err(Error::Invalid("helly_limit needs at least one frequency".into()));
    }
    if !(tolerance > 0.0) {
        return Err(Error::Invalid("tolerance must be positive".into()));
    }
    let entries = phase_table(taus, frequencies);
    let dims = frequencies.len();
    let min_len = min_len.max(1);
    let mut alive: Vec<usize> = (0..entries.len()).collect();
    let mut lo = vec![0.0f64; dims];
    let mut width = vec![1.0f64; dims];
    const OFFSETS: usize = 16;
    const EXACT_BELOW: usize = 512;

    let mut coord = 0;
    while alive.len() > EXACT_BELOW && width[coord] / 2.0 > 2.0 * tolerance {
        let half = width[coord] / 2.0;
        let mut best: Option<(f64, Vec<usize>)> = None;
        for j in 0..=OFFSETS {
            let start = lo[coord] + (width[coord] - half) * j as f64 / OFFSETS as f64;
            let kept: Vec<usize> = alive
                .iter()
                .copied()
                .filter(|&m| (entries[m][coord] - start).rem_euclid(1.0) < half)
                .collect();
            if best.as_ref().is_none_or(|(_, b)| kept.len() > b.len()) {
                best = Some((start, kept));
            }
        }
        let (start, kept) = best.expect("offsets nonempty");
        if kept.len() < min_len {
            break;
        }
        lo[coord] = start;
        width[coord] = half;
        alive = kept;
        coord = (coord + 1) % dims;
    }

    // a box of side w keeps every point within w/2 of its midpoint
    let w = 2.0 * tolerance * (1.0 - 1e-9);
    let mut chosen = best_box(&entries, &alive, 0, w);
    chosen.sort_unstable();
    if chosen.len() < min_len {
        return Err(Error::InsufficientSequence(format!(
            "the fullest box of side {w:.3e} holds {} of {} points; {min_len} requested",
            chosen.len(),
            entries.len()
        )));
    }
    let mut limits = Vec::with_capacity(dims);
    let mut spread: f64 = 0.0;
    for l in 0..dims {
        let reference = entries[chosen[0]][l];
        let offsets = chosen.iter().map(|&m| {
            let d = (entries[m][l] - reference).rem_euclid(1.0);
            if d > 0.5 {
                d - 1.0
            } else {
                d
            }
        });
        let (lo_d, hi_d) = offsets.fold((0.0f64, 0.0f64), |(a, b), d| (a.min(d), b.max(d)));
        let mid = (reference + (lo_d + hi_d) / 2.0).rem_euclid(1.0);
        limits.push(if mid >= 1.0 { 0.0 } else { mid });
        spread = spread.max((hi_d - lo_d) / 2.0);
    }
    let widths = width.iter().map(|&x| x.min(tolerance)).collect();
    Ok(HellyTable {
        entries,
        limits,
        subsequence: chosen,
        spread,
        widths,
        cutoff: 0,
    })
}

/// Per-exponent limit phases `θ_n` for the non-integral path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseLimitTable {
    pub turns: Vec<f64>,
}

impl PhaseLimitTable {
    /// Limits of `{−τ_m λ_n/2π}` along a Helly extraction over the exponents.
    pub fn from_helly(table: &HellyTable) -> Self {
        PhaseLimitTable {
            turns: table.limits.clone(),
        }
    }

    pub fn constant(n: usize, turns: f64) -> Self {
        PhaseLimitTable { turns: vec![turns.rem_euclid(1.0); n] }
    }
}

/// Which limit construction to apply.
pub enum LimitSource<'a> {
    /// Basis-coordinate limits `θ_ℓ`; needs an integral Bohr matrix.
    Basis(&'a HellyTable),
    /// Per-exponent limits `θ_n`; any exponent spec.
    Exponents(&'a PhaseLimitTable),
}

#[derive(Clone, Debug)]
pub struct LimitSeries {
    pub series: Vec<DirichletSeries>,
    /// `Y = (2πθ_ℓ)` on the basis path.
    pub twist: Option<TwistVector>,
}

/// The limit series `G_j` of translates along a Helly subsequence.
pub fn limit_series(list: &[DirichletSeries], source: LimitSource<'_>) -> Result<LimitSeries> {
    match source {
        LimitSource::Basis(table) => {
            let mut y = None;
            for f in list {
                let matrix = f.exponents().matrix()?;
                ensure_integral(&matrix, f.len())?;
                y.get_or_insert_with(|| {
                    TwistVector::new(table.limits.iter().map(|t| std::f64::consts::TAU * t).collect())
                });
            }
            let y = y.unwrap_or_else(TwistVector::zero);
            Ok(LimitSeries {
                series: vector_twist(list, &y)?,
                twist: Some(y),
            })
        }
        LimitSource::Exponents(phases) => {
            let series = list
                .iter()
                .map(|f| {
                    if (phases.turns.len() as u64) < f.len().min(f.coefficients().available()) {
                        log::warn!(
                            "phase table covers {} of {} exponents; coefficients past it are undefined",
                            phases.turns.len(),
                            f.len()
                        );
                    }
                    f.with_coefficients(
                        format!("limit({})", f.label),
                        Coefficients::Phased {
                            base: Arc::new(f.coefficients().clone()),
                            turns: Arc::new(phases.turns.clone()),
                        },
                    )
                })
                .collect();
            Ok(LimitSeries { series, twist: None })
        }
    }
}

fn ensure_integral(matrix: &BohrMatrix, n: u64) -> Result<()> {
    if matrix.is_structurally_integral() {
        return Ok(());
    }
    for k in 1..=n {
        if matrix.row(k)?.iter().any(|(_, r): &(usize, Rational)| !r.is_integer()) {
            return Err(Error::NonIntegral(format!(
                "row {k} has a non-integer entry; phases e^{{2πiΣ rθ}} are not determined by θ mod 1 \
                 (use the per-exponent limit path)"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::ordinary_spec;
    use crate::series::TailMajorant;
    use std::f64::consts::PI;

    fn zeta(n: u64) -> DirichletSeries {
        DirichletSeries::new(
            "zeta",
            ordinary_spec(n).unwrap(),
            Coefficients::builtin("ones").unwrap(),
            TailMajorant::UniformBound { a: 1.0 },
            1.0,
        )
        .unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn twist_examples() {
        let z = zeta(50);
        let g = twist(&z, &TwistVector::sparse(&[(0, PI / 3.0)])).unwrap();
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!(close(g.coeff(4).unwrap(), w));
        assert!(close(g.coeff(12).unwrap(), w));
        let id = twist(&z, &TwistVector::zero()).unwrap();
        for n in 1..=50 {
            assert_eq!(id.coeff(n).unwrap(), z.coeff(n).unwrap());
        }
    }

    #[test]
    fn short_twist_rejected() {
        let z = zeta(50);
        match twist(&z, &TwistVector::new(vec![0.1, 0.2])) {
            Err(Error::TwistTooShort { n: 5, generator: 2, len: 2 }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detect_round_trip_and_identity() {
        let z = zeta(200);
        let y0 = TwistVector::new((0..46).map(|l| 0.37 * l as f64 + 0.1).collect());
        let g = twist(&z, &y0).unwrap();
        let out = detect_twist(&z, &g, 200, &DetectOptions::default()).unwrap();
        let y = out.twist_vector().expect("equivalent");
        let m = z.exponents().matrix().unwrap();
        for n in 1..=200 {
            let row = m.row(n).unwrap();
            let d = centered_angle(y.phase(&row, n).unwrap() - y0.phase(&row, n).unwrap());
            assert!(d.abs() < 1e-9, "n={n} d={d}");
        }
        let same = detect_twist(&z, &z, 200, &DetectOptions::default()).unwrap();
        assert!(same.twist_vector().unwrap().angles().iter().all(|&a| a == 0.0));
    }

    #[test]
    fn detect_rejects_modulus_and_non_multiplicative() {
        let z = zeta(30);
        let mut c = vec![Complex64::new(1.0, 0.0); 30];
        c[5] = Complex64::new(2.0, 0.0);
        let g = z.with_coefficients("g", Coefficients::list(c.clone()));
        match detect_twist(&z, &g, 30, &DetectOptions::default()).unwrap() {
            DetectOutcome::Incompatible {
                reason: Incompatibility::ModulusMismatch { n: 6, .. },
            } => {}
            other => panic!("{other:?}"),
        }
        c[5] = Complex64::new(-1.0, 0.0); // ρ(6) ≠ ρ(2)ρ(3)
        let g = z.with_coefficients("g", Coefficients::list(c));
        match detect_twist(&z, &g, 30, &DetectOptions::default()).unwrap() {
            DetectOutcome::Incompatible {
                reason: Incompatibility::UnsolvableCongruence { n: 6, .. },
            } => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(12i128, 18i128), (-4, 6), (7, -3), (5, 0)] {
            let (g, s, t) = ext_gcd(a, b);
            assert_eq!(s * a + t * b, g);
            assert!(g > 0);
        }
    }

    #[test]
    fn helly_constant_sequence() {
        let tau = HpReal::from_f64(3.7, 128);
        let beta = vec![HpReal::from_f64(2f64.ln(), 128)];
        let t = helly_limit(&vec![tau; 20], &beta, 1e-6, 20).unwrap();
        assert_eq!(t.subsequence.len(), 20);
        let want = (-3.7 * 2f64.ln() / (2.0 * PI)).rem_euclid(1.0);
        assert!((t.limits[0] - want).abs() < 1e-12);
    }

    #[test]
    fn helly_extracts_close_points() {
        let taus: Vec<HpReal> = (1..=3000).map(|m| HpReal::from_i64(m, 128)).collect();
        let beta = vec![
            HpReal::from_i64(2, 128).ln(),
            HpReal::from_i64(3, 128).ln(),
        ];
        let t = helly_limit(&taus, &beta, 1e-2, 3).unwrap();
        assert!(t.subsequence.len() >= 3 && t.spread < 1e-2);
        assert!(matches!(helly_limit(&taus, &beta, 1e-3, 3), Err(Error::InsufficientSequence(_))));
        for &m in &t.subsequence {
            for l in 0..2 {
                assert!(circ_dist(t.entries[m][l], t.limits[l]) < 1e-2);
            }
        }
    }

    #[test]
    fn limit_series_paths() {
        let z = zeta(64);
        let table = HellyTable {
            entries: vec![],
            limits: vec![0.5],
            subsequence: vec![],
            spread: 0.0,
            widths: vec![],
            cutoff: 0,
        };
        // untracked coordinates are undefined
        assert!(limit_series(std::slice::from_ref(&z), LimitSource::Basis(&table)).is_err());
        let phases = PhaseLimitTable::constant(64, 0.5);
        let g = limit_series(std::slice::from_ref(&z), LimitSource::Exponents(&phases)).unwrap();
        assert!(close(g.series[0].coeff(7).unwrap(), Complex64::new(-1.0, 0.0)));
    }
}

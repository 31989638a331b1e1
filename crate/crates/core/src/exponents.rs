//! Exponent sequences `λ_1 < λ_2 < …`, Bohr bases and exact rational Bohr
//! matrices `Λ = RB`.
//!
//! Indices are 1-based throughout: `λ_1` is the first exponent, and basis
//! generators are 0-based (`β_0, β_1, …`).

use std::fmt;
use std::ops::Range;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::precision::HpReal;

pub type Rational = Ratio<i64>;

/// A sparse Bohr-matrix row: `(ℓ, r_{n,ℓ})` pairs, sorted by `ℓ`, no zeros.
pub type Row = Vec<(usize, Rational)>;

/// Default cap on the common denominator `Q`.
pub const DEFAULT_DENOMINATOR_CAP: u64 = 1_000_000;

/// A basis element `β_ℓ`, given by a closed-form expression.
pub struct Generator {
    label: String,
    expr: Expr,
    approx: f64,
    cache: Mutex<Option<HpReal>>,
}

impl Generator {
    pub fn new(label: impl Into<String>, expr: Expr) -> Result<Self> {
        let label = label.into();
        let approx = expr.eval_f64();
        if !approx.is_finite() || approx == 0.0 {
            return Err(Error::Invalid(format!(
                "generator {label:?} = {expr} must be finite and nonzero"
            )));
        }
        Ok(Generator {
            label,
            expr,
            approx,
            cache: Mutex::new(None),
        })
    }

    pub fn parse(label: impl Into<String>, src: &str) -> Result<Self> {
        Self::new(label, Expr::parse(src)?)
    }

    /// `log p`, the ordinary-series generator for the prime `p`.
    pub fn log_prime(p: u64) -> Self {
        Generator {
            label: format!("log {p}"),
            expr: Expr::log_of(p),
            approx: (p as f64).ln(),
            cache: Mutex::new(None),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn value_f64(&self) -> f64 {
        self.approx
    }

    /// The value at `bits` of precision; cached at the highest precision
    /// requested so far.
    pub fn value(&self, bits: usize) -> HpReal {
        let mut guard = self.cache.lock().expect("generator cache");
        if let Some(v) = guard.as_ref() {
            if v.bits() >= bits {
                return v.with_bits(bits);
            }
        }
        let v = self.expr.eval(bits);
        *guard = Some(v.clone());
        v
    }
}

impl Clone for Generator {
    fn clone(&self) -> Self {
        Generator {
            label: self.label.clone(),
            expr: self.expr.clone(),
            approx: self.approx,
            cache: Mutex::new(self.cache.lock().expect("generator cache").clone()),
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Generator({:?} = {})", self.label, self.expr)
    }
}

/// The rational matrix `R` with `λ_n = Σ_ℓ r_{n,ℓ} β_ℓ`.
#[derive(Clone, Debug)]
pub enum BohrMatrix {
    /// Row `n` is the prime-exponent vector of `n`, over `β_ℓ = log p_ℓ`.
    Factorization { n_max: u64 },
    /// Row `n` is `e_{n-1}`.
    Identity { n: usize },
    Rows(Arc<Vec<Row>>),
}

impl BohrMatrix {
    pub fn len(&self) -> u64 {
        match self {
            BohrMatrix::Factorization { n_max } => *n_max,
            BohrMatrix::Identity { n } => *n as u64,
            BohrMatrix::Rows(rows) => rows.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn row(&self, n: u64) -> Result<Row> {
        if n == 0 || n > self.len() {
            return Err(Error::IndexOutOfRange {
                index: n as usize,
                len: self.len() as usize,
            });
        }
        Ok(match self {
            BohrMatrix::Factorization { .. } => arith::factorize(n)
                .into_iter()
                .map(|(p, e)| {
                    let l = arith::prime_index(p).expect("factor is prime");
                    (l, Rational::from_integer(e as i64))
                })
                .collect(),
            BohrMatrix::Identity { .. } => vec![((n - 1) as usize, Rational::from_integer(1))],
            BohrMatrix::Rows(rows) => rows[(n - 1) as usize].clone(),
        })
    }

    /// Integer rows `m_{n,ℓ} = Q·r_{n,ℓ}` for the factorization matrix, by
    /// valuation, with no rational arithmetic.
    pub fn is_structurally_integral(&self) -> bool {
        matches!(self, BohrMatrix::Factorization { .. } | BohrMatrix::Identity { .. })
    }
}

/// Normalize a row: sort by ℓ, merge duplicates, drop zeros.
pub fn normalize_row(mut row: Row) -> Row {
    row.sort_by_key(|(l, _)| *l);
    let mut out: Row = Vec::with_capacity(row.len());
    for (l, r) in row {
        match out.last_mut() {
            Some((pl, pr)) if *pl == l => *pr += r,
            _ => out.push((l, r)),
        }
    }
    out.retain(|(_, r)| *r != Rational::from_integer(0));
    out
}

#[derive(Clone, Debug)]
enum Kind {
    Ordinary { n_max: u64 },
    Symbolic { basis: Arc<Vec<Generator>>, matrix: BohrMatrix },
    Explicit { values: Arc<Vec<HpReal>> },
}

/// A strictly increasing exponent sequence with its structural description.
#[derive(Clone, Debug)]
pub struct ExponentSpec {
    kind: Kind,
    /// `λ_n` in double precision for finite specs; empty for ordinary ones.
    approx: Arc<Vec<f64>>,
}

/// Borrowed view of the spec's variant, for matching.
pub enum SpecView<'a> {
    Ordinary { n_max: u64 },
    Symbolic { basis: &'a [Generator], matrix: &'a BohrMatrix },
    Explicit { values: &'a [HpReal] },
}

impl ExponentSpec {
    pub fn ordinary(n_max: u64) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::Invalid("n_max must be at least 1".into()));
        }
        Ok(ExponentSpec {
            kind: Kind::Ordinary { n_max },
            approx: Arc::new(Vec::new()),
        })
    }

    /// A spec over declared generators with explicit sparse rows; checks
    /// row support and strict monotonicity.
    pub fn symbolic(basis: Vec<Generator>, rows: Vec<Row>) -> Result<Self> {
        let rows: Vec<Row> = rows.into_iter().map(normalize_row).collect();
        for (i, row) in rows.iter().enumerate() {
            if let Some(&(l, _)) = row.iter().find(|(l, _)| *l >= basis.len()) {
                return Err(Error::BasisTooShort {
                    n: i + 1,
                    generator: l,
                    len: basis.len(),
                });
            }
        }
        Self::with_matrix(basis, BohrMatrix::Rows(Arc::new(rows)))
    }

    /// A spec with `λ_n = β_{n-1}` (identity Bohr matrix).
    pub fn identity(basis: Vec<Generator>) -> Result<Self> {
        let n = basis.len();
        Self::with_matrix(basis, BohrMatrix::Identity { n })
    }

    fn with_matrix(basis: Vec<Generator>, matrix: BohrMatrix) -> Result<Self> {
        let approx: Vec<f64> = (1..=matrix.len())
            .map(|n| {
                let row = matrix.row(n).expect("row in range");
                row.iter()
                    .map(|(l, r)| rational_f64(r) * basis[*l].value_f64())
                    .sum()
            })
            .collect();
        let spec = ExponentSpec {
            kind: Kind::Symbolic {
                basis: Arc::new(basis),
                matrix,
            },
            approx: Arc::new(approx),
        };
        spec.check_monotone()?;
        Ok(spec)
    }

    pub fn explicit(values: Vec<HpReal>) -> Result<Self> {
        let approx: Vec<f64> = values.iter().map(HpReal::to_f64).collect();
        let spec = ExponentSpec {
            kind: Kind::Explicit {
                values: Arc::new(values),
            },
            approx: Arc::new(approx),
        };
        spec.check_monotone()?;
        Ok(spec)
    }

    fn check_monotone(&self) -> Result<()> {
        for i in 1..self.approx.len() {
            let (a, b) = (self.approx[i - 1], self.approx[i]);
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::Invalid(format!("non-finite exponent near n = {}", i + 1)));
            }
            let close = (b - a).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
            if close {
                let bits = 256;
                let (x, y) = (self.realize(i as u64, bits)?, self.realize(i as u64 + 1, bits)?);
                if y <= x {
                    return Err(Error::NotIncreasing { n: i + 1 });
                }
            } else if b <= a {
                return Err(Error::NotIncreasing { n: i + 1 });
            }
        }
        Ok(())
    }

    pub fn view(&self) -> SpecView<'_> {
        match &self.kind {
            Kind::Ordinary { n_max } => SpecView::Ordinary { n_max: *n_max },
            Kind::Symbolic { basis, matrix } => SpecView::Symbolic { basis, matrix },
            Kind::Explicit { values } => SpecView::Explicit { values },
        }
    }

    pub fn is_ordinary(&self) -> bool {
        matches!(self.kind, Kind::Ordinary { .. })
    }

    pub fn has_basis(&self) -> bool {
        !matches!(self.kind, Kind::Explicit { .. })
    }

    /// Number of exponents.
    pub fn len(&self) -> u64 {
        match &self.kind {
            Kind::Ordinary { n_max } => *n_max,
            _ => self.approx.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check_index(&self, n: u64) -> Result<()> {
        if n == 0 || n > self.len() {
            return Err(Error::IndexOutOfRange {
                index: n as usize,
                len: self.len() as usize,
            });
        }
        Ok(())
    }

    /// `λ_n` in double precision.
    pub fn lambda(&self, n: u64) -> f64 {
        match &self.kind {
            Kind::Ordinary { .. } => (n as f64).ln(),
            _ => self.approx[(n - 1) as usize],
        }
    }

    /// `λ_n` at `bits` of precision.
    pub fn realize(&self, n: u64, bits: usize) -> Result<HpReal> {
        self.check_index(n)?;
        Ok(match &self.kind {
            Kind::Ordinary { .. } => {
                if n == 1 {
                    HpReal::zero(bits)
                } else {
                    HpReal::from_i64(n as i64, bits + 32).ln().with_bits(bits)
                }
            }
            Kind::Symbolic { basis, matrix } => {
                let w = bits + 64;
                let mut acc = HpReal::zero(w);
                for (l, r) in matrix.row(n)? {
                    let term = basis[l]
                        .value(w)
                        .mul(&HpReal::from_i64(*r.numer(), w))
                        .div(&HpReal::from_i64(*r.denom(), w));
                    acc = acc.add(&term);
                }
                acc.with_bits(bits)
            }
            Kind::Explicit { values } => values[(n - 1) as usize].with_bits(bits),
        })
    }

    /// The Bohr matrix; `NoBasis` for explicit specs.
    pub fn matrix(&self) -> Result<BohrMatrix> {
        match &self.kind {
            Kind::Ordinary { n_max } => Ok(BohrMatrix::Factorization { n_max: *n_max }),
            Kind::Symbolic { matrix, .. } => Ok(matrix.clone()),
            Kind::Explicit { .. } => Err(Error::NoBasis),
        }
    }

    pub fn row(&self, n: u64) -> Result<Row> {
        self.check_index(n)?;
        self.matrix()?.row(n)
    }

    /// Number of basis generators (primes `≤ n_max` for ordinary specs).
    pub fn basis_len(&self) -> Result<usize> {
        match &self.kind {
            Kind::Ordinary { n_max } => Ok(arith::prime_count(*n_max)),
            Kind::Symbolic { basis, .. } => Ok(basis.len()),
            Kind::Explicit { .. } => Err(Error::NoBasis),
        }
    }

    /// Generator `β_ℓ`.
    pub fn generator(&self, l: usize) -> Result<Generator> {
        match &self.kind {
            Kind::Ordinary { .. } => Ok(Generator::log_prime(arith::nth_prime(l))),
            Kind::Symbolic { basis, .. } => basis.get(l).cloned().ok_or(Error::IndexOutOfRange {
                index: l,
                len: basis.len(),
            }),
            Kind::Explicit { .. } => Err(Error::NoBasis),
        }
    }

    pub fn generator_f64(&self, l: usize) -> Result<f64> {
        match &self.kind {
            Kind::Ordinary { .. } => Ok((arith::nth_prime(l) as f64).ln()),
            Kind::Symbolic { basis, .. } => basis.get(l).map(Generator::value_f64).ok_or(
                Error::IndexOutOfRange {
                    index: l,
                    len: basis.len(),
                },
            ),
            Kind::Explicit { .. } => Err(Error::NoBasis),
        }
    }

    /// Generators touched by rows `1..=m`, sorted.
    pub fn support(&self, m: u64) -> Result<Vec<usize>> {
        let matrix = self.matrix()?;
        let m = m.min(self.len());
        if let BohrMatrix::Factorization { .. } = matrix {
            return Ok((0..arith::prime_count(m)).collect());
        }
        let mut out = Vec::new();
        for n in 1..=m {
            out.extend(matrix.row(n)?.into_iter().map(|(l, _)| l));
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Indices `n` with `lo ≤ λ_n < hi`.
    pub fn window(&self, lo: f64, hi: f64) -> Range<u64> {
        let first = self.partition(|l| l < lo);
        let end = self.partition(|l| l < hi);
        first..end.max(first)
    }

    /// First index `n ≥ 1` where `pred(λ_n)` fails (or `len+1`).
    fn partition(&self, pred: impl Fn(f64) -> bool) -> u64 {
        let (mut lo, mut hi) = (1u64, self.len() + 1);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if pred(self.lambda(mid)) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Double-precision exponents `λ_1..λ_m`.
    pub fn lambdas(&self, m: u64) -> Vec<f64> {
        (1..=m.min(self.len())).map(|n| self.lambda(n)).collect()
    }

    /// `e^{-iλ_nτ}` for `n = 1..=m`, reducing `λ_nτ/2π` mod 1 in extended
    /// precision once `|λτ|` is too large for doubles.
    pub fn shift_phases(&self, m: u64, tau: &HpReal) -> Result<Vec<num_complex::Complex64>> {
        let m = m.min(self.len());
        let t = tau.to_f64();
        let lmax = if m == 0 { 0.0 } else { self.lambda(m).abs().max(self.lambda(1).abs()) };
        if (t * lmax).abs() < 1e3 {
            return Ok((1..=m)
                .map(|n| num_complex::Complex64::from_polar(1.0, -self.lambda(n) * t))
                .collect());
        }
        let bits = phase_bits(tau);
        let turns = tau.div(&HpReal::two_pi(bits)).with_bits(bits);
        (1..=m)
            .map(|n| {
                let f = self.realize(n, bits)?.mul(&turns).frac_f64();
                Ok(num_complex::Complex64::from_polar(1.0, -std::f64::consts::TAU * f))
            })
            .collect()
    }
}

/// Working precision for reducing `λ·τ` mod `2π`.
pub fn phase_bits(tau: &HpReal) -> usize {
    let e = if tau.is_zero() { 0 } else { tau.exponent().max(0) as usize };
    (e + 128).max(crate::precision::DEFAULT_BITS)
}

pub fn rational_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Parse `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let t = s.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Common denominator of the inspected rows, or `Unbounded` past the cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lcm {
    Finite(u64),
    Unbounded,
}

impl Serialize for Lcm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Lcm::Finite(q) => s.serialize_u64(*q),
            Lcm::Unbounded => s.serialize_str("Unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for Lcm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(Lcm::Finite)
                .ok_or_else(|| serde::de::Error::custom("lcm must be a positive integer")),
            serde_json::Value::String(s) if s == "Unbounded" => Ok(Lcm::Unbounded),
            other => Err(serde::de::Error::custom(format!("invalid lcm {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralityReport {
    pub is_integral: bool,
    pub lcm_of_denominators: Lcm,
    /// First row with a non-integer entry.
    pub witness: Option<u64>,
    pub rows_inspected: u64,
}

/// `Λ = (log n)` over the prime-log basis.
pub fn ordinary_spec(n_max: u64) -> Result<ExponentSpec> {
    ExponentSpec::ordinary(n_max)
}

/// Integrality of rows `1..=n_limit`.
pub fn integrality(matrix: &BohrMatrix, n_limit: u64, cap: u64) -> Result<IntegralityReport> {
    let rows_inspected = n_limit.min(matrix.len());
    if matrix.is_structurally_integral() {
        return Ok(IntegralityReport {
            is_integral: true,
            lcm_of_denominators: Lcm::Finite(1),
            witness: None,
            rows_inspected,
        });
    }
    let mut lcm = Lcm::Finite(1);
    let mut witness = None;
    for n in 1..=rows_inspected {
        for (_, r) in matrix.row(n)? {
            let q = *r.denom() as u64;
            if q != 1 && witness.is_none() {
                witness = Some(n);
            }
            if let Lcm::Finite(cur) = lcm {
                lcm = arith::lcm_capped(cur, q, cap).map_or(Lcm::Unbounded, Lcm::Finite);
            }
        }
    }
    Ok(IntegralityReport {
        is_integral: witness.is_none(),
        lcm_of_denominators: lcm,
        witness,
        rows_inspected,
    })
}

/// `Q = lcm q_{n,ℓ}` over rows `1..=m`; fails naming the row that pushes it
/// past `cap`.
pub fn common_denominator(matrix: &BohrMatrix, m: u64, cap: u64) -> Result<u64> {
    if matrix.is_structurally_integral() {
        return Ok(1);
    }
    let mut q = 1u64;
    for n in 1..=m.min(matrix.len()) {
        for (_, r) in matrix.row(n)? {
            q = arith::lcm_capped(q, *r.denom() as u64, cap)
                .ok_or(Error::DenominatorCap { row: n as usize, cap })?;
        }
    }
    Ok(q)
}

/// The integer row `m_{n,ℓ} = Q·r_{n,ℓ}`.
pub fn scaled_row(row: &Row, q: u64) -> Result<Vec<(usize, i64)>> {
    row.iter()
        .map(|(l, r)| {
            let s = *r * Rational::from_integer(q as i64);
            if !s.is_integer() {
                return Err(Error::NonIntegralRow);
            }
            Ok((*l, *s.numer()))
        })
        .collect()
}

/// `λ_n` at `bits`; free-function form.
pub fn realize(spec: &ExponentSpec, n: u64, bits: usize) -> Result<HpReal> {
    spec.realize(n, bits)
}

/// Least common multiple of a list of denominators.
pub fn lcm_of(values: &[u64]) -> u64 {
    values.iter().fold(1u64, |a, b| a.lcm(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bohr_rows(n_max: usize) -> Vec<Row> {
        (1..=n_max as i64)
            .map(|n| {
                let k = 2 * n - 1;
                vec![(0, Rational::new(2 * k * k + 1, 2 * k))]
            })
            .collect()
    }

    #[test]
    fn ordinary_rows_and_basis() {
        let spec = ordinary_spec(30).unwrap();
        assert_eq!(spec.basis_len().unwrap(), 10);
        let r = spec.row(12).unwrap();
        assert_eq!(r, vec![(0, Rational::from_integer(2)), (1, Rational::from_integer(1))]);
        let one = ordinary_spec(1).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one.row(1).unwrap().is_empty());
        assert_eq!(one.realize(1, 128).unwrap().to_f64(), 0.0);
        assert!((spec.realize(2, 128).unwrap().to_f64() - std::f64::consts::LN_2).abs() < 1e-16);
    }

    #[test]
    fn bohr_example_denominators() {
        let spec = ExponentSpec::symbolic(vec![Generator::parse("1", "1").unwrap()], bohr_rows(60)).unwrap();
        assert_eq!(spec.realize(1, 128).unwrap().to_f64(), 1.5);
        assert!((spec.realize(2, 128).unwrap().to_f64() - (3.0 + 1.0 / 6.0)).abs() < 1e-15);
        let m = spec.matrix().unwrap();
        assert_eq!(common_denominator(&m, 3, DEFAULT_DENOMINATOR_CAP).unwrap(), 30);
        assert_eq!(lcm_of(&[2, 6, 10]), 30);
        let rep = integrality(&m, 50, DEFAULT_DENOMINATOR_CAP).unwrap();
        assert!(!rep.is_integral);
        assert_eq!(rep.lcm_of_denominators, Lcm::Unbounded);
        assert_eq!(rep.witness, Some(1));
        assert!(matches!(
            common_denominator(&m, 50, DEFAULT_DENOMINATOR_CAP),
            Err(Error::DenominatorCap { .. })
        ));
    }

    #[test]
    fn identity_is_integral() {
        let basis = (0..5)
            .map(|k| Generator::parse(format!("b{k}"), &format!("log({k} + exp(-1))")).unwrap())
            .collect();
        let spec = ExponentSpec::identity(basis).unwrap();
        let m = spec.matrix().unwrap();
        let rep = integrality(&m, 5, DEFAULT_DENOMINATOR_CAP).unwrap();
        assert!(rep.is_integral);
        assert_eq!(rep.lcm_of_denominators, Lcm::Finite(1));
        assert_eq!(common_denominator(&m, 5, DEFAULT_DENOMINATOR_CAP).unwrap(), 1);
        assert!(spec.lambda(1) < 0.0);
    }

    #[test]
    fn rejects_non_increasing() {
        let basis = vec![Generator::parse("1", "1").unwrap()];
        let rows = vec![vec![(0, Rational::from_integer(2))], vec![(0, Rational::from_integer(1))]];
        assert!(matches!(ExponentSpec::symbolic(basis, rows), Err(Error::NotIncreasing { n: 2 })));
    }

    #[test]
    fn window_counts() {
        let spec = ordinary_spec(100_000).unwrap();
        let w = spec.window(10.0, 10.5);
        assert_eq!(w.end - w.start, 14289);
    }

    #[test]
    fn lcm_serde() {
        let rep = IntegralityReport {
            is_integral: false,
            lcm_of_denominators: Lcm::Unbounded,
            witness: Some(1),
            rows_inspected: 3,
        };
        let s = serde_json::to_string(&rep).unwrap();
        assert_eq!(serde_json::from_str::<IntegralityReport>(&s).unwrap(), rep);
    }

    #[test]
    fn large_shift_phases() {
        let spec = ExponentSpec::symbolic(vec![Generator::parse("1", "1").unwrap()], bohr_rows(6)).unwrap();
        let tau = HpReal::pi(256).mul(&HpReal::from_i64(2 * 105, 256));
        let ph = spec.shift_phases(6, &tau).unwrap();
        for z in &ph[..4] {
            assert!((z.re + 1.0).abs() < 1e-12 && z.im.abs() < 1e-9, "{z}");
        }
    }
}

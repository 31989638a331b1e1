//! Coefficient streams `n ↦ a(n)`: explicit lists, named builtin sources,
//! and lazily composed twists, scalings and per-exponent phases.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use num_complex::Complex64;

use crate::arith;
use crate::error::{Error, Result};
use crate::exponents::BohrMatrix;
use crate::twist::TwistVector;

/// A named coefficient generator.
pub trait CoefficientSource: Send + Sync + fmt::Debug {
    /// Registry name that reconstructs this source.
    fn name(&self) -> String;

    fn coeff(&self, n: u64) -> Complex64;

    /// `Σ_{n∈range} a(n)` when available in closed form.
    fn range_sum(&self, _range: Range<u64>) -> Option<Complex64> {
        None
    }

    /// `Σ_{n∈range} |a(n)|` when available in closed form.
    fn range_abs_sum(&self, _range: Range<u64>) -> Option<f64> {
        None
    }

    /// A bound `A ≥ |a(n)|` for all `n`.
    fn uniform_bound(&self) -> f64;
}

#[derive(Debug)]
struct Ones;

impl CoefficientSource for Ones {
    fn name(&self) -> String {
        "ones".into()
    }
    fn coeff(&self, _n: u64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn range_sum(&self, r: Range<u64>) -> Option<Complex64> {
        Some(Complex64::new(r.end.saturating_sub(r.start) as f64, 0.0))
    }
    fn range_abs_sum(&self, r: Range<u64>) -> Option<f64> {
        Some(r.end.saturating_sub(r.start) as f64)
    }
    fn uniform_bound(&self) -> f64 {
        1.0
    }
}

#[derive(Debug)]
struct Alternating;

impl CoefficientSource for Alternating {
    fn name(&self) -> String {
        "alternating".into()
    }
    fn coeff(&self, n: u64) -> Complex64 {
        Complex64::new(if n % 2 == 1 { 1.0 } else { -1.0 }, 0.0)
    }
    fn range_sum(&self, r: Range<u64>) -> Option<Complex64> {
        let odd = |k: u64| k.div_ceil(2); // odd numbers in [1, k]
        let below = |k: u64| if k == 0 { 0 } else { k - 1 };
        let (lo, hi) = (below(r.start), below(r.end.max(r.start)));
        let odds = odd(hi) as i64 - odd(lo) as i64;
        let evens = (hi - lo) as i64 - odds;
        Some(Complex64::new((odds - evens) as f64, 0.0))
    }
    fn range_abs_sum(&self, r: Range<u64>) -> Option<f64> {
        Some(r.end.saturating_sub(r.start) as f64)
    }
    fn uniform_bound(&self) -> f64 {
        1.0
    }
}

#[derive(Debug)]
struct Mobius;

impl CoefficientSource for Mobius {
    fn name(&self) -> String {
        "mobius".into()
    }
    fn coeff(&self, n: u64) -> Complex64 {
        let f = arith::factorize(n);
        if f.iter().any(|&(_, e)| e > 1) {
            Complex64::new(0.0, 0.0)
        } else if f.len() % 2 == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        }
    }
    fn uniform_bound(&self) -> f64 {
        1.0
    }
}

/// A Dirichlet character modulo `q ≤ 20`, built from discrete-log tables.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    q: u64,
    index: usize,
    values: Vec<Complex64>,
}

impl DirichletCharacter {
    pub const MAX_MODULUS: u64 = 20;

    /// Character number `index` in `0..φ(q)`; index 0 is principal.
    pub fn new(q: u64, index: usize) -> Result<Self> {
        if !(1..=Self::MAX_MODULUS).contains(&q) {
            return Err(Error::Invalid(format!(
                "character modulus {q} outside 1..={}",
                Self::MAX_MODULUS
            )));
        }
        // (Z/q)^* as a product of cyclic factors, one generator each
        let gens = cyclic_generators(q);
        let phi: usize = gens.iter().map(|&(_, ord)| ord).product();
        if index >= phi {
            return Err(Error::Invalid(format!("character index {index} ≥ φ({q}) = {phi}")));
        }
        let mut digits = Vec::with_capacity(gens.len());
        let mut rest = index;
        for &(_, ord) in &gens {
            digits.push(rest % ord);
            rest /= ord;
        }
        let mut values = vec![Complex64::new(0.0, 0.0); q as usize];
        // enumerate every unit as a product of generator powers
        let mut exps = vec![0usize; gens.len()];
        loop {
            let mut unit = 1 % q;
            let mut turns = 0.0;
            for (i, &(g, ord)) in gens.iter().enumerate() {
                for _ in 0..exps[i] {
                    unit = unit * g % q;
                }
                turns += (digits[i] * exps[i]) as f64 / ord as f64;
            }
            let frac = turns.fract();
            values[unit as usize] = exact_root_of_unity(frac);
            let mut i = 0;
            while i < gens.len() {
                exps[i] += 1;
                if exps[i] < gens[i].1 {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
            if i == gens.len() {
                break;
            }
        }
        Ok(DirichletCharacter { q, index, values })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn value(&self, n: u64) -> Complex64 {
        self.values[(n % self.q) as usize]
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    /// Not induced from any proper divisor of `q`.
    pub fn is_primitive(&self) -> bool {
        let q = self.q;
        if q == 1 {
            return true;
        }
        for d in 1..q {
            if q % d != 0 {
                continue;
            }
            let induced = (1..q)
                .filter(|&n| num_integer::gcd(n, q) == 1 && n % d == 1 % d)
                .all(|n| (self.value(n) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            if induced {
                return false;
            }
        }
        true
    }
}

/// `e^{2πi·frac}` with exact values at multiples of 1/4.
fn exact_root_of_unity(frac: f64) -> Complex64 {
    let quarter = frac * 4.0;
    if (quarter - quarter.round()).abs() < 1e-12 {
        match (quarter.round() as i64).rem_euclid(4) {
            0 => return Complex64::new(1.0, 0.0),
            1 => return Complex64::new(0.0, 1.0),
            2 => return Complex64::new(-1.0, 0.0),
            _ => return Complex64::new(0.0, -1.0),
        }
    }
    Complex64::from_polar(1.0, std::f64::consts::TAU * frac)
}

/// Generators `(g, order)` lifted to `Z/q` via CRT, one per cyclic factor.
fn cyclic_generators(q: u64) -> Vec<(u64, usize)> {
    let mut out = Vec::new();
    for (p, e) in arith::factorize(q) {
        let pe = p.pow(e);
        let other = q / pe;
        let lift = |g: u64| crt(g % pe, pe, 1 % other, other);
        if p == 2 {
            match e {
                1 => {}
                2 => out.push((lift(3), 2)),
                _ => {
                    out.push((lift(pe - 1), 2));
                    out.push((lift(5), (pe / 4) as usize));
                }
            }
        } else {
            let order = (pe / p * (p - 1)) as usize;
            let g = (2..pe)
                .find(|&g| num_integer::gcd(g, pe) == 1 && mult_order(g, pe) == order)
                .expect("odd prime powers are cyclic");
            out.push((lift(g), order));
        }
    }
    out
}

fn mult_order(g: u64, m: u64) -> usize {
    let mut x = g % m;
    let mut k = 1;
    while x != 1 % m {
        x = x * g % m;
        k += 1;
    }
    k
}

fn crt(a: u64, m: u64, b: u64, n: u64) -> u64 {
    (0..m * n)
        .find(|&x| x % m == a % m && x % n == b % n)
        .expect("coprime moduli")
}

#[derive(Debug)]
struct Character(DirichletCharacter);

impl CoefficientSource for Character {
    fn name(&self) -> String {
        format!("chi:{}:{}", self.0.q, self.0.index)
    }
    fn coeff(&self, n: u64) -> Complex64 {
        self.0.value(n)
    }
    fn uniform_bound(&self) -> f64 {
        1.0
    }
}

type Factory = fn(&[&str]) -> Result<Arc<dyn CoefficientSource>>;

fn registry() -> BTreeMap<&'static str, (Factory, &'static str)> {
    let mut m: BTreeMap<&'static str, (Factory, &'static str)> = BTreeMap::new();
    m.insert("ones", (|_| Ok(Arc::new(Ones)), "a(n) = 1"));
    m.insert("alternating", (|_| Ok(Arc::new(Alternating)), "a(n) = (-1)^(n+1)"));
    m.insert("mobius", (|_| Ok(Arc::new(Mobius)), "a(n) = μ(n)"));
    m.insert(
        "chi",
        (
            |args| {
                let parse = |s: Option<&&str>, what: &str| -> Result<u64> {
                    s.ok_or_else(|| Error::Parse(format!("chi needs {what}: chi:<q>:<index>")))?
                        .parse()
                        .map_err(|_| Error::Parse(format!("invalid {what} in chi builtin")))
                };
                let q = parse(args.first(), "modulus")?;
                let k = parse(args.get(1), "index")?;
                Ok(Arc::new(Character(DirichletCharacter::new(q, k as usize)?)))
            },
            "a(n) = χ(n), Dirichlet character chi:<q>:<index>, q ≤ 20",
        ),
    );
    m
}

/// Look up a builtin source by name, e.g. `"ones"` or `"chi:5:2"`.
pub fn builtin(name: &str) -> Result<Arc<dyn CoefficientSource>> {
    let mut parts = name.split(':');
    let head = parts.next().unwrap_or_default();
    let args: Vec<&str> = parts.collect();
    let reg = registry();
    let (factory, _) = reg
        .get(head)
        .ok_or_else(|| Error::Parse(format!("unknown builtin coefficient source {name:?}")))?;
    factory(&args)
}

/// `(name, description)` for every builtin.
pub fn builtin_names() -> Vec<(&'static str, &'static str)> {
    registry().into_iter().map(|(k, (_, d))| (k, d)).collect()
}

/// A coefficient stream, possibly built by composing transformations.
#[derive(Clone, Debug)]
pub enum Coefficients {
    List(Arc<Vec<Complex64>>),
    Builtin(Arc<dyn CoefficientSource>),
    /// `a(n)e^{i(RY)_n}`.
    Twisted {
        base: Arc<Coefficients>,
        twist: TwistVector,
        matrix: BohrMatrix,
    },
    /// `c·a(n)`.
    Scaled { base: Arc<Coefficients>, factor: Complex64 },
    /// `a(n)e^{2πiθ_n}`; defined for `n ≤ θ.len()`.
    Phased { base: Arc<Coefficients>, turns: Arc<Vec<f64>> },
}

/// A coefficient stream decomposed as `c·e^{iφ(n)}·base(n)`.
pub struct Decomposition<'a> {
    pub base: &'a Coefficients,
    pub twists: Vec<(&'a TwistVector, &'a BohrMatrix)>,
    pub factor: Complex64,
    pub has_phases: bool,
}

impl Coefficients {
    pub fn list(values: Vec<Complex64>) -> Self {
        Coefficients::List(Arc::new(values))
    }

    pub fn builtin(name: &str) -> Result<Self> {
        Ok(Coefficients::Builtin(builtin(name)?))
    }

    /// Number of indices for which `a(n)` is defined.
    pub fn available(&self) -> u64 {
        match self {
            Coefficients::List(v) => v.len() as u64,
            Coefficients::Builtin(_) => u64::MAX,
            Coefficients::Twisted { base, .. } | Coefficients::Scaled { base, .. } => base.available(),
            Coefficients::Phased { base, turns } => base.available().min(turns.len() as u64),
        }
    }

    pub fn coeff(&self, n: u64) -> Result<Complex64> {
        match self {
            Coefficients::List(v) => v.get((n as usize).wrapping_sub(1)).copied().ok_or(
                Error::MissingCoefficients {
                    have: v.len(),
                    need: n as usize,
                },
            ),
            Coefficients::Builtin(src) => Ok(src.coeff(n)),
            Coefficients::Twisted { base, twist, matrix } => {
                let a = base.coeff(n)?;
                if a == Complex64::new(0.0, 0.0) {
                    return Ok(a);
                }
                let phi = twist.phase(&matrix.row(n)?, n)?;
                Ok(a * Complex64::from_polar(1.0, phi))
            }
            Coefficients::Scaled { base, factor } => Ok(factor * base.coeff(n)?),
            Coefficients::Phased { base, turns } => {
                let t = turns.get((n as usize).wrapping_sub(1)).ok_or(Error::MissingCoefficients {
                    have: turns.len(),
                    need: n as usize,
                })?;
                Ok(base.coeff(n)? * Complex64::from_polar(1.0, std::f64::consts::TAU * t))
            }
        }
    }

    /// `a(n)` for `n ∈ range`.
    pub fn range(&self, range: Range<u64>) -> Result<Vec<Complex64>> {
        range.map(|n| self.coeff(n)).collect()
    }

    /// Uniform bound on `|a(n)|` when one is known structurally.
    pub fn uniform_bound(&self) -> Option<f64> {
        match self {
            Coefficients::List(v) => Some(v.iter().map(|z| z.norm()).fold(0.0, f64::max)),
            Coefficients::Builtin(src) => Some(src.uniform_bound()),
            Coefficients::Twisted { base, .. } | Coefficients::Phased { base, .. } => base.uniform_bound(),
            Coefficients::Scaled { base, factor } => base.uniform_bound().map(|b| b * factor.norm()),
        }
    }

    /// `Σ|a(n)|` over the range in closed form, when available.
    pub fn range_abs_sum(&self, range: Range<u64>) -> Option<f64> {
        match self {
            Coefficients::Builtin(src) => src.range_abs_sum(range),
            Coefficients::Twisted { base, .. } | Coefficients::Phased { base, .. } => base.range_abs_sum(range),
            Coefficients::Scaled { base, factor } => base.range_abs_sum(range).map(|s| s * factor.norm()),
            Coefficients::List(_) => None,
        }
    }

    /// Peel off twists, scalings and phases down to the base stream.
    pub fn decompose(&self) -> Decomposition<'_> {
        let mut d = Decomposition {
            base: self,
            twists: Vec::new(),
            factor: Complex64::new(1.0, 0.0),
            has_phases: false,
        };
        loop {
            match d.base {
                Coefficients::Twisted { base, twist, matrix } => {
                    d.twists.push((twist, matrix));
                    d.base = base;
                }
                Coefficients::Scaled { base, factor } => {
                    d.factor *= factor;
                    d.base = base;
                }
                Coefficients::Phased { base, .. } => {
                    d.has_phases = true;
                    d.base = base;
                }
                _ => return d,
            }
        }
    }

    /// `Σ_{n∈range} a(n)` in closed form for builtin streams.
    pub fn base_range_sum(&self, range: Range<u64>) -> Option<Complex64> {
        match self {
            Coefficients::Builtin(src) => src.range_sum(range),
            _ => None,
        }
    }

    /// True when every coefficient is a nonnegative real.
    pub fn is_nonnegative(&self) -> bool {
        match self {
            Coefficients::List(v) => v.iter().all(|z| z.im == 0.0 && z.re >= 0.0),
            Coefficients::Builtin(src) => src.name() == "ones",
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn character_mod_4() {
        let chi = DirichletCharacter::new(4, 1).unwrap();
        assert_eq!(chi.value(3), Complex64::new(-1.0, 0.0));
        assert_eq!(chi.value(2), Complex64::new(0.0, 0.0));
        assert!(chi.is_primitive());
        assert!(!DirichletCharacter::new(4, 0).unwrap().is_primitive());
    }

    #[test]
    fn characters_are_multiplicative() {
        for q in 1..=20u64 {
            let phi = (1..=q).filter(|&n| num_integer::gcd(n, q) == 1).count();
            for k in 0..phi {
                let chi = DirichletCharacter::new(q, k).unwrap();
                for m in 1..=40 {
                    for n in 1..=40 {
                        let d = chi.value(m * n) - chi.value(m) * chi.value(n);
                        assert!(d.norm() < 1e-12, "q={q} k={k} m={m} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn characters_are_distinct() {
        for q in [8u64, 12, 15, 16, 20] {
            let phi = (1..=q).filter(|&n| num_integer::gcd(n, q) == 1).count();
            let tables: Vec<Vec<Complex64>> = (0..phi)
                .map(|k| {
                    let c = DirichletCharacter::new(q, k).unwrap();
                    (0..q).map(|n| c.value(n)).collect()
                })
                .collect();
            for i in 0..phi {
                for j in 0..i {
                    let diff: f64 = tables[i].iter().zip(&tables[j]).map(|(a, b)| (a - b).norm()).sum();
                    assert!(diff > 1e-6, "q={q} characters {i},{j} coincide");
                }
            }
        }
    }

    #[test]
    fn registry_lookup() {
        assert_eq!(builtin("chi:5:2").unwrap().name(), "chi:5:2");
        assert!(builtin("nope").is_err());
        assert!(builtin("chi:21:1").is_err());
        let alt = builtin("alternating").unwrap();
        for (a, b) in [(1, 5), (2, 7), (3, 3), (4, 10)] {
            let direct: f64 = (a..b).map(|n| alt.coeff(n).re).sum();
            assert_eq!(alt.range_sum(a..b).unwrap().re, direct);
        }
        assert_eq!(Mobius.coeff(30).re, -1.0);
        assert_eq!(Mobius.coeff(12).re, 0.0);
    }
}

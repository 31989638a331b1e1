//! Built-in example series with their known abscissae and basis facts.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::coefficients::Coefficients;
use crate::error::{Error, Result};
use crate::exponents::{ExponentSpec, Generator, Row};
use crate::expr::Expr;
use crate::precision::HpReal;
use crate::series::{DirichletSeries, TailMajorant};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KnownFacts {
    pub sigma_a: Option<f64>,
    pub sigma_u: Option<f64>,
    pub basis_kind: String,
    pub integral: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub series: DirichletSeries,
    pub known: KnownFacts,
    pub notes: String,
}

/// Names accepted by [`entry`].
pub const ENTRY_NAMES: &[&str] = &["zeta", "dirichlet-l", "hurwitz", "bohr", "smooth"];

/// `ζ` truncated to `n ≤ n_max`: `a(n) = 1`, `λ_n = log n`.
pub fn zeta_series(n_max: u64) -> Result<CorpusEntry> {
    if n_max < 2 {
        return Err(Error::Invalid("zeta needs n_max ≥ 2".into()));
    }
    let series = DirichletSeries::new(
        "zeta",
        ExponentSpec::ordinary(n_max)?,
        Coefficients::builtin("ones")?,
        TailMajorant::UniformBound { a: 1.0 },
        1.0,
    )?;
    Ok(CorpusEntry {
        series,
        known: KnownFacts {
            sigma_a: Some(1.0),
            sigma_u: Some(1.0),
            basis_kind: "prime logarithms".into(),
            integral: Some(true),
        },
        notes: "Euler structure; not universal right of 1".into(),
    })
}

/// `L(s, χ)` for the character `chi:q:index`.
pub fn dirichlet_l(q: u64, index: usize, n_max: u64) -> Result<CorpusEntry> {
    let coefficients = Coefficients::builtin(&format!("chi:{q}:{index}"))?;
    let chi = crate::coefficients::DirichletCharacter::new(q, index)?;
    let series = DirichletSeries::new(
        format!("L(s, chi_{q},{index})"),
        ExponentSpec::ordinary(n_max)?,
        coefficients,
        TailMajorant::UniformBound { a: 1.0 },
        1.0,
    )?;
    let primitive = chi.is_primitive() && !chi.is_principal();
    Ok(CorpusEntry {
        series,
        known: KnownFacts {
            sigma_a: Some(1.0),
            sigma_u: primitive.then_some(1.0),
            basis_kind: "prime logarithms".into(),
            integral: Some(true),
        },
        notes: if primitive {
            "primitive non-principal character".into()
        } else {
            "imprimitive or principal character".into()
        },
    })
}

/// `Σ_{k≥0} (k+α)^{-s}` with term `n` carrying `λ_n = log(n − 1 + α)`.
///
/// The basis is the exponents themselves (identity matrix); their linear
/// independence is the caller's claim about `α`.
pub fn hurwitz_series(alpha: &Expr, n_max: u64) -> Result<CorpusEntry> {
    let a = alpha.eval_f64();
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Invalid(format!("alpha must lie in (0, 1), got {a}")));
    }
    let basis: Vec<Generator> = (0..n_max)
        .map(|k| {
            let e = Expr::Log(Box::new(Expr::Add(Box::new(Expr::int(k as i64)), Box::new(alpha.clone()))));
            Generator::new(format!("log({k}+alpha)"), e)
        })
        .collect::<Result<_>>()?;
    let series = DirichletSeries::new(
        "hurwitz",
        ExponentSpec::identity(basis)?,
        Coefficients::builtin("ones")?,
        TailMajorant::UniformBound { a: 1.0 },
        1.0,
    )?;
    Ok(CorpusEntry {
        series,
        known: KnownFacts {
            sigma_a: Some(1.0),
            sigma_u: Some(1.0),
            basis_kind: "identity".into(),
            integral: Some(true),
        },
        notes: "linear independence of the exponents is an unchecked annotation".into(),
    })
}

/// `F(s) = Σ e^{-λ_n s}` with `λ_n = k + 1/(2k)`, `k = 2n − 1`, over the
/// single generator 1.
pub fn bohr_example(n_max: u64) -> Result<CorpusEntry> {
    if n_max == 0 {
        return Err(Error::Invalid("n_max must be at least 1".into()));
    }
    let rows: Vec<Row> = (1..=n_max)
        .map(|n| {
            let k = 2 * n as i64 - 1;
            vec![(0, Ratio::new(2 * k * k + 1, 2 * k))]
        })
        .collect();
    let series = DirichletSeries::new(
        "bohr",
        ExponentSpec::symbolic(vec![Generator::new("1", Expr::int(1))?], rows)?,
        Coefficients::builtin("ones")?,
        TailMajorant::UniformBound { a: 1.0 },
        0.0,
    )?;
    Ok(CorpusEntry {
        series,
        known: KnownFacts {
            sigma_a: Some(0.0),
            sigma_u: Some(0.0),
            basis_kind: "rational multiples of 1".into(),
            integral: Some(false),
        },
        notes: "F and -F are translates in the limit but not equivalent".into(),
    })
}

/// `2π ∏_{n≤m} (2n − 1)`.
pub fn bohr_tau(m: u64) -> HpReal {
    let mut p = num_bigint::BigInt::from(1);
    for n in 1..=m {
        p *= 2 * n - 1;
    }
    let bits = (p.bits() as usize + 128).max(crate::precision::DEFAULT_BITS);
    HpReal::two_pi(bits).mul(&HpReal::from_bigint(&p, bits))
}

/// `Σ n^{-s}` over the `primes`-smooth `n ≤ limit`, with basis `(log p)`.
pub fn smooth_series(primes: &[u64], limit: u64) -> Result<CorpusEntry> {
    if primes.is_empty() || primes.iter().any(|&p| !crate::arith::is_prime(p)) {
        return Err(Error::Invalid("smooth series needs a nonempty list of primes".into()));
    }
    let mut numbers = vec![1u64];
    for &p in primes {
        let mut next = Vec::new();
        for &n in &numbers {
            let mut v = n;
            while v <= limit {
                next.push(v);
                match v.checked_mul(p) {
                    Some(w) => v = w,
                    None => break,
                }
            }
        }
        numbers = next;
    }
    numbers.sort_unstable();
    let rows: Vec<Row> = numbers
        .iter()
        .map(|&n| {
            primes
                .iter()
                .enumerate()
                .filter_map(|(l, &p)| {
                    let e = crate::arith::valuation(n, p);
                    (e > 0).then(|| (l, Ratio::from_integer(e as i64)))
                })
                .collect()
        })
        .collect();
    let basis = primes.iter().map(|&p| Generator::log_prime(p)).collect();
    let series = DirichletSeries::new(
        format!("smooth{primes:?}"),
        ExponentSpec::symbolic(basis, rows)?,
        Coefficients::builtin("ones")?,
        TailMajorant::UniformBound { a: 1.0 },
        0.0,
    )?;
    Ok(CorpusEntry {
        series,
        known: KnownFacts {
            sigma_a: Some(0.0),
            sigma_u: Some(0.0),
            basis_kind: "prime logarithms".into(),
            integral: Some(true),
        },
        notes: "Euler product over finitely many primes".into(),
    })
}

/// Look up an entry by name with default parameters.
pub fn entry(name: &str, n_max: u64) -> Result<CorpusEntry> {
    match name {
        "zeta" => zeta_series(n_max),
        "dirichlet-l" => dirichlet_l(4, 1, n_max),
        "hurwitz" => hurwitz_series(&Expr::parse("1/pi")?, n_max),
        "bohr" => bohr_example(n_max),
        "smooth" => smooth_series(&[2, 3], n_max),
        _ => Err(Error::Invalid(format!("unknown corpus entry {name:?}; expected one of {ENTRY_NAMES:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::{integrality, Lcm};

    #[test]
    fn zeta_coefficients() {
        let z = zeta_series(100).unwrap();
        assert_eq!(z.series.coeff(5).unwrap().re, 1.0);
    }

    #[test]
    fn character_mod_four() {
        let l = dirichlet_l(4, 1, 50).unwrap();
        assert_eq!(l.series.coeff(3).unwrap().re, -1.0);
        assert_eq!(l.known.sigma_u, Some(1.0));
    }

    #[test]
    fn hurwitz_shifted_index() {
        let h = hurwitz_series(&Expr::parse("1/pi").unwrap(), 20).unwrap();
        let l1 = h.series.exponents().lambda(1);
        assert!((l1 - (1.0 / std::f64::consts::PI).ln()).abs() < 1e-15);
        assert!(l1 < 0.0);
        let m = h.series.exponents().matrix().unwrap();
        assert!(m.is_structurally_integral());
    }

    #[test]
    fn bohr_tau_four() {
        let t = bohr_tau(4);
        assert!((t.to_f64() - 210.0 * std::f64::consts::PI).abs() < 1e-9);
        let b = bohr_example(50).unwrap();
        let r = integrality(&b.series.exponents().matrix().unwrap(), 50, 1_000).unwrap();
        assert!(!r.is_integral);
        assert!(matches!(r.lcm_of_denominators, Lcm::Unbounded | Lcm::Finite(_)));
    }

    #[test]
    fn bohr_phases_flip() {
        let b = bohr_example(10).unwrap();
        let ph = b.series.exponents().shift_phases(4, &bohr_tau(4)).unwrap();
        for p in ph {
            assert!((p + 1.0).norm() < 1e-12, "{p}");
        }
    }

    #[test]
    fn smooth_rows() {
        let s = smooth_series(&[2, 3], 100).unwrap();
        assert_eq!(s.series.len(), 20);
        assert!((s.series.exponents().lambda(20) - 96f64.ln()).abs() < 1e-12);
    }
}

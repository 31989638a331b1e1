use super::{refine, KroneckerProblem, KroneckerStrategy, Search};
use crate::error::Result;
use crate::precision::HpReal;

const MOD_BITS: u32 = 60;

/// Exact closed form for `L = 1`; for `L = 2` the pivot coordinate is solved
/// exactly and the other reduces to a one-dimensional inhomogeneous
/// approximation, solved by Euclidean descent.
#[derive(Clone, Copy, Debug, Default)]
pub struct ContinuedFraction;

impl KroneckerStrategy for ContinuedFraction {
    fn name(&self) -> &'static str {
        "continued-fraction"
    }

    fn description(&self) -> &'static str {
        "closed form for L=1, Euclidean descent for L=2"
    }

    fn supports(&self, problem: &KroneckerProblem) -> bool {
        problem.dim() <= 2
    }

    fn run(&self, search: &mut Search<'_>) -> Result<()> {
        let p = search.problem;
        let bits = 192;
        let alphas = p.alphas(bits);
        let turns = p.target_turns(bits);
        let piv = p.pivot();
        let (ap, tp) = (&alphas[piv], &turns[piv]);
        let k0 = tp.neg().add_f64(0.5).floor();
        let hit = |k: &HpReal| tp.add(k).div(ap);
        if p.dim() == 1 {
            search.offer(hit(&k0));
            return Ok(());
        }
        let o = 1 - piv;
        // ‖γ(k0 + x) + c‖ < δ_o with γ = α_o/α_p, c = γ t_p − t_o
        let gamma = alphas[o].div(ap);
        let c = gamma.mul(&tp.add(&k0)).sub(&turns[o]);
        let m: u128 = 1 << MOD_BITS;
        let to_mod = |x: &HpReal| -> u128 {
            let f = x.frac().mul_f64(m as f64).round_to_bigint();
            let v: u128 = f.try_into().unwrap_or(0);
            v % m
        };
        let a = to_mod(&gamma);
        let b = to_mod(&c);
        let eta = ((p.deltas[o] * 0.9) * m as f64) as u128;
        let mut candidates: Vec<i128> = Vec::new();
        for (mult, sign) in [(a, 1i128), ((m - a) % m, -1i128)] {
            if let Some(x) = first_in_window(mult, b, m, eta) {
                candidates.push(sign * x as i128);
            }
        }
        candidates.sort_by_key(|x| x.unsigned_abs());
        let h = p.deltas[piv] / ap.to_f64().abs() * 0.999;
        for x in candidates {
            let k = k0.add(&HpReal::from_bigint(&x.into(), bits));
            if search.offer(refine(p, &hit(&k), h)) {
                break;
            }
        }
        Ok(())
    }
}

/// Smallest `x ≥ 0` with `(a·x + b) mod m` within `eta` of 0 (mod `m`).
pub(crate) fn first_in_window(a: u128, b: u128, m: u128, eta: u128) -> Option<u128> {
    if eta >= m / 2 {
        return Some(0);
    }
    // a·x mod m ∈ [m − b − eta, m − b + eta] (mod m)
    let lo = (2 * m - b - eta) % m;
    let hi = (m - b + eta) % m;
    if lo <= hi {
        first_hit(a, m, lo, hi)
    } else {
        let x1 = first_hit(a, m, lo, m - 1);
        let x2 = first_hit(a, m, 0, hi);
        match (x1, x2) {
            (Some(u), Some(v)) => Some(u.min(v)),
            (u, v) => u.or(v),
        }
    }
}

/// Smallest `x ≥ 0` with `l ≤ a·x mod m ≤ r`, for `0 ≤ l ≤ r < m`.
pub(crate) fn first_hit(a: u128, m: u128, l: u128, r: u128) -> Option<u128> {
    if l == 0 {
        return Some(0);
    }
    let a = a % m;
    if a == 0 {
        return None;
    }
    let k = l.div_ceil(a);
    if a * k <= r {
        return Some(k);
    }
    let y = first_hit(m % a, a, (a - r % a) % a, (a - l % a) % a)?;
    Some((l + m * y).div_ceil(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(a: u128, m: u128, l: u128, r: u128) -> Option<u128> {
        (0..m).find(|&x| (a * x % m) >= l && (a * x % m) <= r)
    }

    #[test]
    fn first_hit_matches_brute_force() {
        for m in [7u128, 16, 97, 101, 128] {
            for a in 0..m {
                for l in 0..m {
                    for r in (l..m).step_by(3) {
                        assert_eq!(first_hit(a, m, l, r), brute(a, m, l, r), "a={a} m={m} [{l},{r}]");
                    }
                }
            }
        }
    }

    #[test]
    fn window_wraps() {
        let m = 1000;
        for a in [1u128, 37, 999, 500] {
            for b in [0u128, 1, 250, 999] {
                let eta = 3;
                let want = (0..m).find(|&x| {
                    let v = (a * x + b) % m;
                    v <= eta || v >= m - eta
                });
                assert_eq!(first_in_window(a, b, m, eta), want, "a={a} b={b}");
            }
        }
    }

    proptest! {
        #[test]
        fn first_hit_is_least_solution(m in 2u128..5000, a in 0u128..5000, l in 0u128..5000, w in 0u128..200) {
            let a = a % m;
            let l = l % m;
            let r = (l + w).min(m - 1);
            prop_assert_eq!(first_hit(a, m, l, r), brute(a, m, l, r));
        }
    }
}

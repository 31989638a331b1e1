//! Small-integer number theory: a growable prime table, factorization and
//! modular helpers.

use std::sync::{Arc, RwLock};

use num_integer::Integer;

static PRIMES: RwLock<Option<(u64, Arc<Vec<u64>>)>> = RwLock::new(None);

fn sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn cut(table: &Arc<Vec<u64>>, limit: u64) -> Arc<Vec<u64>> {
    let end = table.partition_point(|&p| p <= limit);
    if end == table.len() {
        Arc::clone(table)
    } else {
        Arc::new(table[..end].to_vec())
    }
}

/// All primes `≤ limit`, served from a shared table that grows on demand.
pub fn primes_up_to(limit: u64) -> Arc<Vec<u64>> {
    cut(&covering_table(limit), limit)
}

/// The shared table itself; it covers at least `limit` and may extend past it.
pub fn covering_table(limit: u64) -> Arc<Vec<u64>> {
    {
        let guard = PRIMES.read().expect("prime table lock");
        if let Some((bound, table)) = guard.as_ref() {
            if *bound >= limit {
                return Arc::clone(table);
            }
        }
    }
    let mut guard = PRIMES.write().expect("prime table lock");
    let current = guard.as_ref().map(|(b, _)| *b).unwrap_or(0);
    if current < limit {
        let target = limit.max(current.saturating_mul(2)).max(1 << 16);
        *guard = Some((target, Arc::new(sieve(target))));
    }
    let (_, table) = guard.as_ref().expect("table present");
    Arc::clone(table)
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    let mut bound = 64u64;
    loop {
        let t = primes_up_to(bound);
        if t.len() >= count {
            return t[..count].to_vec();
        }
        bound *= 2;
    }
}

/// The `index`-th prime, 0-based (2 ↦ index 0).
pub fn nth_prime(index: usize) -> u64 {
    let mut bound = 64u64;
    loop {
        let t = covering_table(bound);
        if t.len() > index {
            return t[index];
        }
        bound = bound.max(*t.last().unwrap_or(&2)) * 2;
    }
}

/// Number of primes `≤ n`.
pub fn prime_count(n: u64) -> usize {
    covering_table(n).partition_point(|&p| p <= n)
}

/// Index of `p` among the primes (2 ↦ 0), or `None` when `p` is not prime.
pub fn prime_index(p: u64) -> Option<usize> {
    let t = covering_table(p);
    match t.binary_search(&p) {
        Ok(i) => Some(i),
        Err(_) => None,
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization `n = Π p^e` in increasing order of `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let root = (n as f64).sqrt() as u64 + 1;
    let table = covering_table(root.max(2));
    for &p in table.iter() {
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// p-adic valuation.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

pub fn lcm_capped(a: u64, b: u64, cap: u64) -> Option<u64> {
    let g = a.gcd(&b);
    let l = (a / g).checked_mul(b)?;
    (l <= cap).then_some(l)
}

/// Reduce an angle to `[0, 2π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let r = x.rem_euclid(two_pi);
    if r >= two_pi {
        0.0
    } else {
        r
    }
}

/// Reduce an angle to `(-π, π]`.
pub fn centered_angle(x: f64) -> f64 {
    let r = wrap_angle(x);
    if r > std::f64::consts::PI {
        r - std::f64::consts::TAU
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_to_30() {
        assert_eq!(
            primes_up_to(30).as_slice(),
            &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        );
        assert_eq!(first_primes(4), vec![2, 3, 5, 7]);
        assert_eq!(prime_index(29), Some(9));
        assert_eq!(prime_index(30), None);
        assert_eq!(nth_prime(9), 29);
        assert_eq!(prime_count(30), 10);
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert_eq!(factorize(2 * 2 * 3 * 1_000_003), vec![(2, 2), (3, 1), (1_000_003, 1)]);
    }

    #[test]
    fn angles() {
        assert!((centered_angle(3.0 * std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
        assert!(wrap_angle(-0.5) > 5.0);
    }
}

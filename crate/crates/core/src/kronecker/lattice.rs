use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{refine, KroneckerProblem, KroneckerStrategy, Search};
use crate::error::Result;
use crate::precision::HpReal;

/// LLL reduction followed by Babai nearest-plane rounding toward the
/// target, after solving the pivot coordinate exactly.
#[derive(Clone, Debug)]
pub struct Lattice {
    /// Lovász parameter.
    pub delta: f64,
    /// Extra precision bits in the integer embedding.
    pub guard_bits: u32,
    /// Number of reduced vectors whose `{−1, 0, 1}` combinations are tried
    /// around the Babai point.
    pub neighbourhood: usize,
}

impl Default for Lattice {
    fn default() -> Self {
        Lattice {
            delta: 0.99,
            guard_bits: 40,
            neighbourhood: 6,
        }
    }
}

/// In-place LLL reduction of the rows of `b` with exact integer Gram matrix
/// and floating Gram–Schmidt.
pub fn lll(b: &mut [Vec<BigInt>], delta: f64) {
    let n = b.len();
    if n < 2 {
        return;
    }
    let dot = |u: &[BigInt], v: &[BigInt]| -> BigInt { u.iter().zip(v).map(|(x, y)| x * y).sum() };
    let mut g: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| dot(&b[i], &b[j])).collect()).collect();
    let mut r = vec![vec![0.0f64; n]; n];
    let mut mu = vec![vec![0.0f64; n]; n];
    let f = |x: &BigInt| x.to_f64().unwrap_or(f64::INFINITY);
    let gs_row = |k: usize, g: &[Vec<BigInt>], r: &mut [Vec<f64>], mu: &mut [Vec<f64>]| {
        for j in 0..=k {
            let mut v = f(&g[k][j]);
            for l in 0..j {
                v -= mu[j][l] * r[k][l];
            }
            r[k][j] = v;
            if j < k {
                mu[k][j] = v / r[j][j];
            }
        }
        mu[k][k] = 1.0;
    };
    gs_row(0, &g, &mut r, &mut mu);
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 1_000_000 {
            log::warn!("LLL iteration cap reached");
            break;
        }
        for _ in 0..64 {
            gs_row(k, &g, &mut r, &mut mu);
            let mut changed = false;
            for j in (0..k).rev() {
                if mu[k][j].abs() > 0.51 {
                    let x = mu[k][j].round();
                    let xb = BigInt::from(x as i128);
                    let (bj, rest) = if j < k {
                        let (lo, hi) = b.split_at_mut(k);
                        (&lo[j], &mut hi[0])
                    } else {
                        unreachable!()
                    };
                    for (c, d) in rest.iter_mut().zip(bj) {
                        *c -= &xb * d;
                    }
                    // Gram update for b_k ← b_k − x b_j
                    let gkj = g[k][j].clone();
                    let gjj = g[j][j].clone();
                    g[k][k] = &g[k][k] - &xb * &gkj * 2 + &xb * &xb * &gjj;
                    for i in 0..n {
                        if i != k {
                            let v = &g[k][i] - &xb * &g[j][i];
                            g[k][i] = v.clone();
                            g[i][k] = v;
                        }
                    }
                    for l in 0..=j {
                        mu[k][l] -= x * mu[j][l];
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let m = mu[k][k - 1];
        if delta * r[k - 1][k - 1] > r[k][k] + m * m * r[k - 1][k - 1] {
            b.swap(k, k - 1);
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            k = (k - 1).max(1);
            if k == 1 {
                gs_row(0, &g, &mut r, &mut mu);
            }
        } else {
            k += 1;
        }
    }
}

/// Coefficients of the Babai nearest-plane approximation to `t`.
fn babai(b: &[Vec<BigInt>], t: &[BigInt], scale: f64) -> Vec<BigInt> {
    let n = b.len();
    let dim = t.len();
    let bf: Vec<Vec<f64>> = b
        .iter()
        .map(|v| v.iter().map(|x| x.to_f64().unwrap_or(0.0) / scale).collect())
        .collect();
    // Gram–Schmidt of the reduced basis
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = bf[i].clone();
        for s in &star {
            let den: f64 = s.iter().map(|x| x * x).sum();
            let c = v.iter().zip(s).map(|(a, b)| a * b).sum::<f64>() / den;
            for (x, y) in v.iter_mut().zip(s) {
                *x -= c * y;
            }
        }
        star.push(v);
    }
    let mut res: Vec<BigInt> = t.to_vec();
    let mut coeffs = vec![BigInt::zero(); n];
    for i in (0..n).rev() {
        let rf: Vec<f64> = res.iter().map(|x| x.to_f64().unwrap_or(0.0) / scale).collect();
        let den: f64 = star[i].iter().map(|x| x * x).sum();
        let c = (rf.iter().zip(&star[i]).map(|(a, b)| a * b).sum::<f64>() / den).round();
        if c != 0.0 && c.is_finite() {
            let cb = BigInt::from(c as i128);
            for d in 0..dim {
                res[d] -= &cb * &b[i][d];
            }
            coeffs[i] = cb;
        }
    }
    coeffs
}

impl KroneckerStrategy for Lattice {
    fn name(&self) -> &'static str {
        "lattice"
    }

    fn description(&self) -> &'static str {
        "LLL reduction with Babai rounding"
    }

    fn supports(&self, problem: &KroneckerProblem) -> bool {
        problem.dim() <= 64
    }

    fn run(&self, search: &mut Search<'_>) -> Result<()> {
        let p = search.problem;
        let piv = p.pivot();
        let others: Vec<usize> = (0..p.dim()).filter(|&l| l != piv).collect();
        // expected size of the pivot index that solves everything
        let log2_k: f64 = others.iter().map(|&l| -(2.0 * p.deltas[l]).log2()).sum();
        let mut scale_k = 0i32;
        loop {
            let kb = (log2_k + 2.0 * scale_k as f64).max(1.0);
            let bits = kb.ceil() as u32 + self.guard_bits;
            let hp_bits = bits as usize + 128;
            let alphas = p.alphas(hp_bits);
            let turns = p.target_turns(hp_bits);
            let (ap, tp) = (&alphas[piv], &turns[piv]);
            let k0 = tp.neg().add_f64(0.5).floor();
            let base = tp.add(&k0);
            let h = p.deltas[piv] / ap.to_f64().abs() * 0.999;
            let hit = |k: &BigInt| base.add(&HpReal::from_bigint(k, hp_bits)).div(ap);
            if others.is_empty() {
                search.offer(hit(&BigInt::zero()));
                return Ok(());
            }
            let n = others.len();
            let s = HpReal::from_f64(2f64.powi(bits as i32), hp_bits);
            let k_unit = BigInt::from(2u64).pow(bits - kb.ceil() as u32);
            // rows: pivot index generator, then one generator per other coordinate
            let mut basis: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n + 1]; n + 1];
            let mut target = vec![BigInt::zero(); n + 1];
            for (i, &l) in others.iter().enumerate() {
                let w = s.mul_f64(1.0 / p.deltas[l]);
                let gamma = alphas[l].div(ap);
                let c = gamma.mul(&base).sub(&turns[l]);
                basis[0][i] = gamma.frac().mul(&w).round_to_bigint();
                basis[i + 1][i] = -w.round_to_bigint();
                target[i] = HpReal::from_f64(-c.centered_frac(), hp_bits).mul(&w).round_to_bigint();
            }
            basis[0][n] = k_unit.clone();
            if !search.budget.spend((n as u64 + 1).pow(2)) {
                return Ok(());
            }
            lll(&mut basis, self.delta);
            let scale = 2f64.powi(bits as i32);
            let coeffs = babai(&basis, &target, scale);
            let mut centre = vec![BigInt::zero(); n + 1];
            for (c, v) in coeffs.iter().zip(&basis) {
                for d in 0..=n {
                    centre[d] += c * &v[d];
                }
            }
            // candidates ordered by how far their residual exceeds the box
            let width = self.neighbourhood.min(n + 1);
            let mut cands: Vec<(f64, BigInt)> = Vec::new();
            let combos = 3usize.pow(width as u32);
            for code in 0..combos {
                let mut v = centre.clone();
                let mut c = code;
                for row in basis.iter().take(width) {
                    match c % 3 {
                        1 => v.iter_mut().zip(row).for_each(|(a, b)| *a += b),
                        2 => v.iter_mut().zip(row).for_each(|(a, b)| *a -= b),
                        _ => {}
                    }
                    c /= 3;
                }
                let worst = (0..n)
                    .map(|d| ((&v[d] - &target[d]).to_f64().unwrap_or(f64::INFINITY) / scale).abs())
                    .fold(0.0, f64::max);
                let k = &v[n] / &k_unit;
                cands.push((worst, k));
            }
            cands.sort_by(|a, b| a.0.total_cmp(&b.0));
            cands.dedup_by(|a, b| a.1 == b.1);
            for (worst, k) in cands.into_iter().take(32) {
                if worst > 4.0 {
                    break;
                }
                let tau = refine(p, &hit(&k), h);
                if search.offer(tau) || search.budget.exhausted() {
                    return Ok(());
                }
            }
            scale_k += 1;
            if scale_k > 12 || search.budget.exhausted() {
                return Ok(());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn lll_reduces_classic_example() {
        let mut b = vec![row(&[1, 1, 1]), row(&[-1, 0, 2]), row(&[3, 5, 6])];
        lll(&mut b, 0.99);
        let norms: Vec<i64> = b
            .iter()
            .map(|v| v.iter().map(|x| x.to_i64().unwrap().pow(2)).sum())
            .collect();
        assert!(norms.iter().all(|&n| n <= 5), "{b:?}");
    }

    #[test]
    fn lll_finds_small_relation() {
        // knapsack-style: relation 3·x − 2·y ≈ 0 hidden in large weights
        let w = 1i64 << 40;
        let mut b = vec![row(&[1, 0, 2 * w]), row(&[0, 1, 3 * w])];
        lll(&mut b, 0.99);
        let first: Vec<i64> = b[0].iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(first[2], 0);
        assert_eq!(first[0].abs(), 3);
        assert_eq!(first[1].abs(), 2);
    }
}

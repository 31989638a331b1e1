use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::KroneckerProblem;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityReport {
    pub estimate: f64,
    pub hits: u64,
    pub samples: u64,
    pub t_max: f64,
    pub seed: u64,
    /// Binomial standard error of the estimate.
    pub std_error: f64,
    /// `Π 2δ_ℓ`, the density for independent frequencies.
    pub independent: f64,
}

/// Monte Carlo share of `τ ∈ [−T, T]` solving the problem.
pub fn density_estimate(problem: &KroneckerProblem, t_max: f64, samples: u64, seed: u64) -> Result<DensityReport> {
    problem.validate()?;
    if !(t_max > 0.0 && t_max <= 1e12) {
        return Err(Error::Invalid("T must lie in (0, 1e12]".into()));
    }
    if samples == 0 {
        return Err(Error::Invalid("need at least one sample".into()));
    }
    let alphas: Vec<f64> = problem.alphas(128).iter().map(|a| a.to_f64()).collect();
    let turns: Vec<f64> = problem.target_turns(128).iter().map(|t| t.to_f64()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let taus: Vec<f64> = (0..samples).map(|_| rng.gen_range(-t_max..=t_max)).collect();
    let hits = taus
        .par_iter()
        .filter(|&&tau| {
            alphas.iter().zip(&turns).zip(&problem.deltas).all(|((a, t), d)| {
                let x = a * tau - t;
                (x - x.round()).abs() < *d
            })
        })
        .count() as u64;
    let estimate = hits as f64 / samples as f64;
    Ok(DensityReport {
        estimate,
        hits,
        samples,
        t_max,
        seed,
        std_error: (estimate * (1.0 - estimate) / samples as f64).sqrt(),
        independent: problem.deltas.iter().map(|d| 2.0 * d).product(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::HpReal;

    #[test]
    fn matches_independent_density() {
        let b = vec![HpReal::from_i64(2, 128).ln(), HpReal::from_i64(3, 128).ln()];
        let p = KroneckerProblem::new(b, vec![1.0, 2.0], 1, 0.1).unwrap();
        let r = density_estimate(&p, 1e4, 50_000, 7).unwrap();
        assert!((r.estimate - 0.04).abs() < 0.005, "{r:?}");
        let again = density_estimate(&p, 1e4, 50_000, 7).unwrap();
        assert_eq!(r.hits, again.hits);
    }
}

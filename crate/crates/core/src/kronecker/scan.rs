use super::{refine, KroneckerProblem, KroneckerStrategy, Search};
use crate::error::Result;
use crate::precision::HpReal;

/// Walks the exact hits of the pivot coordinate in order of increasing
/// `|τ|`, testing the remaining coordinates at each.
#[derive(Clone, Copy, Debug, Default)]
pub struct GridScan;

impl KroneckerStrategy for GridScan {
    fn name(&self) -> &'static str {
        "grid-scan"
    }

    fn description(&self) -> &'static str {
        "scan of pivot hits by increasing |tau|"
    }

    fn supports(&self, _problem: &KroneckerProblem) -> bool {
        true
    }

    fn run(&self, search: &mut Search<'_>) -> Result<()> {
        let p = search.problem;
        let bits = 192;
        let alphas = p.alphas(bits);
        let turns = p.target_turns(bits);
        let piv = p.pivot();
        let (ap, tp) = (&alphas[piv], &turns[piv]);
        let k0 = tp.neg().add_f64(0.5).floor();
        let base = tp.add(&k0);
        // offset r ∈ [−1/2, 1/2): hits sit at (r + k)/α_p
        let r = base.to_f64();
        let h = p.deltas[piv] / ap.to_f64().abs() * 0.999;
        let others: Vec<(f64, f64, f64, f64)> = (0..p.dim())
            .filter(|&l| l != piv)
            .map(|l| {
                let gamma = alphas[l].div(ap);
                let c = gamma.mul(&base).sub(&turns[l]).centered_frac();
                let g = gamma.to_f64();
                (gamma.frac().to_f64(), c, p.deltas[l] + g.abs() * p.deltas[piv], g)
            })
            .collect();
        let hit = |k: i64| base.add(&HpReal::from_i64(k, bits)).div(ap);
        // order k = 0, then by |r + k|
        let (mut up, mut down) = (0i64, -1i64);
        loop {
            let k = if (r + up as f64).abs() <= (r + down as f64).abs() {
                up += 1;
                up - 1
            } else {
                down -= 1;
                down + 1
            };
            if !search.budget.spend(1) {
                return Ok(());
            }
            let near = others.iter().all(|&(gf, c, slack, _)| {
                let x = c + gf * k as f64;
                (x - x.round()).abs() < slack
            });
            if near && search.offer(refine(p, &hit(k), h)) {
                return Ok(());
            }
        }
    }
}

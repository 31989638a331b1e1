//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dseries::coefficients::Coefficients;
use dseries::corpus::{bohr_example, bohr_tau, smooth_series, zeta_series};
use dseries::equivalence::{detect_twist, helly_limit, limit_series, twist, DetectOptions, DetectOutcome, LimitSource};
use dseries::exponents::ExponentSpec;
use dseries::kronecker::{density_estimate, solve, KroneckerProblem, SolveStatus};
use dseries::precision::HpReal;
use dseries::rigidity::{
    find_translate, reverify, value_set_check, verify_translate, CertificateStatus, CompactSet, ProbeStatus,
    TranslateOptions, ValueSetOptions, VerifyOptions,
};
use dseries::series::{sigma_uniform_estimate, DirichletSeries, SamplingPlan, TailMajorant, Truncation};
use dseries::twist::TwistVector;

type Outcome = Result<String, String>;

fn check(cond: bool, ok: String, bad: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(bad)
    }
}

fn primes_upto(n: u64) -> usize {
    dseries::arith::prime_count(n)
}

fn random_list(rng: &mut ChaCha8Rng, n: usize) -> DirichletSeries {
    let values: Vec<Complex64> = (0..n)
        .map(|_| Complex64::from_polar(rng.gen_range(0.1..2.0), rng.gen_range(0.0..2.0 * PI)))
        .collect();
    DirichletSeries::new(
        "random",
        ExponentSpec::ordinary(n as u64).unwrap(),
        Coefficients::list(values),
        TailMajorant::UniformBound { a: 2.0 },
        1.0,
    )
    .unwrap()
}

fn random_twist(rng: &mut ChaCha8Rng, len: usize) -> TwistVector {
    TwistVector::with_zero_tail((0..len).map(|_| rng.gen_range(0.0..2.0 * PI)).collect())
}

fn arg_diff(a: Complex64, b: Complex64) -> f64 {
    (a / b).arg().abs()
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_mod = 0.0f64;
    let mut worst_phase = 0.0f64;
    for _ in 0..1000 {
        let f = random_list(&mut rng, 64);
        let k = primes_upto(64);
        let (y1, y2) = (random_twist(&mut rng, k), random_twist(&mut rng, k));
        let both = twist(&twist(&f, &y2).unwrap(), &y1).unwrap();
        let sum = twist(&f, &y1.add(&y2)).unwrap();
        let once = twist(&f, &y1).unwrap();
        for n in 1..=64 {
            let a = f.coeff(n).unwrap();
            let b = once.coeff(n).unwrap();
            worst_mod = worst_mod.max((b.norm() - a.norm()).abs() / a.norm());
            worst_phase = worst_phase.max(arg_diff(both.coeff(n).unwrap(), sum.coeff(n).unwrap()));
        }
    }
    check(
        worst_mod < 1e-15 && worst_phase < 1e-12,
        format!("max relative |b|-|a| = {worst_mod:.1e}, composition phase error = {worst_phase:.1e}"),
        format!("modulus error {worst_mod:e}, phase error {worst_phase:e}"),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let f = random_list(&mut rng, 200);
        let y = random_twist(&mut rng, primes_upto(50));
        let g = twist(&f, &y).unwrap();
        let out = detect_twist(&f, &g, 200, &DetectOptions::default()).unwrap();
        let DetectOutcome::Equivalent { y: found, .. } = out else {
            return Err(format!("detect_twist failed: {out:?}"));
        };
        let h = twist(&f, &found).unwrap();
        for n in 1..=200 {
            worst = worst.max(arg_diff(h.coeff(n).unwrap(), g.coeff(n).unwrap()));
        }
    }
    check(
        worst < 1e-9,
        format!("20 round trips, max phase mismatch {worst:.1e}"),
        format!("phase mismatch {worst:e}"),
    )
}

fn criterion_3() -> Outcome {
    let z = zeta_series(1_000_000_000).unwrap().series;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tw = twist(&z, &random_twist(&mut rng, 200)).unwrap();
    let grid: Vec<f64> = (0..=8).map(|k| 4.5 + 2.0 * k as f64).collect();
    let plan = SamplingPlan::default();
    let a = sigma_uniform_estimate(&z, &grid, &plan).map_err(|e| e.to_string())?;
    let b = sigma_uniform_estimate(&tw, &grid, &plan).map_err(|e| e.to_string())?;
    let gap = (a.estimate - b.estimate).abs();
    check(
        gap < 0.05 && (0.85..=1.0).contains(&a.estimate),
        format!("zeta {:.4}, twist {:.4}, gap {gap:.4}", a.estimate, b.estimate),
        format!("zeta {}, twist {}, gap {gap}", a.estimate, b.estimate),
    )
}

/// First `τ` on a `step` grid, scanning outward from 0, meeting the tolerance.
fn scan_oracle(alpha: f64, t: f64, delta: f64, step: f64) -> Option<f64> {
    let ok = |tau: f64| {
        let x = alpha * tau - t;
        (x - x.round()).abs() < delta
    };
    let limit = 10.0 / alpha.abs() + 1.0;
    let mut k = 0i64;
    while k as f64 * step <= limit {
        for tau in [k as f64 * step, -(k as f64) * step] {
            if ok(tau) {
                return Some(tau);
            }
        }
        k += 1;
    }
    None
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let b = vec![HpReal::from_i64(2, 256).ln(), HpReal::from_i64(3, 256).ln()];
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let y = vec![rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI)];
        let p = KroneckerProblem::new(b.clone(), y, 1, 1e-3).unwrap();
        let s = solve(&p, "auto", 10_000_000).unwrap();
        if s.status != SolveStatus::Found {
            return Err(format!("L=2 exhausted: {s:?}"));
        }
        let d = p.distances(&s.tau, 256);
        worst = worst.max(d.iter().copied().fold(0.0, f64::max));
    }
    if worst >= 1e-3 {
        return Err(format!("L=2 distance {worst}"));
    }
    let delta = 1e-3;
    for i in 0..20 {
        let beta = rng.gen_range(0.5..3.0);
        let y = rng.gen_range(0.0..2.0 * PI);
        let p = KroneckerProblem::new(vec![HpReal::from_f64(beta, 128)], vec![y], 1, delta).unwrap();
        let alpha = beta / (2.0 * PI);
        let oracle = scan_oracle(alpha, -y / (2.0 * PI), delta, 1e-4).ok_or("oracle found nothing")?;
        for name in ["continued-fraction", "lattice", "grid-scan"] {
            let s = solve(&p, name, 1_000_000).unwrap();
            let tau = s.tau.to_f64();
            // same admissible interval as the oracle's point
            if s.status != SolveStatus::Found || (tau - oracle).abs() > 2.0 * delta / alpha + 1e-4 {
                return Err(format!("instance {i}: {name} gave {tau}, oracle {oracle}"));
            }
        }
    }
    Ok(format!("L=2 max distance {worst:.2e}; 20 L=1 instances agree with the scan oracle"))
}

fn criterion_5() -> Outcome {
    let l2 = HpReal::from_i64(2, 128).ln();
    let l3 = HpReal::from_i64(3, 128).ln();
    let p1 = KroneckerProblem::new(vec![l2.clone()], vec![1.0], 1, 0.05).unwrap();
    let p2 = KroneckerProblem::new(vec![l2, l3], vec![1.0, 2.0], 1, 0.05).unwrap();
    let d1 = density_estimate(&p1, 1e4, 100_000, 0).unwrap();
    let d2 = density_estimate(&p2, 1e4, 100_000, 0).unwrap();
    check(
        (d1.estimate - 0.10).abs() <= 0.01 && (d2.estimate - 0.01).abs() <= 0.005,
        format!("L=1 {:.4}, L=2 {:.4}", d1.estimate, d2.estimate),
        format!("L=1 {}, L=2 {}", d1.estimate, d2.estimate),
    )
}

fn zeta_pair() -> (DirichletSeries, DirichletSeries, TwistVector) {
    let z = zeta_series(500).unwrap().series;
    let y = TwistVector::sparse(&[(0, PI / 3.0), (1, PI / 5.0)]);
    let f = twist(&z, &y).unwrap();
    (z, f, y)
}

fn criterion_6() -> Outcome {
    let (z, f, y) = zeta_pair();
    let k = CompactSet::rectangle(1.6, 2.2, -1.0, 1.0).unwrap();
    let cert = find_translate(&[z.clone()], &[f.clone()], &[k.clone()], 0.1, Some(&y), &TranslateOptions::default())
        .map_err(|e| e.to_string())?;
    if cert.status != CertificateStatus::Verified {
        return Err(format!("status {:?}, totals {:?}", cert.status, cert.total_per_j));
    }
    let again = reverify(&[z], &[f], &[k], &cert).map_err(|e| e.to_string())?;
    check(
        again.max_total < 0.1,
        format!(
            "tau ~ {:.3e}, total {:.4}, resampled {:.4} (M = {}, {} coordinates)",
            cert.tau.to_f64(),
            cert.report.max_total,
            again.max_total,
            cert.budget.m,
            cert.budget.active_coords.len()
        ),
        format!("resampled total {}", again.max_total),
    )
}

fn criterion_7() -> Outcome {
    let f = bohr_example(200).unwrap().series;
    let g = f.scaled(Complex64::new(-1.0, 0.0));
    let k = CompactSet::rectangle(2.0, 3.0, -1.0, 1.0).unwrap();
    let opts = VerifyOptions {
        tail_accuracy: 1e-14,
        ..Default::default()
    };
    let r = verify_translate(&[f.clone()], &[g.clone()], &[k], &bohr_tau(4), &opts).map_err(|e| e.to_string())?;
    let sup = r.per_j[0].sampled_sup;
    let analytic = 2.0 * (-18.0f64).exp() / (1.0 - (-4.0f64).exp());
    let out = detect_twist(&f, &g, 200, &DetectOptions::default()).map_err(|e| e.to_string())?;
    check(
        sup < 1e-7 && sup <= analytic && !out.is_equivalent(),
        format!("sup {sup:.3e} <= analytic {analytic:.3e}; equiv(F, -F) incompatible"),
        format!("sup {sup:e}, analytic {analytic:e}, detect {out:?}"),
    )
}

fn criterion_8() -> Outcome {
    let taus: Vec<HpReal> = (1..=5000).map(|m| HpReal::from_i64(m, 192).mul(&HpReal::from_i64(2, 192).sqrt())).collect();
    let beta = vec![HpReal::from_i64(2, 192).ln(), HpReal::from_i64(3, 192).ln()];
    let table = helly_limit(&taus, &beta, 5e-3, 2).map_err(|e| e.to_string())?;
    let f = smooth_series(&[2, 3], 10_000).unwrap().series;
    let lim = limit_series(std::slice::from_ref(&f), LimitSource::Basis(&table)).map_err(|e| e.to_string())?;
    let g = &lim.series[0];
    let mut worst = 0.0f64;
    for n in 1..=f.len() {
        worst = worst.max((g.coeff(n).unwrap().norm() - f.coeff(n).unwrap().norm()).abs());
    }
    let det = detect_twist(&f, g, f.len(), &DetectOptions::default()).map_err(|e| e.to_string())?;
    check(
        table.spread < 1e-2 && worst < 1e-12 && det.is_equivalent(),
        format!(
            "subsequence of {} with spread {:.2e}; modulus error {worst:.1e}; twist recovered",
            table.subsequence.len(),
            table.spread
        ),
        format!("spread {}, modulus {worst}, detect {det:?}", table.spread),
    )
}

fn criterion_9() -> Outcome {
    let (z, f, y) = zeta_pair();
    let v = CompactSet::rectangle(1.6, 2.2, -1.0, 1.0).unwrap();
    let two = Complex64::new(2.0, 0.0);
    let fv = Truncation::new(&f, 500).unwrap().eval(two);
    let zv = Truncation::new(&z, 500).unwrap().eval(two);
    let r = value_set_check(&z, &f, &v, &[fv, zv], Some(&y), &ValueSetOptions::default()).map_err(|e| e.to_string())?;
    let fwd = &r.probes[0];
    let rev = &r.probes[3];
    check(
        fwd.status == ProbeStatus::Certified
            && rev.status == ProbeStatus::Certified
            && fwd.winding.unwrap_or(0) >= 1
            && rev.winding.unwrap_or(0) >= 1,
        format!(
            "f(2) in S_F(V) (winding {}), F(2) in S_f(V) (winding {})",
            fwd.winding.unwrap_or(0),
            rev.winding.unwrap_or(0)
        ),
        format!("forward {fwd:?}; reverse {rev:?}"),
    )
}

fn criterion_10() -> Outcome {
    let b = bohr_example(25).unwrap().series;
    let grid: Vec<f64> = (4..40).map(|k| k as f64 + 0.75).collect();
    let est = sigma_uniform_estimate(&b, &grid, &SamplingPlan::default()).map_err(|e| e.to_string())?;
    check(
        est.estimate < 0.1,
        format!("estimate {:.4} on x <= {}", est.estimate, grid.last().unwrap()),
        format!("estimate {}", est.estimate),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 10] = [
        ("twist algebra", criterion_1, 10),
        ("detect_twist round trip", criterion_2, 10),
        ("uniform abscissa under twists", criterion_3, 60),
        ("Kronecker solver", criterion_4, 60),
        ("density equidistribution", criterion_5, 60),
        ("translate search on zeta", criterion_6, 300),
        ("Bohr counterexample", criterion_7, 10),
        ("Helly extraction", criterion_8, 60),
        ("value sets", criterion_9, 300),
        ("Bohr abscissa", criterion_10, 10),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let slow = took > Duration::from_secs(*limit);
        let (tag, msg) = match (&result, slow) {
            (Ok(m), false) => ("PASS", m.clone()),
            (Ok(m), true) => ("FAIL", format!("{m} (over the {limit} s limit)")),
            (Err(m), _) => ("FAIL", m.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("{tag} criterion {:>2} {name}: {msg} [{:.2} s]", i + 1, took.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

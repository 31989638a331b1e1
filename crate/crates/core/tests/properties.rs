use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;

use dseries::corpus::{smooth_series, zeta_series};
use dseries::equivalence::{detect_twist, twist, DetectOptions};
use dseries::kronecker::{solve, strategy_names, KroneckerProblem, SolveStatus};
use dseries::precision::HpReal;
use dseries::rigidity::winding::winding_number;
use dseries::series::tail_bound;
use dseries::specfile::{format_float, SeriesFile};
use dseries::twist::TwistVector;

fn circle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn twist_preserves_modulus_and_composes(
        y1 in prop::collection::vec(-10.0f64..10.0, 4),
        y2 in prop::collection::vec(-10.0f64..10.0, 4),
    ) {
        let z = zeta_series(80).unwrap().series;
        let (t1, t2) = (TwistVector::with_zero_tail(y1), TwistVector::with_zero_tail(y2));
        let once = twist(&twist(&z, &t1).unwrap(), &t2).unwrap();
        let sum = twist(&z, &t1.add(&t2)).unwrap();
        for n in 1..=80 {
            let (a, b) = (once.coeff(n).unwrap(), sum.coeff(n).unwrap());
            prop_assert!((a.norm() - 1.0).abs() < 1e-12);
            prop_assert!((a - b).norm() < 1e-10, "n={} {} vs {}", n, a, b);
        }
    }

    #[test]
    fn detect_recovers_twist(y in prop::collection::vec(0.0f64..TAU, 3)) {
        let f = smooth_series(&[2, 3, 5], 2000).unwrap().series;
        let g = twist(&f, &TwistVector::new(y.clone())).unwrap();
        let out = detect_twist(&f, &g, f.len(), &DetectOptions::default()).unwrap();
        let got = out.twist_vector().expect("equivalent");
        for (l, want) in y.iter().enumerate() {
            prop_assert!(circle_diff(got.angle(l).unwrap(), *want) < 1e-9);
        }
    }

    #[test]
    fn one_dimensional_solutions_meet_tolerance(
        num in 1i64..1000,
        target in -3.0f64..3.0,
        delta in 1e-4f64..0.2,
        pick in 0usize..4,
    ) {
        let freq = HpReal::from_i64(num, 192).sqrt();
        let p = KroneckerProblem::new(vec![freq], vec![target], 1, delta).unwrap();
        let name = strategy_names()[pick];
        let sol = solve(&p, name, 1_000_000).unwrap();
        prop_assert_eq!(sol.status, SolveStatus::Found);
        prop_assert!(sol.distances[0] < delta, "{} gave {:?}", name, sol.distances);
    }

    #[test]
    fn floats_round_trip_exactly(x in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO) {
        let s = format_float(x);
        prop_assert_eq!(s.parse::<f64>().unwrap(), x);
    }

    #[test]
    fn list_spec_round_trip(
        values in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..30),
        tail in 0.0f64..5.0,
    ) {
        let list: Vec<[f64; 2]> = values.iter().map(|&(a, b)| [a, b]).collect();
        let a_max = values.iter().map(|&(a, b)| a.hypot(b)).fold(0.0, f64::max);
        let doc = serde_json::json!({
            "exponents": {"kind": "ordinary", "n_max": list.len()},
            "coefficients": {"kind": "list", "values": list},
            "tail": {"kind": "uniform", "A": a_max * (1.0 + tail)},
        });
        let file = SeriesFile::parse(&doc.to_string()).unwrap();
        let canon = SeriesFile::from_series(&file.build().unwrap()).unwrap().to_canonical_json().unwrap();
        let again = SeriesFile::from_series(&SeriesFile::parse(&canon).unwrap().build().unwrap()).unwrap();
        prop_assert_eq!(again.to_canonical_json().unwrap(), canon);
    }

    #[test]
    fn symbolic_rows_round_trip(steps in prop::collection::vec(1i64..50, 1..12), den in 1i64..9) {
        let mut acc = 0i64;
        let rows: Vec<_> = steps
            .iter()
            .map(|&step| {
                acc += step;
                serde_json::json!([[0, format!("{acc}/{den}")]])
            })
            .collect();
        let doc = serde_json::json!({
            "exponents": {"kind": "symbolic", "generators": [{"label": "g", "expr": "sqrt(2)"}], "rows": rows},
            "coefficients": {"kind": "builtin", "name": "alternating"},
            "tail": {"kind": "finite"},
        });
        let s = SeriesFile::parse(&doc.to_string()).unwrap().build().unwrap();
        let canon = SeriesFile::from_series(&s).unwrap().to_canonical_json().unwrap();
        let s2 = SeriesFile::parse(&canon).unwrap().build().unwrap();
        for n in 1..=s.len() {
            prop_assert_eq!(s.exponents().lambda(n), s2.exponents().lambda(n));
        }
    }

    #[test]
    fn tail_bound_monotone(m in 10u64..300, sigma in 1.2f64..3.0) {
        let z = zeta_series(400).unwrap().series;
        let t = tail_bound(&z, m, sigma);
        prop_assert!(t >= tail_bound(&z, m + 1, sigma));
        prop_assert!(t >= tail_bound(&z, m, sigma + 0.1));
    }

    #[test]
    fn winding_counts_powers(k in 1i64..6, r in 0.2f64..2.0) {
        let f = move |z: Complex64| z.powi(k as i32);
        let w = winding_number(f, Complex64::new(0.0, 0.0), r, Complex64::new(0.0, 0.0), 64, 1e-9).unwrap();
        prop_assert_eq!(w, k);
        let outside = winding_number(f, Complex64::new(3.0, 0.0), 0.5, Complex64::new(0.0, 0.0), 64, 1e-9).unwrap();
        prop_assert_eq!(outside, 0);
    }
}

#[test]
fn pi_twist_negates_odd_rows() {
    let z = zeta_series(50).unwrap().series;
    let g = twist(&z, &TwistVector::sparse(&[(0, PI)])).unwrap();
    for n in 1..=50u64 {
        let sign = if n.trailing_zeros() % 2 == 1 { -1.0 } else { 1.0 };
        assert!((g.coeff(n).unwrap().re - sign).abs() < 1e-12, "n={n}");
    }
}

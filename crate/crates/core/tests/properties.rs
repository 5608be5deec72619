mod common;

use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use quantinv_core::exactnum::{isolate_real_roots, make_algebraic, Interval, Rational};
use quantinv_core::invertibility::{
    analyze, invariant_orbit_search, invert_sequence, uldi_check, AnalyzeOptions, OrbitKind, UldiStatus,
    UliEvidence, UliStatus,
};
use quantinv_core::mahler::{graeffe_step, mahler_double, mahler_half, mahler_measure};
use quantinv_core::oracle::{
    bruteforce_indistinguishable, check_minor_gcd, manifold_membership, psi_matrix, BruteforceOptions,
    BruteforceOutcome,
};
use quantinv_core::sysmodel::{difference_alphabet, Coefficient, NormalizedSystem, QuantizedSystem};

fn rational(num: std::ops::RangeInclusive<i64>, den: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = Rational> {
    (num, den).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational(-60..=60, 1..=12).prop_filter("nonzero", |r| !r.is_zero())
}

fn expansive() -> impl Strategy<Value = Rational> {
    rational(13..=47, 12..=12).prop_filter("in (1,4)", |r| *r > Rational::one())
}

fn alphabet(max: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::btree_set(rational(-24..=24, 1..=6), 1..=max).prop_map(|s| s.into_iter().collect())
}

fn poly(max_degree: usize, range: i64) -> impl Strategy<Value = Vec<i64>> {
    (0..=max_degree)
        .prop_flat_map(move |d| proptest::collection::vec(-range..=range, d + 1))
        .prop_filter("nonzero leading", |c| *c.last().unwrap() != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rational_ops_match_cross_multiplication(n1 in -500i64..500, d1 in 1i64..80, n2 in -500i64..500, d2 in 1i64..80) {
        let (x, y) = (Rational::new(n1, d1).unwrap(), Rational::new(n2, d2).unwrap());
        let (d1b, d2b) = (BigInt::from(d1), BigInt::from(d2));
        let sum = &x + &y;
        prop_assert_eq!(sum.numer() * &d1b * &d2b, sum.denom() * BigInt::from(n1 * d2 + n2 * d1));
        let prod = &x * &y;
        prop_assert_eq!(prod.numer() * &d1b * &d2b, prod.denom() * BigInt::from(n1 * n2));
        if n2 != 0 {
            let q = x.checked_div(&y).unwrap();
            prop_assert_eq!(q.numer() * &d1b * BigInt::from(n2), q.denom() * BigInt::from(n1 * d2));
        }
        prop_assert_eq!((&x - &y) + y.clone(), x.clone());
        prop_assert_eq!(x < y, n1 * d2 < n2 * d1);
    }

    #[test]
    fn affine_image_is_measure_exact(lo in rational(-50..=50, 1..=9), len in rational(0..=40, 1..=7), a in nonzero_rational(), v in rational(-20..=20, 1..=5)) {
        let i = Interval::closed_open(lo.clone(), &lo + &len).unwrap_or_else(|_| Interval::point(lo.clone()));
        let out = i.affine_image(&a, &v);
        prop_assert_eq!(out.length(), &a.abs() * &i.length());
        let back = out.affine_preimage(&a, &v).unwrap();
        prop_assert_eq!(back, i);
    }

    #[test]
    fn algebraic_enclosures_nest(n in 2i64..60, bits in 16u32..256) {
        let root = (n as f64).sqrt();
        prop_assume!(root.fract() != 0.0);
        let hint = Interval::closed(Rational::one(), Rational::from(n)).unwrap();
        let alpha = make_algebraic(&int_poly(&[-n, 0, 1]), &hint).unwrap();
        let coarse = alpha.enclosure_with_bits(bits);
        let fine = alpha.enclosure_with_bits(bits * 2);
        prop_assert!(fine.is_subset_of(&coarse));
        for enc in [&coarse, &fine, alpha.enclosure()] {
            let (lo, hi) = (enc.lo(), enc.hi());
            prop_assert!(&(lo * lo) <= &Rational::from(n) && &(hi * hi) >= &Rational::from(n));
        }
    }

    #[test]
    fn root_isolation_counts_quadratics(c in poly(2, 30).prop_filter("degree 2", |c| c.len() == 3)) {
        let disc = c[1] * c[1] - 4 * c[0] * c[2];
        let expected = match disc.signum() { 1 => 2, 0 => 1, _ => 0 };
        let p = int_poly(&c);
        let roots = isolate_real_roots(&p).unwrap();
        prop_assert_eq!(roots.len(), expected);
        for r in &roots {
            if r.is_point() {
                prop_assert!(p.eval(r.lo()).is_zero());
            } else {
                let sq = p.primitive_part();
                let (a, b) = (sq.sign_at(r.lo()), sq.sign_at(r.hi()));
                prop_assert!(a * b < 0 || disc == 0);
            }
        }
    }

    #[test]
    fn root_isolation_counts_cubics(lead in 1i64..4, r in proptest::collection::btree_set(-6i64..=6, 3), q in -4i64..4) {
        let r: Vec<i64> = r.into_iter().collect();
        let three = poly_mul(&poly_mul(&[-lead * r[0], lead], &[-r[1], 1]), &[-r[2], 1]);
        prop_assert_eq!(isolate_real_roots(&int_poly(&three)).unwrap().len(), 3);
        // x³ + q x + s with negative discriminant has exactly one real root
        let s = 2 * q.abs() + 3;
        let disc = -4 * q * q * q - 27 * s * s;
        prop_assume!(disc < 0);
        prop_assert_eq!(isolate_real_roots(&int_poly(&[s, q, 0, 1])).unwrap().len(), 1);
    }

    #[test]
    fn mahler_bounds_and_graeffe(c in poly(6, 12)) {
        let tol = Rational::new(1, 1_000_000i64).unwrap();
        let p = int_poly(&c);
        let m = mahler_measure(&p, &tol).unwrap();
        let ends = Rational::from(c[0].abs().max(c.last().unwrap().abs()));
        prop_assert!(m.upper >= ends);
        let l2: i64 = c.iter().map(|x| x * x).sum();
        prop_assert!(&m.lower * &m.lower <= Rational::from(l2));
        let g = mahler_measure(&graeffe_step(&p), &tol).unwrap();
        prop_assert!(g.overlaps(&(&m.lower * &m.lower), &(&m.upper * &m.upper)));
    }

    #[test]
    fn mahler_multiplicative(p in poly(3, 8), q in poly(3, 8)) {
        let tol = Rational::new(1, 1_000_000i64).unwrap();
        let mp = mahler_measure(&int_poly(&p), &tol).unwrap();
        let mq = mahler_measure(&int_poly(&q), &tol).unwrap();
        let mpq = mahler_measure(&int_poly(&poly_mul(&p, &q)), &tol).unwrap();
        prop_assert!(mpq.overlaps(&(&mp.lower * &mq.lower), &(&mp.upper * &mq.upper)));
    }

    #[test]
    fn degree_one_scalings(p in 1i64..40, q in 1i64..40) {
        prop_assume!(gcd(p as i128, q as i128) == 1);
        let tol = Rational::new(1, 1_000_000_000i64).unwrap();
        let lin = int_poly(&[-p, q]);
        let half = mahler_half(&lin, &tol).unwrap();
        let double = mahler_double(&lin, &tol).unwrap();
        prop_assert!(half.contains(&Rational::new(q, 2).unwrap().max(Rational::from(p))));
        prop_assert!(double.contains(&Rational::from(q).max(Rational::new(p, 2).unwrap())));
    }

    #[test]
    fn normalization_preserves_outputs(
        a in nonzero_rational(), b in nonzero_rational(), c in nonzero_rational(),
        delta in rational(1..=20, 1..=6), inputs in alphabet(4), x0 in rational(-30..=30, 1..=11),
        picks in proptest::collection::vec(0usize..4, 10),
    ) {
        let sys = QuantizedSystem::new(a.clone().into(), b.clone(), c.clone(), delta.clone(), inputs.clone()).unwrap();
        let word: Vec<Rational> = picks.iter().map(|&i| inputs[i % inputs.len()].clone()).collect();
        let mut x = x0.clone();
        let mut original = vec![sys.output(&x)];
        for u in &word {
            x = &(&a * &x) + &(&b * u);
            original.push(((&c * &x) / delta.clone()).floor());
        }
        let norm = sys.normalize();
        let scaled: Vec<Rational> = word.iter().map(|u| u * norm.input_scale()).collect();
        let t = norm.simulate(&(&x0 * norm.state_scale()), &scaled, word.len()).unwrap();
        let again = norm.simulate(&(&x0 * norm.state_scale()), &scaled, word.len()).unwrap();
        prop_assert_eq!(serde_json::to_string(&again).unwrap(), serde_json::to_string(&t).unwrap());
        prop_assert_eq!(t.outputs, original);
    }

    #[test]
    fn difference_alphabet_symmetric(inputs in alphabet(5)) {
        let vs = difference_alphabet(&inputs);
        prop_assert!(vs.contains(&Rational::zero()));
        for v in &vs {
            prop_assert!(vs.contains(&-v));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn uldi_implies_no_indistinguishable_pair(a in expansive(), offset in rational(-6..=6, 1..=3), extra in rational(0..=12, 1..=4), size in 2usize..=3, depth in 1usize..=4) {
        let step = &(&a + &Rational::one()) + &extra;
        let inputs: Vec<Rational> = (0..size).map(|i| &offset + &(&step * &Rational::from(i as i64))).collect();
        let sys = NormalizedSystem::new(a.into(), inputs).unwrap();
        let v = uldi_check(sys.a(), &sys.difference_system().diff_inputs).unwrap();
        prop_assert_eq!(v.status, UldiStatus::UldiOneStep);
        let out = bruteforce_indistinguishable(&sys, depth, &BruteforceOptions::default()).unwrap();
        prop_assert!(matches!(out, BruteforceOutcome::Exhausted(_)));
    }

    #[test]
    fn uldi_matches_orbit_search(a in expansive(), inputs in alphabet(4)) {
        let vs = difference_alphabet(&inputs);
        let coef: Coefficient = a.into();
        let unit = Interval::open(-Rational::one(), Rational::one()).unwrap();
        let not_uldi = matches!(uldi_check(&coef, &vs), Ok(v) if v.status == UldiStatus::NotUldi);
        let cert = invariant_orbit_search(&coef, &vs, &unit, 8, 64).unwrap();
        prop_assert_eq!(not_uldi, cert.kind == OrbitKind::PeriodicWitness);
    }

    #[test]
    fn verdicts_are_sound_and_deterministic(a in rational(-60..=60, 1..=12), inputs in alphabet(3)) {
        let sys = QuantizedSystem::unit(a.clone().into(), inputs).unwrap();
        let v = analyze(&sys, &AnalyzeOptions::default());
        prop_assert_eq!(&v, &analyze(&sys, &AnalyzeOptions::default()));
        match (&v.status, &v.evidence) {
            (UliStatus::UliOneStep, UliEvidence::Uldi(_) | UliEvidence::Vacuous) => {}
            (UliStatus::NotUli, UliEvidence::Counterexample(w)) => {
                let norm = sys.normalize();
                let (y1, y2) = (outputs(&a, &w.x0, &w.inputs), outputs(&a, &w.x0_prime, &w.inputs_prime));
                prop_assert_eq!(&y1, &y2);
                prop_assert!(w.inputs.iter().all(|u| norm.inputs().contains(u)));
                for &k in &w.divergence_steps {
                    prop_assert_ne!(&w.inputs[k], &w.inputs_prime[k]);
                }
            }
            (UliStatus::NotUli, UliEvidence::Orbit(cert)) => {
                let cycle = cert.cycle.as_ref().unwrap();
                let mut z = cycle.z_star.as_exact().unwrap().clone();
                for v in &cycle.word {
                    prop_assert!(cert.target.contains(&z));
                    z = &(&a * &z) + v;
                }
                prop_assert_eq!(&z, cycle.z_star.as_exact().unwrap());
            }
            (UliStatus::UndecidedGap, UliEvidence::Gap(_)) => {}
            (UliStatus::UnsupportedContractive, UliEvidence::Contractive { .. }) => {}
            (s, e) => prop_assert!(false, "status {:?} with evidence {:?}", s, e),
        }
    }

    #[test]
    fn invert_inverts_simulate(a in rational(-47..=47, 12..=12), extra in rational(0..=8, 1..=4), x0 in rational(-40..=40, 1..=13), picks in proptest::collection::vec(0usize..3, 0..=50)) {
        prop_assume!(!a.is_zero());
        let step = &(&a.abs() + &Rational::one()) + &extra;
        let inputs: Vec<Rational> = (0..3).map(|i| &step * &Rational::from(i as i64)).collect();
        let sys = NormalizedSystem::new(a.clone().into(), inputs.clone()).unwrap();
        let word: Vec<Rational> = picks.iter().map(|&i| inputs[i].clone()).collect();
        let t = sys.simulate(&x0, &word, word.len()).unwrap();
        prop_assert_eq!(invert_sequence(&sys, &t.outputs).unwrap(), word);
    }

    #[test]
    fn bruteforce_witness_boxes_are_exact(num in 25i64..=47, extra in 1i64..=2, seed in 0u64..1000, depth in 1usize..=5) {
        let a = Rational::new(num, 12).unwrap();
        let inputs = vec![Rational::zero(), Rational::new(extra, 2).unwrap()];
        let sys = NormalizedSystem::new(a.clone().into(), inputs).unwrap();
        let BruteforceOutcome::Witness(w) = bruteforce_indistinguishable(&sys, depth, &BruteforceOptions::default()).unwrap() else {
            return Ok(());
        };
        prop_assert_eq!(&outputs(&a, &w.x0, &w.inputs), &w.outputs);
        prop_assert_eq!(&outputs(&a, &w.x0_prime, &w.inputs_prime), &w.outputs);
        let first = &w.boxes[0];
        for k in 1..=10i64 {
            let t = Rational::new((k * 7919 + seed as i64) % 97 + 1, 99).unwrap();
            let x = &first.box_x.lo().clone() + &(&t * &first.box_x.length());
            let xp = &first.box_x_prime.lo().clone() + &(&t * &first.box_x_prime.length());
            prop_assert_eq!(&outputs(&a, &x, &w.inputs), &w.outputs);
            prop_assert_eq!(&outputs(&a, &xp, &w.inputs_prime), &w.outputs);
        }
    }

    #[test]
    fn manifold_tracks_fractional_orbit(p in 1i64..7, q in 1i64..7, j in 0usize..4, s in 0.0f64..3.0, t in 0.0f64..5.0) {
        prop_assume!(gcd(p as i128, q as i128) == 1);
        let m = psi_matrix(&int_poly(&[-p, q]), j).unwrap();
        let a = p as f64 / q as f64;
        let point: Vec<f64> = (0..m.n_cols()).map(|i| {
            let x = (s + t) * a.powi(i as i32);
            x - x.floor()
        }).collect();
        prop_assert!(manifold_membership(&point, &m, 1e-9).unwrap());
    }

    #[test]
    fn primitive_banded_matrices_are_surjective(c in poly(4, 9).prop_filter("primitive, degree ≥ 1", |c| c.len() >= 2 && content(c) == 1), j in 0usize..=6) {
        let g = check_minor_gcd(&psi_matrix(&int_poly(&c), j).unwrap());
        prop_assert!(g.surjective);
        prop_assert_eq!(banded_minor_gcd(&c, j), 1);
    }
}

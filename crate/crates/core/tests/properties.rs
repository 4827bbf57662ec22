use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use symineq::counterexamples::{construct_case1, construct_case2};
use symineq::operators::{eval_binomial, eval_quad, eval_two_shift};
use symineq::polyalgebra::{epsilon_perturb, poly_from_roots, sturm_real_roots, variables, MultiPoly, UniPoly};
use symineq::symcore::{sigma_all, sigma_oracle, sigma_split, Mode, Scalar, SymPoint};

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-1000i64..=1000, 1i64..=20).prop_map(|(p, d)| q(p, d))
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    rational().prop_filter("nonzero", |r| *r != q(0, 1))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    rational().prop_map(Scalar::Exact)
}

fn point(max_n: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(rational(), 1..=max_n)
}

fn sym(v: &[BigRational]) -> SymPoint {
    SymPoint::from_rationals(v.iter().cloned()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn table_matches_subset_enumeration(v in point(9)) {
        let x = sym(&v);
        let t = sigma_all(&x);
        for k in -1..=v.len() as i64 + 1 {
            prop_assert_eq!(t.sigma(k), sigma_oracle(&x, k).unwrap());
        }
    }

    #[test]
    fn permutation_invariance(v in point(10).prop_shuffle()) {
        let mut sorted = v.clone();
        sorted.sort();
        prop_assert_eq!(sigma_all(&sym(&v)), sigma_all(&sym(&sorted)));
        let mut rev = v.clone();
        rev.reverse();
        prop_assert_eq!(sigma_all(&sym(&v)), sigma_all(&sym(&rev)));
    }

    #[test]
    fn homogeneity(v in point(10), t in rational()) {
        let x = sym(&v);
        let scaled = sym(&v.iter().map(|c| c * &t).collect::<Vec<_>>());
        let (a, b) = (sigma_all(&x), sigma_all(&scaled));
        let t = Scalar::Exact(t);
        for k in 0..=v.len() as i64 {
            prop_assert_eq!(b.sigma(k), t.pow(k as u32) * a.sigma(k));
        }
    }

    #[test]
    fn split_recurrence(v in prop::collection::vec(rational(), 3..=10)) {
        let x = sym(&v);
        let t = sigma_all(&x);
        for k in 0..=v.len() as i64 {
            prop_assert_eq!(sigma_split(&x, k).unwrap(), t.sigma(k));
        }
    }

    /// Positive inputs have no cancellation, so the float table is accurate
    /// to a relative 1e-12.
    #[test]
    fn float_matches_exact_on_positive_inputs(v in prop::collection::vec((1i64..=1000, 1i64..=20), 1..=12)) {
        let v: Vec<BigRational> = v.into_iter().map(|(p, d)| q(p, d)).collect();
        let x = sym(&v);
        let (exact, float) = (sigma_all(&x), sigma_all(&x.to_mode(Mode::Float64)));
        for k in 0..=v.len() as i64 {
            let (e, f) = (exact.sigma(k).to_f64(), float.sigma(k).to_f64());
            prop_assert!((e - f).abs() <= 1e-12 * e.abs(), "k={} exact={} float={}", k, e, f);
        }
    }

    /// Signed inputs: the error is bounded relative to `σ_k(|x|)`.
    #[test]
    fn float_error_scales_with_absolute_table(v in prop::collection::vec(rational(), 1..=12)) {
        let x = sym(&v);
        let abs = sym(&v.iter().map(|c| if *c < q(0, 1) { -c } else { c.clone() }).collect::<Vec<_>>());
        let (exact, float, scale) = (sigma_all(&x), sigma_all(&x.to_mode(Mode::Float64)), sigma_all(&abs));
        for k in 0..=v.len() as i64 {
            let err = (exact.sigma(k).to_f64() - float.sigma(k).to_f64()).abs();
            prop_assert!(err <= 1e-12 * scale.sigma(k).to_f64().max(1.0));
        }
    }

    #[test]
    fn operator_consistency_triangle(v in point(9), alpha in scalar(), beta in scalar(), k in -1i64..=10) {
        let x = sym(&v);
        let s = eval_two_shift(&x, &alpha, &beta, k).unwrap();
        prop_assert_eq!(&s, &eval_quad(&x, &(&alpha + &beta), &(&alpha * &beta), k).unwrap());
        let same = eval_two_shift(&x, &alpha, &alpha, k).unwrap();
        prop_assert_eq!(same, eval_binomial(&x, &alpha, 2, k).unwrap());
    }

    #[test]
    fn perturbation_converges_monotonically(
        zeros in 1usize..=4,
        rest in prop::collection::vec((1i64..=1000, 1i64..=20), 1..=6),
    ) {
        let mut v = vec![q(0, 1); zeros];
        v.extend(rest.into_iter().map(|(p, d)| q(p, d)));
        let y = sym(&v);
        let base = sigma_all(&y);
        let mut prev: Option<Vec<Scalar>> = None;
        for eps in [q(1, 10), q(1, 100), q(1, 1000)] {
            let t = sigma_all(&epsilon_perturb(&y, &Scalar::Exact(eps)).unwrap());
            let diffs: Vec<Scalar> = (1..=v.len() as i64).map(|m| (t.e(m) - base.e(m)).abs()).collect();
            if let Some(p) = &prev {
                for (d, pd) in diffs.iter().zip(p) {
                    prop_assert!(d < pd, "{} !< {}", d, pd);
                }
            }
            prev = Some(diffs);
        }
    }

    #[test]
    fn gap_scales_with_sixth_power(
        n in 4usize..=10,
        c in nonzero_rational(),
        f in (1i64..=20, 1i64..=20).prop_map(|(a, b)| q(a.min(b), a.max(b))),
        neg in any::<bool>(),
        t in nonzero_rational(),
    ) {
        let c = Scalar::Exact(c);
        let d = &c * &Scalar::Exact(if neg { -f } else { f });
        let t = Scalar::Exact(t);
        let t6 = t.pow(6);
        let base = construct_case1(n, &c, &d).unwrap();
        let scaled = construct_case1(n, &(&t * &c), &(&t * &d)).unwrap();
        prop_assert_eq!(&scaled.gap, &(&t6 * &base.gap));
        prop_assert!(scaled.negative);
        // case 2 with the roles of |c| and |d| exchanged
        if c.abs() != d.abs() {
            let base = construct_case2(n, &d, &c).unwrap();
            let scaled = construct_case2(n, &(&t * &d), &(&t * &c)).unwrap();
            prop_assert_eq!(&scaled.gap, &(&t6 * &base.gap));
            prop_assert!(scaled.negative);
        }
    }

    #[test]
    fn sturm_counts_rational_roots(
        roots in prop::collection::vec((-20i64..=20, 1i64..=5), 1..=7),
        complex in prop::option::of(1i64..=50),
    ) {
        let roots: Vec<BigRational> = roots.into_iter().map(|(p, d)| q(p, d)).collect();
        let mut p = poly_from_roots(&sym(&roots)).unwrap();
        if let Some(c) = complex {
            p = &p * &UniPoly::from_ints(&[c, 0, 1]);
        }
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        let count = sturm_real_roots(&p).unwrap();
        prop_assert_eq!(count.distinct_real, distinct.len());
        prop_assert_eq!(count.all_roots_real, complex.is_none());
    }
}

fn small_poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0u32..=2, 3), -5i64..=5), 0..=5).prop_map(|terms| {
        let vars = variables(&["u", "v", "w"]);
        MultiPoly::from_terms(&vars, terms.into_iter().map(|(e, c)| (e, q(c, 1)))).unwrap()
    })
}

fn canonical(p: &MultiPoly) -> String {
    serde_json::to_string(p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn multipoly_ring_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assert_eq!(canonical(&(&a + &b)), canonical(&(&b + &a)));
        prop_assert_eq!(canonical(&(&a * &b)), canonical(&(&b * &a)));
        prop_assert_eq!(canonical(&(&(&a + &b) + &c)), canonical(&(&a + &(&b + &c))));
        prop_assert_eq!(canonical(&(&(&a * &b) * &c)), canonical(&(&a * &(&b * &c))));
        prop_assert_eq!(canonical(&(&a * &(&b + &c))), canonical(&(&(&a * &b) + &(&a * &c))));
        prop_assert!((&a - &a).is_zero());
        let point = [q(2, 3), q(-1, 1), q(5, 2)];
        prop_assert_eq!((&a * &b).eval(&point).unwrap(), a.eval(&point).unwrap() * b.eval(&point).unwrap());
    }
}

use num::{BigInt, BigRational, One, Signed, Zero};
use proptest::prelude::*;

use vecpart::arrangement::{config_from_i64, Arrangement, VectorConfig};
use vecpart::decomp::localize;
use vecpart::exactlin::matrix::hnf_with_transform;
use vecpart::exactlin::{determinant, integer_kernel, rat, IntMatrix, RatVector};
use vecpart::latfun::{delta0, nabla_list, partition_function, Window};
use vecpart::spline::SplineEvaluator;

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=3, 1usize..=4).prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-6i64..=6, c), r))
}

/// Nonzero vectors in the closed positive quadrant that span the plane.
fn positive_list() -> impl Strategy<Value = Vec<[i64; 2]>> {
    proptest::collection::vec((0i64..=3, 0i64..=3), 2..=4)
        .prop_map(|v| v.into_iter().map(|(a, b)| [a, b]).collect::<Vec<_>>())
        .prop_filter("nonzero and spanning", |v| {
            v.iter().all(|a| a != &[0, 0]) && v.iter().any(|a| a[0] * v[0][1] - a[1] * v[0][0] != 0)
        })
}

fn config(list: &[[i64; 2]]) -> VectorConfig {
    let rows: Vec<&[i64]> = list.iter().map(|a| &a[..]).collect();
    config_from_i64(2, &rows).unwrap()
}

fn brute_count(list: &[[i64; 2]], g: [i64; 2]) -> i64 {
    fn go(list: &[[i64; 2]], rest: [i64; 2]) -> i64 {
        match list.split_first() {
            None => (rest == [0, 0]) as i64,
            Some((a, tail)) => {
                let mut n = 0;
                let mut r = rest;
                while r[0] >= 0 && r[1] >= 0 {
                    n += go(tail, r);
                    r = [r[0] - a[0], r[1] - a[1]];
                }
                n
            }
        }
    }
    go(list, g)
}

fn frac() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #[test]
    fn hnf_is_a_unimodular_reduction(rows in matrix()) {
        let m = IntMatrix::from_rows(&rows);
        let h = hnf_with_transform(&m);
        prop_assert_eq!(m.mul(&h.transform), h.hnf_full.clone());
        prop_assert_eq!(determinant(&h.transform).unwrap().abs(), BigInt::one());
        prop_assert_eq!(h.rank, m.rank());
        for (k, &i) in h.pivot_rows.iter().enumerate() {
            let piv = h.hnf_full.get(i, k).clone();
            prop_assert!(piv.is_positive());
            for r in 0..i {
                prop_assert!(h.hnf_full.get(r, k).is_zero());
            }
            for j in 0..k {
                let e = h.hnf_full.get(i, j);
                prop_assert!(!e.is_negative() && *e < piv);
            }
        }
        for j in h.rank..m.cols() {
            prop_assert!(h.hnf_full.column(j).is_zero());
        }
        for z in integer_kernel(&m) {
            prop_assert!(m.mul_vec(&z).is_zero());
        }
    }

    #[test]
    fn partition_function_counts(list in positive_list(), g0 in 0i64..=6, g1 in 0i64..=6) {
        let px = partition_function(&config(&list)).unwrap();
        prop_assert_eq!(px.eval_i64(&[g0, g1]), rat(brute_count(&list, [g0, g1]), 1));
    }

    #[test]
    fn difference_operator_inverts_partition_function(list in positive_list()) {
        let cfg = config(&list);
        let px = partition_function(&cfg).unwrap();
        let nx = nabla_list(cfg.vectors(), &px);
        let d0 = delta0(2);
        for p in Window::radius(2, 3).points() {
            prop_assert_eq!(nx.eval(p), d0.eval(p));
        }
    }

    #[test]
    fn spline_is_homogeneous_and_order_free(list in positive_list(), x0 in frac(), x1 in frac(), lambda in (1i64..=20, 1i64..=5)) {
        let cfg = config(&list);
        let ev = SplineEvaluator::new(&cfg).unwrap();
        let x = RatVector::new(vec![x0, x1]);
        let lam = rat(lambda.0, lambda.1);
        let m = list.len() - 2;
        let tx = ev.eval(&x);
        prop_assert!(!tx.is_negative());
        prop_assert_eq!(ev.eval(&x.scale(&lam)), tx.clone() * num::pow(lam, m));
        let mut rev = list.clone();
        rev.reverse();
        prop_assert_eq!(SplineEvaluator::new(&config(&rev)).unwrap().eval(&x), tx);
    }

    #[test]
    fn spline_of_a_basis_is_a_scaled_cone_indicator(a in (1i64..=4, 0i64..=4), b in (0i64..=4, 1i64..=4), x0 in frac(), x1 in frac()) {
        let list = [[a.0, a.1], [b.0, b.1]];
        let det = a.0 * b.1 - a.1 * b.0;
        prop_assume!(det != 0);
        let x = RatVector::new(vec![x0.clone(), x1.clone()]);
        // coordinates of x in the basis (a, b)
        let s = (x0.clone() * rat(b.1, 1) - x1.clone() * rat(b.0, 1)) / rat(det, 1);
        let t = (x1 * rat(a.0, 1) - x0 * rat(a.1, 1)) / rat(det, 1);
        let inside = !s.is_negative() && !t.is_negative();
        prop_assume!(!s.is_zero() && !t.is_zero());
        let expected = if inside { rat(1, det.abs()) } else { BigRational::zero() };
        let ev = SplineEvaluator::new(&config(&list)).unwrap();
        prop_assert_eq!(ev.eval(&x), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn localized_piece_matches_on_its_region(list in positive_list(), pick in 0usize..64) {
        let arr = Arrangement::new(config(&list));
        let px = partition_function(arr.config()).unwrap();
        let t = pick % arr.topes().len();
        let w = Window::radius(2, 5);
        let l = localize(&arr, &px, t, &w).unwrap();
        for p in w.points() {
            if arr.in_tope_minus_zonotope(t, &p.to_rat()) {
                prop_assert_eq!(l.q.evaluate(p).unwrap(), px.eval(p));
            }
        }
    }
}

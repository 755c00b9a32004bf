use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use qzrp::exactalg::{exact_divide, is_symmetric_under, GcdVerdict};
use qzrp::macdonald::*;
use qzrp::shapes::partitions_up_to;
use qzrp::tableaux::{enumerate_fillings, filling_count, quinv, weight};
use qzrp::zrp::{tazrp_weights, ZrpConfig};
use qzrp::{Budget, Exponent, Filling, Partition, Poly};

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn poly(n: usize, terms: &[(i64, i32, &[i32])]) -> Poly {
    Poly::from_terms(n, terms.iter().map(|(k, t, x)| (Exponent::new(*t, x.to_vec()), BigInt::from(*k))))
}

fn h11() -> Poly {
    poly(2, &[(1, 0, &[2, 0]), (1, 0, &[1, 1]), (1, 1, &[1, 1]), (1, 0, &[0, 2])])
}

#[test]
fn small_tableau_sums() {
    let b = Budget::default();
    assert_eq!(htilde_q1_tableaux(&p("1"), 2, &b).unwrap().poly, poly(2, &[(1, 0, &[1, 0]), (1, 0, &[0, 1])]));
    assert_eq!(htilde_q1_tableaux(&p("1,1"), 2, &b).unwrap().poly, h11());
    let x1x2 = poly(2, &[(1, 0, &[1, 0]), (1, 0, &[0, 1])]);
    assert_eq!(htilde_q1_tableaux(&p("2,1"), 2, &b).unwrap().poly, &x1x2 * &h11());
}

#[test]
fn factorized_shape_example() {
    // conjugate of (7,4,4,2,2,2,1) is (7,6,3,3,1,1,1)
    assert_eq!(p("7,4,4,2,2,2,1").conjugate(), p("7,6,3,3,1,1,1"));
    let n = 2;
    let want = [1u32, 1, 1, 3, 3, 6, 7].iter().fold(Poly::one(n), |a, &r| &a * &htilde_ones(r, n));
    assert_eq!(htilde_q1_factorized(&p("7,4,4,2,2,2,1"), n).poly, want);
    assert_eq!(htilde_q1_factorized(&p("1,1"), 2).poly, h11());
}

#[test]
fn three_forms_agree() {
    let b = Budget::default();
    for shape in partitions_up_to(6) {
        for n in 1..=3usize {
            let tab = htilde_q1_tableaux(&shape, n, &b).unwrap();
            let fac = htilde_q1_factorized(&shape, n);
            let mon = htilde_q1_monomial(&shape, n);
            assert_eq!(tab.poly, fac.poly, "{shape} n={n}");
            assert_eq!(tab.poly, mon.poly, "{shape} n={n}");
            assert!(tab.poly.is_x_homogeneous(shape.size() as i32));
            assert!(tab.poly.terms().all(|(_, c)| c > &BigInt::from(0)));
            let vars: Vec<usize> = (1..=n).collect();
            assert!(is_symmetric_under(&tab.poly, &vars));
        }
    }
}

#[test]
fn specializations() {
    for shape in partitions_up_to(5) {
        for n in 1..=3usize {
            let h = htilde_q1_factorized(&shape, n).poly;
            let one = qzrp::Rational::one();
            let ones = vec![one.clone(); n];
            assert_eq!(h.eval(&ones, &one), qzrp::Rational::from_integer(filling_count(&shape, n as u32).into()));
            assert!(check_t0_identity(&shape, n, &Budget::default()).unwrap(), "{shape} n={n}");
            assert!(exact_divide(&h, &htilde_q1_factorized(&shape.compress(), n).poly).is_ok());
        }
    }
}

#[test]
fn t0_examples() {
    let b = Budget::default();
    assert!(check_t0_identity(&p("1"), 3, &b).unwrap());
    assert!(check_t0_identity(&p("2,1"), 2, &b).unwrap());
    assert!(check_t0_identity(&p("2,2"), 3, &b).unwrap());
}

#[test]
fn x1_expansion() {
    assert!(x1_expansion_check(0, 1));
    assert!(x1_expansion_check(2, 2));
    assert!(x1_expansion_check(4, 3));
    for r in 0..=5 {
        for n in 1..=4 {
            assert!(x1_expansion_check(r, n), "r={r} n={n}");
        }
    }
}

#[test]
fn partition_function() {
    let z = zrp_partition_function(&p("3,2"), 3);
    assert_eq!(z, htilde_q1_factorized(&p("2,1"), 3).poly);
    assert_eq!(zrp_partition_function(&p("3,1,1"), 3), htilde_q1_factorized(&p("2,1,1"), 3).poly);
    assert_eq!(zrp_partition_function(&p("5,5,2"), 2), htilde_q1_factorized(&p("2,2,1"), 2).poly);
    // partition function equals the sum of fiber weights divided by the ratio
    for shape in partitions_up_to(5) {
        for n in 1..=3usize {
            let z = zrp_partition_function(&shape, n);
            if shape.is_compressed() {
                assert_eq!(z, htilde_q1_factorized(&shape, n).poly);
            }
            let ws = tazrp_weights(&shape, n, &Budget::default()).unwrap();
            let total = ws.values().fold(Poly::zero(n), |a, b| a + b.clone());
            let ratio = exact_divide(&htilde_q1_factorized(&shape, n).poly, &z).unwrap();
            assert_eq!(&z * &ratio, total);
        }
    }
}

#[test]
fn fiber_weights_divisible_by_ratio() {
    for shape in partitions_up_to(5) {
        for n in 1..=3 {
            assert!(check_fiber_divisibility(&shape, n, &Budget::default()).unwrap(), "{shape} n={n}");
        }
    }
}

#[test]
fn bubble_sort_example() {
    let top = [2, 2, 2, 3, 6];
    assert_eq!(sort_row_under(&top, &[1, 3, 4, 4, 5, 5]), vec![1, 5, 5, 4, 4, 3]);
    assert_eq!(bubble_row_under(&top, &[1, 3, 4, 4, 5, 5]), vec![1, 5, 5, 4, 4, 3]);
    // adjacent swaps alone stall here: (3, 1, 2) is a quinv triple at columns 1 and 3
    assert_eq!(bubble_row_under(&[3, 2], &[1, 1, 2]), vec![1, 1, 2]);
    assert_eq!(sort_row_under(&[3, 2], &[1, 1, 2]), vec![2, 1, 1]);
    assert_eq!(sort_row_under(&[], &[3, 1, 2]), vec![3, 2, 1]);
    let f = quinv_free_sort(3, &[vec![1, 3, 2]]).unwrap();
    assert_eq!(f.rows_top_down(), vec![vec![3, 2, 1]]);
    let c = quinv_free_sort(4, &[vec![2, 2, 2], vec![2, 2]]).unwrap();
    assert_eq!(quinv(&c), 0);
    assert!(quinv_free_sort(3, &[vec![1], vec![1, 2]]).is_err());
}

#[test]
fn bubble_sort_gives_the_unique_quinv_free_filling() {
    for shape in partitions_up_to(6) {
        for n in 1..=3u32 {
            let mut by_rows: BTreeMap<Vec<Vec<u32>>, Vec<Filling>> = BTreeMap::new();
            for s in enumerate_fillings(&shape, n) {
                let mut key: Vec<Vec<u32>> = s.rows_top_down();
                for r in key.iter_mut() {
                    r.sort_unstable();
                }
                if quinv(&s) == 0 {
                    by_rows.entry(key).or_default().push(s);
                } else {
                    by_rows.entry(key).or_default();
                }
            }
            for (rows, free) in by_rows {
                assert_eq!(free.len(), 1, "{shape} {rows:?}");
                let bottom_up: Vec<Vec<u32>> = rows.into_iter().rev().collect();
                assert_eq!(quinv_free_sort(n, &bottom_up).unwrap(), free[0]);
            }
        }
    }
}

#[test]
fn compressed_conjecture_instances() {
    let b = Budget::default();
    let (v, ev) = check_conjecture_compressed(&p("1"), 2, 8, 1, &b).unwrap();
    assert_eq!(v, GcdVerdict::UnitWithCertainty);
    assert_eq!(ev.states, 2);
    let (v, _) = check_conjecture_compressed(&p("2,1"), 2, 8, 1, &b).unwrap();
    assert!(v.is_unit(), "{v:?}");
    let (v, ev) = check_conjecture_compressed(&p("2,2,1"), 3, 8, 1, &b).unwrap();
    assert!(v.is_unit(), "{ev:?}");
    assert!(check_conjecture_compressed(&p("3,1"), 2, 8, 1, &b).is_err());
    assert!(check_conjecture_compressed(&p("2,1"), 1, 8, 1, &b).is_err());
}

#[test]
fn refined_conjecture_example() {
    let sigma = Filling::parse("2 / 2 1", 2).unwrap();
    assert_eq!(weight(&sigma), poly(2, &[(1, 1, &[1, 2])]));
    let exts = extensions(&p("3,2"), &sigma, Embedding::Bottom).unwrap();
    let mut ws: Vec<Poly> = exts.iter().map(weight).collect();
    ws.sort_by_key(|w| w.to_string());
    let mut want = vec![
        poly(2, &[(1, 1, &[3, 2])]),
        poly(2, &[(1, 1, &[2, 3])]),
        poly(2, &[(1, 2, &[2, 3])]),
        poly(2, &[(1, 1, &[1, 4])]),
    ];
    want.sort_by_key(|w| w.to_string());
    assert_eq!(ws, want);
    let (ok, ev) = check_conjecture_refined(&p("3,2"), &sigma, &Budget::default()).unwrap();
    assert!(ok);
    assert_eq!(ev.bottom_sum, &poly(2, &[(1, 1, &[1, 2])]) * &h11());
    assert_eq!(ev.ratio, h11());
}

#[test]
fn refined_conjecture_trivial_and_recorded() {
    let b = Budget::default();
    // λ = λᶜ: Ext = {σ}
    for s in enumerate_fillings(&p("2,1"), 2) {
        let (ok, ev) = check_conjecture_refined(&p("2,1"), &s, &b).unwrap();
        assert!(ok);
        assert!(ev.top_holds);
    }
    for s in enumerate_fillings(&p("2,1"), 2) {
        let (ok, ev) = check_conjecture_refined(&p("4,2"), &s, &b).unwrap();
        assert!(ok, "{}", serde_json::to_string(&ev).unwrap());
    }
    assert!(check_conjecture_refined(&p("2,2"), &Filling::constant(p("1,1"), 2, 1), &b).is_err());
}

#[test]
fn refined_sum_over_fiber_gives_fiber_weight() {
    // summing Ext over the σ with proj(σ) = wᶜ gives the fiber weight of w
    let shape = p("3,2");
    let lc = shape.compress();
    let b = Budget::default();
    let big = tazrp_weights(&shape, 2, &b).unwrap();
    let small = tazrp_weights(&lc, 2, &b).unwrap();
    let relabel = |w: &ZrpConfig| w.map_species(|_| true, |r| if r == 3 { 2 } else { 1 });
    for (w, wt) in &big {
        let mut acc = Poly::zero(2);
        for s in enumerate_fillings(&lc, 2) {
            if qzrp::tableaux::proj(&s) == relabel(w) {
                for t in extensions(&shape, &s, Embedding::Bottom).unwrap() {
                    acc += &weight(&t);
                }
            }
        }
        assert_eq!(&acc, wt);
        assert_eq!(exact_divide(wt, &h11()).unwrap(), small[&relabel(w)]);
    }
}

//! Published values and independently derived cross-checks against the shipped data.

mod common;

use std::collections::BTreeSet;

use common::data;
use num_bigint::BigInt;
use qsverify::casecheck::{orbit_candidate_sizes, rr_h0, rr_m, run_case, subset_sums};
use qsverify::chartab::{lift_candidates, restrict, DecomposeMode};
use qsverify::permgrp::{enumerate, polya_invariant_count, DEFAULT_CAP};
use qsverify::repring::{constituent_degrees, ext_power, invariant_counts, sym_power, tensor};
use qsverify::validation::match_classes;
use qsverify::{Cyclotomic, Rational};

fn c(s: &str) -> Cyclotomic {
    s.parse().unwrap()
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[test]
fn quadratic_integer_of_conductor_seven() {
    let a = c("E(7)+E(7)^2+E(7)^4");
    let mut re: Vec<(f64, f64)> = a.embeddings().iter().map(|z| (z.re, z.im)).collect();
    re.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap());
    let s7 = 7f64.sqrt() / 2.0;
    assert!((re[0].0 + 0.5).abs() < 1e-9 && (re[0].1 + s7).abs() < 1e-9);
    assert!((re.last().unwrap().0 + 0.5).abs() < 1e-9 && (re.last().unwrap().1 - s7).abs() < 1e-9);
    // trace and norm of (−1+√−7)/2
    assert_eq!((&a + &a.conj()).to_rational().unwrap(), int(-1));
    let b = &a + &Cyclotomic::one(); // (1+√−7)/2
    assert_eq!((&b * &b.conj()).to_rational().unwrap(), int(2));
    // ζ ↦ ζ^k sends a to itself or to its conjugate
    let images: BTreeSet<String> = (1..7).map(|k| a.galois(k).unwrap().to_string()).collect();
    assert_eq!(images.len(), 2);
    assert_eq!(a.conj(), c("E(7)^3+E(7)^5+E(7)^6"));
}

#[test]
fn conductor_reduction_keeps_value() {
    let a = c("E(5)+E(5)^4").promote(15);
    assert_eq!(a.conductor(), 15);
    let r = a.reduce_conductor();
    assert_eq!(r.conductor(), 5);
    assert!((a.to_complex() - r.to_complex()).norm() < 1e-12);
    assert_eq!(c("E(12)^4").reduce_conductor().conductor(), 3);
}

#[test]
fn closure_orders_and_classes() {
    let ds = data();
    let a7 = &ds.perms["A7"];
    let g = enumerate(&a7.generators, a7.degree, DEFAULT_CAP).unwrap();
    assert_eq!(g.order(), 2520);
    let orders: Vec<u64> = g.conjugacy_classes().iter().map(|c| c.order).collect();
    assert_eq!(orders, vec![1, 2, 3, 3, 4, 5, 6, 7, 7]);
    let psp = &ds.perms["PSp4(3)"];
    let g = enumerate(&psp.generators, psp.degree, DEFAULT_CAP).unwrap();
    assert_eq!(g.element_order_set().into_iter().collect::<Vec<_>>(), vec![1, 2, 3, 4, 5, 6, 9, 12]);
}

#[test]
fn a5_power_map_swaps_five_classes() {
    let t = data().table("A5").unwrap();
    let five_a = t.class_index("5A").unwrap();
    let five_b = t.class_index("5B").unwrap();
    assert_eq!(t.power_class(five_a, 2).unwrap(), five_b);
    assert_eq!(t.power_class(five_a, 5).unwrap(), t.identity_class());
    // the permutation oracle agrees with the tabulated maps
    let p = &data().perms["A5"];
    let g = enumerate(&p.generators, p.degree, DEFAULT_CAP).unwrap();
    assert!(match_classes(t, &g).is_some());
}

#[test]
fn polya_count_for_a7_quadrics() {
    let p = &data().perms["A7"];
    let g = enumerate(&p.generators, p.degree, DEFAULT_CAP).unwrap();
    let ci = g.cycle_index(&g.conjugacy_classes());
    assert_eq!(polya_invariant_count(&ci, 0), 1);
    assert_eq!(polya_invariant_count(&ci, 1), 1);
    assert_eq!(polya_invariant_count(&ci, 2), 2);
}

#[test]
fn curated_table_shapes() {
    let ds = data();
    let a5 = ds.table("A5").unwrap();
    let degs: Vec<u64> = a5.irreducibles.iter().map(|c| c.degree()).collect();
    assert_eq!(degs, vec![1, 3, 3, 4, 5]);
    let t = ds.table("3.A6").unwrap();
    assert_eq!(t.class_count(), 17);
    assert!(t.irreducibles.iter().filter(|c| c.degree() == 3 && t.is_faithful(&c.values)).count() >= 2);
    assert_eq!(t.min_faithful_degree(), Some(3));
    assert_eq!(ds.table("2.A7").unwrap().min_faithful_degree(), Some(4));
    assert_eq!(ds.table("SL2(7)").unwrap().min_faithful_degree(), Some(4));
    assert_eq!(ds.table("A7").unwrap().min_faithful_degree(), Some(6));
    let inflated = t.irreducibles.iter().find(|c| c.degree() == 5).unwrap();
    assert!(!t.is_faithful(&inflated.values));
    assert!(t.center_classes().is_subset(&t.kernel_classes(&inflated.values)));
}

#[test]
fn power_decompositions() {
    let ds = data();
    let l211 = ds.table("PSL2(11)").unwrap();
    let v = l211.character("chi5a").unwrap();
    let e2 = ext_power(l211, &v, 2).unwrap();
    assert_eq!(l211.inner_product(&e2, &e2).unwrap(), int(1));
    assert_eq!(constituent_degrees(l211, &sym_power(l211, &v, 3).unwrap()).unwrap(), vec![1, 10, 12, 12]);

    let sp = ds.table("Sp4(3)").unwrap();
    let w = sp.character("chi4a").unwrap();
    let s5 = sym_power(sp, &w, 5).unwrap();
    assert_eq!(constituent_degrees(sp, &s5).unwrap(), vec![20, 36]);
    let five = sp.class_index("5A").unwrap();
    assert_eq!(w.values[five], Cyclotomic::from_int(-1));
    assert_eq!(s5.values[five], Cyclotomic::one());

    let a7 = ds.table("3.A7").unwrap();
    let sixes: Vec<_> = a7.irreducibles.iter().filter(|c| c.degree() == 6).collect();
    let faithful: Vec<_> = sixes.iter().filter(|c| a7.is_faithful(&c.values)).collect();
    let plain = sixes.iter().find(|c| !a7.is_faithful(&c.values)).unwrap();
    let vp = a7.virtual_of(&faithful[0].values);
    let vpp = a7.virtual_of(&faithful[1].values);
    let u = a7.virtual_of(&plain.values);
    assert_eq!(constituent_degrees(a7, &tensor(a7, &vp, &vpp).unwrap()).unwrap(), vec![1, 14, 21]);
    assert_eq!(constituent_degrees(a7, &tensor(a7, &vp, &u).unwrap()).unwrap(), vec![15, 21]);
    assert_eq!(constituent_degrees(a7, &sym_power(a7, &vp, 2).unwrap()).unwrap(), vec![6, 15]);
    assert_eq!(constituent_degrees(a7, &sym_power(a7, &u, 2).unwrap()).unwrap(), vec![1, 6, 14]);
    for x in [&vp, &vpp, &u] {
        assert_eq!(invariant_counts(a7, x, 3).unwrap()[2], 1);
    }
}

#[test]
fn restrictions_along_fusions() {
    let ds = data();
    let a7 = ds.table("A7").unwrap();
    let f = &ds.fusions["PSL2(7)a@A7"];
    let sub = ds.table(&f.sub).unwrap();
    let res = restrict(sub, f, &a7.character("chi6a").unwrap()).unwrap();
    assert_eq!(sub.inner_product(&res, &sub.trivial()).unwrap(), int(0));
    assert_eq!(restrict(sub, f, &a7.trivial()).unwrap().values, sub.trivial().values);

    let l211 = ds.table("PSL2(11)").unwrap();
    let f = &ds.fusions["A5a@PSL2(11)"];
    let sub = ds.table(&f.sub).unwrap();
    let v = l211.character("chi5a").unwrap();
    let res = restrict(sub, f, &v).unwrap();
    assert_eq!(sub.decompose(&res, DecomposeMode::Strict).unwrap().constituent_degrees(sub), vec![5]);
    // the 10-dimensional exterior square carries the 3-dimensional pieces
    let res = restrict(sub, f, &ext_power(l211, &v, 2).unwrap()).unwrap();
    let dec = sub.decompose(&res, DecomposeMode::Strict).unwrap();
    let five = sub.class_index("5A").unwrap();
    let golden: [Cyclotomic; 2] = [c("-E(5)^2-E(5)^3"), c("-E(5)-E(5)^4")];
    let three = dec
        .support()
        .into_iter()
        .map(|(l, _)| sub.irreducible(&l).unwrap())
        .find(|x| x.degree() == 3)
        .expect("a 3-dimensional constituent");
    assert!(golden.contains(&three.values[five]));
}

#[test]
fn cyclic_restriction_at_minus_two() {
    let t = data().table("2.A7").unwrap();
    let c3 = t.class_index("3A").unwrap();
    let chi = t.character("chi4a").unwrap();
    assert_eq!(chi.values[c3], Cyclotomic::from_int(-2));
    let m = t.restrict_to_cyclic(c3, &chi).unwrap();
    assert_eq!(m[0], int(0));
    assert_eq!(m.iter().fold(int(0), |a, b| a + b), int(4));
}

#[test]
fn invariant_rows() {
    let ds = data();
    let counts = |g: &str, l: &str| {
        let t = ds.table(g).unwrap();
        invariant_counts(t, &t.character(l).unwrap(), 10).unwrap()
    };
    let t36 = ds.table("3.A6").unwrap();
    for chi in t36.irreducibles.iter().filter(|c| c.degree() == 3) {
        let v = invariant_counts(t36, &t36.virtual_of(&chi.values), 10).unwrap();
        assert_eq!(v, vec![0, 0, 0, 0, 0, 1, 0, 0, 0, 0]);
    }
    assert_eq!(counts("SL2(7)", "chi4a")[3], 1);
    assert_eq!(counts("2.A7", "chi4a"), vec![0, 0, 0, 0, 0, 0, 0, 1, 0, 0]);
    assert_eq!(counts("A7", "chi6a"), vec![0, 1, 1, 2, 2, 4, 4, 6, 7, 10]);
    assert_eq!(counts("PSp4(3)", "chi5a"), vec![0, 0, 0, 1, 0, 1, 0, 1, 0, 2]);
    assert_eq!(&counts("Sp4(3)", "chi4a")[..3], &[0, 0, 0]);
    let t67 = ds.table("6.A7").unwrap();
    for chi in t67.irreducibles.iter().filter(|c| c.degree() == 6 && t67.is_faithful(&c.values)) {
        assert!(invariant_counts(t67, &t67.virtual_of(&chi.values), 10).unwrap().iter().all(|&x| x == 0));
    }
}

#[test]
fn lifts_of_small_groups() {
    let ds = data();
    let a5 = ds.cover_family("A5");
    let two = lift_candidates(&a5, 2);
    assert!(!two.is_empty() && two.iter().all(|(g, _)| g == "2.A5"));
    assert!(lift_candidates(&a5, 3).iter().any(|(g, _)| g == "A5"));
    let a6 = [ds.table("A6").unwrap(), ds.table("3.A6").unwrap()];
    let three = lift_candidates(&a6, 3);
    assert!(!three.is_empty() && three.iter().all(|(g, _)| g == "3.A6"));
}

#[test]
fn riemann_roch_and_orbit_filters() {
    let pairs = [(1, 6, 5, 20), (4, 1, 3, 56), (4, 1, 3, 56), (1, 4, 4, 15), (2, 3, 4, 34), (1, 14, 9, 40)];
    for (n, h3, m, h0) in pairs {
        assert_eq!((rr_m(n, h3).unwrap(), rr_h0(n, h3).unwrap()), (m, h0));
    }
    let ds = data();
    let sizes = |id: &str| {
        let case = ds.case(id).unwrap();
        orbit_candidate_sizes(case, &ds.catalogs[&case.catalog]).unwrap()
    };
    assert_eq!(sizes("A7-23"), vec![7, 15]);
    assert!(sizes("PSp43-B").is_empty());
    assert_eq!(subset_sums(&[20, 36]).into_iter().collect::<Vec<_>>(), vec![0, 20, 36, 56]);
    assert_eq!(sizes("PSp43-P3"), vec![36]);
}

#[test]
fn curve_branch_arithmetic() {
    let ds = data();
    let rep = run_case(ds, ds.case("A7-P3").unwrap()).unwrap();
    let r15: Vec<_> = rep.curve_candidates.iter().filter(|k| k.r == 15).collect();
    assert_eq!(r15.len(), 1);
    assert_eq!((r15[0].d, r15[0].g, r15[0].sections), (1, 0, 90));
    let rep = run_case(ds, ds.case("PSL211-K").unwrap()).unwrap();
    for k in rep.curve_candidates.iter().filter(|k| k.r >= 11) {
        assert_eq!((k.d, k.g), (1, 0));
        assert!(k.sections >= 44 && k.sections > rep.h0);
    }
    let rep = run_case(ds, ds.case("PSp43-B").unwrap()).unwrap();
    assert!(rep.curve_candidates.iter().all(|k| k.r == 1 && k.d <= 4 && k.g <= 3));
    // every emitted tuple satisfies the three defining inequalities
    for case in &ds.cases {
        let rep = run_case(ds, case).unwrap();
        for k in &rep.curve_candidates {
            assert!(k.r * k.d <= case.h3 * case.n * case.n);
            assert!(2 * k.g <= case.n * k.d + 2);
            assert_eq!(k.sections, k.r * ((case.n + 1) * k.d + 1 - k.g));
        }
    }
}

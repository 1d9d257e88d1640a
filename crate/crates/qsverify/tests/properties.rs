//! Property suites: field axioms, orthogonality, plethysm, decomposition
//! round-trips, cyclic restrictions and solver agreement.

mod common;

use common::data;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use qsverify::casecheck::subset_sums;
use qsverify::chartab::DecomposeMode;
use qsverify::hurwitz::{Feasibility, HurwitzInstance};
use qsverify::permgrp::Permutation;
use qsverify::repring::plethysm_residuals;
use qsverify::{CharacterTable, Cyclotomic, Rational};

const CONDUCTORS: [u32; 10] = [1, 3, 4, 5, 6, 8, 10, 12, 15, 24];

fn cyclotomic() -> impl Strategy<Value = Cyclotomic> {
    (0..CONDUCTORS.len())
        .prop_flat_map(|i| {
            let n = CONDUCTORS[i];
            (Just(n), prop::collection::vec((0..n as i64, -6i64..=6, 1i64..=4), 0..5))
        })
        .prop_map(|(n, terms)| {
            let terms: Vec<(i64, Rational)> =
                terms.into_iter().map(|(k, a, b)| (k, Rational::new(BigInt::from(a), BigInt::from(b)))).collect();
            Cyclotomic::new(n, &terms).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn field_axioms(a in cyclotomic(), b in cyclotomic(), c in cyclotomic()) {
        let zero = Cyclotomic::zero();
        let one = Cyclotomic::one();
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &zero, a.clone());
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), one);
        }
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        let z = (&a * &b).to_complex() - a.to_complex() * b.to_complex();
        prop_assert!(z.norm() < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn display_parse_round_trip(a in cyclotomic()) {
        let back: Cyclotomic = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn permutation_order_is_lcm_of_cycles(perm in Just((0..9usize).collect::<Vec<_>>()).prop_shuffle()) {
        let p = Permutation::from_images(perm).unwrap();
        let l = p.cycle_type().iter().fold(1u64, |a, &c| a.lcm(&(c as u64)));
        prop_assert_eq!(p.order(), l);
        prop_assert!(p.pow(l).is_identity());
        prop_assert!(p.then(&p.inverse()).is_identity());
    }

    #[test]
    fn multiset_subset_sums(parts in prop::collection::vec(1u64..40, 0..7)) {
        let sums = subset_sums(&parts);
        let total: u64 = parts.iter().sum();
        prop_assert!(sums.contains(&0) && sums.contains(&total));
        for s in &sums {
            prop_assert!(sums.contains(&(total - s)));
        }
    }
}

fn tables() -> Vec<&'static CharacterTable> {
    data().tables.values().collect()
}

#[test]
fn orthogonality_on_all_tables() {
    for t in tables() {
        let k = t.class_count();
        for (i, a) in t.irreducibles.iter().enumerate() {
            for (j, b) in t.irreducibles.iter().enumerate().skip(i) {
                let ip = t.inner_values(&a.values, &b.values).unwrap();
                let want = if i == j { 1 } else { 0 };
                assert_eq!(ip, Rational::from_integer(want.into()), "{} rows {} {}", t.group, a.label, b.label);
            }
        }
        for g in 0..k {
            for h in g..k {
                let s: Cyclotomic = t.irreducibles.iter().map(|x| &x.values[g] * &x.values[h].conj()).sum();
                let want = if g == h { (t.order / t.classes[g].size) as i64 } else { 0 };
                assert_eq!(s, Cyclotomic::from_int(want), "{} columns {g} {h}", t.group);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3))]

    #[test]
    fn plethysm_identity(idx in 0..tables().len()) {
        let t = tables()[idx];
        for chi in &t.irreducibles {
            let r = plethysm_residuals(t, &t.virtual_of(&chi.values), 10).unwrap();
            prop_assert!(r.iter().all(|x| x.is_zero()), "{} {}", t.group, chi.label);
        }
    }
}

fn table_and_multiplicities() -> impl Strategy<Value = (usize, Vec<i64>)> {
    (0..tables().len()).prop_flat_map(|i| {
        let k = tables()[i].class_count();
        (Just(i), prop::collection::vec(0i64..4, k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn decompose_round_trip((idx, mults) in table_and_multiplicities()) {
        let t = tables()[idx];
        let phi = t.combination(&mults);
        let dec = t.decompose(&phi, DecomposeMode::Strict).unwrap();
        let got: Vec<i64> = dec.multiplicities.iter().map(|(_, m)| m.to_integer().try_into().unwrap()).collect();
        prop_assert_eq!(got, mults);
    }
}

#[test]
fn cyclic_restriction_on_every_triple() {
    for t in tables() {
        for c in 0..t.class_count() {
            for chi in &t.irreducibles {
                let m = t.restrict_to_cyclic(c, &t.virtual_of(&chi.values)).unwrap();
                assert_eq!(m.len() as u32, t.classes[c].order);
                let mut total = Rational::zero();
                for x in &m {
                    assert!(x.is_integer() && !x.is_negative(), "{} {} class {c}", t.group, chi.label);
                    total += x;
                }
                assert_eq!(total, Rational::from_integer(chi.degree().into()));
            }
        }
    }
}

fn hurwitz_instance() -> impl Strategy<Value = HurwitzInstance> {
    const GROUPS: [(u64, &[u64]); 5] = [
        (60, &[2, 3, 5]),
        (168, &[2, 3, 4, 7]),
        (360, &[2, 3, 4, 5]),
        (660, &[2, 3, 5, 6, 11]),
        (2520, &[2, 3, 4, 5, 6, 7]),
    ];
    (0..GROUPS.len()).prop_flat_map(|i| {
        let (order, rs) = GROUPS[i];
        (prop::sample::subsequence(rs.to_vec(), 1..=rs.len()), 0..(order / 4).min(60))
            .prop_map(move |(rs, g)| HurwitzInstance::new(order, &rs, g).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn solver_agrees_with_box(inst in hurwitz_instance()) {
        let first = inst.box_solutions().into_iter().next();
        match inst.feasible().unwrap() {
            Feasibility::Feasible { witness } => {
                prop_assert_eq!(HurwitzInstance::evaluate(&witness), inst.lhs());
                prop_assert_eq!(Some(witness), first);
            }
            Feasibility::Infeasible { .. } => prop_assert!(first.is_none()),
        }
    }
}

#[test]
fn inverse_class_has_conjugate_column() {
    for t in tables() {
        for c in 0..t.class_count() {
            let o = t.classes[c].order as u64;
            let inv = t.power_class(c, o - 1).unwrap();
            for chi in &t.irreducibles {
                assert_eq!(chi.values[inv], chi.values[c].conj(), "{} class {c}", t.group);
            }
            for u in (1..o).filter(|u| u.gcd(&o) == 1) {
                assert_eq!(t.classes[t.power_class(c, u).unwrap()].order as u64, o);
            }
        }
    }
}

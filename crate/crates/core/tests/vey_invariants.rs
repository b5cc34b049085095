use proptest::prelude::*;

use weilcx_core::gca::{ComplexKind, Element, Monomial};
use weilcx_core::vey::{
    brace_indices, validate_vey_with, variable_count, vey_basis_with, WoCondition,
};
use weilcx_core::{
    build_complex, classify, extended_basis, kappa, validate_vey, variable_set, vey_basis, VeyClass,
};

fn names<'a>(v: impl IntoIterator<Item = &'a VeyClass>) -> Vec<String> {
    v.into_iter().map(VeyClass::name).collect()
}

#[test]
fn vey_classes_are_independent_cocycles() {
    for q in 1..=4 {
        for kind in [ComplexKind::W, ComplexKind::WO] {
            let cx = build_complex(q, kind).unwrap();
            let classes = vey_basis(q, kind).unwrap();
            for v in &classes {
                let e = Element::from_monomial(cx.signature(), v.monomial.clone()).unwrap();
                assert!(cx.is_cocycle(&e).unwrap(), "{} in {kind}_{q}", v.name());
            }
            let r = validate_vey(q, kind).unwrap();
            assert!(r.all_independent(), "{kind}_{q}");
            assert!(r.degrees.iter().all(|d| d.all_cocycles));
        }
    }
}

#[test]
fn counts_match_oracle_above_2q() {
    for q in 1..=5 {
        for kind in [ComplexKind::W, ComplexKind::WO] {
            let r = validate_vey(q, kind).unwrap();
            assert!(r.counts_match_above(2 * q), "{kind}_{q}: {:?}", r.degrees);
        }
    }
}

#[test]
fn exists_odd_reading_diverges_from_oracle() {
    let r = validate_vey_with(2, ComplexKind::WO, WoCondition::ExistsOdd, 6).unwrap();
    let d5 = r.degree(5).unwrap();
    assert_eq!((d5.enumerated, d5.oracle_dim), (1, 2));
    assert!(d5.notes.iter().any(|n| n.contains("count mismatch")));
    let r4 = validate_vey_with(4, ComplexKind::WO, WoCondition::ExistsOdd, 6).unwrap();
    assert!(!r4.all_independent());
}

#[test]
fn classify_is_idempotent_and_local() {
    for q in 1..=5 {
        for kind in [ComplexKind::W, ComplexKind::WO] {
            for v in vey_basis(q, kind).unwrap() {
                let again = classify(v.clone());
                assert_eq!(again, v);
                let fresh = classify(VeyClass::new(v.monomial.clone(), kind));
                assert_eq!(fresh, v);
                if v.is_rigid {
                    assert!(!v.is_variable_candidate);
                }
            }
        }
    }
}

#[test]
fn classify_examples() {
    let c = |q: u32, y: &[u32], j: &[u32]| {
        classify(VeyClass::new(
            Monomial::from_indices(q, y, j).unwrap(),
            ComplexKind::W,
        ))
    };
    let a = c(2, &[1], &[1, 1]);
    assert!(a.is_generalized_gv && a.is_residual && !a.is_rigid && a.is_variable_candidate);
    let b = c(2, &[2], &[2]);
    assert!(!b.is_generalized_gv && b.is_residual && b.is_rigid && !b.is_variable_candidate);
    let d = c(3, &[1], &[3]);
    assert!(d.is_generalized_gv && d.is_residual && !d.is_rigid);
}

#[test]
fn basis_examples() {
    assert_eq!(names(&vey_basis(1, ComplexKind::WO).unwrap()), ["y1c1"]);
    let w2 = vey_basis(2, ComplexKind::W).unwrap();
    assert_eq!(
        names(w2.iter().filter(|v| v.degree == 5)),
        ["y1c1^2", "y1c2"]
    );
    assert_eq!(names(w2.iter().filter(|v| v.degree == 7)), ["y2c2"]);
    let wo3 = vey_basis(3, ComplexKind::WO).unwrap();
    assert_eq!(
        names(wo3.iter().filter(|v| v.degree == 7)),
        ["y1c1^3", "y1c1c2", "y1c3"]
    );
}

#[test]
fn variable_set_is_filter_of_full_basis() {
    for q in 1..=8 {
        let full: Vec<VeyClass> = vey_basis(q, ComplexKind::WO)
            .unwrap()
            .into_iter()
            .filter(|v| v.is_variable_candidate)
            .collect();
        assert_eq!(variable_set(q).unwrap(), full, "q = {q}");
    }
}

#[test]
fn variable_counts() {
    let v: Vec<usize> = (1..=6).map(|q| variable_count(q).unwrap()).collect();
    assert_eq!(v, [1, 2, 3, 6, 8, 14]);
    assert_eq!(names(&variable_set(1).unwrap()), ["y1c1"]);
    assert_eq!(names(&variable_set(2).unwrap()), ["y1c1^2", "y1c2"]);
    assert_eq!(
        names(&variable_set(3).unwrap()),
        ["y1c1^3", "y1c1c2", "y1c3"]
    );
}

#[test]
fn kappa_values() {
    assert_eq!(kappa(2), 0);
    assert_eq!(kappa(3), 1);
    assert_eq!(kappa(7), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn kappa_bounds_and_monotone(q in 1u32..100_000) {
        let k = kappa(q);
        prop_assert!(4 * k <= q + 1);
        prop_assert!(q + 1 < 4 * (k + 1));
        prop_assert!(kappa(q + 1) >= k);
    }

    #[test]
    fn brace_indices_are_even_and_bounded(q in 1u32..200) {
        let b = brace_indices(q);
        prop_assert!(b.iter().all(|e| e % 2 == 0 && 2 * e <= q + 1));
        prop_assert_eq!(b.last().copied().unwrap_or(0), 2 * kappa(q));
    }
}

#[test]
fn extended_with_empty_i_prime_is_variable_set() {
    for q in 1..=8 {
        let ext = extended_basis(q, 0..=u32::MAX).unwrap();
        let base: Vec<Monomial> = ext
            .classes
            .iter()
            .filter(|c| c.i_prime.is_empty())
            .map(|c| c.monomial.clone())
            .collect();
        let vs: Vec<Monomial> = variable_set(q)
            .unwrap()
            .into_iter()
            .map(|v| v.monomial)
            .collect();
        assert_eq!(base, vs);
        assert_eq!(ext.count(2 * q + 1), vs.len());
        for c in &ext.classes {
            assert_eq!(c.degree, c.monomial.degree());
            assert!(c
                .i_prime
                .iter()
                .all(|&e| e % 2 == 0 && 2 * e <= q + 1 && e > c.base.y()[0]));
        }
    }
}

#[test]
fn extended_classes_are_cocycles_in_w() {
    for q in 1..=5 {
        let cx = build_complex(q, ComplexKind::W).unwrap();
        let ext = extended_basis(q, 0..=u32::MAX).unwrap();
        for c in &ext.classes {
            let e = Element::from_monomial(cx.signature(), c.monomial.clone()).unwrap();
            assert!(cx.is_cocycle(&e).unwrap(), "{}", c.monomial);
        }
        for &n in ext.counts.keys() {
            let elems: Vec<Element> = ext
                .classes
                .iter()
                .filter(|c| c.degree == n)
                .map(|c| Element::from_monomial(cx.signature(), c.monomial.clone()).unwrap())
                .collect();
            assert_eq!(
                cx.class_rank(n, &elems).unwrap(),
                elems.len(),
                "q = {q}, degree {n}"
            );
        }
    }
}

#[test]
fn braced_classes_for_q3() {
    let ext = extended_basis(3, 10..=10).unwrap();
    let names: Vec<String> = ext.classes.iter().map(|c| c.monomial.to_string()).collect();
    assert_eq!(names, ["y1y2c1^3", "y1y2c1c2", "y1y2c3"]);
    assert_eq!(ext.count(10), 3);
    assert_eq!(
        extended_basis(2, 0..=100).unwrap().classes.len(),
        variable_set(2).unwrap().len()
    );
}

#[test]
fn q7_degree_22_uses_index_4() {
    let ext = extended_basis(7, 22..=22).unwrap();
    assert!(ext.classes.iter().any(|c| c.i_prime == [4]));
    assert!(ext.classes.iter().all(|c| c.monomial.degree() == 22));
    assert!(ext.count(22) > 0);
}

#[test]
fn w2_report_flags_printed_listing() {
    let r = validate_vey(2, ComplexKind::W).unwrap();
    let counts: Vec<(u32, usize, usize)> = r
        .degrees
        .iter()
        .filter(|d| d.degree > 4)
        .map(|d| (d.degree, d.enumerated, d.oracle_dim))
        .collect();
    assert_eq!(counts, [(5, 2, 2), (7, 1, 1), (8, 2, 2)]);
    let d8 = r.degree(8).unwrap();
    assert!(d8
        .notes
        .iter()
        .any(|n| n.contains("y1y2c1^2") && n.contains("absent from the printed")));
}

#[test]
fn forall_odd_is_default_and_matches_wo_oracle() {
    for q in 1..=6 {
        let a = vey_basis(q, ComplexKind::WO).unwrap();
        let b = vey_basis_with(q, ComplexKind::WO, WoCondition::ForallOdd).unwrap();
        assert_eq!(a, b);
    }
    assert!(vey_basis(2, ComplexKind::I).is_err());
}

use std::collections::HashSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use rtrivial::families::{free_lrb, hecke_a};
use rtrivial::monoid::DEFAULT_CAP;
use rtrivial::order::{is_j_trivial, is_r_trivial};
use rtrivial::suite::omega_identities;
use rtrivial::{weak_preorder, Algebra, AlgebraElement, ElementId, Error, Monoid, Transformation};

fn element(alg: &Algebra, size: usize, terms: &[(usize, i64)]) -> AlgebraElement {
    alg.from_terms(terms.iter().map(|&(x, c)| (ElementId::new(x % size), BigInt::from(c))))
}

fn terms() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..1000, -5i64..=5), 0..8)
}

fn transformations(degree: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(prop::collection::vec(0..degree, degree), 1..=3)
}

fn closed(gens: &[Vec<usize>], cap: usize) -> Option<Monoid> {
    let gens: Vec<Transformation> = gens.iter().map(|g| Transformation::new(g.clone()).unwrap()).collect();
    match Monoid::close(&gens, cap) {
        Ok(m) => Some(m),
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => panic!("{e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn algebra_is_a_ring(a in terms(), b in terms(), c in terms()) {
        let m = hecke_a(4, DEFAULT_CAP).unwrap();
        let alg = Algebra::new(&m);
        let (a, b, c) = (element(&alg, 24, &a), element(&alg, 24, &b), element(&alg, 24, &c));
        let ab_c = alg.mul(&alg.mul(&a, &b).unwrap(), &c).unwrap();
        let a_bc = alg.mul(&a, &alg.mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let left = alg.mul(&a, &alg.add(&b, &c).unwrap()).unwrap();
        let right = alg.add(&alg.mul(&a, &b).unwrap(), &alg.mul(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let left = alg.mul(&alg.add(&a, &b).unwrap(), &c).unwrap();
        let right = alg.add(&alg.mul(&a, &c).unwrap(), &alg.mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(alg.mul(&a, &alg.one()).unwrap(), a.clone());
        prop_assert_eq!(alg.mul(&alg.one(), &a).unwrap(), a.clone());
        prop_assert!(alg.sub(&a, &a).unwrap().is_zero());
        prop_assert_eq!(alg.add(&a, &b).unwrap(), alg.add(&b, &a).unwrap());
    }

    #[test]
    fn r_triviality_matches_right_ideals(gens in transformations(4)) {
        let Some(m) = closed(&gens, 256) else { return Ok(()) };
        let mut ideals = HashSet::new();
        let distinct = m.elements().all(|x| {
            let ideal: Vec<bool> = {
                let mut v = vec![false; m.size()];
                m.elements().for_each(|s| v[m.mul(x, s).index()] = true);
                v
            };
            ideals.insert(ideal)
        });
        let order = weak_preorder(&m);
        prop_assert_eq!(is_r_trivial(&order).holds(), distinct);
        if is_j_trivial(&m, &order) {
            prop_assert!(distinct);
        }
    }

    #[test]
    fn omega_identities_hold_on_decreasing_monoids(gens in prop::collection::vec(
        (0usize..1, 0usize..2, 0usize..3, 0usize..4, 0usize..5).prop_map(|(a, b, c, d, e)| vec![a, b, c, d, e]),
        1..=3,
    )) {
        let Some(m) = closed(&gens, 200) else { return Ok(()) };
        prop_assert!(is_r_trivial(&weak_preorder(&m)).holds());
        let report = omega_identities(&m);
        prop_assert!(report.passed(), "{}", report);
    }
}

#[test]
fn groups_fail_the_omega_identities() {
    let m = closed(&[vec![1, 2, 0]], 10).unwrap();
    assert!(!omega_identities(&m).passed());
}

#[test]
fn algebras_of_different_monoids_do_not_mix() {
    let a = free_lrb(2, DEFAULT_CAP).unwrap();
    let b = free_lrb(2, DEFAULT_CAP).unwrap();
    let (x, y) = (Algebra::new(&a).one(), Algebra::new(&b).one());
    assert!(matches!(Algebra::new(&a).mul(&x, &y), Err(Error::MonoidMismatch)));
}

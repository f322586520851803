use std::collections::BTreeSet;

use rtrivial::families::{hecke_a, hecke_permutation, inversions};
use rtrivial::monoid::DEFAULT_CAP;
use rtrivial::order::is_j_trivial;
use rtrivial::{weak_preorder, WeaklyOrderedMonoid};

/// Pairs of values `(a, b)` with `a < b` and `b` placed before `a`.
fn inversion_set(w: &[usize]) -> BTreeSet<(usize, usize)> {
    let mut set = BTreeSet::new();
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                set.insert((w[j], w[i]));
            }
        }
    }
    set
}

#[test]
fn preorder_is_the_right_weak_order() {
    for n in 2..=4 {
        let m = hecke_a(n, DEFAULT_CAP).unwrap();
        let order = weak_preorder(&m);
        let perms: Vec<Vec<usize>> = m.elements().map(|x| hecke_permutation(&m, n, x).unwrap()).collect();
        for x in m.elements() {
            for y in m.elements() {
                let expected = inversion_set(&perms[x.index()]).is_subset(&inversion_set(&perms[y.index()]));
                assert_eq!(order.leq(x, y), expected, "n = {n}, {:?} vs {:?}", perms[x.index()], perms[y.index()]);
            }
        }
    }
}

#[test]
fn word_length_is_coxeter_length() {
    let m = hecke_a(5, DEFAULT_CAP).unwrap();
    for x in m.elements() {
        assert_eq!(m.word(x).len(), inversions(&hecke_permutation(&m, 5, x).unwrap()));
    }
}

#[test]
fn semilattice_is_the_boolean_lattice() {
    for n in 2..=5 {
        let m = hecke_a(n, DEFAULT_CAP).unwrap();
        let w = WeaklyOrderedMonoid::new(&m).unwrap();
        assert!(is_j_trivial(&m, w.order()));
        let l = w.lattice();
        assert_eq!(l.len(), 1 << (n - 1));
        for j in l.node_ids() {
            for k in l.node_ids() {
                let (a, b) = (l.generators_below(&m, j), l.generators_below(&m, k));
                assert_eq!(l.preceq(j, k), a.iter().all(|g| b.contains(g)));
            }
        }
        // Length of the longest element.
        assert_eq!(w.chain_length(), n * (n - 1) / 2);
    }
}

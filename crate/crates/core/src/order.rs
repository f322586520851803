//! The weak preorder `u <= v  <=>  uw = v for some w`, and the R- and
//! J-triviality tests built on it.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::monoid::{ElementId, Monoid};

/// Above this size, triple scans are replaced by seeded random sampling.
pub const EXHAUSTIVE_TRIPLE_BOUND: usize = 200;
pub const SAMPLED_TRIPLES: usize = 1_000_000;
pub const SAMPLING_SEED: u64 = 0x005e_ed0f_7219;

/// Reachability in the right Cayley graph.
#[derive(Clone, Debug)]
pub struct OrderRelation {
    /// `rows[x]` holds every `y` with `x <= y`.
    rows: Vec<FixedBitSet>,
    chain_length: Option<usize>,
}

impl OrderRelation {
    pub fn leq(&self, x: ElementId, y: ElementId) -> bool {
        self.rows[x.index()].contains(y.index())
    }

    pub fn lt(&self, x: ElementId, y: ElementId) -> bool {
        x != y && self.leq(x, y)
    }

    /// The principal right ideal `xS` as a bitset over element ids.
    pub fn up_set(&self, x: ElementId) -> &FixedBitSet {
        &self.rows[x.index()]
    }

    /// Number of steps in a longest strictly increasing chain. `None` when
    /// the preorder is not antisymmetric.
    pub fn chain_length(&self) -> Option<usize> {
        self.chain_length
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }
}

/// Computes the weak preorder by a breadth-first search from every element.
pub fn weak_preorder(m: &Monoid) -> OrderRelation {
    let n = m.size();
    let mut rows = Vec::with_capacity(n);
    let mut queue = Vec::with_capacity(n);
    for x in m.elements() {
        let mut seen = FixedBitSet::with_capacity(n);
        seen.insert(x.index());
        queue.clear();
        queue.push(x);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            for &g in m.generators() {
                let v = m.mul(u, g);
                if !seen.contains(v.index()) {
                    seen.insert(v.index());
                    queue.push(v);
                }
            }
        }
        rows.push(seen);
    }
    let mut order = OrderRelation { rows, chain_length: None };
    if antisymmetry_witness(&order).is_none() {
        order.chain_length = Some(longest_chain(m, &order));
    }
    order
}

fn antisymmetry_witness(order: &OrderRelation) -> Option<(ElementId, ElementId)> {
    let n = order.size();
    for x in 0..n {
        for y in order.rows[x].ones() {
            if y != x && order.rows[y].contains(x) {
                let (a, b) = if x < y { (x, y) } else { (y, x) };
                return Some((ElementId::new(a), ElementId::new(b)));
            }
        }
    }
    None
}

/// Longest path in the right Cayley graph with loops removed. When the order
/// is antisymmetric every non-loop edge is a strict increase, and every chain
/// refines to a path of such edges.
fn longest_chain(m: &Monoid, order: &OrderRelation) -> usize {
    // x < y implies yS is strictly contained in xS, so larger up-sets come first.
    let mut topo: Vec<ElementId> = m.elements().collect();
    topo.sort_by_key(|&x| std::cmp::Reverse(order.up_set(x).count_ones(..)));
    let mut depth = vec![0usize; m.size()];
    for &x in topo.iter().rev() {
        let best = m
            .generators()
            .iter()
            .map(|&g| m.mul(x, g))
            .filter(|&y| y != x)
            .map(|y| depth[y.index()] + 1)
            .max()
            .unwrap_or(0);
        depth[x.index()] = best;
    }
    depth.into_iter().max().unwrap_or(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RTriviality {
    RTrivial,
    /// `x <= y` and `y <= x` with `x != y`.
    NotRTrivial {
        x: ElementId,
        y: ElementId,
    },
}

impl RTriviality {
    pub fn holds(self) -> bool {
        matches!(self, RTriviality::RTrivial)
    }
}

pub fn is_r_trivial(order: &OrderRelation) -> RTriviality {
    match antisymmetry_witness(order) {
        None => RTriviality::RTrivial,
        Some((x, y)) => RTriviality::NotRTrivial { x, y },
    }
}

/// True iff all two-sided principal ideals `SxS` are distinct.
pub fn is_j_trivial(m: &Monoid, order: &OrderRelation) -> bool {
    let n = m.size();
    let mut seen: HashSet<FixedBitSet> = HashSet::with_capacity(n);
    for x in m.elements() {
        // SxS is the union of the right ideals (sx)S.
        let mut ideal = FixedBitSet::with_capacity(n);
        let mut left = FixedBitSet::with_capacity(n);
        for s in m.elements() {
            let sx = m.mul(s, x);
            if !left.contains(sx.index()) {
                left.insert(sx.index());
                ideal.union_with(order.up_set(sx));
            }
        }
        if !seen.insert(ideal) {
            return false;
        }
    }
    true
}

/// Checks that `xyz = x` implies `xy = x`, returning the first violating
/// triple. Exhaustive up to [`EXHAUSTIVE_TRIPLE_BOUND`] elements, sampled above.
pub fn check_left_absorption(m: &Monoid) -> Option<(ElementId, ElementId, ElementId)> {
    let violates = |x, y, z| m.mul(m.mul(x, y), z) == x && m.mul(x, y) != x;
    let n = m.size();
    if n <= EXHAUSTIVE_TRIPLE_BOUND {
        for x in m.elements() {
            for y in m.elements() {
                for z in m.elements() {
                    if violates(x, y, z) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
        let mut pick = || ElementId::new(rng.gen_range(0..n));
        (0..SAMPLED_TRIPLES).map(|_| (pick(), pick(), pick())).find(|&(x, y, z)| violates(x, y, z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{free_lrb, hecke_a};
    use crate::monoid::{Transformation, DEFAULT_CAP};

    fn group2() -> Monoid {
        Monoid::from_table(&[vec![0, 1], vec![1, 0]], 0, &[1]).unwrap()
    }

    fn matrix_monoid() -> Monoid {
        let g1 = Transformation::new(vec![0, 2, 2]).unwrap();
        let g2 = Transformation::new(vec![1, 1, 2]).unwrap();
        Monoid::close(&[g1, g2], DEFAULT_CAP).unwrap()
    }

    fn lrb2() -> Monoid {
        free_lrb(2, DEFAULT_CAP).unwrap().with_generator_names(vec!["a".into(), "b".into()]).unwrap()
    }

    #[test]
    fn identity_is_below_everything() {
        let m = free_lrb(3, DEFAULT_CAP).unwrap();
        let order = weak_preorder(&m);
        assert!(m.elements().all(|x| order.leq(m.identity(), x)));
    }

    #[test]
    fn free_lrb_order() {
        let m = lrb2();
        let order = weak_preorder(&m);
        let [a, ab, ba] = ["a", "ab", "ba"].map(|w| m.element_of(w).unwrap());
        assert!(order.leq(a, ab));
        assert!(!order.leq(a, ba));
        assert!(!order.leq(ab, ba) && !order.leq(ba, ab));
        assert_eq!(order.chain_length(), Some(2));
        assert!(is_r_trivial(&order).holds());
        assert!(!is_j_trivial(&m, &order));
    }

    #[test]
    fn order_two_group_is_not_r_trivial() {
        let m = group2();
        let order = weak_preorder(&m);
        let x = ElementId::new(1);
        assert!(order.leq(x, m.identity()) && order.leq(m.identity(), x));
        assert_eq!(is_r_trivial(&order), RTriviality::NotRTrivial { x: m.identity(), y: x });
        assert_eq!(order.chain_length(), None);
    }

    #[test]
    fn matrix_monoid_is_r_trivial() {
        let m = matrix_monoid();
        let order = weak_preorder(&m);
        assert!(is_r_trivial(&order).holds());
        assert_eq!(check_left_absorption(&m), None);
        assert_eq!(order.chain_length(), Some(3));
    }

    #[test]
    fn trivial_monoid() {
        let m = Monoid::from_table(&[vec![0]], 0, &[]).unwrap();
        let order = weak_preorder(&m);
        assert!(is_j_trivial(&m, &order));
        assert_eq!(check_left_absorption(&m), None);
        assert_eq!(order.chain_length(), Some(0));
    }

    #[test]
    fn hecke_is_j_trivial() {
        let m = hecke_a(5, DEFAULT_CAP).unwrap();
        let order = weak_preorder(&m);
        assert!(is_j_trivial(&m, &order));
        // Longest element has length 10.
        assert_eq!(order.chain_length(), Some(10));
    }

    #[test]
    fn left_absorption_detects_groups() {
        // In a group xyz = x with y = z^-1 != 1 violates xy = x.
        let m = group2();
        assert!(check_left_absorption(&m).is_some());
    }

    #[test]
    fn left_absorption_on_free_lrb() {
        let m = lrb2();
        assert_eq!(check_left_absorption(&m), None);
        let [ab, a] = ["ab", "a"].map(|w| m.element_of(w).unwrap());
        assert_eq!(m.mul(ab, a), ab);
    }
}

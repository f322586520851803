//! The upper semilattice of left ideals `Se` generated by idempotents,
//! ordered by reverse inclusion, with the content map `C(x) = S x^ω` and
//! the descent map `D`.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::monoid::{ElementId, Monoid};
use crate::order::{is_r_trivial, weak_preorder, OrderRelation, RTriviality};
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J{}", self.0)
    }
}

#[derive(Clone, Debug)]
pub struct LatticeNode {
    pub id: NodeId,
    /// Sorted element ids of `S * witness`.
    pub ideal: Vec<ElementId>,
    members: FixedBitSet,
    pub witness: ElementId,
}

impl LatticeNode {
    pub fn contains(&self, x: ElementId) -> bool {
        self.members.contains(x.index())
    }
}

#[derive(Clone, Debug)]
pub struct Semilattice {
    nodes: Vec<LatticeNode>,
    /// `preceq[a]` holds every `b` with `a ⪯ b`.
    preceq: Vec<FixedBitSet>,
    join: Vec<NodeId>,
    content: Vec<NodeId>,
    descent: Vec<NodeId>,
    bottom: NodeId,
    by_ideal: HashMap<FixedBitSet, NodeId>,
}

fn left_ideal(m: &Monoid, e: ElementId) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(m.size());
    for s in m.elements() {
        set.insert(m.mul(s, e).index());
    }
    set
}

fn to_ids(set: &FixedBitSet) -> Vec<ElementId> {
    set.ones().map(ElementId::new).collect()
}

/// Builds the semilattice, refusing monoids that are not R-trivial.
pub fn build_semilattice(m: &Monoid, order: &OrderRelation) -> Result<Semilattice> {
    if let RTriviality::NotRTrivial { x, y } = is_r_trivial(order) {
        return Err(Error::NotRTrivial { x, y });
    }
    let n = m.size();

    let mut nodes: Vec<LatticeNode> = Vec::new();
    let mut by_ideal: HashMap<FixedBitSet, NodeId> = HashMap::new();
    for e in m.idempotents() {
        let ideal = left_ideal(m, e);
        if !by_ideal.contains_key(&ideal) {
            let id = NodeId(nodes.len());
            by_ideal.insert(ideal.clone(), id);
            nodes.push(LatticeNode { id, ideal: to_ids(&ideal), members: ideal, witness: e });
        }
    }
    let k = nodes.len();

    let preceq: Vec<FixedBitSet> = nodes
        .iter()
        .map(|a| {
            let mut row = FixedBitSet::with_capacity(k);
            for b in &nodes {
                if b.members.is_subset(&a.members) {
                    row.insert(b.id.0);
                }
            }
            row
        })
        .collect();

    let mut join = vec![NodeId(0); k * k];
    for a in &nodes {
        for b in &nodes {
            let ef = m.mul(a.witness, b.witness);
            let lub_ideal = left_ideal(m, m.idempotent_power(ef));
            let via_product = *by_ideal
                .get(&lub_ideal)
                .ok_or_else(|| Error::Inconsistent(format!("S(ef)^ω for {} v {} is not a node", a.id, b.id)))?;
            let via_poset = poset_lub(&nodes, &preceq, a.id, b.id)
                .ok_or_else(|| Error::Inconsistent(format!("{} and {} have no least upper bound", a.id, b.id)))?;
            if via_product != via_poset {
                return Err(Error::Inconsistent(format!(
                    "join of {} and {}: S(ef)^ω gives {via_product}, poset gives {via_poset}",
                    a.id, b.id
                )));
            }
            join[a.id.0 * k + b.id.0] = via_product;
        }
    }

    let bottom = by_ideal[&left_ideal(m, m.identity())];
    let mut lattice = Semilattice {
        nodes,
        preceq,
        join,
        content: Vec::with_capacity(n),
        descent: Vec::with_capacity(n),
        bottom,
        by_ideal,
    };
    let content = m.elements().map(|x| compute_content(m, &lattice, x)).collect::<Result<Vec<_>>>()?;
    lattice.content = content;
    let descent = m.elements().map(|u| compute_descent(m, order, &lattice, u)).collect::<Result<Vec<_>>>()?;
    lattice.descent = descent;
    Ok(lattice)
}

fn poset_lub(nodes: &[LatticeNode], preceq: &[FixedBitSet], a: NodeId, b: NodeId) -> Option<NodeId> {
    let mut upper = preceq[a.0].clone();
    upper.intersect_with(&preceq[b.0]);
    // The least upper bound lies below every other upper bound.
    upper.ones().find(|&c| upper.is_subset(&preceq[c])).map(|c| nodes[c].id)
}

/// `C(x)`, checked against the alternative description `{a : ax = a}`.
fn compute_content(m: &Monoid, lattice: &Semilattice, x: ElementId) -> Result<NodeId> {
    let ideal = left_ideal(m, m.idempotent_power(x));
    let mut fixed = FixedBitSet::with_capacity(m.size());
    for a in m.elements() {
        if m.mul(a, x) == a {
            fixed.insert(a.index());
        }
    }
    if fixed != ideal {
        return Err(Error::Inconsistent(format!("S x^ω != {{a : ax = a}} for x = {x}")));
    }
    lattice.by_ideal.get(&ideal).copied().ok_or_else(|| Error::Inconsistent(format!("S x^ω is not a node for x = {x}")))
}

/// `D(u) = C(e)` for a maximal `e` in the stabilizer `{s : us = u}`. The
/// smallest-id maximal element is used; every maximal element must agree.
fn compute_descent(m: &Monoid, order: &OrderRelation, lattice: &Semilattice, u: ElementId) -> Result<NodeId> {
    let mut stabilizer = FixedBitSet::with_capacity(m.size());
    for s in m.elements() {
        if m.mul(u, s) == u {
            stabilizer.insert(s.index());
        }
    }
    let mut chosen: Option<(ElementId, NodeId)> = None;
    for s in stabilizer.ones().map(ElementId::new) {
        let mut above = order.up_set(s).clone();
        above.intersect_with(&stabilizer);
        if above.count_ones(..) != 1 {
            continue;
        }
        if !m.is_idempotent(s) {
            return Err(Error::Inconsistent(format!("maximal stabilizer element {s} of {u} is not idempotent")));
        }
        let c = lattice.content(s);
        match chosen {
            None => chosen = Some((s, c)),
            Some((_, prev)) if prev != c => {
                return Err(Error::Inconsistent(format!("descent of {u} is not well defined")));
            }
            Some(_) => {}
        }
    }
    chosen.map(|(_, c)| c).ok_or_else(|| Error::Inconsistent(format!("stabilizer of {u} has no maximal element")))
}

impl Semilattice {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[LatticeNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &LatticeNode {
        &self.nodes[id.0]
    }

    pub fn node_ids(&self) -> impl ExactSizeIterator<Item = NodeId> + Clone {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn bottom(&self) -> NodeId {
        self.bottom
    }

    /// `a ⪯ b`, i.e. `Sa ⊇ Sb`.
    pub fn preceq(&self, a: NodeId, b: NodeId) -> bool {
        self.preceq[a.0].contains(b.0)
    }

    pub fn prec(&self, a: NodeId, b: NodeId) -> bool {
        a != b && self.preceq(a, b)
    }

    pub fn join(&self, a: NodeId, b: NodeId) -> NodeId {
        self.join[a.0 * self.nodes.len() + b.0]
    }

    pub fn content(&self, x: ElementId) -> NodeId {
        self.content[x.index()]
    }

    pub fn descent(&self, u: ElementId) -> NodeId {
        self.descent[u.index()]
    }

    pub fn node_of_ideal(&self, ideal: &[ElementId], size: usize) -> Option<NodeId> {
        let mut set = FixedBitSet::with_capacity(size);
        for x in ideal {
            set.insert(x.index());
        }
        self.by_ideal.get(&set).copied()
    }

    /// Indices of the generators whose content lies below `j`.
    pub fn generators_below(&self, m: &Monoid, j: NodeId) -> Vec<usize> {
        m.generators().iter().enumerate().filter(|(_, &g)| self.preceq(self.content(g), j)).map(|(i, _)| i).collect()
    }

    /// The node whose set of generators below it is exactly `generators`.
    /// Every node is the join of the contents of the generators below it, so
    /// this labelling is injective.
    pub fn node_for_generators(&self, m: &Monoid, generators: &[usize]) -> Option<NodeId> {
        let mut wanted = generators.to_vec();
        wanted.sort_unstable();
        wanted.dedup();
        self.node_ids().find(|&j| self.generators_below(m, j) == wanted)
    }

    /// `{g1,g2}`-style label listing the generators below `j`.
    pub fn label(&self, m: &Monoid, j: NodeId) -> String {
        let names: Vec<&str> =
            self.generators_below(m, j).into_iter().map(|i| m.generator_names()[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Cover relations `(a, b)` with `a ≺ b` and nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut edges = Vec::new();
        for a in self.node_ids() {
            for b in self.node_ids() {
                if self.prec(a, b) && !self.node_ids().any(|c| self.prec(a, c) && self.prec(c, b)) {
                    edges.push((a, b));
                }
            }
        }
        edges
    }

    /// Maximal-first linear extension: ascending ideal size, ties by node id.
    /// Strictly larger nodes have strictly smaller ideals, so it refines ≻.
    pub fn top_down(&self) -> Vec<NodeId> {
        let mut ids: Vec<NodeId> = self.node_ids().collect();
        ids.sort_by_key(|&j| (self.nodes[j.0].ideal.len(), j.0));
        ids
    }
}

/// An R-trivial monoid together with its weak order and semilattice.
#[derive(Clone, Debug)]
pub struct WeaklyOrderedMonoid<'m> {
    monoid: &'m Monoid,
    order: OrderRelation,
    lattice: Semilattice,
}

impl<'m> WeaklyOrderedMonoid<'m> {
    pub fn new(monoid: &'m Monoid) -> Result<Self> {
        let order = weak_preorder(monoid);
        let lattice = build_semilattice(monoid, &order)?;
        Ok(WeaklyOrderedMonoid { monoid, order, lattice })
    }

    pub fn monoid(&self) -> &'m Monoid {
        self.monoid
    }

    pub fn order(&self) -> &OrderRelation {
        &self.order
    }

    pub fn lattice(&self) -> &Semilattice {
        &self.lattice
    }

    pub fn chain_length(&self) -> usize {
        self.order.chain_length().expect("R-trivial monoids have a chain length")
    }

    pub fn content(&self, x: ElementId) -> NodeId {
        self.lattice.content(x)
    }

    pub fn verify_axioms(&self) -> Report {
        verify_weak_order_axioms(self.monoid, &self.order, &self.lattice)
    }
}

/// Checks the four weak-order axioms and the monotonicity of `C`.
pub fn verify_weak_order_axioms(m: &Monoid, order: &OrderRelation, lattice: &Semilattice) -> Report {
    let mut report = Report::new("weak-order axioms");
    let c = |x| lattice.content(x);
    let d = |x| lattice.descent(x);
    let pairs = || m.elements().flat_map(move |u| m.elements().map(move |v| (u, v)));
    let show = |x| m.render_element(x);

    report.check_first(
        "C(uv) = C(u) v C(v)",
        pairs().find(|&(u, v)| c(m.mul(u, v)) != lattice.join(c(u), c(v))),
        |(u, v)| format!("u = {}, v = {}", show(u), show(v)),
    );

    let mut hit = FixedBitSet::with_capacity(lattice.len());
    m.elements().for_each(|x| hit.insert(c(x).0));
    report.check_first("C is surjective", lattice.node_ids().find(|j| !hit.contains(j.0)), |j| {
        format!("node {j} is not a content")
    });

    report.check_first(
        "uv <= u implies C(v) ⪯ D(u)",
        pairs().find(|&(u, v)| order.leq(m.mul(u, v), u) && !lattice.preceq(c(v), d(u))),
        |(u, v)| format!("u = {}, v = {}", show(u), show(v)),
    );

    report.check_first(
        "C(v) ⪯ D(u) implies uv = u",
        pairs().find(|&(u, v)| lattice.preceq(c(v), d(u)) && m.mul(u, v) != u),
        |(u, v)| format!("u = {}, v = {}", show(u), show(v)),
    );

    report.check_first(
        "x <= y implies C(x) ⪯ C(y)",
        pairs().find(|&(x, y)| order.leq(x, y) && !lattice.preceq(c(x), c(y))),
        |(x, y)| format!("x = {}, y = {}", show(x), show(y)),
    );
    report
}

/// The least-upper-bound property of `S(ef)^ω`, checked by direct set inclusion.
pub fn check_join_is_least_upper_bound(lattice: &Semilattice) -> Option<(NodeId, NodeId)> {
    for a in lattice.node_ids() {
        for b in lattice.node_ids() {
            let j = lattice.join(a, b);
            let jn = &lattice.node(j).members;
            if !jn.is_subset(&lattice.node(a).members) || !jn.is_subset(&lattice.node(b).members) {
                return Some((a, b));
            }
            for g in lattice.nodes() {
                let upper =
                    g.members.is_subset(&lattice.node(a).members) && g.members.is_subset(&lattice.node(b).members);
                if upper && !g.members.is_subset(jn) {
                    return Some((a, b));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{free_lrb, hecke_a, hecke_element};
    use crate::monoid::{Transformation, DEFAULT_CAP};
    use crate::order::weak_preorder;

    fn lrb() -> Monoid {
        free_lrb(2, DEFAULT_CAP).unwrap().with_generator_names(vec!["a".into(), "b".into()]).unwrap()
    }

    fn matrix_monoid() -> Monoid {
        let g1 = Transformation::new(vec![0, 2, 2]).unwrap();
        let g2 = Transformation::new(vec![1, 1, 2]).unwrap();
        Monoid::close(&[g1, g2], DEFAULT_CAP).unwrap()
    }

    #[test]
    fn free_lrb_lattice_has_four_nodes() {
        let m = lrb();
        let order = weak_preorder(&m);
        let l = build_semilattice(&m, &order).unwrap();
        assert_eq!(l.len(), 4);
        let node = |gens: &[usize]| l.node_for_generators(&m, gens).unwrap();
        let (empty, a, b, ab) = (node(&[]), node(&[0]), node(&[1]), node(&[0, 1]));
        assert_eq!(empty, l.bottom());
        assert!(l.prec(empty, a) && l.prec(a, ab) && l.prec(empty, b) && l.prec(b, ab));
        assert!(!l.preceq(a, b) && !l.preceq(b, a));
        assert_eq!(l.join(a, b), ab);
        assert_eq!(l.content(m.element_of("ab").unwrap()), ab);
        assert_eq!(l.content(m.element_of("ba").unwrap()), ab);
        assert_eq!(l.label(&m, a), "{a}");
        assert_eq!(l.hasse_edges().len(), 4);
        assert!(verify_weak_order_axioms(&m, &order, &l).passed());
        assert_eq!(check_join_is_least_upper_bound(&l), None);
    }

    #[test]
    fn trivial_monoid_lattice() {
        let m = Monoid::from_table(&[vec![0]], 0, &[]).unwrap();
        let order = weak_preorder(&m);
        let l = build_semilattice(&m, &order).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l.content(m.identity()), l.bottom());
        assert_eq!(l.descent(m.identity()), l.bottom());
        assert!(verify_weak_order_axioms(&m, &order, &l).passed());
    }

    #[test]
    fn refuses_non_r_trivial() {
        let m = Monoid::from_table(&[vec![0, 1], vec![1, 0]], 0, &[1]).unwrap();
        let order = weak_preorder(&m);
        assert!(matches!(build_semilattice(&m, &order), Err(Error::NotRTrivial { .. })));
    }

    #[test]
    fn matrix_monoid_content_and_descent() {
        let m = matrix_monoid();
        let order = weak_preorder(&m);
        let l = build_semilattice(&m, &order).unwrap();
        assert_eq!(l.len(), 4);
        let node = |gens: &[usize]| l.node_for_generators(&m, gens).unwrap();
        let (one, g1, g2) = (m.identity(), m.generators()[0], m.generators()[1]);
        let (g1g2, g2g1) = (m.mul(g1, g2), m.mul(g2, g1));
        assert_eq!(
            [one, g1, g2, g1g2, g2g1].map(|x| l.content(x)),
            [node(&[]), node(&[0]), node(&[1]), node(&[0, 1]), node(&[0, 1])]
        );
        assert_eq!(
            [one, g1, g2, g1g2, g2g1].map(|x| l.descent(x)),
            [node(&[]), node(&[0]), node(&[1]), node(&[1]), node(&[0, 1])]
        );
        assert!(verify_weak_order_axioms(&m, &order, &l).passed());
    }

    #[test]
    fn hecke_lattice_is_boolean() {
        let m = hecke_a(5, DEFAULT_CAP).unwrap();
        let order = weak_preorder(&m);
        let l = build_semilattice(&m, &order).unwrap();
        assert_eq!(l.len(), 16);
        for mask in 0u32..16 {
            let gens: Vec<usize> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
            assert!(l.node_for_generators(&m, &gens).is_some());
        }
        let t12 = hecke_element(&m, "12").unwrap();
        assert_eq!(l.content(t12), l.node_for_generators(&m, &[0, 1]).unwrap());
        for x in m.elements() {
            let descents: Vec<usize> = (0..4).filter(|&i| m.mul(x, m.generators()[i]) == x).collect();
            assert_eq!(l.descent(x), l.node_for_generators(&m, &descents).unwrap());
        }
    }
}

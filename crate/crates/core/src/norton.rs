//! Norton elements and the recursive system of primitive orthogonal
//! idempotents `e_J`, one per node `J` of the semilattice.
//!
//! For each node `J`:
//!
//! * `T_J = (∏ g^ω)^ω` over generators with `C(g) ⪯ J`, in generator order;
//! * `B_J = ∏ (1 - g^ω)` over the remaining generators, and `A_J` its
//!   stabilized power;
//! * `z_J = A_J T_J`;
//! * `P_J = 1 - (1 + (N+1) z_J)(1 - z_J)^(N+1)` where `(1 - z_J)^N z_J² = 0`;
//! * `e_J = P_J (1 - Σ_{K ≻ J} e_K)`, computed from the maximal nodes down.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::{Algebra, AlgebraElement, PowerOutcome};
use crate::error::{Error, Result};
use crate::lattice::{NodeId, WeaklyOrderedMonoid};
use crate::monoid::ElementId;
use crate::order::is_j_trivial;
use crate::report::Report;

/// Which formula produces `P_J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `P_J = Σ (k+1)(1 - z)^k z²`, valid for every R-trivial monoid.
    General,
    /// `P_J = Σ (1 - z)^n z`, valid for J-trivial monoids.
    JTrivial,
    /// `JTrivial` when the monoid is J-trivial, `General` otherwise.
    Auto,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::General => "general",
            Mode::JTrivial => "jtrivial",
            Mode::Auto => "auto",
        }
    }

    pub fn resolve(self, w: &WeaklyOrderedMonoid) -> Mode {
        match self {
            Mode::Auto if is_j_trivial(w.monoid(), w.order()) => Mode::JTrivial,
            Mode::Auto => Mode::General,
            other => other,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(Mode::General),
            "jtrivial" => Ok(Mode::JTrivial),
            "auto" => Ok(Mode::Auto),
            other => Err(Error::Spec { field: "mode".into(), reason: format!("unknown mode {other:?}") }),
        }
    }
}

/// Everything computed for one node of the semilattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NortonData {
    pub node: NodeId,
    pub t: ElementId,
    pub b: AlgebraElement,
    pub a: AlgebraElement,
    pub z: AlgebraElement,
    /// Least `N` with `B^(N+1) = B^N`.
    pub n_b: usize,
    /// Least `N` with `(1 - z)^N z² = 0`, or with `(1 - z)^N z = 0` in J-trivial mode.
    pub n_z: usize,
    pub p: AlgebraElement,
    pub e: AlgebraElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentSystem {
    /// Indexed by node id.
    pub data: Vec<NortonData>,
    pub generator_order: Vec<String>,
    /// The resolved mode (never `Auto`).
    pub mode: Mode,
    /// Order in which the `e_J` were computed, maximal nodes first.
    pub linear_extension: Vec<NodeId>,
}

impl IdempotentSystem {
    pub fn get(&self, j: NodeId) -> &NortonData {
        &self.data[j.0]
    }

    pub fn idempotents(&self) -> impl Iterator<Item = &AlgebraElement> {
        self.data.iter().map(|d| &d.e)
    }
}

fn exponent_cap(w: &WeaklyOrderedMonoid) -> usize {
    w.chain_length() + 2
}

fn gen_power(w: &WeaklyOrderedMonoid, g: ElementId) -> ElementId {
    w.monoid().idempotent_power(g)
}

/// `T_J`: the idempotent power of the ordered product of `g^ω` over the
/// generators whose content lies below `J`.
pub fn t_element(w: &WeaklyOrderedMonoid, j: NodeId) -> ElementId {
    let m = w.monoid();
    let l = w.lattice();
    let product = m.product(m.generators().iter().filter(|&&g| l.preceq(l.content(g), j)).map(|&g| gen_power(w, g)));
    m.idempotent_power(product)
}

/// Generators whose content is not below `J`, as their idempotent powers.
fn outside_powers(w: &WeaklyOrderedMonoid, j: NodeId) -> Vec<ElementId> {
    let l = w.lattice();
    w.monoid().generators().iter().filter(|&&g| !l.preceq(l.content(g), j)).map(|&g| gen_power(w, g)).collect()
}

/// `B_J = ∏ (1 - g^ω)` over generators with `C(g) ⋠ J`, in generator order.
pub fn b_element(w: &WeaklyOrderedMonoid, j: NodeId) -> Result<AlgebraElement> {
    let alg = Algebra::new(w.monoid());
    let factors: Vec<AlgebraElement> = outside_powers(w, j).into_iter().map(|g| alg.one_minus(g)).collect();
    alg.product(&factors)
}

/// `A_J`, the stabilized power of `B_J`, together with the exponent reached.
pub fn a_element(w: &WeaklyOrderedMonoid, j: NodeId) -> Result<(AlgebraElement, usize)> {
    let alg = Algebra::new(w.monoid());
    let b = b_element(w, j)?;
    let cap = exponent_cap(w);
    let (a, n_b) = match alg.power_until_stable(&b, cap)? {
        PowerOutcome::Stable { power, exponent } => (power, exponent),
        PowerOutcome::NonStabilizing { cap, .. } => return Err(Error::NonStabilizing { cap }),
    };
    for g in outside_powers(w, j) {
        if !alg.mul(&alg.basis(g), &a)?.is_zero() {
            return Err(Error::Inconsistent(format!("g^ω A_J != 0 for J = {j}, g^ω = {g}")));
        }
    }
    Ok((a, n_b))
}

/// Terms other than `t` must have content strictly above `j`; `t` must have
/// coefficient one.
fn check_leading_term(w: &WeaklyOrderedMonoid, j: NodeId, t: ElementId, x: &AlgebraElement) -> Option<String> {
    let l = w.lattice();
    if !x.coefficient(t).is_one() {
        return Some(format!("coefficient of T_J is {}", x.coefficient(t)));
    }
    x.terms()
        .map(|(y, _)| y)
        .find(|&y| y != t && !l.prec(j, l.content(y)))
        .map(|y| format!("term {} has content not above J", w.monoid().render_element(y)))
}

/// The Norton element `z_J = A_J T_J`.
pub fn z_element(w: &WeaklyOrderedMonoid, j: NodeId, a: &AlgebraElement, t: ElementId) -> Result<AlgebraElement> {
    let alg = Algebra::new(w.monoid());
    let z = alg.mul(a, &alg.basis(t))?;
    if let Some(problem) = check_leading_term(w, j, t, &z) {
        return Err(Error::Inconsistent(format!("z_J for J = {j}: {problem}")));
    }
    Ok(z)
}

/// Least `N <= cap` with `(1 - z)^N y = 0`.
fn annihilating_exponent(alg: &Algebra, z: &AlgebraElement, y: &AlgebraElement, cap: usize) -> Result<Option<usize>> {
    let one_minus_z = alg.sub(&alg.one(), z)?;
    let mut current = y.clone();
    for n in 0..=cap {
        if current.is_zero() {
            return Ok(Some(n));
        }
        current = alg.mul(&one_minus_z, &current)?;
    }
    Ok(None)
}

/// `P_J` in closed form, returning it with the exponent `N` used.
pub fn p_element(
    w: &WeaklyOrderedMonoid,
    j: NodeId,
    t: ElementId,
    z: &AlgebraElement,
    mode: Mode,
) -> Result<(AlgebraElement, usize)> {
    let alg = Algebra::new(w.monoid());
    let one = alg.one();
    let one_minus_z = alg.sub(&one, z)?;
    let cap = exponent_cap(w);
    let mode = mode.resolve(w);
    let (p, n) = match mode {
        Mode::JTrivial => {
            let n = annihilating_exponent(&alg, z, z, cap)?
                .ok_or_else(|| Error::Inconsistent(format!("(1 - z)^N z != 0 for N <= {cap}, J = {j}")))?;
            let q = alg.pow(&one_minus_z, n + 1)?;
            (alg.sub(&one, &q)?, n)
        }
        _ => {
            let z2 = alg.mul(z, z)?;
            let n = annihilating_exponent(&alg, z, &z2, cap)?
                .ok_or_else(|| Error::Inconsistent(format!("(1 - z)^N z² != 0 for N <= {cap}, J = {j}")))?;
            let q = alg.pow(&one_minus_z, n + 1)?;
            let lead = alg.add(&one, &alg.scale(z, &BigInt::from(n + 1))?)?;
            (alg.sub(&one, &alg.mul(&lead, &q)?)?, n)
        }
    };
    if alg.mul(&p, &p)? != p {
        return Err(Error::Inconsistent(format!("P_J is not idempotent for J = {j}")));
    }
    if let Some(problem) = check_leading_term(w, j, t, &p) {
        return Err(Error::Inconsistent(format!("P_J for J = {j}: {problem}")));
    }
    Ok((p, n))
}

/// `P_J` by the truncated series: `Σ_{k<=N} (k+1)(1 - z)^k z²` in general
/// mode, `Σ_{k<=N} (1 - z)^k z` in J-trivial mode.
pub fn p_by_summation(alg: &Algebra, z: &AlgebraElement, n: usize, mode: Mode) -> Result<AlgebraElement> {
    let one_minus_z = alg.sub(&alg.one(), z)?;
    let (mut power, weighted) = match mode {
        Mode::JTrivial => (z.clone(), false),
        _ => (alg.mul(z, z)?, true),
    };
    let mut total = alg.zero();
    for k in 0..=n {
        let term = if weighted { alg.scale(&power, &BigInt::from(k + 1))? } else { power.clone() };
        total = alg.add(&total, &term)?;
        power = alg.mul(&one_minus_z, &power)?;
    }
    Ok(total)
}

/// Computes `T_J, B_J, A_J, z_J, P_J` for one node, with `e_J` left at zero.
pub fn norton_data(w: &WeaklyOrderedMonoid, j: NodeId, mode: Mode) -> Result<NortonData> {
    let alg = Algebra::new(w.monoid());
    let t = t_element(w, j);
    if w.content(t) != j {
        return Err(Error::Inconsistent(format!("C(T_J) != J for J = {j}")));
    }
    let b = b_element(w, j)?;
    let (a, n_b) = a_element(w, j)?;
    let z = z_element(w, j, &a, t)?;
    let (p, n_z) = p_element(w, j, t, &z, mode)?;
    Ok(NortonData { node: j, t, b, a, z, n_b, n_z, p, e: alg.zero() })
}

/// The complete system `{e_J}`.
pub fn e_system(w: &WeaklyOrderedMonoid, mode: Mode) -> Result<IdempotentSystem> {
    let m = w.monoid();
    let l = w.lattice();
    let alg = Algebra::new(m);
    let mode = mode.resolve(w);
    let mut data = l.node_ids().map(|j| norton_data(w, j, mode)).collect::<Result<Vec<_>>>()?;

    let order = l.top_down();
    for &j in &order {
        let above: Vec<&AlgebraElement> = l.node_ids().filter(|&k| l.prec(j, k)).map(|k| &data[k.0].e).collect();
        let complement = alg.sub(&alg.one(), &alg.sum(above)?)?;
        data[j.0].e = alg.mul(&data[j.0].p, &complement)?;
    }

    Ok(IdempotentSystem { data, generator_order: m.generator_names().to_vec(), mode, linear_extension: order })
}

/// Checks the defining properties of a complete system of orthogonal
/// idempotents, and the intermediate orthogonality facts it rests on.
pub fn verify_system(w: &WeaklyOrderedMonoid, sys: &IdempotentSystem) -> Result<Report> {
    let m = w.monoid();
    let l = w.lattice();
    let alg = Algebra::new(m);
    let nodes: Vec<NodeId> = l.node_ids().collect();
    let pairs = || nodes.iter().flat_map(|&j| nodes.iter().map(move |&k| (j, k)));
    let label = |j| l.label(m, j);
    let mut report = Report::new("idempotent system");

    let mut first = None;
    for &j in &nodes {
        let e = &sys.get(j).e;
        if alg.mul(e, e)? != *e {
            first = Some(j);
            break;
        }
    }
    report.check_first("e_J idempotent", first, |j| format!("J = {}", label(j)));

    let mut first = None;
    for (j, k) in pairs().filter(|(j, k)| j != k) {
        if !alg.mul(&sys.get(j).e, &sys.get(k).e)?.is_zero() {
            first = Some((j, k));
            break;
        }
    }
    report.check_first("e_J e_K = 0 for J != K", first, |(j, k)| format!("J = {}, K = {}", label(j), label(k)));

    let total = alg.sum(sys.idempotents())?;
    let sums_to_one = total == alg.one();
    report.push("sum of e_J = 1", sums_to_one, (!sums_to_one).then(|| format!("sum = {}", total.display(m))));

    let problem = nodes.iter().find_map(|&j| {
        let d = sys.get(j);
        if d.e.is_zero() {
            return Some((j, "e_J = 0".to_string()));
        }
        check_leading_term(w, j, d.t, &d.e).map(|p| (j, p))
    });
    report.check_first("T_J leading term of e_J", problem, |(j, p)| format!("J = {}: {p}", label(j)));

    let count_ok = sys.data.len() == l.len() && !sys.data.iter().any(|d| d.e.is_zero());
    report.push(
        "number of idempotents = |L|",
        count_ok,
        (!count_ok).then(|| format!("{} idempotents for {} nodes", sys.data.len(), l.len())),
    );

    let mut first = None;
    for (j, k) in pairs().filter(|&(j, k)| !l.preceq(j, k)) {
        if !alg.mul(&sys.get(j).z, &sys.get(k).z)?.is_zero() {
            first = Some((j, k));
            break;
        }
    }
    report.check_first("z_J z_K = 0 for J ⋠ K", first, |(j, k)| format!("J = {}, K = {}", label(j), label(k)));

    let mut first = None;
    for (j, k) in pairs().filter(|&(j, k)| !l.preceq(j, k)) {
        if !alg.mul(&sys.get(j).p, &sys.get(k).p)?.is_zero() {
            first = Some((j, k));
            break;
        }
    }
    report.check_first("P_J P_K = 0 for J ⋠ K", first, |(j, k)| format!("J = {}, K = {}", label(j), label(k)));

    let mut first = None;
    for (k, j) in pairs().filter(|&(k, j)| !l.preceq(k, j)) {
        if !alg.mul(&sys.get(k).e, &sys.get(j).p)?.is_zero() {
            first = Some((k, j));
            break;
        }
    }
    report.check_first("e_K P_J = 0 for K ⋠ J", first, |(k, j)| format!("K = {}, J = {}", label(k), label(j)));

    let mut first = None;
    for &j in &nodes {
        let d = sys.get(j);
        if alg.mul(&d.p, &d.p)? != d.p {
            first = Some((j, "P_J not idempotent"));
        } else if alg.mul(&d.a, &d.a)? != d.a {
            first = Some((j, "A_J not idempotent"));
        } else if !m.is_idempotent(d.t) || w.content(d.t) != j {
            first = Some((j, "T_J not an idempotent of content J"));
        } else if p_by_summation(&alg, &d.z, d.n_z, sys.mode)? != d.p {
            first = Some((j, "closed form of P_J differs from the truncated series"));
        }
        if first.is_some() {
            break;
        }
    }
    report.check_first("Norton data", first, |(j, what)| format!("J = {}: {what}", label(j)));

    Ok(report)
}

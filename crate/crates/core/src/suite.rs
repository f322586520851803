//! The full invariant suite run by `verify`: every structural fact the
//! construction relies on, checked directly on a concrete monoid.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use crate::algebra::Algebra;
use crate::error::Result;
use crate::lattice::{check_join_is_least_upper_bound, WeaklyOrderedMonoid};
use crate::monoid::{ElementId, Monoid};
use crate::norton::{b_element, e_system, verify_system, IdempotentSystem, Mode};
use crate::order::{check_left_absorption, is_j_trivial, OrderRelation, EXHAUSTIVE_TRIPLE_BOUND};
use crate::report::Report;

/// Runs every check on an R-trivial monoid. Returns `Err(NotRTrivial)` for
/// other monoids.
pub fn invariant_suite(m: &Monoid, mode: Mode) -> Result<(Report, IdempotentSystem)> {
    let w = WeaklyOrderedMonoid::new(m)?;
    let order = w.order();
    let mut report = Report::new("");

    let mut monoid = Report::new("monoid");
    monoid.push(
        "associativity",
        true,
        (!m.associativity_verified()).then(|| "table too large for the exhaustive check; trusted".into()),
    );
    monoid.check_first(
        "words evaluate to their elements",
        m.elements().find(|&x| m.evaluate(m.word(x)).ok() != Some(x)),
        |x| format!("x = {x}"),
    );
    report.extend(monoid);

    report.extend(order_checks(m, order));
    report.extend(omega_identities(m));

    let mut lattice = Report::new("semilattice");
    // Both descriptions of C are compared while the lattice is built.
    lattice.push("C(x) = S x^ω = {a : ax = a}", true, None);
    lattice.check_first("S(ef)^ω is the least upper bound", check_join_is_least_upper_bound(w.lattice()), |(a, b)| {
        format!("{a} v {b}")
    });
    report.extend(lattice);
    report.extend(w.verify_axioms());

    let sys = e_system(&w, mode)?;
    report.extend(norton_lemmas(&w, &sys)?);
    report.extend(verify_system(&w, &sys)?);

    if is_j_trivial(m, order) {
        let other = if sys.mode == Mode::General { Mode::JTrivial } else { Mode::General };
        let alt = e_system(&w, other)?;
        let same = alt.data.iter().zip(&sys.data).all(|(a, b)| a.e == b.e);
        report.push("general and J-trivial formulas give the same e_J", same, (!same).then(|| "systems differ".into()));
    }
    Ok((report, sys))
}

fn order_checks(m: &Monoid, order: &OrderRelation) -> Report {
    let mut r = Report::new("weak order");
    r.check_first("reflexive", m.elements().find(|&x| !order.leq(x, x)), |x| format!("x = {x}"));
    let intransitive = m.elements().find_map(|x| {
        order
            .up_set(x)
            .ones()
            .map(ElementId::new)
            .find(|&y| !order.up_set(y).is_subset(order.up_set(x)))
            .map(|y| (x, y))
    });
    r.check_first("transitive", intransitive, |(x, y)| format!("x = {x}, y = {y}"));

    // Brute-force R-triviality: all right ideals xS distinct.
    let mut seen = HashSet::new();
    let distinct = m.elements().all(|x| {
        let mut ideal = FixedBitSet::with_capacity(m.size());
        m.elements().for_each(|s| ideal.insert(m.mul(x, s).index()));
        seen.insert(ideal)
    });
    r.push("right ideals xS are distinct", distinct, (!distinct).then(|| "two elements share xS".into()));

    let absorption = check_left_absorption(m);
    let detail = if m.size() > EXHAUSTIVE_TRIPLE_BOUND { " (sampled)" } else { "" };
    r.check_first(&format!("xyz = x implies xy = x{detail}"), absorption, |(x, y, z)| {
        format!("x = {x}, y = {y}, z = {z}")
    });
    r
}

/// `x^ω` facts and the seven `(xy)^ω` identities, on all pairs.
pub fn omega_identities(m: &Monoid) -> Report {
    let mut r = Report::new("idempotent powers");
    let w = |x| m.idempotent_power(x);
    r.check_first(
        "x^ω idempotent and x^ω x = x^ω",
        m.elements().find(|&x| !m.is_idempotent(w(x)) || m.mul(w(x), x) != w(x)),
        |x| format!("x = {}", m.render_element(x)),
    );

    type Identity = fn(&Monoid, ElementId, ElementId) -> bool;
    let identities: [(&str, Identity); 7] = [
        ("(xy)^ω x = (xy)^ω", |m, x, y| {
            let p = m.idempotent_power(m.mul(x, y));
            m.mul(p, x) == p
        }),
        ("(xy)^ω y = (xy)^ω", |m, x, y| {
            let p = m.idempotent_power(m.mul(x, y));
            m.mul(p, y) == p
        }),
        ("(xy)^ω x^ω = (xy)^ω", |m, x, y| {
            let p = m.idempotent_power(m.mul(x, y));
            m.mul(p, m.idempotent_power(x)) == p
        }),
        ("(xy)^ω y^ω = (xy)^ω", |m, x, y| {
            let p = m.idempotent_power(m.mul(x, y));
            m.mul(p, m.idempotent_power(y)) == p
        }),
        ("(x^ω y^ω)^ω x^ω = (x^ω y^ω)^ω", |m, x, y| {
            let xw = m.idempotent_power(x);
            let q = m.idempotent_power(m.mul(xw, m.idempotent_power(y)));
            m.mul(q, xw) == q
        }),
        ("(x^ω y^ω)^ω = (x^ω y^ω)^ω xy", |m, x, y| {
            let q = m.idempotent_power(m.mul(m.idempotent_power(x), m.idempotent_power(y)));
            m.mul(q, m.mul(x, y)) == q
        }),
        ("(x^ω y^ω)^ω = (x^ω y^ω)^ω (xy)^ω", |m, x, y| {
            let q = m.idempotent_power(m.mul(m.idempotent_power(x), m.idempotent_power(y)));
            m.mul(q, m.idempotent_power(m.mul(x, y))) == q
        }),
    ];
    for (name, holds) in identities {
        let failure = m.elements().flat_map(|x| m.elements().map(move |y| (x, y))).find(|&(x, y)| !holds(m, x, y));
        r.check_first(name, failure, |(x, y)| format!("x = {}, y = {}", m.render_element(x), m.render_element(y)));
    }
    r
}

/// The lemmas behind the construction of `T_J`, `A_J`, `z_J` and `P_J`.
pub fn norton_lemmas(w: &WeaklyOrderedMonoid, sys: &IdempotentSystem) -> Result<Report> {
    let m = w.monoid();
    let l = w.lattice();
    let alg = Algebra::new(m);
    let mut r = Report::new("Norton lemmas");
    let label = |j| l.label(m, j);

    let failure = l.node_ids().find_map(|j| {
        let t = sys.get(j).t;
        m.elements().find(|&x| l.preceq(l.content(x), j) && m.mul(t, x) != t).map(|x| (j, x))
    });
    r.check_first("T_J x = T_J when C(x) ⪯ J", failure, |(j, x)| {
        format!("J = {}, x = {}", label(j), m.render_element(x))
    });

    let mut failure = None;
    'outer: for j in l.node_ids() {
        let d = sys.get(j);
        let bn = alg.pow(&d.b, d.n_b)?;
        for &g in m.generators() {
            if l.preceq(l.content(g), j) {
                continue;
            }
            let gw = alg.basis(m.idempotent_power(g));
            if !alg.mul(&gw, &d.a)?.is_zero() || !alg.mul(&gw, &bn)?.is_zero() {
                failure = Some((j, g));
                break 'outer;
            }
        }
    }
    r.check_first("y^ω A_J = y^ω B_J^N = 0 when C(y) ⋠ J", failure, |(j, g)| {
        format!("J = {}, y = {}", label(j), m.render_element(g))
    });

    if m.size() <= EXHAUSTIVE_TRIPLE_BOUND {
        let order = w.order();
        let mut failure = None;
        'lemma: for j in l.node_ids() {
            let b_j = b_element(w, j)?;
            let outside: Vec<ElementId> = m
                .generators()
                .iter()
                .filter(|&&g| !l.preceq(l.content(g), j))
                .map(|&g| m.idempotent_power(g))
                .collect();
            for b in m.elements() {
                if !outside.iter().any(|&xw| m.mul(b, xw) == b) {
                    continue;
                }
                let product = alg.mul(&alg.basis(b), &b_j)?;
                let bad = product.terms().map(|(c, _)| c).find(|&c| !order.lt(b, c));
                if let Some(c) = bad {
                    failure = Some((j, b, c));
                    break 'lemma;
                }
            }
        }
        r.check_first("terms c of b B_J satisfy c > b when b x^ω = b", failure, |(j, b, c)| {
            format!("J = {}, b = {}, c = {}", label(j), m.render_element(b), m.render_element(c))
        });
    }

    let bound = w.chain_length() + 1;
    let failure = l.node_ids().find(|&j| sys.get(j).n_z > bound);
    r.check_first(&format!("N_z <= chain length + 1 = {bound}"), failure, |j| {
        format!("J = {}, N_z = {}", label(j), sys.get(j).n_z)
    });

    // z Σ_{n<=N} (1 - z)^n = 1 - (1 - z)^(N+1) evaluated at each z_J.
    let mut failure = None;
    for j in l.node_ids() {
        let d = sys.get(j);
        let one_minus_z = alg.sub(&alg.one(), &d.z)?;
        let mut series = alg.zero();
        let mut power = alg.one();
        for _ in 0..=d.n_z {
            series = alg.add(&series, &power)?;
            power = alg.mul(&power, &one_minus_z)?;
        }
        if alg.mul(&d.z, &series)? != alg.sub(&alg.one(), &power)? {
            failure = Some(j);
            break;
        }
    }
    r.check_first("z Σ (1 - z)^n = 1 - (1 - z)^(N+1)", failure, |j| format!("J = {}", label(j)));
    Ok(r)
}

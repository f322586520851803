//! JSON monoid specs, serialized outputs, and DOT export.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{free_lrb, hecke_a};
use crate::lattice::build_semilattice;
use crate::lattice::{Semilattice, WeaklyOrderedMonoid};
use crate::monoid::{Monoid, Transformation, DEFAULT_CAP};
use crate::norton::IdempotentSystem;
use crate::order::{is_j_trivial, is_r_trivial, weak_preorder, RTriviality};
use crate::report::Report;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonoidKind {
    Transformations {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
    Table {
        table: Vec<Vec<usize>>,
        #[serde(default)]
        identity: usize,
        generators: Vec<usize>,
    },
    FreeLrb {
        k: usize,
    },
    HeckeA {
        n: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidSpec {
    #[serde(flatten)]
    pub kind: MonoidKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
}

fn spec_error(field: &str, reason: impl Into<String>) -> Error {
    Error::Spec { field: field.into(), reason: reason.into() }
}

impl MonoidSpec {
    fn generator_count(&self) -> usize {
        match &self.kind {
            MonoidKind::Transformations { generators, .. } => generators.len(),
            MonoidKind::Table { generators, .. } => generators.len(),
            MonoidKind::FreeLrb { k } => *k,
            MonoidKind::HeckeA { n } => n.saturating_sub(1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            MonoidKind::Transformations { degree, generators } => {
                if generators.is_empty() {
                    return Err(spec_error("generators", "at least one generator is required"));
                }
                for (i, g) in generators.iter().enumerate() {
                    if g.len() != *degree {
                        return Err(spec_error(
                            "generators",
                            format!("generator {i} has {} images, expected degree {degree}", g.len()),
                        ));
                    }
                    if let Some(p) = g.iter().position(|&v| v >= *degree) {
                        return Err(spec_error(
                            "generators",
                            format!("generator {i} maps point {p} to {}, outside 0..{degree}", g[p]),
                        ));
                    }
                }
            }
            MonoidKind::Table { table, identity, generators } => {
                if table.is_empty() {
                    return Err(spec_error("table", "table is empty"));
                }
                if *identity >= table.len() {
                    return Err(spec_error("identity", "out of range"));
                }
                if generators.iter().any(|&g| g >= table.len()) {
                    return Err(spec_error("generators", "generator index out of range"));
                }
            }
            MonoidKind::FreeLrb { k } if *k < 1 => return Err(spec_error("k", "must be at least 1")),
            MonoidKind::HeckeA { n } if *n < 2 => return Err(spec_error("n", "must be at least 2")),
            _ => {}
        }
        if let Some(names) = &self.names {
            if names.len() != self.generator_count() {
                return Err(spec_error(
                    "names",
                    format!("expected {} names, got {}", self.generator_count(), names.len()),
                ));
            }
        }
        if self.cap == Some(0) {
            return Err(spec_error("cap", "must be positive"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("specs always serialize")
    }
}

impl FromStr for MonoidSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        parse_spec(text)
    }
}

pub fn parse_spec(text: &str) -> Result<MonoidSpec> {
    let spec: MonoidSpec = serde_json::from_str(text).map_err(|e| spec_error("<json>", e.to_string()))?;
    spec.validate()?;
    Ok(spec)
}

pub fn load(spec: &MonoidSpec) -> Result<Monoid> {
    spec.validate()?;
    let cap = spec.cap.unwrap_or(DEFAULT_CAP);
    let m = match &spec.kind {
        MonoidKind::Transformations { generators, .. } => {
            let gens = generators.iter().map(|g| Transformation::new(g.clone())).collect::<Result<Vec<_>>>()?;
            Monoid::close(&gens, cap)?
        }
        MonoidKind::Table { table, identity, generators } => {
            if table.len() > cap {
                return Err(Error::CapExceeded { cap, partial: table.len() });
            }
            Monoid::from_table(table, *identity, generators)?
        }
        MonoidKind::FreeLrb { k } => free_lrb(*k, cap)?,
        MonoidKind::HeckeA { n } => hecke_a(*n, cap)?,
    };
    match &spec.names {
        Some(names) => m.with_generator_names(names.clone()),
        None => Ok(m),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MonoidSummary {
    pub size: usize,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NodeSummary {
    pub node_id: usize,
    pub label: String,
    pub ideal_size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TermOutput {
    pub word: String,
    pub coeff: serde_json::Number,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdempotentOutput {
    pub node_id: usize,
    pub label: String,
    #[serde(rename = "T_word")]
    pub t_word: String,
    #[serde(rename = "N_B")]
    pub n_b: usize,
    #[serde(rename = "N_z")]
    pub n_z: usize,
    pub terms: Vec<TermOutput>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemOutput {
    pub monoid: MonoidSummary,
    pub mode: String,
    pub lattice: Vec<NodeSummary>,
    pub idempotents: Vec<IdempotentOutput>,
    pub verification: Report,
}

pub fn monoid_summary(m: &Monoid) -> MonoidSummary {
    MonoidSummary { size: m.size(), generators: m.generator_names().to_vec() }
}

pub fn lattice_summary(m: &Monoid, l: &Semilattice) -> Vec<NodeSummary> {
    l.nodes()
        .iter()
        .map(|n| NodeSummary { node_id: n.id.0, label: l.label(m, n.id), ideal_size: n.ideal.len() })
        .collect()
}

pub fn system_output(w: &WeaklyOrderedMonoid, sys: &IdempotentSystem, verification: Report) -> SystemOutput {
    let m = w.monoid();
    let l = w.lattice();
    let idempotents = sys
        .data
        .iter()
        .map(|d| IdempotentOutput {
            node_id: d.node.0,
            label: l.label(m, d.node),
            t_word: m.render_element(d.t),
            n_b: d.n_b,
            n_z: d.n_z,
            terms: d
                .e
                .word_terms(m)
                .into_iter()
                .map(|(word, c)| TermOutput {
                    word: m.render(&word),
                    coeff: serde_json::Number::from_str(&c.to_string()).expect("integers are valid JSON numbers"),
                })
                .collect(),
        })
        .collect();
    SystemOutput {
        monoid: monoid_summary(m),
        mode: sys.mode.to_string(),
        lattice: lattice_summary(m, l),
        idempotents,
        verification,
    }
}

pub fn system_text(w: &WeaklyOrderedMonoid, sys: &IdempotentSystem, verification: &Report) -> String {
    let m = w.monoid();
    let l = w.lattice();
    let mut out = String::new();
    let _ = writeln!(out, "monoid: {} elements, generators {}", m.size(), m.generator_names().join(", "));
    let _ = writeln!(out, "mode: {}", sys.mode);
    for d in &sys.data {
        let _ = writeln!(
            out,
            "{} {}: T_J = {}, N_B = {}, N_z = {}",
            d.node,
            l.label(m, d.node),
            m.render_element(d.t),
            d.n_b,
            d.n_z
        );
        let _ = writeln!(out, "  e_J = {}", d.e.display(m));
    }
    let _ = write!(out, "{verification}");
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub size: usize,
    pub generators: Vec<String>,
    pub r_trivial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(String, String)>,
    pub j_trivial: bool,
    pub associativity_verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axioms: Option<Report>,
}

/// Size, triviality verdicts, chain length, and (for R-trivial input) the
/// semilattice size and weak-order axiom report.
pub fn analyze(m: &Monoid) -> Result<Analysis> {
    let order = weak_preorder(m);
    let verdict = is_r_trivial(&order);
    let witness = match verdict {
        RTriviality::NotRTrivial { x, y } => Some((m.render_element(x), m.render_element(y))),
        RTriviality::RTrivial => None,
    };
    let (lattice_size, axioms) = if verdict.holds() {
        let l = build_semilattice(m, &order)?;
        (Some(l.len()), Some(crate::lattice::verify_weak_order_axioms(m, &order, &l)))
    } else {
        (None, None)
    };
    Ok(Analysis {
        size: m.size(),
        generators: m.generator_names().to_vec(),
        r_trivial: verdict.holds(),
        witness,
        j_trivial: is_j_trivial(m, &order),
        associativity_verified: m.associativity_verified(),
        chain_length: order.chain_length(),
        lattice_size,
        axioms,
    })
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Hasse diagram of the semilattice, bottom to top.
pub fn hasse_dot(m: &Monoid, l: &Semilattice) -> String {
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n");
    for n in l.nodes() {
        let _ =
            writeln!(out, "  n{} [label=\"{}\\n|Se| = {}\"];", n.id.0, dot_escape(&l.label(m, n.id)), n.ideal.len());
    }
    for (a, b) in l.hasse_edges() {
        let _ = writeln!(out, "  n{} -> n{};", a.0, b.0);
    }
    out.push_str("}\n");
    out
}

/// Right Cayley graph: an edge `x -> xg` labelled `g` for every generator.
pub fn cayley_dot(m: &Monoid) -> String {
    let mut out = String::from("digraph cayley {\n");
    for x in m.elements() {
        let _ = writeln!(out, "  e{} [label=\"{}\"];", x.index(), dot_escape(&m.render_element(x)));
    }
    for x in m.elements() {
        for (g, &gen) in m.generators().iter().enumerate() {
            let y = m.mul(x, gen);
            let _ = writeln!(
                out,
                "  e{} -> e{} [label=\"{}\"];",
                x.index(),
                y.index(),
                dot_escape(&m.generator_names()[g])
            );
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        let m = load(&parse_spec(r#"{"kind":"hecke_a","n":4}"#).unwrap()).unwrap();
        assert_eq!(m.size(), 24);
        let m = load(
            &parse_spec(r#"{"kind":"transformations","degree":3,"generators":[[0,2,2],[1,1,2]],"names":["g1","g2"]}"#)
                .unwrap(),
        )
        .unwrap();
        assert_eq!(m.size(), 5);
        assert_eq!(m.generator_names(), ["g1", "g2"]);
        let m = load(&parse_spec(r#"{"kind":"free_lrb","k":1}"#).unwrap()).unwrap();
        assert_eq!(m.size(), 2);
        let m = load(&parse_spec(r#"{"kind":"table","table":[[0,1],[1,0]],"generators":[1]}"#).unwrap()).unwrap();
        assert_eq!(m.size(), 2);
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in [
            r#"{"kind":"hecke_a","n":1}"#,
            r#"{"kind":"free_lrb","k":0}"#,
            r#"{"kind":"transformations","degree":2,"generators":[[0,2]]}"#,
            r#"{"kind":"transformations","degree":2,"generators":[[0]]}"#,
            r#"{"kind":"free_lrb","k":2,"names":["a"]}"#,
            r#"{"kind":"mystery"}"#,
            r#"not json"#,
        ] {
            assert!(matches!(parse_spec(bad), Err(Error::Spec { .. })), "{bad}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let spec = parse_spec(r#"{"kind":"hecke_a","n":5,"cap":100}"#).unwrap();
        assert!(matches!(load(&spec), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn spec_serialization_is_stable() {
        let text = r#"{"kind":"transformations","degree":3,"generators":[[0,2,2],[1,1,2]],"names":["g1","g2"]}"#;
        let once = parse_spec(text).unwrap().to_json();
        let twice = parse_spec(&once).unwrap().to_json();
        assert_eq!(once, twice);
        assert_eq!(once, text);
    }

    #[test]
    fn dot_output() {
        let m = free_lrb(2, DEFAULT_CAP).unwrap();
        let order = weak_preorder(&m);
        let l = build_semilattice(&m, &order).unwrap();
        let dot = hasse_dot(&m, &l);
        assert_eq!(dot.matches("->").count(), 4);
        assert!(cayley_dot(&m).matches("->").count() == 10);
    }
}

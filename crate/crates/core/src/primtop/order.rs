use std::fmt::Write;

use serde::Serialize;

use super::{closure_membership, ClosureQuery, PrimSpace};
use crate::perdual::CharacterSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EdgeLabel {
    /// Every point of the source stratum has every point of the target in its closure.
    #[serde(rename = "always")]
    Always,
    /// Within one tau stratum: `(T, f0)` is in the closure of `(T, f)` iff `f0 = f`.
    #[serde(rename = "iff f0=f")]
    IffSameCharacter,
    /// A gamma stratum is a single point.
    #[serde(rename = "reflexive")]
    Reflexive,
}

impl EdgeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeLabel::Always => "always",
            EdgeLabel::IffSameCharacter => "iff f0=f",
            EdgeLabel::Reflexive => "reflexive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreorderNode {
    pub index: usize,
    pub tail: Vec<String>,
    pub class: &'static str,
    pub dual_rank: usize,
}

/// `from -> to` means points of `to` lie in the closure of points of `from`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreorderEdge {
    pub from: usize,
    pub to: usize,
    pub label: EdgeLabel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecializationPreorder {
    pub nodes: Vec<PreorderNode>,
    pub edges: Vec<PreorderEdge>,
    pub caveats: Vec<String>,
}

impl PrimSpace {
    /// Specialization between strata, read off singleton closure queries.
    pub fn specialization_preorder(&self) -> SpecializationPreorder {
        let n = self.strata().len();
        let nodes = (0..n)
            .map(|i| {
                let s = &self.strata()[i];
                PreorderNode {
                    index: i,
                    tail: s.tail_names(self.graph()),
                    class: s.class.label(),
                    dual_rank: s.per.rank(),
                }
            })
            .collect();
        let mut edges = Vec::new();
        for from in 0..n {
            for to in 0..n {
                if from == to {
                    let label = if self.strata()[to].class.is_tau() {
                        EdgeLabel::IffSameCharacter
                    } else {
                        EdgeLabel::Reflexive
                    };
                    edges.push(PreorderEdge { from, to, label });
                    continue;
                }
                let src = self.spec(from);
                let single = self.strata()[from].per.trivial_character();
                let (gamma, tau) = if src.kind == super::TailKind::Tau {
                    (vec![], vec![(src, CharacterSet::Finite(vec![single]))])
                } else {
                    (vec![src], vec![])
                };
                let q = ClosureQuery {
                    tail: self.spec(to),
                    character: self.strata()[to].per.trivial_character(),
                    lattice: self.strata()[to].per.clone(),
                    gamma,
                    tau,
                };
                if closure_membership(&q).expect("strata form valid queries").verdict {
                    edges.push(PreorderEdge { from, to, label: EdgeLabel::Always });
                }
            }
        }
        SpecializationPreorder { nodes, edges, caveats: self.caveats() }
    }
}

impl SpecializationPreorder {
    pub fn inter_stratum_edges(&self) -> impl Iterator<Item = &PreorderEdge> {
        self.edges.iter().filter(|e| e.from != e.to)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph specialization {\n");
        for n in &self.nodes {
            let _ = writeln!(
                out,
                "  s{} [label=\"{{{}}} {} rank {}\"];",
                n.index,
                n.tail.join(","),
                n.class,
                n.dual_rank
            );
        }
        for e in &self.edges {
            let _ = writeln!(out, "  s{} -> s{} [label=\"{}\"];", e.from, e.to, e.label.as_str());
        }
        out.push_str("}\n");
        out
    }
}

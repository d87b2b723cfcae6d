//! The line-oriented graph document format.
//!
//! ```text
//! # comment
//! k 1
//! vertices v w
//! edge f 1 v w          # name colour range source, colours 1..=k
//! square e f = f2 e2    # e f = f2 e2 with colour(e) < colour(f)
//! group 1 g             # first element is the identity
//! mul g g = 1           # products with the identity are implied
//! act g a = b g         # g . a = b and g|_a = g; identity rows are implied
//! query point {u} @ 1/3
//! query gamma {u,w}
//! query tau {u,w} @ finite 0 1/2
//! ```

mod parse;

use std::fmt::Write;

use thiserror::Error;

use crate::kgraph::{validate_kgraph, KGraphError, Skeleton, SkeletonEdge, Square};
use crate::perdual::Angle;
use crate::primtop::{PrimQuery, SetSpec};
use crate::selfsim::{validate_action, ActionError, FiniteGroup, GroupError, SelfSimilarGraph};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: duplicate id {id:?}")]
    DuplicateId { line: usize, column: usize, id: String },
    #[error("{line}:{column}: unknown id {id:?}")]
    DanglingReference { line: usize, column: usize, id: String },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error(transparent)]
    Graph(#[from] KGraphError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("multiplication table has no entry for {0} {1}")]
    MissingProduct(String, String),
    #[error("action table has no row for {0} {1}")]
    MissingAction(String, String),
    #[error("{0} is given twice")]
    DuplicateRow(String),
}

/// Angles of a character, on the Smith basis of the relevant lattice.
pub type Character = Vec<Angle>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeDecl {
    pub name: String,
    /// One-based colour.
    pub color: usize,
    pub range: String,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareDecl {
    pub first: String,
    pub second: String,
    pub first_out: String,
    pub second_out: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActRow {
    pub element: String,
    pub edge: String,
    pub edge_out: String,
    pub element_out: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetDecl {
    Full,
    Finite(Vec<Character>),
    Subgroup(Vec<Character>),
}

/// A query point followed by the gamma and tau tails of the set it is tested against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryBlock {
    pub tail: Vec<String>,
    pub character: Option<Character>,
    pub gamma: Vec<Vec<String>>,
    pub tau: Vec<(Vec<String>, SetDecl)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphDocument {
    pub k: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDecl>,
    pub squares: Vec<SquareDecl>,
    pub group: Option<Vec<String>>,
    pub mul: Vec<[String; 3]>,
    pub act: Vec<ActRow>,
    pub queries: Vec<QueryBlock>,
}

pub fn parse(text: &str) -> Result<GraphDocument, ParseError> {
    parse::parse(text)
}

fn write_character(out: &mut String, c: &Character) {
    if c.len() == 1 {
        let _ = write!(out, "{}", c[0]);
    } else {
        let parts: Vec<String> = c.iter().map(Angle::to_string).collect();
        let _ = write!(out, "({})", parts.join(","));
    }
}

fn write_set(out: &mut String, set: &[String]) {
    let _ = write!(out, "{{{}}}", set.join(","));
}

impl GraphDocument {
    /// Canonical text; `parse(doc.serialize()) == doc`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "k {}", self.k);
        if !self.vertices.is_empty() {
            let _ = writeln!(out, "vertices {}", self.vertices.join(" "));
        }
        for e in &self.edges {
            let _ = writeln!(out, "edge {} {} {} {}", e.name, e.color, e.range, e.source);
        }
        for s in &self.squares {
            let _ = writeln!(out, "square {} {} = {} {}", s.first, s.second, s.first_out, s.second_out);
        }
        if let Some(g) = &self.group {
            let _ = writeln!(out, "group {}", g.join(" "));
        }
        for [g, h, gh] in &self.mul {
            let _ = writeln!(out, "mul {g} {h} = {gh}");
        }
        for a in &self.act {
            let _ = writeln!(out, "act {} {} = {} {}", a.element, a.edge, a.edge_out, a.element_out);
        }
        for q in &self.queries {
            out.push_str("query point ");
            write_set(&mut out, &q.tail);
            if let Some(c) = &q.character {
                out.push_str(" @ ");
                write_character(&mut out, c);
            }
            out.push('\n');
            for g in &q.gamma {
                out.push_str("query gamma ");
                write_set(&mut out, g);
                out.push('\n');
            }
            for (t, d) in &q.tau {
                out.push_str("query tau ");
                write_set(&mut out, t);
                let (word, chars) = match d {
                    SetDecl::Full => ("full", &[][..]),
                    SetDecl::Finite(c) => ("finite", &c[..]),
                    SetDecl::Subgroup(c) => ("subgroup", &c[..]),
                };
                let _ = write!(out, " @ {word}");
                for c in chars {
                    out.push(' ');
                    write_character(&mut out, c);
                }
                out.push('\n');
            }
        }
        out
    }

    fn vertex(&self, name: &str) -> usize {
        self.vertices.iter().position(|v| v == name).expect("parser checked references")
    }

    fn edge(&self, name: &str) -> usize {
        self.edges.iter().position(|e| e.name == name).expect("parser checked references")
    }

    pub fn build_group(&self) -> Result<FiniteGroup, BuildError> {
        let Some(names) = &self.group else {
            return Ok(FiniteGroup::trivial());
        };
        let n = names.len();
        let id = |s: &str| names.iter().position(|x| x == s).expect("parser checked references");
        let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
        for g in 0..n {
            table[0][g] = Some(g);
            table[g][0] = Some(g);
        }
        let mut given = vec![vec![false; n]; n];
        for [g, h, gh] in &self.mul {
            let (a, b) = (id(g), id(h));
            if given[a][b] {
                return Err(BuildError::DuplicateRow(format!("mul {g} {h}")));
            }
            given[a][b] = true;
            if table[a][b].is_some_and(|x| x != id(gh)) {
                return Err(GroupError::NotIdentity(names[0].clone()).into());
            }
            table[a][b] = Some(id(gh));
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(a, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(b, x)| x.ok_or_else(|| BuildError::MissingProduct(names[a].clone(), names[b].clone())))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteGroup::new(names.clone(), table, 0)?)
    }

    pub fn build(&self) -> Result<SelfSimilarGraph, BuildError> {
        let skeleton = Skeleton {
            k: self.k,
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| SkeletonEdge {
                    name: e.name.clone(),
                    color: e.color - 1,
                    range: self.vertex(&e.range),
                    source: self.vertex(&e.source),
                })
                .collect(),
        };
        let squares = self
            .squares
            .iter()
            .map(|s| Square {
                first: self.edge(&s.first),
                second: self.edge(&s.second),
                first_out: self.edge(&s.first_out),
                second_out: self.edge(&s.second_out),
            })
            .collect();
        let graph = validate_kgraph(skeleton, squares)?;
        let group = self.build_group()?;
        let n = group.order();
        let m = graph.edge_count();
        let mut act: Vec<Vec<Option<usize>>> = vec![vec![None; m]; n];
        let mut restrict: Vec<Vec<Option<usize>>> = vec![vec![None; m]; n];
        for e in 0..m {
            act[0][e] = Some(e);
            restrict[0][e] = Some(0);
        }
        let mut given = vec![vec![false; m]; n];
        for row in &self.act {
            let g = group.by_name(&row.element).expect("parser checked references");
            let e = self.edge(&row.edge);
            if given[g][e] {
                return Err(BuildError::DuplicateRow(format!("act {} {}", row.element, row.edge)));
            }
            given[g][e] = true;
            act[g][e] = Some(self.edge(&row.edge_out));
            restrict[g][e] = Some(group.by_name(&row.element_out).expect("parser checked references"));
        }
        let complete = |t: Vec<Vec<Option<usize>>>| -> Result<Vec<Vec<usize>>, BuildError> {
            t.into_iter()
                .enumerate()
                .map(|(g, row)| {
                    row.into_iter()
                        .enumerate()
                        .map(|(e, x)| {
                            x.ok_or_else(|| {
                                BuildError::MissingAction(group.name(g).to_string(), graph.edge(e).name.clone())
                            })
                        })
                        .collect()
                })
                .collect()
        };
        let act = complete(act)?;
        let restrict = complete(restrict)?;
        Ok(validate_action(graph, group, act, restrict)?)
    }

    /// The queries with vertex names resolved.
    pub fn prim_queries(&self) -> Vec<PrimQuery> {
        let ids = |set: &[String]| -> Vec<usize> { set.iter().map(|v| self.vertex(v)).collect() };
        self.queries
            .iter()
            .map(|q| PrimQuery {
                tail: ids(&q.tail),
                character: q.character.clone(),
                gamma: q.gamma.iter().map(|g| ids(g)).collect(),
                tau: q
                    .tau
                    .iter()
                    .map(|(t, d)| {
                        let spec = match d {
                            SetDecl::Full => SetSpec::Full,
                            SetDecl::Finite(c) => SetSpec::Finite(c.clone()),
                            SetDecl::Subgroup(c) => SetSpec::Subgroup(c.clone()),
                        };
                        (ids(t), spec)
                    })
                    .collect(),
            })
            .collect()
    }
}

//! Finite k-graphs presented as a coloured skeleton plus factorisation squares.
//!
//! A [`KGraph`] is only ever built through [`validate_kgraph`], so every
//! instance is row-finite, source-free, has a bijective square table and (for
//! `k >= 3`) satisfies the cube condition. Paths are stored in colour-block
//! normal form, which makes path equality a syntactic comparison.

mod infinite;
mod path;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use infinite::{CofinalError, InfinitePath};
pub use path::{Path, PathError};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Multidegree in `N^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Degree(Vec<u32>);

impl Degree {
    pub fn zero(k: usize) -> Self {
        Degree(vec![0; k])
    }

    pub fn unit(k: usize, color: usize) -> Self {
        let mut d = vec![0; k];
        d[color] = 1;
        Degree(d)
    }

    /// The all-ones degree `(1, .., 1)`.
    pub fn ones(k: usize) -> Self {
        Degree(vec![1; k])
    }

    pub fn uniform(k: usize, n: u32) -> Self {
        Degree(vec![n; k])
    }

    pub fn from_vec(v: Vec<u32>) -> Self {
        Degree(v)
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn has_full_support(&self) -> bool {
        self.0.iter().all(|&c| c > 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Degree) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn join(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn meet(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn add(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &Degree) -> Option<Degree> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Degree)
    }

    pub fn scale(&self, m: u32) -> Degree {
        Degree(self.0.iter().map(|c| c * m).collect())
    }

    /// Signed difference `self - other` in `Z^k`.
    pub fn difference(&self, other: &Degree) -> Vec<i64> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| i64::from(*a) - i64::from(*b))
            .collect()
    }

    /// Colour pattern of the normal form: `d_0` copies of colour 0, then colour 1, ...
    pub fn colors(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(c, &n)| std::iter::repeat_n(c, n as usize))
            .collect()
    }

    /// Every degree `n` with `0 <= n <= self`, in lexicographic order.
    pub fn box_below(&self) -> Vec<Degree> {
        let mut out = vec![Vec::with_capacity(self.k())];
        for &c in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=c).map(move |i| {
                        let mut p = prefix.clone();
                        p.push(i);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(Degree).collect()
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonEdge {
    pub name: String,
    /// Zero-based colour.
    pub color: usize,
    pub range: VertexId,
    pub source: VertexId,
}

/// The coloured 1-skeleton of a k-graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub k: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<SkeletonEdge>,
}

/// One factorisation square `first * second = first_out * second_out`, where
/// `first` has a smaller colour than `second` and the outputs swap colours.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Square {
    pub first: EdgeId,
    pub second: EdgeId,
    pub first_out: EdgeId,
    pub second_out: EdgeId,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum KGraphError {
    #[error("malformed skeleton: {0}")]
    InvalidSkeleton(String),
    #[error("vertex {vertex} receives no edge of colour {color}")]
    NotSourceFree { vertex: String, color: usize },
    #[error("no factorisation square for composable pair {0} {1}")]
    MissingSquare(String, String),
    #[error("square for {0} {1} is not bijective: {2}")]
    SquareNotBijective(String, String, String),
    #[error("cube condition fails on {0} {1} {2}")]
    CubeConditionFailed(String, String, String),
}

/// A validated finite k-graph.
#[derive(Clone, Debug)]
pub struct KGraph {
    k: usize,
    vertices: Vec<String>,
    edges: Vec<SkeletonEdge>,
    squares: Vec<Square>,
    /// `by_range[v][c]`: edges of colour `c` with range `v`, ascending id.
    by_range: Vec<Vec<Vec<EdgeId>>>,
    /// Both directions of every square: `(a, b) -> (b', a')` with `ab = b'a'`.
    swaps: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
}

/// Checks the skeleton and square table and builds a [`KGraph`].
pub fn validate_kgraph(skeleton: Skeleton, squares: Vec<Square>) -> Result<KGraph, KGraphError> {
    let Skeleton { k, vertices, edges } = skeleton;
    if k == 0 {
        return Err(KGraphError::InvalidSkeleton("k must be positive".into()));
    }
    for e in &edges {
        if e.color >= k {
            return Err(KGraphError::InvalidSkeleton(format!(
                "edge {} has colour {} outside 1..={k}",
                e.name,
                e.color + 1
            )));
        }
        if e.range >= vertices.len() || e.source >= vertices.len() {
            return Err(KGraphError::InvalidSkeleton(format!(
                "edge {} has an unknown endpoint",
                e.name
            )));
        }
    }

    let mut by_range = vec![vec![Vec::new(); k]; vertices.len()];
    for (id, e) in edges.iter().enumerate() {
        by_range[e.range][e.color].push(id);
    }
    for (v, per_color) in by_range.iter().enumerate() {
        for (c, list) in per_color.iter().enumerate() {
            if list.is_empty() {
                return Err(KGraphError::NotSourceFree {
                    vertex: vertices[v].clone(),
                    color: c + 1,
                });
            }
        }
    }

    let name = |e: EdgeId| edges[e].name.clone();
    let not_bijective =
        |a: EdgeId, b: EdgeId, why: &str| KGraphError::SquareNotBijective(name(a), name(b), why.into());

    let mut swaps = HashMap::new();
    for sq in &squares {
        let Square { first, second, first_out, second_out } = *sq;
        if [first, second, first_out, second_out].iter().any(|&e| e >= edges.len()) {
            return Err(KGraphError::InvalidSkeleton("square refers to an unknown edge".into()));
        }
        let (e, f, f2, e2) = (&edges[first], &edges[second], &edges[first_out], &edges[second_out]);
        if e.color >= f.color {
            return Err(not_bijective(first, second, "left side must have increasing colours"));
        }
        if e.source != f.range {
            return Err(not_bijective(first, second, "left side is not composable"));
        }
        if f2.color != f.color || e2.color != e.color {
            return Err(not_bijective(first, second, "right side has the wrong colours"));
        }
        if f2.source != e2.range || f2.range != e.range || e2.source != f.source {
            return Err(not_bijective(first, second, "right side is not a composable path with the same ends"));
        }
        if swaps.insert((first, second), (first_out, second_out)).is_some() {
            return Err(not_bijective(first, second, "square defined twice"));
        }
        if let Some(&(p, q)) = swaps.get(&(first_out, second_out)) {
            return Err(not_bijective(first, second, &format!("image shared with {} {}", name(p), name(q))));
        }
        swaps.insert((first_out, second_out), (first, second));
    }

    // Every composable mixed pair, in either colour order, must be covered.
    for (a, ea) in edges.iter().enumerate() {
        for c in 0..k {
            if c == ea.color {
                continue;
            }
            for &b in &by_range[ea.source][c] {
                if !swaps.contains_key(&(a, b)) {
                    return Err(if ea.color < c {
                        KGraphError::MissingSquare(name(a), name(b))
                    } else {
                        not_bijective(a, b, "pair is not the image of any square")
                    });
                }
            }
        }
    }

    let graph = KGraph { k, vertices, edges, squares, by_range, swaps };
    if k >= 3 {
        graph.check_cubes()?;
    }
    Ok(graph)
}

impl KGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge(&self, e: EdgeId) -> &SkeletonEdge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[SkeletonEdge] {
        &self.edges
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    pub fn color(&self, e: EdgeId) -> usize {
        self.edges[e].color
    }

    /// Edges of colour `color` whose range is `v` (the set `v Λ^{e_color}`).
    pub fn edges_into(&self, v: VertexId, color: usize) -> &[EdgeId] {
        &self.by_range[v][color]
    }

    /// Exchanges a composable pair of distinct colours via its square.
    pub(crate) fn swap_pair(&self, a: EdgeId, b: EdgeId) -> (EdgeId, EdgeId) {
        self.swaps[&(a, b)]
    }

    /// `reach[w]` holds every `v` with `w Λ v` nonempty (including `w`).
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        (0..self.vertex_count()).map(|v| self.reachable_from(v)).collect()
    }

    pub fn reachable_from(&self, start: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            for list in &self.by_range[v] {
                for &e in list {
                    let s = self.edges[e].source;
                    if !seen[s] {
                        seen[s] = true;
                        queue.push_back(s);
                    }
                }
            }
        }
        seen
    }

    fn check_cubes(&self) -> Result<(), KGraphError> {
        for e in 0..self.edges.len() {
            let ce = self.color(e);
            for cf in ce + 1..self.k {
                for &f in self.edges_into(self.edges[e].source, cf) {
                    for cg in cf + 1..self.k {
                        for &g in self.edges_into(self.edges[f].source, cg) {
                            let mut left = [e, f, g];
                            let mut right = [e, f, g];
                            for i in [1, 0, 1] {
                                (left[i], left[i + 1]) = self.swap_pair(left[i], left[i + 1]);
                            }
                            for i in [0, 1, 0] {
                                (right[i], right[i + 1]) = self.swap_pair(right[i], right[i + 1]);
                            }
                            if left != right {
                                return Err(KGraphError::CubeConditionFailed(
                                    self.edges[e].name.clone(),
                                    self.edges[f].name.clone(),
                                    self.edges[g].name.clone(),
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The sub-k-graph on `keep`, keeping edges with both endpoints in `keep`.
    ///
    /// Returns the graph together with local-to-global vertex and edge maps.
    /// The caller is responsible for `keep` being closed enough (a maximal
    /// tail, or a hereditary set) for the result to be source-free.
    pub fn restrict(&self, keep: &[bool]) -> Result<(KGraph, Vec<VertexId>, Vec<EdgeId>), KGraphError> {
        let vertex_map: Vec<VertexId> = (0..self.vertex_count()).filter(|&v| keep[v]).collect();
        let mut local_vertex = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertex_map.iter().enumerate() {
            local_vertex[v] = i;
        }
        let edge_map: Vec<EdgeId> = (0..self.edge_count())
            .filter(|&e| keep[self.edges[e].range] && keep[self.edges[e].source])
            .collect();
        let mut local_edge = vec![usize::MAX; self.edge_count()];
        for (i, &e) in edge_map.iter().enumerate() {
            local_edge[e] = i;
        }
        let skeleton = Skeleton {
            k: self.k,
            vertices: vertex_map.iter().map(|&v| self.vertices[v].clone()).collect(),
            edges: edge_map
                .iter()
                .map(|&e| {
                    let ed = &self.edges[e];
                    SkeletonEdge {
                        name: ed.name.clone(),
                        color: ed.color,
                        range: local_vertex[ed.range],
                        source: local_vertex[ed.source],
                    }
                })
                .collect(),
        };
        let squares = self
            .squares
            .iter()
            .filter(|sq| local_edge[sq.first] != usize::MAX && local_edge[sq.second] != usize::MAX)
            .map(|sq| Square {
                first: local_edge[sq.first],
                second: local_edge[sq.second],
                first_out: local_edge[sq.first_out],
                second_out: local_edge[sq.second_out],
            })
            .collect();
        let graph = validate_kgraph(skeleton, squares)?;
        Ok((graph, vertex_map, edge_map))
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn edge(name: &str, color: usize, range: VertexId, source: VertexId) -> SkeletonEdge {
        SkeletonEdge { name: name.into(), color, range, source }
    }

    /// One vertex, one loop, k = 1.
    pub fn g1() -> KGraph {
        let sk = Skeleton { k: 1, vertices: vec!["v".into()], edges: vec![edge("e", 0, 0, 0)] };
        validate_kgraph(sk, vec![]).unwrap()
    }

    /// `v <-f- w`, loop `e` at `w`.
    pub fn g2() -> KGraph {
        let sk = Skeleton {
            k: 1,
            vertices: vec!["v".into(), "w".into()],
            edges: vec![edge("f", 0, 0, 1), edge("e", 0, 1, 1)],
        };
        validate_kgraph(sk, vec![]).unwrap()
    }

    /// One vertex with a loop of each of two colours.
    pub fn g3() -> KGraph {
        let sk = Skeleton {
            k: 2,
            vertices: vec!["v".into()],
            edges: vec![edge("e1", 0, 0, 0), edge("e2", 1, 0, 0)],
        };
        let sq = Square { first: 0, second: 1, first_out: 1, second_out: 0 };
        validate_kgraph(sk, vec![sq]).unwrap()
    }

    /// One vertex, two loops `a`, `b`, k = 1.
    pub fn g4() -> KGraph {
        let sk = Skeleton {
            k: 1,
            vertices: vec!["v".into()],
            edges: vec![edge("a", 0, 0, 0), edge("b", 0, 0, 0)],
        };
        validate_kgraph(sk, vec![]).unwrap()
    }

    /// Loops `a` at `u`, `b` at `w`, and `f` from `w` into `u`.
    pub fn g5() -> KGraph {
        let sk = Skeleton {
            k: 1,
            vertices: vec!["u".into(), "w".into()],
            edges: vec![edge("a", 0, 0, 0), edge("b", 0, 1, 1), edge("f", 0, 0, 1)],
        };
        validate_kgraph(sk, vec![]).unwrap()
    }

    /// One vertex, three colours, one loop each, all squares trivial.
    pub fn cube3() -> KGraph {
        let sk = Skeleton {
            k: 3,
            vertices: vec!["v".into()],
            edges: vec![edge("x", 0, 0, 0), edge("y", 1, 0, 0), edge("z", 2, 0, 0)],
        };
        let squares = vec![
            Square { first: 0, second: 1, first_out: 1, second_out: 0 },
            Square { first: 0, second: 2, first_out: 2, second_out: 0 },
            Square { first: 1, second: 2, first_out: 2, second_out: 1 },
        ];
        validate_kgraph(sk, squares).unwrap()
    }
}

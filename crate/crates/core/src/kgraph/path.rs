use std::fmt;

use thiserror::Error;

use super::{Degree, EdgeId, KGraph, VertexId};

/// A finite path in colour-block normal form.
///
/// Field order makes the derived `Ord` compare degree first, then range, then
/// edge ids, which is the enumeration order used throughout the crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    degree: Degree,
    range: VertexId,
    edges: Vec<EdgeId>,
    source: VertexId,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("paths are not composable: source {0} differs from range {1}")]
    NotComposable(VertexId, VertexId),
    #[error("degree {0} exceeds path degree {1}")]
    DegreeTooLarge(Degree, Degree),
    #[error("edge sequence is not composable at position {0}")]
    NotAPath(usize),
    #[error("infinite path block must be a cycle of full-support degree")]
    BadBlock,
}

impl Path {
    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    /// Edges in normal form (colour 1 block first).
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Displays a path by edge names, or the vertex name for a degree-zero path.
pub struct PathDisplay<'a> {
    graph: &'a KGraph,
    path: &'a Path,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_vertex() {
            return write!(f, "{}", self.graph.vertex_name(self.path.range));
        }
        for (i, &e) in self.path.edges.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.graph.edge(e).name)?;
        }
        Ok(())
    }
}

impl KGraph {
    pub fn display<'a>(&'a self, path: &'a Path) -> PathDisplay<'a> {
        PathDisplay { graph: self, path }
    }

    pub fn path_name(&self, path: &Path) -> String {
        self.display(path).to_string()
    }

    pub fn vertex_path(&self, v: VertexId) -> Path {
        Path { degree: Degree::zero(self.k()), range: v, edges: Vec::new(), source: v }
    }

    pub fn edge_path(&self, e: EdgeId) -> Path {
        let ed = self.edge(e);
        Path { degree: Degree::unit(self.k(), ed.color), range: ed.range, edges: vec![e], source: ed.source }
    }

    /// Builds the normal form of an arbitrary composable edge sequence.
    pub fn path_from_edges(&self, edges: &[EdgeId]) -> Result<Path, PathError> {
        let Some(&first) = edges.first() else {
            return Err(PathError::NotAPath(0));
        };
        for (i, w) in edges.windows(2).enumerate() {
            if self.edge(w[0]).source != self.edge(w[1]).range {
                return Err(PathError::NotAPath(i + 1));
            }
        }
        Ok(self.path_from_composable(edges.to_vec(), self.edge(first).range))
    }

    /// `edges` must already be composable; `range` is used when it is empty.
    pub(crate) fn path_from_composable(&self, mut edges: Vec<EdgeId>, range: VertexId) -> Path {
        let mut degree = vec![0u32; self.k()];
        for &e in &edges {
            degree[self.color(e)] += 1;
        }
        self.normalize(&mut edges);
        let source = edges.last().map_or(range, |&e| self.edge(e).source);
        let range = edges.first().map_or(range, |&e| self.edge(e).range);
        Path { degree: Degree::from_vec(degree), range, edges, source }
    }

    /// Sorts an edge sequence into colour-block order using square swaps.
    pub(crate) fn normalize(&self, edges: &mut [EdgeId]) {
        for i in 1..edges.len() {
            let mut j = i;
            while j > 0 && self.color(edges[j - 1]) > self.color(edges[j]) {
                let (a, b) = self.swap_pair(edges[j - 1], edges[j]);
                edges[j - 1] = a;
                edges[j] = b;
                j -= 1;
            }
        }
    }

    /// Rewrites `edges` so that its colour sequence equals `pattern`.
    ///
    /// `pattern` must be a permutation of the colour multiset of `edges`.
    pub(crate) fn reorder(&self, edges: &mut [EdgeId], pattern: &[usize]) {
        debug_assert_eq!(edges.len(), pattern.len());
        for t in 0..pattern.len() {
            let j = (t..edges.len())
                .find(|&j| self.color(edges[j]) == pattern[t])
                .expect("pattern is a permutation of the edge colours");
            for m in (t..j).rev() {
                let (a, b) = self.swap_pair(edges[m], edges[m + 1]);
                edges[m] = a;
                edges[m + 1] = b;
            }
        }
    }

    pub fn compose(&self, first: &Path, second: &Path) -> Result<Path, PathError> {
        if first.source != second.range {
            return Err(PathError::NotComposable(first.source, second.range));
        }
        Ok(self.concat(first, second))
    }

    pub(crate) fn concat(&self, first: &Path, second: &Path) -> Path {
        debug_assert_eq!(first.source, second.range);
        if second.is_vertex() {
            return first.clone();
        }
        if first.is_vertex() {
            return second.clone();
        }
        let mut edges = Vec::with_capacity(first.len() + second.len());
        edges.extend_from_slice(&first.edges);
        edges.extend_from_slice(&second.edges);
        self.normalize(&mut edges);
        Path {
            degree: first.degree.add(&second.degree),
            range: first.range,
            edges,
            source: second.source,
        }
    }

    /// `path^n`; `path` must be a cycle unless `n <= 1`.
    pub(crate) fn power(&self, path: &Path, n: u32) -> Path {
        let mut out = self.vertex_path(path.range);
        for _ in 0..n {
            out = self.concat(&out, path);
        }
        out
    }

    /// The unique factorisation `path = head * tail` with `d(head) = at`.
    pub fn factor(&self, path: &Path, at: &Degree) -> Result<(Path, Path), PathError> {
        let rest = path
            .degree
            .checked_sub(at)
            .ok_or_else(|| PathError::DegreeTooLarge(at.clone(), path.degree.clone()))?;
        if at.is_zero() {
            return Ok((self.vertex_path(path.range), path.clone()));
        }
        if rest.is_zero() {
            return Ok((path.clone(), self.vertex_path(path.source)));
        }
        let mut pattern = at.colors();
        pattern.extend(rest.colors());
        let mut edges = path.edges.clone();
        self.reorder(&mut edges, &pattern);
        let split = pattern.len() - rest.total() as usize;
        let tail_edges = edges.split_off(split);
        let mid = self.edge(*edges.last().expect("head has an edge")).source;
        Ok((
            Path { degree: at.clone(), range: path.range, edges, source: mid },
            Path { degree: rest, range: mid, edges: tail_edges, source: path.source },
        ))
    }

    /// The segment `path(from, to)` for `from <= to <= d(path)`.
    pub fn segment_of(&self, path: &Path, from: &Degree, to: &Degree) -> Result<Path, PathError> {
        let (head, _) = self.factor(path, to)?;
        let (_, mid) = self.factor(&head, from)?;
        Ok(mid)
    }

    /// All normal-form paths with range `v` and degree `p`, in lexicographic edge order.
    pub fn paths_of_degree(&self, v: VertexId, p: &Degree) -> Vec<Path> {
        let pattern = p.colors();
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(pattern.len());
        self.extend_paths(v, &pattern, &mut stack, &mut out);
        out.into_iter()
            .map(|edges| {
                let source = edges.last().map_or(v, |&e| self.edge(e).source);
                Path { degree: p.clone(), range: v, edges, source }
            })
            .collect()
    }

    fn extend_paths(&self, cur: VertexId, pattern: &[usize], stack: &mut Vec<EdgeId>, out: &mut Vec<Vec<EdgeId>>) {
        let Some((&color, rest)) = pattern.split_first() else {
            out.push(stack.clone());
            return;
        };
        for &e in self.edges_into(cur, color) {
            stack.push(e);
            self.extend_paths(self.edge(e).source, rest, stack, out);
            stack.pop();
        }
    }

    /// All paths with range `v` and degree at most `bound`, ordered by (degree, edges).
    pub fn paths_up_to(&self, v: VertexId, bound: &Degree) -> Vec<Path> {
        bound.box_below().iter().flat_map(|p| self.paths_of_degree(v, p)).collect()
    }

    /// All paths of degree at most `bound`, ordered by (degree, range, edges).
    pub fn all_paths_up_to(&self, bound: &Degree) -> Vec<Path> {
        let mut out: Vec<Path> = (0..self.vertex_count()).flat_map(|v| self.paths_up_to(v, bound)).collect();
        out.sort();
        out
    }
}

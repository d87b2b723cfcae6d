use std::collections::{HashMap, VecDeque};

use crate::kgraph::{Degree, InfinitePath, Path};
use crate::selfsim::SelfSimilarGraph;

use super::ReprError;

/// One element of the truncated orbit `[x]`.
#[derive(Clone, Debug)]
pub struct OrbitElement {
    pub path: InfinitePath,
    /// Number of moves from `x` at which it was first reached.
    pub depth: usize,
}

/// The infinite paths reachable from `x` in at most `depth` moves, where a
/// move prepends an edge, deletes a leading edge of some colour, or applies
/// a group element.
#[derive(Clone, Debug)]
pub struct OrbitBasis {
    pub elements: Vec<OrbitElement>,
    pub depth: usize,
    buckets: HashMap<Path, Vec<usize>>,
    key_degree: Degree,
}

impl OrbitBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Strictly inside the truncation: every one-move neighbour was explored.
    pub fn is_interior(&self, i: usize) -> bool {
        self.elements[i].depth < self.depth
    }

    pub fn index_of(&self, ss: &SelfSimilarGraph, y: &InfinitePath) -> Option<usize> {
        let graph = ss.graph();
        let key = graph.initial_segment(y, &self.key_degree);
        self.buckets
            .get(&key)?
            .iter()
            .copied()
            .find(|&i| graph.same_infinite_path(&self.elements[i].path, y))
    }

    fn insert(&mut self, ss: &SelfSimilarGraph, y: InfinitePath, depth: usize) -> Option<usize> {
        if self.index_of(ss, &y).is_some() {
            return None;
        }
        let key = ss.graph().initial_segment(&y, &self.key_degree);
        let i = self.elements.len();
        self.buckets.entry(key).or_default().push(i);
        self.elements.push(OrbitElement { path: y, depth });
        Some(i)
    }
}

pub fn build_orbit(ss: &SelfSimilarGraph, x: &InfinitePath, depth: usize, budget: usize) -> Result<OrbitBasis, ReprError> {
    let graph = ss.graph();
    let k = graph.k();
    let mut basis = OrbitBasis { elements: Vec::new(), depth, buckets: HashMap::new(), key_degree: Degree::ones(k) };
    basis.insert(ss, x.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let d = basis.elements[i].depth;
        if d >= depth {
            continue;
        }
        let y = basis.elements[i].path.clone();
        let mut next = Vec::new();
        for (e, edge) in graph.edges().iter().enumerate() {
            if edge.source == y.range() {
                next.push(graph.prepend(&graph.edge_path(e), &y).expect("edge ends at x(0,0)"));
            }
        }
        for c in 0..k {
            next.push(graph.shift(&y, &Degree::unit(k, c)));
        }
        for g in ss.group().elements() {
            next.push(ss.act_infinite(g, &y));
        }
        for z in next {
            if let Some(j) = basis.insert(ss, z, d + 1) {
                if basis.len() > budget {
                    return Err(ReprError::BudgetExceeded(budget));
                }
                queue.push_back(j);
            }
        }
    }
    Ok(basis)
}

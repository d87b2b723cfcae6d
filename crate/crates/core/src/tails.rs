//! Hereditary saturated sets, maximal tails and their periodicity data.

use serde::Serialize;
use thiserror::Error;

use crate::kgraph::{Degree, EdgeId, InfinitePath, KGraph, KGraphError, Path, VertexId};
use crate::perdual::PerLattice;
use crate::selfsim::SelfSimilarGraph;
use crate::{par, Bounds};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TailError {
    #[error("{count} vertices exceed the subset enumeration limit of {limit}")]
    TooManyVertices { count: usize, limit: usize },
    #[error("{0:?} is not a maximal tail")]
    NotATail(Vec<String>),
    #[error(transparent)]
    Graph(#[from] KGraphError),
}

fn mask(graph: &KGraph, set: &[VertexId]) -> Vec<bool> {
    let mut m = vec![false; graph.vertex_count()];
    for &v in set {
        m[v] = true;
    }
    m
}

fn members(set: &[bool]) -> Vec<VertexId> {
    (0..set.len()).filter(|&v| set[v]).collect()
}

/// `s(H Λ) ⊂ H`.
pub fn is_hereditary(graph: &KGraph, set: &[bool]) -> bool {
    graph.edges().iter().all(|e| !set[e.range] || set[e.source])
}

/// Some colour `i` with `s(v Λ^{e_i}) ⊂ H`. Iterating this unit-degree rule
/// reaches the same fixed point as the rule over all degrees.
fn saturates(graph: &KGraph, set: &[bool], v: VertexId) -> bool {
    (0..graph.k()).any(|c| graph.edges_into(v, c).iter().all(|&e| set[graph.edge(e).source]))
}

pub fn is_saturated(graph: &KGraph, set: &[bool]) -> bool {
    (0..graph.vertex_count()).all(|v| set[v] || !saturates(graph, set, v))
}

/// The smallest hereditary saturated set containing `a`, sorted.
pub fn hereditary_saturated_closure(graph: &KGraph, a: &[VertexId]) -> Vec<VertexId> {
    let mut set = mask(graph, a);
    loop {
        let mut changed = false;
        for e in graph.edges() {
            if set[e.range] && !set[e.source] {
                set[e.source] = true;
                changed = true;
            }
        }
        for v in 0..graph.vertex_count() {
            if !set[v] && saturates(graph, &set, v) {
                set[v] = true;
                changed = true;
            }
        }
        if !changed {
            return members(&set);
        }
    }
}

/// The three maximal-tail conditions on a nonempty vertex set.
pub fn is_maximal_tail(graph: &KGraph, reach: &[Vec<bool>], t: &[bool]) -> bool {
    let n = graph.vertex_count();
    let inside = members(t);
    if inside.is_empty() {
        return false;
    }
    let closed = inside.iter().all(|&v| (0..n).all(|w| !reach[w][v] || t[w]));
    let extendable = inside
        .iter()
        .all(|&v| (0..graph.k()).all(|c| graph.edges_into(v, c).iter().any(|&e| t[graph.edge(e).source])));
    let directed = inside.iter().enumerate().all(|(i, &v)| {
        inside[i + 1..].iter().all(|&w| inside.iter().any(|&y| reach[v][y] && reach[w][y]))
    });
    closed && extendable && directed
}

/// Every maximal tail, by exhaustive subset enumeration. Largest first, ties
/// broken lexicographically on the sorted vertex list.
pub fn maximal_tails(graph: &KGraph, limit: usize) -> Result<Vec<Vec<VertexId>>, TailError> {
    let n = graph.vertex_count();
    if n > limit || n >= 63 {
        return Err(TailError::TooManyVertices { count: n, limit });
    }
    let reach = graph.reachability();
    let hits = par::filter_range(1u64 << n, |bits| {
        let t: Vec<bool> = (0..n).map(|v| bits >> v & 1 == 1).collect();
        is_maximal_tail(graph, &reach, &t)
    });
    let mut tails: Vec<Vec<VertexId>> =
        hits.into_iter().map(|bits| (0..n).filter(|&v| bits >> v & 1 == 1).collect()).collect();
    tails.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    Ok(tails)
}

/// Every ordered pair of `h` is joined by a path inside `h`.
pub fn strongly_connected(graph: &KGraph, h: &[VertexId]) -> bool {
    let inside = mask(graph, h);
    h.iter().all(|&start| {
        let mut seen = vec![false; graph.vertex_count()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for c in 0..graph.k() {
                for &e in graph.edges_into(v, c) {
                    let s = graph.edge(e).source;
                    if inside[s] && !seen[s] {
                        seen[s] = true;
                        stack.push(s);
                    }
                }
            }
        }
        h.iter().all(|&w| seen[w])
    })
}

/// `ΛT` with the restricted action and maps back to the ambient graph.
#[derive(Clone, Debug)]
pub struct TailGraph {
    pub tail: Vec<VertexId>,
    pub action: SelfSimilarGraph,
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<EdgeId>,
}

impl TailGraph {
    pub fn local_vertex(&self, v: VertexId) -> Option<VertexId> {
        self.vertex_map.iter().position(|&w| w == v)
    }

    /// The same path in the ambient graph.
    pub fn lift_path(&self, ambient: &KGraph, p: &Path) -> Path {
        if p.is_vertex() {
            return ambient.vertex_path(self.vertex_map[p.range()]);
        }
        let edges: Vec<EdgeId> = p.edges().iter().map(|&e| self.edge_map[e]).collect();
        ambient.path_from_edges(&edges).expect("tail paths are ambient paths")
    }

    pub fn lift_infinite(&self, ambient: &KGraph, x: &InfinitePath) -> InfinitePath {
        ambient
            .infinite_path(self.lift_path(ambient, x.prefix()), self.lift_path(ambient, x.block()))
            .expect("tail paths are ambient paths")
    }
}

pub fn restrict_to_tail(ss: &SelfSimilarGraph, tail: &[VertexId]) -> Result<TailGraph, TailError> {
    let graph = ss.graph();
    let keep = mask(graph, tail);
    if !is_maximal_tail(graph, &graph.reachability(), &keep) {
        return Err(TailError::NotATail(tail.iter().map(|&v| graph.vertex_name(v).to_string()).collect()));
    }
    let (action, vertex_map, edge_map) = ss.restrict_to(&keep)?;
    Ok(TailGraph { tail: members(&keep), action, vertex_map, edge_map })
}

/// A cycline pair `(first, 1, second)` of `ΛT` with nonzero degree difference.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodWitness {
    pub first: String,
    pub second: String,
    pub difference: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum TailClass {
    Gamma,
    GammaUpToBound { bound: Degree },
    Tau { witness: PeriodWitness },
}

impl TailClass {
    pub fn is_tau(&self) -> bool {
        matches!(self, TailClass::Tau { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            TailClass::Gamma | TailClass::GammaUpToBound { .. } => "gamma",
            TailClass::Tau { .. } => "tau",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum HtSet {
    Exact { vertices: Vec<VertexId> },
    UpToBound { vertices: Vec<VertexId>, bound: Degree },
    Inconclusive { bound: Degree },
}

impl HtSet {
    pub fn vertices(&self) -> &[VertexId] {
        match self {
            HtSet::Exact { vertices } | HtSet::UpToBound { vertices, .. } => vertices,
            HtSet::Inconclusive { .. } => &[],
        }
    }
}

/// Everything the rest of the crate needs to know about one maximal tail.
#[derive(Clone, Debug)]
pub struct TailAnalysis {
    pub graph: TailGraph,
    pub class: TailClass,
    pub per: PerLattice,
    /// `None` when `per` is exact, otherwise the degree bound it was computed to.
    pub per_bound: Option<Degree>,
    /// Ambient vertex ids.
    pub h_t: HtSet,
}

impl TailAnalysis {
    pub fn tail(&self) -> &[VertexId] {
        &self.graph.tail
    }

    pub fn tail_names(&self, ambient: &KGraph) -> Vec<String> {
        self.tail().iter().map(|&v| ambient.vertex_name(v).to_string()).collect()
    }
}

/// For a 1-graph: the vertices of a cycle each of whose vertices receives
/// exactly one edge, i.e. a cycle without entrances. Local ids, cycle order
/// starting from the smallest vertex.
pub fn cycle_without_entrance(graph: &KGraph) -> Option<Vec<EdgeId>> {
    assert_eq!(graph.k(), 1, "cycle analysis is for 1-graphs");
    let lone = |v: VertexId| -> Option<EdgeId> {
        match graph.edges_into(v, 0) {
            [e] => Some(*e),
            _ => None,
        }
    };
    for start in 0..graph.vertex_count() {
        let mut v = start;
        let mut cycle = Vec::new();
        while let Some(e) = lone(v) {
            cycle.push(e);
            v = graph.edge(e).source;
            if v == start {
                return Some(cycle);
            }
            if cycle.len() > graph.vertex_count() {
                break;
            }
        }
    }
    None
}

pub fn analyze_tail(ss: &SelfSimilarGraph, tail: &[VertexId], bounds: &Bounds) -> Result<TailAnalysis, TailError> {
    let tg = restrict_to_tail(ss, tail)?;
    let local = tg.action.graph();
    let k = local.k();
    if k == 1 {
        let Some(cycle) = cycle_without_entrance(local) else {
            return Ok(TailAnalysis {
                class: TailClass::Gamma,
                per: PerLattice::zero(1),
                per_bound: None,
                h_t: HtSet::Exact { vertices: tg.tail.clone() },
                graph: tg,
            });
        };
        let path = local.path_from_edges(&cycle).expect("cycle edges compose");
        let len = cycle.len() as i64;
        let mut h: Vec<VertexId> = cycle.iter().map(|&e| tg.vertex_map[local.edge(e).range]).collect();
        h.sort_unstable();
        let witness = PeriodWitness {
            first: local.path_name(&path),
            second: local.vertex_name(path.range()).to_string(),
            difference: vec![len],
        };
        return Ok(TailAnalysis {
            class: TailClass::Tau { witness },
            per: PerLattice::new(1, vec![vec![len]]),
            per_bound: None,
            h_t: HtSet::Exact { vertices: h },
            graph: tg,
        });
    }

    let bound = bounds.degree.clone();
    let pairs = tg.action.cycline_pairs_up_to(&bound);
    let diffs = pairs.nonzero_differences();
    let per = PerLattice::new(k, diffs);
    let class = match pairs.triples.iter().find(|t| t.degree_difference().iter().any(|&c| c != 0)) {
        Some(t) => TailClass::Tau {
            witness: PeriodWitness {
                first: local.path_name(&t.first),
                second: local.path_name(&t.second),
                difference: t.degree_difference(),
            },
        },
        None => TailClass::GammaUpToBound { bound: bound.clone() },
    };
    let h_local = bounded_h_t(&tg.action, &per, &bound);
    let h_t = if h_local.is_empty() {
        HtSet::Inconclusive { bound: bound.clone() }
    } else {
        HtSet::UpToBound { vertices: h_local.iter().map(|&v| tg.vertex_map[v]).collect(), bound: bound.clone() }
    };
    Ok(TailAnalysis { graph: tg, class, per, per_bound: Some(bound), h_t })
}

/// Local vertices `v` such that for all `p, q <= bound` with `p - q` in `per`,
/// every `mu` in `v Λ^p` has exactly one cycline partner in `v Λ^q`; then
/// shrunk to the largest hereditary subset.
pub fn bounded_h_t(ss: &SelfSimilarGraph, per: &PerLattice, bound: &Degree) -> Vec<VertexId> {
    let graph = ss.graph();
    let n = graph.vertex_count();
    let one = ss.group().identity();
    let degrees = bound.box_below();
    let mut pass: Vec<bool> = (0..n)
        .map(|v| {
            if per.is_zero() {
                return true;
            }
            degrees.iter().all(|p| {
                let mus = graph.paths_of_degree(v, p);
                degrees.iter().filter(|q| per.contains(&p.difference(q))).all(|q| {
                    let nus = graph.paths_of_degree(v, q);
                    mus.iter().all(|mu| nus.iter().filter(|nu| ss.cycline_check(mu, one, nu)).count() == 1)
                })
            })
        })
        .collect();
    loop {
        let mut changed = false;
        for e in graph.edges() {
            if pass[e.range] && !pass[e.source] {
                pass[e.range] = false;
                changed = true;
            }
        }
        if !changed {
            return members(&pass);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kgraph::fixtures::*;
    use crate::kgraph::{validate_kgraph, Skeleton};
    use crate::selfsim::fixtures::*;
    use proptest::prelude::*;

    fn names(g: &KGraph, set: &[VertexId]) -> Vec<String> {
        set.iter().map(|&v| g.vertex_name(v).to_string()).collect()
    }

    fn tail_names(g: &KGraph) -> Vec<Vec<String>> {
        maximal_tails(g, 22).unwrap().iter().map(|t| names(g, t)).collect()
    }

    /// Test-only: the three conditions checked with explicit path searches.
    fn tail_oracle(g: &KGraph, t: &[bool]) -> bool {
        let n = g.vertex_count();
        let reach = |a: VertexId, b: VertexId| {
            let mut seen = vec![a];
            let mut i = 0;
            while i < seen.len() {
                let v = seen[i];
                for e in g.edges().iter().filter(|e| e.range == v) {
                    if !seen.contains(&e.source) {
                        seen.push(e.source);
                    }
                }
                i += 1;
            }
            seen.contains(&b)
        };
        let inside: Vec<_> = (0..n).filter(|&v| t[v]).collect();
        !inside.is_empty()
            && inside.iter().all(|&v| (0..n).filter(|&w| reach(w, v)).all(|w| t[w]))
            && inside.iter().all(|&v| {
                (0..g.k()).all(|c| g.edges().iter().any(|e| e.range == v && e.color == c && t[e.source]))
            })
            && inside.iter().all(|&v| inside.iter().all(|&w| inside.iter().any(|&y| reach(v, y) && reach(w, y))))
    }

    #[test]
    fn closure_examples() {
        let g = g2();
        assert!(hereditary_saturated_closure(&g, &[]).is_empty());
        assert_eq!(hereditary_saturated_closure(&g, &[1]), vec![0, 1]);
        assert_eq!(hereditary_saturated_closure(&g, &[0, 1]), vec![0, 1]);
        let g = g5();
        // {u}: hereditary pulls in w through f
        assert_eq!(hereditary_saturated_closure(&g, &[0]), vec![0, 1]);
        assert_eq!(hereditary_saturated_closure(&g, &[1]), vec![1]);
    }

    #[test]
    fn tails_of_fixtures() {
        assert_eq!(tail_names(&g1()), vec![vec!["v"]]);
        assert_eq!(tail_names(&g2()), vec![vec!["v", "w"]]);
        assert_eq!(tail_names(&g5()), vec![vec!["u", "w"], vec!["u"]]);
        assert_eq!(tail_names(&g3()), vec![vec!["v"]]);
        assert_eq!(tail_names(&g4()), vec![vec!["v"]]);
    }

    #[test]
    fn too_many_vertices() {
        assert!(matches!(maximal_tails(&g5(), 1), Err(TailError::TooManyVertices { count: 2, limit: 1 })));
    }

    #[test]
    fn strongly_connected_examples() {
        let g = g1();
        assert!(strongly_connected(&g, &[0]));
        let g = g5();
        assert!(!strongly_connected(&g, &[0, 1]));
        assert!(strongly_connected(&g2(), &[1]));
    }

    #[test]
    fn restrict_to_u_in_g5() {
        let tg = restrict_to_tail(&trivial(g5()), &[0]).unwrap();
        let g = tg.action.graph();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edge(0).name, "a");
        assert_eq!(tg.edge_map, vec![0]);
        assert!(restrict_to_tail(&trivial(g5()), &[1]).is_err());
        let whole = restrict_to_tail(&trivial(g2()), &[0, 1]).unwrap();
        assert_eq!(whole.action.graph().edge_count(), 2);
    }

    #[test]
    fn classification_of_fixtures() {
        let b = Bounds::new(1);
        let a = analyze_tail(&trivial(g1()), &[0], &b).unwrap();
        assert!(a.class.is_tau());
        assert_eq!(a.per.basis(), &[vec![1]]);
        if let TailClass::Tau { witness } = &a.class {
            assert_eq!((witness.first.as_str(), witness.second.as_str()), ("e", "v"));
        }
        let a = analyze_tail(&g4_action(), &[0], &b).unwrap();
        assert_eq!(a.class, TailClass::Gamma);
        assert!(a.per.is_zero());
        let a = analyze_tail(&trivial(g5()), &[0], &b).unwrap();
        assert!(a.class.is_tau());
        assert_eq!(a.h_t, HtSet::Exact { vertices: vec![0] });
        let a = analyze_tail(&trivial(g5()), &[0, 1], &b).unwrap();
        assert_eq!(a.h_t, HtSet::Exact { vertices: vec![1] });
        let a = analyze_tail(&trivial(g2()), &[0, 1], &b).unwrap();
        assert_eq!(a.h_t, HtSet::Exact { vertices: vec![1] });
        assert_eq!(a.per.basis(), &[vec![1]]);
    }

    #[test]
    fn torus_tail_bounded() {
        let a = analyze_tail(&trivial(g3()), &[0], &Bounds::new(2).with_degree(Degree::uniform(2, 2))).unwrap();
        assert!(a.class.is_tau());
        assert_eq!(a.per.invariants(), &[1, 1]);
        assert!(matches!(&a.h_t, HtSet::UpToBound { vertices, .. } if vertices == &vec![0]));
    }

    #[test]
    fn structural_k1_agrees_with_bounded_search() {
        for ss in [trivial(g1()), trivial(g2()), trivial(g5()), g4_action()] {
            for t in maximal_tails(ss.graph(), 22).unwrap() {
                let exact = analyze_tail(&ss, &t, &Bounds::new(1)).unwrap();
                let local = &exact.graph.action;
                let bound = Degree::uniform(1, 4);
                let pairs = local.cycline_pairs_up_to(&bound);
                let bounded = PerLattice::new(1, pairs.nonzero_differences());
                assert_eq!(bounded, exact.per);
                let h: Vec<VertexId> =
                    bounded_h_t(local, &bounded, &bound).iter().map(|&v| exact.graph.vertex_map[v]).collect();
                assert_eq!(h, exact.h_t.vertices());
            }
        }
    }

    fn random_graph() -> impl Strategy<Value = KGraph> {
        (2usize..5, prop::collection::vec((0usize..4, 0usize..4), 1..8)).prop_filter_map("source free", |(n, es)| {
            let edges: Vec<_> = es
                .iter()
                .enumerate()
                .map(|(i, &(r, s))| edge(&format!("e{i}"), 0, r % n, s % n))
                .collect();
            let vertices = (0..n).map(|i| format!("v{i}")).collect();
            validate_kgraph(Skeleton { k: 1, vertices, edges }, vec![]).ok()
        })
    }

    proptest! {
        #[test]
        fn tails_match_oracle_and_complements_are_hereditary_saturated(g in random_graph()) {
            let n = g.vertex_count();
            let tails = maximal_tails(&g, 22).unwrap();
            for bits in 1u64..(1 << n) {
                let t: Vec<bool> = (0..n).map(|v| bits >> v & 1 == 1).collect();
                let found = tails.contains(&members(&t));
                prop_assert_eq!(found, tail_oracle(&g, &t));
            }
            for t in &tails {
                let m = mask(&g, t);
                let complement: Vec<bool> = m.iter().map(|x| !x).collect();
                prop_assert!(is_hereditary(&g, &complement));
                prop_assert!(is_saturated(&g, &complement));
            }
        }

        #[test]
        fn closure_is_monotone_and_closed(g in random_graph(), a in 0u64..16, b in 0u64..16) {
            let n = g.vertex_count();
            let pick = |bits: u64| -> Vec<VertexId> { (0..n).filter(|&v| bits >> v & 1 == 1).collect() };
            let small = hereditary_saturated_closure(&g, &pick(a & b));
            let big = hereditary_saturated_closure(&g, &pick(a));
            prop_assert!(small.iter().all(|v| big.contains(v)));
            let m = mask(&g, &big);
            prop_assert!(is_hereditary(&g, &m) && is_saturated(&g, &m));
        }

        #[test]
        fn h_t_is_hereditary_and_nonempty_for_tau(g in random_graph()) {
            let ss = SelfSimilarGraph::trivial(g.clone());
            for t in maximal_tails(&g, 22).unwrap() {
                let a = analyze_tail(&ss, &t, &Bounds::new(1)).unwrap();
                let h = mask(&g, a.h_t.vertices());
                prop_assert!(!a.h_t.vertices().is_empty());
                let tmask = mask(&g, &t);
                prop_assert!(g.edges().iter().all(|e| !h[e.range] || !tmask[e.source] || h[e.source]));
                prop_assert_eq!(a.class.is_tau(), !a.per.is_zero());
                if a.class.is_tau() {
                    prop_assert!(strongly_connected(&g, a.h_t.vertices()));
                }
            }
        }
    }
}

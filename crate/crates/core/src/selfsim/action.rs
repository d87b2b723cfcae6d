use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use super::group::{FiniteGroup, GroupElem};
use crate::kgraph::{EdgeId, InfinitePath, KGraph, Path, VertexId};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ActionError {
    #[error("action and restriction tables must cover every (group element, edge) pair")]
    Incomplete,
    #[error("self-similarity axiom ({axiom}) fails: {witness}")]
    AxiomViolated { axiom: u8, witness: String },
    #[error("not a group action: {0}")]
    NotAGroupAction(String),
}

/// A validated self-similar action of a finite group on a k-graph, fixing
/// every vertex.
#[derive(Clone, Debug)]
pub struct SelfSimilarGraph {
    graph: KGraph,
    group: FiniteGroup,
    /// `act[g][e] = g . e`
    act: Vec<Vec<EdgeId>>,
    /// `restrict[g][e] = g|_e`
    restrict: Vec<Vec<GroupElem>>,
}

/// Outcome of the exact pseudo-freeness decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PseudoFreeness {
    PseudoFree,
    /// `g . path = path` and `g|_path = 1` with `g != 1`.
    Counterexample { element: GroupElem, path: Path },
}

impl PseudoFreeness {
    pub fn is_pseudo_free(&self) -> bool {
        matches!(self, PseudoFreeness::PseudoFree)
    }
}

/// Checks the self-similarity axioms on edges and across every factorisation
/// square, and that the action fixes vertices.
pub fn validate_action(
    graph: KGraph,
    group: FiniteGroup,
    act: Vec<Vec<EdgeId>>,
    restrict: Vec<Vec<GroupElem>>,
) -> Result<SelfSimilarGraph, ActionError> {
    let n = group.order();
    let m = graph.edge_count();
    if act.len() != n
        || restrict.len() != n
        || act.iter().any(|row| row.len() != m || row.iter().any(|&e| e >= m))
        || restrict.iter().any(|row| row.len() != m || row.iter().any(|&h| h >= n))
    {
        return Err(ActionError::Incomplete);
    }
    let gname = |g: GroupElem| group.name(g).to_string();
    let ename = |e: EdgeId| graph.edge(e).name.clone();
    let violated = |axiom: u8, witness: String| Err(ActionError::AxiomViolated { axiom, witness });

    for g in group.elements() {
        for e in 0..m {
            let ge = act[g][e];
            if graph.color(ge) != graph.color(e) {
                return violated(1, format!("{} . {} = {} changes colour", gname(g), ename(e), ename(ge)));
            }
            if graph.edge(ge).range != graph.edge(e).range || graph.edge(ge).source != graph.edge(e).source {
                return violated(2, format!("{} . {} = {} moves an endpoint", gname(g), ename(e), ename(ge)));
            }
        }
    }
    let one = group.identity();
    for e in 0..m {
        if act[one][e] != e {
            return Err(ActionError::NotAGroupAction(format!("1 . {} != {}", ename(e), ename(e))));
        }
        if restrict[one][e] != one {
            return violated(6, format!("1|_{} = {}", ename(e), gname(restrict[one][e])));
        }
    }
    for g in group.elements() {
        for h in group.elements() {
            let gh = group.mul(g, h);
            for e in 0..m {
                if act[gh][e] != act[g][act[h][e]] {
                    return Err(ActionError::NotAGroupAction(format!(
                        "({} {}) . {} != {} . ({} . {})",
                        gname(g),
                        gname(h),
                        ename(e),
                        gname(g),
                        gname(h),
                        ename(e)
                    )));
                }
                let lhs = restrict[gh][e];
                let rhs = group.mul(restrict[g][act[h][e]], restrict[h][e]);
                if lhs != rhs {
                    return violated(
                        7,
                        format!(
                            "({} {})|_{} = {} but {}|_({} . {}) {}|_{} = {}",
                            gname(g),
                            gname(h),
                            ename(e),
                            gname(lhs),
                            gname(g),
                            gname(h),
                            ename(e),
                            gname(h),
                            ename(e),
                            gname(rhs)
                        ),
                    );
                }
            }
        }
    }

    let ss = SelfSimilarGraph { graph, group, act, restrict };
    // g.(ef) and g|_{ef} must not depend on which side of a square is used.
    for sq in ss.graph.squares() {
        let left = ss.graph.path_from_composable(vec![sq.first, sq.second], ss.graph.edge(sq.first).range);
        let right_edges = [sq.first_out, sq.second_out];
        for g in ss.group.elements() {
            let via_left = ss.act_path(g, &left);
            let (f2, h) = (ss.act[g][right_edges[0]], ss.restrict[g][right_edges[0]]);
            let e2 = ss.act[h][right_edges[1]];
            let via_right = ss.graph.path_from_composable(vec![f2, e2], ss.graph.edge(f2).range);
            if via_left != via_right {
                return violated(
                    3,
                    format!(
                        "{} . ({} {}) differs from {} . ({} {})",
                        ss.group.name(g),
                        ss.graph.edge(sq.first).name,
                        ss.graph.edge(sq.second).name,
                        ss.group.name(g),
                        ss.graph.edge(sq.first_out).name,
                        ss.graph.edge(sq.second_out).name
                    ),
                );
            }
            let r_left = ss.restrict_path(g, &left);
            let r_right = ss.restrict[h][right_edges[1]];
            if r_left != r_right {
                return violated(
                    5,
                    format!(
                        "{}|_({} {}) differs across its square",
                        ss.group.name(g),
                        ss.graph.edge(sq.first).name,
                        ss.graph.edge(sq.second).name
                    ),
                );
            }
        }
    }
    Ok(ss)
}

impl SelfSimilarGraph {
    /// The trivial group acting trivially.
    pub fn trivial(graph: KGraph) -> Self {
        let m = graph.edge_count();
        SelfSimilarGraph {
            graph,
            group: FiniteGroup::trivial(),
            act: vec![(0..m).collect()],
            restrict: vec![vec![0; m]],
        }
    }

    pub fn graph(&self) -> &KGraph {
        &self.graph
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn act_edge(&self, g: GroupElem, e: EdgeId) -> EdgeId {
        self.act[g][e]
    }

    pub fn restrict_edge(&self, g: GroupElem, e: EdgeId) -> GroupElem {
        self.restrict[g][e]
    }

    /// `g . mu`, folding `g.(e mu') = (g.e)(g|_e . mu')` edge by edge.
    pub fn act_path(&self, g: GroupElem, mu: &Path) -> Path {
        if self.group.is_identity(g) || mu.is_vertex() {
            return mu.clone();
        }
        let mut h = g;
        let mut out = Vec::with_capacity(mu.len());
        for &e in mu.edges() {
            out.push(self.act[h][e]);
            h = self.restrict[h][e];
        }
        // Colours are preserved, so the result is already in normal form.
        self.graph.path_from_composable(out, mu.range())
    }

    /// `g|_mu`.
    pub fn restrict_path(&self, g: GroupElem, mu: &Path) -> GroupElem {
        mu.edges().iter().fold(g, |h, &e| self.restrict[h][e])
    }

    /// `g . x` for an eventually periodic `x`.
    ///
    /// With `h_0 = g|_prefix` and `h_{i+1} = h_i|_block`, the sequence of
    /// restrictions is eventually periodic, which gives a periodic block for
    /// the image.
    pub fn act_infinite(&self, g: GroupElem, x: &InfinitePath) -> InfinitePath {
        if self.group.is_identity(g) {
            return x.clone();
        }
        let prefix = self.act_path(g, x.prefix());
        let mut hs = vec![self.restrict_path(g, x.prefix())];
        let start = loop {
            let next = self.restrict_path(*hs.last().unwrap(), x.block());
            if let Some(pos) = hs.iter().position(|&h| h == next) {
                break pos;
            }
            hs.push(next);
        };
        let graph = &self.graph;
        let chain = |elems: &[GroupElem]| {
            elems
                .iter()
                .fold(graph.vertex_path(x.block().range()), |acc, &h| graph.concat(&acc, &self.act_path(h, x.block())))
        };
        let prefix = graph.concat(&prefix, &chain(&hs[..start]));
        let block = chain(&hs[start..]);
        graph.infinite_path(prefix, block).expect("image block is a cycle of full support")
    }

    /// Exact pseudo-freeness decision.
    ///
    /// Searches the automaton on states `(h, v)` with transitions
    /// `(h, v) -e-> (h|_e, s(e))` allowed when `h . e = e`, for a nonempty run
    /// from some `(g, v)`, `g != 1`, that reaches the identity.
    pub fn pseudo_free_check(&self) -> PseudoFreeness {
        let n = self.group.order();
        for g in self.group.elements().filter(|&g| !self.group.is_identity(g)) {
            for v in 0..self.graph.vertex_count() {
                let mut parent: HashMap<(GroupElem, VertexId), ((GroupElem, VertexId), EdgeId)> = HashMap::new();
                let mut queue = VecDeque::from([(g, v)]);
                let mut seen = vec![vec![false; self.graph.vertex_count()]; n];
                while let Some((h, w)) = queue.pop_front() {
                    for c in 0..self.graph.k() {
                        for &e in self.graph.edges_into(w, c) {
                            if self.act[h][e] != e {
                                continue;
                            }
                            let next = (self.restrict[h][e], self.graph.edge(e).source);
                            if seen[next.0][next.1] {
                                continue;
                            }
                            seen[next.0][next.1] = true;
                            parent.insert(next, ((h, w), e));
                            if self.group.is_identity(next.0) {
                                let mut edges = vec![e];
                                let mut cur = (h, w);
                                while cur != (g, v) {
                                    let (prev, pe) = parent[&cur];
                                    edges.push(pe);
                                    cur = prev;
                                }
                                edges.reverse();
                                let path = self.graph.path_from_composable(edges, v);
                                return PseudoFreeness::Counterexample { element: g, path };
                            }
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
        PseudoFreeness::PseudoFree
    }

    /// Whether `h` fixes every path (finite or infinite) with range `v`.
    pub fn fixes_everything_from(&self, h: GroupElem, v: VertexId) -> bool {
        let mut seen = vec![vec![false; self.graph.vertex_count()]; self.group.order()];
        let mut queue = VecDeque::from([(h, v)]);
        seen[h][v] = true;
        while let Some((h, w)) = queue.pop_front() {
            for c in 0..self.graph.k() {
                for &e in self.graph.edges_into(w, c) {
                    if self.act[h][e] != e {
                        return false;
                    }
                    let next = (self.restrict[h][e], self.graph.edge(e).source);
                    if !seen[next.0][next.1] {
                        seen[next.0][next.1] = true;
                        queue.push_back(next);
                    }
                }
            }
        }
        true
    }

    /// The action restricted to the sub-k-graph on `keep`.
    ///
    /// Edges of the restriction are a subset of the original edges and the
    /// action fixes vertices, so the edge tables restrict directly.
    pub(crate) fn restrict_to(
        &self,
        keep: &[bool],
    ) -> Result<(SelfSimilarGraph, Vec<VertexId>, Vec<EdgeId>), crate::kgraph::KGraphError> {
        let (graph, vertex_map, edge_map) = self.graph.restrict(keep)?;
        let mut local = vec![usize::MAX; self.graph.edge_count()];
        for (i, &e) in edge_map.iter().enumerate() {
            local[e] = i;
        }
        let act = self
            .group
            .elements()
            .map(|g| edge_map.iter().map(|&e| local[self.act[g][e]]).collect())
            .collect();
        let restrict = self
            .group
            .elements()
            .map(|g| edge_map.iter().map(|&e| self.restrict[g][e]).collect())
            .collect();
        let ss = SelfSimilarGraph { graph, group: self.group.clone(), act, restrict };
        Ok((ss, vertex_map, edge_map))
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::kgraph::fixtures::*;
    use crate::kgraph::Degree;

    fn z2() -> FiniteGroup {
        FiniteGroup::new(vec!["1".into(), "g".into()], vec![vec![0, 1], vec![1, 0]], 0).unwrap()
    }

    #[test]
    fn trivial_group_is_valid_everywhere() {
        for g in [g1(), g2(), g3(), g4(), g5(), cube3()] {
            let m = g.edge_count();
            validate_action(g, FiniteGroup::trivial(), vec![(0..m).collect()], vec![vec![0; m]]).unwrap();
        }
    }

    /// Independent axiom oracle over every (h, edge) pair and group pair.
    fn axiom_oracle(ss: &SelfSimilarGraph) -> bool {
        let g = ss.group();
        g.elements().all(|a| {
            g.elements().all(|b| {
                (0..ss.graph().edge_count()).all(|e| {
                    g.mul(ss.restrict_edge(a, ss.act_edge(b, e)), ss.restrict_edge(b, e))
                        == ss.restrict_edge(g.mul(a, b), e)
                })
            })
        })
    }

    #[test]
    fn g4_swap_is_valid() {
        let ss = g4_action();
        assert!(axiom_oracle(&ss));
    }

    #[test]
    fn cocycle_violation_is_axiom_seven() {
        let err = validate_action(g4(), z2(), vec![vec![0, 1], vec![1, 0]], vec![vec![0, 0], vec![0, 1]]).unwrap_err();
        assert!(matches!(err, ActionError::AxiomViolated { axiom: 7, .. }), "{err}");
    }

    #[test]
    fn endpoint_moving_action_rejected() {
        // G5: a and b have the same colour but different endpoints.
        let err = validate_action(g5(), z2(), vec![vec![0, 1, 2], vec![1, 0, 2]], vec![vec![0; 3], vec![1; 3]])
            .unwrap_err();
        assert!(matches!(err, ActionError::AxiomViolated { axiom: 2, .. }));
    }

    #[test]
    fn identity_must_restrict_trivially() {
        let err = validate_action(g1(), z2(), vec![vec![0], vec![0]], vec![vec![1], vec![1]]).unwrap_err();
        assert!(matches!(err, ActionError::AxiomViolated { axiom: 6, .. }));
    }

    /// One vertex, colour-1 loops a, b and a colour-2 loop c, all squares trivial.
    fn two_loops_and_c() -> KGraph {
        use crate::kgraph::{validate_kgraph, Skeleton, Square};
        let sk = Skeleton {
            k: 2,
            vertices: vec!["v".into()],
            edges: vec![edge("a", 0, 0, 0), edge("b", 0, 0, 0), edge("c", 1, 0, 0)],
        };
        let squares = vec![
            Square { first: 0, second: 2, first_out: 2, second_out: 0 },
            Square { first: 1, second: 2, first_out: 2, second_out: 1 },
        ];
        validate_kgraph(sk, squares).unwrap()
    }

    #[test]
    fn square_incompatibility_is_axiom_three() {
        // g swaps a, b with g|_a = g|_b = g, fixes c with g|_c = 1:
        // g.(a c) = b c but g.(c a) = c a = a c.
        let err = validate_action(two_loops_and_c(), z2(), vec![vec![0, 1, 2], vec![1, 0, 2]], vec![
            vec![0, 0, 0],
            vec![1, 1, 0],
        ])
        .unwrap_err();
        assert!(matches!(err, ActionError::AxiomViolated { axiom: 3, .. }), "{err}");
        // With g|_c = g both sides agree.
        validate_action(two_loops_and_c(), z2(), vec![vec![0, 1, 2], vec![1, 0, 2]], vec![
            vec![0, 0, 0],
            vec![1, 1, 1],
        ])
        .unwrap();
    }

    #[test]
    fn act_on_path_g4() {
        let ss = g4_action();
        let g = ss.graph();
        let ab = g.path_from_edges(&[0, 1]).unwrap();
        let image = ss.act_path(1, &ab);
        assert_eq!(g.path_name(&image), "b a");
        assert_eq!(ss.restrict_path(1, &ab), 1);
        assert_eq!(ss.act_path(0, &ab), ab);
        assert_eq!(ss.restrict_path(0, &ab), 0);
    }

    #[test]
    fn equivariance_and_cocycle_on_paths() {
        let ss = g4_action();
        let gr = ss.graph();
        let grp = ss.group();
        for mu in gr.all_paths_up_to(&Degree::from_vec(vec![4])) {
            for a in grp.elements() {
                let img = ss.act_path(a, &mu);
                assert_eq!(img.degree(), mu.degree());
                assert_eq!((img.range(), img.source()), (mu.range(), mu.source()));
                for b in grp.elements() {
                    assert_eq!(
                        ss.restrict_path(grp.mul(a, b), &mu),
                        grp.mul(ss.restrict_path(a, &ss.act_path(b, &mu)), ss.restrict_path(b, &mu))
                    );
                }
            }
        }
    }

    #[test]
    fn pseudo_freeness() {
        assert!(trivial(g2()).pseudo_free_check().is_pseudo_free());
        assert!(g4_action().pseudo_free_check().is_pseudo_free());
        // one loop, g fixes it and restricts to 1
        let ss = validate_action(g1(), z2(), vec![vec![0], vec![0]], vec![vec![0], vec![0]]).unwrap();
        match ss.pseudo_free_check() {
            PseudoFreeness::Counterexample { element, path } => {
                assert_eq!(element, 1);
                assert_eq!(path.edges(), &[0]);
            }
            other => panic!("expected counterexample, got {other:?}"),
        }
    }

    #[test]
    fn pseudo_free_matches_brute_force() {
        // Oracle: all paths up to length |G| * |V| (+1).
        for ss in [g4_action(), g4_flip_once()] {
            let brute = ss.graph().all_paths_up_to(&Degree::from_vec(vec![3])).iter().all(|mu| {
                ss.group().elements().all(|g| {
                    mu.is_vertex()
                        || ss.group().is_identity(g)
                        || !(ss.act_path(g, mu) == *mu && ss.group().is_identity(ss.restrict_path(g, mu)))
                })
            });
            assert_eq!(brute, ss.pseudo_free_check().is_pseudo_free());
        }
    }

    #[test]
    fn act_infinite_matches_finite_segments() {
        let ss = g4_action();
        let g = ss.graph();
        let ab = g.path_from_edges(&[0, 0, 1]).unwrap();
        let x = g.infinite_path(g.edge_path(1), ab).unwrap();
        for h in ss.group().elements() {
            let y = ss.act_infinite(h, &x);
            for n in 0..12 {
                let deg = Degree::from_vec(vec![n]);
                assert_eq!(g.initial_segment(&y, &deg), ss.act_path(h, &g.initial_segment(&x, &deg)));
            }
        }
    }
}

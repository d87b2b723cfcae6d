use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::action::SelfSimilarGraph;
use super::group::GroupElem;
use crate::kgraph::{Degree, Path, VertexId};
use crate::par;

/// A triple `(first, element, second)` with `s(first) = element . s(second)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclineTriple {
    pub first: Path,
    pub element: GroupElem,
    pub second: Path,
}

impl CyclineTriple {
    /// `d(first) - d(second)`.
    pub fn degree_difference(&self) -> Vec<i64> {
        self.first.degree().difference(self.second.degree())
    }
}

/// Certified cycline triples with both degrees at most `bound`. The list is
/// complete up to that bound and says nothing beyond it.
#[derive(Clone, Debug)]
pub struct CyclineEnumeration {
    pub bound: Degree,
    pub triples: Vec<CyclineTriple>,
}

impl CyclineEnumeration {
    /// Distinct nonzero degree differences, sorted.
    pub fn nonzero_differences(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = self
            .triples
            .iter()
            .map(CyclineTriple::degree_difference)
            .filter(|d| d.iter().any(|&c| c != 0))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TriplesVerdict {
    /// No cycline triple with a non-identity element exists with degrees up to `bound`.
    PassUpToBound { bound: Degree },
    Fail { witness: String },
}

impl TriplesVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, TriplesVerdict::PassUpToBound { .. })
    }
}

impl SelfSimilarGraph {
    /// Decides whether `mu (g . x) = nu x` for every infinite path `x` with
    /// range `s(nu)`.
    ///
    /// After cancelling the common `(0, d(mu) ^ d(nu))` segment, obligations
    /// `(a, h, b)` ("`a (h . x) = b x` for all `x`") are expanded by every
    /// `lambda` of degree `(1,..,1)` at `s(b)`: the `(0, (1,..,1))` segments of
    /// `a (h . lambda)` and `b lambda` must agree, and the residuals form the
    /// next obligation with `h|_lambda`. Residual degrees never change, so the
    /// obligation space is finite; the answer is yes iff no reachable
    /// obligation fails its segment comparison.
    pub fn cycline_check(&self, mu: &Path, g: GroupElem, nu: &Path) -> bool {
        let graph = self.graph();
        if mu.source() != nu.source() || mu.range() != nu.range() {
            return false;
        }
        let common = mu.degree().meet(nu.degree());
        let (mu_head, a) = graph.factor(mu, &common).expect("meet is below both degrees");
        let (nu_head, b) = graph.factor(nu, &common).expect("meet is below both degrees");
        if mu_head != nu_head {
            return false;
        }

        let step = Degree::ones(graph.k());
        let one = self.group().identity();
        let mut seen: HashSet<(Path, GroupElem, Path)> = HashSet::new();
        let mut stack = vec![(a, g, b)];
        while let Some((a, h, b)) = stack.pop() {
            if h == one && a == b {
                continue;
            }
            if !seen.insert((a.clone(), h, b.clone())) {
                continue;
            }
            for lambda in graph.paths_of_degree(b.source(), &step) {
                let left = graph.concat(&a, &self.act_path(h, &lambda));
                let right = graph.concat(&b, &lambda);
                let (l_head, l_rest) = graph.factor(&left, &step).expect("degree at least (1,..,1)");
                let (r_head, r_rest) = graph.factor(&right, &step).expect("degree at least (1,..,1)");
                if l_head != r_head {
                    return false;
                }
                stack.push((l_rest, self.restrict_path(h, &lambda), r_rest));
            }
        }
        true
    }

    /// Paths of degree at most `bound`, bucketed by `(range, source)`.
    fn paths_by_ends(&self, bound: &Degree) -> Vec<Vec<Path>> {
        let mut buckets: BTreeMap<(VertexId, VertexId), Vec<Path>> = BTreeMap::new();
        for p in self.graph().all_paths_up_to(bound) {
            buckets.entry((p.range(), p.source())).or_default().push(p);
        }
        buckets.into_values().collect()
    }

    fn enumerate(&self, bound: &Degree, elements: &[GroupElem]) -> Vec<CyclineTriple> {
        let buckets = self.paths_by_ends(bound);
        let candidates: Vec<(usize, usize, usize, GroupElem)> = buckets
            .iter()
            .enumerate()
            .flat_map(|(bi, bucket)| {
                (0..bucket.len()).flat_map(move |i| {
                    (0..bucket.len()).flat_map(move |j| elements.iter().map(move |&g| (bi, i, j, g)))
                })
            })
            .collect();
        let mut out = par::filter_map(&candidates, |&(bi, i, j, g)| {
            let (mu, nu) = (&buckets[bi][i], &buckets[bi][j]);
            self.cycline_check(mu, g, nu)
                .then(|| CyclineTriple { first: mu.clone(), element: g, second: nu.clone() })
        });
        out.sort();
        out
    }

    /// All cycline triples with `d(mu), d(nu) <= bound`.
    pub fn cycline_triples_up_to(&self, bound: &Degree) -> CyclineEnumeration {
        let elements: Vec<GroupElem> = self.group().elements().collect();
        CyclineEnumeration { bound: bound.clone(), triples: self.enumerate(bound, &elements) }
    }

    /// All cycline pairs (identity element) with `d(mu), d(nu) <= bound`.
    pub fn cycline_pairs_up_to(&self, bound: &Degree) -> CyclineEnumeration {
        CyclineEnumeration { bound: bound.clone(), triples: self.enumerate(bound, &[self.group().identity()]) }
    }

    /// Searches for a cycline triple that is not a pair, up to `bound`.
    pub fn verify_triples_are_pairs(&self, bound: &Degree) -> TriplesVerdict {
        let others: Vec<GroupElem> = self.group().elements().filter(|&g| !self.group().is_identity(g)).collect();
        match self.enumerate(bound, &others).into_iter().next() {
            None => TriplesVerdict::PassUpToBound { bound: bound.clone() },
            Some(t) => TriplesVerdict::Fail {
                witness: format!(
                    "({}, {}, {})",
                    self.graph().path_name(&t.first),
                    self.group().name(t.element),
                    self.graph().path_name(&t.second)
                ),
            },
        }
    }
}

/// Test-only brute force: compare `(mu (g . lambda))(0, n)` with
/// `(nu lambda)(0, n)` for every `lambda` of degree `n = depth * (1,..,1)`.
#[cfg(test)]
pub(crate) fn brute_force_cycline(ss: &SelfSimilarGraph, mu: &Path, g: GroupElem, nu: &Path, depth: u32) -> bool {
    let graph = ss.graph();
    if mu.source() != nu.source() || mu.range() != nu.range() {
        return false;
    }
    let n = Degree::uniform(graph.k(), depth);
    graph.paths_of_degree(nu.source(), &n).iter().all(|lambda| {
        let left = graph.concat(mu, &ss.act_path(g, lambda));
        let right = graph.concat(nu, lambda);
        graph.factor(&left, &n).unwrap().0 == graph.factor(&right, &n).unwrap().0
    })
}

#[cfg(test)]
mod tests {
    use super::super::action::fixtures::*;
    use super::*;
    use crate::kgraph::fixtures::*;

    fn d(v: &[u32]) -> Degree {
        Degree::from_vec(v.to_vec())
    }

    #[test]
    fn vertex_triple_is_cycline() {
        let ss = trivial(g2());
        let v = ss.graph().vertex_path(0);
        assert!(ss.cycline_check(&v, 0, &v));
    }

    #[test]
    fn single_loop_pairs() {
        let ss = trivial(g1());
        let g = ss.graph();
        let e = g.edge_path(0);
        let v = g.vertex_path(0);
        assert!(ss.cycline_check(&e, 0, &v));
        assert!(brute_force_cycline(&ss, &e, 0, &v, 6));
        let pairs = ss.cycline_pairs_up_to(&d(&[2]));
        assert_eq!(pairs.triples.len(), 9);
        assert_eq!(pairs.nonzero_differences(), vec![vec![-2], vec![-1], vec![1], vec![2]]);
    }

    #[test]
    fn g4_swap_has_no_twisted_triples() {
        let ss = g4_action();
        let g = ss.graph();
        let a = g.edge_path(0);
        let b = g.edge_path(1);
        assert!(!ss.cycline_check(&a, 1, &b));
        assert!(!brute_force_cycline(&ss, &a, 1, &b, 4));
        let all = ss.cycline_triples_up_to(&d(&[3]));
        assert!(all.triples.iter().all(|t| t.element == 0 && t.first == t.second));
        assert_eq!(all.triples.len(), 15);
        assert!(ss.verify_triples_are_pairs(&d(&[4])).passed());
    }

    #[test]
    fn flip_once_variant_decided_by_oracle() {
        let ss = g4_flip_once();
        let g = ss.graph();
        let a = g.edge_path(0);
        let b = g.edge_path(1);
        let exact = ss.cycline_check(&a, 1, &b);
        assert_eq!(exact, brute_force_cycline(&ss, &a, 1, &b, 6));
        assert!(!exact);
        let verdict = ss.verify_triples_are_pairs(&d(&[3]));
        let brute_has_twisted = g.all_paths_up_to(&d(&[3])).iter().any(|mu| {
            g.all_paths_up_to(&d(&[3])).iter().any(|nu| brute_force_cycline(&ss, mu, 1, nu, 6))
        });
        assert_eq!(verdict.passed(), !brute_has_twisted);
    }

    #[test]
    fn g2_pairs() {
        let ss = trivial(g2());
        let pairs = ss.cycline_pairs_up_to(&d(&[2]));
        let names: Vec<(String, String)> = pairs
            .triples
            .iter()
            .map(|t| (ss.graph().path_name(&t.first), ss.graph().path_name(&t.second)))
            .collect();
        assert!(names.contains(&("e".into(), "w".into())));
        assert!(names.contains(&("f e".into(), "f".into())));
        // f is not paired with the vertex v (sources differ)
        assert!(!names.contains(&("f".into(), "v".into())));
    }

    #[test]
    fn reflexive_and_symmetric() {
        for ss in [g4_action(), g4_flip_once(), trivial(g5()), trivial(g3())] {
            let bound = Degree::uniform(ss.graph().k(), 2);
            let paths = ss.graph().all_paths_up_to(&bound);
            for mu in &paths {
                assert!(ss.cycline_check(mu, ss.group().identity(), mu));
            }
            for t in ss.cycline_triples_up_to(&bound).triples {
                let inv = ss.group().inv(t.element);
                assert!(ss.cycline_check(&t.second, inv, &t.first));
            }
        }
    }

    #[test]
    fn torus_graph_pairs_span_everything() {
        let ss = trivial(g3());
        let diffs = ss.cycline_pairs_up_to(&d(&[1, 1])).nonzero_differences();
        assert!(diffs.contains(&vec![1, 0]));
        assert!(diffs.contains(&vec![0, 1]));
    }

    #[test]
    fn exhaustive_agreement_with_brute_force_small() {
        for ss in [g4_action(), g4_flip_once(), trivial(g5()), trivial(g2())] {
            let paths = ss.graph().all_paths_up_to(&d(&[3]));
            for mu in &paths {
                for nu in paths.iter().filter(|nu| nu.source() == mu.source()) {
                    for g in ss.group().elements() {
                        assert_eq!(
                            ss.cycline_check(mu, g, nu),
                            brute_force_cycline(&ss, mu, g, nu, 8),
                            "{} {} {}",
                            ss.graph().path_name(mu),
                            g,
                            ss.graph().path_name(nu)
                        );
                    }
                }
            }
        }
    }
}

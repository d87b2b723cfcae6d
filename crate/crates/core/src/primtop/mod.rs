//! Strata of the primitive ideal space, hypothesis checks and closure queries.

mod closure;
mod order;
mod presentation;

use serde::Serialize;
use thiserror::Error;

use crate::kgraph::{Degree, KGraph, VertexId};
use crate::perdual::{Angle, CharacterError, CharacterSet, RationalCharacter};
use crate::selfsim::{PseudoFreeness, SelfSimilarGraph, TriplesVerdict};
use crate::tails::{analyze_tail, maximal_tails, strongly_connected, HtSet, TailAnalysis, TailClass, TailError};
use crate::{par, Bounds};

pub use closure::{closure_membership, ClosureAnswer, ClosureQuery, QueryError, TailKind, TailSpec};
pub use order::{EdgeLabel, PreorderEdge, PreorderNode, SpecializationPreorder};
pub use presentation::{CyclineRelation, IdealPresentation};

pub const IDEAL_GENERATION_CAVEAT: &str = "ideal generation hypothesis is assumed, not verified, for k >= 2";

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PrimError {
    #[error(transparent)]
    Tail(#[from] TailError),
    #[error("hypotheses not verified: {}", .0.join("; "))]
    HypothesisUnverified(Vec<String>),
    #[error("{0:?} is not a maximal tail of this graph")]
    UnknownTail(Vec<String>),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Character(#[from] CharacterError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    PassUpToBound { bound: Degree },
    Fail { witness: String },
    Auto,
    Assumed,
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub k: usize,
    pub bound: Degree,
    pub vertex_fixing: Verdict,
    pub pseudo_free: Verdict,
    pub triples_are_pairs: Verdict,
    pub strongly_connected_h_t: Verdict,
    pub ideal_generation: Verdict,
    pub caveats: Vec<String>,
}

impl HypothesisReport {
    /// The failures that stop the strata from describing the primitive ideal space.
    pub fn blocking(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, v) in [("pseudo_free", &self.pseudo_free), ("triples_are_pairs", &self.triples_are_pairs)] {
            if let Verdict::Fail { witness } = v {
                out.push(format!("{name}: {witness}"));
            }
        }
        out
    }
}

/// A description of the primitive ideal space: one stratum per maximal tail.
#[derive(Clone, Debug)]
pub struct PrimSpace {
    action: SelfSimilarGraph,
    bounds: Bounds,
    strata: Vec<TailAnalysis>,
    hypotheses: HypothesisReport,
}

/// The serialisable face of a stratum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumSummary {
    pub index: usize,
    pub tail: Vec<String>,
    pub classification: TailClass,
    pub per_basis: Vec<Vec<i64>>,
    pub dual_rank: usize,
    pub invariants: Vec<i64>,
    pub per_bound: Option<Degree>,
    pub h_t: Vec<String>,
    pub h_t_status: &'static str,
}

/// A closure query in terms of vertex sets and raw angle vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrimQuery {
    pub tail: Vec<VertexId>,
    /// `None` means the trivial character.
    pub character: Option<Vec<Angle>>,
    pub gamma: Vec<Vec<VertexId>>,
    pub tau: Vec<(Vec<VertexId>, SetSpec)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetSpec {
    Full,
    Finite(Vec<Vec<Angle>>),
    Subgroup(Vec<Vec<Angle>>),
}

impl PrimSpace {
    pub fn build(ss: &SelfSimilarGraph, bounds: &Bounds) -> Result<PrimSpace, PrimError> {
        let tails = maximal_tails(ss.graph(), bounds.max_vertices)?;
        let strata = par::map(&tails, |t| analyze_tail(ss, t, bounds)).into_iter().collect::<Result<Vec<_>, _>>()?;
        let hypotheses = hypotheses_for(ss, bounds, &strata);
        Ok(PrimSpace { action: ss.clone(), bounds: bounds.clone(), strata, hypotheses })
    }

    pub fn graph(&self) -> &KGraph {
        self.action.graph()
    }

    pub fn action(&self) -> &SelfSimilarGraph {
        &self.action
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn strata(&self) -> &[TailAnalysis] {
        &self.strata
    }

    pub fn hypotheses(&self) -> &HypothesisReport {
        &self.hypotheses
    }

    pub fn stratum_of(&self, tail: &[VertexId]) -> Result<usize, PrimError> {
        let mut t = tail.to_vec();
        t.sort_unstable();
        t.dedup();
        self.strata
            .iter()
            .position(|s| s.tail() == t.as_slice())
            .ok_or_else(|| PrimError::UnknownTail(self.names(&t)))
    }

    fn names(&self, set: &[VertexId]) -> Vec<String> {
        set.iter().map(|&v| self.graph().vertex_name(v).to_string()).collect()
    }

    pub fn summary(&self, index: usize) -> StratumSummary {
        let s = &self.strata[index];
        StratumSummary {
            index,
            tail: self.names(s.tail()),
            classification: s.class.clone(),
            per_basis: s.per.basis().to_vec(),
            dual_rank: s.per.rank(),
            invariants: s.per.invariants().to_vec(),
            per_bound: s.per_bound.clone(),
            h_t: self.names(s.h_t.vertices()),
            h_t_status: match s.h_t {
                HtSet::Exact { .. } => "exact",
                HtSet::UpToBound { .. } => "up_to_bound",
                HtSet::Inconclusive { .. } => "inconclusive",
            },
        }
    }

    pub fn summaries(&self) -> Vec<StratumSummary> {
        (0..self.strata.len()).map(|i| self.summary(i)).collect()
    }

    fn spec(&self, index: usize) -> TailSpec {
        let s = &self.strata[index];
        let kind = if s.class.is_tau() { TailKind::Tau } else { TailKind::Gamma };
        TailSpec::new(s.tail().to_vec(), kind)
    }

    fn character(&self, index: usize, angles: Option<&Vec<Angle>>) -> Result<RationalCharacter, PrimError> {
        let per = &self.strata[index].per;
        Ok(match angles {
            None => per.trivial_character(),
            Some(a) => per.character(a.clone())?,
        })
    }

    /// Caveats every topology answer on this space carries.
    pub fn caveats(&self) -> Vec<String> {
        let mut out = self.hypotheses.caveats.clone();
        for b in self.hypotheses.blocking() {
            out.push(format!("hypothesis failed, answer not backed by the classification: {b}"));
        }
        out
    }

    pub fn closure(&self, q: &PrimQuery) -> Result<ClosureAnswer, PrimError> {
        let i0 = self.stratum_of(&q.tail)?;
        let character = self.character(i0, q.character.as_ref())?;
        let mut involved = vec![i0];
        let mut gamma = Vec::new();
        for t in &q.gamma {
            let i = self.stratum_of(t)?;
            involved.push(i);
            gamma.push(self.spec(i));
        }
        let mut tau = Vec::new();
        for (t, set) in &q.tau {
            let i = self.stratum_of(t)?;
            involved.push(i);
            let chars = |list: &Vec<Vec<Angle>>| -> Result<Vec<RationalCharacter>, PrimError> {
                list.iter().map(|a| self.character(i, Some(a))).collect()
            };
            let d = match set {
                SetSpec::Full => CharacterSet::Full,
                SetSpec::Finite(list) => CharacterSet::Finite(chars(list)?),
                SetSpec::Subgroup(list) => CharacterSet::Subgroup(chars(list)?),
            };
            tau.push((self.spec(i), d));
        }
        let query = ClosureQuery {
            tail: self.spec(i0),
            character,
            lattice: self.strata[i0].per.clone(),
            gamma,
            tau,
        };
        let mut answer = closure_membership(&query)?;
        answer.caveats = self.caveats();
        involved.sort_unstable();
        involved.dedup();
        for i in involved {
            if let TailClass::GammaUpToBound { bound } = &self.strata[i].class {
                answer.caveats.push(format!("tail {:?} is gamma only up to bound {bound}", self.names(self.strata[i].tail())));
            }
        }
        Ok(answer)
    }
}

/// Strata, failing if pseudo-freeness or the triples condition fails.
pub fn enumerate_prim(ss: &SelfSimilarGraph, bounds: &Bounds) -> Result<PrimSpace, PrimError> {
    let space = PrimSpace::build(ss, bounds)?;
    let blocking = space.hypotheses.blocking();
    if blocking.is_empty() {
        Ok(space)
    } else {
        Err(PrimError::HypothesisUnverified(blocking))
    }
}

pub fn check_hypotheses(ss: &SelfSimilarGraph, bounds: &Bounds) -> Result<HypothesisReport, PrimError> {
    Ok(PrimSpace::build(ss, bounds)?.hypotheses)
}

fn hypotheses_for(ss: &SelfSimilarGraph, bounds: &Bounds, strata: &[TailAnalysis]) -> HypothesisReport {
    let graph = ss.graph();
    let k = graph.k();
    let bound = bounds.degree.clone();
    let pseudo_free = match ss.pseudo_free_check() {
        PseudoFreeness::PseudoFree => Verdict::Pass,
        PseudoFreeness::Counterexample { element, path } => Verdict::Fail {
            witness: format!("{} fixes {} with trivial restriction", ss.group().name(element), graph.path_name(&path)),
        },
    };
    let triples = par::map(strata, |s| s.graph.action.verify_triples_are_pairs(&bound));
    let triples_are_pairs = match triples.iter().zip(strata).find(|(v, _)| !v.passed()) {
        Some((TriplesVerdict::Fail { witness }, s)) => Verdict::Fail {
            witness: format!("tail {:?}: {witness}", s.tail_names(graph)),
        },
        _ => Verdict::PassUpToBound { bound: bound.clone() },
    };
    let (strongly_connected_h_t, ideal_generation, caveats) = if k == 1 {
        (Verdict::Auto, Verdict::Auto, Vec::new())
    } else {
        let mut sc = Verdict::Pass;
        for s in strata.iter().filter(|s| s.class.is_tau()) {
            match &s.h_t {
                HtSet::Inconclusive { bound } => {
                    sc = Verdict::Inconclusive {
                        reason: format!("H_T of tail {:?} is empty up to bound {bound}", s.tail_names(graph)),
                    };
                    break;
                }
                h => {
                    if !strongly_connected(graph, h.vertices()) {
                        sc = Verdict::Fail { witness: format!("tail {:?}", s.tail_names(graph)) };
                        break;
                    }
                    if let HtSet::UpToBound { bound, .. } = h {
                        sc = Verdict::PassUpToBound { bound: bound.clone() };
                    }
                }
            }
        }
        (sc, Verdict::Assumed, vec![IDEAL_GENERATION_CAVEAT.to_string()])
    };
    HypothesisReport {
        k,
        bound,
        vertex_fixing: Verdict::Pass,
        pseudo_free,
        triples_are_pairs,
        strongly_connected_h_t,
        ideal_generation,
        caveats,
    }
}

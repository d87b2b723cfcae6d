use serde::Serialize;
use thiserror::Error;

use crate::kgraph::VertexId;
use crate::perdual::{CharacterError, CharacterSet, PerLattice, RationalCharacter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailKind {
    Gamma,
    Tau,
}

/// A maximal tail as the closure oracle sees it: a vertex set and its class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailSpec {
    pub vertices: Vec<VertexId>,
    pub kind: TailKind,
}

impl TailSpec {
    pub fn new(mut vertices: Vec<VertexId>, kind: TailKind) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        TailSpec { vertices, kind }
    }

    fn subset_of(&self, other: &TailSpec) -> bool {
        self.vertices.iter().all(|v| other.vertices.contains(v))
    }
}

/// Is `(tail, character)` in the closure of `{(S, 1) : S in gamma} ∪ {(T, f) : T in tau, f in D(T)}`?
#[derive(Clone, Debug)]
pub struct ClosureQuery {
    pub tail: TailSpec,
    pub character: RationalCharacter,
    /// The periodicity lattice of `tail`, on which `character` and the `D(tail)` live.
    pub lattice: PerLattice,
    pub gamma: Vec<TailSpec>,
    pub tau: Vec<(TailSpec, CharacterSet)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureAnswer {
    pub verdict: bool,
    pub case: String,
    /// Tails the verdict rests on.
    pub witness: Vec<Vec<VertexId>>,
    pub caveats: Vec<String>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error(transparent)]
    Character(#[from] CharacterError),
}

fn covering(t0: &TailSpec, set: &[&TailSpec]) -> Option<Vec<Vec<VertexId>>> {
    let covered = t0.vertices.iter().all(|v| set.iter().any(|s| s.vertices.contains(v)));
    covered.then(|| set.iter().filter(|s| s.vertices.iter().any(|v| t0.vertices.contains(v))).map(|s| s.vertices.clone()).collect())
}

/// Decides closure membership case by case. A query against both a gamma
/// and a tau family is the disjunction of the two pure queries.
pub fn closure_membership(q: &ClosureQuery) -> Result<ClosureAnswer, QueryError> {
    if q.gamma.is_empty() && q.tau.is_empty() {
        return Err(QueryError::InvalidQuery("empty closure set".into()));
    }
    if let Some(s) = q.gamma.iter().find(|s| s.kind != TailKind::Gamma) {
        return Err(QueryError::InvalidQuery(format!("gamma family contains tau tail {:?}", s.vertices)));
    }
    if let Some((s, _)) = q.tau.iter().find(|(s, _)| s.kind != TailKind::Tau) {
        return Err(QueryError::InvalidQuery(format!("tau family contains gamma tail {:?}", s.vertices)));
    }
    if q.tail.vertices.is_empty() {
        return Err(QueryError::InvalidQuery("empty query tail".into()));
    }
    if q.character.angles().len() != q.lattice.rank() {
        return Err(QueryError::InvalidQuery(format!(
            "character {} does not match lattice rank {}",
            q.character,
            q.lattice.rank()
        )));
    }

    let mut labels = Vec::new();
    if !q.gamma.is_empty() {
        let family: Vec<&TailSpec> = q.gamma.iter().collect();
        let case = if q.tail.kind == TailKind::Gamma { "1" } else { "2" };
        if let Some(witness) = covering(&q.tail, &family) {
            return Ok(answer(true, case, witness));
        }
        labels.push(case);
    }
    if !q.tau.is_empty() {
        let family: Vec<&TailSpec> = q.tau.iter().map(|(s, _)| s).collect();
        match q.tail.kind {
            TailKind::Gamma => {
                if let Some(witness) = covering(&q.tail, &family) {
                    return Ok(answer(true, "3", witness));
                }
                labels.push("3");
            }
            TailKind::Tau => {
                if let Some(t) = family.iter().find(|t| t.vertices != q.tail.vertices && q.tail.subset_of(t)) {
                    return Ok(answer(true, "4a", vec![t.vertices.clone()]));
                }
                if let Some((t, d)) = q.tau.iter().find(|(t, _)| t.vertices == q.tail.vertices) {
                    let inside = q.lattice.closure_contains(d, &q.character)?;
                    if inside {
                        return Ok(answer(true, "4b", vec![t.vertices.clone()]));
                    }
                }
                labels.push("4b");
            }
        }
    }
    Ok(answer(false, &labels.join("+"), Vec::new()))
}

fn answer(verdict: bool, case: &str, witness: Vec<Vec<VertexId>>) -> ClosureAnswer {
    ClosureAnswer { verdict, case: case.to_string(), witness, caveats: Vec::new() }
}

//! Exact finite truncations of the irreducible representations attached to
//! points of the primitive ideal space.

mod matrix;
mod orbit;

use serde::Serialize;
use thiserror::Error;

use crate::kgraph::{CofinalError, Degree, InfinitePath, Path, VertexId};
use crate::perdual::{CharacterError, ExtendedCharacter, RationalCharacter};
use crate::primtop::{IdealPresentation, PrimSpace};
use crate::selfsim::{GroupElem, SelfSimilarGraph};
use crate::par;

pub use matrix::{Entry, ExactMatrix, Outside, Vector};
pub use orbit::{build_orbit, OrbitBasis, OrbitElement};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ReprError {
    #[error("orbit truncation exceeded {0} elements")]
    BudgetExceeded(usize),
    #[error(transparent)]
    Cofinal(#[from] CofinalError),
    #[error(transparent)]
    Character(#[from] CharacterError),
}

/// Outcome of checking a family of relations on a truncation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub basis_size: usize,
    pub interior: usize,
    /// Relation instances evaluated on interior vectors.
    pub checked: usize,
    /// Instances skipped because some step left the truncation.
    pub boundary_excluded: usize,
    pub violations: Vec<String>,
}

impl RelationReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, name: impl FnOnce() -> String, lhs: Result<Vector, Outside>, rhs: Result<Vector, Outside>) {
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => {
                self.checked += 1;
                if l != r {
                    self.violations.push(name());
                }
            }
            _ => self.boundary_excluded += 1,
        }
    }
}

/// `pi_{f, x}` on the truncated orbit of `x`:
/// `s_mu delta_y = f(d(mu)) delta_{mu y}` and `u_g delta_y = delta_{g y}`.
pub struct Representation<'a> {
    action: &'a SelfSimilarGraph,
    character: ExtendedCharacter,
    basis: OrbitBasis,
}

fn degree_vec(d: &Degree) -> Vec<i64> {
    d.as_slice().iter().map(|&x| i64::from(x)).collect()
}

impl<'a> Representation<'a> {
    pub fn new(
        action: &'a SelfSimilarGraph,
        x: &InfinitePath,
        character: ExtendedCharacter,
        depth: usize,
        budget: usize,
    ) -> Result<Self, ReprError> {
        let basis = build_orbit(action, x, depth, budget)?;
        Ok(Representation { action, character, basis })
    }

    /// The representation for the point `(T, f)` of a stratum, on the orbit
    /// of a cofinal path of `ΛT`.
    pub fn for_point(space: &'a PrimSpace, stratum: usize, f: &RationalCharacter, depth: usize) -> Result<Self, ReprError> {
        let s = &space.strata()[stratum];
        let local = s.graph.action.graph().cofinal_infinite_path()?;
        let x = s.graph.lift_infinite(space.graph(), &local);
        let character = s.per.extend(f)?;
        Representation::new(space.action(), &x, character, depth, space.bounds().orbit_budget)
    }

    pub fn basis(&self) -> &OrbitBasis {
        &self.basis
    }

    pub fn character(&self) -> &ExtendedCharacter {
        &self.character
    }

    fn s_entry(&self, mu: &Path, col: usize) -> Entry {
        let graph = self.action.graph();
        let y = &self.basis.elements[col].path;
        if mu.source() != y.range() {
            return Entry::Zero;
        }
        let z = graph.prepend(mu, y).expect("mu ends at y(0,0)");
        match self.basis.index_of(self.action, &z) {
            Some(row) => Entry::To { row, angle: self.character.evaluate(&degree_vec(mu.degree())) },
            None => Entry::Outside,
        }
    }

    fn s_adjoint_entry(&self, mu: &Path, col: usize) -> Entry {
        let graph = self.action.graph();
        let y = &self.basis.elements[col].path;
        if y.range() != mu.range() || graph.initial_segment(y, mu.degree()) != *mu {
            return Entry::Zero;
        }
        let z = graph.shift(y, mu.degree());
        match self.basis.index_of(self.action, &z) {
            Some(row) => Entry::To { row, angle: -self.character.evaluate(&degree_vec(mu.degree())) },
            None => Entry::Outside,
        }
    }

    fn u_entry(&self, g: GroupElem, col: usize) -> Entry {
        let z = self.action.act_infinite(g, &self.basis.elements[col].path);
        match self.basis.index_of(self.action, &z) {
            Some(row) => Entry::To { row, angle: crate::perdual::Angle::ZERO },
            None => Entry::Outside,
        }
    }

    fn columns(&self, entry: impl Fn(usize) -> Entry + Sync + Send) -> ExactMatrix {
        let cols: Vec<usize> = (0..self.basis.len()).collect();
        ExactMatrix { columns: par::map(&cols, |&c| entry(c)) }
    }

    pub fn represent_s(&self, mu: &Path) -> ExactMatrix {
        self.columns(|c| self.s_entry(mu, c))
    }

    pub fn represent_s_adjoint(&self, mu: &Path) -> ExactMatrix {
        self.columns(|c| self.s_adjoint_entry(mu, c))
    }

    pub fn represent_u(&self, g: GroupElem) -> ExactMatrix {
        self.columns(|c| self.u_entry(g, c))
    }

    pub fn s(&self, mu: &Path, v: &Vector) -> Result<Vector, Outside> {
        v.apply(|c| self.s_entry(mu, c))
    }

    pub fn s_adjoint(&self, mu: &Path, v: &Vector) -> Result<Vector, Outside> {
        v.apply(|c| self.s_adjoint_entry(mu, c))
    }

    pub fn u(&self, g: GroupElem, v: &Vector) -> Result<Vector, Outside> {
        v.apply(|c| self.u_entry(g, c))
    }

    fn interior(&self) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| self.basis.is_interior(i)).collect()
    }

    /// The Cuntz-Krieger relations and the self-similarity relations, checked
    /// on interior vectors for paths of degree at most `(1,..,1)`.
    pub fn check_relations(&self) -> RelationReport {
        let graph = self.action.graph();
        let group = self.action.group();
        let k = graph.k();
        let paths = graph.all_paths_up_to(&Degree::ones(k));
        let vertices: Vec<VertexId> = (0..graph.vertex_count()).collect();
        let mut degrees: Vec<Degree> = (0..k).map(|c| Degree::unit(k, c)).collect();
        if k > 1 {
            degrees.push(Degree::ones(k));
        }
        let name = |p: &Path| graph.path_name(p);
        let per_vector = par::map(&self.interior(), |&i| {
            let mut r = RelationReport::default();
            let d = Vector::basis(i);
            let y = format!("y{i}");
            for &v in &vertices {
                let sv = graph.vertex_path(v);
                for &w in &vertices {
                    let sw = graph.vertex_path(w);
                    let lhs = self.s(&sw, &d).and_then(|t| self.s(&sv, &t));
                    let rhs = if v == w { self.s(&sv, &d) } else { Ok(Vector::zero()) };
                    r.record(|| format!("CK1 ({}, {}) at {y}", name(&sv), name(&sw)), lhs, rhs);
                }
                for p in &degrees {
                    let lhs = self.s(&sv, &d);
                    let rhs = graph.paths_of_degree(v, p).iter().try_fold(Vector::zero(), |mut acc, mu| {
                        acc.add(&self.s_adjoint(mu, &d).and_then(|t| self.s(mu, &t))?);
                        Ok(acc)
                    });
                    r.record(|| format!("CK4 ({}, {p}) at {y}", name(&sv)), lhs, rhs);
                }
            }
            for mu in &paths {
                let lhs = self.s(mu, &d).and_then(|t| self.s_adjoint(mu, &t));
                let rhs = self.s(&graph.vertex_path(mu.source()), &d);
                r.record(|| format!("CK3 {} at {y}", name(mu)), lhs, rhs);
                for nu in paths.iter().filter(|nu| nu.range() == mu.source()) {
                    let lhs = self.s(nu, &d).and_then(|t| self.s(mu, &t));
                    let rhs = self.s(&graph.compose(mu, nu).expect("composable"), &d);
                    r.record(|| format!("CK2 ({}, {}) at {y}", name(mu), name(nu)), lhs, rhs);
                }
                for g in group.elements() {
                    let lhs = self.s(mu, &d).and_then(|t| self.u(g, &t));
                    let rhs = self
                        .u(self.action.restrict_path(g, mu), &d)
                        .and_then(|t| self.s(&self.action.act_path(g, mu), &t));
                    r.record(|| format!("u_{} s_{} at {y}", group.name(g), name(mu)), lhs, rhs);
                }
            }
            for g in group.elements() {
                for h in group.elements() {
                    let lhs = self.u(h, &d).and_then(|t| self.u(g, &t));
                    let rhs = self.u(group.mul(g, h), &d);
                    r.record(|| format!("u_{} u_{} at {y}", group.name(g), group.name(h)), lhs, rhs);
                }
            }
            r.record(|| format!("u_1 at {y}"), self.u(group.identity(), &d), Ok(d.clone()));
            r
        });
        self.merge(per_vector)
    }

    /// `s_mu = scalar * s_nu` for every relation, on interior vectors based in `h_t`.
    pub fn check_presentation(&self, pres: &IdealPresentation, h_t: &[VertexId]) -> RelationReport {
        let graph = self.action.graph();
        let based: Vec<usize> =
            self.interior().into_iter().filter(|&i| h_t.contains(&self.basis.elements[i].path.range())).collect();
        let per_vector = par::map(&based, |&i| {
            let mut r = RelationReport::default();
            let d = Vector::basis(i);
            for rel in &pres.relations {
                let lhs = self.s(&rel.first, &d);
                let rhs = self.s(&rel.second, &d).map(|t| t.scaled(rel.scalar));
                r.record(
                    || format!("{} - ({}) {} at y{i}", graph.path_name(&rel.first), rel.scalar, graph.path_name(&rel.second)),
                    lhs,
                    rhs,
                );
            }
            r
        });
        self.merge(per_vector)
    }

    fn merge(&self, parts: Vec<RelationReport>) -> RelationReport {
        let mut out = RelationReport {
            basis_size: self.basis.len(),
            interior: self.interior().len(),
            ..Default::default()
        };
        for p in parts {
            out.checked += p.checked;
            out.boundary_excluded += p.boundary_excluded;
            out.violations.extend(p.violations);
        }
        out
    }
}

/// Whether `s_v` acts as zero on the truncated representation of `(T, f)`.
pub fn vertex_kernel_probe(
    space: &PrimSpace,
    stratum: usize,
    f: &RationalCharacter,
    v: VertexId,
    depth: usize,
) -> Result<bool, ReprError> {
    let rep = Representation::for_point(space, stratum, f, depth)?;
    Ok(rep.represent_s(&space.graph().vertex_path(v)).is_zero())
}

use serde::Serialize;

use super::{PrimError, PrimSpace};
use crate::kgraph::{Degree, Path};
use crate::perdual::{Angle, RationalCharacter};

/// `s_first - exp(2 pi i scalar) s_second`, from a cycline pair of `H_T Λ T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclineRelation {
    #[serde(skip)]
    pub first: Path,
    #[serde(skip)]
    pub second: Path,
    #[serde(rename = "first")]
    pub first_name: String,
    #[serde(rename = "second")]
    pub second_name: String,
    pub scalar: Angle,
}

/// Generators of the ideal attached to `(T, f)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealPresentation {
    pub tail: Vec<String>,
    pub character: RationalCharacter,
    pub vertex_generators: Vec<String>,
    pub relations: Vec<CyclineRelation>,
    /// Relations are complete up to this degree bound.
    pub bound: Degree,
}

impl PrimSpace {
    pub fn ideal_presentation(&self, stratum: usize, f: &RationalCharacter) -> Result<IdealPresentation, PrimError> {
        let s = &self.strata()[stratum];
        let graph = self.graph();
        let vertex_generators = (0..graph.vertex_count())
            .filter(|v| !s.tail().contains(v))
            .map(|v| graph.vertex_name(v).to_string())
            .collect();
        let mut keep = vec![false; graph.vertex_count()];
        for &v in s.h_t.vertices() {
            keep[v] = true;
        }
        let bound = self.bounds().degree.clone();
        let mut relations = Vec::new();
        if s.h_t.vertices().is_empty() {
            return Ok(IdealPresentation {
                tail: s.tail_names(graph),
                character: f.clone(),
                vertex_generators,
                relations,
                bound,
            });
        }
        let (h_graph, _, edge_map) = self.action().restrict_to(&keep).map_err(crate::tails::TailError::from)?;
        let local = h_graph.graph();
        let global = |p: &Path| -> Path {
            if p.is_vertex() {
                graph.vertex_path(s.h_t.vertices()[p.range()])
            } else {
                let edges: Vec<_> = p.edges().iter().map(|&e| edge_map[e]).collect();
                graph.path_from_edges(&edges).expect("restricted paths stay paths")
            }
        };
        for t in h_graph.cycline_pairs_up_to(&bound).triples {
            if t.first == t.second {
                continue;
            }
            let scalar = s.per.evaluate(f, &t.degree_difference())?;
            relations.push(CyclineRelation {
                first_name: local.path_name(&t.first),
                second_name: local.path_name(&t.second),
                first: global(&t.first),
                second: global(&t.second),
                scalar,
            });
        }
        Ok(IdealPresentation { tail: s.tail_names(graph), character: f.clone(), vertex_generators, relations, bound })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kgraph::fixtures::*;
    use crate::selfsim::fixtures::*;
    use crate::Bounds;

    #[test]
    fn gamma_tail_has_no_relations() {
        let p = PrimSpace::build(&g4_action(), &Bounds::new(1)).unwrap();
        let pres = p.ideal_presentation(0, &p.strata()[0].per.trivial_character()).unwrap();
        assert!(pres.relations.is_empty());
        assert!(pres.vertex_generators.is_empty());
    }

    #[test]
    fn g2_relations() {
        let p = PrimSpace::build(&trivial(g2()), &Bounds::new(1)).unwrap();
        let per = &p.strata()[0].per;
        let pres = p.ideal_presentation(0, &per.trivial_character()).unwrap();
        let ew = pres.relations.iter().find(|r| r.first_name == "e" && r.second_name == "w").unwrap();
        assert_eq!(ew.scalar, Angle::ZERO);
        let half = per.character(vec![Angle::new(1, 2)]).unwrap();
        let pres = p.ideal_presentation(0, &half).unwrap();
        let ew = pres.relations.iter().find(|r| r.first_name == "e" && r.second_name == "w").unwrap();
        assert_eq!(ew.scalar, Angle::new(1, 2));
        assert_eq!(p.graph().path_name(&ew.first), "e");
    }

    #[test]
    fn g5_small_tail_has_vertex_generator() {
        let p = PrimSpace::build(&trivial(g5()), &Bounds::new(1)).unwrap();
        let i = p.stratum_of(&[0]).unwrap();
        let pres = p.ideal_presentation(i, &p.strata()[i].per.trivial_character()).unwrap();
        assert_eq!(pres.vertex_generators, vec!["w"]);
    }
}

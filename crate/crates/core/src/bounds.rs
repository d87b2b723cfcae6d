use serde::Serialize;

use crate::kgraph::Degree;

/// Search limits for every bounded computation. Results computed under these
/// limits echo them so "complete up to bound" is never mistaken for exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Componentwise degree bound for path enumeration.
    pub degree: Degree,
    /// Move depth for orbit truncations.
    pub depth: usize,
    /// Largest vertex count accepted by exhaustive subset enumeration.
    pub max_vertices: usize,
    /// Largest orbit truncation built before giving up.
    pub orbit_budget: usize,
}

impl Bounds {
    pub fn new(k: usize) -> Self {
        Bounds { degree: Degree::uniform(k, 4), depth: 6, max_vertices: 22, orbit_budget: 200_000 }
    }

    pub fn with_degree(mut self, degree: Degree) -> Self {
        self.degree = degree;
        self
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = depth;
        self
    }
}

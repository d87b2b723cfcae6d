use std::collections::BTreeSet;

use thiserror::Error;

use super::{Degree, KGraph, Path, PathError, VertexId};

/// An eventually periodic infinite path `prefix * block * block * ...`.
///
/// `block` is a cycle at `prefix.source()` whose degree is positive in every
/// coordinate. Representations are not unique; use
/// [`KGraph::same_infinite_path`] for equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InfinitePath {
    prefix: Path,
    block: Path,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CofinalError {
    #[error("no vertex is reachable from every vertex of the tail")]
    NoCommonVertex,
    #[error("cofinal path construction exceeded its budget of {0} steps")]
    ConstructionFailed(usize),
}

impl InfinitePath {
    pub fn prefix(&self) -> &Path {
        &self.prefix
    }

    pub fn block(&self) -> &Path {
        &self.block
    }

    /// `x(0, 0)`.
    pub fn range(&self) -> VertexId {
        self.prefix.range()
    }
}

impl KGraph {
    pub fn infinite_path(&self, prefix: Path, block: Path) -> Result<InfinitePath, PathError> {
        if prefix.source() != block.range() || block.range() != block.source() || !block.degree().has_full_support() {
            return Err(PathError::BadBlock);
        }
        Ok(self.tidy(InfinitePath { prefix, block }))
    }

    /// `block^infinity` based at the range of `block`.
    pub fn periodic_path(&self, block: Path) -> Result<InfinitePath, PathError> {
        self.infinite_path(self.vertex_path(block.range()), block)
    }

    /// A finite path `prefix * block^m` whose degree is at least `n`.
    fn unroll(&self, x: &InfinitePath, n: &Degree) -> Path {
        let p = x.prefix.degree().as_slice();
        let b = x.block.degree().as_slice();
        let reps = n
            .as_slice()
            .iter()
            .zip(p.iter().zip(b))
            .map(|(&target, (&have, &step))| target.saturating_sub(have).div_ceil(step))
            .max()
            .unwrap_or(0);
        self.concat(&x.prefix, &self.power(&x.block, reps))
    }

    /// `x(0, n)`.
    pub fn initial_segment(&self, x: &InfinitePath, n: &Degree) -> Path {
        let long = self.unroll(x, n);
        self.factor(&long, n).expect("unrolled path is long enough").0
    }

    /// `x(p, q)` for `p <= q`.
    pub fn segment(&self, x: &InfinitePath, p: &Degree, q: &Degree) -> Result<Path, PathError> {
        if !p.le(q) {
            return Err(PathError::DegreeTooLarge(p.clone(), q.clone()));
        }
        let head = self.initial_segment(x, q);
        Ok(self.factor(&head, p)?.1)
    }

    /// `sigma^n(x)`.
    pub fn shift(&self, x: &InfinitePath, n: &Degree) -> InfinitePath {
        if n.is_zero() {
            return x.clone();
        }
        let long = self.unroll(x, n);
        let (_, rest) = self.factor(&long, n).expect("unrolled path is long enough");
        self.tidy(InfinitePath { prefix: rest, block: x.block.clone() })
    }

    /// `mu * x`, defined when `s(mu) = x(0, 0)`.
    pub fn prepend(&self, mu: &Path, x: &InfinitePath) -> Result<InfinitePath, PathError> {
        let prefix = self.compose(mu, &x.prefix)?;
        Ok(self.tidy(InfinitePath { prefix, block: x.block.clone() }))
    }

    /// Exact equality of eventually periodic paths.
    ///
    /// With `n0 = d(prefix_x) v d(prefix_y)`, both `sigma^n0` tails are
    /// periodic with blocks `B`, `C`, and `B^inf = C^inf` iff `BC = CB`.
    pub fn same_infinite_path(&self, x: &InfinitePath, y: &InfinitePath) -> bool {
        if x == y {
            return true;
        }
        if x.range() != y.range() {
            return false;
        }
        let n0 = x.prefix.degree().join(y.prefix.degree());
        let a = x.block.degree();
        let b = y.block.degree();
        let head_x = self.initial_segment(x, &n0.add(a).join(&n0.add(b)));
        let head_y = self.initial_segment(y, &n0.add(a).join(&n0.add(b)));
        let seg = |h: &Path, to: &Degree| self.segment_of(h, &n0, to).expect("segment within unrolled head");
        if self.factor(&head_x, &n0).unwrap().0 != self.factor(&head_y, &n0).unwrap().0 {
            return false;
        }
        let bx = seg(&head_x, &n0.add(a));
        let cy = seg(&head_y, &n0.add(b));
        self.concat(&bx, &cy) == self.concat(&cy, &bx)
    }

    /// Shrinks a representation: primitive block, no copy of the block at the
    /// end of the prefix, and prefix edges rotated into the block.
    pub(crate) fn tidy(&self, mut x: InfinitePath) -> InfinitePath {
        x.block = self.primitive_root(&x.block);
        loop {
            let mut changed = false;
            let bd = x.block.degree().clone();
            if bd.le(x.prefix.degree()) {
                let cut = x.prefix.degree().checked_sub(&bd).unwrap();
                let (head, last) = self.factor(&x.prefix, &cut).unwrap();
                if last == x.block {
                    x.prefix = head;
                    changed = true;
                }
            }
            for c in 0..self.k() {
                if x.prefix.degree().get(c) == 0 {
                    continue;
                }
                let unit = Degree::unit(self.k(), c);
                let pd = x.prefix.degree().checked_sub(&unit).unwrap();
                let (p_head, p_last) = self.factor(&x.prefix, &pd).unwrap();
                let bd = x.block.degree().checked_sub(&unit).unwrap();
                let (b_head, b_last) = self.factor(&x.block, &bd).unwrap();
                if p_last == b_last {
                    x.block = self.concat(&p_last, &b_head);
                    x.prefix = p_head;
                    changed = true;
                    break;
                }
            }
            if !changed {
                return x;
            }
        }
    }

    fn primitive_root(&self, block: &Path) -> Path {
        let g = block
            .degree()
            .as_slice()
            .iter()
            .fold(0u32, |acc, &c| num_integer::gcd(acc, c));
        for m in (2..=g).rev() {
            if g % m != 0 {
                continue;
            }
            let part = Degree::from_vec(block.degree().as_slice().iter().map(|c| c / m).collect());
            let (root, _) = self.factor(block, &part).unwrap();
            if root.range() == root.source() && self.power(&root, m) == *block {
                return self.primitive_root(&root);
            }
        }
        block.clone()
    }

    /// An eventually periodic infinite path from which every vertex of this
    /// graph can reach some vertex of the path.
    ///
    /// Picks the least vertex `w` reachable from all vertices and follows
    /// lexicographically first `(1,..,1)`-paths from `w` until a vertex repeats.
    /// Fails with `NoCommonVertex` if the graph is not a single maximal tail.
    pub fn cofinal_infinite_path(&self) -> Result<InfinitePath, CofinalError> {
        let reach = self.reachability();
        let common = (0..self.vertex_count())
            .find(|&w| reach.iter().all(|r| r[w]))
            .ok_or(CofinalError::NoCommonVertex)?;
        let step = Degree::ones(self.k());
        let mut visited: Vec<VertexId> = vec![common];
        let mut pieces: Vec<Path> = Vec::new();
        let budget = self.vertex_count() + 1;
        loop {
            let cur = *visited.last().unwrap();
            let next = self
                .paths_of_degree(cur, &step)
                .into_iter()
                .next()
                .expect("source-free graph has paths of every degree");
            let s = next.source();
            pieces.push(next);
            if let Some(pos) = visited.iter().position(|&v| v == s) {
                let prefix = pieces[..pos].iter().fold(self.vertex_path(common), |acc, p| self.concat(&acc, p));
                let block = pieces[pos..]
                    .iter()
                    .fold(self.vertex_path(visited[pos]), |acc, p| self.concat(&acc, p));
                let x = self.infinite_path(prefix, block).expect("constructed block is a cycle");
                debug_assert!(self.is_cofinal(&x));
                return Ok(x);
            }
            visited.push(s);
            if visited.len() > budget {
                return Err(CofinalError::ConstructionFailed(budget));
            }
        }
    }

    /// Checks cofinality by reachability: every vertex reaches some vertex
    /// visited by `x`. The visited set is finite for eventually periodic `x`.
    pub fn is_cofinal(&self, x: &InfinitePath) -> bool {
        let reach = self.reachability();
        let mut on_path = BTreeSet::new();
        for p in [&x.prefix, &self.concat(&x.prefix, &x.block)] {
            on_path.insert(p.range());
            on_path.insert(p.source());
        }
        // Vertices x(m, m): ranges of x's segments for m up to one period past the prefix.
        let horizon = x.prefix.degree().add(x.block.degree());
        for m in horizon.box_below() {
            on_path.insert(self.shift(x, &m).range());
        }
        reach.iter().all(|r| on_path.iter().any(|&w| r[w]))
    }
}

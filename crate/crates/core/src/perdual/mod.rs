//! Periodicity lattices in Z^k and their rational characters.

mod angle;
mod lattice;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

pub use angle::{Angle, AngleParseError};
pub use lattice::{hermite_contains, hermite_normal_form, smith, SmithData};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CharacterError {
    #[error("{0:?} is not in the lattice")]
    NotInLattice(Vec<i64>),
    #[error("character has {got} angles, lattice rank is {rank}")]
    WrongLength { got: usize, rank: usize },
    #[error("unsupported character set: {0}")]
    UnsupportedDescriptor(String),
}

/// A subgroup of Z^k with its Hermite basis and Smith data.
#[derive(Clone, Debug, Serialize)]
pub struct PerLattice {
    k: usize,
    generators: Vec<Vec<i64>>,
    basis: Vec<Vec<i64>>,
    #[serde(skip)]
    smith: SmithData,
}

impl PartialEq for PerLattice {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.basis == other.basis
    }
}

impl Eq for PerLattice {}

impl PerLattice {
    pub fn new(k: usize, generators: Vec<Vec<i64>>) -> Self {
        assert!(generators.iter().all(|g| g.len() == k), "generator length must be k");
        let basis = hermite_normal_form(&generators, k);
        let smith = smith(&basis, k);
        PerLattice { k, generators, basis, smith }
    }

    pub fn zero(k: usize) -> Self {
        PerLattice::new(k, Vec::new())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// Hermite normal form basis.
    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn invariants(&self) -> &[i64] {
        &self.smith.invariants
    }

    /// The basis `d_i * row_i(V^-1)` on which characters are given.
    pub fn smith_basis(&self) -> Vec<Vec<i64>> {
        self.smith.invariants
            .iter()
            .zip(&self.smith.v_inv)
            .map(|(d, row)| row.iter().map(|x| d * x).collect())
            .collect()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.len() == self.k && hermite_contains(&self.basis, p)
    }

    /// Coordinates of `p` on the Smith basis.
    pub fn coordinates(&self, p: &[i64]) -> Result<Vec<i64>, CharacterError> {
        let missing = || CharacterError::NotInLattice(p.to_vec());
        if p.len() != self.k {
            return Err(missing());
        }
        let y = lattice::vec_mat(p, &self.smith.v);
        let r = self.rank();
        if y[r..].iter().any(|&c| c != 0) {
            return Err(missing());
        }
        self.smith.invariants
            .iter()
            .zip(&y)
            .map(|(d, c)| {
                let (q, rem) = c.div_rem(d);
                if rem == 0 { Ok(q) } else { Err(missing()) }
            })
            .collect()
    }

    pub fn trivial_character(&self) -> RationalCharacter {
        RationalCharacter(vec![Angle::ZERO; self.rank()])
    }

    pub fn character(&self, angles: Vec<Angle>) -> Result<RationalCharacter, CharacterError> {
        if angles.len() != self.rank() {
            return Err(CharacterError::WrongLength { got: angles.len(), rank: self.rank() });
        }
        Ok(RationalCharacter(angles))
    }

    pub fn evaluate(&self, f: &RationalCharacter, p: &[i64]) -> Result<Angle, CharacterError> {
        self.check(f)?;
        let c = self.coordinates(p)?;
        Ok(c.iter().zip(&f.0).map(|(&n, a)| a.times(n)).sum())
    }

    /// A character of Z^k restricting to `f`: `phi_j = sum_i V_ji theta_i / d_i`.
    pub fn extend(&self, f: &RationalCharacter) -> Result<ExtendedCharacter, CharacterError> {
        self.check(f)?;
        let angles = (0..self.k)
            .map(|j| {
                self.smith.invariants
                    .iter()
                    .zip(&f.0)
                    .enumerate()
                    .map(|(i, (&d, theta))| theta.divided_by(d).times(self.smith.v[j][i]))
                    .sum()
            })
            .collect();
        Ok(ExtendedCharacter(angles))
    }

    /// Whether `f0` lies in the closure of the character set `set`.
    ///
    /// Every supported set is closed in the dual group, so this is membership.
    pub fn closure_contains(&self, set: &CharacterSet, f0: &RationalCharacter) -> Result<bool, CharacterError> {
        self.check(f0)?;
        match set {
            CharacterSet::Full => Ok(true),
            CharacterSet::Finite(list) => {
                if list.is_empty() {
                    return Err(CharacterError::UnsupportedDescriptor("empty finite set".into()));
                }
                for f in list {
                    self.check(f)?;
                }
                Ok(list.contains(f0))
            }
            CharacterSet::Subgroup(gens) => {
                for f in gens {
                    self.check(f)?;
                }
                Ok(subgroup_contains(gens, f0, self.rank()))
            }
        }
    }

    fn check(&self, f: &RationalCharacter) -> Result<(), CharacterError> {
        if f.0.len() == self.rank() {
            Ok(())
        } else {
            Err(CharacterError::UnsupportedDescriptor(format!(
                "character {} has {} angles, lattice rank is {}",
                f,
                f.0.len(),
                self.rank()
            )))
        }
    }
}

/// `f0` in the subgroup of `(Q/Z)^r` generated by `gens`: scale everything by
/// the common denominator `n` and test `n f0` against `span(n g_i) + n Z^r`.
fn subgroup_contains(gens: &[RationalCharacter], f0: &RationalCharacter, r: usize) -> bool {
    let n = gens
        .iter()
        .chain(std::iter::once(f0))
        .flat_map(|f| f.0.iter().map(|a| a.denom()))
        .fold(1i64, |acc, d| acc.lcm(&d));
    let scale = |f: &RationalCharacter| -> Vec<i64> { f.0.iter().map(|a| a.numer() * (n / a.denom())).collect() };
    let mut rows: Vec<Vec<i64>> = gens.iter().map(scale).collect();
    rows.extend((0..r).map(|i| (0..r).map(|j| if i == j { n } else { 0 }).collect()));
    hermite_contains(&hermite_normal_form(&rows, r), &scale(f0))
}

/// A character of a Per lattice, as angles on its Smith basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RationalCharacter(Vec<Angle>);

impl RationalCharacter {
    pub fn angles(&self) -> &[Angle] {
        &self.0
    }
}

impl std::fmt::Display for RationalCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write_angles(f, &self.0)
    }
}

/// A character of Z^k, as angles on the standard basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ExtendedCharacter(Vec<Angle>);

impl ExtendedCharacter {
    pub fn new(angles: Vec<Angle>) -> Self {
        ExtendedCharacter(angles)
    }

    pub fn zero(k: usize) -> Self {
        ExtendedCharacter(vec![Angle::ZERO; k])
    }

    pub fn angles(&self) -> &[Angle] {
        &self.0
    }

    pub fn evaluate(&self, p: &[i64]) -> Angle {
        assert_eq!(p.len(), self.0.len(), "degree length must be k");
        p.iter().zip(&self.0).map(|(&n, a)| a.times(n)).sum()
    }
}

impl std::fmt::Display for ExtendedCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write_angles(f, &self.0)
    }
}

fn write_angles(f: &mut std::fmt::Formatter<'_>, angles: &[Angle]) -> std::fmt::Result {
    if angles.len() == 1 {
        return write!(f, "{}", angles[0]);
    }
    write!(f, "(")?;
    for (i, a) in angles.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{a}")?;
    }
    write!(f, ")")
}

/// Sets of characters whose closures are computable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "characters", rename_all = "snake_case")]
pub enum CharacterSet {
    Full,
    Finite(Vec<RationalCharacter>),
    Subgroup(Vec<RationalCharacter>),
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a(n: i64, d: i64) -> Angle {
        Angle::new(n, d)
    }

    /// Test-only: subgroup elements by breadth-first generation.
    fn generated(gens: &[RationalCharacter], r: usize) -> Vec<Vec<Angle>> {
        let mut seen = vec![vec![Angle::ZERO; r]];
        let mut i = 0;
        while i < seen.len() {
            let x = seen[i].clone();
            for g in gens {
                let y: Vec<Angle> = x.iter().zip(g.angles()).map(|(p, q)| *p + *q).collect();
                if !seen.contains(&y) {
                    seen.push(y);
                }
            }
            i += 1;
        }
        seen
    }

    #[test]
    fn zero_lattice() {
        let l = PerLattice::zero(2);
        assert_eq!(l.rank(), 0);
        assert!(l.contains(&[0, 0]));
        assert!(!l.contains(&[1, 0]));
        assert_eq!(l.extend(&l.trivial_character()).unwrap(), ExtendedCharacter::zero(2));
    }

    #[test]
    fn smith_invariants_of_rectangle() {
        let l = PerLattice::new(2, vec![vec![2, 0], vec![0, 3]]);
        assert_eq!(l.basis(), &[vec![2, 0], vec![0, 3]]);
        assert_eq!(l.invariants(), &[1, 6]);
        let sb = l.smith_basis();
        assert_eq!(PerLattice::new(2, sb), l);
    }

    #[test]
    fn evaluate_on_even_integers() {
        let l = PerLattice::new(1, vec![vec![2]]);
        let f = l.character(vec![a(1, 4)]).unwrap();
        assert_eq!(l.evaluate(&f, &[6]).unwrap(), a(3, 4));
        assert_eq!(l.evaluate(&f, &[0]).unwrap(), Angle::ZERO);
        assert!(matches!(l.evaluate(&f, &[3]), Err(CharacterError::NotInLattice(_))));
        let z = PerLattice::new(1, vec![vec![1]]);
        let g = z.character(vec![a(1, 3)]).unwrap();
        assert_eq!(z.evaluate(&g, &[2]).unwrap(), a(2, 3));
    }

    #[test]
    fn extension_restricts() {
        let l = PerLattice::new(1, vec![vec![2]]);
        let f = l.character(vec![a(1, 2)]).unwrap();
        let ext = l.extend(&f).unwrap();
        assert_eq!(ext.evaluate(&[2]), a(1, 2));
        let full = PerLattice::new(2, vec![vec![1, 0], vec![0, 1]]);
        let f = full.character(vec![a(1, 3), a(1, 5)]).unwrap();
        let ext = full.extend(&f).unwrap();
        for b in full.smith_basis() {
            assert_eq!(ext.evaluate(&b), full.evaluate(&f, &b).unwrap());
        }
    }

    #[test]
    fn closures() {
        let l = PerLattice::new(1, vec![vec![1]]);
        let ch = |n, d| l.character(vec![a(n, d)]).unwrap();
        let finite = CharacterSet::Finite(vec![ch(1, 3), ch(2, 3)]);
        assert!(l.closure_contains(&finite, &ch(1, 3)).unwrap());
        assert!(!l.closure_contains(&finite, &ch(1, 2)).unwrap());
        assert!(l.closure_contains(&CharacterSet::Full, &ch(1, 7)).unwrap());
        let sub = CharacterSet::Subgroup(vec![ch(1, 4)]);
        assert!(l.closure_contains(&sub, &ch(3, 4)).unwrap());
        assert!(!l.closure_contains(&sub, &ch(1, 3)).unwrap());
        assert!(l.closure_contains(&CharacterSet::Finite(vec![]), &ch(0, 1)).is_err());
        let wrong = RationalCharacter(vec![a(1, 2), a(1, 2)]);
        assert!(matches!(
            l.closure_contains(&CharacterSet::Finite(vec![wrong]), &ch(0, 1)),
            Err(CharacterError::UnsupportedDescriptor(_))
        ));
    }

    fn angle() -> impl Strategy<Value = Angle> {
        (0i64..12, 1i64..13).prop_map(|(n, d)| Angle::new(n, d))
    }

    fn generators() -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-6i64..7, 2), 0..4)
    }

    proptest! {
        #[test]
        fn canonical_under_permutation_negation_adjunction(gens in generators(), seed in 0usize..24) {
            let l = PerLattice::new(2, gens.clone());
            let mut g2: Vec<Vec<i64>> = gens.iter().map(|g| g.iter().map(|x| -x).collect()).collect();
            let shift = if g2.is_empty() { 0 } else { seed % g2.len() };
            g2.rotate_left(shift);
            if gens.len() >= 2 {
                g2.push(gens[0].iter().zip(&gens[1]).map(|(x, y)| x + 2 * y).collect());
            }
            let l2 = PerLattice::new(2, g2);
            prop_assert_eq!(&l, &l2);
            prop_assert_eq!(l.invariants(), l2.invariants());
            for g in &gens {
                prop_assert!(l.contains(g));
            }
        }

        #[test]
        fn smith_basis_spans_same_lattice(gens in generators()) {
            let l = PerLattice::new(2, gens);
            prop_assert_eq!(PerLattice::new(2, l.smith_basis()), l.clone());
            let inv = l.invariants();
            for w in inv.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
        }

        #[test]
        fn evaluate_is_additive(gens in generators(), angles in prop::collection::vec(angle(), 2), c in prop::collection::vec(-3i64..4, 4)) {
            let l = PerLattice::new(2, gens.clone());
            let f = l.character(angles[..l.rank()].to_vec()).unwrap();
            let pick = |i: usize, j: usize| -> Vec<i64> {
                let mut v = vec![0, 0];
                for (n, g) in c[i..j].iter().zip(&gens) {
                    v[0] += n * g[0];
                    v[1] += n * g[1];
                }
                v
            };
            let p = pick(0, 2);
            let q = pick(2, 4);
            let pq = vec![p[0] + q[0], p[1] + q[1]];
            prop_assert_eq!(l.evaluate(&f, &pq).unwrap(), l.evaluate(&f, &p).unwrap() + l.evaluate(&f, &q).unwrap());
        }

        #[test]
        fn extension_then_restriction_is_identity(gens in generators(), angles in prop::collection::vec(angle(), 2)) {
            let l = PerLattice::new(2, gens.clone());
            let f = l.character(angles[..l.rank()].to_vec()).unwrap();
            let ext = l.extend(&f).unwrap();
            for b in l.smith_basis().iter().chain(&gens) {
                prop_assert_eq!(ext.evaluate(b), l.evaluate(&f, b).unwrap());
            }
        }

        #[test]
        fn subgroup_membership_matches_generation(gens in prop::collection::vec(angle(), 0..3), f0 in angle()) {
            let l = PerLattice::new(1, vec![vec![1]]);
            let gens: Vec<RationalCharacter> = gens.into_iter().map(|g| RationalCharacter(vec![g])).collect();
            let f0 = RationalCharacter(vec![f0]);
            let expected = generated(&gens, 1).contains(&f0.angles().to_vec());
            prop_assert_eq!(l.closure_contains(&CharacterSet::Subgroup(gens), &f0).unwrap(), expected);
        }

        #[test]
        fn closure_monotone(d in prop::collection::vec(angle(), 1..4), extra in prop::collection::vec(angle(), 0..3), f0 in angle()) {
            let l = PerLattice::new(1, vec![vec![3]]);
            let wrap = |v: &[Angle]| v.iter().map(|&x| RationalCharacter(vec![x])).collect::<Vec<_>>();
            let mut bigger = d.clone();
            bigger.extend(extra);
            let f0 = RationalCharacter(vec![f0]);
            for make in [CharacterSet::Finite as fn(Vec<RationalCharacter>) -> CharacterSet, CharacterSet::Subgroup] {
                let small = l.closure_contains(&make(wrap(&d)), &f0).unwrap();
                let big = l.closure_contains(&make(wrap(&bigger)), &f0).unwrap();
                prop_assert!(!small || big);
            }
        }
    }
}

use std::collections::BTreeMap;

use serde::Serialize;

use crate::perdual::Angle;

/// Image of one basis vector under a monomial operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Entry {
    Zero,
    /// The image is a basis vector outside the truncation.
    Outside,
    To { row: usize, angle: Angle },
}

/// An operator with at most one nonzero entry per column, each a root of unity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactMatrix {
    pub columns: Vec<Entry>,
}

impl ExactMatrix {
    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| *c == Entry::Zero)
    }

    pub fn identity(n: usize) -> Self {
        ExactMatrix { columns: (0..n).map(|row| Entry::To { row, angle: Angle::ZERO }).collect() }
    }
}

/// A finite combination `sum c * exp(2 pi i angle) * delta_row` with integer `c`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vector(BTreeMap<(usize, Angle), i64>);

/// A step of the computation left the truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Outside;

impl Vector {
    pub fn basis(i: usize) -> Self {
        let mut m = BTreeMap::new();
        m.insert((i, Angle::ZERO), 1);
        Vector(m)
    }

    pub fn zero() -> Self {
        Vector(BTreeMap::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, row: usize, angle: Angle, c: i64) {
        let slot = self.0.entry((row, angle)).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.0.remove(&(row, angle));
        }
    }

    pub fn add(&mut self, other: &Vector) {
        for (&(row, angle), &c) in &other.0 {
            self.add_term(row, angle, c);
        }
    }

    pub fn scaled(&self, angle: Angle) -> Vector {
        let mut out = Vector::zero();
        for (&(row, a), &c) in &self.0 {
            out.add_term(row, a + angle, c);
        }
        out
    }

    /// Applies a column map given as a function of the column index.
    pub fn apply(&self, op: impl Fn(usize) -> Entry) -> Result<Vector, Outside> {
        let mut out = Vector::zero();
        for (&(col, a), &c) in &self.0 {
            match op(col) {
                Entry::Zero => {}
                Entry::Outside => return Err(Outside),
                Entry::To { row, angle } => out.add_term(row, a + angle, c),
            }
        }
        Ok(out)
    }

    pub fn apply_matrix(&self, m: &ExactMatrix) -> Result<Vector, Outside> {
        self.apply(|col| m.columns[col])
    }
}

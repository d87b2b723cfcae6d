use thiserror::Error;

pub type GroupElem = usize;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("group has no elements")]
    Empty,
    #[error("multiplication table is not {0}x{0} with entries in range")]
    BadTable(usize),
    #[error("{0} is not a two-sided identity")]
    NotIdentity(String),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("{0} has no inverse")]
    NoInverse(String),
}

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<GroupElem>>,
    identity: GroupElem,
    inverse: Vec<GroupElem>,
}

impl FiniteGroup {
    pub fn new(names: Vec<String>, table: Vec<Vec<GroupElem>>, identity: GroupElem) -> Result<Self, GroupError> {
        let n = names.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if identity >= n || table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(GroupError::BadTable(n));
        }
        if (0..n).any(|g| table[identity][g] != g || table[g][identity] != g) {
            return Err(GroupError::NotIdentity(names[identity].clone()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative(
                            names[a].clone(),
                            names[b].clone(),
                            names[c].clone(),
                        ));
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|g| {
                (0..n)
                    .find(|&h| table[g][h] == identity && table[h][g] == identity)
                    .ok_or_else(|| GroupError::NoInverse(names[g].clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteGroup { names, table, identity, inverse })
    }

    pub fn trivial() -> Self {
        FiniteGroup { names: vec!["1".into()], table: vec![vec![0]], identity: 0, inverse: vec![0] }
    }

    /// `Z/n` with elements named `0..n`.
    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::new(names, table, 0).expect("cyclic group table is valid")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> GroupElem {
        self.identity
    }

    pub fn is_identity(&self, g: GroupElem) -> bool {
        g == self.identity
    }

    pub fn mul(&self, a: GroupElem, b: GroupElem) -> GroupElem {
        self.table[a][b]
    }

    pub fn inv(&self, g: GroupElem) -> GroupElem {
        self.inverse[g]
    }

    pub fn name(&self, g: GroupElem) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn by_name(&self, name: &str) -> Option<GroupElem> {
        self.names.iter().position(|n| n == name)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElem> {
        0..self.order()
    }

    pub fn table(&self) -> &[Vec<GroupElem>] {
        &self.table
    }
}

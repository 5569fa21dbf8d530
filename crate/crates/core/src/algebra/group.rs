use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, GroupAxiom, Result};

/// A finite group given by its multiplication table, `table[g][h] = gh`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl GroupTable {
    /// Validates the group axioms and caches the identity and inverses.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n) {
            return Err(Error::NotAGroup(GroupAxiom::NotSquare));
        }
        for (row, r) in table.iter().enumerate() {
            if let Some(col) = r.iter().position(|&k| k >= n) {
                return Err(Error::NotAGroup(GroupAxiom::OutOfRange { row, col }));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup(GroupAxiom::Associativity { a, b, c }));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or(Error::NotAGroup(GroupAxiom::Identity))?;
        let mut inverses = vec![0; n];
        for (g, inv) in inverses.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or(Error::NotAGroup(GroupAxiom::Inverse { element: g }))?;
        }
        Ok(GroupTable {
            table,
            identity,
            inverses,
        })
    }

    /// `Z_n` with `table[a][b] = a + b mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs n >= 1");
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        GroupTable::new(table).expect("cyclic table is a group")
    }

    /// `S_3` on permutations of `{0, 1, 2}` listed lexicographically,
    /// with `(gh)(x) = g(h(x))`.
    pub fn symmetric3() -> Self {
        let perms = Self::s3_perms();
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("permutation");
        let table = perms
            .iter()
            .map(|g| perms.iter().map(|h| index([g[h[0]], g[h[1]], g[h[2]]])).collect())
            .collect();
        GroupTable::new(table).expect("S3 table is a group")
    }

    fn s3_perms() -> [[usize; 3]; 6] {
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
    }

    /// Index of a permutation of `{0, 1, 2}` in [`GroupTable::symmetric3`].
    pub fn element_of_perm(&self, p: [usize; 3]) -> usize {
        Self::s3_perms().iter().position(|q| *q == p).expect("permutation of 0..3")
    }

    /// Direct product with pairs `(g, h)` at index `g * |H| + h`.
    pub fn product(&self, other: &GroupTable) -> GroupTable {
        let (n, m) = (self.order(), other.order());
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        GroupTable::new(table).expect("product of groups is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }
    pub fn identity(&self) -> usize {
        self.identity
    }
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }
    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }
    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|g| (0..n).all(|h| self.mul(g, h) == self.mul(h, g)))
    }
}

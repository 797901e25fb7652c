//! Sparse Gaussian elimination over [`CycRat`].

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::cyclotomic::CycRat;

pub type SparseRow = BTreeMap<usize, CycRat>;

/// Incremental row echelon form with pivots normalized to one.
#[derive(Debug, Default, Clone)]
pub struct Echelon {
    /// pivot column → (row, rhs)
    pivots: BTreeMap<usize, (SparseRow, CycRat)>,
    inconsistent: bool,
}

fn axpy(row: &mut SparseRow, c: &CycRat, other: &SparseRow) {
    for (k, v) in other {
        let prod = c * v;
        match row.get_mut(k) {
            Some(x) => {
                let s = &*x + &prod;
                if s.is_zero() {
                    row.remove(k);
                } else {
                    *x = s;
                }
            }
            None => {
                if !prod.is_zero() {
                    row.insert(*k, prod);
                }
            }
        }
    }
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    /// Reduce a row against the current pivots.
    fn reduce(&self, mut row: SparseRow, mut rhs: CycRat) -> (SparseRow, CycRat) {
        loop {
            let hit = row
                .iter()
                .find(|(k, _)| self.pivots.contains_key(k))
                .map(|(k, v)| (*k, v.clone()));
            let Some((k, c)) = hit else { break };
            let (prow, prhs) = &self.pivots[&k];
            let neg = -&c;
            axpy(&mut row, &neg, prow);
            rhs = &rhs + &(&neg * prhs);
        }
        (row, rhs)
    }

    /// Add the equation `row · x = rhs`; returns whether it raised the rank.
    pub fn push(&mut self, row: SparseRow, rhs: CycRat) -> bool {
        let (row, rhs) = self.reduce(row, rhs);
        let Some((&k, lead)) = row.iter().next() else {
            if !rhs.is_zero() {
                self.inconsistent = true;
            }
            return false;
        };
        let inv = lead.inv().expect("nonzero leading entry");
        let row: SparseRow = row.iter().map(|(j, v)| (*j, v * &inv)).collect();
        self.pivots.insert(k, (row, &rhs * &inv));
        true
    }

    /// A solution with all free variables zero, if the system is consistent.
    pub fn solve(&self, ncols: usize) -> Option<Vec<CycRat>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![CycRat::zero(); ncols];
        for (k, (row, rhs)) in self.pivots.iter().rev() {
            let mut acc = rhs.clone();
            for (j, v) in row.iter() {
                if j != k && !x[*j].is_zero() {
                    acc = &acc - &(v * &x[*j]);
                }
            }
            x[*k] = acc;
        }
        Some(x)
    }
}

/// Rank of a dense matrix given by rows.
pub fn rank(rows: &[Vec<CycRat>]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        let sparse: SparseRow = r
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k, v.clone()))
            .collect();
        e.push(sparse, CycRat::zero());
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[i64]) -> SparseRow {
        v.iter()
            .enumerate()
            .filter(|(_, x)| **x != 0)
            .map(|(k, x)| (k, CycRat::from_int(*x)))
            .collect()
    }

    #[test]
    fn solves_small_system() {
        let mut e = Echelon::new();
        e.push(row(&[1, 1, 0]), CycRat::from_int(3));
        e.push(row(&[0, 1, 1]), CycRat::from_int(5));
        e.push(row(&[1, 0, 1]), CycRat::from_int(4));
        let x = e.solve(3).unwrap();
        assert_eq!(x, vec![CycRat::from_int(1), CycRat::from_int(2), CycRat::from_int(3)]);
    }

    #[test]
    fn detects_inconsistency_and_rank() {
        let mut e = Echelon::new();
        e.push(row(&[1, 1]), CycRat::from_int(1));
        e.push(row(&[2, 2]), CycRat::from_int(3));
        assert!(e.solve(2).is_none());
        let r = rank(&[
            vec![CycRat::from_int(1), CycRat::from_int(2)],
            vec![CycRat::from_int(2), CycRat::from_int(4)],
        ]);
        assert_eq!(r, 1);
    }
}

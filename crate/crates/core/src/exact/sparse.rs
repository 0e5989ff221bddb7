//! Gaussian elimination on sparse rows, for large systems of mostly
//! two-term equations.

use std::collections::BTreeMap;

use super::{Scalar, Vector};

pub type SparseRow = BTreeMap<usize, Scalar>;

/// Incrementally reduced row set; each stored row has leading coefficient 1
/// at its pivot, which is its smallest column.
#[derive(Clone, Debug, Default)]
pub struct Eliminator {
    pivots: BTreeMap<usize, SparseRow>,
}

fn axpy(acc: &mut SparseRow, c: &Scalar, row: &SparseRow) {
    for (&k, x) in row {
        let e = acc.entry(k).or_default();
        *e -= &(c * x);
        if e.is_zero() {
            acc.remove(&k);
        }
    }
}

impl Eliminator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a row; returns whether it was independent of the previous ones.
    pub fn push(&mut self, mut row: SparseRow) -> bool {
        row.retain(|_, x| !x.is_zero());
        loop {
            let Some((&c, lead)) = row.iter().next() else { return false };
            match self.pivots.get(&c) {
                Some(p) => {
                    let lead = lead.clone();
                    axpy(&mut row, &lead, p);
                }
                None => {
                    let inv = lead.inv().expect("nonzero");
                    for x in row.values_mut() {
                        *x = &*x * &inv;
                    }
                    self.pivots.insert(c, row);
                    return true;
                }
            }
        }
    }

    /// Basis of the solution space of the stored rows in `ncols` unknowns,
    /// one vector per free column in increasing order, with a 1 there and 0
    /// at the other free columns.
    pub fn kernel(&self, ncols: usize) -> Vec<Vector> {
        let mut reduced: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for (&c, row) in self.pivots.iter().rev() {
            let mut r = row.clone();
            let others: Vec<usize> = r.keys().copied().filter(|&k| k != c && reduced.contains_key(&k)).collect();
            for k in others {
                let x = r.get(&k).cloned().unwrap_or_default();
                if !x.is_zero() {
                    axpy(&mut r, &x, &reduced[&k]);
                }
            }
            reduced.insert(c, r);
        }
        let mut out = Vec::new();
        for f in (0..ncols).filter(|f| !reduced.contains_key(f)) {
            let mut v = vec![Scalar::zero(); ncols];
            v[f] = Scalar::one();
            for (&c, r) in &reduced {
                if let Some(x) = r.get(&f) {
                    v[c] = -x;
                }
            }
            out.push(v);
        }
        out
    }
}

pub fn to_sparse(v: &[Scalar]) -> SparseRow {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// Rank of a family of sparse vectors.
pub fn sparse_rank<I: IntoIterator<Item = SparseRow>>(rows: I) -> usize {
    let mut e = Eliminator::new();
    for r in rows {
        e.push(r);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Matrix;

    #[test]
    fn kernel_matches_dense() {
        let m = Matrix::from_i64(&[&[1, 2, 0, -1], &[0, 1, 1, 1], &[1, 3, 1, 0]]);
        let mut e = Eliminator::new();
        for r in m.row_vectors() {
            e.push(to_sparse(&r));
        }
        assert_eq!(e.rank(), 2);
        let k = e.kernel(4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.apply(v).iter().all(Scalar::is_zero));
        }
        assert_eq!(crate::exact::Subspace::span(4, k).unwrap(), crate::exact::subspace::kernel(&m));
    }
}

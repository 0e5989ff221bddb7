//! Rees modules of filtrations, realized as graded pieces with shift maps.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exact::{Matrix, Subspace};
use crate::filtration::{Direction, FilteredSpace, FiltrationError};

/// `⊕_n F_n V` for an increasing filtration; multiplication by the Rees
/// parameter is the inclusion `F_n → F_{n+1}`, written in echelon coordinates.
#[derive(Clone, Debug)]
pub struct ReesModule {
    lo: i64,
    pieces: Vec<Subspace>,
    // shifts[k]: pieces[k] → pieces[k+1]
    shifts: Vec<Matrix>,
}

/// Matrix of the inclusion `a ⊆ b` in the echelon coordinates of both.
pub fn inclusion_matrix(a: &Subspace, b: &Subspace) -> Matrix {
    let cols: Vec<_> = a.basis().iter().map(|v| b.coords(v).expect("nested pieces")).collect();
    Matrix::from_columns(&cols, b.dim())
}

impl ReesModule {
    pub fn new(f: &FilteredSpace) -> Result<Self, FiltrationError> {
        if f.direction() != Direction::Increasing {
            return Err(FiltrationError::DirectionMismatch);
        }
        f.require_exhaustive()?;
        let (lo, hi) = f.bounds();
        let pieces: Vec<Subspace> = (lo - 1..=hi).map(|n| f.at(n).clone()).collect();
        let shifts = pieces.windows(2).map(|w| inclusion_matrix(&w[0], &w[1])).collect();
        Ok(Self { lo: lo - 1, pieces, shifts })
    }

    /// Index range on which pieces are stored; below it the piece is the
    /// lowest one, above it the whole space.
    pub fn bounds(&self) -> (i64, i64) {
        (self.lo, self.lo + self.pieces.len() as i64 - 1)
    }

    pub fn piece(&self, n: i64) -> &Subspace {
        let (lo, hi) = self.bounds();
        &self.pieces[(n.clamp(lo, hi) - lo) as usize]
    }

    /// Shift `piece(n) → piece(n+1)`; the identity outside the stored window.
    pub fn shift(&self, n: i64) -> Matrix {
        let (lo, hi) = self.bounds();
        if n < lo || n >= hi {
            return Matrix::identity(self.piece(n).dim());
        }
        self.shifts[(n - lo) as usize].clone()
    }

    /// Flatness: every shift map is injective.
    pub fn is_flat(&self) -> bool {
        self.shifts.iter().all(|m| m.rank() == m.cols())
    }

    /// `dim coker(piece(n−1) → piece(n))`, which is `dim gr_n`.
    pub fn cokernel_dim(&self, n: i64) -> usize {
        self.piece(n).dim() - self.shift(n - 1).rank()
    }

    pub fn dims(&self) -> Vec<(i64, usize)> {
        let (lo, hi) = self.bounds();
        (lo..=hi).map(|n| (n, self.piece(n).dim())).collect()
    }
}

/// `⊕_{p,q} F^p ∩ conj(F^q)` for a decreasing filtration on `V ⊗ ℚ(i)`.
#[derive(Clone, Debug)]
pub struct DoubleReesModule {
    lo: i64,
    hi: i64,
    pieces: BTreeMap<(i64, i64), Subspace>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DoubleReesPiece {
    pub p: i64,
    pub q: i64,
    pub dim: usize,
}

impl DoubleReesModule {
    pub fn new(f: &FilteredSpace) -> Result<Self, FiltrationError> {
        if f.direction() != Direction::Decreasing {
            return Err(FiltrationError::DirectionMismatch);
        }
        f.require_exhaustive()?;
        let (lo, hi) = f.bounds();
        let fbar = f.conj();
        let mut pieces = BTreeMap::new();
        for p in lo..=hi + 1 {
            for q in lo..=hi + 1 {
                pieces.insert((p, q), f.at(p).intersect(fbar.at(q))?);
            }
        }
        Ok(Self { lo, hi: hi + 1, pieces })
    }

    pub fn piece(&self, p: i64, q: i64) -> &Subspace {
        let c = |x: i64| x.clamp(self.lo, self.hi);
        &self.pieces[&(c(p), c(q))]
    }

    /// The shift `piece(p+1, q) → piece(p, q)`.
    pub fn shift_first(&self, p: i64, q: i64) -> Matrix {
        inclusion_matrix(self.piece(p + 1, q), self.piece(p, q))
    }

    /// The shift `piece(p, q+1) → piece(p, q)`.
    pub fn shift_second(&self, p: i64, q: i64) -> Matrix {
        inclusion_matrix(self.piece(p, q + 1), self.piece(p, q))
    }

    /// Real elements of `piece(p,q) + piece(q,p)`, a conjugation-stable space.
    pub fn real_part(&self, p: i64, q: i64) -> Subspace {
        self.piece(p, q).sum(self.piece(q, p)).unwrap().real_points()
    }

    /// Nonzero pieces on the stored window.
    pub fn nonzero_pieces(&self) -> Vec<DoubleReesPiece> {
        self.pieces
            .iter()
            .filter(|(_, s)| !s.is_zero())
            .map(|(&(p, q), s)| DoubleReesPiece { p, q, dim: s.dim() })
            .collect()
    }

    /// Dimensions of `piece(p,q) / (piece(p+1,q) + piece(p,q+1))`, the
    /// bigraded part of the module, on the window.
    pub fn bigraded_dims(&self) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for p in self.lo..=self.hi {
            for q in self.lo..=self.hi {
                let below = self.piece(p + 1, q).sum(self.piece(p, q + 1)).unwrap();
                let d = self.piece(p, q).dim() - below.dim();
                if d > 0 {
                    out.insert((p, q), d);
                }
            }
        }
        out
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Scalar, Vector};
    use crate::filtration::span_i64;

    #[test]
    fn two_step_flag() {
        let f = FilteredSpace::new(2, Direction::Increasing, 0, vec![span_i64(2, &[&[1, 0]]), Subspace::full(2)]).unwrap();
        let r = ReesModule::new(&f).unwrap();
        assert_eq!(r.dims(), vec![(-1, 0), (0, 1), (1, 2)]);
        assert!(r.is_flat());
        assert_eq!((r.cokernel_dim(0), r.cokernel_dim(1), r.cokernel_dim(2)), (1, 1, 0));
    }

    #[test]
    fn non_exhaustive_rejected() {
        let f = FilteredSpace::new(2, Direction::Increasing, 0, vec![span_i64(2, &[&[1, 0]])]).unwrap();
        assert!(matches!(ReesModule::new(&f), Err(FiltrationError::NotExhaustive { index: 0 })));
    }

    #[test]
    fn elliptic_shape_pieces() {
        let z: Vector = vec![Scalar::one(), Scalar::i()];
        let f1 = Subspace::span(2, [z]).unwrap();
        let f = FilteredSpace::new(2, Direction::Decreasing, 0, vec![Subspace::full(2), f1]).unwrap();
        let d = DoubleReesModule::new(&f).unwrap();
        assert_eq!(d.piece(1, 0).dim(), 1);
        assert_eq!(d.piece(0, 1).dim(), 1);
        assert_eq!(d.piece(1, 1).dim(), 0);
        assert_eq!(d.real_part(1, 0).dim(), 2);
        let bg: Vec<_> = d.bigraded_dims().into_iter().collect();
        assert_eq!(bg, vec![((0, 1), 1), ((1, 0), 1)]);
    }
}

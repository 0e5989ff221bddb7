//! Filtered cochain complexes, décalage, good truncation and the spectral
//! sequence of an increasing filtration.
//!
//! Page entries are keyed by `(s, n)` = (filtration index, total degree) and
//! `d_r` goes from `(s, n)` to `(s − r, n + 1)`:
//!
//! ```text
//! Z_r^{s,n} = { x ∈ J_s C^n : dx ∈ J_{s−r} C^{n+1} }
//! B_r^{s,n} = J_s C^n ∩ d(J_{s+r} C^{n−1})
//! E_r^{s,n} = Z_r^{s,n} / (Z_{r−1}^{s−1,n} + B_{r−1}^{s,n})
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exact::{ExactError, Matrix, Quotient, Subspace};
use crate::filtration::{Direction, FilteredSpace, FiltrationError};

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, thiserror::Error)]
pub enum SpectralError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
    #[error("differential out of degree {degree} has the wrong shape")]
    Shape { degree: i64 },
    #[error("d∘d ≠ 0 starting in degree {degree}")]
    NotComplex { degree: i64 },
    #[error("differential does not preserve J_{index} in degree {degree}")]
    NotCompatible { degree: i64, index: i64 },
    #[error("filtration in degree {degree} is not exhaustive")]
    NotExhaustive { degree: i64 },
    #[error("filtration in degree {degree} is not bounded below")]
    NotBounded { degree: i64 },
    #[error("filtration must be increasing")]
    Direction,
}

/// A bounded cochain complex `C^lo → … → C^hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    lo: i64,
    dims: Vec<usize>,
    d: Vec<Matrix>,
}

impl Complex {
    /// `d[k]` maps degree `lo + k` to `lo + k + 1`; there are `dims.len() − 1` of them.
    pub fn new(lo: i64, dims: Vec<usize>, d: Vec<Matrix>) -> Result<Self, SpectralError> {
        if d.len() + 1 != dims.len().max(1) {
            return Err(SpectralError::Shape { degree: lo + d.len() as i64 });
        }
        let d: Vec<Matrix> = d.into_iter().enumerate().map(|(k, m)| m.fit_empty(dims[k + 1], dims[k])).collect();
        for (k, m) in d.iter().enumerate() {
            if m.shape() != (dims[k + 1], dims[k]) {
                return Err(SpectralError::Shape { degree: lo + k as i64 });
            }
        }
        for k in 1..d.len() {
            if !(&d[k] * &d[k - 1]).is_zero() {
                return Err(SpectralError::NotComplex { degree: lo + k as i64 - 1 });
            }
        }
        Ok(Self { lo, dims, d })
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.lo + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, n: i64) -> usize {
        if self.degrees().contains(&n) {
            self.dims[(n - self.lo) as usize]
        } else {
            0
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d: C^n → C^{n+1}`, zero outside the stored range.
    pub fn d(&self, n: i64) -> Matrix {
        let k = n - self.lo;
        if k >= 0 && (k as usize) < self.d.len() {
            self.d[k as usize].clone()
        } else {
            Matrix::zeros(self.dim(n + 1), self.dim(n))
        }
    }

    pub fn cycles(&self, n: i64) -> Subspace {
        crate::exact::subspace::kernel(&self.d(n))
    }

    pub fn boundaries(&self, n: i64) -> Subspace {
        crate::exact::subspace::image(&self.d(n - 1))
    }

    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        self.degrees().map(|n| (n, self.cycles(n).dim() - self.boundaries(n).dim())).collect()
    }

    /// Subcomplex on subspaces `S^n` with `d(S^n) ⊆ S^{n+1}`, in echelon coordinates.
    pub fn subcomplex(&self, subs: &BTreeMap<i64, Subspace>) -> Complex {
        let degs: Vec<i64> = self.degrees().collect();
        let get = |n: i64| subs.get(&n).cloned().unwrap_or_else(|| Subspace::zero(self.dim(n)));
        let dims = degs.iter().map(|&n| get(n).dim()).collect();
        let d = degs[..degs.len().saturating_sub(1)]
            .iter()
            .map(|&n| {
                let (src, dst) = (get(n), get(n + 1));
                let cols: Vec<_> = src.basis().iter().map(|v| dst.coords(&self.d(n).apply(v)).expect("subcomplex")).collect();
                Matrix::from_columns(&cols, dst.dim())
            })
            .collect();
        Complex::new(self.lo, dims, d).expect("subcomplex of a complex")
    }

    /// Quotient complex `S^n / T^n` for nested subcomplexes, in quotient coordinates.
    pub fn subquotient(&self, big: &BTreeMap<i64, Subspace>, small: &BTreeMap<i64, Subspace>) -> Complex {
        let degs: Vec<i64> = self.degrees().collect();
        let get = |m: &BTreeMap<i64, Subspace>, n: i64| m.get(&n).cloned().unwrap_or_else(|| Subspace::zero(self.dim(n)));
        let qs: BTreeMap<i64, Quotient> = degs.iter().map(|&n| (n, Quotient::new(&get(big, n), &get(small, n)).unwrap())).collect();
        let dims = degs.iter().map(|n| qs[n].dim()).collect();
        let d = degs[..degs.len().saturating_sub(1)]
            .iter()
            .map(|&n| {
                let (src, dst) = (&qs[&n], &qs[&(n + 1)]);
                let cols: Vec<_> = src.section().iter().map(|v| dst.project(&self.d(n).apply(v)).expect("subcomplex")).collect();
                Matrix::from_columns(&cols, dst.dim())
            })
            .collect();
        Complex::new(self.lo, dims, d).expect("subquotient of a complex")
    }
}

/// A bounded complex with an increasing filtration `J` in every degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    complex: Complex,
    filt: Vec<FilteredSpace>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PageEntry {
    pub s: i64,
    pub n: i64,
    pub dim: usize,
    /// Rank of `d_r` leaving this entry.
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct SpectralPage {
    pub r: i64,
    pub quotients: BTreeMap<(i64, i64), Quotient>,
    pub differentials: BTreeMap<(i64, i64), Matrix>,
}

impl SpectralPage {
    pub fn dim(&self, s: i64, n: i64) -> usize {
        self.quotients.get(&(s, n)).map_or(0, Quotient::dim)
    }

    pub fn total_dim(&self) -> usize {
        self.quotients.values().map(Quotient::dim).sum()
    }

    pub fn total_rank(&self) -> usize {
        self.differentials.values().map(Matrix::rank).sum()
    }

    pub fn entries(&self) -> Vec<PageEntry> {
        self.quotients
            .iter()
            .filter(|(_, q)| q.dim() > 0)
            .map(|(&(s, n), q)| PageEntry { s, n, dim: q.dim(), rank: self.differentials.get(&(s, n)).map_or(0, Matrix::rank) })
            .collect()
    }
}

impl FilteredComplex {
    pub fn new(complex: Complex, filt: Vec<FilteredSpace>) -> Result<Self, SpectralError> {
        let degs: Vec<i64> = complex.degrees().collect();
        if filt.len() != degs.len() {
            return Err(SpectralError::Shape { degree: complex.lo });
        }
        for (f, &n) in filt.iter().zip(&degs) {
            if f.direction() != Direction::Increasing {
                return Err(SpectralError::Direction);
            }
            if f.ambient() != complex.dim(n) {
                return Err(SpectralError::Shape { degree: n });
            }
            if !f.is_exhaustive() {
                return Err(SpectralError::NotExhaustive { degree: n });
            }
            if !f.is_hausdorff() {
                return Err(SpectralError::NotBounded { degree: n });
            }
        }
        let fc = Self { complex, filt };
        let (lo, hi) = fc.window();
        for &n in &degs {
            let d = fc.complex.d(n);
            for r in lo - 1..=hi {
                if !fc.j(r, n + 1).contains_subspace(&fc.j(r, n).image(&d)?) {
                    return Err(SpectralError::NotCompatible { degree: n, index: r });
                }
            }
        }
        Ok(fc)
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn filtration(&self, n: i64) -> Option<&FilteredSpace> {
        let k = n - self.complex.lo;
        (k >= 0).then(|| self.filt.get(k as usize)).flatten()
    }

    /// `J_r C^n`, saturated outside the stored windows.
    pub fn j(&self, r: i64, n: i64) -> Subspace {
        match self.filtration(n) {
            Some(f) => f.at(r).clone(),
            None => Subspace::zero(0),
        }
    }

    /// Union of the filtration windows over all degrees.
    pub fn window(&self) -> (i64, i64) {
        let lo = self.filt.iter().map(|f| f.bounds().0).min().unwrap_or(0);
        let hi = self.filt.iter().map(|f| f.bounds().1).max().unwrap_or(0);
        (lo, hi)
    }

    /// `(Dec J)_r C^n = { a ∈ J_{r−n} C^n : da ∈ J_{r−n−1} C^{n+1} }`.
    pub fn decalage(&self) -> FilteredComplex {
        let (lo, hi) = self.window();
        let filt = self
            .complex
            .degrees()
            .map(|n| {
                let d = self.complex.d(n);
                FilteredSpace::from_fn(self.complex.dim(n), Direction::Increasing, lo + n, hi + n + 1, Subspace::zero(self.complex.dim(n)), |r| {
                    let pre = Subspace::preimage(&d, &self.j(r - n - 1, n + 1)).unwrap();
                    self.j(r - n, n).intersect(&pre).unwrap()
                })
                .expect("nested")
            })
            .collect();
        FilteredComplex { complex: self.complex.clone(), filt }
    }

    /// Graded piece `gr_s C = J_s C / J_{s−1} C` as a complex.
    pub fn graded_complex(&self, s: i64) -> Complex {
        let big = self.complex.degrees().map(|n| (n, self.j(s, n))).collect();
        let small = self.complex.degrees().map(|n| (n, self.j(s - 1, n))).collect();
        self.complex.subquotient(&big, &small)
    }

    fn z(&self, r: i64, s: i64, n: i64) -> Subspace {
        let pre = Subspace::preimage(&self.complex.d(n), &self.j(s - r, n + 1)).unwrap();
        self.j(s, n).intersect(&pre).unwrap()
    }

    fn b(&self, r: i64, s: i64, n: i64) -> Subspace {
        let img = self.j(s + r, n - 1).image(&self.complex.d(n - 1)).unwrap();
        self.j(s, n).intersect(&img).unwrap()
    }

    /// The page `E_r`, `r ≥ 0`, with its differentials.
    pub fn page(&self, r: i64) -> Result<SpectralPage, SpectralError> {
        if r < 0 {
            return Err(SpectralError::Shape { degree: r });
        }
        let (lo, hi) = self.window();
        let mut quotients = BTreeMap::new();
        for n in self.complex.degrees() {
            for s in lo..=hi {
                let z = self.z(r, s, n);
                let den = self.z(r - 1, s - 1, n).sum(&self.b(r - 1, s, n)).unwrap();
                quotients.insert((s, n), Quotient::new(&z, &den).expect("nested"));
            }
        }
        let mut differentials = BTreeMap::new();
        for (&(s, n), q) in &quotients {
            let Some(target) = quotients.get(&(s - r, n + 1)) else { continue };
            if q.dim() == 0 || target.dim() == 0 {
                continue;
            }
            let d = self.complex.d(n);
            let cols: Vec<_> = q.section().iter().map(|v| target.project(&d.apply(v)).expect("d(Z_r) ⊆ Z_r")).collect();
            differentials.insert((s, n), Matrix::from_columns(&cols, target.dim()));
        }
        Ok(SpectralPage { r, quotients, differentials })
    }

    /// Pages `E_0 … E_{r_max}`.
    pub fn pages(&self, r_max: i64) -> Result<Vec<SpectralPage>, SpectralError> {
        if r_max < 0 {
            return Err(SpectralError::Shape { degree: r_max });
        }
        (0..=r_max).map(|r| self.page(r)).collect()
    }

    /// A page index after which all differentials vanish.
    pub fn degeneration_bound(&self) -> i64 {
        let (lo, hi) = self.window();
        hi - lo + 2
    }

    /// `dim gr_s H^n` for the filtration induced on cohomology.
    pub fn graded_cohomology_dims(&self) -> BTreeMap<(i64, i64), usize> {
        let (lo, hi) = self.window();
        let mut out = BTreeMap::new();
        for n in self.complex.degrees() {
            let (zc, bd) = (self.complex.cycles(n), self.complex.boundaries(n));
            for s in lo..=hi {
                let a = self.j(s, n).intersect(&zc).unwrap().sum(&bd).unwrap().dim();
                let b = self.j(s - 1, n).intersect(&zc).unwrap().sum(&bd).unwrap().dim();
                if a > b {
                    out.insert((s, n), a - b);
                }
            }
        }
        out
    }

    pub fn convergence(&self) -> Convergence {
        let inf = self.page(self.degeneration_bound()).unwrap();
        let e_inf: BTreeMap<_, _> = inf.entries().into_iter().map(|e| ((e.s, e.n), e.dim)).collect();
        let gr = self.graded_cohomology_dims();
        Convergence { converges: e_inf == gr, e_infinity: e_inf.into_iter().collect(), graded_cohomology: gr.into_iter().collect() }
    }

    /// Compares `H^m(gr^{Dec J}_k C)` with the cohomology of the `E_1`
    /// complex `(⊕_a E_1^{k−a, a}, d_1)` in every degree.
    pub fn dec_e1_check(&self) -> DecCheck {
        let dec = self.decalage();
        let (dlo, dhi) = dec.window();
        let e1 = self.page(1).unwrap();
        let mut mismatches = Vec::new();
        let mut compared = 0;
        for k in dlo..=dhi {
            let lhs = dec.graded_complex(k).cohomology_dims();
            for m in self.complex.degrees() {
                let s = k - m;
                let here = e1.dim(s, m);
                let out_rank = e1.differentials.get(&(s, m)).map_or(0, Matrix::rank);
                let in_rank = e1.differentials.get(&(s + 1, m - 1)).map_or(0, Matrix::rank);
                let rhs = here - out_rank - in_rank;
                let l = lhs.get(&m).copied().unwrap_or(0);
                compared += 1;
                if l != rhs {
                    mismatches.push(DecMismatch { index: k, degree: m, dec_side: l, e1_side: rhs });
                }
            }
        }
        DecCheck { holds: mismatches.is_empty(), compared, mismatches }
    }

    /// `τ_{≤n}` as a filtered complex on `C^{<n} ⊕ ker d^n`, with `J` restricted.
    pub fn good_truncation(&self, n: i64) -> FilteredComplex {
        let subs: BTreeMap<i64, Subspace> = self
            .complex
            .degrees()
            .map(|m| {
                let s = if m < n {
                    Subspace::full(self.complex.dim(m))
                } else if m == n {
                    self.complex.cycles(m)
                } else {
                    Subspace::zero(self.complex.dim(m))
                };
                (m, s)
            })
            .collect();
        let complex = self.complex.subcomplex(&subs);
        let filt = self
            .complex
            .degrees()
            .map(|m| self.filt[(m - self.complex.lo) as usize].restrict(&subs[&m]).unwrap())
            .collect();
        FilteredComplex { complex, filt }
    }

    /// The filtration by good truncations: `J_k C^m = C^m (m < k)`,
    /// `ker d (m = k)`, `0 (m > k)`.
    pub fn truncation_filtration(c: &Complex) -> FilteredComplex {
        let (lo, hi) = (*c.degrees().start(), *c.degrees().end());
        let filt = c
            .degrees()
            .map(|m| {
                let dim = c.dim(m);
                FilteredSpace::from_fn(dim, Direction::Increasing, lo, hi, Subspace::zero(dim), |k| {
                    if m < k {
                        Subspace::full(dim)
                    } else if m == k {
                        c.cycles(m)
                    } else {
                        Subspace::zero(dim)
                    }
                })
                .expect("nested")
            })
            .collect();
        FilteredComplex::new(c.clone(), filt).expect("truncations are subcomplexes")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Convergence {
    pub converges: bool,
    pub e_infinity: Vec<((i64, i64), usize)>,
    pub graded_cohomology: Vec<((i64, i64), usize)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DecMismatch {
    pub index: i64,
    pub degree: i64,
    pub dec_side: usize,
    pub e1_side: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DecCheck {
    pub holds: bool,
    pub compared: usize,
    pub mismatches: Vec<DecMismatch>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point_filtration(dim: usize, index: i64) -> FilteredSpace {
        FilteredSpace::trivial(dim, Direction::Increasing, index)
    }

    /// `C^0 = ⟨x⟩` in `J_2`, `C^1 = ⟨y⟩` in `J_0`, `dx = y`.
    fn d2_fixture() -> FilteredComplex {
        let c = Complex::new(0, vec![1, 1], vec![Matrix::from_i64(&[&[1]])]).unwrap();
        FilteredComplex::new(c, vec![point_filtration(1, 2), point_filtration(1, 0)]).unwrap()
    }

    #[test]
    fn zero_differential_pages_constant() {
        let c = Complex::new(0, vec![2, 1], vec![Matrix::zeros(1, 2)]).unwrap();
        let fc = FilteredComplex::new(c, vec![point_filtration(2, 0), point_filtration(1, 1)]).unwrap();
        let e0 = fc.page(0).unwrap().entries();
        for r in 1..4 {
            let p = fc.page(r).unwrap();
            assert_eq!(p.entries(), e0);
            assert_eq!(p.total_rank(), 0);
        }
    }

    #[test]
    fn d2_has_rank_one() {
        let fc = d2_fixture();
        assert_eq!(fc.page(1).unwrap().total_rank(), 0);
        let e2 = fc.page(2).unwrap();
        assert_eq!(e2.total_rank(), 1);
        assert_eq!(fc.page(3).unwrap().total_dim(), 0);
        assert!(fc.convergence().converges);
        assert!(fc.dec_e1_check().holds);
    }

    #[test]
    fn decalage_of_trivial_filtration() {
        let c = Complex::new(0, vec![1, 2], vec![Matrix::zeros(2, 1)]).unwrap();
        let fc = FilteredComplex::new(c, vec![point_filtration(1, 0), point_filtration(2, 0)]).unwrap();
        let dec = fc.decalage();
        for n in 0..=1 {
            for r in -2..4 {
                let want = if r >= n { fc.complex().dim(n) } else { 0 };
                assert_eq!(dec.j(r, n).dim(), want, "r={r} n={n}");
            }
        }
    }

    #[test]
    fn iso_complex_dec_pieces_acyclic() {
        let c = Complex::new(0, vec![1, 1], vec![Matrix::from_i64(&[&[3]])]).unwrap();
        let fc = FilteredComplex::new(c, vec![point_filtration(1, 0), point_filtration(1, 0)]).unwrap();
        let dec = fc.decalage();
        let (lo, hi) = dec.window();
        for k in lo..=hi {
            assert!(dec.graded_complex(k).cohomology_dims().values().all(|&h| h == 0));
        }
    }

    #[test]
    fn truncation_of_iso_is_acyclic() {
        let c = Complex::new(0, vec![1, 1], vec![Matrix::from_i64(&[&[1]])]).unwrap();
        let fc = FilteredComplex::new(c, vec![point_filtration(1, 0), point_filtration(1, 0)]).unwrap();
        let t = fc.good_truncation(0);
        assert!(t.complex().cohomology_dims().values().all(|&h| h == 0));
    }

    #[test]
    fn incompatible_filtration_rejected() {
        let c = Complex::new(0, vec![1, 1], vec![Matrix::from_i64(&[&[1]])]).unwrap();
        let r = FilteredComplex::new(c, vec![point_filtration(1, 0), point_filtration(1, 1)]);
        assert!(matches!(r, Err(SpectralError::NotCompatible { .. })));
    }
}

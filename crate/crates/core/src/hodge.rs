//! Pure and mixed Hodge structures, bigraded spaces and the Deligne splitting.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exact::{ExactError, Matrix, Quotient, Subspace, Vector};
use crate::filtration::{Direction, FilteredSpace, FiltrationError};
use crate::rees::DoubleReesModule;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, thiserror::Error)]
pub enum HodgeError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
    #[error("weight filtration is not defined over the rationals")]
    WeightNotReal,
    #[error("not a mixed Hodge structure: {0}")]
    Invalid(MhsFailure),
    #[error("pieces do not form a direct sum decomposition of the whole space")]
    NotDirectSum,
    #[error("conjugate of piece ({p},{q}) is not piece ({q},{p})")]
    ConjugationMismatch { p: i64, q: i64 },
    #[error("subspace {0} is not defined over the rationals")]
    NotReal(i64),
}

/// Why a candidate mixed Hodge structure was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum MhsFailure {
    NonHausdorffWeight { index: i64 },
    NonExhaustiveWeight { index: i64 },
    NonExhaustiveHodge { index: i64 },
    NotOpposed { weight: i64, p: i64 },
}

impl std::fmt::Display for MhsFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MhsFailure::NonHausdorffWeight { index } => write!(f, "weight filtration not Hausdorff (W_{index} ≠ 0)"),
            MhsFailure::NonExhaustiveWeight { index } => write!(f, "weight filtration not exhaustive (W_{index} ≠ V)"),
            MhsFailure::NonExhaustiveHodge { index } => write!(f, "Hodge filtration not exhaustive (F^{index} ≠ V)"),
            MhsFailure::NotOpposed { weight, p } => write!(f, "gr^W_{weight} is not pure: fails at p = {p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PureCheck {
    pub pure: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<i64>,
}

/// Whether `V ⊗ ℚ(i) = F^p ⊕ conj(F^{n+1−p})` for every `p`. Indices are
/// scanned from the top down, so the witness is the largest failing `p`.
pub fn validate_pure(f: &FilteredSpace, n: i64) -> PureCheck {
    let dim = f.ambient();
    let (lo, hi) = f.bounds();
    let fbar = f.conj();
    let start = hi.max(n + 1 - lo) + 1;
    let end = lo.min(n - hi) - 1;
    for p in (end..=start).rev() {
        let a = f.at(p);
        let b = fbar.at(n + 1 - p);
        if a.dim() + b.dim() != dim || !a.intersect(b).unwrap().is_zero() {
            return PureCheck { pure: false, witness: Some(p) };
        }
    }
    PureCheck { pure: true, witness: None }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mhs {
    dim: usize,
    weight: FilteredSpace,
    hodge: FilteredSpace,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightReport {
    pub weight: i64,
    pub dim: usize,
    pub pure: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<i64>,
    /// Hodge numbers `h^{p,q}` of the graded piece, as `[p, q, h]`.
    pub hodge_numbers: Vec<(i64, i64, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MhsValidation {
    pub opposed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<MhsFailure>,
    pub weights: Vec<WeightReport>,
}

impl Mhs {
    /// Checks shapes, nesting, rationality of `W` and exhaustiveness of `W`.
    /// Opposedness is checked separately by [`Mhs::validate`].
    pub fn new(weight: FilteredSpace, hodge: FilteredSpace) -> Result<Self, HodgeError> {
        let dim = weight.ambient();
        if hodge.ambient() != dim {
            return Err(ExactError::DimensionMismatch { expected: dim, found: hodge.ambient() }.into());
        }
        if weight.direction() != Direction::Increasing || hodge.direction() != Direction::Decreasing {
            return Err(FiltrationError::DirectionMismatch.into());
        }
        let (lo, hi) = weight.bounds();
        if (lo - 1..=hi).any(|n| !weight.at(n).is_real()) {
            return Err(HodgeError::WeightNotReal);
        }
        Ok(Self { dim, weight, hodge })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight(&self) -> &FilteredSpace {
        &self.weight
    }

    pub fn hodge(&self) -> &FilteredSpace {
        &self.hodge
    }

    /// `gr^W_n` with its induced Hodge filtration, in quotient coordinates.
    pub fn graded(&self) -> Vec<(i64, Quotient, FilteredSpace)> {
        self.weight
            .graded_pieces()
            .into_iter()
            .filter(|g| g.dim() > 0)
            .map(|g| {
                let f = self.hodge.on_quotient(&g.quotient).expect("same ambient");
                (g.index, g.quotient, f)
            })
            .collect()
    }

    pub fn validate(&self) -> MhsValidation {
        let wr = self.weight.checks();
        let mut failure = None;
        if let Some(index) = wr.hausdorff_witness {
            failure = Some(MhsFailure::NonHausdorffWeight { index });
        } else if let Some(index) = wr.exhaustive_witness {
            failure = Some(MhsFailure::NonExhaustiveWeight { index });
        } else if let Some(index) = self.hodge.checks().exhaustive_witness {
            failure = Some(MhsFailure::NonExhaustiveHodge { index });
        }
        if failure.is_some() {
            return MhsValidation { opposed: false, failure, weights: Vec::new() };
        }
        let mut weights = Vec::new();
        for (n, q, f) in self.graded() {
            let check = validate_pure(&f, n);
            if let (None, Some(p)) = (&failure, check.witness) {
                failure = Some(MhsFailure::NotOpposed { weight: n, p });
            }
            let hodge_numbers = match DoubleReesModule::new(&f) {
                Ok(d) => d.bigraded_dims().into_iter().map(|((p, q), h)| (p, q, h)).collect(),
                Err(_) => Vec::new(),
            };
            weights.push(WeightReport { weight: n, dim: q.dim(), pure: check.pure, witness: check.witness, hodge_numbers });
        }
        MhsValidation { opposed: failure.is_none(), failure, weights }
    }

    pub fn require_valid(&self) -> Result<(), HodgeError> {
        match self.validate().failure {
            Some(f) => Err(HodgeError::Invalid(f)),
            None => Ok(()),
        }
    }

    /// The Tate twist `M(n)`: `W_k(M(n)) = W_{k+2n}M`, `F^p(M(n)) = F^{p+n}M`.
    pub fn tate_twist(&self, n: i64) -> Self {
        Self { dim: self.dim, weight: self.weight.shift(2 * n), hodge: self.hodge.shift(n) }
    }

    /// `ℝ(n)`: one-dimensional of type `(−n,−n)`.
    pub fn tate(n: i64) -> Self {
        Self::new(
            FilteredSpace::trivial(1, Direction::Increasing, -2 * n),
            FilteredSpace::trivial(1, Direction::Decreasing, -n),
        )
        .unwrap()
    }

    pub fn tensor(&self, o: &Mhs) -> Self {
        Self {
            dim: self.dim * o.dim,
            weight: self.weight.tensor(&o.weight).unwrap(),
            hodge: self.hodge.tensor(&o.hodge).unwrap(),
        }
    }

    pub fn dual(&self) -> Self {
        Self { dim: self.dim, weight: self.weight.dual(), hodge: self.hodge.dual() }
    }

    /// `Hom(self, o) = self^∨ ⊗ o`; a map `f` has coordinate `(i, j) ↦ f_{ji}`
    /// at index `i * dim o + j`.
    pub fn hom(&self, o: &Mhs) -> Self {
        self.dual().tensor(o)
    }

    pub fn direct_sum(&self, o: &Mhs) -> Self {
        Self {
            dim: self.dim + o.dim,
            weight: self.weight.direct_sum(&o.weight).unwrap(),
            hodge: self.hodge.direct_sum(&o.hodge).unwrap(),
        }
    }

    /// Normalizes window representation so that equal filtrations compare equal.
    pub fn trimmed(&self) -> Self {
        Self { dim: self.dim, weight: self.weight.trimmed(), hodge: self.hodge.trimmed() }
    }

    /// Filtration equality, independent of how the index windows are stored.
    pub fn same_filtrations(&self, o: &Mhs) -> bool {
        self.dim == o.dim && same_filtration(&self.weight, &o.weight) && same_filtration(&self.hodge, &o.hodge)
    }

    /// Transports both filtrations along an invertible map `phi`.
    pub fn transport(&self, phi: &Matrix) -> Self {
        Self {
            dim: self.dim,
            weight: self.weight.image(phi).unwrap(),
            hodge: self.hodge.image(phi).unwrap(),
        }
    }

    /// The Deligne splitting
    /// `I^{pq} = F^p ∩ W_{p+q} ∩ (conj F^q ∩ W_{p+q} + Σ_{j≥2} conj F^{q−j+1} ∩ W_{p+q−j})`.
    pub fn deligne_bigrading(&self) -> Result<BTreeMap<(i64, i64), Subspace>, HodgeError> {
        self.require_valid()?;
        let (flo, fhi) = self.hodge.bounds();
        let (wlo, _) = self.weight.bounds();
        let fbar = self.hodge.conj();
        let mut out = BTreeMap::new();
        for p in flo..=fhi {
            for q in flo..=fhi {
                let n = p + q;
                let w = self.weight.at(n);
                let left = self.hodge.at(p).intersect(w)?;
                if left.is_zero() {
                    continue;
                }
                let mut right = fbar.at(q).intersect(w)?;
                for j in 2..=(n - wlo + 1).max(2) {
                    right = right.sum(&fbar.at(q - j + 1).intersect(self.weight.at(n - j))?)?;
                }
                let i = left.intersect(&right)?;
                if !i.is_zero() {
                    out.insert((p, q), i);
                }
            }
        }
        Ok(out)
    }
}

pub fn same_filtration(a: &FilteredSpace, b: &FilteredSpace) -> bool {
    if a.direction() != b.direction() || a.ambient() != b.ambient() {
        return false;
    }
    let (l1, h1) = a.bounds();
    let (l2, h2) = b.bounds();
    (l1.min(l2) - 1..=h1.max(h2) + 1).all(|n| a.at(n) == b.at(n))
}

/// A splitting `V ⊗ ℚ(i) = ⊕ V^{pq}` with `conj V^{pq} = V^{qp}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BigradedSpace {
    dim: usize,
    pieces: BTreeMap<(i64, i64), Subspace>,
}

impl BigradedSpace {
    pub fn new(dim: usize, pieces: BTreeMap<(i64, i64), Subspace>) -> Result<Self, HodgeError> {
        let pieces: BTreeMap<_, _> = pieces.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        let total: usize = pieces.values().map(Subspace::dim).sum();
        let mut span = Subspace::zero(dim);
        for s in pieces.values() {
            if s.ambient() != dim {
                return Err(ExactError::DimensionMismatch { expected: dim, found: s.ambient() }.into());
            }
            span = span.sum(s)?;
        }
        if total != dim || !span.is_full() {
            return Err(HodgeError::NotDirectSum);
        }
        for (&(p, q), s) in &pieces {
            if pieces.get(&(q, p)) != Some(&s.conj()) {
                return Err(HodgeError::ConjugationMismatch { p, q });
            }
        }
        Ok(Self { dim, pieces })
    }

    /// Bigrading of a split space: each weight-graded piece given by its
    /// standard coordinates and type.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &BTreeMap<(i64, i64), Subspace> {
        &self.pieces
    }

    pub fn piece(&self, p: i64, q: i64) -> Subspace {
        self.pieces.get(&(p, q)).cloned().unwrap_or_else(|| Subspace::zero(self.dim))
    }

    pub fn weights(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self.pieces.keys().map(|(p, q)| p + q).collect();
        w.sort();
        w.dedup();
        w
    }

    /// `𝒲_n = ⊕_{p+q=n} V^{pq}`; conjugation-stable, hence with a rational echelon basis.
    pub fn weight_space(&self, n: i64) -> Subspace {
        self.span_where(|p, q| p + q == n)
    }

    fn span_where<F: Fn(i64, i64) -> bool>(&self, f: F) -> Subspace {
        let mut s = Subspace::zero(self.dim);
        for (&(p, q), v) in &self.pieces {
            if f(p, q) {
                s = s.sum(v).unwrap();
            }
        }
        s
    }

    pub fn weight_grading(&self) -> WeightGradedSpace {
        let pieces = self.weights().into_iter().map(|n| (n, self.weight_space(n))).collect();
        WeightGradedSpace::new(self.dim, pieces).expect("weight spaces of a bigrading")
    }

    pub fn weight_filtration(&self) -> FilteredSpace {
        let w = self.weights();
        let (lo, hi) = (*w.first().unwrap_or(&0), *w.last().unwrap_or(&0));
        FilteredSpace::from_fn(self.dim, Direction::Increasing, lo, hi, Subspace::zero(self.dim), |n| {
            self.span_where(|p, q| p + q <= n)
        })
        .unwrap()
    }

    pub fn hodge_filtration(&self) -> FilteredSpace {
        let ps: Vec<i64> = self.pieces.keys().map(|k| k.0).collect();
        let (lo, hi) = (ps.iter().copied().min().unwrap_or(0), ps.iter().copied().max().unwrap_or(0));
        FilteredSpace::from_fn(self.dim, Direction::Decreasing, lo, hi, Subspace::zero(self.dim), |n| {
            self.span_where(|p, _| p >= n)
        })
        .unwrap()
    }

    pub fn split_mhs(&self) -> Mhs {
        Mhs::new(self.weight_filtration(), self.hodge_filtration()).unwrap()
    }

    /// Columns: the echelon bases of the pieces, in key order.
    pub fn adapted_basis(&self) -> Matrix {
        let cols: Vec<Vector> = self.pieces.values().flat_map(|s| s.basis().iter().cloned()).collect();
        Matrix::from_columns(&cols, self.dim)
    }

    /// Projections onto each piece along the others.
    pub fn projectors(&self) -> BTreeMap<(i64, i64), Matrix> {
        let b = self.adapted_basis();
        let inv = b.inverse().expect("pieces form a basis");
        let mut out = BTreeMap::new();
        let mut offset = 0;
        for (&k, s) in &self.pieces {
            let d = s.dim();
            let bk = b.block(0..self.dim, offset..offset + d);
            let ik = inv.block(offset..offset + d, 0..self.dim);
            out.insert(k, &bk * &ik);
            offset += d;
        }
        out
    }

    /// Decomposes `m` into components of type `(r, s)`, i.e. mapping
    /// `V^{pq}` into `V^{p+r, q+s}`. Zero components are omitted.
    pub fn type_components(&self, m: &Matrix) -> BTreeMap<(i64, i64), Matrix> {
        let proj = self.projectors();
        let mut out: BTreeMap<(i64, i64), Matrix> = BTreeMap::new();
        for (&(p, q), pi) in &proj {
            let mp = m * pi;
            for (&(p2, q2), pi2) in &proj {
                let c = pi2 * &mp;
                if c.is_zero() {
                    continue;
                }
                let key = (p2 - p, q2 - q);
                match out.get_mut(&key) {
                    Some(acc) => *acc = &*acc + &c,
                    None => {
                        out.insert(key, c);
                    }
                }
            }
        }
        out
    }

    /// Whether `m` maps every `V^{pq}` into `V^{p+r,q+s}`.
    pub fn has_type(&self, m: &Matrix, r: i64, s: i64) -> bool {
        self.type_components(m).keys().all(|&k| k == (r, s))
    }

    pub fn tate_twist(&self, n: i64) -> Self {
        let pieces = self.pieces.iter().map(|(&(p, q), s)| ((p - n, q - n), s.clone())).collect();
        Self { dim: self.dim, pieces }
    }

    pub fn tensor(&self, o: &BigradedSpace) -> Self {
        let mut pieces: BTreeMap<(i64, i64), Subspace> = BTreeMap::new();
        let dim = self.dim * o.dim;
        for (&(p, q), a) in &self.pieces {
            for (&(r, s), b) in &o.pieces {
                let t = a.tensor(b);
                let e = pieces.entry((p + r, q + s)).or_insert_with(|| Subspace::zero(dim));
                *e = e.sum(&t).unwrap();
            }
        }
        Self { dim, pieces }
    }

    /// `(V^∨)^{pq}` = annihilator of all pieces other than `V^{−p,−q}`.
    pub fn dual(&self) -> Self {
        let mut pieces = BTreeMap::new();
        for &(p, q) in self.pieces.keys() {
            let others = self.span_where(|a, b| (a, b) != (p, q));
            pieces.insert((-p, -q), others.annihilator());
        }
        Self { dim: self.dim, pieces }
    }

    pub fn direct_sum(&self, o: &BigradedSpace) -> Self {
        let mut keys: Vec<(i64, i64)> = self.pieces.keys().chain(o.pieces.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        let pieces = keys.into_iter().map(|(p, q)| ((p, q), self.piece(p, q).direct_sum(&o.piece(p, q)))).collect();
        Self { dim: self.dim + o.dim, pieces }
    }

    /// One-dimensional `ℝ(n)`.
    pub fn tate(n: i64) -> Self {
        Self { dim: 1, pieces: BTreeMap::from([((-n, -n), Subspace::full(1))]) }
    }
}

/// `V = ⊕ 𝒲_n V` with rational pieces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightGradedSpace {
    dim: usize,
    pieces: BTreeMap<i64, Subspace>,
}

impl WeightGradedSpace {
    pub fn new(dim: usize, pieces: BTreeMap<i64, Subspace>) -> Result<Self, HodgeError> {
        let pieces: BTreeMap<_, _> = pieces.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        let mut span = Subspace::zero(dim);
        let mut total = 0;
        for (&n, s) in &pieces {
            if s.ambient() != dim {
                return Err(ExactError::DimensionMismatch { expected: dim, found: s.ambient() }.into());
            }
            if !s.is_real() {
                return Err(HodgeError::NotReal(n));
            }
            span = span.sum(s)?;
            total += s.dim();
        }
        if total != dim || !span.is_full() {
            return Err(HodgeError::NotDirectSum);
        }
        Ok(Self { dim, pieces })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &BTreeMap<i64, Subspace> {
        &self.pieces
    }

    pub fn piece(&self, n: i64) -> Subspace {
        self.pieces.get(&n).cloned().unwrap_or_else(|| Subspace::zero(self.dim))
    }

    pub fn weight_filtration(&self) -> FilteredSpace {
        let lo = self.pieces.keys().next().copied().unwrap_or(0);
        let hi = self.pieces.keys().last().copied().unwrap_or(0);
        FilteredSpace::from_fn(self.dim, Direction::Increasing, lo, hi, Subspace::zero(self.dim), |n| {
            self.pieces.range(..=n).fold(Subspace::zero(self.dim), |acc, (_, s)| acc.sum(s).unwrap())
        })
        .unwrap()
    }

    pub fn adapted_basis(&self) -> Matrix {
        let cols: Vec<Vector> = self.pieces.values().flat_map(|s| s.basis().iter().cloned()).collect();
        Matrix::from_columns(&cols, self.dim)
    }

    pub fn projectors(&self) -> BTreeMap<i64, Matrix> {
        let b = self.adapted_basis();
        let inv = b.inverse().expect("pieces form a basis");
        let mut out = BTreeMap::new();
        let mut offset = 0;
        for (&k, s) in &self.pieces {
            let d = s.dim();
            out.insert(k, &b.block(0..self.dim, offset..offset + d) * &inv.block(offset..offset + d, 0..self.dim));
            offset += d;
        }
        out
    }

    /// Components of `m` by weight shift.
    pub fn weight_components(&self, m: &Matrix) -> BTreeMap<i64, Matrix> {
        let proj = self.projectors();
        let mut out: BTreeMap<i64, Matrix> = BTreeMap::new();
        for (&a, pa) in &proj {
            let mp = m * pa;
            for (&b, pb) in &proj {
                let c = pb * &mp;
                if c.is_zero() {
                    continue;
                }
                match out.get_mut(&(b - a)) {
                    Some(acc) => *acc = &*acc + &c,
                    None => {
                        out.insert(b - a, c);
                    }
                }
            }
        }
        out
    }

    pub fn tensor(&self, o: &WeightGradedSpace) -> Self {
        let dim = self.dim * o.dim;
        let mut pieces: BTreeMap<i64, Subspace> = BTreeMap::new();
        for (&a, x) in &self.pieces {
            for (&b, y) in &o.pieces {
                let e = pieces.entry(a + b).or_insert_with(|| Subspace::zero(dim));
                *e = e.sum(&x.tensor(y)).unwrap();
            }
        }
        Self { dim, pieces }
    }

    pub fn dual(&self) -> Self {
        let mut pieces = BTreeMap::new();
        for &n in self.pieces.keys() {
            let others = self.pieces.iter().filter(|(&k, _)| k != n).fold(Subspace::zero(self.dim), |acc, (_, s)| acc.sum(s).unwrap());
            pieces.insert(-n, others.annihilator());
        }
        Self { dim: self.dim, pieces }
    }

    pub fn mts_report(&self) -> MtsReport {
        MtsReport::from_weight_filtration(&self.weight_filtration())
    }
}

/// Ranks of the weight-graded pieces of a mixed twistor structure together
/// with their slopes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MtsReport {
    pub pieces: Vec<SlopePiece>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopePiece {
    pub weight: i64,
    pub rank: usize,
    pub slope: i64,
}

impl MtsReport {
    pub fn from_weight_filtration(w: &FilteredSpace) -> Self {
        let pieces = w
            .graded_dims()
            .into_iter()
            .filter(|&(_, d)| d > 0)
            .map(|(n, rank)| SlopePiece { weight: n, rank, slope: n })
            .collect();
        Self { pieces }
    }

    pub fn total_rank(&self) -> usize {
        self.pieces.iter().map(|p| p.rank).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Scalar;
    use crate::filtration::span_i64;

    fn elliptic_shape() -> FilteredSpace {
        let z: Vector = vec![Scalar::one(), Scalar::i()];
        FilteredSpace::new(2, Direction::Decreasing, 0, vec![Subspace::full(2), Subspace::span(2, [z]).unwrap()]).unwrap()
    }

    pub(crate) fn kummer(c: Scalar) -> Mhs {
        let w = FilteredSpace::new(2, Direction::Increasing, -2, vec![span_i64(2, &[&[0, 1]]), span_i64(2, &[&[0, 1]]), Subspace::full(2)])
            .unwrap();
        let line = Subspace::span(2, [vec![Scalar::one(), &Scalar::i() * &c]]).unwrap();
        let f = FilteredSpace::new(2, Direction::Decreasing, -1, vec![Subspace::full(2), line]).unwrap();
        Mhs::new(w, f).unwrap()
    }

    #[test]
    fn tate_one_is_pure_of_weight_minus_two() {
        let m = Mhs::tate(1);
        assert!(validate_pure(m.hodge(), -2).pure);
        assert!(m.validate().opposed);
    }

    #[test]
    fn elliptic_shape_weight_one_and_zero() {
        assert!(validate_pure(&elliptic_shape(), 1).pure);
        assert_eq!(validate_pure(&elliptic_shape(), 0), PureCheck { pure: false, witness: Some(1) });
    }

    #[test]
    fn kummer_valid_and_perturbation_invalid() {
        for c in ["1", "-2", "7/3", "0"] {
            assert!(kummer(c.parse().unwrap()).validate().opposed, "c = {c}");
        }
        let m = kummer(Scalar::one());
        let bad = FilteredSpace::new(2, Direction::Decreasing, -1, vec![Subspace::full(2), span_i64(2, &[&[0, 1]])]).unwrap();
        let bad = Mhs::new(m.weight().clone(), bad).unwrap();
        let v = bad.validate();
        assert!(!v.opposed);
        let w0 = v.weights.iter().find(|w| w.weight == 0).unwrap();
        assert!(!w0.pure);
    }

    #[test]
    fn kummer_deligne_splitting() {
        let i = kummer(Scalar::one()).deligne_bigrading().unwrap();
        let keys: Vec<_> = i.keys().copied().collect();
        assert_eq!(keys, vec![(-1, -1), (0, 0)]);
        assert_eq!(i[&(0, 0)], Subspace::span(2, [vec![Scalar::one(), Scalar::i()]]).unwrap());
        assert_eq!(i[&(-1, -1)], span_i64(2, &[&[0, 1]]));
    }

    #[test]
    fn twist_roundtrip_and_tensor() {
        let m = kummer(Scalar::int(3));
        assert!(m.tate_twist(3).tate_twist(-3).same_filtrations(&m));
        let t = Mhs::tate(2).tensor(&Mhs::tate(-5));
        assert!(t.same_filtrations(&Mhs::tate(-3)));
        assert!(Mhs::tate(0).tate_twist(1).same_filtrations(&Mhs::tate(1)));
    }

    #[test]
    fn dual_of_kummer() {
        let d = kummer(Scalar::int(2)).dual();
        let v = d.validate();
        assert!(v.opposed);
        let ws: Vec<i64> = v.weights.iter().map(|w| w.weight).collect();
        assert_eq!(ws, vec![0, 2]);
        assert!(d.dual().same_filtrations(&kummer(Scalar::int(2))));
    }

    #[test]
    fn identity_lies_in_w0_f0_of_end() {
        let m = kummer(Scalar::ratio(7, 3));
        let h = m.hom(&m);
        let id: Vector = (0..4).map(|k| if k == 0 || k == 3 { Scalar::one() } else { Scalar::zero() }).collect();
        assert!(h.weight().at(0).contains(&id));
        assert!(h.hodge().at(0).contains(&id));
    }

    #[test]
    fn non_hausdorff_is_distinct_failure() {
        let w = FilteredSpace::with_floor(1, Direction::Increasing, 0, vec![Subspace::full(1)], Subspace::full(1)).unwrap();
        let m = Mhs::new(w, FilteredSpace::trivial(1, Direction::Decreasing, 0)).unwrap();
        assert_eq!(m.validate().failure, Some(MhsFailure::NonHausdorffWeight { index: -1 }));
    }
}

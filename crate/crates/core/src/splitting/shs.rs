//! Split Hodge structures `(V, β)` and their conversions to mixed Hodge
//! structures and to unipotent `d`-representations.

use std::collections::BTreeMap;

use serde::Serialize;

use super::pairing::{integral_pairing, Endpoints};
use super::SplittingError;
use crate::exact::{Matrix, Scalar};
use crate::hodge::{BigradedSpace, Mhs};

/// A bigraded space with a weight-lowering operator `β = Σ β^{ab}`, where
/// `β^{ab}` has type `(−a−1, −b−1)` and `conj β^{ab} = β^{ba}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShsObject {
    grading: BigradedSpace,
    beta: BTreeMap<(u32, u32), Matrix>,
}

/// A bigraded space with a unipotent `d` such that `conj d = d^{−1}` and
/// `d − id` maps `V^{pq}` into `⊕_{r<p, s<q} V^{rs}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frep {
    grading: BigradedSpace,
    d: Matrix,
}

/// Why a Leibniz check failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeibnizWitness {
    pub a: u32,
    pub b: u32,
    /// Basis indices `(i, j)` of the failing product `e_i · e_j`, or `(i, i)`
    /// for the unit when `β(1) ≠ 0`.
    pub pair: (usize, usize),
}

impl ShsObject {
    pub fn new(grading: BigradedSpace, beta: BTreeMap<(u32, u32), Matrix>) -> Result<Self, SplittingError> {
        let n = grading.dim();
        let beta: BTreeMap<_, _> = beta.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        for (&(a, b), m) in &beta {
            if m.shape() != (n, n) {
                return Err(SplittingError::Shape { a, b });
            }
            let (r, s) = (-(a as i64) - 1, -(b as i64) - 1);
            if !grading.has_type(m, r, s) {
                return Err(SplittingError::WrongType { a, b });
            }
        }
        for (&(a, b), m) in &beta {
            let mirror = beta.get(&(b, a));
            if mirror != Some(&m.conj()) {
                return Err(SplittingError::NotReal { a, b });
            }
        }
        Ok(Self { grading, beta })
    }

    /// `β = 0`.
    pub fn split(grading: BigradedSpace) -> Self {
        Self { grading, beta: BTreeMap::new() }
    }

    pub fn grading(&self) -> &BigradedSpace {
        &self.grading
    }

    pub fn beta(&self) -> &BTreeMap<(u32, u32), Matrix> {
        &self.beta
    }

    pub fn dim(&self) -> usize {
        self.grading.dim()
    }

    pub fn beta_component(&self, a: u32, b: u32) -> Matrix {
        self.beta.get(&(a, b)).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(), self.dim()))
    }

    /// `Σ_{ab} (∫ (x−i)^a (x+i)^b dx) β^{ab}` over the given path.
    pub fn integrated(&self, ends: Endpoints) -> Matrix {
        let n = self.dim();
        self.beta
            .iter()
            .fold(Matrix::zeros(n, n), |acc, (&(a, b), m)| &acc + &m.scale(&integral_pairing(a, b, ends)))
    }

    /// The mixed Hodge structure `(V, W, exp(∫β) F)` where `W` and `F` come
    /// from the bigrading and the path is `0 → i` by default.
    pub fn to_mhs(&self) -> Mhs {
        self.to_mhs_with(Endpoints::ZeroToI)
    }

    pub fn to_mhs_with(&self, ends: Endpoints) -> Mhs {
        let g = self.integrated(ends).exp_nilpotent().expect("β lowers weight");
        let split = self.grading.split_mhs();
        let hodge = split.hodge().image(&g).expect("square");
        Mhs::new(split.weight().clone(), hodge).expect("weight filtration unchanged")
    }

    /// `d = exp(∫_{−i}^{i} β)`.
    pub fn to_frep(&self) -> Frep {
        let d = self.integrated(Endpoints::MinusIToI).exp_nilpotent().expect("β lowers weight");
        Frep { grading: self.grading.clone(), d }
    }

    pub fn tensor(&self, o: &ShsObject) -> ShsObject {
        let (n, m) = (self.dim(), o.dim());
        let keys: std::collections::BTreeSet<_> = self.beta.keys().chain(o.beta.keys()).copied().collect();
        let beta = keys
            .into_iter()
            .map(|(a, b)| {
                let x = self.beta_component(a, b).kron(&Matrix::identity(m));
                let y = Matrix::identity(n).kron(&o.beta_component(a, b));
                ((a, b), &x + &y)
            })
            .filter(|(_, m)| !m.is_zero())
            .collect();
        ShsObject { grading: self.grading.tensor(&o.grading), beta }
    }

    /// Dual object with `β^∨(f) = −f ∘ β`, i.e. the matrix `−βᵀ`.
    pub fn dual(&self) -> ShsObject {
        let beta = self.beta.iter().map(|(&k, m)| (k, -&m.transpose())).collect();
        ShsObject { grading: self.grading.dual(), beta }
    }

    pub fn direct_sum(&self, o: &ShsObject) -> ShsObject {
        let (n, m) = (self.dim(), o.dim());
        let keys: std::collections::BTreeSet<_> = self.beta.keys().chain(o.beta.keys()).copied().collect();
        let beta = keys
            .into_iter()
            .map(|k| {
                let mut out = Matrix::zeros(n + m, n + m);
                let (x, y) = (self.beta_component(k.0, k.1), o.beta_component(k.0, k.1));
                for i in 0..n {
                    for j in 0..n {
                        out.set(i, j, x.get(i, j).clone());
                    }
                }
                for i in 0..m {
                    for j in 0..m {
                        out.set(n + i, n + j, y.get(i, j).clone());
                    }
                }
                (k, out)
            })
            .collect();
        ShsObject { grading: self.grading.direct_sum(&o.grading), beta }
    }

    pub fn tate_twist(&self, n: i64) -> ShsObject {
        ShsObject { grading: self.grading.tate_twist(n), beta: self.beta.clone() }
    }

    /// Whether every `β^{ab}` is a derivation of the product `mult`
    /// (an `n × n²` matrix, `e_i e_j ↦ column i·n + j`) and kills `unit`.
    pub fn algebra_check(&self, mult: &Matrix, unit: &[Scalar]) -> Result<(), LeibnizWitness> {
        leibniz_check(self.dim(), &self.beta, mult, unit)
    }
}

/// Leibniz rule and unit check shared by the Hodge and twistor variants.
pub fn leibniz_check(
    n: usize,
    beta: &BTreeMap<(u32, u32), Matrix>,
    mult: &Matrix,
    unit: &[Scalar],
) -> Result<(), LeibnizWitness> {
    assert_eq!(mult.shape(), (n, n * n), "product must be n × n²");
    let unit_idx = unit.iter().position(|x| !x.is_zero()).unwrap_or(0);
    for (&(a, b), m) in beta {
        if !crate::exact::matrix::is_zero_vector(&m.apply(unit)) {
            return Err(LeibnizWitness { a, b, pair: (unit_idx, unit_idx) });
        }
        for i in 0..n {
            let bi = m.col(i);
            for j in 0..n {
                let bj = m.col(j);
                let prod = mult.col(i * n + j);
                let lhs = m.apply(&prod);
                let mut rhs = vec![Scalar::zero(); n];
                for k in 0..n {
                    crate::exact::matrix::add_scaled(&mut rhs, &bi[k], &mult.col(k * n + j));
                    crate::exact::matrix::add_scaled(&mut rhs, &bj[k], &mult.col(i * n + k));
                }
                if lhs != rhs {
                    return Err(LeibnizWitness { a, b, pair: (i, j) });
                }
            }
        }
    }
    Ok(())
}

impl Frep {
    pub fn new(grading: BigradedSpace, d: Matrix) -> Result<Self, SplittingError> {
        let n = grading.dim();
        if d.shape() != (n, n) {
            return Err(SplittingError::Shape { a: 0, b: 0 });
        }
        let nil = &d - &Matrix::identity(n);
        if let Some(bad) = grading.type_components(&nil).keys().find(|&&(r, s)| r >= 0 || s >= 0) {
            return Err(SplittingError::BadComponent { r: bad.0, s: bad.1 });
        }
        let inv = d.inverse().map_err(|_| SplittingError::NotUnipotent)?;
        if d.conj() != inv {
            return Err(SplittingError::ConjNotInverse);
        }
        Ok(Self { grading, d })
    }

    pub fn grading(&self) -> &BigradedSpace {
        &self.grading
    }

    pub fn d(&self) -> &Matrix {
        &self.d
    }

    /// `δ = log d`, decomposed by type, with `β^{ab} = δ^{(−a−1,−b−1)} / ∫_{−i}^{i}(x−i)^a(x+i)^b dx`.
    pub fn to_shs(&self) -> Result<ShsObject, SplittingError> {
        let delta = self.d.log_unipotent().map_err(|_| SplittingError::NotUnipotent)?;
        let mut beta = BTreeMap::new();
        for ((r, s), m) in self.grading.type_components(&delta) {
            if r >= 0 || s >= 0 {
                return Err(SplittingError::BadComponent { r, s });
            }
            let (a, b) = ((-r - 1) as u32, (-s - 1) as u32);
            let c = integral_pairing(a, b, Endpoints::MinusIToI).inv().expect("pairing never vanishes");
            beta.insert((a, b), m.scale(&c));
        }
        ShsObject::new(self.grading.clone(), beta)
    }
}

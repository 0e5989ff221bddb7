//! Split twistor structures: a weight-graded rational space with real
//! operators `β^{mn}` lowering weight by `m + n + 2`.

use std::collections::{BTreeMap, BTreeSet};

use super::shs::{leibniz_check, LeibnizWitness};
use super::SplittingError;
use crate::exact::{Matrix, Scalar};
use crate::hodge::{MtsReport, WeightGradedSpace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StsObject {
    grading: WeightGradedSpace,
    beta: BTreeMap<(u32, u32), Matrix>,
}

impl StsObject {
    pub fn new(grading: WeightGradedSpace, beta: BTreeMap<(u32, u32), Matrix>) -> Result<Self, SplittingError> {
        let n = grading.dim();
        let beta: BTreeMap<_, _> = beta.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        for (&(m, k), b) in &beta {
            if b.shape() != (n, n) {
                return Err(SplittingError::Shape { a: m, b: k });
            }
            if !b.is_real() {
                return Err(SplittingError::NotRealTwistor { m, n: k });
            }
            let shift = -(m as i64) - (k as i64) - 2;
            if grading.weight_components(b).keys().any(|&s| s != shift) {
                return Err(SplittingError::WrongWeight { m, n: k });
            }
        }
        Ok(Self { grading, beta })
    }

    /// A pure object: one weight, `β = 0`.
    pub fn pure(dim: usize, weight: i64) -> Self {
        let g = WeightGradedSpace::new(dim, BTreeMap::from([(weight, crate::exact::Subspace::full(dim))])).unwrap();
        Self { grading: g, beta: BTreeMap::new() }
    }

    pub fn grading(&self) -> &WeightGradedSpace {
        &self.grading
    }

    pub fn beta(&self) -> &BTreeMap<(u32, u32), Matrix> {
        &self.beta
    }

    pub fn dim(&self) -> usize {
        self.grading.dim()
    }

    pub fn beta_component(&self, m: u32, n: u32) -> Matrix {
        self.beta.get(&(m, n)).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(), self.dim()))
    }

    pub fn tensor(&self, o: &StsObject) -> StsObject {
        let (n, m) = (self.dim(), o.dim());
        let keys: BTreeSet<_> = self.beta.keys().chain(o.beta.keys()).copied().collect();
        let beta = keys
            .into_iter()
            .map(|(a, b)| {
                let x = self.beta_component(a, b).kron(&Matrix::identity(m));
                let y = Matrix::identity(n).kron(&o.beta_component(a, b));
                ((a, b), &x + &y)
            })
            .filter(|(_, m)| !m.is_zero())
            .collect();
        StsObject { grading: self.grading.tensor(&o.grading), beta }
    }

    /// `β^∨(f) = −f ∘ β`.
    pub fn dual(&self) -> StsObject {
        let beta = self.beta.iter().map(|(&k, m)| (k, -&m.transpose())).collect();
        StsObject { grading: self.grading.dual(), beta }
    }

    /// Ranks and slopes of the weight-graded pieces of the associated mixed
    /// twistor structure.
    pub fn mts_report(&self) -> MtsReport {
        self.grading.mts_report()
    }

    pub fn algebra_check(&self, mult: &Matrix, unit: &[Scalar]) -> Result<(), LeibnizWitness> {
        leibniz_check(self.dim(), &self.beta, mult, unit)
    }
}

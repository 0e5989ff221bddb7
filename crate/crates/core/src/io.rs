//! File formats. Every input file is one JSON object whose `"kind"` field
//! selects the schema; scalars are strings in the exact text format (plain
//! JSON integers are accepted too).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exact::{ExactError, Matrix, Subspace, Vector};
use crate::filtration::{FilteredSpace, FiltrationBlock, FiltrationError};
use crate::hodge::{BigradedSpace, HodgeError, Mhs, WeightGradedSpace};
use crate::homotopy::defcone::LieAlgebra;
use crate::homotopy::{Cosimplicial, CosimplicialSpec, Dga, DgaSpec, GysinInput, HomotopyError};
use crate::spectral::{Complex, FilteredComplex, SpectralError};
use crate::splitting::{Component, Frep, ShsObject, SplittingError, StsObject};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("expected a {expected} document, found {found}")]
    Kind { expected: String, found: String },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    Splitting(#[from] SplittingError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Mhs(MhsDoc),
    Shs(ShsDoc),
    Sts(StsDoc),
    Frep(FrepDoc),
    Filtration(FiltrationDoc),
    Complex(ComplexDoc),
    Dga(DgaSpec),
    Gysin(GysinInput),
    Cosimplicial(CosimplicialDoc),
    Defcone(DefconeDoc),
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Document::Mhs(_) => "mhs",
            Document::Shs(_) => "shs",
            Document::Sts(_) => "sts",
            Document::Frep(_) => "frep",
            Document::Filtration(_) => "filtration",
            Document::Complex(_) => "complex",
            Document::Dga(_) => "dga",
            Document::Gysin(_) => "gysin",
            Document::Cosimplicial(_) => "cosimplicial",
            Document::Defcone(_) => "defcone",
        }
    }

    pub fn wrong_kind(&self, expected: &str) -> IoError {
        IoError::Kind { expected: expected.into(), found: self.kind().into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MhsDoc {
    pub dim: usize,
    /// Increasing weight filtration on the real space.
    pub weight: FiltrationBlock,
    /// Decreasing Hodge filtration on the complexification.
    pub hodge: FiltrationBlock,
}

impl MhsDoc {
    pub fn build(&self) -> Result<Mhs, IoError> {
        let w = FilteredSpace::from_block(self.dim, &self.weight)?;
        let f = FilteredSpace::from_block(self.dim, &self.hodge)?;
        Ok(Mhs::new(w, f)?)
    }
}

impl From<&Mhs> for MhsDoc {
    fn from(m: &Mhs) -> Self {
        MhsDoc { dim: m.dim(), weight: m.weight().to_block(), hodge: m.hodge().to_block() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceBlock {
    pub p: i64,
    pub q: i64,
    pub basis: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightBlock {
    pub weight: i64,
    pub basis: Vec<Vector>,
}

fn bigrading(dim: usize, pieces: &[PieceBlock]) -> Result<BigradedSpace, IoError> {
    let mut map = BTreeMap::new();
    for b in pieces {
        if map.insert((b.p, b.q), Subspace::span(dim, b.basis.clone())?).is_some() {
            return Err(IoError::Parse(format!("piece ({}, {}) listed twice", b.p, b.q)));
        }
    }
    Ok(BigradedSpace::new(dim, map)?)
}

fn piece_blocks(g: &BigradedSpace) -> Vec<PieceBlock> {
    g.pieces().iter().map(|(&(p, q), s)| PieceBlock { p, q, basis: s.basis().to_vec() }).collect()
}

fn components(beta: &BTreeMap<(u32, u32), Matrix>) -> Vec<Component> {
    beta.iter().map(|(&(a, b), m)| Component { a, b, matrix: m.clone() }).collect()
}

fn component_map(dim: usize, cs: &[Component]) -> Result<BTreeMap<(u32, u32), Matrix>, IoError> {
    let mut out = BTreeMap::new();
    for c in cs {
        if out.insert((c.a, c.b), c.matrix.clone().fit_empty(dim, dim)).is_some() {
            return Err(IoError::Parse(format!("component ({}, {}) listed twice", c.a, c.b)));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShsDoc {
    pub dim: usize,
    /// The bigrading `V^{pq}`.
    pub pieces: Vec<PieceBlock>,
    /// Components `β^{ab}`; absent ones are zero.
    #[serde(default)]
    pub beta: Vec<Component>,
}

impl ShsDoc {
    pub fn build(&self) -> Result<ShsObject, IoError> {
        Ok(ShsObject::new(bigrading(self.dim, &self.pieces)?, component_map(self.dim, &self.beta)?)?)
    }
}

impl From<&ShsObject> for ShsDoc {
    fn from(s: &ShsObject) -> Self {
        ShsDoc { dim: s.dim(), pieces: piece_blocks(s.grading()), beta: components(s.beta()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StsDoc {
    pub dim: usize,
    pub pieces: Vec<WeightBlock>,
    /// Components `β^{mn}` stored with `a = m`, `b = n`.
    #[serde(default)]
    pub beta: Vec<Component>,
}

impl StsDoc {
    pub fn build(&self) -> Result<StsObject, IoError> {
        let mut map = BTreeMap::new();
        for b in &self.pieces {
            if map.insert(b.weight, Subspace::span(self.dim, b.basis.clone())?).is_some() {
                return Err(IoError::Parse(format!("weight {} listed twice", b.weight)));
            }
        }
        let g = WeightGradedSpace::new(self.dim, map)?;
        Ok(StsObject::new(g, component_map(self.dim, &self.beta)?)?)
    }
}

impl From<&StsObject> for StsDoc {
    fn from(s: &StsObject) -> Self {
        let pieces = s.grading().pieces().iter().map(|(&weight, sp)| WeightBlock { weight, basis: sp.basis().to_vec() }).collect();
        StsDoc { dim: s.dim(), pieces, beta: components(s.beta()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrepDoc {
    pub dim: usize,
    pub pieces: Vec<PieceBlock>,
    pub d: Matrix,
}

impl FrepDoc {
    pub fn build(&self) -> Result<Frep, IoError> {
        Ok(Frep::new(bigrading(self.dim, &self.pieces)?, self.d.clone().fit_empty(self.dim, self.dim))?)
    }
}

impl From<&Frep> for FrepDoc {
    fn from(f: &Frep) -> Self {
        FrepDoc { dim: f.grading().dim(), pieces: piece_blocks(f.grading()), d: f.d().clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationDoc {
    pub dim: usize,
    pub filtration: FiltrationBlock,
}

impl FiltrationDoc {
    pub fn build(&self) -> Result<FilteredSpace, IoError> {
        Ok(FilteredSpace::from_block(self.dim, &self.filtration)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBlock {
    pub n: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDoc {
    /// Consecutive degrees, lowest first.
    pub degrees: Vec<DegreeBlock>,
    /// `differentials[k]` maps the `k`-th listed degree to the next.
    #[serde(default)]
    pub differentials: Vec<Matrix>,
    /// One increasing filtration per listed degree, or none.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub filtration: Vec<FiltrationBlock>,
}

impl ComplexDoc {
    pub fn complex(&self) -> Result<Complex, IoError> {
        let lo = self.degrees.first().map_or(0, |d| d.n);
        for (k, d) in self.degrees.iter().enumerate() {
            if d.n != lo + k as i64 {
                return Err(IoError::Parse(format!("degree {} out of sequence", d.n)));
            }
        }
        let dims = self.degrees.iter().map(|d| d.dim).collect();
        Ok(Complex::new(lo, dims, self.differentials.clone())?)
    }

    pub fn filtered(&self) -> Result<FilteredComplex, IoError> {
        let c = self.complex()?;
        if self.filtration.len() != self.degrees.len() {
            return Err(IoError::Parse(format!("{} filtrations for {} degrees", self.filtration.len(), self.degrees.len())));
        }
        let filt = self
            .degrees
            .iter()
            .zip(&self.filtration)
            .map(|(d, b)| FilteredSpace::from_block(d.dim, b))
            .collect::<Result<_, _>>()?;
        Ok(FilteredComplex::new(c, filt)?)
    }

    pub fn from_complex(c: &Complex, filt: Option<&FilteredComplex>) -> Self {
        let degrees = c.degrees().map(|n| DegreeBlock { n, dim: c.dim(n) }).collect();
        let (lo, hi) = (*c.degrees().start(), *c.degrees().end());
        let differentials = (lo..hi).map(|n| c.d(n).clone()).collect();
        let filtration = filt.map_or(Vec::new(), |f| c.degrees().map(|n| f.filtration(n).expect("degree in range").to_block()).collect());
        ComplexDoc { degrees, differentials, filtration }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalDoc {
    pub b1: DgaSpec,
    pub b2: DgaSpec,
    pub b12: DgaSpec,
    pub r1: Matrix,
    pub r2: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosimplicialDoc {
    /// Number of levels to generate for the `interval` and `constant` forms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    /// Explicit levels and structure maps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit: Option<CosimplicialSpec>,
    /// Coefficient system on the simplicial interval.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<IntervalDoc>,
    /// The constant cosimplicial algebra.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<DgaSpec>,
}

impl CosimplicialDoc {
    pub fn build(&self) -> Result<Cosimplicial, IoError> {
        let levels = self.levels.unwrap_or(3);
        match (&self.explicit, &self.interval, &self.constant) {
            (Some(e), None, None) => Ok(Cosimplicial::new(e.clone())?),
            (None, Some(i), None) => {
                let (b1, b2, b12) = (Dga::new(i.b1.clone())?, Dga::new(i.b2.clone())?, Dga::new(i.b12.clone())?);
                Ok(Cosimplicial::interval(&b1, &b2, &b12, &i.r1, &i.r2, levels)?)
            }
            (None, None, Some(b)) => Ok(Cosimplicial::constant(&Dga::new(b.clone())?, levels)),
            _ => Err(IoError::Parse("exactly one of explicit, interval, constant must be given".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefconeDoc {
    pub gysin: GysinInput,
    pub lie: LieAlgebra,
}

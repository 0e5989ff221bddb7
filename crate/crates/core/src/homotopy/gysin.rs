//! The `E₂` page `⊕_{a,b} H^{a−b}(X, R^b j_* –)[−a]` of an open variety as a
//! weight-labelled DGA, with the Gysin differential `(a, b) → (a+1, b−1)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::dga::{Dga, DgaSpec};
use super::HomotopyError;
use crate::exact::{Matrix, Scalar};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightConvention {
    /// Weight `a + b`; the differential preserves weight.
    #[default]
    #[serde(rename = "a+b")]
    SumAB,
    /// Weight `a + 2b`; the differential lowers weight by one.
    #[serde(rename = "a+2b")]
    SumA2B,
}

impl WeightConvention {
    pub fn weight(self, a: usize, b: usize) -> i64 {
        match self {
            WeightConvention::SumAB => (a + b) as i64,
            WeightConvention::SumA2B => (a + 2 * b) as i64,
        }
    }

    pub fn shift(self) -> i64 {
        match self {
            WeightConvention::SumAB => 0,
            WeightConvention::SumA2B => -1,
        }
    }
}

impl fmt::Display for WeightConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightConvention::SumAB => "a+b",
            WeightConvention::SumA2B => "a+2b",
        })
    }
}

impl FromStr for WeightConvention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "a+b" => Ok(WeightConvention::SumAB),
            "a+2b" | "a2b" => Ok(WeightConvention::SumA2B),
            _ => Err(format!("unknown weight convention {s:?}")),
        }
    }
}

/// A basis element `i` of the entry `(a, b)`.
pub type Slot = (usize, usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GysinEntry {
    pub a: usize,
    pub b: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GysinInput {
    pub entries: Vec<GysinEntry>,
    /// `(left, right, out, c)`: the product of two basis elements has
    /// coefficient `c` on `out`. Products with the unit `(0, 0, 0)` are implicit.
    #[serde(default)]
    pub products: Vec<(Slot, Slot, Slot, Scalar)>,
    /// `(source, target, c)` entries of the Gysin differential.
    #[serde(default)]
    pub gysin: Vec<(Slot, Slot, Scalar)>,
    #[serde(default)]
    pub weight_convention: WeightConvention,
}

/// The DGA together with the `(a, b, i)` label of each basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E2Algebra {
    pub dga: Dga,
    pub labels: Vec<Slot>,
    pub convention: WeightConvention,
}

impl GysinInput {
    pub fn with_convention(&self, c: WeightConvention) -> Self {
        Self { weight_convention: c, ..self.clone() }
    }

    fn dims(&self) -> Result<BTreeMap<(usize, usize), usize>, HomotopyError> {
        let mut dims = BTreeMap::new();
        for e in &self.entries {
            if e.b > e.a {
                return Err(HomotopyError::Gysin(format!("entry ({}, {}) has negative degree on X", e.a, e.b)));
            }
            if e.dim > 0 && dims.insert((e.a, e.b), e.dim).is_some() {
                return Err(HomotopyError::Gysin(format!("entry ({}, {}) listed twice", e.a, e.b)));
            }
        }
        if dims.get(&(0, 0)) != Some(&1) {
            return Err(HomotopyError::Gysin("entry (0, 0) must be the ground field".into()));
        }
        Ok(dims)
    }
}

/// Assembles the `E₂` DGA: degree `a`, weight per the convention.
pub fn e2_builder(g: &GysinInput) -> Result<E2Algebra, HomotopyError> {
    let dims = g.dims()?;
    let top = dims.keys().map(|&(a, _)| a).max().unwrap_or(0);
    let mut labels = Vec::new();
    let mut index = BTreeMap::new();
    let mut deg_dims = vec![0; top + 1];
    for a in 0..=top {
        for (&(aa, b), &d) in dims.range((a, 0)..=(a, usize::MAX)) {
            for i in 0..d {
                index.insert((aa, b, i), labels.len());
                labels.push((aa, b, i));
            }
            deg_dims[a] += d;
        }
    }
    let offsets: Vec<usize> = (0..=top).map(|a| deg_dims[..a].iter().sum()).collect();
    let find = |s: &Slot| -> Result<usize, HomotopyError> {
        index.get(s).copied().ok_or_else(|| HomotopyError::Gysin(format!("no basis element {s:?}")))
    };
    let mut products = Vec::new();
    for (l, r, o, c) in &g.products {
        if (o.0, o.1) != (l.0 + r.0, l.1 + r.1) {
            return Err(HomotopyError::Gysin(format!("product {l:?}·{r:?} lands in {o:?}")));
        }
        products.push((find(l)?, find(r)?, find(o)?, c.clone()));
    }
    let mut differential: Vec<Matrix> = (0..top).map(|a| Matrix::zeros(deg_dims[a + 1], deg_dims[a])).collect();
    for (s, t, c) in &g.gysin {
        if s.1 == 0 || (t.0, t.1) != (s.0 + 1, s.1 - 1) {
            return Err(HomotopyError::Gysin(format!("differential {s:?} → {t:?} has the wrong bidegree")));
        }
        let (i, j) = (find(s)?, find(t)?);
        let m = &mut differential[s.0];
        let cur = m.get(j - offsets[s.0 + 1], i - offsets[s.0]).clone();
        m.set(j - offsets[s.0 + 1], i - offsets[s.0], &cur + c);
    }
    let conv = g.weight_convention;
    let spec = DgaSpec {
        dims: deg_dims,
        weights: Some(labels.iter().map(|&(a, b, _)| conv.weight(a, b)).collect()),
        weight_shift: conv.shift(),
        unit: None,
        products,
        differential,
    };
    let dga = Dga::new(spec).map_err(|e| relabel(e, &labels))?;
    Ok(E2Algebra { dga, labels, convention: conv })
}

/// Restates a DGA failure in `(a, b, i)` labels.
fn relabel(e: HomotopyError, labels: &[Slot]) -> HomotopyError {
    let l = |i: usize| format!("{:?}", labels[i]);
    match e {
        HomotopyError::NotComplex { index } => HomotopyError::Gysin(format!("gysin∘gysin ≠ 0 on {}", l(index))),
        HomotopyError::Leibniz(i, j) => HomotopyError::Gysin(format!("Leibniz fails on {} · {}", l(i), l(j))),
        HomotopyError::NotCommutative(i, j) => HomotopyError::Gysin(format!("not graded-commutative on {} · {}", l(i), l(j))),
        HomotopyError::NotAssociative(i, j, k) => {
            HomotopyError::Gysin(format!("not associative on {} · {} · {}", l(i), l(j), l(k)))
        }
        other => other,
    }
}

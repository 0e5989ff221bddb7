//! Finite-dimensional graded-commutative DGAs, possibly weight-labelled and
//! truncated above a top degree.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::HomotopyError;
use crate::exact::matrix::{add_scaled, is_zero_vector, unit_vector, zero_vector};
use crate::exact::subspace::{image, kernel};
use crate::exact::{Matrix, Scalar, Subspace, Vector};

/// Serialized form of a DGA. Basis elements are numbered degree by degree.
/// A product triple `(i, j, k, c)` means `e_i · e_j` has coefficient `c` on
/// `e_k`; the opposite order is filled in by graded commutativity when it is
/// not listed. Without `unit`, `A⁰` must be one-dimensional and `e_0` is the
/// unit, with its products implicit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DgaSpec {
    /// Dimension of each degree, starting at 0.
    #[serde(rename = "degrees", alias = "dims")]
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<i64>>,
    #[serde(default)]
    pub weight_shift: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vector>,
    #[serde(default)]
    pub products: Vec<(usize, usize, usize, Scalar)>,
    /// `differential[k]: A^k → A^{k+1}`; missing blocks are zero.
    #[serde(default)]
    pub differential: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dga {
    dims: Vec<usize>,
    offsets: Vec<usize>,
    degree: Vec<usize>,
    weights: Option<Vec<i64>>,
    weight_shift: i64,
    unit: Vector,
    implicit_unit: bool,
    mult: BTreeMap<(usize, usize), Vector>,
    d: Vec<Matrix>,
}

fn koszul(p: usize, q: usize) -> Scalar {
    if p * q % 2 == 1 {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

impl Dga {
    pub fn new(spec: DgaSpec) -> Result<Self, HomotopyError> {
        let dims = spec.dims.clone();
        if dims.is_empty() {
            return Err(HomotopyError::Shape("no degrees".into()));
        }
        let n: usize = dims.iter().sum();
        let mut offsets = Vec::with_capacity(dims.len());
        let mut degree = Vec::with_capacity(n);
        for (k, &m) in dims.iter().enumerate() {
            offsets.push(degree.len());
            degree.extend(std::iter::repeat_n(k, m));
        }
        if let Some(w) = &spec.weights {
            if w.len() != n {
                return Err(HomotopyError::Shape(format!("{} weights for {n} basis elements", w.len())));
            }
        }
        let top = dims.len() - 1;
        let mut d = Vec::with_capacity(dims.len());
        for k in 0..=top {
            let rows = if k < top { dims[k + 1] } else { 0 };
            match spec.differential.get(k) {
                Some(m) if k < top => {
                    let m = m.clone().fit_empty(rows, dims[k]);
                    if m.shape() != (rows, dims[k]) {
                        return Err(HomotopyError::Shape(format!("differential block {k} has shape {:?}", m.shape())));
                    }
                    d.push(m);
                }
                Some(m) if !m.is_zero() => {
                    return Err(HomotopyError::Shape(format!("differential block {k} leaves the top degree")));
                }
                _ => d.push(Matrix::zeros(rows, dims[k])),
            }
        }
        if spec.differential.len() > dims.len() {
            return Err(HomotopyError::Shape("too many differential blocks".into()));
        }

        let mut mult: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
        let mut given: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
        for (i, j, k, c) in &spec.products {
            if *i >= n || *j >= n || *k >= n {
                return Err(HomotopyError::Shape(format!("product index out of range in ({i}, {j}, {k})")));
            }
            if degree[*k] != degree[*i] + degree[*j] {
                return Err(HomotopyError::ProductDegree(*i, *j));
            }
            let v = given.entry((*i, *j)).or_insert_with(|| zero_vector(n));
            v[*k] += c;
        }
        let implicit_unit = spec.unit.is_none();
        let unit = match &spec.unit {
            Some(u) => {
                if u.len() != n || u.iter().enumerate().any(|(i, x)| !x.is_zero() && degree[i] != 0) {
                    return Err(HomotopyError::Shape("unit must be a degree-0 vector".into()));
                }
                u.clone()
            }
            None => {
                if dims[0] != 1 {
                    return Err(HomotopyError::NotConnected);
                }
                for i in 0..n {
                    given.insert((0, i), unit_vector(n, i));
                    given.insert((i, 0), unit_vector(n, i));
                }
                unit_vector(n, 0)
            }
        };
        for (&(i, j), v) in &given {
            let sym = v.iter().map(|x| &koszul(degree[i], degree[j]) * x).collect::<Vector>();
            match given.get(&(j, i)) {
                Some(w) if *w != sym => return Err(HomotopyError::NotCommutative(i, j)),
                _ => {}
            }
            if !is_zero_vector(v) {
                mult.insert((i, j), v.clone());
            }
            if !given.contains_key(&(j, i)) && !is_zero_vector(&sym) {
                mult.insert((j, i), sym);
            }
        }
        let a = Dga { dims, offsets, degree, weights: spec.weights, weight_shift: spec.weight_shift, unit, implicit_unit, mult, d };
        a.validate()?;
        Ok(a)
    }

    /// The ground field in degree 0.
    pub fn ground() -> Self {
        Dga::new(DgaSpec { dims: vec![1], ..Default::default() }).expect("ground field")
    }

    fn validate(&self) -> Result<(), HomotopyError> {
        let n = self.dim();
        for i in 0..n {
            let e = unit_vector(n, i);
            let dd = self.d(&self.d(&e));
            if !is_zero_vector(&dd) {
                return Err(HomotopyError::NotComplex { index: i });
            }
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(HomotopyError::Unit { index: i });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let (ei, ej) = (unit_vector(n, i), unit_vector(n, j));
                let ij = self.mul(&ei, &ej);
                for k in 0..n {
                    let ek = unit_vector(n, k);
                    if self.mul(&ij, &ek) != self.mul(&ei, &self.mul(&ej, &ek)) {
                        return Err(HomotopyError::NotAssociative(i, j, k));
                    }
                }
                let lhs = self.d(&ij);
                let mut rhs = self.mul(&self.d(&ei), &ej);
                add_scaled(&mut rhs, &koszul(self.degree[i], 1), &self.mul(&ei, &self.d(&ej)));
                if lhs != rhs {
                    return Err(HomotopyError::Leibniz(i, j));
                }
            }
        }
        if let Some(w) = &self.weights {
            for (&(i, j), v) in &self.mult {
                if v.iter().enumerate().any(|(k, x)| !x.is_zero() && w[k] != w[i] + w[j]) {
                    return Err(HomotopyError::ProductWeight(i, j));
                }
            }
            for i in 0..n {
                let dv = self.d(&unit_vector(n, i));
                if dv.iter().enumerate().any(|(k, x)| !x.is_zero() && w[k] != w[i] + self.weight_shift) {
                    return Err(HomotopyError::DifferentialWeight { index: i });
                }
            }
            if self.unit.iter().enumerate().any(|(k, x)| !x.is_zero() && w[k] != 0) {
                return Err(HomotopyError::ProductWeight(0, 0));
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.degree.len()
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.degree[i]
    }

    pub fn weights(&self) -> Option<&[i64]> {
        self.weights.as_deref()
    }

    pub fn weight_shift(&self) -> i64 {
        self.weight_shift
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    /// Whether `A⁰` is the ground field spanned by the unit.
    pub fn is_connected(&self) -> bool {
        self.dims[0] == 1
    }

    /// Nonzero basis products `e_i e_j`.
    pub fn products(&self) -> &BTreeMap<(usize, usize), Vector> {
        &self.mult
    }

    pub fn product(&self, i: usize, j: usize) -> Vector {
        self.mult.get(&(i, j)).cloned().unwrap_or_else(|| zero_vector(self.dim()))
    }

    pub fn mul(&self, u: &[Scalar], v: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.dim());
        for ((i, j), p) in &self.mult {
            if u[*i].is_zero() || v[*j].is_zero() {
                continue;
            }
            add_scaled(&mut out, &(&u[*i] * &v[*j]), p);
        }
        out
    }

    /// `d: A^k → A^{k+1}`.
    pub fn d_block(&self, k: usize) -> &Matrix {
        &self.d[k]
    }

    pub fn d(&self, v: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.dim());
        for k in 0..self.top_degree() {
            let (o, m) = (self.offsets[k], self.dims[k]);
            let img = self.d[k].apply(&v[o..o + m]);
            let o2 = self.offsets[k + 1];
            for (t, x) in img.into_iter().enumerate() {
                out[o2 + t] = x;
            }
        }
        out
    }

    pub fn cohomology_dims(&self) -> Vec<usize> {
        (0..=self.top_degree())
            .map(|k| {
                let z = self.d[k].cols() - self.d[k].rank();
                let b = if k > 0 { self.d[k - 1].rank() } else { 0 };
                z - b
            })
            .collect()
    }

    /// Weight-graded dimensions of `H^k`, for the filtration by weight that
    /// the differential preserves.
    pub fn cohomology_weights(&self, k: usize) -> Option<BTreeMap<i64, usize>> {
        let w = self.weights.as_ref()?;
        let labels = &w[self.offsets[k]..self.offsets[k] + self.dims[k]];
        let inc = if k > 0 { self.d[k - 1].clone() } else { Matrix::zeros(self.dims[0], 0) };
        Some(filtered_homology(labels, &inc, &self.d[k], self.weight_shift > 0))
    }

    pub fn to_spec(&self) -> DgaSpec {
        let mut products = Vec::new();
        for (&(i, j), v) in &self.mult {
            if i > j || (self.implicit_unit && (i == 0 || j == 0)) {
                continue;
            }
            for (k, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    products.push((i, j, k, c.clone()));
                }
            }
        }
        let top = self.top_degree();
        let differential = if self.d.iter().all(Matrix::is_zero) { Vec::new() } else { self.d[..top].to_vec() };
        DgaSpec {
            dims: self.dims.clone(),
            weights: self.weights.clone(),
            weight_shift: self.weight_shift,
            unit: if self.implicit_unit { None } else { Some(self.unit.clone()) },
            products,
            differential,
        }
    }
}

/// `gr` dimensions of `ker(out) / im(inc)` for the filtration of the middle
/// space by basis labels: spans of labels `≥ k` when `rising`, else `≤ k`.
pub(crate) fn filtered_homology(labels: &[i64], inc: &Matrix, out: &Matrix, rising: bool) -> BTreeMap<i64, usize> {
    let n = labels.len();
    let z = kernel(out);
    let b = image(inc);
    let mut keys: Vec<i64> = labels.to_vec();
    keys.sort_unstable();
    keys.dedup();
    if rising {
        keys.reverse();
    }
    let mut res = BTreeMap::new();
    let mut prev = b.dim();
    for &k in &keys {
        let f = Subspace::span(
            n,
            (0..n).filter(|&i| if rising { labels[i] >= k } else { labels[i] <= k }).map(|i| unit_vector(n, i)),
        )
        .expect("unit vectors");
        let here = z.intersect(&f).unwrap().sum(&b).unwrap().dim();
        if here > prev {
            res.insert(k, here - prev);
        }
        prev = here;
    }
    res
}

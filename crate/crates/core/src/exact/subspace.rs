use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::{add_scaled, conj_vector, is_zero_vector, zero_vector, Matrix, Vector};
use super::{ExactError, Scalar};

/// A subspace of `K^n` (K = ℚ(i)), stored as the rows of its reduced row
/// echelon basis. Two subspaces are equal iff their stored bases agree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "Subspace<{}>{{{}}}", self.ambient, rows.join(", "))
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, (0..ambient).map(|k| super::matrix::unit_vector(ambient, k)))
            .expect("unit vectors have ambient length")
    }

    pub fn span<I>(ambient: usize, vectors: I) -> Result<Self, ExactError>
    where
        I: IntoIterator<Item = Vector>,
    {
        let rows: Vec<Vector> = vectors.into_iter().collect();
        for r in &rows {
            if r.len() != ambient {
                return Err(ExactError::DimensionMismatch { expected: ambient, found: r.len() });
            }
        }
        if rows.is_empty() {
            return Ok(Self::zero(ambient));
        }
        let m = Matrix::from_rows(rows, ambient)?;
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Ok(Self { ambient, basis, pivots })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check(&self, o: &Subspace) -> Result<(), ExactError> {
        if self.ambient != o.ambient {
            return Err(ExactError::DimensionMismatch { expected: self.ambient, found: o.ambient });
        }
        Ok(())
    }

    /// Reduces `v` against the echelon basis; the remainder is zero iff `v ∈ self`.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut r = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let c = r[p].clone();
            if !c.is_zero() {
                add_scaled(&mut r, &-c, b);
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        v.len() == self.ambient && is_zero_vector(&self.reduce(v))
    }

    pub fn contains_subspace(&self, o: &Subspace) -> bool {
        o.ambient == self.ambient && o.basis.iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v ∈ self` in the echelon basis (read off at pivots).
    pub fn coords(&self, v: &[Scalar]) -> Result<Vector, ExactError> {
        if !self.contains(v) {
            return Err(ExactError::NotInSubspace);
        }
        Ok(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn from_coords(&self, c: &[Scalar]) -> Vector {
        let mut v = zero_vector(self.ambient);
        for (x, b) in c.iter().zip(&self.basis) {
            add_scaled(&mut v, x, b);
        }
        v
    }

    pub fn sum(&self, o: &Subspace) -> Result<Subspace, ExactError> {
        self.check(o)?;
        Subspace::span(self.ambient, self.basis.iter().chain(&o.basis).cloned())
    }

    pub fn intersect(&self, o: &Subspace) -> Result<Subspace, ExactError> {
        self.check(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        if self.is_full() {
            return Ok(o.clone());
        }
        if o.is_full() {
            return Ok(self.clone());
        }
        // x ∈ A ∩ B iff x ∈ A and x is killed by the annihilator of B
        let ann = o.annihilator();
        let k = self.dim();
        let m = Matrix::from_columns(
            &self.basis.iter().map(|b| ann.basis.iter().map(|f| dot(f, b)).collect()).collect::<Vec<_>>(),
            ann.dim(),
        );
        let coeffs = if ann.dim() == 0 { identity_coeffs(k) } else { m.kernel() };
        Subspace::span(self.ambient, coeffs.iter().map(|c| self.from_coords(c)))
    }

    /// `{f : f·v = 0 for all v ∈ self}` with the bilinear (unconjugated) pairing.
    pub fn annihilator(&self) -> Subspace {
        if self.is_zero() {
            return Subspace::full(self.ambient);
        }
        let m = Matrix::from_rows(self.basis.clone(), self.ambient).unwrap();
        Subspace::span(self.ambient, m.kernel()).unwrap()
    }

    pub fn conj(&self) -> Subspace {
        Subspace::span(self.ambient, self.basis.iter().map(|v| conj_vector(v))).unwrap()
    }

    pub fn is_conj_stable(&self) -> bool {
        self.basis.iter().all(|v| self.contains(&conj_vector(v)))
    }

    pub fn is_real(&self) -> bool {
        self.basis.iter().all(|v| v.iter().all(Scalar::is_real))
    }

    /// Real points: a rational basis of `self ∩ ℚ^n`.
    pub fn real_points(&self) -> Subspace {
        self.fixed_points(conj_vector)
    }

    /// Basis of the ℚ-subspace fixed by an antilinear involution `tau`
    /// preserving `self`; returned as its ℚ(i)-span. For `tau`-stable inputs the
    /// dimension equals `self.dim()`.
    pub fn fixed_points<F>(&self, tau: F) -> Subspace
    where
        F: Fn(&[Scalar]) -> Vector,
    {
        let mut gens = Vec::new();
        for v in &self.basis {
            let t = tau(v);
            let plus: Vector = v.iter().zip(&t).map(|(a, b)| a + b).collect();
            let minus: Vector = v.iter().zip(&t).map(|(a, b)| &Scalar::i() * &(a - b)).collect();
            gens.push(plus);
            gens.push(minus);
        }
        Subspace::span(self.ambient, gens).unwrap()
    }

    pub fn image(&self, m: &Matrix) -> Result<Subspace, ExactError> {
        if m.cols() != self.ambient {
            return Err(ExactError::DimensionMismatch { expected: self.ambient, found: m.cols() });
        }
        Subspace::span(m.rows(), self.basis.iter().map(|v| m.apply(v)))
    }

    /// `{x : m x ∈ target}`.
    pub fn preimage(m: &Matrix, target: &Subspace) -> Result<Subspace, ExactError> {
        if m.rows() != target.ambient {
            return Err(ExactError::DimensionMismatch { expected: target.ambient, found: m.rows() });
        }
        let ann = target.annihilator();
        if ann.is_zero() {
            return Ok(Subspace::full(m.cols()));
        }
        let a = Matrix::from_rows(ann.basis.clone(), m.rows())?;
        Ok(kernel(&(&a * m)))
    }

    /// Complement spanned by standard basis vectors at non-pivot coordinates.
    pub fn standard_complement(&self) -> Subspace {
        let free = (0..self.ambient).filter(|c| !self.pivots.contains(c));
        Subspace::span(self.ambient, free.map(|k| super::matrix::unit_vector(self.ambient, k))).unwrap()
    }

    /// Matrix with the basis vectors as rows.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(self.basis.clone(), self.ambient).unwrap()
    }

    /// Tensor product of subspaces inside `K^n ⊗ K^m` (index `i*m + j`).
    pub fn tensor(&self, o: &Subspace) -> Subspace {
        let n = self.ambient * o.ambient;
        let gens = self.basis.iter().flat_map(|a| {
            o.basis.iter().map(move |b| {
                let mut v = zero_vector(n);
                for (i, x) in a.iter().enumerate() {
                    for (j, y) in b.iter().enumerate() {
                        v[i * o.ambient + j] = x * y;
                    }
                }
                v
            })
        });
        Subspace::span(n, gens).unwrap()
    }

    /// Direct sum embedding into `K^{n+m}`.
    pub fn direct_sum(&self, o: &Subspace) -> Subspace {
        let n = self.ambient + o.ambient;
        let left = self.basis.iter().map(|v| {
            let mut w = v.clone();
            w.extend(zero_vector(o.ambient));
            w
        });
        let right = o.basis.iter().map(|v| {
            let mut w = zero_vector(self.ambient);
            w.extend(v.iter().cloned());
            w
        });
        Subspace::span(n, left.chain(right).collect::<Vec<_>>()).unwrap()
    }
}

fn identity_coeffs(k: usize) -> Vec<Vector> {
    (0..k).map(|i| super::matrix::unit_vector(k, i)).collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

pub fn kernel(m: &Matrix) -> Subspace {
    Subspace::span(m.cols(), m.kernel()).unwrap()
}

pub fn image(m: &Matrix) -> Subspace {
    Subspace::span(m.rows(), m.columns()).unwrap()
}

/// A quotient `sub / by` with a chosen section and the projection onto
/// section coordinates.
///
/// The section consists of those echelon basis vectors of `sub` that are not
/// already in `by + (earlier section vectors)`, taken in order.
#[derive(Clone, Debug)]
pub struct Quotient {
    sub: Subspace,
    by: Subspace,
    section: Vec<Vector>,
    // rows: coordinates functional on `sub`-vectors, after reduction by `by`
    extended: Subspace,
}

impl Quotient {
    pub fn new(sub: &Subspace, by: &Subspace) -> Result<Self, ExactError> {
        sub.check(by)?;
        if !sub.contains_subspace(by) {
            return Err(ExactError::NotInSubspace);
        }
        let mut acc = by.clone();
        let mut section = Vec::new();
        for v in sub.basis() {
            if !acc.contains(v) {
                section.push(v.clone());
                acc = acc.sum(&Subspace::span(sub.ambient, [v.clone()])?)?;
            }
        }
        Ok(Self { sub: sub.clone(), by: by.clone(), section, extended: acc })
    }

    /// Quotient of the whole ambient space.
    ///
    /// The section is the standard basis vectors at the non-pivot coordinates
    /// of `by`, in ascending order.
    pub fn of_ambient(by: &Subspace) -> Self {
        let full = Subspace::full(by.ambient());
        let section = by.standard_complement().basis().to_vec();
        Self { sub: full.clone(), by: by.clone(), section, extended: full }
    }

    pub fn dim(&self) -> usize {
        self.section.len()
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    pub fn by(&self) -> &Subspace {
        &self.by
    }

    pub fn section(&self) -> &[Vector] {
        &self.section
    }

    /// Quotient coordinates of `v ∈ sub`.
    pub fn project(&self, v: &[Scalar]) -> Result<Vector, ExactError> {
        if !self.sub.contains(v) {
            return Err(ExactError::NotInSubspace);
        }
        // v = Σ b_i + Σ c_j s_j with b ∈ by; solve for c
        let mut cols: Vec<Vector> = self.section.clone();
        cols.extend(self.by.basis().iter().cloned());
        let m = Matrix::from_columns(&cols, self.sub.ambient());
        let x = m.solve(v)?;
        Ok(x[..self.section.len()].to_vec())
    }

    /// Lift of quotient coordinates through the section.
    pub fn lift(&self, c: &[Scalar]) -> Vector {
        let mut v = zero_vector(self.sub.ambient());
        for (x, s) in c.iter().zip(&self.section) {
            add_scaled(&mut v, x, s);
        }
        v
    }

    /// Projection matrix `ambient → quotient coords`, defined on all of the
    /// ambient space by extending with zero on a complement of `sub`.
    pub fn projection_matrix(&self) -> Matrix {
        let n = self.sub.ambient();
        let comp: Vec<Vector> = self.extended.standard_complement().basis().to_vec();
        let mut cols: Vec<Vector> = self.section.clone();
        cols.extend(self.by.basis().iter().cloned());
        cols.extend(comp);
        let basis = Matrix::from_columns(&cols, n);
        let inv = basis.inverse().expect("section, kernel and complement span the ambient space");
        inv.block(0..self.section.len(), 0..n)
    }

    pub fn section_matrix(&self) -> Matrix {
        Matrix::from_columns(&self.section, self.sub.ambient())
    }

    /// Image of a subspace of `sub` in quotient coordinates.
    pub fn project_subspace(&self, s: &Subspace) -> Result<Subspace, ExactError> {
        let vs = s.basis().iter().map(|v| self.project(v)).collect::<Result<Vec<_>, _>>()?;
        Subspace::span(self.dim(), vs)
    }
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            ambient: usize,
            basis: &'a [Vector],
        }
        Repr { ambient: self.ambient, basis: &self.basis }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            ambient: usize,
            basis: Vec<Vector>,
        }
        let r = Repr::deserialize(d)?;
        Subspace::span(r.ambient, r.basis).map_err(serde::de::Error::custom)
    }
}

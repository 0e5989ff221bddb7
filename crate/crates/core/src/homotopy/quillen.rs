//! The free Lie model `G(A)` of a connected DGA and `π_n(A) = H_{n−1} G(A)`,
//! truncated by bracket length.
//!
//! Generators `x_k` are dual to the basis of `A^{≥1}`, in chain degree
//! `|e_k| − 1`, and carry the weight of `e_k`. The differential is the dual
//! of `d_A` plus the quadratic part dual to the product:
//!
//! ```text
//! d x_k = ε_k Σ_i (d_A)_{ki} x_i + Σ_{i<j} ± μ_{ij}^k [x_i, x_j] + ½ Σ_i ± μ_{ii}^k [x_i, x_i]
//! ```
//!
//! The signs are taken from a short list of conventions; the first one for
//! which `d² = 0` holds on every generator is used.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::dga::{filtered_homology, Dga};
use super::lie::{lie_basis, LieBasisElement, TensorElement, Word};
use super::HomotopyError;
use crate::exact::matrix::zero_vector;
use crate::exact::subspace::{image, kernel};
use crate::exact::{Matrix, Quotient, Scalar, Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignConvention {
    /// Linear part sign `ε_k = lin · (−1)^{parity·|e_k|}`.
    pub lin: i8,
    pub lin_parity: bool,
    /// Quadratic sign `(−1)^{|e_i|}` or `(−1)^{|e_j|}`.
    pub quad_left: bool,
}

const CONVENTIONS: [SignConvention; 8] = {
    const fn c(lin: i8, lin_parity: bool, quad_left: bool) -> SignConvention {
        SignConvention { lin, lin_parity, quad_left }
    }
    [
        c(-1, false, true),
        c(1, false, true),
        c(-1, true, true),
        c(1, true, true),
        c(-1, false, false),
        c(1, false, false),
        c(-1, true, false),
        c(1, true, false),
    ]
};

fn parity_sign(k: usize) -> Scalar {
    if k % 2 == 1 {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiePresentation {
    degrees: Vec<i64>,
    weights: Option<Vec<i64>>,
    weight_shift: i64,
    classes: Vec<usize>,
    differential: Vec<TensorElement>,
    cap: usize,
    convention: SignConvention,
}

/// Basis of the truncated Lie algebra in one chain degree.
struct Chunk {
    basis: Vec<LieBasisElement>,
    words: BTreeMap<Word, usize>,
    matrix: Matrix,
}

impl Chunk {
    fn new(basis: Vec<LieBasisElement>) -> Self {
        let mut words = BTreeMap::new();
        for b in &basis {
            for w in b.element.terms().keys() {
                let next = words.len();
                words.entry(w.clone()).or_insert(next);
            }
        }
        let cols: Vec<Vector> = basis.iter().map(|b| Self::embed(&words, &b.element).expect("own words")).collect();
        let matrix = Matrix::from_columns(&cols, words.len());
        Chunk { basis, words, matrix }
    }

    fn embed(words: &BTreeMap<Word, usize>, e: &TensorElement) -> Option<Vector> {
        let mut v = zero_vector(words.len());
        for (w, c) in e.terms() {
            v[*words.get(w)?] = c.clone();
        }
        Some(v)
    }

    fn len(&self) -> usize {
        self.basis.len()
    }

    fn coords(&self, e: &TensorElement) -> Vector {
        if self.basis.is_empty() {
            assert!(e.is_zero(), "element outside the Lie span");
            return Vec::new();
        }
        let v = Self::embed(&self.words, e).expect("element outside the Lie span");
        self.matrix.solve(&v).expect("element outside the Lie span")
    }

    fn element(&self, c: &[Scalar]) -> TensorElement {
        let mut out = TensorElement::zero();
        for (x, b) in c.iter().zip(&self.basis) {
            out.add_scaled(x, &b.element);
        }
        out
    }

    fn lengths(&self) -> Vec<usize> {
        self.basis.iter().map(LieBasisElement::length).collect()
    }
}

impl LiePresentation {
    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn weights(&self) -> Option<&[i64]> {
        self.weights.as_deref()
    }

    /// Index in `A` of the class dual to each generator.
    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    pub fn differential(&self) -> &[TensorElement] {
        &self.differential
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn convention(&self) -> SignConvention {
        self.convention
    }

    fn chunk(&self, m: i64) -> Chunk {
        let mut basis = Vec::new();
        if m >= 0 {
            for len in 1..=self.cap {
                basis.extend(lie_basis(len, m, &self.degrees));
            }
        }
        Chunk::new(basis)
    }

    /// Matrix of `d` from degree `m` to `m − 1`, truncated at the cap.
    fn d_matrix(&self, src: &Chunk, dst: &Chunk) -> Matrix {
        let cols: Vec<Vector> = src
            .basis
            .iter()
            .map(|b| dst.coords(&b.element.apply_odd_derivation(&self.differential, &self.degrees, self.cap)))
            .collect();
        Matrix::from_columns(&cols, dst.len())
    }

    fn labels(&self, c: &Chunk) -> Option<Vec<i64>> {
        let w = self.weights.as_ref()?;
        Some(c.basis.iter().map(|b| b.word.iter().map(|&g| w[g]).sum::<i64>() * if b.square { 2 } else { 1 }).collect())
    }

    /// Dimensions of the Lie algebra in chain degree `m`, by bracket length.
    pub fn dims_by_length(&self, m: i64) -> Vec<usize> {
        let c = self.chunk(m);
        (1..=self.cap).map(|l| c.basis.iter().filter(|b| b.length() == l).count()).collect()
    }

    /// `H_m` of the truncated Lie algebra at every bracket cap `1..=cap`.
    pub fn homology_ranks(&self, m: i64) -> Vec<usize> {
        let (lo, mid, hi) = (self.chunk(m - 1), self.chunk(m), self.chunk(m + 1));
        let (out, inc) = (self.d_matrix(&mid, &lo), self.d_matrix(&hi, &mid));
        let (ll, lm, lh) = (lo.lengths(), mid.lengths(), hi.lengths());
        (1..=self.cap)
            .map(|cap| {
                let pick = |ls: &[usize]| -> Vec<usize> { (0..ls.len()).filter(|&i| ls[i] <= cap).collect() };
                let (rl, rm, rh) = (pick(&ll), pick(&lm), pick(&lh));
                let sub = |m: &Matrix, rows: &[usize], cols: &[usize]| {
                    let mut s = Matrix::zeros(rows.len(), cols.len());
                    for (a, &r) in rows.iter().enumerate() {
                        for (b, &c) in cols.iter().enumerate() {
                            s.set(a, b, m.get(r, c).clone());
                        }
                    }
                    s
                };
                rm.len() - sub(&out, &rl, &rm).rank() - sub(&inc, &rm, &rh).rank()
            })
            .collect()
    }
}

/// Builds `G(A)` with bracket-length cap `cap`.
pub fn quillen_g(a: &Dga, cap: usize) -> Result<LiePresentation, HomotopyError> {
    if !a.is_connected() {
        return Err(HomotopyError::NotConnected);
    }
    if cap < 2 {
        return Err(HomotopyError::CapTooSmall { cap });
    }
    let n = a.dim();
    let classes: Vec<usize> = (1..n).collect();
    let gen_of = |i: usize| i - 1;
    let degrees: Vec<i64> = classes.iter().map(|&i| a.degree_of(i) as i64 - 1).collect();
    let weights = a.weights().map(|w| classes.iter().map(|&i| w[i]).collect());

    // (d_A)_{ki}: coefficient of e_k in d e_i
    let mut dcoef: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
    for i in 1..n {
        let di = a.d(&crate::exact::matrix::unit_vector(n, i));
        for (k, c) in di.into_iter().enumerate() {
            if !c.is_zero() {
                dcoef[k].push((i, c));
            }
        }
    }
    let half = Scalar::ratio(1, 2);
    for conv in CONVENTIONS {
        let mut differential = vec![TensorElement::zero(); classes.len()];
        for &k in &classes {
            let eps = if conv.lin_parity { &Scalar::int(conv.lin.into()) * &parity_sign(a.degree_of(k)) } else { Scalar::int(conv.lin.into()) };
            for (i, c) in &dcoef[k] {
                differential[gen_of(k)].add_term(vec![gen_of(*i)], &(&eps * c));
            }
        }
        for (&(i, j), v) in a.products() {
            if i == 0 || j == 0 || i > j {
                continue;
            }
            let s = parity_sign(if conv.quad_left { a.degree_of(i) } else { a.degree_of(j) });
            let (gi, gj) = (gen_of(i), gen_of(j));
            let br = TensorElement::generator(gi).bracket(&TensorElement::generator(gj), degrees[gi], degrees[gj], 2);
            for (k, mu) in v.iter().enumerate() {
                if mu.is_zero() {
                    continue;
                }
                let coef = if i == j { &(&half * mu) * &s } else { mu * &s };
                differential[gen_of(k)].add_scaled(&coef, &br);
            }
        }
        let squares_zero = differential
            .iter()
            .all(|dx| dx.apply_odd_derivation(&differential, &degrees, usize::MAX).is_zero());
        if squares_zero {
            return Ok(LiePresentation { degrees, weights, weight_shift: a.weight_shift(), classes, differential, cap, convention: conv });
        }
    }
    Err(HomotopyError::NoSignConvention)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDim {
    pub weight: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hurewicz {
    /// Rank of `π_n → H^n(A)^∨`.
    pub rank: usize,
    pub cohomology_dim: usize,
    pub iso: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stability {
    pub cap: usize,
    /// Rank at every bracket cap `1..=cap`.
    pub ranks: Vec<usize>,
    /// Smallest cap from which the rank no longer changes.
    pub stable_from: usize,
    pub stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub bracket: String,
    pub coeff: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiReport {
    pub n: usize,
    pub rank: usize,
    /// Weights of `π_n^∨`, from the filtration by generator weight.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<WeightDim>>,
    /// Cycle representatives in the Lyndon basis.
    pub representatives: Vec<Vec<Term>>,
    pub hurewicz: Hurewicz,
    pub stability: Stability,
}

struct HomologyData {
    mid: Chunk,
    quotient: Quotient,
    labels: Option<Vec<i64>>,
    out: Matrix,
    inc: Matrix,
}

fn homology_data(g: &LiePresentation, m: i64) -> HomologyData {
    let (lo, mid, hi) = (g.chunk(m - 1), g.chunk(m), g.chunk(m + 1));
    let out = g.d_matrix(&mid, &lo);
    let inc = g.d_matrix(&hi, &mid);
    let quotient = Quotient::new(&kernel(&out), &image(&inc)).expect("boundaries are cycles");
    let labels = g.labels(&mid);
    HomologyData { mid, quotient, labels, out, inc }
}

/// `π_n(A)` from `G(A)` truncated at bracket length `cap`.
pub fn pi_n(a: &Dga, n: usize, cap: usize) -> Result<PiReport, HomotopyError> {
    let g = quillen_g(a, cap)?;
    let m = n as i64 - 1;
    let h = homology_data(&g, m);
    let rank = h.quotient.dim();
    let weights = h.labels.as_ref().map(|l| {
        filtered_homology(l, &h.inc, &h.out, g.weight_shift < 0)
            .into_iter()
            .map(|(weight, dim)| WeightDim { weight, dim })
            .collect()
    });
    let representatives = h
        .quotient
        .section()
        .iter()
        .map(|v| {
            v.iter()
                .zip(&h.mid.basis)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, b)| Term { bracket: b.label(), coeff: c.clone() })
                .collect()
        })
        .collect();

    // Hurewicz: length-one part, read in H(V, d_lin) ≅ H^n(A)^∨
    let gens_in = |k: i64| -> Vec<usize> { (0..g.degrees.len()).filter(|&i| g.degrees[i] == k).collect() };
    let (vm, vlo, vhi) = (gens_in(m), gens_in(m - 1), gens_in(m + 1));
    let lin = |src: &[usize], dst: &[usize]| -> Matrix {
        let mut out = Matrix::zeros(dst.len(), src.len());
        for (c, &s) in src.iter().enumerate() {
            for (w, x) in g.differential[s].terms() {
                if w.len() == 1 {
                    if let Some(r) = dst.iter().position(|&t| t == w[0]) {
                        out.set(r, c, x.clone());
                    }
                }
            }
        }
        out
    };
    let hv = Quotient::new(&kernel(&lin(&vm, &vlo)), &image(&lin(&vhi, &vm))).expect("complex");
    let len1: Vec<usize> = (0..h.mid.len()).filter(|&i| h.mid.basis[i].length() == 1).collect();
    let images: Vec<Vector> = h
        .quotient
        .section()
        .iter()
        .map(|v| {
            let mut p = zero_vector(vm.len());
            for &i in &len1 {
                let gidx = h.mid.basis[i].word[0];
                let pos = vm.iter().position(|&t| t == gidx).expect("generator in degree m");
                p[pos] = v[i].clone();
            }
            hv.project(&p).expect("cycle of the linear part")
        })
        .collect();
    let hrank = Subspace::span(hv.dim(), images).expect("dims").dim();
    let cohomology_dim = a.cohomology_dims().get(n).copied().unwrap_or(0);
    let hurewicz = Hurewicz { rank: hrank, cohomology_dim, iso: hrank == rank && hrank == cohomology_dim };

    let ranks = g.homology_ranks(m);
    let last = *ranks.last().expect("cap ≥ 2");
    let stable_from = ranks.iter().rposition(|&r| r != last).map_or(1, |p| p + 2);
    Ok(PiReport {
        n,
        rank,
        weights,
        representatives,
        hurewicz,
        stability: Stability { cap, ranks, stable_from, stable: stable_from < cap },
    })
}

/// Whitehead bracket `π_p × π_q → π_{p+q−1}` in the representative bases of
/// [`pi_n`]: entry `[i][j]` holds the coordinates of `[z_i, z_j]`.
pub fn whitehead(a: &Dga, p: usize, q: usize, cap: usize) -> Result<Vec<Vec<Vector>>, HomotopyError> {
    let g = quillen_g(a, cap)?;
    let (mp, mq) = (p as i64 - 1, q as i64 - 1);
    let hp = homology_data(&g, mp);
    let hq = homology_data(&g, mq);
    let hr = homology_data(&g, mp + mq);
    let mut out = Vec::new();
    for u in hp.quotient.section() {
        let zu = hp.mid.element(u);
        let mut row = Vec::new();
        for v in hq.quotient.section() {
            let zv = hq.mid.element(v);
            let br = zu.bracket(&zv, mp, mq, g.cap);
            let c = hr.mid.coords(&br);
            row.push(hr.quotient.project(&c).expect("bracket of cycles is a cycle"));
        }
        out.push(row);
    }
    Ok(out)
}

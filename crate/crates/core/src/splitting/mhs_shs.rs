//! From a mixed Hodge structure to its split Hodge structure.
//!
//! Given `M = (V, W, F)`, the graded object `E = gr^W M` is realized on `V`
//! through a rational splitting `V = ⊕ G_n` of `W`. We look for `β` on `E`
//! and a real, `W`-unipotent `φ` with `φ(exp(∫₀ⁱβ) F_E) = F`. Writing `h` for
//! the map sending each `E^{pq}` onto the Deligne piece `I^{pq}` over the
//! identity of `gr^W`, the condition is that `Q = h⁻¹ φ exp(∫₀ⁱβ)` preserves
//! `F_E`, i.e. has no component of type `(r, s)` with `r < 0`. The weight-drop
//! `k` part of `Q` is affine in the drop-`k` parts of `φ` and `β` with linear
//! part `φ_k + ∫₀ⁱβ_k`, so we solve one exact linear system per drop.

use std::collections::BTreeMap;

use super::pairing::{integral_pairing, Endpoints};
use super::shs::ShsObject;
use super::SplittingError;
use crate::exact::{Matrix, Quotient, Scalar, Subspace, Vector};
use crate::hodge::{BigradedSpace, Mhs, WeightGradedSpace};

#[derive(Clone, Debug)]
pub struct MhsSplitting {
    pub shs: ShsObject,
    /// Real `W`-filtered isomorphism from `shs.to_mhs()` to the input,
    /// inducing the identity on `gr^W`.
    pub phi: Matrix,
    pub splitting: WeightGradedSpace,
}

/// Uses the splitting `G_n` spanned by the echelon basis vectors of `W_n`
/// not already in `W_{n−1}`.
pub fn mhs_to_shs(m: &Mhs) -> Result<MhsSplitting, SplittingError> {
    let w = m.weight();
    let mut pieces = BTreeMap::new();
    for g in w.graded_pieces() {
        if g.dim() > 0 {
            pieces.insert(g.index, Subspace::span(m.dim(), g.quotient.section().to_vec())?);
        }
    }
    let splitting = WeightGradedSpace::new(m.dim(), pieces)?;
    mhs_to_shs_with_splitting(m, &splitting)
}

enum Unknown {
    Phi(Matrix),
    /// Contributes `c · M` to `β^{ab}`, `c ∈ {1, i}`.
    Beta { a: u32, b: u32, m: Matrix },
}

pub fn mhs_to_shs_with_splitting(m: &Mhs, splitting: &WeightGradedSpace) -> Result<MhsSplitting, SplittingError> {
    m.require_valid()?;
    let n = m.dim();
    let w = m.weight();
    for (&k, g) in splitting.pieces() {
        let lower = w.at(k - 1);
        if !w.at(k).contains_subspace(g) || !g.intersect(lower)?.is_zero() || g.dim() + lower.dim() != w.at(k).dim() {
            return Err(SplittingError::BadSplitting { weight: k });
        }
    }
    if splitting.dim() != n || splitting.pieces().values().map(Subspace::dim).sum::<usize>() != n {
        return Err(SplittingError::BadSplitting { weight: 0 });
    }

    // bigrading of E transported to V through the splitting
    let (flo, fhi) = m.hodge().bounds();
    let mut bigr = BTreeMap::new();
    for (&k, g) in splitting.pieces() {
        let fgr = |p: i64| -> Subspace {
            let s = m.hodge().at(p).intersect(w.at(k)).unwrap().sum(w.at(k - 1)).unwrap();
            s.intersect(g).unwrap()
        };
        for p in flo - 1..=fhi + 1 {
            let piece = fgr(p).intersect(&fgr(k - p).conj())?;
            if !piece.is_zero() {
                bigr.insert((p, k - p), piece);
            }
        }
    }
    let grading = BigradedSpace::new(n, bigr)?;

    // h: E^{pq} → I^{pq}, identity on gr^W
    let deligne = m.deligne_bigrading()?;
    let mut h_cols: Vec<Vector> = Vec::new();
    for (&(p, q), piece) in grading.pieces() {
        let k = p + q;
        let quot = Quotient::new(w.at(k), w.at(k - 1))?;
        let ipq = deligne.get(&(p, q)).ok_or(SplittingError::Inconsistent { stage: 0 })?;
        let images: Vec<Vector> = ipq.basis().iter().map(|v| quot.project(v)).collect::<Result<_, _>>()?;
        let proj = Matrix::from_columns(&images, quot.dim());
        for x in piece.basis() {
            let c = proj.solve(&quot.project(x)?)?;
            h_cols.push(ipq.from_coords(&c));
        }
    }
    let basis = grading.adapted_basis();
    let basis_inv = basis.inverse()?;
    let h = &Matrix::from_columns(&h_cols, n) * &basis_inv;
    let h_inv = h.inverse()?;

    let type_proj = grading.projectors();
    let weight_proj = splitting.projectors();
    let wbasis = splitting.adapted_basis();
    let wbasis_inv = wbasis.inverse()?;

    // column offsets of each piece in the adapted bases
    let mut type_offsets = BTreeMap::new();
    let mut off = 0;
    for (&k, s) in grading.pieces() {
        type_offsets.insert(k, (off, s.dim()));
        off += s.dim();
    }
    let mut weight_offsets = BTreeMap::new();
    off = 0;
    for (&k, s) in splitting.pieces() {
        weight_offsets.insert(k, (off, s.dim()));
        off += s.dim();
    }

    // blocks (source type, target type) with target p < source p, by drop
    let extract = |mat: &Matrix, drop: i64| -> Vec<Scalar> {
        let mut out = Vec::new();
        for (&(p, q), ps) in &type_proj {
            for (&(p2, q2), pt) in &type_proj {
                if p2 + q2 != p + q - drop || p2 >= p {
                    continue;
                }
                let c = &(pt * mat) * ps;
                for x in c.entries() {
                    out.push(x.real_part());
                    out.push(x.imag_part());
                }
            }
        }
        out
    };

    let weights: Vec<i64> = splitting.pieces().keys().copied().collect();
    let span = weights.last().copied().unwrap_or(0) - weights.first().copied().unwrap_or(0);
    let mut phi = Matrix::identity(n);
    let mut beta: BTreeMap<(u32, u32), Matrix> = BTreeMap::new();
    let i0 = |a: u32, b: u32| integral_pairing(a, b, Endpoints::ZeroToI);

    for drop in 1..=span {
        let mut unknowns = Vec::new();
        for (&src, &(so, sd)) in &weight_offsets {
            let Some(&(to, td)) = weight_offsets.get(&(src - drop)) else { continue };
            for i in 0..td {
                for j in 0..sd {
                    unknowns.push(Unknown::Phi(elementary(&wbasis, &wbasis_inv, to + i, so + j)));
                }
            }
        }
        for a in 0..=drop - 2 {
            let (a, b) = (a as u32, (drop - 2 - a) as u32);
            for (&(p, q), &(so, sd)) in &type_offsets {
                let target = (p - a as i64 - 1, q - b as i64 - 1);
                let Some(&(to, td)) = type_offsets.get(&target) else { continue };
                for i in 0..td {
                    for j in 0..sd {
                        let e = elementary(&basis, &basis_inv, to + i, so + j);
                        unknowns.push(Unknown::Beta { a, b, m: e.clone() });
                        unknowns.push(Unknown::Beta { a, b, m: e.scale(&Scalar::i()) });
                    }
                }
            }
        }
        let x = beta.iter().fold(Matrix::zeros(n, n), |acc, (&(a, b), bm)| &acc + &bm.scale(&i0(a, b)));
        let q_now = &(&h_inv * &phi) * &x.exp_nilpotent()?;
        let drop_part = weight_part(&q_now, &weight_proj, drop);
        let rhs: Vec<Scalar> = extract(&drop_part, drop).into_iter().map(|s| -s).collect();
        if unknowns.is_empty() {
            if rhs.iter().any(|s| !s.is_zero()) {
                return Err(SplittingError::Inconsistent { stage: drop });
            }
            continue;
        }

        // reality rows: conj(β^{ab}) − β^{ba} for this drop
        let pairs: Vec<(u32, u32)> = (0..=drop - 2).map(|a| (a as u32, (drop - 2 - a) as u32)).collect();
        let reality = |u: &Unknown| -> Vec<Scalar> {
            let mut out = Vec::new();
            for &(a, b) in &pairs {
                let mut blk = Matrix::zeros(n, n);
                if let Unknown::Beta { a: ua, b: ub, m } = u {
                    if (*ua, *ub) == (a, b) {
                        blk = &blk + &m.conj();
                    }
                    if (*ua, *ub) == (b, a) {
                        blk = &blk - m;
                    }
                }
                for e in blk.entries() {
                    out.push(e.real_part());
                    out.push(e.imag_part());
                }
            }
            out
        };
        let columns: Vec<Vector> = unknowns
            .iter()
            .map(|u| {
                let lin = match u {
                    Unknown::Phi(m) => m.clone(),
                    Unknown::Beta { a, b, m } => m.scale(&i0(*a, *b)),
                };
                let mut col = extract(&lin, drop);
                col.extend(reality(u));
                col
            })
            .collect();
        let mut full_rhs = rhs;
        full_rhs.extend(std::iter::repeat(Scalar::zero()).take(columns[0].len() - full_rhs.len()));
        let system = Matrix::from_columns(&columns, full_rhs.len());
        let sol = system.solve(&full_rhs).map_err(|_| SplittingError::Inconsistent { stage: drop })?;
        for kv in system.kernel() {
            let touches_beta = kv
                .iter()
                .zip(&unknowns)
                .any(|(c, u)| !c.is_zero() && matches!(u, Unknown::Beta { .. }));
            if touches_beta {
                return Err(SplittingError::NotUnique { stage: drop });
            }
        }
        for (c, u) in sol.iter().zip(&unknowns) {
            if c.is_zero() {
                continue;
            }
            match u {
                Unknown::Phi(m) => phi = &phi + &m.scale(c),
                Unknown::Beta { a, b, m } => {
                    let e = beta.entry((*a, *b)).or_insert_with(|| Matrix::zeros(n, n));
                    *e = &*e + &m.scale(c);
                }
            }
        }
    }

    let shs = ShsObject::new(grading, beta)?;
    if !shs.to_mhs().transport(&phi).same_filtrations(m) {
        return Err(SplittingError::Inconsistent { stage: -1 });
    }
    Ok(MhsSplitting { shs, phi, splitting: splitting.clone() })
}

/// `col_i(basis) · row_j(basis⁻¹)`: the map sending the `j`-th adapted basis
/// vector to the `i`-th and killing the others.
fn elementary(basis: &Matrix, inv: &Matrix, i: usize, j: usize) -> Matrix {
    let n = basis.rows();
    let mut out = Matrix::zeros(n, n);
    for r in 0..n {
        let x = basis.get(r, i);
        if x.is_zero() {
            continue;
        }
        for c in 0..n {
            let y = inv.get(j, c);
            if !y.is_zero() {
                out.set(r, c, x * y);
            }
        }
    }
    out
}

/// The part of `m` lowering weight by exactly `drop`.
fn weight_part(m: &Matrix, proj: &BTreeMap<i64, Matrix>, drop: i64) -> Matrix {
    let n = m.rows();
    let mut out = Matrix::zeros(n, n);
    for (&k, ps) in proj {
        if let Some(pt) = proj.get(&(k - drop)) {
            out = &out + &(&(pt * m) * ps);
        }
    }
    out
}

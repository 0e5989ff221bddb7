//! Total-complex oracles for Thom–Whitney cohomology of two-level covers.

use mixhodge::exact::matrix::unit_vector;
use mixhodge::exact::{Matrix, Scalar, Vector};
use mixhodge::homotopy::{Cosimplicial, Dga, DgaSpec};
use rand::Rng;

use super::{random_invertible, small_rational};

/// Complex built from elementary pieces: a single class in degree `n`, or
/// `x → y` in degrees `n, n+1`.
#[derive(Clone, Copy, Debug)]
pub enum Piece {
    Single(usize),
    Pair(usize),
}

/// `ℚ·1 ⊕ M` with `M·M = 0`.
pub struct SquareZero {
    pub pieces: Vec<Piece>,
    pub dga: Dga,
    /// position of each piece's basis elements
    pub slots: Vec<Vec<usize>>,
    pub change: Matrix,
}

pub const TOP: usize = 3;

pub fn square_zero<R: Rng>(rng: &mut R) -> SquareZero {
    let count = rng.gen_range(0..=3);
    let pieces: Vec<Piece> = (0..count).map(|_| if rng.gen_bool(0.5) { Piece::Single(rng.gen_range(0..=TOP)) } else { Piece::Pair(rng.gen_range(0..TOP)) }).collect();
    let mut dims = vec![0; TOP + 1];
    dims[0] = 1;
    let mut local: Vec<Vec<(usize, usize)>> = Vec::new(); // (degree, position within degree)
    for p in &pieces {
        let degs = match *p {
            Piece::Single(n) => vec![n],
            Piece::Pair(n) => vec![n, n + 1],
        };
        local.push(degs.iter().map(|&k| { dims[k] += 1; (k, dims[k] - 1) }).collect());
    }
    let offs: Vec<usize> = (0..=TOP).map(|k| dims[..k].iter().sum()).collect();
    let slots: Vec<Vec<usize>> = local.iter().map(|l| l.iter().map(|&(k, i)| offs[k] + i).collect()).collect();
    let n: usize = dims.iter().sum();
    let mut d = Matrix::zeros(n, n);
    for (p, s) in pieces.iter().zip(&slots) {
        if let Piece::Pair(_) = p {
            d.set(s[1], s[0], Scalar::one());
        }
    }
    // random basis change of M, degree by degree
    let mut change = Matrix::identity(n);
    for k in 0..=TOP {
        let start = if k == 0 { 1 } else { 0 };
        let m = random_invertible(rng, dims[k] - start);
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                change.set(offs[k] + start + r, offs[k] + start + c, m.get(r, c).clone());
            }
        }
    }
    let d = &(&change * &d) * &change.inverse().unwrap();
    let differential = (0..TOP).map(|k| d.block(offs[k + 1]..offs[k + 1] + dims[k + 1], offs[k]..offs[k] + dims[k])).collect();
    let mut unit = vec![Scalar::zero(); n];
    unit[0] = Scalar::one();
    let products = (0..n).map(|j| (0, j, j, Scalar::one())).collect();
    let dga = Dga::new(DgaSpec { dims, weights: None, weight_shift: 0, unit: Some(unit), products, differential }).unwrap();
    SquareZero { pieces, dga, slots, change }
}

/// A random chain map `ℚ ⊕ M → ℚ ⊕ N` that is the identity on the unit.
pub fn random_map<R: Rng>(rng: &mut R, src: &SquareZero, dst: &SquareZero) -> Matrix {
    let mut f = Matrix::zeros(dst.dga.dim(), src.dga.dim());
    f.set(0, 0, Scalar::one());
    for (sp, ss) in src.pieces.iter().zip(&src.slots) {
        for (tp, ts) in dst.pieces.iter().zip(&dst.slots) {
            let c = if rng.gen_bool(0.6) { small_rational(rng) } else { Scalar::zero() };
            match (*sp, *tp) {
                (Piece::Single(a), Piece::Single(b)) if a == b => f.set(ts[0], ss[0], c),
                (Piece::Pair(a), Piece::Pair(b)) if a == b => {
                    f.set(ts[0], ss[0], c.clone());
                    f.set(ts[1], ss[1], c);
                }
                (Piece::Single(a), Piece::Pair(b)) if a == b + 1 => f.set(ts[1], ss[0], c),
                (Piece::Pair(a), Piece::Single(b)) if a == b => f.set(ts[0], ss[0], c),
                _ => {}
            }
        }
    }
    &(&dst.change * &f) * &src.change.inverse().unwrap()
}

pub fn rank_of(cols: Vec<Vector>, rows: usize) -> usize {
    if cols.is_empty() || rows == 0 {
        0
    } else {
        Matrix::from_columns(&cols, rows).rank()
    }
}

pub fn degree_basis(a: &Dga, k: usize) -> Vec<usize> {
    if k < a.dims().len() {
        (a.offset(k)..a.offset(k) + a.dims()[k]).collect()
    } else {
        Vec::new()
    }
}

/// Cohomology of the cone of `B1 ⊕ B2 → B12`, `(x, y) ↦ r1 x − r2 y`, in degrees `0..=cap`.
pub fn cone_cohomology(b1: &Dga, b2: &Dga, b12: &Dga, r1: &Matrix, r2: &Matrix, cap: usize) -> Vec<usize> {
    let (n1, n2, n12) = (b1.dim(), b2.dim(), b12.dim());
    let total = n1 + n2 + n12;
    let d = |v: &Vector| -> Vector {
        let (x, rest) = v.split_at(n1);
        let (y, z) = rest.split_at(n2);
        let mut out = b1.d(x);
        out.extend(b2.d(y));
        let (rx, ry, dz) = (r1.apply(x), r2.apply(y), b12.d(z));
        out.extend((0..n12).map(|i| &(&rx[i] - &ry[i]) - &dz[i]));
        out
    };
    let cone_basis = |k: usize| -> Vec<Vector> {
        let mut out: Vec<Vector> = degree_basis(b1, k).into_iter().map(|i| unit_vector(total, i)).collect();
        out.extend(degree_basis(b2, k).into_iter().map(|i| unit_vector(total, n1 + i)));
        if k > 0 {
            out.extend(degree_basis(b12, k - 1).into_iter().map(|i| unit_vector(total, n1 + n2 + i)));
        }
        out
    };
    let rank = |k: usize| rank_of(cone_basis(k).iter().map(&d).collect(), total);
    (0..=cap).map(|k| cone_basis(k).len() - rank(k) - if k > 0 { rank(k - 1) } else { 0 }).collect()
}

/// Cohomology of the normalized total complex `⊕_n N^n A^{k−n}`, with
/// `N^n = ∩ ker σ_j` and differential `Σ(−1)^i ∂_i + (−1)^n d`.
pub fn normalized_tot_cohomology(c: &Cosimplicial, cap: usize) -> Vec<usize> {
    assert!(c.top_level() > cap);
    let levels = cap + 1;
    let offs: Vec<usize> = (0..=levels + 1).map(|n| (0..n.min(levels + 1)).map(|m| c.level(m).dim()).sum()).collect();
    let total = offs[levels + 1];
    let normalized = |n: usize, p: usize| -> Vec<Vector> {
        let a = c.level(n);
        let idx = degree_basis(a, p);
        if idx.is_empty() {
            return Vec::new();
        }
        if n == 0 {
            return idx.iter().map(|&i| unit_vector(a.dim(), i)).collect();
        }
        let mut rows = Vec::new();
        for j in 0..n {
            let s = c.codegeneracy(n - 1, j);
            for r in 0..s.rows() {
                rows.push(idx.iter().map(|&i| s.get(r, i).clone()).collect::<Vector>());
            }
        }
        Matrix::from_rows(rows, idx.len())
            .unwrap()
            .kernel()
            .into_iter()
            .map(|v| {
                let mut w = vec![Scalar::zero(); a.dim()];
                for (x, &i) in v.iter().zip(&idx) {
                    w[i] = x.clone();
                }
                w
            })
            .collect()
    };
    let tot_basis = |k: usize| -> Vec<Vector> {
        let mut out = Vec::new();
        for n in 0..=k.min(levels) {
            for v in normalized(n, k - n) {
                let mut w = vec![Scalar::zero(); total];
                w[offs[n]..offs[n] + v.len()].clone_from_slice(&v);
                out.push(w);
            }
        }
        out
    };
    let d = |v: &Vector| -> Vector {
        let mut out = vec![Scalar::zero(); total];
        for n in 0..=levels {
            let x = &v[offs[n]..offs[n + 1]];
            let a = c.level(n);
            let dx = a.d(x);
            for (i, y) in dx.into_iter().enumerate() {
                out[offs[n] + i] += &(if n % 2 == 1 { -y } else { y });
            }
            if n < levels {
                for i in 0..=n + 1 {
                    for (t, y) in c.coface(n, i).apply(x).into_iter().enumerate() {
                        out[offs[n + 1] + t] += &(if i % 2 == 1 { -y } else { y });
                    }
                }
            }
        }
        out
    };
    let rank = |k: usize| rank_of(tot_basis(k).iter().map(&d).collect(), total);
    (0..=cap).map(|k| tot_basis(k).len() - rank(k) - if k > 0 { rank(k - 1) } else { 0 }).collect()
}

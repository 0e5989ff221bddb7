#![allow(dead_code)]

pub mod tw;

use std::collections::BTreeMap;

use mixhodge::exact::{Matrix, Scalar, Subspace, Vector};
use mixhodge::hodge::BigradedSpace;
use mixhodge::splitting::ShsObject;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational<R: Rng>(rng: &mut R) -> Scalar {
    let num = rng.gen_range(-4..=4);
    let den = rng.gen_range(1..=3);
    Scalar::ratio(num, den)
}

pub fn small_gaussian<R: Rng>(rng: &mut R) -> Scalar {
    let re = small_rational(rng);
    let im = small_rational(rng);
    Scalar::gaussian(re, im)
}

/// Random invertible integer matrix with small entries.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    loop {
        let mut m = Matrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.gen_bool(0.4) {
                    m.set(i, j, Scalar::int(rng.gen_range(-2..=2)));
                }
            }
        }
        if m.inverse().is_ok() {
            return m;
        }
    }
}

/// Random bigrading of total dimension `1..=max_dim` with weights in
/// `[wlo, whi]`, in coordinates twisted by a random rational change of basis.
pub fn random_bigrading<R: Rng>(rng: &mut R, max_dim: usize, wlo: i64, whi: i64) -> BigradedSpace {
    let target = rng.gen_range(1..=max_dim);
    let mut types: Vec<(i64, i64)> = Vec::new();
    let mut dim = 0;
    while dim < target {
        let n = rng.gen_range(wlo..=whi);
        let p = rng.gen_range(n.div_euclid(2) - 2..=n.div_euclid(2) + 2);
        let q = n - p;
        if p == q {
            types.push((p, p));
            dim += 1;
        } else if dim + 2 <= target {
            types.push((p.max(q), p.min(q)));
            dim += 2;
        }
    }
    let g = random_invertible(rng, dim);
    let mut pieces: BTreeMap<(i64, i64), Vec<Vector>> = BTreeMap::new();
    let mut k = 0;
    for (p, q) in types {
        let e = |j: usize| g.col(j);
        if p == q {
            pieces.entry((p, p)).or_default().push(e(k));
            k += 1;
        } else {
            let (a, b) = (e(k), e(k + 1));
            let plus: Vector = a.iter().zip(&b).map(|(x, y)| x + &(&Scalar::i() * y)).collect();
            let minus: Vector = a.iter().zip(&b).map(|(x, y)| x - &(&Scalar::i() * y)).collect();
            pieces.entry((p, q)).or_default().push(plus);
            pieces.entry((q, p)).or_default().push(minus);
            k += 2;
        }
    }
    let pieces = pieces.into_iter().map(|(key, vs)| (key, Subspace::span(dim, vs).unwrap())).collect();
    BigradedSpace::new(dim, pieces).unwrap()
}

/// A random map of type `(r, s)` on the bigrading.
pub fn random_typed_map<R: Rng>(rng: &mut R, g: &BigradedSpace, r: i64, s: i64, density: f64) -> Matrix {
    let basis = g.adapted_basis();
    let inv = basis.inverse().unwrap();
    let n = g.dim();
    let mut offsets = BTreeMap::new();
    let mut off = 0;
    for (&k, sp) in g.pieces() {
        offsets.insert(k, (off, sp.dim()));
        off += sp.dim();
    }
    let mut m = Matrix::zeros(n, n);
    for (&(p, q), &(so, sd)) in &offsets {
        if let Some(&(to, td)) = offsets.get(&(p + r, q + s)) {
            for i in 0..td {
                for j in 0..sd {
                    if rng.gen_bool(density) {
                        m.set(to + i, so + j, small_gaussian(rng));
                    }
                }
            }
        }
    }
    &(&basis * &m) * &inv
}

/// Random split Hodge structure: `β^{ab} = Y^{ab} + conj(Y^{ba})`.
pub fn random_shs<R: Rng>(rng: &mut R, max_dim: usize, wlo: i64, whi: i64) -> ShsObject {
    let g = random_bigrading(rng, max_dim, wlo, whi);
    let span = (whi - wlo) as u32;
    let mut ys = BTreeMap::new();
    for a in 0..=span {
        for b in 0..=span.saturating_sub(a) {
            let y = random_typed_map(rng, &g, -(a as i64) - 1, -(b as i64) - 1, 0.5);
            if !y.is_zero() {
                ys.insert((a, b), y);
            }
        }
    }
    let n = g.dim();
    let mut beta = BTreeMap::new();
    for (&(a, b), y) in &ys {
        let mirror = ys.get(&(b, a)).map(|m| m.conj()).unwrap_or_else(|| Matrix::zeros(n, n));
        beta.insert((a, b), y + &mirror);
        beta.insert((b, a), &y.conj() + &ys.get(&(b, a)).cloned().unwrap_or_else(|| Matrix::zeros(n, n)));
    }
    ShsObject::new(g, beta).unwrap()
}

/// Elementary summand of a filtered complex: a lone generator `(n, s)` or a
/// pair `x → y` with `x` at `(n, s)` and `y` at `(n + 1, t)`, `t ≤ s`.
#[derive(Clone, Copy, Debug)]
pub enum Piece {
    Single { n: i64, s: i64 },
    Pair { n: i64, s: i64, t: i64 },
}

impl Piece {
    /// Dimension this summand contributes to `E_r`.
    pub fn page_dim(&self, r: i64) -> usize {
        match *self {
            Piece::Single { .. } => 1,
            Piece::Pair { s, t, .. } => {
                if r <= s - t {
                    2
                } else {
                    0
                }
            }
        }
    }
}

/// Random filtered complex in degrees `0..=max_deg` with indices in `0..=max_idx`,
/// built from elementary summands and a random change of basis in each degree.
pub fn random_filtered_complex<R: Rng>(
    rng: &mut R,
    max_deg: i64,
    max_idx: i64,
    max_pieces: usize,
) -> (mixhodge::spectral::FilteredComplex, Vec<Piece>) {
    use mixhodge::filtration::{Direction, FilteredSpace};
    use mixhodge::spectral::{Complex, FilteredComplex};
    let count = rng.gen_range(1..=max_pieces);
    let mut pieces = Vec::new();
    for _ in 0..count {
        let s = rng.gen_range(0..=max_idx);
        if max_deg > 0 && rng.gen_bool(0.6) {
            let n = rng.gen_range(0..max_deg);
            pieces.push(Piece::Pair { n, s, t: rng.gen_range(0..=s) });
        } else {
            pieces.push(Piece::Single { n: rng.gen_range(0..=max_deg), s });
        }
    }
    // generators per degree: (filtration index, partner slot)
    let mut gens: Vec<Vec<i64>> = vec![Vec::new(); (max_deg + 1) as usize];
    let mut edges = Vec::new();
    for p in &pieces {
        match *p {
            Piece::Single { n, s } => gens[n as usize].push(s),
            Piece::Pair { n, s, t } => {
                gens[n as usize].push(s);
                gens[n as usize + 1].push(t);
                edges.push((n, gens[n as usize].len() - 1, gens[n as usize + 1].len() - 1));
            }
        }
    }
    let dims: Vec<usize> = gens.iter().map(Vec::len).collect();
    let change: Vec<Matrix> = dims.iter().map(|&d| random_invertible(rng, d)).collect();
    let inverse: Vec<Matrix> = change.iter().map(|m| m.inverse().unwrap()).collect();
    let d = (0..max_deg as usize)
        .map(|k| {
            let mut m = Matrix::zeros(dims[k + 1], dims[k]);
            for &(n, i, j) in &edges {
                if n as usize == k {
                    m.set(j, i, Scalar::one());
                }
            }
            &(&change[k + 1] * &m) * &inverse[k]
        })
        .collect();
    let filt = (0..=max_deg as usize)
        .map(|k| {
            let dim = dims[k];
            FilteredSpace::from_fn(dim, Direction::Increasing, 0, max_idx, Subspace::zero(dim), |r| {
                let vs: Vec<Vector> =
                    gens[k].iter().enumerate().filter(|(_, &s)| s <= r).map(|(i, _)| change[k].col(i)).collect();
                Subspace::span(dim, vs).unwrap()
            })
            .unwrap()
        })
        .collect();
    let c = Complex::new(0, dims, d).unwrap();
    (FilteredComplex::new(c, filt).unwrap(), pieces)
}

//! `Hom` and `Ext¹` in the split categories, from the four-term sequence
//! `0 → Hom → Hom_S → ⊕_{ab} Hom_{(a,b)} → Ext¹ → 0` with middle map
//! `f ↦ (β^{ab} f − f α^{ab})_{ab}`. Here `Hom_S` is maps preserving the
//! grading and `Hom_{(a,b)}` is maps of the type (or weight shift) carried by
//! the coefficient monomial `(a, b)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::shs::ShsObject;
use super::sts::StsObject;
use super::Component;
use crate::exact::matrix::conj_vector;
use crate::exact::{Matrix, Scalar, Subspace, Vector};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HomExt {
    pub hom_s_dim: usize,
    pub target_dim: usize,
    pub hom_dim: usize,
    pub ext1_dim: usize,
    /// Real maps `U → V` (as `dim V × dim U` matrices).
    pub hom_basis: Vec<Matrix>,
    /// Representatives of `Ext¹`, one map per coefficient monomial.
    pub ext1_basis: Vec<Vec<Component>>,
}

fn vec_of(m: &Matrix) -> Vector {
    m.entries().to_vec()
}

/// Elementary maps `basis_v[i] ⊗ dual(basis_u)[j]` for each admissible
/// block pair.
fn block_maps(
    u_basis: &Matrix,
    v_basis: &Matrix,
    u_blocks: &[(usize, usize)],
    v_blocks: &[(usize, usize)],
) -> Vec<Matrix> {
    let u_inv = u_basis.inverse().expect("adapted basis");
    let (nu, nv) = (u_basis.rows(), v_basis.rows());
    let mut out = Vec::new();
    for (&(uo, ud), &(vo, vd)) in u_blocks.iter().zip(v_blocks) {
        for i in 0..vd {
            for j in 0..ud {
                let mut m = Matrix::zeros(nv, nu);
                for r in 0..nv {
                    let x = v_basis.get(r, vo + i);
                    if x.is_zero() {
                        continue;
                    }
                    for c in 0..nu {
                        let y = u_inv.get(uo + j, c);
                        if !y.is_zero() {
                            m.set(r, c, x * y);
                        }
                    }
                }
                out.push(m);
            }
        }
    }
    out
}

/// Basis of a `tau`-stable space made of `tau`-fixed vectors.
fn fixed_basis<F: Fn(&[Scalar]) -> Vector>(space: &[Vector], ambient: usize, tau: F) -> Vec<Vector> {
    let target = Subspace::span(ambient, space.to_vec()).unwrap().dim();
    let mut chosen: Vec<Vector> = Vec::new();
    let mut span = Subspace::zero(ambient);
    for v in space {
        let t = tau(v);
        let plus: Vector = v.iter().zip(&t).map(|(a, b)| a + b).collect();
        let minus: Vector = v.iter().zip(&t).map(|(a, b)| &Scalar::i() * &(a - b)).collect();
        for c in [plus, minus] {
            if chosen.len() < target && !span.contains(&c) {
                span = span.sum(&Subspace::span(ambient, [c.clone()]).unwrap()).unwrap();
                chosen.push(c);
            }
        }
    }
    chosen
}

struct Problem {
    nu: usize,
    nv: usize,
    hom_s: Vec<Matrix>,
    keys: Vec<(u32, u32)>,
    target: Vec<Vector>,
    mirror: bool,
}

impl Problem {
    fn tau(&self, t: &[Scalar]) -> Vector {
        let block = self.nu * self.nv;
        let mut out = Vec::with_capacity(t.len());
        for &(a, b) in &self.keys {
            let src = if self.mirror { (b, a) } else { (a, b) };
            let k = self.keys.iter().position(|&x| x == src).expect("key set closed under swap");
            out.extend(conj_vector(&t[k * block..(k + 1) * block]));
        }
        out
    }

    fn solve<F: Fn(&Matrix) -> Vec<Matrix>>(&self, d: F) -> HomExt {
        let block = self.nu * self.nv;
        let amb_t = block * self.keys.len();
        let hom_s_vecs: Vec<Vector> = self.hom_s.iter().map(vec_of).collect();
        let hom_s_real = fixed_basis(&hom_s_vecs, block, conj_vector);
        let t_real = fixed_basis(&self.target, amb_t, |v| self.tau(v));
        let t_mat = Matrix::from_columns(&t_real, amb_t);
        let dcols: Vec<Vector> = hom_s_real
            .iter()
            .map(|f| {
                let f = Matrix::from_entries(self.nv, self.nu, f.clone());
                let img: Vector = d(&f).iter().flat_map(|m| m.entries().to_vec()).collect();
                t_mat.solve(&img).expect("image lies in the target")
            })
            .collect();
        let dm = Matrix::from_columns(&dcols, t_real.len());
        let kernel = if hom_s_real.is_empty() { Vec::new() } else { dm.kernel() };
        let hom_basis = kernel
            .iter()
            .map(|c| {
                let mut acc = vec![Scalar::zero(); block];
                for (x, f) in c.iter().zip(&hom_s_real) {
                    crate::exact::matrix::add_scaled(&mut acc, x, f);
                }
                Matrix::from_entries(self.nv, self.nu, acc)
            })
            .collect();
        let image = Subspace::span(t_real.len(), dcols).unwrap();
        let ext1_basis = image
            .standard_complement()
            .basis()
            .iter()
            .map(|c| {
                let v = t_mat.apply(c);
                self.keys
                    .iter()
                    .enumerate()
                    .map(|(k, &(a, b))| Component { a, b, matrix: Matrix::from_entries(self.nv, self.nu, v[k * block..(k + 1) * block].to_vec()) })
                    .filter(|c| !c.matrix.is_zero())
                    .collect()
            })
            .collect::<Vec<_>>();
        HomExt {
            hom_s_dim: hom_s_real.len(),
            target_dim: t_real.len(),
            hom_dim: kernel.len(),
            ext1_dim: ext1_basis.len(),
            hom_basis,
            ext1_basis,
        }
    }
}

fn offsets<K: Ord + Copy>(pieces: &BTreeMap<K, Subspace>) -> BTreeMap<K, (usize, usize)> {
    let mut out = BTreeMap::new();
    let mut off = 0;
    for (&k, s) in pieces {
        out.insert(k, (off, s.dim()));
        off += s.dim();
    }
    out
}

fn embed(keys: &[(u32, u32)], k: usize, m: &Matrix) -> Vector {
    let block = m.rows() * m.cols();
    let mut v = vec![Scalar::zero(); block * keys.len()];
    v[k * block..(k + 1) * block].clone_from_slice(m.entries());
    v
}

/// `Hom` and `Ext¹` between split Hodge structures `(U, α)` and `(V, β)`.
pub fn hom_ext_shs(u: &ShsObject, v: &ShsObject) -> HomExt {
    let (ug, vg) = (u.grading(), v.grading());
    let (uo, vo) = (offsets(ug.pieces()), offsets(vg.pieces()));
    let (ub, vb) = (ug.adapted_basis(), vg.adapted_basis());
    let blocks = |r: i64, s: i64| -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (&(p, q), &x) in &uo {
            if let Some(&y) = vo.get(&(p + r, q + s)) {
                a.push(x);
                b.push(y);
            }
        }
        (a, b)
    };
    let (a0, b0) = blocks(0, 0);
    let hom_s = block_maps(&ub, &vb, &a0, &b0);
    let mut keys = Vec::new();
    for &(p, q) in uo.keys() {
        for &(p2, q2) in vo.keys() {
            let (a, b) = (p - p2 - 1, q - q2 - 1);
            if a >= 0 && b >= 0 {
                keys.push((a as u32, b as u32));
            }
        }
    }
    keys.sort();
    keys.dedup();
    let mut target = Vec::new();
    for (k, &(a, b)) in keys.iter().enumerate() {
        let (x, y) = blocks(-(a as i64) - 1, -(b as i64) - 1);
        for m in block_maps(&ub, &vb, &x, &y) {
            target.push(embed(&keys, k, &m));
        }
    }
    let problem = Problem { nu: u.dim(), nv: v.dim(), hom_s, keys: keys.clone(), target, mirror: true };
    problem.solve(|f| {
        keys.iter()
            .map(|&(a, b)| &(&v.beta_component(a, b) * f) - &(f * &u.beta_component(a, b)))
            .collect()
    })
}

/// `Hom` and `Ext¹` between split twistor structures.
pub fn hom_ext_sts(u: &StsObject, v: &StsObject) -> HomExt {
    let (ug, vg) = (u.grading(), v.grading());
    let (uo, vo) = (offsets(ug.pieces()), offsets(vg.pieces()));
    let (ub, vb) = (ug.adapted_basis(), vg.adapted_basis());
    let blocks = |shift: i64| -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (&w, &x) in &uo {
            if let Some(&y) = vo.get(&(w + shift)) {
                a.push(x);
                b.push(y);
            }
        }
        (a, b)
    };
    let (a0, b0) = blocks(0);
    let hom_s = block_maps(&ub, &vb, &a0, &b0);
    let mut keys = Vec::new();
    for &w in uo.keys() {
        for &w2 in vo.keys() {
            let total = w - w2 - 2;
            for m in 0..=total.max(-1) {
                keys.push((m as u32, (total - m) as u32));
            }
        }
    }
    keys.sort();
    keys.dedup();
    let mut target = Vec::new();
    for (k, &(m, n)) in keys.iter().enumerate() {
        let (x, y) = blocks(-(m as i64) - (n as i64) - 2);
        for b in block_maps(&ub, &vb, &x, &y) {
            target.push(embed(&keys, k, &b));
        }
    }
    let problem = Problem { nu: u.dim(), nv: v.dim(), hom_s, keys: keys.clone(), target, mirror: false };
    problem.solve(|f| {
        keys.iter()
            .map(|&(m, n)| &(&v.beta_component(m, n) * f) - &(f * &u.beta_component(m, n)))
            .collect()
    })
}

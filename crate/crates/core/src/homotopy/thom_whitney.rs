//! Thom–Whitney totalization of a cosimplicial DGA:
//! `Th(A) = {(a_n) ∈ ∏ A^n ⊗ Ω(Δ^n) : ∂ᴬ_i a_n = ∂_i a_{n+1}, σᴬ_j a_n = σ_j a_{n−1}}`,
//! computed from levels `0..=L` with forms of polynomial degree at most `P`
//! (each `t_k` and each `dt_k` counting one).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::dga::{Dga, DgaSpec};
use super::HomotopyError;
use crate::exact::matrix::unit_vector;
use crate::exact::sparse::{sparse_rank, Eliminator, SparseRow};
use crate::exact::{Matrix, Scalar, Vector};

/// `t^exps dt_mask` in the affine coordinates `t_1 … t_n` of `Δ^n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Mono {
    exps: Vec<u32>,
    mask: u32,
}

type Form = BTreeMap<Mono, Scalar>;

impl Mono {
    fn form_degree(&self) -> usize {
        self.mask.count_ones() as usize
    }
}

fn add_to(f: &mut Form, m: Mono, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = f.entry(m.clone()).or_default();
    *e += &c;
    if e.is_zero() {
        f.remove(&m);
    }
}

/// Sign of `dt_a ∧ dt_b` against the sorted order, or `None` if they overlap.
fn wedge_sign(a: u32, b: u32) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut inv = 0;
    for j in 0..32 {
        if b >> j & 1 == 1 {
            inv += (a >> (j + 1)).count_ones();
        }
    }
    Some(inv % 2 == 1)
}

fn fmul(x: &Form, y: &Form) -> Form {
    let mut out = Form::new();
    for (m, a) in x {
        for (n, b) in y {
            let Some(neg) = wedge_sign(m.mask, n.mask) else { continue };
            let exps = m.exps.iter().zip(&n.exps).map(|(p, q)| p + q).collect();
            let c = a * b;
            add_to(&mut out, Mono { exps, mask: m.mask | n.mask }, if neg { -c } else { c });
        }
    }
    out
}

fn fd(x: &Form) -> Form {
    let mut out = Form::new();
    for (m, c) in x {
        for l in 0..m.exps.len() {
            if m.exps[l] == 0 || m.mask >> l & 1 == 1 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[l] -= 1;
            let neg = (m.mask & ((1 << l) - 1)).count_ones() % 2 == 1;
            let k = c * &Scalar::int(m.exps[l] as i64);
            add_to(&mut out, Mono { exps, mask: m.mask | 1 << l }, if neg { -k } else { k });
        }
    }
    out
}

fn constant(n: usize, c: Scalar) -> Form {
    let mut f = Form::new();
    add_to(&mut f, Mono { exps: vec![0; n], mask: 0 }, c);
    f
}

/// Barycentric coordinate `u_l` of `Δ^n` in affine coordinates.
fn bary(n: usize, l: usize) -> Form {
    let mut f = Form::new();
    if l == 0 {
        f = constant(n, Scalar::one());
        for k in 0..n {
            let mut exps = vec![0; n];
            exps[k] = 1;
            add_to(&mut f, Mono { exps, mask: 0 }, -Scalar::one());
        }
    } else {
        let mut exps = vec![0; n];
        exps[l - 1] = 1;
        add_to(&mut f, Mono { exps, mask: 0 }, Scalar::one());
    }
    f
}

/// Affine coordinates of `Δ^n` pulled back along the face `Δ^{n−1} → Δ^n` missing vertex `i`.
fn face_images(n: usize, i: usize) -> Vec<Form> {
    (1..=n)
        .map(|k| match k.cmp(&i) {
            std::cmp::Ordering::Less => bary(n - 1, k),
            std::cmp::Ordering::Equal => Form::new(),
            std::cmp::Ordering::Greater => bary(n - 1, k - 1),
        })
        .collect()
}

/// Affine coordinates of `Δ^n` pulled back along the degeneracy `Δ^{n+1} → Δ^n` merging `j, j+1`.
fn degeneracy_images(n: usize, j: usize) -> Vec<Form> {
    (1..=n)
        .map(|k| match k.cmp(&j) {
            std::cmp::Ordering::Less => bary(n + 1, k),
            std::cmp::Ordering::Equal => {
                let mut f = bary(n + 1, j);
                for (m, c) in bary(n + 1, j + 1) {
                    add_to(&mut f, m, c);
                }
                f
            }
            std::cmp::Ordering::Greater => bary(n + 1, k + 1),
        })
        .collect()
}

fn pullback(m: &Mono, images: &[Form], src_dim: usize) -> Form {
    let mut out = constant(src_dim, Scalar::one());
    for (k, &e) in m.exps.iter().enumerate() {
        for _ in 0..e {
            out = fmul(&out, &images[k]);
        }
    }
    for l in 0..images.len() {
        if m.mask >> l & 1 == 1 {
            out = fmul(&out, &fd(&images[l]));
        }
    }
    out
}

/// Monomials of `Ω^q(Δ^n)` with polynomial degree at most `p`.
fn monomials(n: usize, q: usize, p: usize) -> Vec<Mono> {
    if q > n || q > p {
        return Vec::new();
    }
    let mut exps_list = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for e in &exps_list {
            let used: u32 = e.iter().sum();
            for a in 0..=(p - q) as u32 - used {
                let mut e2: Vec<u32> = e.clone();
                e2.push(a);
                next.push(e2);
            }
        }
        exps_list = next;
    }
    let masks: Vec<u32> = (0u32..1 << n).filter(|m| m.count_ones() as usize == q).collect();
    let mut out = Vec::new();
    for e in &exps_list {
        for &mask in &masks {
            out.push(Mono { exps: e.clone(), mask });
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosimplicialSpec {
    pub levels: Vec<DgaSpec>,
    /// `cofaces[n][i]: A^n → A^{n+1}`, `i = 0..=n+1`.
    pub cofaces: Vec<Vec<Matrix>>,
    /// `codegeneracies[n][j]: A^{n+1} → A^n`, `j = 0..=n`.
    pub codegeneracies: Vec<Vec<Matrix>>,
}

/// A cosimplicial DGA given on levels `0..=L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cosimplicial {
    levels: Vec<Dga>,
    cofaces: Vec<Vec<Matrix>>,
    codeg: Vec<Vec<Matrix>>,
}

fn check_dga_map(m: &Matrix, src: &Dga, dst: &Dga) -> bool {
    if m.shape() != (dst.dim(), src.dim()) {
        return false;
    }
    for r in 0..dst.dim() {
        for c in 0..src.dim() {
            if !m.get(r, c).is_zero() && dst.degree_of(r) != src.degree_of(c) {
                return false;
            }
        }
    }
    if m.apply(src.unit()) != dst.unit() {
        return false;
    }
    let n = src.dim();
    for i in 0..n {
        let ei = unit_vector(n, i);
        if m.apply(&src.d(&ei)) != dst.d(&m.apply(&ei)) {
            return false;
        }
        for j in 0..n {
            let ej = unit_vector(n, j);
            if m.apply(&src.mul(&ei, &ej)) != dst.mul(&m.apply(&ei), &m.apply(&ej)) {
                return false;
            }
        }
    }
    true
}

impl Cosimplicial {
    pub fn new(spec: CosimplicialSpec) -> Result<Self, HomotopyError> {
        let levels: Vec<Dga> = spec.levels.into_iter().map(Dga::new).collect::<Result<_, _>>()?;
        Self::from_parts(levels, spec.cofaces, spec.codegeneracies)
    }

    pub fn from_parts(levels: Vec<Dga>, cofaces: Vec<Vec<Matrix>>, codeg: Vec<Vec<Matrix>>) -> Result<Self, HomotopyError> {
        if levels.is_empty() {
            return Err(HomotopyError::Shape("no levels".into()));
        }
        let top = levels.len() - 1;
        if cofaces.len() != top || codeg.len() != top {
            return Err(HomotopyError::Shape(format!("{} levels need {top} sets of structure maps", levels.len())));
        }
        for n in 0..top {
            if cofaces[n].len() != n + 2 || codeg[n].len() != n + 1 {
                return Err(HomotopyError::Shape(format!("wrong number of structure maps at level {n}")));
            }
            for (i, m) in cofaces[n].iter().enumerate() {
                if !check_dga_map(m, &levels[n], &levels[n + 1]) {
                    return Err(HomotopyError::NotDgaMap { map: format!("coface {i}"), level: n });
                }
            }
            for (j, m) in codeg[n].iter().enumerate() {
                if !check_dga_map(m, &levels[n + 1], &levels[n]) {
                    return Err(HomotopyError::NotDgaMap { map: format!("codegeneracy {j}"), level: n });
                }
            }
        }
        let c = Cosimplicial { levels, cofaces, codeg };
        c.check_identities()?;
        Ok(c)
    }

    fn check_identities(&self) -> Result<(), HomotopyError> {
        let top = self.top_level();
        let fail = |identity: &str, level: usize| Err(HomotopyError::Cosimplicial { identity: identity.into(), level });
        for n in 0..top.saturating_sub(1) {
            for j in 0..=n + 2 {
                for i in 0..j {
                    if &self.cofaces[n + 1][j] * &self.cofaces[n][i] != &self.cofaces[n + 1][i] * &self.cofaces[n][j - 1] {
                        return fail("∂_j ∂_i = ∂_i ∂_{j−1}", n);
                    }
                }
            }
            for j in 0..=n {
                for i in 0..=j {
                    if &self.codeg[n][j] * &self.codeg[n + 1][i] != &self.codeg[n][i] * &self.codeg[n + 1][j + 1] {
                        return fail("σ_j σ_i = σ_i σ_{j+1}", n);
                    }
                }
            }
        }
        for n in 0..top {
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = &self.codeg[n][j] * &self.cofaces[n][i];
                    let rhs = if i == j || i == j + 1 {
                        Matrix::identity(self.levels[n].dim())
                    } else if i < j {
                        &self.cofaces[n - 1][i] * &self.codeg[n - 1][j - 1]
                    } else {
                        &self.cofaces[n - 1][i - 1] * &self.codeg[n - 1][j]
                    };
                    if lhs != rhs {
                        return fail("σ_j ∂_i", n);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn top_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &Dga {
        &self.levels[n]
    }

    pub fn coface(&self, n: usize, i: usize) -> &Matrix {
        &self.cofaces[n][i]
    }

    pub fn codegeneracy(&self, n: usize, j: usize) -> &Matrix {
        &self.codeg[n][j]
    }

    /// The constant cosimplicial algebra on `b`.
    pub fn constant(b: &Dga, levels: usize) -> Self {
        let id = Matrix::identity(b.dim());
        Cosimplicial {
            levels: vec![b.clone(); levels + 1],
            cofaces: (0..levels).map(|n| vec![id.clone(); n + 2]).collect(),
            codeg: (0..levels).map(|n| vec![id.clone(); n + 1]).collect(),
        }
    }

    /// Functions on the simplicial interval with coefficients `b1`, `b2` at
    /// the vertices and `b12` on the edge, glued by `r1: b1 → b12` and
    /// `r2: b2 → b12`. Simplices of level `n` are `1^c 2^{n+1−c}`.
    pub fn interval(b1: &Dga, b2: &Dga, b12: &Dga, r1: &Matrix, r2: &Matrix, levels: usize) -> Result<Self, HomotopyError> {
        if !check_dga_map(r1, b1, b12) {
            return Err(HomotopyError::NotDgaMap { map: "r1".into(), level: 0 });
        }
        if !check_dga_map(r2, b2, b12) {
            return Err(HomotopyError::NotDgaMap { map: "r2".into(), level: 0 });
        }
        let bs = [b1, b2, b12];
        let kind = |n: usize, c: usize| -> usize {
            if c == n + 1 {
                0
            } else if c == 0 {
                1
            } else {
                2
            }
        };
        let top = bs.iter().map(|b| b.top_degree()).max().unwrap();
        let bdim = |b: &Dga, p: usize| if p <= b.top_degree() { b.dims()[p] } else { 0 };
        // index of local basis element `l` of summand `c` at level `n`
        let index = |n: usize, c: usize, l: usize| -> usize {
            let b = bs[kind(n, c)];
            let p = b.degree_of(l);
            let mut off: usize = (0..p).map(|q| (0..=n + 1).map(|cc| bdim(bs[kind(n, cc)], q)).sum::<usize>()).sum();
            off += (0..c).map(|cc| bdim(bs[kind(n, cc)], p)).sum::<usize>();
            off + l - b.offset(p)
        };
        let mut levels_out = Vec::new();
        for n in 0..=levels {
            let dims: Vec<usize> = (0..=top).map(|p| (0..=n + 1).map(|c| bdim(bs[kind(n, c)], p)).sum()).collect();
            let total: usize = dims.iter().sum();
            let mut unit = vec![Scalar::zero(); total];
            let mut products = Vec::new();
            let mut d: Vec<Matrix> = (0..top).map(|p| Matrix::zeros(dims[p + 1], dims[p])).collect();
            let offs: Vec<usize> = (0..=top).map(|p| dims[..p].iter().sum()).collect();
            for c in 0..=n + 1 {
                let b = bs[kind(n, c)];
                for (l, x) in b.unit().iter().enumerate() {
                    if !x.is_zero() {
                        unit[index(n, c, l)] = x.clone();
                    }
                }
                for (&(i, j), v) in b.products() {
                    for (k, x) in v.iter().enumerate() {
                        if !x.is_zero() {
                            products.push((index(n, c, i), index(n, c, j), index(n, c, k), x.clone()));
                        }
                    }
                }
                for l in 0..b.dim() {
                    for (k, x) in b.d(&unit_vector(b.dim(), l)).iter().enumerate() {
                        if !x.is_zero() {
                            let p = b.degree_of(l);
                            let (r, col) = (index(n, c, k) - offs[p + 1], index(n, c, l) - offs[p]);
                            d[p].set(r, col, x.clone());
                        }
                    }
                }
            }
            levels_out.push(Dga::new(DgaSpec { dims, weights: None, weight_shift: 0, unit: Some(unit), products, differential: d })?);
        }
        let restrict = |from: usize, to: usize| -> Matrix {
            match (from, to) {
                (a, b) if a == b => Matrix::identity(bs[a].dim()),
                (0, 2) => r1.clone(),
                (1, 2) => r2.clone(),
                _ => unreachable!("restriction only goes from a vertex to the edge"),
            }
        };
        let mut cofaces = Vec::new();
        let mut codeg = Vec::new();
        for n in 0..levels {
            let mut fs = Vec::new();
            for i in 0..=n + 1 {
                let mut m = Matrix::zeros(levels_out[n + 1].dim(), levels_out[n].dim());
                for c in 0..=n + 2 {
                    let src = if i < c { c - 1 } else { c };
                    let r = restrict(kind(n, src), kind(n + 1, c));
                    for row in 0..r.rows() {
                        for col in 0..r.cols() {
                            if !r.get(row, col).is_zero() {
                                m.set(index(n + 1, c, row), index(n, src, col), r.get(row, col).clone());
                            }
                        }
                    }
                }
                fs.push(m);
            }
            cofaces.push(fs);
            let mut ss = Vec::new();
            for j in 0..=n {
                let mut m = Matrix::zeros(levels_out[n].dim(), levels_out[n + 1].dim());
                for c in 0..=n + 1 {
                    let src = if j < c { c + 1 } else { c };
                    for l in 0..bs[kind(n, c)].dim() {
                        m.set(index(n, c, l), index(n + 1, src, l), Scalar::one());
                    }
                }
                ss.push(m);
            }
            codeg.push(ss);
        }
        Self::from_parts(levels_out, cofaces, codeg)
    }
}

/// Unknowns of total degree `k`: `(level, basis element, form monomial)`,
/// highest level first.
struct Layout {
    entries: Vec<(usize, usize, Mono)>,
    index: BTreeMap<(usize, usize, Mono), usize>,
}

impl Layout {
    fn new(c: &Cosimplicial, levels: usize, k: usize, p: usize) -> Self {
        let mut entries = Vec::new();
        for n in (0..=levels).rev() {
            let a = c.level(n);
            for b in 0..a.dim() {
                let deg = a.degree_of(b);
                if deg > k {
                    continue;
                }
                for m in monomials(n, k - deg, p) {
                    entries.push((n, b, m));
                }
            }
        }
        let index = entries.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Layout { entries, index }
    }

    fn len(&self) -> usize {
        self.entries.len()
    }
}

struct Degree {
    layout: Layout,
    basis: Vec<Vector>,
    free: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThReport {
    pub level_cap: usize,
    pub form_cap: usize,
    pub degree_cap: usize,
    /// `dim Th^k` for `k = 0..=degree_cap`.
    pub dims: Vec<usize>,
    pub cohomology: Vec<usize>,
    /// Cohomology unchanged with one level fewer and with form degree one lower.
    pub stable: bool,
}

pub struct ThomWhitney {
    cos: Cosimplicial,
    levels: usize,
    form_cap: usize,
    degrees: Vec<Degree>,
    pub report: ThReport,
}

fn solve_degree(c: &Cosimplicial, levels: usize, k: usize, p: usize) -> Degree {
    let layout = Layout::new(c, levels, k, p);
    let mut rows: BTreeMap<(u8, usize, usize, usize, Mono), SparseRow> = BTreeMap::new();
    let mut push = |key: (u8, usize, usize, usize, Mono), col: usize, x: Scalar| {
        let r = rows.entry(key).or_default();
        let e = r.entry(col).or_default();
        *e += &x;
    };
    for (col, (n, b, m)) in layout.entries.iter().enumerate() {
        let n = *n;
        // as the lower end of a face condition
        if n < levels {
            for i in 0..=n + 1 {
                let img = c.coface(n, i);
                for r in 0..img.rows() {
                    let x = img.get(r, *b);
                    if !x.is_zero() {
                        push((0, n, i, r, m.clone()), col, x.clone());
                    }
                }
            }
        }
        // as the upper end of a face condition
        if n > 0 {
            for i in 0..=n {
                for (m2, x) in pullback(m, &face_images(n, i), n - 1) {
                    push((0, n - 1, i, *b, m2), col, -x);
                }
            }
        }
        // as the upper end of a degeneracy condition
        if n > 0 {
            for j in 0..n {
                let img = c.codegeneracy(n - 1, j);
                for r in 0..img.rows() {
                    let x = img.get(r, *b);
                    if !x.is_zero() {
                        push((1, n, j, r, m.clone()), col, x.clone());
                    }
                }
            }
        }
        // as the lower end of a degeneracy condition
        if n < levels {
            for j in 0..=n {
                for (m2, x) in pullback(m, &degeneracy_images(n, j), n + 1) {
                    push((1, n + 1, j, *b, m2), col, -x);
                }
            }
        }
    }
    let mut e = Eliminator::new();
    for (_, mut r) in rows {
        r.retain(|_, x| !x.is_zero());
        e.push(r);
    }
    let basis = e.kernel(layout.len());
    let free = basis.iter().map(|v| v.iter().position(|x| x.is_one()).expect("unit at the free column")).collect();
    Degree { layout, basis, free }
}

impl ThomWhitney {
    fn differential(&self, k: usize, v: &[Scalar]) -> SparseRow {
        let (src, dst) = (&self.degrees[k].layout, Layout::new(&self.cos, self.levels, k + 1, self.form_cap));
        let mut out = SparseRow::new();
        let mut add = |key: (usize, usize, Mono), x: Scalar| {
            let i = dst.index[&key];
            let e = out.entry(i).or_default();
            *e += &x;
        };
        for (x, (n, b, m)) in v.iter().zip(&src.entries) {
            if x.is_zero() {
                continue;
            }
            let a = self.cos.level(*n);
            for (r, y) in a.d(&unit_vector(a.dim(), *b)).into_iter().enumerate() {
                if !y.is_zero() {
                    add((*n, r, m.clone()), x * &y);
                }
            }
            let sign = if a.degree_of(*b) % 2 == 1 { -x.clone() } else { x.clone() };
            for (m2, y) in fd(&BTreeMap::from([(m.clone(), Scalar::one())])) {
                add((*n, *b, m2), &sign * &y);
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }

    fn d_rank(&self, k: usize) -> usize {
        sparse_rank(self.degrees[k].basis.iter().map(|v| self.differential(k, v)))
    }

    fn coords(&self, k: usize, w: &[Scalar]) -> Result<Vector, HomotopyError> {
        let d = &self.degrees[k];
        let c: Vector = d.free.iter().map(|&f| w[f].clone()).collect();
        let mut back = vec![Scalar::zero(); d.layout.len()];
        for (x, v) in c.iter().zip(&d.basis) {
            crate::exact::matrix::add_scaled(&mut back, x, v);
        }
        if back != w {
            return Err(HomotopyError::NotClosed);
        }
        Ok(c)
    }

    fn mul_families(&self, k1: usize, u: &[Scalar], k2: usize, v: &[Scalar]) -> Result<Vector, HomotopyError> {
        let (l1, l2) = (&self.degrees[k1].layout, &self.degrees[k2].layout);
        let dst = &self.degrees[k1 + k2].layout;
        let mut out = vec![Scalar::zero(); dst.len()];
        for (x, (n, b, m)) in u.iter().zip(&l1.entries) {
            if x.is_zero() {
                continue;
            }
            for (y, (n2, b2, m2)) in v.iter().zip(&l2.entries) {
                if y.is_zero() || n != n2 {
                    continue;
                }
                let a = self.cos.level(*n);
                let prod = a.product(*b, *b2);
                let koszul = m.form_degree() * a.degree_of(*b2) % 2 == 1;
                let forms = fmul(&BTreeMap::from([(m.clone(), Scalar::one())]), &BTreeMap::from([(m2.clone(), Scalar::one())]));
                for (r, z) in prod.iter().enumerate() {
                    if z.is_zero() {
                        continue;
                    }
                    for (mm, f) in &forms {
                        let i = *dst.index.get(&(*n, r, mm.clone())).ok_or(HomotopyError::NotClosed)?;
                        let t = &(&(x * y) * z) * f;
                        out[i] += &(if koszul { -t } else { t });
                    }
                }
            }
        }
        Ok(out)
    }

    /// The truncated `Th` as a DGA in degrees `0..=degree_cap`, when the
    /// families found are closed under the product.
    pub fn algebra(&self) -> Result<Dga, HomotopyError> {
        let cap = self.report.degree_cap;
        let dims = self.report.dims.clone();
        let offs: Vec<usize> = (0..=cap).map(|k| dims[..k].iter().sum()).collect();
        let mut unit_family = vec![Scalar::zero(); self.degrees[0].layout.len()];
        for (i, (n, b, m)) in self.degrees[0].layout.entries.iter().enumerate() {
            if m.exps.iter().all(|&e| e == 0) {
                unit_family[i] = self.cos.level(*n).unit()[*b].clone();
            }
        }
        let unit_c = self.coords(0, &unit_family)?;
        let implicit = dims[0] == 1 && unit_c == vec![Scalar::one()];
        let mut products = Vec::new();
        for k1 in 0..=cap {
            for k2 in 0..=cap - k1 {
                for (i, u) in self.degrees[k1].basis.iter().enumerate() {
                    for (j, v) in self.degrees[k2].basis.iter().enumerate() {
                        let (gi, gj) = (offs[k1] + i, offs[k2] + j);
                        if implicit && (gi == 0 || gj == 0) {
                            continue;
                        }
                        let w = self.mul_families(k1, u, k2, v)?;
                        for (t, x) in self.coords(k1 + k2, &w)?.into_iter().enumerate() {
                            if !x.is_zero() {
                                products.push((gi, gj, offs[k1 + k2] + t, x));
                            }
                        }
                    }
                }
            }
        }
        let mut differential = Vec::new();
        for k in 0..cap {
            let cols: Vec<Vector> = self.degrees[k]
                .basis
                .iter()
                .map(|v| {
                    let img = self.differential(k, v);
                    let mut dense = vec![Scalar::zero(); self.degrees[k + 1].layout.len()];
                    for (i, x) in img {
                        dense[i] = x;
                    }
                    self.coords(k + 1, &dense)
                })
                .collect::<Result<_, _>>()?;
            differential.push(Matrix::from_columns(&cols, dims[k + 1]));
        }
        let unit = if implicit {
            None
        } else {
            let mut u = vec![Scalar::zero(); dims.iter().sum()];
            u[..dims[0]].clone_from_slice(&unit_c);
            Some(u)
        };
        Dga::new(DgaSpec { dims, weights: None, weight_shift: 0, unit, products, differential })
    }
}

fn compute(c: &Cosimplicial, levels: usize, degree_cap: usize, form_cap: usize) -> ThomWhitney {
    let degrees: Vec<Degree> = (0..=degree_cap).map(|k| solve_degree(c, levels, k, form_cap)).collect();
    let dims: Vec<usize> = degrees.iter().map(|d| d.basis.len()).collect();
    let mut tw = ThomWhitney {
        cos: c.clone(),
        levels,
        form_cap,
        degrees,
        report: ThReport { level_cap: levels, form_cap, degree_cap, dims: dims.clone(), cohomology: Vec::new(), stable: false },
    };
    let ranks: Vec<usize> = (0..=degree_cap).map(|k| tw.d_rank(k)).collect();
    tw.report.cohomology = (0..=degree_cap).map(|k| dims[k] - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 }).collect();
    tw
}

/// `Th` of the levels `0..=levels` with forms of polynomial degree at most
/// `form_cap`, in degrees `0..=degree_cap`.
pub fn thom_whitney(c: &Cosimplicial, levels: usize, degree_cap: usize, form_cap: usize) -> Result<ThomWhitney, HomotopyError> {
    if levels > c.top_level() {
        return Err(HomotopyError::Shape(format!("{levels} levels requested, {} given", c.top_level())));
    }
    let mut tw = compute(c, levels, degree_cap, form_cap);
    if levels > 0 && form_cap > 0 {
        let a = compute(c, levels - 1, degree_cap, form_cap).report.cohomology;
        let b = compute(c, levels, degree_cap, form_cap - 1).report.cohomology;
        tw.report.stable = a == tw.report.cohomology && b == tw.report.cohomology;
    }
    Ok(tw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms_on_interval() {
        // d(t²) = 2t dt and pullback of t along both faces of Δ¹
        let t2 = BTreeMap::from([(Mono { exps: vec![2], mask: 0 }, Scalar::one())]);
        assert_eq!(fd(&t2), BTreeMap::from([(Mono { exps: vec![1], mask: 1 }, Scalar::int(2))]));
        let t = Mono { exps: vec![1], mask: 0 };
        assert_eq!(pullback(&t, &face_images(1, 0), 0), constant(0, Scalar::one()));
        assert!(pullback(&t, &face_images(1, 1), 0).is_empty());
    }

    #[test]
    fn degeneracy_pullback_of_dt() {
        // s_0: Δ² → Δ¹ sends t_1 ↦ u_2, so dt ↦ dt_2
        let dt = Mono { exps: vec![0], mask: 1 };
        let got = pullback(&dt, &degeneracy_images(1, 0), 2);
        assert_eq!(got, BTreeMap::from([(Mono { exps: vec![0, 0], mask: 2 }, Scalar::one())]));
    }

    #[test]
    fn constant_point_is_ground_field() {
        let tw = thom_whitney(&Cosimplicial::constant(&Dga::ground(), 2), 2, 2, 2).unwrap();
        assert_eq!(tw.report.dims, vec![1, 0, 0]);
        assert_eq!(tw.report.cohomology, vec![1, 0, 0]);
        assert!(tw.report.stable);
        assert_eq!(tw.algebra().unwrap().cohomology_dims(), vec![1, 0, 0]);
    }

    fn two_points() -> Dga {
        Dga::new(DgaSpec {
            dims: vec![2],
            unit: Some(vec![Scalar::one(), Scalar::one()]),
            products: vec![(0, 0, 0, Scalar::one()), (1, 1, 1, Scalar::one())],
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn interval_glued_along_a_point_is_contractible() {
        let g = Dga::ground();
        let id = Matrix::identity(1);
        let c = Cosimplicial::interval(&g, &g, &g, &id, &id, 2).unwrap();
        let tw = thom_whitney(&c, 2, 2, 2).unwrap();
        assert_eq!(tw.report.cohomology, vec![1, 0, 0]);
        assert!(tw.report.stable);
    }

    #[test]
    fn two_arcs_glued_along_two_points_give_a_circle() {
        let g = Dga::ground();
        let r = Matrix::from_i64(&[&[1], &[1]]);
        let c = Cosimplicial::interval(&g, &g, &two_points(), &r, &r, 2).unwrap();
        let tw = thom_whitney(&c, 2, 2, 2).unwrap();
        assert_eq!(tw.report.cohomology, vec![1, 1, 0]);
        assert!(tw.report.stable);
        // t·dt on the edge leaves the form-degree cap
        assert_eq!(tw.algebra().unwrap_err(), HomotopyError::NotClosed);
    }

    #[test]
    fn broken_identity_rejected() {
        let g = Dga::ground();
        let mut c = Cosimplicial::constant(&g, 2);
        c.cofaces[0][0] = Matrix::zeros(1, 1);
        let err = Cosimplicial::from_parts(c.levels, c.cofaces, c.codeg).unwrap_err();
        assert!(matches!(err, HomotopyError::NotDgaMap { level: 0, .. }), "{err:?}");
    }
}

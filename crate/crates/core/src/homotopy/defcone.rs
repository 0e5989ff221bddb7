//! The deformation cone
//! `{(ω, η) : gysin(η) + ½[ω, ω] = 0, [ω, η] = 0, [η, η] = 0}`
//! for `ω ∈ H¹(X, j_* ad) = E^{1,0} ⊗ g` and `η ∈ H⁰(X, R¹j_* ad) = E^{1,1} ⊗ g`,
//! with the `E₂` algebra taken with constant coefficients `g`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::gysin::{e2_builder, GysinInput};
use super::HomotopyError;
use crate::exact::matrix::zero_vector;
use crate::exact::{Matrix, Scalar, Vector};

/// A finite-dimensional Lie algebra. A triple `(a, b, c, x)` means `[u_a, u_b]`
/// has coefficient `x` on `u_c`; the opposite order is filled in by
/// antisymmetry when it is not listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieAlgebra {
    pub dim: usize,
    #[serde(default)]
    pub brackets: Vec<(usize, usize, usize, Scalar)>,
}

impl LieAlgebra {
    pub fn abelian(dim: usize) -> Self {
        LieAlgebra { dim, brackets: Vec::new() }
    }

    /// Full table `[u_a, u_b]`.
    pub fn table(&self) -> Result<BTreeMap<(usize, usize), Vector>, HomotopyError> {
        let n = self.dim;
        let mut given: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
        for (a, b, c, x) in &self.brackets {
            if *a >= n || *b >= n || *c >= n {
                return Err(HomotopyError::Shape(format!("bracket index out of range in ({a}, {b}, {c})")));
            }
            given.entry((*a, *b)).or_insert_with(|| zero_vector(n))[*c] += x;
        }
        let mut out = BTreeMap::new();
        for (&(a, b), v) in &given {
            let neg: Vector = v.iter().map(|x| -x).collect();
            if a == b && v.iter().any(|x| !x.is_zero()) {
                return Err(HomotopyError::NotAntisymmetric(a, b));
            }
            if let Some(w) = given.get(&(b, a)) {
                if *w != neg {
                    return Err(HomotopyError::NotAntisymmetric(a.min(b), a.max(b)));
                }
            }
            out.insert((a, b), v.clone());
            out.insert((b, a), neg);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: Scalar,
    /// Variable indices, sorted; one for a linear term, two for a quadratic one.
    pub vars: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    /// `"gysin(eta)+1/2[omega,omega]"`, `"[omega,eta]"` or `"[eta,eta]"`.
    pub family: String,
    /// Target basis element `(a, b, i)` of the `E₂` page and index in `g`.
    pub target: ((usize, usize, usize), usize),
    pub terms: Vec<Monomial>,
}

impl Equation {
    pub fn is_linear(&self) -> bool {
        self.terms.iter().all(|m| m.vars.len() == 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tangent {
    /// `dim H¹ + dim H⁰R¹`.
    pub dim: usize,
    /// Kernel dimension of the linear part at the origin.
    pub zariski_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaugeAction {
    /// `dim H⁰(Y, ad) = dim E^{0,0} ⊗ g`.
    pub dim: usize,
    /// Infinitesimal action of each basis element on the variables `(ω, η)`.
    pub generators: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformationCone {
    /// `"omega[(a,b,i),u]"` and `"eta[(a,b,i),u]"`, in this order.
    pub variables: Vec<String>,
    pub h1_dim: usize,
    pub h0r1_dim: usize,
    pub equations: Vec<Equation>,
    pub tangent: Tangent,
    pub gauge: GaugeAction,
}

pub fn deformation_cone(input: &GysinInput, g: &LieAlgebra) -> Result<DeformationCone, HomotopyError> {
    let table = g.table()?;
    let e2 = e2_builder(input)?;
    let a = &e2.dga;
    let m = g.dim;
    let slots = |ab: (usize, usize)| -> Vec<usize> { (0..e2.labels.len()).filter(|&i| (e2.labels[i].0, e2.labels[i].1) == ab).collect() };
    let (omega, eta) = (slots((1, 0)), slots((1, 1)));
    let mut variables = Vec::new();
    let mut var_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &i in omega.iter().chain(&eta) {
        for u in 0..m {
            let name = if e2.labels[i].1 == 0 { "omega" } else { "eta" };
            let (x, y, z) = e2.labels[i];
            var_of.insert((i, u), variables.len());
            variables.push(format!("{name}[({x},{y},{z}),{u}]"));
        }
    }
    let nvars = variables.len();

    type Poly = BTreeMap<Vec<usize>, Scalar>;
    let add = |p: &mut Poly, vars: Vec<usize>, c: Scalar| {
        let e = p.entry(vars).or_default();
        *e += &c;
    };
    // [x_i ⊗ u_a, x_j ⊗ u_b] = x_i x_j ⊗ [u_a, u_b]
    let bracket_into = |polys: &mut BTreeMap<(usize, usize), Poly>, left: &[usize], right: &[usize], scale: &Scalar| {
        for &i in left {
            for &j in right {
                let prod = a.product(i, j);
                for (k, pk) in prod.iter().enumerate() {
                    if pk.is_zero() {
                        continue;
                    }
                    for ua in 0..m {
                        for ub in 0..m {
                            let Some(br) = table.get(&(ua, ub)) else { continue };
                            for (c, bc) in br.iter().enumerate() {
                                if bc.is_zero() {
                                    continue;
                                }
                                let (v1, v2) = (var_of[&(i, ua)], var_of[&(j, ub)]);
                                let mut vars = vec![v1, v2];
                                vars.sort_unstable();
                                add(polys.entry((k, c)).or_default(), vars, &(scale * pk) * bc);
                            }
                        }
                    }
                }
            }
        }
    };

    let mut fam1: BTreeMap<(usize, usize), Poly> = BTreeMap::new();
    for &j in &eta {
        let dj = a.d(&crate::exact::matrix::unit_vector(a.dim(), j));
        for (k, x) in dj.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for u in 0..m {
                add(fam1.entry((k, u)).or_default(), vec![var_of[&(j, u)]], x.clone());
            }
        }
    }
    bracket_into(&mut fam1, &omega, &omega, &Scalar::ratio(1, 2));
    let mut fam2 = BTreeMap::new();
    bracket_into(&mut fam2, &omega, &eta, &Scalar::one());
    let mut fam3 = BTreeMap::new();
    bracket_into(&mut fam3, &eta, &eta, &Scalar::one());

    let mut equations = Vec::new();
    for (family, polys) in [("gysin(eta)+1/2[omega,omega]", fam1), ("[omega,eta]", fam2), ("[eta,eta]", fam3)] {
        for ((k, u), p) in polys {
            let terms: Vec<Monomial> =
                p.into_iter().filter(|(_, c)| !c.is_zero()).map(|(vars, coeff)| Monomial { coeff, vars }).collect();
            if !terms.is_empty() {
                equations.push(Equation { family: family.into(), target: (e2.labels[k], u), terms });
            }
        }
    }

    let linear_rows: Vec<Vector> = equations
        .iter()
        .map(|e| {
            let mut row = zero_vector(nvars);
            for t in e.terms.iter().filter(|t| t.vars.len() == 1) {
                row[t.vars[0]] = t.coeff.clone();
            }
            row
        })
        .collect();
    let rank = Matrix::from_rows(linear_rows, nvars).map_or(0, |m| m.rank());

    let units = slots((0, 0));
    let mut generators = Vec::new();
    for &z in &units {
        for uc in 0..m {
            let mut act = Matrix::zeros(nvars, nvars);
            for (&(i, ua), &col) in &var_of {
                let prod = a.product(z, i);
                let Some(br) = table.get(&(uc, ua)) else { continue };
                for (k, pk) in prod.iter().enumerate() {
                    for (ub, bc) in br.iter().enumerate() {
                        if pk.is_zero() || bc.is_zero() {
                            continue;
                        }
                        let row = var_of[&(k, ub)];
                        let cur = act.get(row, col).clone();
                        act.set(row, col, &cur + &(pk * bc));
                    }
                }
            }
            generators.push(act);
        }
    }

    Ok(DeformationCone {
        variables,
        h1_dim: omega.len() * m,
        h0r1_dim: eta.len() * m,
        equations,
        tangent: Tangent { dim: nvars, zariski_dim: nvars - rank },
        gauge: GaugeAction { dim: units.len() * m, generators },
    })
}

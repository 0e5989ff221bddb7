//! The acceptance suite: one line per criterion on stdout, then a summary.
//!
//! Run with `cargo test -p mixhodge-core --test acceptance -- --nocapture`.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use common::tw::{cone_cohomology, normalized_tot_cohomology, random_map, square_zero, TOP};
use common::{random_filtered_complex, random_shs, rng};
use mixhodge::exact::{Matrix, Scalar, Subspace};
use mixhodge::hodge::BigradedSpace;
use mixhodge::homotopy::defcone::Equation;
use mixhodge::homotopy::gysin::GysinEntry;
use mixhodge::homotopy::{
    deformation_cone, e2_builder, pi_n, thom_whitney, whitehead, Cosimplicial, Dga, DgaSpec, GysinInput, LieAlgebra,
    WeightConvention,
};
use mixhodge::io::{FrepDoc, MhsDoc, ShsDoc};
use mixhodge::splitting::hom_ext::{hom_ext_shs, hom_ext_sts};
use mixhodge::splitting::{mhs_to_shs, mhs_to_shs_with_splitting, ShsObject, StsObject};

/// Deterministic outputs of one criterion, compared across reruns.
type Log = Vec<String>;

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn json<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("serializable")
}

fn shs_suite(seed: u64) -> Vec<ShsObject> {
    let mut r = rng(seed);
    (0..100).map(|_| random_shs(&mut r, 8, -6, 6)).collect()
}

fn c1_frep_round_trip(log: &mut Log) -> Result<(), String> {
    for (i, s) in shs_suite(101).iter().enumerate() {
        let t = Instant::now();
        let f = s.to_frep();
        let back = f.to_shs().map_err(|e| format!("instance {i}: {e}"))?;
        let dt = t.elapsed();
        check(&back == s, || format!("instance {i}: β differs after the round trip"))?;
        check(dt < Duration::from_secs(1), || format!("instance {i}: {dt:?}"))?;
        log.push(json(&FrepDoc::from(&f)));
    }
    Ok(())
}

fn c2_mhs_round_trip(log: &mut Log) -> Result<(), String> {
    let mut identical_without_hint = 0;
    for (i, s) in shs_suite(102).iter().enumerate() {
        let m = s.to_mhs();
        let given = mhs_to_shs_with_splitting(&m, &s.grading().weight_grading()).map_err(|e| format!("instance {i}: {e}"))?;
        check(&given.shs == s, || format!("instance {i}: β not recovered from its own splitting"))?;
        let out = mhs_to_shs(&m).map_err(|e| format!("instance {i}: {e}"))?;
        check(out.phi.is_real(), || format!("instance {i}: φ is not real"))?;
        check(out.shs.to_mhs().transport(&out.phi).same_filtrations(&m), || format!("instance {i}: filtrations differ after transport by φ"))?;
        identical_without_hint += usize::from(&out.shs == s);
        log.push(json(&ShsDoc::from(&out.shs)));
        log.push(json(&out.phi));
    }
    log.push(format!("identical β from the Deligne splitting: {identical_without_hint}/100"));
    Ok(())
}

fn c3_outputs_are_opposed(log: &mut Log) -> Result<(), String> {
    let mut failures = 0;
    for seed in [101, 102] {
        for s in shs_suite(seed) {
            let v = s.to_mhs().validate();
            failures += usize::from(!v.opposed);
            log.push(json(&v.weights));
        }
    }
    check(failures == 0, || format!("{failures} of 200 outputs fail opposedness"))
}

fn c4_kummer(log: &mut Log) -> Result<(), String> {
    let g = BigradedSpace::new(
        2,
        BTreeMap::from([
            ((0, 0), Subspace::span(2, [vec![Scalar::one(), Scalar::zero()]]).unwrap()),
            ((-1, -1), Subspace::span(2, [vec![Scalar::zero(), Scalar::one()]]).unwrap()),
        ]),
    )
    .unwrap();
    for c in ["1", "-2", "7/3"] {
        let c: Scalar = c.parse().unwrap();
        let mut e = Matrix::zeros(2, 2);
        e.set(1, 0, Scalar::one());
        let ce = e.scale(&c);
        let s = ShsObject::new(g.clone(), BTreeMap::from([((0, 0), ce)])).map_err(|e| e.to_string())?;
        let m = s.to_mhs();
        let f0 = Subspace::span(2, [vec![Scalar::one(), &Scalar::i() * &c]]).unwrap();
        check(m.hodge().at(0) == &f0, || format!("c = {c}: F⁰ = {:?}", m.hodge().at(0)))?;
        let want = &Matrix::identity(2) + &e.scale(&(&Scalar::int(2) * &(&Scalar::i() * &c)));
        let f = s.to_frep();
        check(f.d() == &want, || format!("c = {c}: d = {:?}", f.d()))?;
        log.push(json(&MhsDoc::from(&m)));
        log.push(json(&FrepDoc::from(&f)));
    }
    Ok(())
}

fn c5_ext_dims(log: &mut Log) -> Result<(), String> {
    let unit = ShsObject::split(BigradedSpace::tate(0));
    for (n, want) in [(1, 1), (2, 1), (3, 1), (0, 0), (-1, 0), (-2, 0)] {
        let r = hom_ext_shs(&unit, &ShsObject::split(BigradedSpace::tate(n)));
        check(r.ext1_dim == want, || format!("Ext¹(ℝ, ℝ({n})) = {}", r.ext1_dim))?;
        log.push(json(&r));
    }
    for (m, n, de, df, want) in [(1, 1, 1, 1, 1), (1, 2, 1, 1, 0), (3, 3, 2, 3, 6), (3, 3, 4, 5, 20)] {
        let r = hom_ext_sts(&StsObject::pure(de, m), &StsObject::pure(df, n));
        check(r.hom_dim == want, || format!("Hom(E_{m}^{de}, F_{n}^{df}) = {}, expected {want}", r.hom_dim))?;
        log.push(json(&r));
    }
    Ok(())
}

fn c6_decalage(log: &mut Log) -> Result<(), String> {
    let t = Instant::now();
    let mut r = rng(106);
    for i in 0..100 {
        let (fc, _) = random_filtered_complex(&mut r, 3, 3, 10);
        let total = fc.complex().total_dim();
        check(total <= 20, || format!("instance {i}: total dimension {total}"))?;
        let d = fc.dec_e1_check();
        check(d.holds, || format!("instance {i}: {:?}", d.mismatches))?;
        let conv = fc.convergence();
        check(conv.converges && conv.e_infinity == conv.graded_cohomology, || format!("instance {i}: {conv:?}"))?;
        log.push(json(&d));
        log.push(json(&conv));
    }
    let dt = t.elapsed();
    check(dt < Duration::from_secs(10), || format!("took {dt:?}"))
}

fn sphere(k: usize) -> Dga {
    let mut dims = vec![0; k + 1];
    dims[0] = 1;
    dims[k] = 1;
    Dga::new(DgaSpec { dims, ..Default::default() }).unwrap()
}

fn c7_spheres(log: &mut Log) -> Result<(), String> {
    for (k, want) in [(2, vec![0, 1, 1, 0]), (3, vec![0, 0, 1, 0, 0, 0])] {
        let t = Instant::now();
        let a = sphere(k);
        for (i, &w) in want.iter().enumerate() {
            let n = i + 1;
            let p = pi_n(&a, n, 6).map_err(|e| e.to_string())?;
            check(p.rank == w, || format!("π_{n}(S^{k}) has rank {}, expected {w}", p.rank))?;
            check(p.stability.stable, || format!("π_{n}(S^{k}) not stable at cap 6"))?;
            log.push(json(&p));
        }
        let dt = t.elapsed();
        check(dt < Duration::from_secs(10), || format!("S^{k} took {dt:?}"))?;
    }
    Ok(())
}

fn gm() -> GysinInput {
    GysinInput {
        entries: vec![GysinEntry { a: 0, b: 0, dim: 1 }, GysinEntry { a: 2, b: 0, dim: 1 }, GysinEntry { a: 1, b: 1, dim: 2 }],
        products: vec![],
        gysin: vec![((1, 1, 0), (2, 0, 0), Scalar::one()), ((1, 1, 1), (2, 0, 0), Scalar::one())],
        weight_convention: WeightConvention::SumAB,
    }
}

fn c8_gm(log: &mut Log) -> Result<(), String> {
    let mut ranks = Vec::new();
    // The weight of the H⁰R¹ class is a + b or a + 2b at (a, b) = (1, 1).
    for (conv, w) in [(WeightConvention::SumAB, 2), (WeightConvention::SumA2B, 3)] {
        let e2 = e2_builder(&gm().with_convention(conv)).map_err(|e| e.to_string())?;
        let h = e2.dga.cohomology_dims();
        check(h.get(1) == Some(&1), || format!("{conv}: H* = {h:?}"))?;
        let hw = e2.dga.cohomology_weights(1);
        check(hw == Some(BTreeMap::from([(w, 1)])), || format!("{conv}: H¹ weights {hw:?}"))?;
        let p = pi_n(&e2.dga, 1, 6).map_err(|e| e.to_string())?;
        let pw: Option<Vec<(i64, usize)>> = p.weights.as_ref().map(|ws| ws.iter().map(|x| (x.weight, x.dim)).collect());
        check(p.rank == 1 && pw == Some(vec![(w, 1)]), || format!("{conv}: π₁ rank {} weights {pw:?}", p.rank))?;
        let br = whitehead(&e2.dga, 1, 1, 6).map_err(|e| e.to_string())?;
        check(br.iter().flatten().flatten().all(Scalar::is_zero), || format!("{conv}: π₁ is not abelian"))?;
        ranks.push(p.rank);
        log.push(json(&p));
    }
    check(ranks[0] == ranks[1], || format!("ranks differ across conventions: {ranks:?}"))
}

fn c9_thom_whitney(log: &mut Log) -> Result<(), String> {
    let mut r = rng(109);
    // ℚ[x]/x² with |x| = 2
    let x = Dga::new(DgaSpec { dims: vec![1, 0, 1], ..Default::default() }).unwrap();
    let circle = Dga::new(DgaSpec { dims: vec![1, 1], ..Default::default() }).unwrap();
    for b in [Dga::ground(), x, circle] {
        let c = Cosimplicial::constant(&b, 2);
        let tw = thom_whitney(&c, 2, b.top_degree(), 2).map_err(|e| e.to_string())?;
        let a = tw.algebra().map_err(|e| e.to_string())?;
        check(a == b, || format!("Th(constant) differs from {:?}", b.dims()))?;
        log.push(json(&tw.report));
    }
    for case in 0..20 {
        let (b1, b2, b12) = (square_zero(&mut r), square_zero(&mut r), square_zero(&mut r));
        let (r1, r2) = (random_map(&mut r, &b1, &b12), random_map(&mut r, &b2, &b12));
        let c = Cosimplicial::interval(&b1.dga, &b2.dga, &b12.dga, &r1, &r2, 4).map_err(|e| e.to_string())?;
        let tw = thom_whitney(&c, 2, TOP, 2).map_err(|e| e.to_string())?;
        let tot = normalized_tot_cohomology(&c, TOP);
        let cone = cone_cohomology(&b1.dga, &b2.dga, &b12.dga, &r1, &r2, TOP);
        check(tot == cone, || format!("case {case}: oracles disagree {tot:?} vs {cone:?}"))?;
        check(tw.report.cohomology == tot, || format!("case {case}: Th gives {:?}, total complex {tot:?}", tw.report.cohomology))?;
        log.push(json(&tw.report));
    }
    Ok(())
}

/// Ambient and Zariski tangent dimensions at the origin:
/// `(dim E^{1,0} + dim E^{1,1}) · dim g` and `(dim E^{1,0} + dim ker d₂) · dim g`.
fn tangent_oracle(g: &GysinInput, lie: &LieAlgebra) -> (usize, usize) {
    let dim = |a, b| g.entries.iter().find(|e| e.a == a && e.b == b).map_or(0, |e| e.dim);
    let mut d2 = Matrix::zeros(dim(2, 0), dim(1, 1));
    for &((sa, sb, si), (ta, tb, ti), ref c) in &g.gysin {
        if (sa, sb, ta, tb) == (1, 1, 2, 0) {
            d2.set(ti, si, c.clone());
        }
    }
    let rank = if d2.rows() * d2.cols() == 0 { 0 } else { d2.rank() };
    ((dim(1, 0) + dim(1, 1)) * lie.dim, (dim(1, 0) + dim(1, 1) - rank) * lie.dim)
}

fn c10_defcone(log: &mut Log) -> Result<(), String> {
    let abelian = LieAlgebra::abelian(2);
    let c = deformation_cone(&gm(), &abelian).map_err(|e| e.to_string())?;
    check(c.equations.iter().all(Equation::is_linear), || "abelian fixture has nonlinear equations".into())?;
    // d₂η = 0 for η ∈ E^{1,1} ⊗ g: one equation per (target slot, g basis element)
    let nvars = c.variables.len();
    let rows: Vec<Vec<Scalar>> = c
        .equations
        .iter()
        .map(|e| {
            let mut row = vec![Scalar::zero(); nvars];
            for t in &e.terms {
                row[t.vars[0]] += &t.coeff;
            }
            row
        })
        .collect();
    let system = Matrix::from_rows(rows, nvars).map_err(|e| e.to_string())?;
    check(system.rank() == abelian.dim, || format!("linear system has rank {}", system.rank()))?;
    check(c.equations.iter().all(|e| e.target.0 == (2, 0, 0)), || "equations outside E^{2,0}".into())?;
    log.push(json(&c));
    let cup = GysinInput {
        entries: vec![GysinEntry { a: 0, b: 0, dim: 1 }, GysinEntry { a: 1, b: 0, dim: 2 }, GysinEntry { a: 2, b: 0, dim: 1 }],
        products: vec![((1, 0, 0), (1, 0, 1), (2, 0, 0), Scalar::one())],
        gysin: vec![],
        weight_convention: WeightConvention::SumAB,
    };
    let affine = LieAlgebra { dim: 2, brackets: vec![(0, 1, 1, Scalar::one())] };
    for (g, lie) in [(gm(), abelian.clone()), (gm(), affine.clone()), (cup.clone(), abelian), (cup, affine)] {
        let c = deformation_cone(&g, &lie).map_err(|e| e.to_string())?;
        let (ambient, zariski) = tangent_oracle(&g, &lie);
        check(c.tangent.dim == c.h1_dim + c.h0r1_dim, || format!("tangent {} vs {} + {}", c.tangent.dim, c.h1_dim, c.h0r1_dim))?;
        check(c.tangent.dim == ambient, || format!("tangent {} vs oracle {ambient}", c.tangent.dim))?;
        check(c.tangent.zariski_dim == zariski, || format!("Zariski tangent {} vs oracle {zariski}", c.tangent.zariski_dim))?;
        log.push(json(&c));
    }
    Ok(())
}

type Criterion = (&'static str, fn(&mut Log) -> Result<(), String>);

const CRITERIA: [Criterion; 10] = [
    ("SHS <-> FRep round trip", c1_frep_round_trip),
    ("MHS <-> SHS round trip", c2_mhs_round_trip),
    ("realizations pass opposedness", c3_outputs_are_opposed),
    ("Kummer fixture", c4_kummer),
    ("Ext and twistor Hom dimensions", c5_ext_dims),
    ("decalage and convergence", c6_decalage),
    ("sphere homotopy groups", c7_spheres),
    ("G_m fixture under both weight conventions", c8_gm),
    ("Thom-Whitney against total complexes", c9_thom_whitney),
    ("deformation cone", c10_defcone),
];

fn run_suite(print: bool) -> (Vec<Log>, Vec<bool>) {
    let mut logs = Vec::new();
    let mut passed = Vec::new();
    for (i, (name, f)) in CRITERIA.iter().enumerate() {
        let mut log = Log::new();
        let t = Instant::now();
        let outcome = f(&mut log);
        if print {
            match &outcome {
                Ok(()) => println!("criterion {:>2} PASS  {name} ({:.2?})", i + 1, t.elapsed()),
                Err(e) => println!("criterion {:>2} FAIL  {name} ({:.2?}): {e}", i + 1, t.elapsed()),
            }
        }
        passed.push(outcome.is_ok());
        logs.push(log);
    }
    (logs, passed)
}

#[test]
fn acceptance() {
    let (first, mut passed) = run_suite(true);
    let t = Instant::now();
    let (second, _) = run_suite(false);
    let differing: Vec<usize> = (0..first.len()).filter(|&i| first[i] != second[i]).map(|i| i + 1).collect();
    if differing.is_empty() {
        println!("criterion 11 PASS  byte-identical reports on rerun ({:.2?})", t.elapsed());
    } else {
        println!("criterion 11 FAIL  reports differ on rerun for criteria {differing:?}");
    }
    passed.push(differing.is_empty());
    let failed: Vec<usize> = passed.iter().enumerate().filter(|(_, &p)| !p).map(|(i, _)| i + 1).collect();
    println!("{} of {} criteria pass", passed.len() - failed.len(), passed.len());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

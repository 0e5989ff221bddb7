//! Job dispatch and report types for the `mixhodge` command.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use mixhodge::exact::{ExactError, Matrix};
use mixhodge::filtration::{Direction, FiltrationBlock, FiltrationReport};
use mixhodge::hodge::{MhsFailure, MhsValidation, MtsReport, WeightReport};
use mixhodge::homotopy::{
    deformation_cone, e2_builder, pi_n, thom_whitney, DeformationCone, Dga, DgaSpec, HomotopyError, PiReport, ThReport,
    WeightConvention,
};
use mixhodge::io::{Document, FrepDoc, IoError, MhsDoc, ShsDoc, StsDoc, WeightBlock};
use mixhodge::rees::{DoubleReesModule, DoubleReesPiece, ReesModule};
use mixhodge::spectral::{Convergence, DecCheck, PageEntry, SpectralError};
use mixhodge::splitting::hom_ext::{hom_ext_shs, hom_ext_sts, HomExt};
use mixhodge::splitting::{mhs_to_shs, Endpoints, ShsObject, SplittingError};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Validate,
    Split,
    Convert,
    Ext,
    Rees,
    Dec,
    Ss,
    Pi,
    Th,
    Defcone,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Option values in effect, echoed in every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncate: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_convention: Option<WeightConvention>,
    pub endpoints: Endpoints,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form_cap: Option<usize>,
}

impl Default for Options {
    fn default() -> Self {
        Options { truncate: None, weight_convention: None, endpoints: Endpoints::ZeroToI, to: None, degree_cap: None, form_cap: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Job {
    pub command: Command,
    pub inputs: Vec<Document>,
    pub options: Options,
}

/// Exit status classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    ParseError,
    InvariantViolation,
    MathematicalRejection,
    TruncationInstability,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ParseError => 2,
            Status::InvariantViolation => 3,
            Status::MathematicalRejection => 4,
            Status::TruncationInstability => 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub kind: String,
    pub valid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opposed: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<MhsFailure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<WeightReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration: Option<FiltrationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mts: Option<MtsReport>,
    /// Cohomology dimensions by degree, for complexes and algebras.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitReport {
    pub shs: ShsDoc,
    /// `W`-filtered isomorphism from the realization of `shs` to the input.
    pub phi: Matrix,
    pub splitting: Vec<WeightBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvertReport {
    pub from: String,
    pub to: String,
    pub output: Document,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReesReport {
    pub direction: Direction,
    /// `dim F_n` (increasing input).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dims: Vec<(i64, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flat: Option<bool>,
    /// Nonzero pieces `F^p ∩ conj F^q` (decreasing input).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bigraded: Vec<DoubleReesPiece>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecReport {
    pub check: DecCheck,
    /// `Dec J` in each degree, lowest degree first.
    pub decalage: Vec<FiltrationBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageReport {
    pub r: i64,
    pub entries: Vec<PageEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsReport {
    pub degeneration_bound: i64,
    pub pages: Vec<PageReport>,
    pub convergence: Convergence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiSummary {
    /// `"pi1"`, `"pi2"`, … with their ranks.
    #[serde(flatten)]
    pub ranks: BTreeMap<String, usize>,
    pub stable: bool,
    pub groups: Vec<PiReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThSummary {
    #[serde(flatten)]
    pub report: ThReport,
    /// The truncated algebra, when the families found close under the product.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<DgaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra_error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Body {
    Validate(ValidateReport),
    Split(SplitReport),
    Convert(ConvertReport),
    Ext(HomExt),
    Rees(ReesReport),
    Dec(DecReport),
    Ss(SsReport),
    Pi(PiSummary),
    Th(ThSummary),
    Defcone(DeformationCone),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub message: String,
    /// The module error with its witness.
    pub error: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: Command,
    pub options: Options,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Body>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.status.code()
    }

    pub fn render(&self, format: Format) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&value).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut out = String::new();
                text(&mut out, "", &value);
                out
            }
        }
    }
}

fn text(out: &mut String, prefix: &str, v: &serde_json::Value) {
    use serde_json::Value;
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                text(out, &p, x);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = xs.iter().map(scalar_text).collect();
            let _ = writeln!(out, "{prefix}: [{}]", items.join(", "));
        }
        Value::Array(xs) if xs.iter().all(|x| x.as_array().is_some_and(|r| r.iter().all(|y| !y.is_object() && !y.is_array()))) => {
            let rows: Vec<String> =
                xs.iter().map(|r| format!("[{}]", r.as_array().unwrap().iter().map(scalar_text).collect::<Vec<_>>().join(", "))).collect();
            let _ = writeln!(out, "{prefix}: [{}]", rows.join(", "));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                text(out, &format!("{prefix}[{i}]"), x);
            }
        }
        other => {
            let _ = writeln!(out, "{prefix}: {}", scalar_text(other));
        }
    }
}

fn scalar_text(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Anything a job can fail with.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(IoError),
}

impl<E: Into<IoError>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Io(e.into())
    }
}

fn exact_status(e: &ExactError) -> Status {
    match e {
        ExactError::Parse(_) => Status::ParseError,
        ExactError::DimensionMismatch { .. } | ExactError::NotInSubspace => Status::InvariantViolation,
        _ => Status::MathematicalRejection,
    }
}

fn status_of(e: &IoError) -> Status {
    match e {
        IoError::Parse(_) | IoError::Kind { .. } => Status::ParseError,
        IoError::Exact(x) => exact_status(x),
        IoError::Splitting(SplittingError::Exact(x)) | IoError::Homotopy(HomotopyError::Exact(x)) | IoError::Spectral(SpectralError::Exact(x)) => {
            exact_status(x)
        }
        IoError::Splitting(SplittingError::NotUnipotent | SplittingError::Inconsistent { .. }) => Status::MathematicalRejection,
        IoError::Homotopy(
            HomotopyError::NotConnected | HomotopyError::NotClosed | HomotopyError::CapTooSmall { .. } | HomotopyError::NoSignConvention,
        ) => Status::MathematicalRejection,
        _ => Status::InvariantViolation,
    }
}

fn one<'a>(job: &'a Job) -> Result<&'a Document, Failure> {
    match job.inputs.as_slice() {
        [d] => Ok(d),
        other => Err(Failure::Usage(format!("expected one input, got {}", other.len()))),
    }
}

fn mhs_of(d: &Document) -> Result<mixhodge::hodge::Mhs, Failure> {
    match d {
        Document::Mhs(m) => Ok(m.build()?),
        other => Err(other.wrong_kind("mhs").into()),
    }
}

fn shs_of(d: &Document) -> Result<ShsObject, Failure> {
    match d {
        Document::Shs(s) => Ok(s.build()?),
        Document::Frep(f) => Ok(f.build()?.to_shs()?),
        Document::Mhs(m) => Ok(mhs_to_shs(&m.build()?)?.shs),
        other => Err(other.wrong_kind("shs").into()),
    }
}

fn dga_of(d: &Document, conv: Option<WeightConvention>) -> Result<Dga, Failure> {
    match d {
        Document::Dga(spec) => Ok(Dga::new(spec.clone())?),
        Document::Gysin(g) => {
            let g = match conv {
                Some(c) => g.with_convention(c),
                None => g.clone(),
            };
            Ok(e2_builder(&g)?.dga)
        }
        other => Err(other.wrong_kind("dga").into()),
    }
}

fn validate(job: &Job) -> Result<(Body, Status), Failure> {
    let doc = one(job)?;
    let mut r = ValidateReport {
        kind: doc.kind().into(),
        valid: true,
        opposed: None,
        failure: None,
        weights: None,
        filtration: None,
        mts: None,
        cohomology: None,
    };
    match doc {
        Document::Mhs(m) => {
            let MhsValidation { opposed, failure, weights } = m.build()?.validate();
            r.valid = opposed;
            (r.opposed, r.failure, r.weights) = (Some(opposed), failure, Some(weights));
        }
        Document::Shs(s) => {
            s.build()?;
        }
        Document::Sts(s) => r.mts = Some(s.build()?.mts_report()),
        Document::Frep(f) => {
            f.build()?;
        }
        Document::Filtration(f) => {
            let c = f.build()?.checks();
            r.valid = c.exhaustive && c.hausdorff;
            r.filtration = Some(c);
        }
        Document::Complex(c) => {
            let cx = if c.filtration.is_empty() { c.complex()? } else { c.filtered()?.complex().clone() };
            r.cohomology = Some(cx.cohomology_dims().into_values().collect());
        }
        Document::Dga(_) | Document::Gysin(_) => r.cohomology = Some(dga_of(doc, job.options.weight_convention)?.cohomology_dims()),
        Document::Cosimplicial(c) => {
            c.build()?;
        }
        Document::Defcone(d) => {
            d.lie.table()?;
            e2_builder(&d.gysin)?;
        }
    }
    let status = if r.valid { Status::Ok } else { Status::InvariantViolation };
    Ok((Body::Validate(r), status))
}

fn split(job: &Job) -> Result<Body, Failure> {
    let m = mhs_of(one(job)?)?;
    let out = mhs_to_shs(&m)?;
    let splitting = out.splitting.pieces().iter().map(|(&weight, s)| WeightBlock { weight, basis: s.basis().to_vec() }).collect();
    Ok(Body::Split(SplitReport { shs: ShsDoc::from(&out.shs), phi: out.phi, splitting }))
}

fn convert(job: &Job) -> Result<Body, Failure> {
    let doc = one(job)?;
    let to = job.options.to.clone().ok_or_else(|| Failure::Usage("convert needs --to".into()))?;
    if doc.kind() == "mhs" && job.options.endpoints != Endpoints::ZeroToI {
        return Err(Failure::Usage("an MHS is split along the path 0 → i; --endpoints mii does not apply".into()));
    }
    let output = match to.as_str() {
        "shs" => Document::Shs(ShsDoc::from(&shs_of(doc)?)),
        "frep" => Document::Frep(FrepDoc::from(&shs_of(doc)?.to_frep())),
        "mhs" => {
            let m = match doc {
                Document::Mhs(m) => m.build()?,
                _ => shs_of(doc)?.to_mhs_with(job.options.endpoints),
            };
            Document::Mhs(MhsDoc::from(&m))
        }
        "sts" => match doc {
            Document::Sts(s) => Document::Sts(StsDoc::from(&s.build()?)),
            other => return Err(other.wrong_kind("sts").into()),
        },
        other => return Err(Failure::Usage(format!("cannot convert to {other:?}"))),
    };
    Ok(Body::Convert(ConvertReport { from: doc.kind().into(), to, output }))
}

fn ext(job: &Job) -> Result<Body, Failure> {
    let [u, v] = job.inputs.as_slice() else {
        return Err(Failure::Usage(format!("ext needs two inputs, got {}", job.inputs.len())));
    };
    let h = match (u, v) {
        (Document::Sts(a), Document::Sts(b)) => hom_ext_sts(&a.build()?, &b.build()?),
        _ => hom_ext_shs(&shs_of(u)?, &shs_of(v)?),
    };
    Ok(Body::Ext(h))
}

fn rees(job: &Job) -> Result<Body, Failure> {
    let f = match one(job)? {
        Document::Filtration(f) => f.build()?,
        other => return Err(other.wrong_kind("filtration").into()),
    };
    let r = match f.direction() {
        Direction::Increasing => {
            let m = ReesModule::new(&f)?;
            ReesReport { direction: Direction::Increasing, dims: m.dims(), flat: Some(m.is_flat()), bigraded: Vec::new() }
        }
        Direction::Decreasing => {
            let m = DoubleReesModule::new(&f)?;
            ReesReport { direction: Direction::Decreasing, dims: Vec::new(), flat: None, bigraded: m.nonzero_pieces() }
        }
    };
    Ok(Body::Rees(r))
}

fn filtered(job: &Job) -> Result<mixhodge::spectral::FilteredComplex, Failure> {
    match one(job)? {
        Document::Complex(c) => Ok(c.filtered()?),
        other => Err(other.wrong_kind("complex").into()),
    }
}

fn dec(job: &Job) -> Result<(Body, Status), Failure> {
    let fc = filtered(job)?;
    let check = fc.dec_e1_check();
    let d = fc.decalage();
    let decalage = d.complex().degrees().map(|n| d.filtration(n).expect("degree in range").to_block()).collect();
    let status = if check.holds { Status::Ok } else { Status::InvariantViolation };
    Ok((Body::Dec(DecReport { check, decalage }), status))
}

fn ss(job: &Job) -> Result<Body, Failure> {
    let fc = filtered(job)?;
    let bound = fc.degeneration_bound();
    let r_max = job.options.truncate.map_or(bound, |t| t as i64);
    let pages = (1..=r_max)
        .map(|r| Ok(PageReport { r, entries: fc.page(r)?.entries() }))
        .collect::<Result<Vec<_>, SpectralError>>()?;
    Ok(Body::Ss(SsReport { degeneration_bound: bound, pages, convergence: fc.convergence() }))
}

fn pi(job: &Job) -> Result<(Body, Status), Failure> {
    let a = dga_of(one(job)?, job.options.weight_convention)?;
    let cap = job.options.truncate.unwrap_or(6);
    let top = (2 * a.top_degree()).max(2);
    let groups = (1..=top).map(|n| pi_n(&a, n, cap)).collect::<Result<Vec<_>, _>>()?;
    let stable = groups.iter().all(|g| g.stability.stable);
    let ranks = groups.iter().map(|g| (format!("pi{}", g.n), g.rank)).collect();
    let status = if stable { Status::Ok } else { Status::TruncationInstability };
    Ok((Body::Pi(PiSummary { ranks, stable, groups }), status))
}

fn th(job: &Job) -> Result<(Body, Status), Failure> {
    let c = match one(job)? {
        Document::Cosimplicial(c) => c.build()?,
        other => return Err(other.wrong_kind("cosimplicial").into()),
    };
    let levels = job.options.truncate.unwrap_or(2);
    let degree_cap = job.options.degree_cap.unwrap_or(3);
    let form_cap = job.options.form_cap.unwrap_or(2);
    let tw = thom_whitney(&c, levels, degree_cap, form_cap)?;
    let (algebra, algebra_error) = match tw.algebra() {
        Ok(a) => (Some(a.to_spec()), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let status = if tw.report.stable { Status::Ok } else { Status::TruncationInstability };
    Ok((Body::Th(ThSummary { report: tw.report, algebra, algebra_error }), status))
}

fn defcone(job: &Job) -> Result<Body, Failure> {
    match one(job)? {
        Document::Defcone(d) => {
            let g = match job.options.weight_convention {
                Some(c) => d.gysin.with_convention(c),
                None => d.gysin.clone(),
            };
            Ok(Body::Defcone(deformation_cone(&g, &d.lie)?))
        }
        other => Err(other.wrong_kind("defcone").into()),
    }
}

pub fn run(job: &Job) -> Report {
    let outcome = match job.command {
        Command::Validate => validate(job),
        Command::Split => split(job).map(|b| (b, Status::Ok)),
        Command::Convert => convert(job).map(|b| (b, Status::Ok)),
        Command::Ext => ext(job).map(|b| (b, Status::Ok)),
        Command::Rees => rees(job).map(|b| (b, Status::Ok)),
        Command::Dec => dec(job),
        Command::Ss => ss(job).map(|b| (b, Status::Ok)),
        Command::Pi => pi(job),
        Command::Th => th(job),
        Command::Defcone => defcone(job).map(|b| (b, Status::Ok)),
    };
    let (result, status, error) = match outcome {
        Ok((b, s)) => (Some(b), s, None),
        Err(f) => {
            let (status, error) = failure_report(f);
            (None, status, Some(error))
        }
    };
    Report { command: job.command, options: job.options.clone(), status, result, error }
}

pub fn failure_report(f: Failure) -> (Status, ErrorReport) {
    match f {
        Failure::Usage(m) => (Status::ParseError, ErrorReport { message: m.clone(), error: serde_json::json!({ "Usage": m }) }),
        Failure::Io(e) => {
            let error = serde_json::to_value(&e).expect("errors serialize");
            (status_of(&e), ErrorReport { message: e.to_string(), error })
        }
    }
}

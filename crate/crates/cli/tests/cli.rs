use std::path::PathBuf;
use std::process::Command;

use mixhodge_cli::{Body, Report, Status};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn mixhodge(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mixhodge")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn job(args: &[&str]) -> (i32, Value) {
    let (code, stdout, _) = mixhodge(args);
    (code, serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout}")))
}

fn path(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

#[test]
fn validate_kummer_is_opposed() {
    let (code, v) = job(&["validate", "--in", &path("kummer.mhs.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["validate"]["opposed"], true);
}

#[test]
fn zero_beta_converts_to_identity() {
    let (code, v) = job(&["convert", "--from", "shs", "--to", "frep", "--in", &path("zero-beta.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["convert"]["output"]["d"], serde_json::json!([["1", "0"], ["0", "1"]]));
}

#[test]
fn sphere_homotopy_ranks() {
    let (code, v) = job(&["pi", "--in", &path("s2.dga.json"), "--truncate", "6"]);
    assert_eq!(code, 0);
    let pi = &v["result"]["pi"];
    assert_eq!((pi["pi2"].as_u64(), pi["pi3"].as_u64(), pi["pi4"].as_u64()), (Some(1), Some(1), Some(0)));
    assert_eq!(pi["stable"], true);
}

#[test]
fn kummer_shs_gives_unipotent_d() {
    let (_, v) = job(&["convert", "--to", "frep", "--in", &path("kummer.shs.json")]);
    let d = &v["result"]["convert"]["output"]["d"];
    assert_eq!(d[1][0], "0+2*i");
    assert_eq!(d[0][0], "1");
    let (_, back) = job(&["convert", "--to", "shs", "--in", &path("kummer.mhs.json")]);
    assert_eq!(back["result"]["convert"]["output"]["beta"][0]["matrix"], serde_json::json!([["0", "0"], ["1", "0"]]));
}

#[test]
fn weight_convention_flag_moves_pi1_weight() {
    for (flag, w) in [("a+b", 2), ("a2b", 3)] {
        let (code, v) = job(&["pi", "--in", &path("gm.gysin.json"), "--weight-convention", flag]);
        assert_eq!(code, 0);
        let g = &v["result"]["pi"]["groups"][0];
        assert_eq!(g["rank"], 1);
        assert_eq!(g["weights"][0]["weight"], w);
    }
}

const JOBS: &[&[&str]] = &[
    &["validate", "--in", "kummer.mhs.json"],
    &["validate", "--in", "gm.gysin.json"],
    &["split", "--in", "kummer.mhs.json"],
    &["convert", "--to", "mhs", "--in", "kummer.shs.json"],
    &["convert", "--to", "shs", "--in", "kummer.mhs.json"],
    &["ext", "--in", "zero-beta.json", "--in", "kummer.shs.json"],
    &["rees", "--in", "weight.filtration.json"],
    &["dec", "--in", "two-step.complex.json"],
    &["ss", "--in", "two-step.complex.json"],
    &["pi", "--in", "s3.dga.json"],
    &["th", "--in", "circle.cosimplicial.json"],
    &["defcone", "--in", "gm-abelian.defcone.json"],
];

fn resolved(args: &[&str]) -> Vec<String> {
    args.iter().map(|a| if a.ends_with(".json") { path(a) } else { a.to_string() }).collect()
}

#[test]
fn reports_round_trip_through_the_typed_model() {
    for args in JOBS {
        let args = resolved(args);
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, stdout, stderr) = mixhodge(&argv);
        assert_eq!(code, 0, "{argv:?}: {stderr}");
        let report: Report = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{argv:?}: {e}"));
        assert_eq!(report.status, Status::Ok);
        assert!(report.result.is_some());
        let again = serde_json::to_value(&report).unwrap();
        assert_eq!(again, serde_json::from_str::<Value>(&stdout).unwrap(), "{argv:?}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    for args in JOBS {
        let args = resolved(args);
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(mixhodge(&argv).1, mixhodge(&argv).1, "{argv:?}");
    }
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let (code, stdout, _) = mixhodge(&["split", "--in", &path("kummer.mhs.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let report: Report = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert!(matches!(report.result, Some(Body::Split(_))));
}

#[test]
fn text_format_lists_paths() {
    let (code, stdout, _) = mixhodge(&["validate", "--format", "text", "--in", &path("kummer.mhs.json")]);
    assert_eq!(code, 0);
    assert!(stdout.lines().any(|l| l == "result.validate.opposed: true"), "{stdout}");
}

#[test]
fn parse_errors_exit_2() {
    let (code, v) = job(&["validate", "--in", &path("missing.json")]);
    assert_eq!(code, 2);
    assert!(v["error"]["error"]["Parse"].is_string());
    let (code, v) = job(&["validate", "--from", "shs", "--in", &path("kummer.mhs.json")]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["error"]["Kind"]["found"], "mhs");
    let (code, _) = job(&["ext", "--in", &path("zero-beta.json")]);
    assert_eq!(code, 2);
}

#[test]
fn failed_opposedness_exits_3_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    // F⁰ spanned by a real vector: gr^W_{-2} is not of type (-1,-1).
    std::fs::write(
        &bad,
        r#"{"kind": "mhs", "dim": 2,
            "weight": {"direction": "inc", "steps": [{"index": -2, "basis": [["0", "1"]]}, {"index": 0, "basis": [["1", "0"], ["0", "1"]]}]},
            "hodge": {"direction": "dec", "steps": [{"index": 0, "basis": [["1", "0"], ["0", "1"]]}]}}"#,
    )
    .unwrap();
    let (code, v) = job(&["validate", "--in", bad.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert_eq!(v["result"]["validate"]["opposed"], false);
    assert_eq!(v["result"]["validate"]["failure"]["weight"], -2);
}

#[test]
fn disconnected_algebra_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let two = dir.path().join("two.json");
    std::fs::write(&two, r#"{"kind": "dga", "degrees": [2], "unit": ["1", "1"], "products": [[0, 0, 0, "1"], [1, 1, 1, "1"]]}"#).unwrap();
    let (code, v) = job(&["pi", "--in", two.to_str().unwrap()]);
    assert_eq!(code, 4);
    assert_eq!(v["error"]["error"]["Homotopy"], "NotConnected");
}

#[test]
fn short_truncation_exits_5() {
    let (code, v) = job(&["pi", "--in", &path("s2.dga.json"), "--truncate", "2"]);
    assert_eq!(code, 5);
    assert_eq!(v["result"]["pi"]["stable"], false);
    let (code, v) = job(&["th", "--in", &path("circle.cosimplicial.json"), "--form-cap", "1"]);
    assert_eq!(code, 5);
    assert_eq!(v["result"]["th"]["stable"], false);
}

#[test]
fn mii_endpoints_change_the_integral_path() {
    let (c0, a) = job(&["convert", "--to", "mhs", "--in", &path("kummer.shs.json")]);
    let (c1, b) = job(&["convert", "--to", "mhs", "--endpoints", "mii", "--in", &path("kummer.shs.json")]);
    assert_eq!((c0, c1), (0, 0));
    assert_eq!(b["options"]["endpoints"], "mii");
    assert_eq!(a["result"]["convert"]["output"]["weight"], b["result"]["convert"]["output"]["weight"]);
}

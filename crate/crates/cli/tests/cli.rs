use std::path::PathBuf;
use std::process::{Command, Output};

use gwcalc::{JobSpec, Parsed};
use serde_json::Value;

fn gwcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwcalc")).args(args).env_remove("GW_CACHE_DIR").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gwcalc-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn compute_plane_cubics() {
    let out = gwcalc(&["compute", "--model", "P2", "--degree", "3", "--insert", "pt*8", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], "12");
    assert_eq!(v["command"], "compute");
    assert_eq!(v["inputs"]["insert"], "H^2*8");
    assert!(v["timing_ms"].is_null());
}

#[test]
fn compare_torus_lines() {
    let out = gwcalc(&["compare", "--family", "torus:1,1", "--degree", "1", "--insert", "pt,pt,pt"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["report"];
    assert_eq!(r["lhs"], "1");
    assert_eq!(r["rhs"], "1");
    assert_eq!(r["equal"], true);
}

#[test]
fn dlambda_binomial() {
    let out = gwcalc(&["dlambda", "--m", "5", "--n", "3", "--lambda", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], "3");
}

#[test]
fn unequal_comparison_exits_one() {
    let out = gwcalc(&["compare", "--family", "torus:1,1", "--degree", "2", "--insert", "pt*7", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert_eq!(text, "family,d,k,insertions,lhs,rhs,equal\n\"torus:1,1\",2,7,H1^1*H2^1*7,12,18,false\n");
    let err = stderr(&out);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("gwcalc: inequality: "));
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32, &str)] = &[
        (&["compute", "--model", "P2", "--degree", "1", "--insert", "H^3"], 2, "parameter"),
        (&["compute", "--model", "Q7", "--degree", "1"], 2, "parse"),
        (&["compute", "--model", "P2", "--degree", "1", "--insert", "pt*0"], 2, "usage"),
        (&["compute", "--model", "P1xP1", "--degree", "1"], 2, "parameter"),
        (&["frobnicate"], 2, "usage"),
        (&["dlambda", "--m", "3", "--n", "3", "--lambda", "1"], 2, "parameter"),
        (&["compare", "--family", "torus:1,1", "--degree", "0", "--insert", "pt"], 2, "parameter"),
        (&["compare", "--family", "torus:1,1", "--degree", "1", "--insert", "pt*3", "--slot", "3"], 2, "parameter"),
        (&["compute", "--model", "Gr(2,4)", "--degree", "1", "--insert", "s[1]*5"], 3, "unsupported"),
        (&["compare", "--family", "grass:5,2", "--degree", "1", "--insert", "s[1]*4"], 3, "unsupported"),
    ];
    for (args, code, kind) in cases {
        let out = gwcalc(args);
        assert_eq!(out.status.code(), Some(*code), "{args:?}");
        let err = stderr(&out);
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with(&format!("gwcalc: {kind}: ")), "{args:?}: {err}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn grassmannian_three_point() {
    let out = gwcalc(&["compute", "--model", "Gr(2,4)", "--degree", "1", "--insert", "s[2,1],s[2,1],s[2]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], "1");
}

#[test]
fn output_is_byte_identical() {
    let args = ["table", "--family", "torus:1,1", "--max-degree", "1", "--format", "json"];
    let a = gwcalc(&args);
    let b = gwcalc(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn timing_is_opt_in() {
    let out = gwcalc(&["dlambda", "--m", "4", "--n", "2", "--lambda", "1", "--timing"]);
    assert!(json(&out)["timing_ms"].is_number());
}

#[test]
fn table_csv_header() {
    let out = gwcalc(&["table", "--family", "grass:4,2", "--max-degree", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,d,k,insertions,lhs,rhs,equal"));
    assert!(lines.any(|l| l == "\"grass:4,2\",1,3,\"s[2,2]*3\",1,1,true"));
}

#[test]
fn ledger_report() {
    let out = gwcalc(&["ledger", "--family", "grass:4,2", "--degree", "1", "--points", "3", "--genus", "2"]);
    let r = &json(&out)["report"];
    assert_eq!(r["gap"], 6);
    assert_eq!(r["expected_gap"], 6);
    assert_eq!(r["gap_ok"], true);
    assert!(r["real_dim_2d"].is_null());
}

#[test]
fn output_file() {
    let dir = scratch_dir("out");
    let path = dir.join("r.json");
    let out = gwcalc(&["dlambda", "--m", "5", "--n", "3", "--lambda", "2", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["value"], "3");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn cache_dir_roundtrip_and_corruption() {
    let dir = scratch_dir("cache");
    let args = ["compute", "--model", "P2", "--degree", "4", "--insert", "pt*11"];
    let run = || Command::new(env!("CARGO_BIN_EXE_gwcalc")).args(args).env("GW_CACHE_DIR", &dir).output().unwrap();

    let first = run();
    assert_eq!(json(&first)["value"], "620");
    let file = dir.join(gw_core::persist::CACHE_FILE_NAME);
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.contains("P2|4|H^2;H^2;H^2;H^2;H^2;H^2;H^2;H^2;H^2;H^2;H^2\t620\n"));

    let second = run();
    assert_eq!(first.stdout, second.stdout);
    assert!(second.stderr.is_empty());

    // A forged value must not leak into the answer.
    std::fs::write(&file, text.replace("\t620\n", "\t621\n")).unwrap();
    let third = run();
    assert_eq!(json(&third)["value"], "620");
    assert!(stderr(&third).starts_with("gwcalc: warning: "));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn jobspec_canonical_roundtrip() {
    let inputs: &[&[&str]] = &[
        &["compute", "--model", "P2", "--degree", "3", "--insert", "pt*8"],
        &["compute", "--insert", "H1*H2, pt", "--model", "P1xP1", "--degree", "1,1", "--insert", "H1^1*H2^1"],
        &["compute", "--model", "Gr2,4", "--degree", "1", "--insert", "s[2,1],s[1],s[2,1]", "--format", "csv"],
        &["compare", "--family", "torus:2,2", "--degree", "1", "--insert", "H1^2*H2,H1*H2^2,pt", "--slot", "2"],
        &["dlambda", "--lambda", "[2,1]", "--m", "5", "--n", "3", "--timing"],
        &["table", "--family", "grass:4,2", "--max-degree", "2", "--output", "/tmp/x.csv"],
        &["ledger", "--family", "torus:1,2", "--degree", "3", "--points", "4", "--genus", "1"],
    ];
    let parse = |args: Vec<String>| match JobSpec::parse(std::iter::once("gwcalc".to_string()).chain(args)).unwrap() {
        Parsed::Job(j) => j,
        Parsed::Info(_) => panic!("unexpected help"),
    };
    for args in inputs {
        let spec = parse(args.iter().map(|s| s.to_string()).collect());
        let canonical = spec.canonical_args();
        let again = parse(canonical.clone());
        assert_eq!(again, spec, "{args:?}");
        assert_eq!(again.canonical_args(), canonical);
    }
}

#[test]
fn library_entry_point() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = gwcalc::run(["gwcalc", "dlambda", "--m", "6", "--n", "2", "--lambda", "2,2", "--format", "csv"], &mut out, &mut err);
    assert_eq!(code, 0);
    // det [[1,2],[0,1]] with entries binom(2, λ_i + j - i)
    assert_eq!(String::from_utf8(out).unwrap(), "lambda,m,n,value\n\"[2,2]\",6,2,1\n");
}

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use hodge_core::covers::VzReport;
use hodge_core::tower::BVStepReport;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn hodge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hodge"))
        .args(args)
        .env_remove("HODGE_PREC")
        .output()
        .expect("spawn hodge")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn ok(args: &[&str]) -> String {
    let out = hodge(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

/// Same canonical form as the binary: sorted keys, pretty, trailing newline.
fn canonical<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(&serde_json::to_value(x).unwrap()).unwrap() + "\n"
}

fn assert_no_floats(v: &Value) {
    match v {
        Value::Number(n) => assert!(n.is_i64() || n.is_u64(), "binary float {n} in JSON"),
        Value::Array(a) => a.iter().for_each(assert_no_floats),
        Value::Object(o) => o.values().for_each(assert_no_floats),
        _ => {}
    }
}

fn assert_sorted_keys(v: &Value) {
    match v {
        Value::Array(a) => a.iter().for_each(assert_sorted_keys),
        Value::Object(o) => {
            let keys: Vec<&String> = o.keys().collect();
            let mut sorted = keys.clone();
            sorted.sort();
            assert_eq!(keys, sorted);
            o.values().for_each(assert_sorted_keys);
        }
        _ => {}
    }
}

#[test]
fn kummer_table() {
    let kummer = fixture("kummer.json");
    let out = ok(&["bv-tower", kummer.to_str().unwrap()]);
    assert!(out.contains("1 20  1"), "{out}");
    assert!(out.contains("betti: 1 0 22 0 1"), "{out}");
    assert!(out.contains("euler: 24"), "{out}");
    assert!(out.contains("cm by degree: CM CM CM"), "{out}");
}

#[test]
fn vz_r_values() {
    let out = ok(&["vz", "--m", "5", "--n", "2"]);
    assert!(out.contains("r-values (r_1..r_4): (3, 2, 1, 0)"), "{out}");
    assert!(out.contains("threefold H^3: (1, 101, 101, 1)"), "{out}");
    let out = ok(&["vz", "--m", "4", "--n", "1"]);
    assert!(out.contains("surface H^2: (1, 20, 1)"), "{out}");
}

#[test]
fn hypersurface_oracle() {
    let v: Value = serde_json::from_str(&ok(&[
        "oracle", "hypersurface", "--degree", "4", "--ambient", "3", "--emit", "json",
    ]))
    .unwrap();
    assert_eq!(v["hodge"], serde_json::json!([1, 20, 1]));
}

#[test]
fn cm_detect_finds_i() {
    let out = ok(&["cm-detect", "--re", "0", "--im", "1", "--deg", "2", "--height", "10", "--prec", "50"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["report"]["polynomial"], "x^2 + 1");
    assert_eq!(v["report"]["verified_at_double_precision"], true);
    assert_no_floats(&v);
}

#[test]
fn tower_json_round_trips() {
    for f in ["kummer.json", "borcea3.json"] {
        let path = fixture(f);
        let out = ok(&["bv-tower", path.to_str().unwrap(), "--emit", "json"]);
        let reports: Vec<BVStepReport> = serde_json::from_str(&out).unwrap();
        assert_eq!(canonical(&reports), out);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_sorted_keys(&v);
        assert_no_floats(&v);
    }
    let three = fixture("borcea3.json");
    let reports: Vec<BVStepReport> =
        serde_json::from_str(&ok(&["bv-tower", three.to_str().unwrap(), "--emit", "json"])).unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[1].output.family().h(3, 0), 1);
}

#[test]
fn vz_json_round_trips() {
    for (m, n) in [("4", "1"), ("5", "2"), ("7", "3")] {
        let out = ok(&["vz", "--m", m, "--n", n, "--emit", "json"]);
        let report: VzReport = serde_json::from_str(&out).unwrap();
        assert_eq!(canonical(&report), out);
        assert_sorted_keys(&serde_json::from_str(&out).unwrap());
    }
}

#[test]
fn period_json_is_decimal_and_stable() {
    let cases: &[&[&str]] = &[
        &["periods", "elliptic", "--lambda", "0.5", "--prec", "20"],
        &["periods", "schwarz", "--s", "0.3+0.1i", "--prec", "20"],
        &["periods", "appell", "--a1", "0.1", "--a2", "0.1", "--prec", "20"],
        &["periods", "vz5", "--a1", "0.9", "--a2", "0.05", "--prec", "15"],
        &["lemmas-selftest", "--emit", "json"],
    ];
    for args in cases {
        let out = ok(args);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(canonical(&v), out, "{args:?}");
        assert_no_floats(&v);
        assert_sorted_keys(&v);
        assert_eq!(ok(args), out, "{args:?} is not deterministic");
        if args[0] == "periods" {
            for key in ["re", "im", "err"] {
                assert!(v[key].is_string(), "{args:?}: {key} is not a decimal string");
            }
        }
    }
}

#[test]
fn tau_at_one_half_is_i() {
    let v: Value = serde_json::from_str(&ok(&["periods", "elliptic", "--lambda", "0.5", "--prec", "25"])).unwrap();
    assert_eq!(v["re"], "0");
    assert_eq!(v["im"], "1");
}

#[test]
fn grid_with_jobs_matches_sequential() {
    let base = ["periods", "schwarz", "--s", "0.1", "--s", "0.2+0.3i", "--s", "-0.4", "--s", "0.5i"];
    let seq = ok(&base);
    let mut par = base.to_vec();
    par.extend(["--jobs", "3"]);
    assert_eq!(ok(&par), seq);
    let v: Value = serde_json::from_str(&seq).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_hodge"))
        .args(["periods", "schwarz", "--s", "0.25"])
        .env("HODGE_PREC", "40")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["precision"], 40);
    // An explicit flag wins over the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_hodge"))
        .args(["periods", "schwarz", "--s", "0.25", "--prec", "18"])
        .env("HODGE_PREC", "40")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["precision"], 18);
}

fn temp_spec(contents: &[u8]) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents).unwrap();
    f
}

#[test]
fn exit_codes() {
    let kummer: Value = serde_json::from_str(&std::fs::read_to_string(fixture("kummer.json")).unwrap()).unwrap();
    let mut one_base = kummer.clone();
    one_base["bases"].as_array_mut().unwrap().truncate(1);
    let mut bad_cm = kummer.clone();
    bad_cm["bases"][0]["cy"]["cm"] = serde_json::json!(["CM"]);
    let mut bad_top = kummer.clone();
    bad_top["bases"][0]["cy"]["family"]["levels"][1]["dims"] = serde_json::json!([[1, 0, 2], [0, 1, 2]]);

    let malformed = temp_spec(b"{\"bases\": [");
    let not_utf8 = temp_spec(&[0xff, 0xfe, 0x00]);
    let one_base = temp_spec(one_base.to_string().as_bytes());
    let bad_cm = temp_spec(bad_cm.to_string().as_bytes());
    let bad_top = temp_spec(bad_top.to_string().as_bytes());
    let path = |f: &tempfile::NamedTempFile| f.path().to_str().unwrap().to_string();

    let domain: Vec<Vec<String>> = vec![
        vec!["bv-tower".into(), "/nonexistent/spec.json".into()],
        vec!["bv-tower".into(), path(&malformed)],
        vec!["bv-tower".into(), path(&not_utf8)],
        vec!["bv-tower".into(), path(&one_base)],
        vec!["bv-tower".into(), path(&bad_cm)],
        vec!["bv-tower".into(), path(&bad_top)],
        vec!["vz".into(), "--m".into(), "2".into(), "--n".into(), "1".into()],
        vec!["oracle".into(), "hypersurface".into(), "--degree".into(), "0".into(), "--ambient".into(), "3".into()],
        vec!["periods".into(), "elliptic".into(), "--lambda".into(), "1".into()],
        vec!["periods".into(), "elliptic".into(), "--lambda".into(), "0".into()],
        vec!["periods".into(), "schwarz".into(), "--s".into(), "2".into()],
        vec!["periods".into(), "appell".into(), "--a1".into(), "1.5".into(), "--a2".into(), "0".into()],
        vec!["periods".into(), "appell".into(), "--a1".into(), "0.1".into(), "--a2".into(), "0.1".into(), "--c".into(), "-1".into()],
        vec!["periods".into(), "vz5".into(), "--a1".into(), "0.5".into(), "--a2".into(), "0.5".into()],
        vec!["cm-detect".into(), "--re".into(), "1".into(), "--deg".into(), "0".into()],
    ];
    for args in &domain {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = hodge(&a);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty(), "{args:?} gave no diagnostic");
    }

    let usage: &[&[&str]] = &[
        &[],
        &["frobnicate"],
        &["vz", "--m", "5"],
        &["vz", "--m", "5", "--n", "2", "--bogus"],
        &["vz", "--m", "five", "--n", "2"],
        &["bv-tower"],
        &["bv-tower", "x.json", "--emit", "xml"],
        &["periods", "elliptic", "--lambda", "0.5", "--prec", "14"],
        &["periods", "elliptic", "--lambda", "abc"],
        &["periods", "schwarz", "--s", "0.1", "--jobs", "0"],
        &["periods", "appell", "--a1", "0.1", "--a1", "0.2", "--a2", "0.1"],
        &["periods", "appell", "--a1", "0.1", "--a2", "0.1", "--a", "x/y"],
        &["cm-detect", "--re", "abc"],
        &["cm-detect", "--re", "1", "--height", "ten"],
        &["cm-detect", "--re", "1", "--prec", "3"],
    ];
    for args in usage {
        let out = hodge(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }

    let out = Command::new(env!("CARGO_BIN_EXE_hodge"))
        .args(["periods", "schwarz", "--s", "0.2"])
        .env("HODGE_PREC", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "HODGE_PREC below 15 must be a usage error");
}

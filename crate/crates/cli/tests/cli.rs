use std::path::Path;
use std::process::Command;

use modcat_core::CycloNum;
use serde_json::{json, Value};

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn modcat(args: &[&str]) -> Out {
    let out = Command::new(env!("CARGO_BIN_EXE_modcat")).args(args).output().unwrap();
    Out {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn dump(dir: &Path, name: &str, hints: bool) -> String {
    let mut args = vec!["catalog", "dump", name];
    if hints {
        args.push("--with-hints");
    }
    let out = modcat(&args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let p = dir.join(format!("{name}{hints}.json"));
    std::fs::write(&p, out.stdout).unwrap();
    p.to_string_lossy().into_owned()
}

fn write_json(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn catalog_list_names_every_entry() {
    let out = modcat(&["catalog", "list", "--format", "json"]);
    assert_eq!(out.code, 0);
    let names: Vec<String> = parse(&out.stdout)
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(names.len(), 10);
    assert!(names.contains(&"toric_code".to_string()));
    assert_eq!(modcat(&["catalog", "dump", "nope"]).code, 1);
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let fib = dump(dir.path(), "fibonacci", false);
    let out = modcat(&["validate", &fib]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.ends_with("valid\n"));

    let mut doc = parse(&std::fs::read_to_string(dump(dir.path(), "ising", false)).unwrap());
    let n = doc["category"]["N"].as_array_mut().unwrap();
    n.retain(|e| e != &json!(["sigma", "sigma", "psi", 1]));
    let broken = write_json(dir.path(), "broken.json", &doc);
    let out = modcat(&["validate", &broken]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("violation Associativity: witness (psi, sigma, sigma, 1)"), "{}", out.stdout);

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(modcat(&["validate", garbage.to_str().unwrap()]).code, 2);
    assert_eq!(modcat(&["validate", "/nonexistent/file.json"]).code, 2);
    assert_eq!(modcat(&["frobnicate"]).code, 2);
}

#[test]
fn unknown_label_in_document_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = parse(&std::fs::read_to_string(dump(dir.path(), "semion", false)).unwrap());
    doc["category"]["N"].as_array_mut().unwrap().push(json!(["s", "q", "s", 1]));
    let p = write_json(dir.path(), "bad.json", &doc);
    let out = modcat(&["validate", "--format", "json", &p]);
    assert_eq!(out.code, 2);
    assert_eq!(parse(&out.stdout)["error"]["kind"], "parse");
}

#[test]
fn analyze_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let fib = dump(dir.path(), "fibonacci", false);
    let out = modcat(&["analyze", &fib, "--show-s"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("verdict: modular\n"));
    assert!(out.stdout.contains("S̃ ("));

    let toric = dump(dir.path(), "toric_code", false);
    let report = parse(&modcat(&["analyze", "--format", "json", &toric]).stdout);
    let det: CycloNum = serde_json::from_value(report["modularity"]["det"].clone()).unwrap();
    assert_eq!(det, CycloNum::from_int(-16));
    assert_eq!(report["verlinde"], true);

    let s3 = dump(dir.path(), "rep_s3", true);
    let report = parse(&modcat(&["analyze", "--format", "json", &s3]).stdout);
    assert_eq!(report["tannakian"]["group"]["status"], "verified");
    assert_eq!(report["tannakian"]["group"]["order"], 6);
    assert_eq!(report["verdict"], "not modular; centre = {1, sgn, std}; condensable");
}

#[test]
fn analyze_without_dims_needs_the_numeric_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = parse(&std::fs::read_to_string(dump(dir.path(), "fibonacci", false)).unwrap());
    doc["category"].as_object_mut().unwrap().remove("dims");
    let p = write_json(dir.path(), "nodims.json", &doc);
    assert_eq!(modcat(&["analyze", &p]).code, 1);
    let out = modcat(&["analyze", "--numeric-fallback", "--format", "json", &p]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let report = parse(&out.stdout);
    assert_eq!(report["modularity"]["modular"], true);
    assert_eq!(report["modularity"]["certified"], false);
    let phi = report["dims_approx"][1].as_f64().unwrap();
    assert!((phi * phi - phi - 1.0).abs() < 1e-9);
}

#[test]
fn condense_writes_to_out_and_reanalyzes() {
    let dir = tempfile::tempdir().unwrap();
    let z2 = dump(dir.path(), "rep_z2", false);
    let ising = dump(dir.path(), "ising", false);
    let prod = dir.path().join("prod.json");
    let out = modcat(&["product", &z2, &ising, "--out", prod.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    let condensed = dir.path().join("condensed.json");
    let out = modcat(&["condense", prod.to_str().unwrap(), "--out", condensed.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc = parse(&std::fs::read_to_string(&condensed).unwrap());
    assert_eq!(doc["condensation"]["modular"], true);
    assert_eq!(doc["condensation"]["method"], "pointed");
    let out = modcat(&["analyze", condensed.to_str().unwrap()]);
    assert!(out.stdout.contains("verdict: modular\n"), "{}", out.stdout);
}

#[test]
fn condense_error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let toric = dump(dir.path(), "toric_code", false);
    let out = modcat(&["condense", &toric, "--subcat", "1,e"]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("e ⊗ m → f"), "{}", out.stderr);

    let s3 = dump(dir.path(), "rep_s3", false);
    assert_eq!(modcat(&["condense", &s3]).code, 5);

    let d4 = dump(dir.path(), "rep_d4", false);
    let out = modcat(&["condense", "--format", "json", &d4, "--subcat", "1,a"]);
    assert_eq!(out.code, 5);
    assert_eq!(parse(&out.stdout)["error"]["count"], 2);

    let out = modcat(&["condense", &d4, "--subcat", "1-dims", "--cocycle", "sigma=0"]);
    assert_eq!(out.code, 1);
    let out = modcat(&["condense", &d4, "--subcat", "1-dims", "--cocycle", "sigma=zero"]);
    assert_eq!(out.code, 2);
}

/// Rep of the Heisenberg group of order 27: nine characters `c<i><j>`
/// forming Z3×Z3 and two 3-dimensional irreps with `s1 ⊗ s1 = 3·s2`.
fn heisenberg(dir: &Path) -> String {
    let chars: Vec<String> = (0..3).flat_map(|i| (0..3).map(move |j| format!("c{i}{j}"))).collect();
    let mut labels = chars.clone();
    labels.push("s1".into());
    labels.push("s2".into());
    let neg = |k: usize| (3 - k) % 3;
    let mut dual: Vec<String> = (0..3)
        .flat_map(|i| (0..3).map(move |j| format!("c{}{}", neg(i), neg(j))))
        .collect();
    dual.push("s2".into());
    dual.push("s1".into());
    let mut n = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    n.push(json!([format!("c{i}{j}"), format!("c{k}{l}"), format!("c{}{}", (i + k) % 3, (j + l) % 3), 1]));
                }
            }
            for s in ["s1", "s2"] {
                n.push(json!([format!("c{i}{j}"), s, s, 1]));
                n.push(json!([s, format!("c{i}{j}"), s, 1]));
            }
        }
    }
    n.push(json!(["s1", "s1", "s2", 3]));
    n.push(json!(["s2", "s2", "s1", 3]));
    for c in &chars {
        n.push(json!(["s1", "s2", c, 1]));
        n.push(json!(["s2", "s1", c, 1]));
    }
    let one = json!({"zeta": [1, 0]});
    let three = json!({"order": 1, "num": [3], "den": [1]});
    let mut dims = vec![one.clone(); 9];
    dims.push(three.clone());
    dims.push(three);
    let doc = json!({
        "schema_version": 1,
        "name": "rep_heisenberg27",
        "category": {
            "labels": labels,
            "unit": "c00",
            "dual": dual,
            "N": n,
            "twists": vec![one; 11],
            "dims": dims,
        }
    });
    write_json(dir, "heis.json", &doc)
}

#[test]
fn indistinguishable_cocycles_need_user_input() {
    let dir = tempfile::tempdir().unwrap();
    let heis = heisenberg(dir.path());
    assert_eq!(modcat(&["validate", &heis]).code, 0);

    let out = modcat(&["condense", "--format", "json", &heis, "--subcat", "pointed"]);
    assert_eq!(out.code, 4, "{}", out.stderr);
    let err = &parse(&out.stdout)["error"];
    assert_eq!(err["kind"], "needs_cocycle");
    assert_eq!(err["orbits"], json!(["s1", "s2"]));

    let out = modcat(&["condense", &heis, "--subcat", "pointed", "--cocycle", "s1=1,s2=2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc = parse(&out.stdout);
    assert_eq!(doc["category"]["labels"].as_array().unwrap().len(), 3);
    let orbits = doc["condensation"]["orbits"]["orbits"].as_array().unwrap();
    let s1 = orbits.iter().find(|o| o["representative"] == "s1").unwrap();
    assert_eq!(s1["cocycle"], json!({"status": "override", "class_id": 1}));
    assert_eq!(s1["h2"], json!([3]));

    let file = write_json(dir.path(), "cocycles.json", &json!({"s1": {"class_id": 1}, "s2": {"class_id": 2}}));
    let again = modcat(&["condense", &heis, "--subcat", "pointed", "--cocycle", &file]);
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn h2_accepts_group_files() {
    let dir = tempfile::tempdir().unwrap();
    let table: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
    let p = write_json(dir.path(), "v4.json", &json!({"order": 4, "table": table}));
    let out = modcat(&["h2", "--format", "json", &p]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = parse(&out.stdout);
    assert_eq!(v["invariants"], json!([2]));
    assert_eq!(v["generators"][0]["base"], 2);
    assert_eq!(modcat(&["h2", "Z3xS3"]).code, 1);
    assert_eq!(modcat(&["h2", "Z4xZ4"]).stdout, "H²(G, T) for |G| = 16: Z4\n");
    assert_eq!(modcat(&["h2", "not-a-group"]).code, 2);
}

#[test]
fn group_file_hints_for_condense() {
    let dir = tempfile::tempdir().unwrap();
    let s3 = dump(dir.path(), "rep_s3", false);
    let hinted = parse(&std::fs::read_to_string(dump(dir.path(), "rep_s3", true)).unwrap());
    let group = write_json(dir.path(), "s3group.json", &hinted["tannakian"]);
    let out = modcat(&["condense", &s3, "--group", &group]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(parse(&out.stdout)["category"]["labels"], json!(["1"]));
}

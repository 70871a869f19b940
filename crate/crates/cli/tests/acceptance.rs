//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Runs the `modcat` binary for every case
//! that has a command-line form; all of those invocations are replayed by
//! the determinism criterion.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::{Mutex, OnceLock};

use modcat_core::catalog::{self, NAMES};
use modcat_core::exchange::ExchangeDocument;
use modcat_core::fusion::{FusionRingData, ViolationKind};
use modcat_core::ribbon::{self, CategorySpec};
use modcat_core::tannakian::{self, FiniteGroup};
use modcat_core::CycloNum;
use serde_json::Value;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

struct Run {
    args: Vec<String>,
    code: i32,
    stdout: String,
}

static RUNS: Mutex<Vec<Run>> = Mutex::new(Vec::new());
static DIR: OnceLock<tempfile::TempDir> = OnceLock::new();

fn dir() -> &'static Path {
    DIR.get_or_init(|| tempfile::tempdir().expect("temp dir")).path()
}

fn exec(args: &[String]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_modcat"))
        .args(args)
        .output()
        .expect("run modcat");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 output"))
}

/// Runs the binary and records the invocation for the determinism replay.
fn cli(args: &[&str]) -> (i32, String) {
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let (code, stdout) = exec(&args);
    RUNS.lock().unwrap().push(Run {
        args,
        code,
        stdout: stdout.clone(),
    });
    (code, stdout)
}

fn write(name: &str, text: &str) -> String {
    let p: PathBuf = dir().join(name);
    std::fs::write(&p, text).expect("write temp file");
    p.to_string_lossy().into_owned()
}

/// Catalog document on disk, produced by `catalog dump`.
fn dumped(name: &str, hints: bool) -> Result<String, String> {
    let file = format!("{name}{}.json", if hints { "-hints" } else { "" });
    let p = dir().join(&file);
    if p.exists() {
        return Ok(p.to_string_lossy().into_owned());
    }
    let mut args = vec!["catalog", "dump", name];
    if hints {
        args.push("--with-hints");
    }
    let (code, out) = cli(&args);
    ensure!(code == 0, "catalog dump {name} exited {code}");
    Ok(write(&file, &out))
}

fn product_file(a: &str, b: &str) -> Result<String, String> {
    let file = format!("{a}__{b}.json");
    let p = dir().join(&file);
    if p.exists() {
        return Ok(p.to_string_lossy().into_owned());
    }
    let (fa, fb) = (dumped(a, false)?, dumped(b, false)?);
    let (code, out) = cli(&["product", &fa, &fb]);
    ensure!(code == 0, "product {a} {b} exited {code}");
    Ok(write(&file, &out))
}

fn json(text: &str) -> Result<Value, String> {
    serde_json::from_str(text).map_err(|e| format!("bad JSON output: {e}"))
}

fn doc(text: &str) -> Result<ExchangeDocument, String> {
    ExchangeDocument::parse(text).map_err(|e| e.to_string())
}

fn spec_of(text: &str) -> Result<CategorySpec, String> {
    doc(text)?.spec().map_err(|e| e.to_string())
}

fn load(name: &str) -> CategorySpec {
    catalog::load_named(name).unwrap()
}

fn pairs() -> Vec<(&'static str, &'static str)> {
    let mut out = Vec::new();
    for i in 0..NAMES.len() {
        for j in i..NAMES.len() {
            out.push((NAMES[i], NAMES[j]));
        }
    }
    out
}

/// Every catalog entry plus every unordered pairwise product, as
/// (description, spec, path).
fn spec_set() -> Result<Vec<(String, CategorySpec, String, Vec<&'static str>)>, String> {
    let mut out = Vec::new();
    for name in NAMES {
        let path = dumped(name, false)?;
        out.push((name.to_string(), load(name), path, vec![name]));
    }
    for (a, b) in pairs() {
        let path = product_file(a, b)?;
        let s = spec_of(&std::fs::read_to_string(&path).unwrap())?;
        out.push((format!("{a}⊠{b}"), s, path, vec![a, b]));
    }
    Ok(out)
}

// ---------------------------------------------------------------- witnesses

fn idx(s: &CategorySpec, w: &[String]) -> Result<Vec<usize>, String> {
    w.iter().map(|n| s.index_of(n).map_err(|e| e.to_string())).collect()
}

/// Re-evaluates the identity a witness claims to break, directly from the
/// raw tables.
fn witness_breaks(s: &CategorySpec, kind: &str, w: &[usize]) -> bool {
    let ring: &FusionRingData = s.ring();
    let r = s.rank();
    let n = |a, b, c| ring.n(a, b, c) as u64;
    let u = ring.unit();
    match (kind, w) {
        ("associativity", &[a, b, c, d]) => {
            let left: u64 = (0..r).map(|e| n(a, b, e) * n(e, c, d)).sum();
            let right: u64 = (0..r).map(|f| n(b, c, f) * n(a, f, d)).sum();
            left != right
        }
        ("rigidity", &[a, b]) => n(a, b, u) != (b == ring.dual(a)) as u64,
        ("unit_law", &[b, c]) => n(u, b, c) != (b == c) as u64 || n(b, u, c) != (b == c) as u64,
        ("frobenius_symmetry", &[a, b, c]) => {
            let x = n(a, b, c);
            x != n(ring.dual(a), c, b) || x != n(c, ring.dual(b), a)
        }
        ("unit_twist", &[a]) => a == u && !s.twist(a).is_one(),
        ("dual_twist", &[a, b]) => b == ring.dual(a) && s.twist(a) != s.twist(b),
        ("twist_modulus", &[a]) => !(s.twist(a) * &s.twist(a).conj()).is_one(),
        ("dimension", &[a, b]) => {
            let d = s.exact_dims().unwrap();
            let rhs: CycloNum = (0..r).map(|c| &CycloNum::from_int(n(a, b, c) as i64) * &d[c]).sum();
            &d[a] * &d[b] != rhs
        }
        _ => false,
    }
}

// ------------------------------------------------------------ criterion 1

struct Mutation {
    base: &'static str,
    what: &'static str,
    kind: ViolationKind,
    apply: fn(&CategorySpec) -> CategorySpec,
}

fn set_n(s: &CategorySpec, a: &str, b: &str, c: &str, m: u32) -> CategorySpec {
    let mut ring = s.ring().clone();
    let (a, b, c) = (s.index_of(a).unwrap(), s.index_of(b).unwrap(), s.index_of(c).unwrap());
    ring.set_n(a, b, c, m);
    s.with_ring(ring).unwrap()
}

fn set_twist(s: &CategorySpec, a: &str, t: CycloNum) -> CategorySpec {
    s.with_twist(s.index_of(a).unwrap(), t).unwrap()
}

fn mutations() -> Vec<Mutation> {
    use ViolationKind::*;
    vec![
        Mutation { base: "ising", what: "N[σ][σ][ψ] 1→0", kind: Associativity, apply: |s| set_n(s, "sigma", "sigma", "psi", 0) },
        Mutation { base: "fibonacci", what: "N[τ][τ][τ] 1→0", kind: Dimension, apply: |s| set_n(s, "tau", "tau", "tau", 0) },
        Mutation { base: "toric_code", what: "N[e][m][f] 1→0", kind: Associativity, apply: |s| set_n(s, "e", "m", "f", 0) },
        Mutation { base: "rep_s3", what: "N[std][std][std] 1→0", kind: Dimension, apply: |s| set_n(s, "std", "std", "std", 0) },
        Mutation { base: "rep_z3", what: "θ_w = ζ3 with θ_w2 = 1", kind: DualTwist, apply: |s| set_twist(s, "w", CycloNum::root_of_unity(3, 1)) },
        Mutation { base: "trivial", what: "θ_1 = −1", kind: UnitTwist, apply: |s| set_twist(s, "1", CycloNum::from_int(-1)) },
        Mutation { base: "ising", what: "θ_σ = 2ζ16", kind: TwistModulus, apply: |s| set_twist(s, "sigma", &CycloNum::from_int(2) * &CycloNum::root_of_unity(16, 1)) },
        Mutation { base: "rep_z2", what: "N[sgn][sgn][1] 1→0", kind: Rigidity, apply: |s| set_n(s, "sgn", "sgn", "1", 0) },
        Mutation { base: "rep_d4", what: "N[a][σ][σ] 1→0", kind: Associativity, apply: |s| set_n(s, "a", "sigma", "sigma", 0) },
        Mutation { base: "semion", what: "N[s][s][s] 0→1", kind: Dimension, apply: |s| set_n(s, "s", "s", "s", 1) },
    ]
}

fn criterion_validation() -> Check {
    for name in NAMES {
        let path = dumped(name, false)?;
        let (code, out) = cli(&["validate", "--format", "json", &path]);
        ensure!(code == 0, "{name}: validate exited {code}: {out}");
        ensure!(json(&out)?["passed"] == Value::Bool(true), "{name}: report not passed");
    }
    for (i, m) in mutations().into_iter().enumerate() {
        let mutated = (m.apply)(&load(m.base));
        let path = write(&format!("mutation{i}.json"), &ExchangeDocument::from_spec(&mutated, None).to_json());
        let (code, out) = cli(&["validate", "--format", "json", &path]);
        ensure!(code == 1, "{} {}: exit {code}, expected 1", m.base, m.what);
        let report = json(&out)?;
        let kind = serde_json::to_value(m.kind).unwrap().as_str().unwrap().to_string();
        let v = report["violations"]
            .as_array()
            .and_then(|vs| vs.iter().find(|v| v["kind"] == Value::String(kind.clone())))
            .ok_or_else(|| format!("{} {}: no {kind} violation in {out}", m.base, m.what))?;
        let w: Vec<String> = serde_json::from_value(v["witness"].clone()).map_err(|e| e.to_string())?;
        let w_idx = idx(&mutated, &w)?;
        ensure!(
            witness_breaks(&mutated, &kind, &w_idx),
            "{} {}: witness {w:?} does not break {kind}",
            m.base,
            m.what
        );
        ensure!(
            !witness_breaks(&load(m.base), &kind, &w_idx),
            "{} {}: witness {w:?} already fails before mutating",
            m.base,
            m.what
        );
    }
    Ok(())
}

// ------------------------------------------------------------ criteria 2, 3

fn criterion_degeneracy_equivalence() -> Check {
    let set = spec_set()?;
    ensure!(set.len() >= 65, "only {} specs", set.len());
    for (name, s, _, _) in &set {
        let sm = ribbon::s_matrix(s).map_err(|e| e.to_string())?;
        let rows = ribbon::row_proportional_labels(s, &sm).map_err(|e| e.to_string())?;
        for a in 0..s.rank() {
            let channel = ribbon::is_degenerate(s, a).degenerate;
            ensure!(channel == rows[a], "{name}: `{}` channel test {channel}, S̃ test {}", s.name(a), rows[a]);
        }
    }
    Ok(())
}

const MODULAR_FACTORS: [&str; 5] = ["trivial", "toric_code", "ising", "fibonacci", "semion"];

fn criterion_obstruction() -> Check {
    let set = spec_set()?;
    for (name, s, path, factors) in &set {
        let det = ribbon::determinant(&ribbon::s_matrix(s).map_err(|e| e.to_string())?.entries);
        let centre = ribbon::centre(s);
        let trivial_centre = centre == [s.ring().unit()];
        ensure!(!det.is_zero() == trivial_centre, "{name}: det {det} but centre of size {}", centre.len());
        let expected = factors.iter().all(|f| MODULAR_FACTORS.contains(f));
        ensure!(trivial_centre == expected, "{name}: modular = {trivial_centre}, expected {expected}");
        let (code, out) = cli(&["analyze", "--format", "json", path]);
        ensure!(code == 0, "{name}: analyze exited {code}");
        let report = json(&out)?;
        ensure!(
            report["modularity"]["modular"] == Value::Bool(expected),
            "{name}: analyze says modular = {}",
            report["modularity"]["modular"]
        );
    }
    let verdict = |path: &str| -> Result<String, String> {
        let (code, out) = cli(&["analyze", "--format", "json", path]);
        ensure!(code == 0, "analyze exited {code}");
        Ok(json(&out)?["verdict"].as_str().unwrap_or_default().to_string())
    };
    ensure!(verdict(&dumped("fibonacci", false)?)? == "modular", "fibonacci verdict");
    let v = verdict(&product_file("rep_z2", "ising")?)?;
    ensure!(v == "not modular; centre = {(1,1), (sgn,1)}; condensable", "rep_z2⊠ising verdict: {v}");
    let v = verdict(&dumped("rep_s3", false)?)?;
    ensure!(
        v.starts_with("not modular; centre = {1, sgn, std}") && v.ends_with("group needs user input"),
        "rep_s3 verdict: {v}"
    );
    Ok(())
}

// ------------------------------------------------------------ criterion 4

fn sqrt5() -> CycloNum {
    let z = |k| CycloNum::root_of_unity(5, k);
    &(&(&z(1) - &z(2)) - &z(3)) + &z(4)
}

fn criterion_exact_s() -> Check {
    let int = CycloNum::from_int;
    let toric = ribbon::s_matrix(&load("toric_code")).map_err(|e| e.to_string())?.entries;
    let signs = [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]];
    let expected: Vec<Vec<CycloNum>> = signs.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
    ensure!(toric == expected, "toric S̃ = {toric:?}");
    let phi = (&int(1) + &sqrt5()).div(&int(2)).unwrap();
    ensure!(&phi * &phi == &phi + &int(1), "φ² ≠ φ + 1");
    let fib = ribbon::s_matrix(&load("fibonacci")).map_err(|e| e.to_string())?.entries;
    ensure!(fib == vec![vec![int(1), phi.clone()], vec![phi, int(-1)]], "fibonacci S̃ = {fib:?}");
    for name in MODULAR_FACTORS {
        let ok = ribbon::verlinde_check(&load(name)).map_err(|e| e.to_string())?;
        ensure!(ok, "Verlinde fails for {name}");
    }
    Ok(())
}

// ------------------------------------------------------------ criterion 5

/// Condensation outputs collected for the conservation criterion:
/// (description, original spec, output document text).
static CONDENSED: Mutex<Vec<(String, CategorySpec, String)>> = Mutex::new(Vec::new());

fn condense_cli(what: &str, original: &CategorySpec, args: &[&str]) -> Result<String, String> {
    let mut full = vec!["condense"];
    full.extend_from_slice(args);
    let (code, out) = cli(&full);
    ensure!(code == 0, "{what}: condense exited {code}");
    CONDENSED.lock().unwrap().push((what.to_string(), original.clone(), out.clone()));
    Ok(out)
}

fn criterion_round_trip() -> Check {
    for g in ["rep_z2", "rep_z3", "rep_z2z2"] {
        for m in ["ising", "fibonacci", "toric_code"] {
            let path = product_file(g, m)?;
            let original = spec_of(&std::fs::read_to_string(&path).unwrap())?;
            let out = condense_cli(&format!("{g}⊠{m}"), &original, &[&path, "--subcat", "auto"])?;
            let got = spec_of(&out)?;
            let target = load(m);
            let map = ribbon::find_equivalence(&got, &target)
                .ok_or_else(|| format!("{g}⊠{m}: result is not label-bijective to {m}"))?;
            let r = target.rank();
            ensure!(got.rank() == r, "{g}⊠{m}: rank {}", got.rank());
            let (dg, dt) = (got.exact_dims().unwrap(), target.exact_dims().unwrap());
            let (sg, st) = (
                ribbon::s_matrix(&got).map_err(|e| e.to_string())?,
                ribbon::s_matrix(&target).map_err(|e| e.to_string())?,
            );
            for a in 0..r {
                ensure!(got.twist(a) == target.twist(map[a]), "{g}⊠{m}: twist of {}", got.name(a));
                ensure!(dg[a] == dt[map[a]], "{g}⊠{m}: dim of {}", got.name(a));
                for b in 0..r {
                    ensure!(sg.get(a, b) == st.get(map[a], map[b]), "{g}⊠{m}: S̃ entry");
                    for c in 0..r {
                        ensure!(
                            got.ring().n(a, b, c) == target.ring().n(map[a], map[b], map[c]),
                            "{g}⊠{m}: N entry"
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

// ------------------------------------------------------------ criterion 6

fn expect_trivial(what: &str, original: &CategorySpec, out: &str, group_order: u64) -> Check {
    let s = spec_of(out)?;
    ensure!(s.rank() == 1, "{what}: rank {}", s.rank());
    let d = s.exact_dims().unwrap();
    ensure!(d[0].is_one(), "{what}: d = {}", d[0]);
    let total: CycloNum = original.exact_dims().unwrap().iter().map(|x| x * &x.conj()).sum();
    ensure!(
        total == CycloNum::from_int(group_order as i64),
        "{what}: Σd²/|G| = {total}/{group_order} ≠ 1"
    );
    Ok(())
}

fn group_order_of(out: &str) -> Result<u64, String> {
    Ok(doc(out)?.condensation.ok_or("no condensation section")?.group_order)
}

fn method_of(out: &str) -> Result<String, String> {
    let d = json(out)?;
    Ok(d["condensation"]["method"].as_str().unwrap_or_default().to_string())
}

fn criterion_collapse() -> Check {
    for name in ["rep_z2", "rep_z3", "rep_z2z2"] {
        let path = dumped(name, false)?;
        let out = condense_cli(name, &load(name), &[&path])?;
        expect_trivial(name, &load(name), &out, group_order_of(&out)?)?;
        ensure!(method_of(&out)? == "pointed", "{name}: method");
    }
    let path = dumped("rep_s3", true)?;
    let out = condense_cli("rep_s3", &load("rep_s3"), &[&path])?;
    ensure!(method_of(&out)? == "general", "rep_s3: method {}", method_of(&out)?);
    ensure!(group_order_of(&out)? == 6, "rep_s3: |G|");
    expect_trivial("rep_s3", &load("rep_s3"), &out, 6)?;

    let d4 = load("rep_d4");
    let path = dumped("rep_d4", true)?;
    let stage1 = condense_cli("rep_d4 by its 1-dims", &d4, &[&path, "--subcat", "1-dims"])?;
    let mid = spec_of(&stage1)?;
    let mid_path = write("rep_d4_stage1.json", &ExchangeDocument::from_spec(&mid, Some("rep_d4 stage 1")).to_json());
    let stage2 = condense_cli("rep_d4 stage 2", &mid, &[&mid_path])?;
    let s2 = spec_of(&stage2)?;
    ensure!(s2.rank() == 1, "rep_d4 two-stage: rank {}", s2.rank());
    ensure!(group_order_of(&stage1)? * group_order_of(&stage2)? == 8, "rep_d4 two-stage: group orders");
    expect_trivial("rep_d4 two-stage", &d4, &stage2, 8)?;

    let direct = condense_cli("rep_d4 at once", &d4, &[&path])?;
    ensure!(method_of(&direct)? == "general", "rep_d4 direct: method");
    expect_trivial("rep_d4 direct", &d4, &direct, 8)?;
    Ok(())
}

// ------------------------------------------------------------ criterion 7

fn criterion_cocycle() -> Check {
    let d4 = load("rep_d4");
    let path = dumped("rep_d4", false)?;
    let out = condense_cli("rep_d4 cocycle case", &d4, &[&path, "--subcat", "1-dims"])?;
    let s = spec_of(&out)?;
    ensure!(s.rank() == 2, "rank {}", s.rank());
    let d = json(&out)?;
    let c = &d["condensation"];
    let phi: Vec<(String, String, u64)> = serde_json::from_value(c["phi"].clone()).map_err(|e| e.to_string())?;
    let sigma: Vec<_> = phi.iter().filter(|(eta, _, _)| eta == "sigma").collect();
    ensure!(sigma.len() == 1 && sigma[0].2 == 2, "Φ(σ) = {sigma:?}");
    let x = s.index_of(&sigma[0].1).map_err(|e| e.to_string())?;
    ensure!(s.exact_dims().unwrap()[x].is_one(), "d_x = {}", s.exact_dims().unwrap()[x]);
    let orbit = c["orbits"]["orbits"]
        .as_array()
        .and_then(|os| os.iter().find(|o| o["representative"] == "sigma"))
        .ok_or("no orbit for sigma")?;
    ensure!(orbit["h2"] == serde_json::json!([2]), "H² of the stabilizer: {}", orbit["h2"]);
    ensure!(orbit["cocycle"]["status"] == "inferred", "status {}", orbit["cocycle"]);
    ensure!(orbit["cocycle"]["class_id"] == 1, "class {}", orbit["cocycle"]);
    // The stabilizer is Z2×Z2 and class 1 is its only non-trivial class.
    let table: Vec<Vec<usize>> = serde_json::from_value(orbit["stabilizer_table"].clone()).map_err(|e| e.to_string())?;
    let stab = FiniteGroup::from_table(table).map_err(|e| e.to_string())?;
    ensure!(stab.is_isomorphic(&FiniteGroup::named("Z2xZ2").unwrap()), "stabilizer is not Z2×Z2");
    let h = tannakian::h2(&stab).map_err(|e| e.to_string())?;
    let class = h.class_from_id(1).map_err(|e| e.to_string())?;
    ensure!(h.order() == 2 && class.id != 0, "class 1 is not the non-trivial element");
    Ok(())
}

// ------------------------------------------------------------ criterion 8

fn criterion_degeneracy_guard() -> Check {
    let path = dumped("toric_code", false)?;
    let (code, out) = cli(&["condense", "--format", "json", &path, "--subcat", "1,e"]);
    ensure!(code == 3, "exit {code}, expected 3");
    let w = &json(&out)?["error"]["witness"];
    ensure!(
        w["label"] == "e" && w["partner"] == "m" && w["channel"] == "f" && w["phase"] == "-1",
        "witness {w}"
    );
    Ok(())
}

// ------------------------------------------------------------ criterion 9

fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = (1..p).find(|&x| rows[rank][col] * x % p == 1).unwrap();
        for v in rows[rank].iter_mut() {
            *v = *v * inv % p;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// F_p-rank of the Schur multiplier: `|G|² − |G| − rank δ²` over F_p.
fn multiplier_p_rank(g: &FiniteGroup, p: u64) -> usize {
    let n = g.order();
    let mut rows = Vec::new();
    for a in g.elements() {
        for b in g.elements() {
            for c in g.elements() {
                let mut row = vec![0u64; n * n];
                for (x, y, s) in [(b, c, 1), (g.mul(a, b), c, p - 1), (a, g.mul(b, c), 1), (a, b, p - 1)] {
                    row[x * n + y] = (row[x * n + y] + s) % p;
                }
                rows.push(row);
            }
        }
    }
    n * n - n - rank_mod_p(rows, p)
}

/// Normalized 2-cocycles with values in Z_n, counted by backtracking.
fn normalized_cocycles(g: &FiniteGroup, n: u64) -> u64 {
    let size = g.order();
    let e = g.identity();
    let cells: Vec<usize> = (0..size * size).filter(|&p| p / size != e && p % size != e).collect();
    let mut last = vec![Vec::new(); cells.len()];
    for a in 0..size {
        for b in 0..size {
            for c in 0..size {
                let involved = [b * size + c, g.mul(a, b) * size + c, a * size + g.mul(b, c), a * size + b];
                if let Some(k) = involved.iter().filter_map(|p| cells.iter().position(|q| q == p)).max() {
                    last[k].push((a, b, c));
                }
            }
        }
    }
    fn go(k: usize, n: u64, g: &FiniteGroup, cells: &[usize], last: &[Vec<(usize, usize, usize)>], t: &mut [u64]) -> u64 {
        if k == cells.len() {
            return 1;
        }
        let s = g.order();
        let mut total = 0;
        for v in 0..n {
            t[cells[k]] = v;
            if last[k].iter().all(|&(a, b, c)| {
                (t[b * s + c] + t[a * s + g.mul(b, c)]) % n == (t[g.mul(a, b) * s + c] + t[a * s + b]) % n
            }) {
                total += go(k + 1, n, g, cells, last, t);
            }
        }
        t[cells[k]] = 0;
        total
    }
    go(0, n, g, &cells, &last, &mut vec![0; size * size])
}

fn criterion_cohomology() -> Check {
    let mut cases: Vec<(String, Vec<u64>)> = (1..=16).map(|n| (format!("Z{n}"), vec![])).collect();
    cases.push(("S3".into(), vec![]));
    cases.push(("Q8".into(), vec![]));
    cases.push(("Z2xZ2".into(), vec![2]));
    cases.push(("D4".into(), vec![2]));
    for (name, expected) in cases {
        let (code, out) = cli(&["h2", "--format", "json", &name]);
        ensure!(code == 0, "h2 {name} exited {code}");
        let inv: Vec<u64> = serde_json::from_value(json(&out)?["invariants"].clone()).map_err(|e| e.to_string())?;
        ensure!(inv == expected, "H²({name}) = {inv:?}, expected {expected:?}");
        let g = FiniteGroup::named(&name).unwrap();
        let order: u64 = inv.iter().product();
        if g.order() <= 8 {
            let primes: Vec<u64> = (2..=g.order() as u64)
                .filter(|&p| g.order() as u64 % p == 0 && (2..p).all(|q| p % q != 0))
                .collect();
            let oracle: u64 = primes.iter().map(|&p| p.pow(multiplier_p_rank(&g, p) as u32)).product();
            ensure!(oracle == order, "{name}: F_p-rank oracle gives order {oracle}");
        }
        if g.order() <= 6 {
            let n = g.order() as u64;
            let z = normalized_cocycles(&g, n);
            ensure!(z == order * n.pow(g.order() as u32 - 1), "{name}: enumeration finds {z} cocycles");
        }
    }
    Ok(())
}

// ------------------------------------------------------------ criterion 10

fn criterion_conservation() -> Check {
    let done = CONDENSED.lock().unwrap().clone();
    ensure!(done.len() >= 17, "only {} condensations ran", done.len());
    for (what, original, out) in &done {
        let d = doc(out)?;
        let c = d.condensation.as_ref().ok_or("no condensation section")?;
        let s = d.spec().map_err(|e| e.to_string())?;
        let t: Vec<usize> = c.subcategory.iter().map(|n| original.index_of(n).unwrap()).collect();
        let (r, k) = (original.rank(), s.rank());
        let od = original.exact_dims().unwrap();
        let sd = s.exact_dims().unwrap();
        let mut m = vec![vec![0u64; k]; r];
        for (eta, x, v) in &c.phi {
            m[original.index_of(eta).unwrap()][s.index_of(x).unwrap()] = *v;
        }
        // M[η1][η2] = dim Hom(η1 ⊗ A, η2) with A = ⊕_t d_t t.
        let dt: Vec<u64> = t
            .iter()
            .map(|&a| od[a].to_rational().unwrap().to_integer().try_into().unwrap())
            .collect();
        for e1 in 0..r {
            for e2 in 0..r {
                let big: u64 = t.iter().zip(&dt).map(|(&a, &w)| w * original.ring().n(e1, a, e2) as u64).sum();
                let gram: u64 = (0..k).map(|x| m[e1][x] * m[e2][x]).sum();
                ensure!(big == gram, "{what}: M ≠ m·mᵀ at ({}, {})", original.name(e1), original.name(e2));
            }
            let pushed: CycloNum = (0..k).map(|x| &CycloNum::from_int(m[e1][x] as i64) * &sd[x]).sum();
            ensure!(pushed == od[e1], "{what}: Σ_x m d_x ≠ d_{}", original.name(e1));
            for x in 0..k {
                if m[e1][x] > 0 {
                    ensure!(s.twist(x) == original.twist(e1), "{what}: twist of {}", s.name(x));
                }
            }
        }
        let before: CycloNum = od.iter().map(|x| x * &x.conj()).sum();
        let after: CycloNum = sd.iter().map(|x| x * &x.conj()).sum();
        ensure!(
            &after * &CycloNum::from_int(c.group_order as i64) == before,
            "{what}: Σd_x² ≠ Σd_η²/|G|"
        );
        let orig_centre: BTreeSet<usize> = ribbon::centre(original).into_iter().collect();
        let full = orig_centre == t.iter().copied().collect();
        let condensed_trivial = ribbon::centre(&s) == [s.ring().unit()];
        ensure!(full == condensed_trivial, "{what}: full centre {full}, condensed centre trivial {condensed_trivial}");
        ensure!(c.modular == condensed_trivial, "{what}: document's modular flag");
    }
    Ok(())
}

// ------------------------------------------------------------ criterion 11

fn criterion_determinism() -> Check {
    let runs: Vec<(Vec<String>, i32, String)> = RUNS
        .lock()
        .unwrap()
        .iter()
        .map(|r| (r.args.clone(), r.code, r.stdout.clone()))
        .collect();
    ensure!(runs.len() > 100, "only {} recorded runs", runs.len());
    for (args, code, stdout) in runs {
        let (code2, stdout2) = exec(&args);
        ensure!(code == code2 && stdout == stdout2, "output differs between runs of {args:?}");
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("validation suite", criterion_validation),
        ("degeneracy equivalence", criterion_degeneracy_equivalence),
        ("det S̃ ≠ 0 iff trivial centre", criterion_obstruction),
        ("exact S-matrices and Verlinde", criterion_exact_s),
        ("round-trip condensation", criterion_round_trip),
        ("full symmetric collapse", criterion_collapse),
        ("non-trivial cocycle case", criterion_cocycle),
        ("degeneracy guard", criterion_degeneracy_guard),
        ("group cohomology", criterion_cohomology),
        ("conservation invariants", criterion_conservation),
        ("determinism", criterion_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let res = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match res {
            Ok(()) => println!("PASS {:>2} {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

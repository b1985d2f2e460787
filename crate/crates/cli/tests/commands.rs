use std::process::{Command, Output};

use serde_json::Value;

fn cimlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cimlab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

struct TempDir(tempfile::TempDir);

impl TempDir {
    fn new(name: &str) -> Self {
        TempDir(tempfile::Builder::new().prefix(&format!("cimlab-{name}-")).tempdir().unwrap())
    }

    fn file(&self, name: &str, text: &str) -> String {
        let path = self.0.path().join(name);
        std::fs::write(&path, text).unwrap();
        path.to_string_lossy().into_owned()
    }
}

fn construct(dir: &TempDir, target: &str, extra: &[&str]) -> String {
    let mut args = vec!["construct", target];
    args.extend_from_slice(extra);
    let out = cimlab(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    dir.file(&format!("{target}.grp"), &String::from_utf8(out.stdout).unwrap())
}

#[test]
fn classify_examples() {
    let dir = TempDir::new("classify");
    let g1 = construct(&dir, "g1", &[]);
    let out = cimlab(&["classify", &g1, "--mode", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["is_CIM"], true);
    assert_eq!(r["fast_vs_brute_agree"], true);
    assert_eq!(r["brute_engine"], "symbolic-maximals");

    let c4 = dir.file("c4.grp", "kind abelian\norders 4\n");
    let r = json(&cimlab(&["classify", &c4]));
    assert_eq!(r["is_CIM"], false);
    assert_eq!(r["frattini_order"], 2);
    assert_eq!(r["p_im"], "1/2");

    let a5 = dir.file("a5.grp", "kind perm\npoints 5\ngen (0 1)(2 3)\ngen (0 2 4)\n");
    let r = json(&cimlab(&["classify", &a5, "--mode", "brute"]));
    assert_eq!(r["order"], 60);
    assert_eq!(r["is_CIM"], false);
    assert_eq!(r["is_soluble"], false);
}

#[test]
fn small_structured_group_runs_both_engines_on_the_lattice() {
    let dir = TempDir::new("both");
    let f = dir.file("s.grp", "kind structured\nH 4\nmodule p=5 delta=2 action=2\n");
    let r = json(&cimlab(&["classify", &f]));
    assert_eq!(r["mode"], "both");
    assert_eq!(r["brute_engine"], "lattice");
    assert_eq!(r["fast_vs_brute_agree"], true);
    assert_eq!(r["is_CIM"], true);
    assert_eq!(r["is_IM"], false);
    assert_eq!(r["quotient_invariants"], serde_json::json!([4]));
}

#[test]
fn closure_examples() {
    let dir = TempDir::new("closure");
    let g1 = construct(&dir, "g1", &[]);
    let r = json(&cimlab(&["closure", &g1, "0,0;0,0;0"]));
    assert_eq!(r["fast"], 1);
    assert_eq!(r["is_closed"], true);
    let g2 = construct(&dir, "g2", &[]);
    let r = json(&cimlab(&["closure", &g2, "1,0;1;0"]));
    assert_eq!(r["cyclic_order"], 85);
    assert_eq!(r["fast"], 170);
    assert_eq!(r["symbolic_maximals"], 170);
    assert_eq!(r["lattice"], 170);
    assert_eq!(r["is_closed"], false);
    let out = cimlab(&["closure", &g2, "1,0;1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn constructed_quotient_groups_are_cim() {
    let dir = TempDir::new("qab");
    let f = construct(&dir, "qab", &["--abelian", "4"]);
    let text = std::fs::read_to_string(&f).unwrap();
    assert!(text.contains("# kernel"), "{text}");
    let r = json(&cimlab(&["classify", &f, "--mode", "fast"]));
    assert_eq!(r["is_CIM"], true);
    assert_eq!(r["quotient_invariants"], serde_json::json!([4]));
    assert_eq!(cimlab(&["construct", "qab"]).status.code(), Some(1));
    assert_eq!(cimlab(&["construct", "qab", "--abelian", "4", "--prime-ceiling", "3"]).status.code(), Some(1));
    let solo = construct(&dir, "solouno", &[]);
    let text = std::fs::read_to_string(solo).unwrap();
    assert!(text.contains("H 4\nmodule p=5 delta=2 action=2\nmodule p=13 delta=2 action=5"), "{text}");
}

#[test]
fn input_errors_exit_with_one() {
    let dir = TempDir::new("errors");
    let bad = dir.file("bad.grp", "kind perm\npoints 3\ngen (0 7)\n");
    let out = cimlab(&["classify", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    // C4 acting on C3 through C2: common kernel
    let invalid = dir.file("inv.grp", "kind structured\nH 4\nmodule p=3 delta=1 action=2\n");
    assert_eq!(cimlab(&["classify", &invalid]).status.code(), Some(1));
    let out = cimlab(&["classify", &invalid, "--mode", "brute", "--allow-invalid"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["fitting_order"], 6);
    let out = cimlab(&["closure", &invalid, "0;2", "--allow-invalid"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["lattice"], 2);
    assert_eq!(cimlab(&["classify", "/nonexistent/file.grp"]).status.code(), Some(1));
}

#[test]
fn census_is_deterministic() {
    let dir = TempDir::new("census");
    let q8 = dir.file("q8.grp", "kind perm\npoints 8\ngen (0 1 2 3)(4 5 6 7)\ngen (0 4 2 6)(1 7 3 5)\n");
    let args = ["census", "--family", "structured-grid", "--max-order", "120", &q8];
    let a = cimlab(&[&args[..], &["--jobs", "1"]].concat());
    let b = cimlab(&[&args[..], &["--jobs", "3"]].concat());
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("group_id,order,is_im,is_cim,is_aim,is_t_group,is_soluble,is_supersoluble,is_metabelian,p_im,fast_vs_brute_agree,witness")
    );
    let q8_row = text.lines().last().unwrap();
    assert!(q8_row.starts_with("q8,8,false,false,false,true,true,true,true,"), "{q8_row}");
    assert!(String::from_utf8_lossy(&a.stderr).contains("0 implication violations"));
}

#[test]
fn section4_verification_and_negative_control() {
    let out = cimlab(&["verify-section4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    let out = cimlab(&["verify-section4", "--negative-control"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("phi1 is a representation"));
}

use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn tsets(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsets")).args(args).output().unwrap()
}

fn run(args: &[&str]) -> (i32, String) {
    let out = tsets(args);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn validate_algebras() {
    let (code, out) = run(&["validate", &path("chain3.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("complete Heyting algebra, non-Boolean"), "{out}");
    let (code, out) = run(&["validate", &path("diamond.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("complete Heyting algebra, Boolean"));
    let (code, out) = run(&["validate", &path("pentagon.json")]);
    assert_eq!(code, 1);
    assert!(out.starts_with("FAIL algebra.heyting"));
    assert!(out.contains("witness: frame law fails"), "{out}");
}

#[test]
fn validate_tsets_relations_presheaves() {
    assert_eq!(run(&["validate", &path("complete.json")]).0, 0);
    let (code, out) = run(&["validate", &path("unreal.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL tset.postulate"));
    assert_eq!(run(&["validate", &path("relation.json")]).0, 0);
    let (code, out) = run(&["validate", &path("bad_relation.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("Ee rho(x) != Ee x"));
    let (code, out) = run(&["validate", &path("doubled_point.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("PASS presheaf.functorial") && out.contains("FAIL presheaf.separated"));
}

#[test]
fn input_errors_exit_two() {
    let out = tsets(&["validate", &path("ambiguous.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot tell the kind"));
    assert_eq!(run(&["validate", &path("missing.json")]).0, 2);
    assert_eq!(run(&["atoms", &path("chain3.json")]).0, 2);
    assert_eq!(run(&["omega", &path("chain3.json"), "-p", "q"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"checks": ["heyting", "nope"]}"#).unwrap();
    assert_eq!(run(&["laws", "--config", cfg.to_str().unwrap()]).0, 2);
    std::fs::write(&cfg, r#"{"max_carrier_size": 0}"#).unwrap();
    assert_eq!(run(&["laws", "--config", cfg.to_str().unwrap()]).0, 2);
}

#[test]
fn atoms_listing() {
    let (code, out) = run(&["atoms", &path("complete.json")]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS atom.real")).count(), 3);
    assert!(out.contains("postulate of materialism holds"));
    let (code, out) = run(&["atoms", &path("unreal.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL atom.real (x:mu)"));
}

#[test]
fn sheafify_writes_a_sheaf() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out.json");
    let (code, _) = run(&["sheafify", &path("doubled_point.json"), "-o", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    // the written file names its algebra inline
    let (code, out) = run(&["validate", out_path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("presheaf mu:1 a:1 b:1 M:1"));

    let t_path = dir.path().join("t.json");
    assert_eq!(run(&["sheafify", &path("unreal.json"), "-o", t_path.to_str().unwrap()]).0, 0);
    let (code, out) = run(&["atoms", t_path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn omega_and_sieves() {
    let (code, out) = run(&["omega", &path("chain3.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("Omega(M): down(mu)={mu} down(p)={mu,p} down(M)={mu,p,M}"));
    let (_, json) = run(&["--format", "json", "omega", &path("chain3.json"), "-p", "p"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["closed_sieves"]["p"].as_array().unwrap().len(), 2);
    assert_eq!(v["results"][0]["status"], "pass");

    let (code, out) = run(&["sieves", &path("chain3.json"), "-p", "M"]);
    assert_eq!(code, 0);
    assert!(out.contains("M {mu,p} closed\n"));
    assert!(out.contains("M {mu,p,M} covering closed\n"));
}

#[test]
fn exposition_counterexample() {
    let (code, out) = run(&["counterexample", "exposition"]);
    assert_eq!(code, 0);
    assert!(out.contains("mediating maps: 256 >= 2; universality of the exposing object refuted; graph universality holds"));
    assert_eq!(out.lines().filter(|l| l.starts_with("map ")).count(), 256);
    assert_eq!(run(&["counterexample", "exposition", "--points", "1"]).0, 1);
}

#[test]
fn laws_small_config_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"max_algebra_size": 3, "max_carrier_size": 2, "seed": 7, "checks": ["heyting", "exposition"]}"#,
    )
    .unwrap();
    let (code, out) = run(&["--format", "json", "laws", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["config"]["enumeration_guard"], 1_000_000);
    let checks: Vec<&str> = v["results"].as_array().unwrap().iter().map(|r| r["check"].as_str().unwrap()).collect();
    assert!(checks.first().unwrap().starts_with("heyting."));
    assert_eq!(*checks.last().unwrap(), "exposition.graph_universal");
    assert!(v["results"].as_array().unwrap().iter().all(|r| r.get("witness").is_none()));
}

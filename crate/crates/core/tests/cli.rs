use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hermsrg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermsrg")).args(args).env_remove("HERMSRG_BUDGET_SECS").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn build_writes_graph_sidecar_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "nu.g6");
    let o = hermsrg(&["build", "--n", "4", "--q", "2", "--kind", "nu", "--out", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let side: Value = serde_json::from_str(&std::fs::read_to_string(p(dir.path(), "nu.json")).unwrap()).unwrap();
    assert_eq!(side["schema"], "hermsrg.graph.v1");
    assert_eq!(side["params"], serde_json::json!({"v": 176, "k": 135, "lambda": 102, "mu": 108}));
    assert_eq!(side["vertex_points"].as_array().unwrap().len(), 176);
    assert_eq!(side["field"]["codes"].as_array().unwrap().len(), 4);
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(format!("{out}.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 2);
    assert_eq!(manifest["exit_code"], 0);
}

#[test]
fn switched_sidecar_records_the_switch() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "sw.g6");
    let o = hermsrg(&["build", "--n", "4", "--q", "2", "--kind", "switched", "--variant", "line", "--out", &out]);
    assert_eq!(code(&o), 0);
    let side: Value = serde_json::from_str(&std::fs::read_to_string(p(dir.path(), "sw.json")).unwrap()).unwrap();
    let sw = &side["switching"];
    assert_eq!(sw["sizes"]["a"], 24);
    assert_eq!(sw["sizes"]["a1"], 8);
    assert_eq!(sw["triple"].as_array().unwrap().len(), 3);
    // the variant flag is required for switched graphs
    let o = hermsrg(&["build", "--n", "4", "--q", "2", "--kind", "switched", "--out", &out]);
    assert_eq!(code(&o), 2);
}

#[test]
fn unital_graph_with_bad_parameters_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "bm.g6");
    let o = hermsrg(&["build", "--n", "2", "--q", "3", "--kind", "gamma-u", "--unital", "bm", "--alpha-idx", "2", "--beta-idx", "0", "--out", &out]);
    assert_eq!(code(&o), 0);
    let o = hermsrg(&["build", "--n", "2", "--q", "3", "--kind", "gamma-u", "--unital", "bm", "--alpha-idx", "1", "--beta-idx", "0", "--out", &out]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("square"));
}

#[test]
fn verify_srg_reports_a_witness_on_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = p(dir.path(), "path.g6");
    // path on four vertices
    std::fs::write(&path, "Ch\n").unwrap();
    let o = hermsrg(&["verify", "srg", "--graph", &path]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert_eq!(r["pass"], false);
    assert!(!r["failure"].is_null());

    let nu = p(dir.path(), "nu.g6");
    hermsrg(&["build", "--n", "2", "--q", "2", "--kind", "nu", "--out", &nu]);
    assert_eq!(code(&hermsrg(&["verify", "srg", "--graph", &nu, "--expect", "12,9,6,9"])), 0);
    assert_eq!(code(&hermsrg(&["verify", "srg", "--graph", &nu, "--expect", "12,9,6,8"])), 1);
    assert_eq!(code(&hermsrg(&["verify", "srg", "--graph", &nu, "--expect", "12,9"])), 2);
    assert_eq!(code(&hermsrg(&["verify", "srg", "--graph", &p(dir.path(), "missing.g6")])), 2);
}

#[test]
fn verify_lemma_passes_with_matching_counts() {
    let o = hermsrg(&["verify", "lemma", "--id", "hermcurve2", "--q", "3"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["status"], "pass");
    for frame in r["frames"].as_array().unwrap() {
        for case in frame["cases"].as_array().unwrap() {
            let expected = case["expected"].to_string();
            let observed = case["observed"].as_object().unwrap();
            assert_eq!(observed.keys().collect::<Vec<_>>(), vec![&expected]);
        }
    }
    assert_eq!(code(&hermsrg(&["verify", "lemma", "--id", "nonsense", "--q", "3"])), 2);
}

#[test]
fn exhausted_budget_exits_with_3() {
    let o = Command::new(env!("CARGO_BIN_EXE_hermsrg"))
        .args(["verify", "lemma", "--id", "hermcurve2", "--q", "3"])
        .env("HERMSRG_BUDGET_SECS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    assert_eq!(json(&o)["status"], "partial");
}

#[test]
fn wqh_and_unital_checks() {
    let o = hermsrg(&["verify", "wqh", "--n", "4", "--q", "2", "--variant", "line"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["switch_is_involution"], true);
    assert_eq!(r["sizes"]["a1"], 8);
    let o = hermsrg(&["verify", "unital", "--q", "3", "--unital", "bm", "--alpha-idx", "2", "--beta-idx", "0", "--onan"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["stats"]["tangents"], 28);
    assert!(!r["dual_onan"]["config"].is_null());
}

#[test]
fn compare_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let (nu, line, pencil) = (p(dir.path(), "nu.g6"), p(dir.path(), "line.g6"), p(dir.path(), "pencil.g6"));
    hermsrg(&["build", "--n", "4", "--q", "2", "--kind", "nu", "--out", &nu]);
    hermsrg(&["build", "--n", "4", "--q", "2", "--kind", "switched", "--variant", "line", "--out", &line]);
    hermsrg(&["build", "--n", "4", "--q", "2", "--kind", "switched", "--variant", "pencil", "--out", &pencil]);

    let o = hermsrg(&["compare", &nu, &line, "--validate"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["verdict"], "non_isomorphic");
    assert_eq!(r["invariants"]["certificates"][0]["invariant"], "triple_value");

    let o = hermsrg(&["compare", &nu, &pencil, "--mode", "iso"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["verdict"], "isomorphic");
    assert_eq!(r["isomorphism"]["mapping"].as_array().unwrap().len(), 176);

    // invariants alone cannot show two isomorphic graphs are isomorphic
    let o = hermsrg(&["compare", &nu, &pencil, "--mode", "invariants"]);
    assert_eq!(code(&o), 3);
    assert_eq!(json(&o)["verdict"], "undecided");
}

#[test]
fn census_is_deterministic_and_refuses_oversized_scopes() {
    let dir = tempfile::tempdir().unwrap();
    let nu = p(dir.path(), "nu.g6");
    hermsrg(&["build", "--n", "4", "--q", "2", "--kind", "nu", "--out", &nu]);
    let sample = ["census", "--graph", &nu, "--what", "triples", "--scope", "sample", "--count", "3000", "--seed", "9"];
    let a = hermsrg(&sample);
    let b = hermsrg(&sample);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let threads = hermsrg(&[&["--threads", "1"][..], &sample[..]].concat());
    assert_eq!(threads.stdout, a.stdout);

    let o = hermsrg(&["census", "--graph", &nu, "--what", "triples"]);
    let hist = json(&o)["census"]["histogram"].clone();
    assert_eq!(hist, serde_json::json!({"69": 7920, "75": 253440, "77": 142560}));

    let o = hermsrg(&["census", "--graph", &nu, "--what", "triples", "--max-triangles", "1000"]);
    assert_eq!(code(&o), 3);
    assert!(o.stdout.is_empty());

    let o = hermsrg(&["census", "--graph", &nu, "--what", "triples", "--scope", "targeted", "--vertices", "0"]);
    assert_eq!(json(&o)["census"]["triples"], 135 * 102 / 2);

    let small = p(dir.path(), "nu39.g6");
    hermsrg(&["build", "--n", "2", "--q", "3", "--kind", "nu", "--out", &small]);
    let o = hermsrg(&["census", "--graph", &small, "--what", "cliques"]);
    assert_eq!(json(&o)["census"]["counts"], serde_json::json!({"5": 1512, "9": 28}));
}

#[test]
fn replay_detects_changed_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let nu = p(dir.path(), "nu.g6");
    let out = p(dir.path(), "census.json");
    hermsrg(&["build", "--n", "2", "--q", "3", "--kind", "nu", "--out", &nu]);
    hermsrg(&["census", "--graph", &nu, "--what", "cliques", "--out", &out]);
    let manifest = format!("{out}.manifest.json");
    let before = std::fs::read(&manifest).unwrap();
    let o = hermsrg(&["replay", &manifest]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["identical"], true);
    assert_eq!(std::fs::read(&manifest).unwrap(), before);

    // replaying against a different graph changes the census
    hermsrg(&["build", "--n", "2", "--q", "2", "--kind", "nu", "--out", &nu]);
    let o = hermsrg(&["replay", &manifest]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["identical"], false);
}

#[test]
fn usage_errors_exit_with_2() {
    assert_eq!(code(&hermsrg(&[])), 2);
    assert_eq!(code(&hermsrg(&["build", "--n", "4"])), 2);
    assert_eq!(code(&hermsrg(&["--help"])), 0);
}

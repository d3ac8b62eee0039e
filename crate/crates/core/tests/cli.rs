use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn deltavec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deltavec")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let path = path.to_str().unwrap().to_string();
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path]);
    let out = deltavec(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    path
}

#[test]
fn generate_then_delta_reproduces_prediction() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[(&[&str], &[u64])] = &[
        (&["--family", "circulant", "--d", "7", "--m", "4"], &[1, 0, 1, 0, 1, 0, 1, 0]),
        (&["--family", "shifted_standard", "--d", "3", "--e", "2"], &[1, 2, 2, 2]),
        (&["--family", "augmented_standard", "--d", "4", "--e", "1"], &[1, 0, 1, 1, 0]),
        (&["--family", "vol4", "--k", "0", "--l", "2"], &[1, 0, 0, 1, 1, 1, 0, 0]),
        (&["--family", "vol5c", "--k", "0", "--l", "1"], &[1, 0, 1, 0, 1, 1, 0, 1, 0]),
    ];
    for (i, (args, expected)) in cases.iter().enumerate() {
        let path = generate(dir.path(), &format!("p{i}.json"), args);
        let generated: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(generated["family"]["predicted"]["delta"], serde_json::json!(expected));

        let out = deltavec(&["delta", &path]);
        assert!(out.status.success());
        let report = json_of(&out);
        assert_eq!(report["delta"], serde_json::json!(expected));
        assert_eq!(report["methods"], serde_json::json!(["box", "count"]));

        let check = json_of(&deltavec(&["check", &path]));
        assert_eq!(check["properties"]["shifted_symmetric"], true);
        assert_eq!(check["properties"]["trichotomy"]["flags_agree"], true);
        assert_eq!(check["properties"]["audit_failures"], serde_json::json!([]));
    }
}

#[test]
fn check_reports_non_symmetric_shifted_symmetric_vector() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "a.json", &["--family", "augmented_standard", "--d", "3", "--e", "2"]);
    let check = json_of(&deltavec(&["check", &path]));
    let props = &check["properties"];
    assert_eq!(props["shifted_symmetric"], true);
    assert_eq!(props["symmetric"], false);
    assert_eq!(props["trichotomy"]["all_facets_unimodular"], true);
    assert_eq!(props["trichotomy"]["box_strictly_interior"], true);
}

#[test]
fn fractional_coordinates_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"ambient_dim": 2, "vertices": [[0, 0], [0.5, 0], [0, 1]]}"#).unwrap();
    let out = deltavec(&["delta", path.to_str().unwrap()]);
    assert!(!out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    let record: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(record["error"]["kind"], "format");
}

#[test]
fn infeasible_parameters_and_bad_flags_fail_with_records() {
    let out = deltavec(&["generate", "--family", "circulant", "--d", "6", "--m", "3"]);
    assert!(!out.status.success());
    assert_eq!(json_of(&out)["error"]["kind"], "degenerate");

    let out = deltavec(&["delta", "x.json", "--no-such-flag"]);
    assert!(!out.status.success());
    assert_eq!(json_of(&out)["error"]["kind"], "usage");

    let out = deltavec(&["search-realize", "--delta", "1,0,0,1,1,0,1,1,0,0", "--budget", "1"]);
    assert!(!out.status.success());
    assert_eq!(json_of(&out)["error"]["kind"], "budget");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cube.json");
    std::fs::write(
        &path,
        r#"{"ambient_dim":3,"vertices":[[0,0,0],[1,0,0],[0,1,0],[1,1,0],[0,0,1],[1,0,1],[0,1,1],[1,1,1]]}"#,
    )
    .unwrap();
    let out = deltavec(&["facets", path.to_str().unwrap()]);
    assert_eq!(json_of(&out)["error"]["kind"], "not_simplicial");
}

#[test]
fn output_is_byte_for_byte_deterministic() {
    let a = deltavec(&["classify", "--d-max", "10", "--vol", "5"]);
    let b = deltavec(&["classify", "--d-max", "10", "--vol", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let report = json_of(&a);
    assert!(report["classification"].as_array().unwrap().iter().all(|e| e["status"] != "unrealized"));
}

#[test]
fn thread_override_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_deltavec"))
        .args(["search-realize", "--delta", "1,0,1,0"])
        .env("DELTAVEC_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(json_of(&out)["status"], "realized_by_search");

    let out = Command::new(env!("CARGO_BIN_EXE_deltavec"))
        .args(["search-realize", "--delta", "1,0,1,0"])
        .env("DELTAVEC_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["error"]["kind"], "domain");
}

#[test]
fn hvector_and_facets_of_lower_bound_polytope() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "lb.json", &["--family", "simplicial_lb", "--d", "3", "--h1", "3"]);
    let h = json_of(&deltavec(&["hvector", &path]));
    assert_eq!(h["h_vector"], serde_json::json!([1, 3, 3, 1]));
    assert_eq!(h["lower_bound_tight"], true);
    let f = json_of(&deltavec(&["facets", &path]));
    let facets = f["facets"].as_array().unwrap();
    assert_eq!(facets.len(), 8);
    assert!(facets.iter().all(|x| x["normalized_volume"] == 1));
}

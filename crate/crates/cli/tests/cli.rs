use exclusivity_cli::{run, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK};
use serde_json::Value;
use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("exclusivity").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_file(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("exclusivity-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

#[test]
fn bounds_on_bundled_graph() {
    let (code, out, _) = invoke(&["bounds", "--graph", &fixture("canonical_graph.json")]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["alpha"], 3);
    assert_eq!(v["alpha_star"], "7/2");
    assert_eq!(v["no_postquantum_advantage"], true);
    assert!((v["theta"].as_f64().unwrap() - 3.5).abs() < 1e-4);
}

#[test]
fn bounds_on_edgeless_graph() {
    let (code, out, _) = invoke(&["bounds", "--graph", &fixture("edgeless_graph.json"), "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("quantity,value\nalpha,6\n"), "{out}");
    assert!(out.contains("alpha_star,6\n"));
}

#[test]
fn malformed_graph_names_the_field() {
    let path = temp_file("bad_edges.json", r#"{"n": 3, "edges": [[1, 4]]}"#);
    let (code, _, err) = invoke(&["bounds", "--graph", &path]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("`edges`"), "{err}");

    let path = temp_file("bad_n.json", r#"{"n": "ten", "edges": []}"#);
    let (code, _, err) = invoke(&["bounds", "--graph", &path]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("n"), "{err}");

    let (code, _, _) = invoke(&["bounds", "--graph", "/nonexistent/graph.json"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn verify_bundled_realization() {
    let (code, out, _) = invoke(&[
        "verify",
        "--graph",
        &fixture("canonical_graph.json"),
        "--realization",
        &fixture("canonical_realization.json"),
    ]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["quantum_sum"], "7/2");
    assert_eq!(v["orthogonality_violations"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_corrupted_realization() {
    let (code, out, err) = invoke(&["verify", "--realization", &fixture("canonical_realization_corrupted.json")]);
    assert_eq!(code, EXIT_NEGATIVE);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["orthogonality_violations"].as_array().unwrap().len(), 4);
    assert!(err.contains("4 orthogonality violation"));
}

#[test]
fn verify_rejects_index_mismatch() {
    let text = std::fs::read_to_string(fixture("canonical_realization.json")).unwrap();
    let eleven = text.replace("\"10\": [1, 1, -1, 1]", "\"10\": [1, 1, -1, 1],\n    \"11\": [1, 0, 0, 0]");
    assert_ne!(eleven, text);
    let path = temp_file("eleven.json", &eleven);
    let (code, _, err) = invoke(&["verify", "--realization", &path]);
    assert_eq!(code, EXIT_INPUT, "{err}");

    let path = temp_file("bad_entry.json", r#"{"dimension": 2, "state": [1, 0], "vectors": {"1": [1, "x"]}}"#);
    let (code, _, err) = invoke(&["verify", "--realization", &path]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("vectors.1"), "{err}");
}

#[test]
fn simulate_then_certify_from_file() {
    let out_path = temp_file("report.json", "");
    let (code, _, _) = invoke(&["simulate", "--shots", "1000000", "--seed", "17", "--out", &out_path]);
    assert_eq!(code, EXIT_OK);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["seed"], 17);
    assert_eq!(report.as_object().unwrap().keys().next().unwrap(), "seed");
    let sum = report["table"]["sum"].as_f64().unwrap();
    let err = report["table"]["sum_error"].as_f64().unwrap();
    assert!((sum - 3.5).abs() <= 5.0 * err);

    let (code, out, stderr) = invoke(&["certify", "--report", &out_path]);
    assert_eq!(code, EXIT_OK, "{stderr}");
    let eps: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(eps["seed"], 17);
    assert_eq!(eps["verdict"], "certified");
}

#[test]
fn heavy_depolarizing_is_not_certified() {
    let (code, out, err) = invoke(&["certify", "--depolarizing", "0.5", "--shots", "100000"]);
    assert_eq!(code, EXIT_NEGATIVE);
    let eps: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(eps["certified"], false);
    assert!(err.contains("verdict"));
}

#[test]
fn histogram_csv_carries_seed() {
    let (code, out, _) = invoke(&["simulate", "--format", "csv", "--misalign-sigma", "0.12", "--seed", "3"]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("# seed: 3"));
    assert_eq!(lines.next(), Some("bin_left,bin_right,occurrences"));
    let total: u64 = lines.map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
    assert!(total <= 42);
}

#[test]
fn invalid_options_exit_two() {
    for args in [
        &["simulate", "--shots", "0"][..],
        &["simulate", "--depolarizing", "1.5"],
        &["simulate", "--misalign-sigma", "-1"],
        &["simulate", "--shots", "many"],
        &["frobnicate"],
        &["bounds", "--tol", "0"],
        &["bench", "--format", "csv"],
    ] {
        let (code, _, _) = invoke(args);
        assert_eq!(code, EXIT_INPUT, "{args:?}");
    }
    let path = temp_file("not_json.json", "{");
    assert_eq!(invoke(&["certify", "--report", &path]).0, EXIT_INPUT);
    let path = temp_file("no_fields.json", "{}");
    let (code, _, err) = invoke(&["certify", "--report", &path]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("table.sum"), "{err}");
}

#[test]
fn help_documents_file_schemas() {
    let (code, out, _) = invoke(&["simulate", "--help"]);
    assert_eq!(code, EXIT_OK);
    for flag in ["--graph", "--realization", "--shots", "--seed", "--depolarizing", "--misalign-sigma", "--out", "--format"] {
        assert!(out.contains(flag), "{flag}");
    }
    assert!(out.contains("\"edges\""));
}

#[test]
fn binary_runs_are_byte_identical() {
    let bin = env!("CARGO_BIN_EXE_exclusivity");
    let args = ["simulate", "--shots", "20000", "--depolarizing", "0.0677", "--misalign-sigma", "0.1"];
    let a = Command::new(bin).args(args).output().unwrap();
    let b = Command::new(bin).args(args).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let bench = Command::new(bin).args(["bench", "--shots", "1000"]).output().unwrap();
    assert!(bench.status.success());
    assert!(String::from_utf8_lossy(&bench.stderr).contains("bounds:"));
}

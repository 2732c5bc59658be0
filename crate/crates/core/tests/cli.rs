use std::process::{Command, Output};

use serde_json::Value;

fn fanokit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fanokit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn exact(v: &Value, key: &str) -> String {
    v[key]["exact"].as_str().unwrap().to_string()
}

#[test]
fn catalog_lists_models() {
    let o = fanokit(&["catalog", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"P2") && names.contains(&"dP6"));
}

#[test]
fn beta_of_point_on_plane() {
    let o = fanokit(&["beta", "--model", "P2", "--subscheme", "point:0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(exact(&v, "beta"), "0/1");
    assert_eq!(exact(&v, "lct_value"), "2/1");
    assert_eq!(v["verdict"], "CONSISTENT");
}

#[test]
fn model_and_subscheme_files() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("p1p1.json");
    std::fs::write(
        &model,
        r#"{"name": "square", "dim": 2, "rays": [[1,0],[0,1],[-1,0],[0,-1]]}"#,
    )
    .unwrap();
    let sub = dir.path().join("z.json");
    std::fs::write(&sub, r#"{"kind": "thick_point", "chart": 0, "power": 2}"#).unwrap();
    let out = dir.path().join("beta.json");
    let o = fanokit(&[
        "beta",
        "--model",
        model.to_str().unwrap(),
        "--subscheme",
        sub.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["model"], "square");
    assert_eq!(exact(&v, "anticanonical_volume"), "8/1");
}

#[test]
fn ding_from_sequence_file() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("seq.json");
    std::fs::write(&seq, r#"{"ideals": ["unit", "point:0"]}"#).unwrap();
    let o = fanokit(&["ding", "--model", "P1", "--sequence", seq.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["ding"]["exact"].as_str().is_some());
}

#[test]
fn profile_csv_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("profile.csv");
    let o = fanokit(&[
        "volume",
        "--model",
        "P2",
        "--subscheme",
        "point:1",
        "--profile-csv",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("lo,hi,coefficients"));
    assert!(text.contains("0/1,3/1,9/1,0/1,-1/1"));
}

#[test]
fn errors_exit_with_one() {
    let o = fanokit(&["beta", "--model", "no-such-model", "--subscheme", "point:0"]);
    assert_eq!(o.status.code(), Some(1));
    let o = fanokit(&["beta", "--model", "P2", "--subscheme", "point:9"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn thread_count_does_not_change_reports() {
    let one = fanokit(&["--threads", "1", "scan", "--model", "P1xP1"]);
    let many = fanokit(&["--threads", "4", "scan", "--model", "P1xP1"]);
    assert!(one.status.success() && many.status.success());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn acceptance_config_with_missing_model_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let missing = dir.path().join("absent").join("model.json");
    std::fs::write(&cfg, serde_json::json!({ "model": missing }).to_string()).unwrap();
    let o = fanokit(&["test-acceptance", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot read"));
}

#[test]
fn acceptance_with_tiny_k_max_reports_no_stabilization() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out = dir.path().join("summary.json");
    std::fs::write(&cfg, r#"{"k_max": 2, "law_samples": 2, "lct_samples": 2}"#).unwrap();
    let o = fanokit(&[
        "test-acceptance",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert_eq!(
        text.lines().filter(|l| l.starts_with("[FAIL]")).count(),
        2,
        "{text}"
    );
    assert!(text.contains("did not stabilize with k_max = 2"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["all_passed"], false);
}

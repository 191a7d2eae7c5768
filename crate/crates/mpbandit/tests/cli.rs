use std::path::Path;
use std::process::{Command, Output};

fn mpbandit(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpbandit"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn bounds_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b");
    let o = mpbandit(&["bounds", &data("pbm-3x2.json"), "--out", out.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v = json(&out.join("bounds.json"));
    assert_eq!(v["theorem1"], 1.91114);
    assert_eq!(v["lp_bound"], 1.91114);
    assert_eq!(v["theorem3_as_stated"], 3.82228);
    assert_eq!(v["optimal"]["lists"][0], "(1,2)");
    assert!(v["theorem2"].is_null());

    let o = mpbandit(&["bounds", &data("pos-2x2.json"), "--out", out.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v = json(&out.join("bounds.json"));
    assert_eq!(v["theorem2"], 2.41537);
    assert_eq!(v["per_slot_play_bounds"][0][2], 1.95762);
}

#[test]
fn bounds_without_irrelevant_arm_are_zero() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("two.json");
    std::fs::write(&inst, r#"{"kind":"factorized","exam_probs":[1.0,0.4],"arm_means":[0.7,0.2]}"#).unwrap();
    let o = mpbandit(&["bounds", inst.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["lp_bound", "theorem1", "theorem3_as_stated"] {
        assert_eq!(v[key], 0.0, "{key}");
    }
}

#[test]
fn validation_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("bad.json");
    std::fs::write(&inst, r#"{"kind":"factorized","exam_probs":[1.0,0.5],"arm_means":[0.9,1.4,0.2]}"#).unwrap();
    let o = mpbandit(&["bounds", inst.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("arm_means"));
    let o = mpbandit(&["bounds", "missing.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn shape_mismatch_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let exp = dir.path().join("e.json");
    std::fs::write(
        &exp,
        r#"{"instance":{"kind":"per_slot","slot_means":[[0.9,0.5],[0.7,0.6],[0.5,0.3]]},
            "policy":{"name":"algorithm1"},"run":{"horizon":2000,"replications":2,"master_seed":1}}"#,
    )
    .unwrap();
    let o = mpbandit(&["simulate", exp.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn oracle_curve_is_zero_and_overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let exp = dir.path().join("e.json");
    std::fs::write(
        &exp,
        r#"{"instance":{"kind":"factorized","exam_probs":[1.0,0.5],"arm_means":[0.9,0.8,0.6]},
            "policy":{"name":"oracle"},"run":{"horizon":100000,"replications":3,"master_seed":1},
            "output":{"dir":"ignored"}}"#,
    )
    .unwrap();
    let o = mpbandit(
        &["simulate", exp.to_str().unwrap(), "--out", "res", "--horizon", "3000", "--replications", "2"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("res/oracle.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("checkpoint,regret_mean,regret_stderr,regret_over_logt_mean,regret_over_logt_stderr")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows, vec!["1000,0,0,0,0", "1259,0,0,0,0", "1585,0,0,0,0", "1995,0,0,0,0", "2512,0,0,0,0", "3000,0,0,0,0"]);
    let summary = json(&dir.path().join("res/oracle.summary.json"));
    assert_eq!(summary["replications"], 2);
    assert_eq!(summary["counters"]["list_plays_mean"]["(1,2)"], 3000.0);
    assert_eq!(summary["bookkeeping_consistent"], true);
    assert!(!dir.path().join("ignored").exists());
}

#[test]
fn simulate_rejects_multiple_policies() {
    let o = mpbandit(&["simulate", &data("sweep-pbm.json")], Path::new("."));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |out: &str| {
        let o = mpbandit(
            &["sweep", &data("sweep-pbm.json"), "--out", out, "--horizon", "5000", "--seed", "3"],
            dir.path(),
        );
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    };
    run("a");
    run("b");
    for name in ["algorithm1", "ranked_ucb", "perslot", "uniform", "oracle"] {
        let a = std::fs::read(dir.path().join(format!("a/{name}.csv"))).unwrap();
        let b = std::fs::read(dir.path().join(format!("b/{name}.csv"))).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn lemma2_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = mpbandit(&["lemma2", "--m", "2", "--trials", "100", "--seed", "4"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["checks"], 300);
    assert_eq!(v["failed"], 0);
    let o = mpbandit(&["lemma2", "--m", "3", "--trials", "0"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let a = mpbandit(&["lemma2", "--m", "3", "--trials", "100", "--seed", "9"], dir.path());
    let b = mpbandit(&["lemma2", "--m", "3", "--trials", "100", "--seed", "9"], dir.path());
    assert_eq!(a.stdout, b.stdout);
    let o = mpbandit(&["lemma2", "--m", "5", "--trials", "1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

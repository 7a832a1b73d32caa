use std::process::{Command, Output};

fn toeplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toeplab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_is_sorted_and_contains_known_ids() {
    let o = toeplab(&["list"]);
    assert!(o.status.success());
    let ids: Vec<String> = stdout(&o).lines().map(|l| l.split_whitespace().next().unwrap().to_string()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    for id in ["kernel_z_7_2", "crofoot_isometry_E", "eigenfunction_K_z5"] {
        assert!(ids.iter().any(|i| i == id), "{id} missing");
    }
}

#[test]
fn list_json_parses() {
    let o = toeplab(&["list", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_array().unwrap().len() >= 12);
}

#[test]
fn run_pass_exits_zero_with_json_report() {
    let o = toeplab(&["run", "dim_K_zn", "--param", "n=5", "--json", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let r = toeplab::ExperimentReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.status, toeplab::Status::Pass);
    assert_eq!(r.metric("dimension"), Some(5.0));
    assert_eq!(r.seed, toeplab::DEFAULT_SEED);
}

#[test]
fn run_writes_report_file() {
    let path = std::env::temp_dir().join(format!("toeplab-report-{}.json", std::process::id()));
    let o = toeplab(&["run", "pm_one_symbol", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = toeplab::ExperimentReport::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.metric("dimension_128"), Some(0.0));
    std::fs::remove_file(path).ok();
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(toeplab(&["run", "no_such_experiment"]).status.code(), Some(3));
    assert_eq!(toeplab(&["run", "dim_K_zn", "--grid-size", "1000"]).status.code(), Some(3));
    assert_eq!(toeplab(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(toeplab(&["compute", "kernel", "--symbol", "{\"power\":"]).status.code(), Some(3));
    assert_eq!(toeplab(&["compute", "kernel"]).status.code(), Some(3));
}

#[test]
fn help_exits_zero() {
    assert_eq!(toeplab(&["--help"]).status.code(), Some(0));
}

#[test]
fn compute_kernel_of_conjugate_cube() {
    let o = toeplab(&["compute", "kernel", "--symbol", r#"{"conj":{"power":3}}"#]);
    assert_eq!(o.status.code(), Some(0));
    let r = toeplab::ExperimentReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.metric("dimension"), Some(3.0));
}

#[test]
fn compute_maximal_test_on_quartic() {
    let o = toeplab(&[
        "compute",
        "maximal-test",
        "--symbol",
        r#"{"power":-5}"#,
        "--function",
        r#"{"polynomial":[[1,0],[-4,0],[6,0],[-4,0],[1,0]]}"#,
    ]);
    let r = toeplab::ExperimentReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.metric("maximal"), Some(1.0));
}

#[test]
fn compute_factor_of_conjugate_kernel() {
    let spec = r#"{"model_kernel":{"theta":{"zeros":[[0.5,0],[0,0.3]]},"lambda":[0,0],"conjugate":true}}"#;
    let o = toeplab(&["compute", "factor", "--function", spec]);
    assert_eq!(o.status.code(), Some(0));
    let r = toeplab::ExperimentReport::from_json(&stdout(&o)).unwrap();
    assert!(r.metric("residual").unwrap() < 1e-8);
    assert!(r.metric("outer_vs_reproducing_kernel").unwrap() < 1e-6);
}

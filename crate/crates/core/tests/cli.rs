use std::process::Command;

fn lab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cayley-lab")).args(args).output().unwrap()
}

#[test]
fn group_info_reports_degrees() {
    let out = lab(&["group-info", "--group", "sym:4"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["degrees"], serde_json::json!([1, 1, 2, 3, 3]));
    assert_eq!(v["sum_of_squares"], 24);
}

#[test]
fn bounds_for_alt5() {
    let out = lab(&["bounds", "--group", "alt:5"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let root = 60f64.sqrt();
    assert!((v["sigma"].as_f64().unwrap() - root).abs() < 1e-12);
    assert!((v["w_certificate"].as_f64().unwrap() - root).abs() < 1e-8 * root);
    assert!((v["v"].as_f64().unwrap() - 120f64.sqrt()).abs() < 1e-12);
}

#[test]
fn estimate_for_trivial_group_is_half_normal_mean() {
    let out = lab(&["estimate", "--group", "trivial", "--trials", "100000", "--seed", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let mean = v["mean"].as_f64().unwrap();
    let se = v["std_error"].as_f64().unwrap();
    let half_normal = (2.0 / std::f64::consts::PI).sqrt();
    assert!((mean - half_normal).abs() <= 3.0 * se, "{mean} ± {se}");
    assert_eq!(v["seed"], 3);
}

#[test]
fn spencer_brute_force_and_local() {
    let out = lab(&["spencer", "--group", "cyclic:8", "--method", "brute"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["norm"].as_f64().unwrap() - 12f64.sqrt()).abs() < 1e-9);
    let out = lab(&["spencer", "--group", "alt:5", "--method", "local", "--budget", "50", "--seed", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["ratio"].as_f64().unwrap() <= 3.0);
    assert_eq!(v["signs"].as_array().unwrap().len(), 60);
}

#[test]
fn sweep_writes_csv_file_and_uses_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sweep.csv");
    let cache = dir.path().join("cache");
    let args = [
        "theorem1-sweep", "--family", "alternating", "--sizes", "5,4", "--trials", "50", "--format", "csv",
        "--out", out_path.to_str().unwrap(), "--cache-dir", cache.to_str().unwrap(),
    ];
    assert!(lab(&args).status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("group,n,mean,std_error,m,ratio_sqrt_n,ratio_sqrt_nlogn"));
    assert!(lines.next().unwrap().starts_with("alt:4,12,"));
    assert!(lines.next().unwrap().starts_with("alt:5,60,"));
    assert!(cache.join("alt_5.json").exists());
    let first = text.clone();
    assert!(lab(&args).status.success());
    assert_eq!(std::fs::read_to_string(&out_path).unwrap(), first);
}

#[test]
fn exit_codes() {
    assert_eq!(lab(&["group-info", "--group", "nope:3"]).status.code(), Some(2));
    assert_eq!(lab(&["group-info", "--group", "sym:8"]).status.code(), Some(2));
    assert_eq!(lab(&["estimate", "--group", "alt:5", "--trials", "1"]).status.code(), Some(2));
    assert_eq!(lab(&["spencer", "--group", "alt:4", "--method", "abelian"]).status.code(), Some(2));
    assert_eq!(lab(&["bogus-command"]).status.code(), Some(2));
}

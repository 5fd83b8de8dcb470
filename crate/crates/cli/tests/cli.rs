use std::path::Path;
use std::process::{Command, Output};

fn qnet(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qnet"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn triangle_distribution_has_64_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = qnet(&["distribution", "--triangle", "--u2", "0.8", "--output", "d.csv"], dir.path());
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("d.csv")).unwrap();
    assert_eq!(text.lines().count(), 64);
    assert!(String::from_utf8_lossy(&out.stderr).contains("total probability: 1 (exact)"));
}

#[test]
fn qutrit_distribution_is_uniform_on_t_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let out = qnet(&["distribution", "--qutrit-example"], dir.path());
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 729);
    assert!(text.lines().any(|l| l == "t0,t0,t0,1/27"));
}

#[test]
fn five_cycle_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = qnet(&["distribution", "--cycle", "5", "--u2", "0.5"], dir.path());
    assert_eq!(stdout(&out).lines().count(), 1024);
    let out = qnet(&["distribution", "--cycle", "3", "--u2", "3/5", "--format", "json"], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.is_object());
}

#[test]
fn certify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = qnet(&["certify", "--triangle", "--u2", "0.8", "--output", "r.json"], dir.path());
    assert_eq!(out.status.code(), Some(10));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["verdict"], "nonlocal");
    assert_eq!(report["marginal_lp"]["status"], "infeasible");
    assert!(report["marginal_lp"]["farkas"].is_object());

    assert_eq!(qnet(&["certify", "--triangle", "--u2", "1/2"], dir.path()).status.code(), Some(0));

    let out = qnet(&["certify", "--qutrit-example"], dir.path());
    assert_eq!(out.status.code(), Some(10));
    assert!(stdout(&out).contains("-1/30"));
}

#[test]
fn threshold_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = qnet(&["threshold", "--at", "1/2,1e-4"], dir.path());
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda0_sq,u_max_sq");
    let half: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((half - 0.785003263244).abs() < 1e-9);
    assert!(lines[2].ends_with(",none"));

    let out = qnet(&["threshold", "--steps", "5"], dir.path());
    assert_eq!(stdout(&out).lines().count(), 6);
}

#[test]
fn models_and_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let out = qnet(&["model", "--uniform-chi"], dir.path());
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["total_variation"], 0.0);

    let out = qnet(&["model", "--boundary", "--output", "m.json"], dir.path());
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("m.json")).unwrap()).unwrap();
    assert!(v["total_variation"].as_f64().unwrap() < 1e-6);

    assert_eq!(qnet(&["model", "--appendix-d", "--u2", "0.95"], dir.path()).status.code(), Some(11));

    let run = |name: &str| {
        let out = qnet(
            &["model", "--uniform-chi", "--samples", "500", "--seed", "9", "--samples-output", name],
            dir.path(),
        );
        assert!(out.status.success());
        std::fs::read(dir.path().join(name)).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 500);
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qnet(&["distribution", "--u2", "0.8"], dir.path()).status.code(), Some(2));
    assert_eq!(qnet(&["distribution", "--triangle", "--u2", "abc"], dir.path()).status.code(), Some(2));
    let out = qnet(&["distribution", "--cycle", "12", "--u2", "0.8", "--cap", "1000"], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

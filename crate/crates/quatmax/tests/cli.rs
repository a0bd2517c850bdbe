//! End-to-end tests of the `quatmax` binary: exit codes, file outputs and
//! the documented CSV/JSON formats.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_quatmax")
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("quatmax-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

#[test]
fn verify_suite_passes_and_writes_report() {
    let dir = tmp_dir("verify");
    let out = dir.join("algebra.json");
    let output = run(&["verify", "algebra", "--seed", "7", "--out", out.to_str().unwrap()]);
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("[PASS] algebra.basis-table"));
    assert!(stdout.contains("suite algebra: PASS"));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["suite"], "algebra");
    assert_eq!(report["seed"], 7);
    assert_eq!(report["passed"], true);
    assert!(report["checks"].as_array().unwrap().len() >= 5);
    assert!(report["timestamp_unix"].as_u64().unwrap() > 0);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let output = run(&["verify", "does-not-exist"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn failing_check_exits_one_with_location() {
    let output = run(&[
        "verify",
        "algebra",
        "--tolerance",
        "algebra.associativity=1e-30",
    ]);
    assert_eq!(output.status.code(), Some(1));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("[FAIL] algebra.associativity"));
    assert!(stdout.contains("worst at"), "failure lines carry a location");
}

#[test]
fn bad_profile_is_a_configuration_error() {
    let output = run(&["verify", "identities", "--profile", "warp-core:q=9"]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("unknown profile"));
}

fn read_rows(path: &Path) -> Vec<String> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines().map(str::to_string).collect()
}

#[test]
fn generate_fundamental_marks_excluded_nodes_invalid() {
    let dir = tmp_dir("fund");
    let out = dir.join("fund");
    let output = run(&["generate", "fundamental", "--c", "1", "--out", out.to_str().unwrap()]);
    assert!(output.status.success());

    let rows = read_rows(&dir.join("fund.csv"));
    assert_eq!(
        rows[0],
        "x1,x2,x3,q0_re,q0_im,q1_re,q1_im,q2_re,q2_im,q3_re,q3_im,valid"
    );
    assert_eq!(rows.len(), 1 + 33 * 33 * 33);
    // the origin lies inside the default exclusion ball
    let origin = rows.iter().find(|r| r.starts_with("0,0,0,")).unwrap();
    assert!(origin.ends_with(",0"), "origin row must be invalid: {origin}");
    // a corner node is valid and carries data
    let corner = rows.iter().find(|r| r.starts_with("-2,-2,-2,")).unwrap();
    assert!(corner.ends_with(",1"));

    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("fund.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["residual_report"]["grid"]["exclusion"]["radius"], 0.1);
    let linf = meta["residual_report"]["residuals"]["R1"]["linf"].as_f64().unwrap();
    assert!(linf <= 1e-8, "sweep linf {linf}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn generate_fundamental_without_exclusion_is_rejected() {
    let dir = tmp_dir("fund-bad");
    let out = dir.join("bad");
    let output = run(&[
        "generate",
        "fundamental",
        "--grid",
        "o=-2,-2,-2,h=0.125,n=33",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("singular"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn generate_darboux_hits_the_expected_origin_value() {
    let dir = tmp_dir("darb");
    let out = dir.join("darb");
    let output = run(&[
        "generate",
        "darboux",
        "--profile",
        "planewave-phi:c=0,0,1",
        "--psi",
        "wave:c=1,0,0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let rows = read_rows(&dir.join("darb.csv"));
    // at the origin the field is i (i1 - i3): q1 = i, q3 = -i
    let origin = rows.iter().find(|r| r.starts_with("0,0,0,")).unwrap();
    assert_eq!(origin, &"0,0,0,0,0,0,1,0,0,0,-1,1");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn generate_planewave_pair_has_machine_zero_residuals() {
    let dir = tmp_dir("pw");
    let out = dir.join("pw");
    let output = run(&["generate", "planewave", "--out", out.to_str().unwrap()]);
    assert!(output.status.success());
    assert!(dir.join("pw.E.csv").exists());
    assert!(dir.join("pw.H.csv").exists());
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("pw.meta.json")).unwrap()).unwrap();
    for key in ["s1", "s2", "s3", "s4"] {
        let linf = meta["residual_report"]["residuals"][key]["linf"].as_f64().unwrap();
        assert!(linf <= 1e-13, "{key} linf {linf}");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn convergence_reports_second_order_and_exact_cases() {
    let dir = tmp_dir("conv");
    let out = dir.join("conv.json");
    let output = run(&[
        "convergence",
        "d",
        "--h",
        "0.25",
        "--levels",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    for o in report["orders"].as_array().unwrap() {
        let o = o.as_f64().unwrap();
        assert!((1.8..=2.2).contains(&o), "order {o}");
    }

    let output = run(&["convergence", "linear", "--h", "0.25", "--levels", "2"]);
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("exact at rounding level"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn thread_cap_env_var_is_honored() {
    let output = Command::new(bin())
        .env("QUATMAX_THREADS", "2")
        .args(["verify", "algebra", "--seed", "3"])
        .output()
        .expect("binary runs");
    assert!(output.status.success());

    let output = Command::new(bin())
        .env("QUATMAX_THREADS", "not-a-number")
        .args(["verify", "algebra"])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(2));
}

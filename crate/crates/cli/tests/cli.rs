use std::process::{Command, Output};

use proptest::prelude::*;

fn sseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sseq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    sseq(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(sseq(args).stdout).expect("utf-8")
}

#[test]
fn passing_target_exits_zero() {
    let out = stdout(&["verify", "thm-8.10", "--prime", "5"]);
    assert!(out.starts_with("thm-8.10 PASS"));
    assert!(out.contains("rank=48"));
    assert!(out.contains("euler=0"));
    assert_eq!(code(&["verify", "thm-8.10", "--prime", "5"]), 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&["verify", "thm-7.1", "--prime", "4"]), 2);
    assert_eq!(code(&["verify", "thm-7.1", "--prime", "3"]), 2);
    assert_eq!(code(&["verify", "no-such-target"]), 2);
    assert_eq!(code(&["verify", "thm-8.10", "--window", "3"]), 2);
    assert_eq!(code(&["verify", "thm-8.10", "--window", "9:1"]), 2);
    assert_eq!(code(&["tables", "tate:cp:1", "--page", "x"]), 2);
    assert_eq!(code(&["tables", "tate:cp:9"]), 2);
    assert_eq!(code(&["poincare", "nope"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn small_primes_accepted_for_bokstedt() {
    assert_eq!(code(&["verify", "oracle-hh", "--prime", "3"]), 0);
    assert_eq!(
        code(&["verify", "bokstedt:zp", "--prime", "3", "--window", "0:30"]),
        0
    );
}

#[test]
fn structured_output_has_schema() {
    let out = stdout(&[
        "verify",
        "prop-8.2",
        "--format",
        "structured",
        "--window",
        "9:60",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["prime"], 5);
    assert_eq!(v["results"][0]["id"], "prop-8.2");
    assert_eq!(v["results"][0]["status"], "pass");
}

#[test]
fn poincare_examples() {
    let k = stdout(&["poincare", "k", "--prime", "5", "--window", "-1:20"]);
    let nine: u64 = k
        .lines()
        .find_map(|l| l.strip_prefix("9 "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(nine >= 1);
    assert!(stdout(&["poincare", "thh:v1:ellmodp", "--window", "0:9"])
        .lines()
        .any(|l| l == "9 1"));
    let tc = stdout(&[
        "poincare",
        "tc",
        "--window",
        "-1:-1",
        "--format",
        "structured",
    ]);
    let v: serde_json::Value = serde_json::from_str(&tc).unwrap();
    assert_eq!(
        v["results"][0]["details"]["series"],
        serde_json::json!([[-1, 1]])
    );
}

#[test]
fn tables_print_pages() {
    let e3 = stdout(&["tables", "tate:cp:1", "--page", "3", "--window", "0:12"]);
    let mut lines = e3.lines();
    assert!(lines.next().unwrap().starts_with("# tate:cp:1 E^3"));
    assert!(lines.all(|l| l.starts_with("s=") && l.contains(" dim=") && l.contains(" basis=")));
    let inf = stdout(&["tables", "bokstedt:zp", "--page", "inf", "--window", "0:12"]);
    assert!(inf.starts_with("# bokstedt:zp E^inf"));
    assert!(inf.contains("s=0 t=0 dim=1 basis=1"));
}

#[test]
fn empty_window_prints_header_only() {
    let out = stdout(&["tables", "tate:cp:1", "--window", "5:1"]);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with('#'));
}

#[test]
fn conditional_result_does_not_fail_the_run() {
    let out = stdout(&["verify", "cor-k-lp"]);
    assert!(out.contains("(conditional)"));
    assert_eq!(code(&["verify", "cor-k-lp"]), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn reruns_are_byte_identical(lo in -30i64..0, w in 10i64..40, structured in any::<bool>()) {
        let win = format!("{lo}:{}", lo + w);
        let fmt = if structured { "structured" } else { "text" };
        let a = sseq(&["tables", "hofix:cp:1", "--page", "inf", "--window", &win, "--format", fmt]);
        let b = sseq(&["tables", "hofix:cp:1", "--page", "inf", "--window", &win, "--format", fmt, "--sequential"]);
        prop_assert!(a.status.success());
        prop_assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn verify_reruns_are_byte_identical() {
    let args = [
        "verify",
        "prop-6.8",
        "--window",
        "-20:60",
        "--format",
        "structured",
    ];
    assert_eq!(sseq(&args).stdout, sseq(&args).stdout);
}

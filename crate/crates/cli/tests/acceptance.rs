//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Every comparison is exact (tolerance 0). Runtime limits are wall-clock
//! seconds per criterion.

use std::io::Write;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config as RunnerConfig, RngAlgorithm, TestError, TestRng, TestRunner};
use serde_json::Value;
use sseq_core::graded_algebra::Window;
use sseq_core::instances::bokstedt::{bokstedt_algebra, bokstedt_e2, bokstedt_rule, Ring};
use sseq_core::instances::tate::{
    closed_form, cp_tate_run, cyclic_algebra, d2_rule, s_range, Flavor, Stage,
};
use sseq_core::invariants::{
    d_squared, leibniz_defect, monomial_from_choices, monotonicity_witnesses, unit_invariant,
};
use sseq_core::par::ExecMode;
use sseq_core::spectral_sequence::Page;

const TOLERANCE: u64 = 0;

struct Run {
    code: i32,
    stdout: Vec<u8>,
    doc: Value,
}

fn sseq(args: &[&str]) -> Run {
    let mut all: Vec<&str> = args.to_vec();
    all.extend(["--format", "structured"]);
    let out = Command::new(env!("CARGO_BIN_EXE_sseq"))
        .args(&all)
        .output()
        .expect("binary runs");
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        doc,
    }
}

fn result(run: &Run, i: usize) -> &Value {
    &run.doc["results"][i]
}

fn passed(run: &Run) -> bool {
    run.code == 0
        && run.doc["results"]
            .as_array()
            .is_some_and(|rs| !rs.is_empty() && rs.iter().all(|r| r["status"] == "pass"))
}

fn item_labels(r: &Value) -> Vec<String> {
    r["details"]["items"]
        .as_array()
        .map(|v| {
            v.iter()
                .map(|i| i["label"].as_str().unwrap_or("").to_string())
                .collect()
        })
        .unwrap_or_default()
}

fn item_passes(r: &Value, label: &str) -> bool {
    r["details"]["items"].as_array().is_some_and(|v| {
        v.iter()
            .any(|i| i["label"] == label && i["status"] == "pass")
    })
}

fn detail(r: &Value, key: &str) -> String {
    r["details"][key].as_str().unwrap_or("").to_string()
}

struct Outcome {
    id: u32,
    name: &'static str,
    ok: bool,
    elapsed: Duration,
    limit: Duration,
    note: String,
}

fn criterion(
    id: u32,
    name: &'static str,
    limit_s: u64,
    f: impl FnOnce() -> (bool, String),
) -> Outcome {
    let start = Instant::now();
    let (ok, note) = f();
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit_s);
    let ok = ok && elapsed <= limit;
    let o = Outcome {
        id,
        name,
        ok,
        elapsed,
        limit,
        note,
    };
    let _ = writeln!(
        std::io::stderr(),
        "criterion {:>2} {} {} ({:.1}s, limit {}s){}",
        o.id,
        if o.ok { "PASS" } else { "FAIL" },
        o.name,
        o.elapsed.as_secs_f64(),
        o.limit.as_secs(),
        if o.note.is_empty() {
            String::new()
        } else {
            format!(" {}", o.note)
        }
    );
    o
}

fn c1() -> (bool, String) {
    let r = sseq(&["verify", "oracle-hh", "--prime", "5"]);
    (
        passed(&r) && item_labels(result(&r, 0)).len() == 2,
        String::new(),
    )
}

fn c2() -> (bool, String) {
    let r = sseq(&["verify", "bokstedt", "--prime", "5", "--window", "0:60"]);
    let res = result(&r, 0);
    let rings = ["zp", "zlocal", "ell", "ellmodp"]
        .iter()
        .all(|g| item_passes(res, &format!("{g} E^inf")));
    (passed(&r) && rings, String::new())
}

fn c3() -> (bool, String) {
    let r = sseq(&["verify", "primitivity", "--prime", "5"]);
    let res = result(&r, 0);
    let classes = [
        "epsilon0",
        "epsilon1",
        "lambda1",
        "lambda2",
        "mu0",
        "mu1",
        "mu2",
        "epsilonbar1",
    ];
    let all = classes.iter().all(|c| item_passes(res, c));
    let alpha = item_passes(res, "alpha forcing") && item_passes(res, "unique lift");
    (passed(&r) && all && alpha, String::new())
}

fn c4() -> (bool, String) {
    let r = sseq(&[
        "verify",
        "poincare-identity",
        "--prime",
        "5",
        "--window",
        "0:30",
    ]);
    let res = result(&r, 0);
    let rings = ["zp", "ell", "ellmodp"].iter().all(|g| item_passes(res, g));
    (
        passed(&r) && rings && detail(res, "max_degree") == "30",
        String::new(),
    )
}

fn c5() -> (bool, String) {
    let r = sseq(&["verify", "prop-6.8", "--prime", "5", "--window", "-20:120"]);
    let res = result(&r, 0);
    let pages = ["E^3", "E^43", "E^51", "E^inf"]
        .iter()
        .all(|l| item_passes(res, l));
    let deg8 = item_passes(res, "E^inf in degree 8");
    (passed(&r) && pages && deg8, String::new())
}

fn cyclic(id: &str) -> (bool, String) {
    let r = sseq(&["verify", id, "--prime", "5", "--window", "-40:160"]);
    let res = result(&r, 0);
    let labels = item_labels(res);
    let both = [1, 2]
        .iter()
        .all(|n| labels.iter().any(|l| l == &format!("n={n} E^inf")));
    let relabel = [1, 2].iter().all(|n| {
        labels
            .iter()
            .any(|l| l.starts_with(&format!("n={n} ")) && l.contains("agrees"))
    });
    (
        passed(&r) && both && relabel,
        format!("items={}", labels.len()),
    )
}

fn c6() -> (bool, String) {
    let (ok, note) = cyclic("thm-7.1");
    let r = sseq(&[
        "verify", "thm-7.1", "--prime", "5", "--window", "-40:160", "--n", "1",
    ]);
    let same = item_passes(result(&r, 0), "n=1 pages equal the C_p pages");
    (ok && same, note)
}

fn c7() -> (bool, String) {
    cyclic("thm-7.4")
}

fn c8() -> (bool, String) {
    let mut ok = true;
    let mut cases = Vec::new();
    for id in ["lemma-7.8", "lemma-7.9"] {
        let r = sseq(&["verify", id, "--prime", "5", "--window", "-200:400"]);
        let res = result(&r, 0);
        ok &= passed(&r) && item_passes(res, "n=1") && item_passes(res, "n=2");
        cases.push(format!("{id}:{}", item_labels(res).len()));
    }
    (ok, cases.join(" "))
}

fn c9() -> (bool, String) {
    let r = sseq(&["verify", "thm-7.12", "--prime", "5", "--window", "-40:160"]);
    let res = result(&r, 0);
    let both = item_passes(res, "tate u-free E^inf stabilizes")
        && item_passes(res, "hofix u-free E^inf stabilizes");
    (passed(&r) && both, String::new())
}

fn c10() -> (bool, String) {
    let mut ok = true;
    for id in ["prop-8.2", "prop-8.6", "thm-8.8"] {
        ok &= passed(&sseq(&["verify", id, "--prime", "5", "--window", "9:200"]));
    }
    let k5 = sseq(&["verify", "thm-8.10", "--prime", "5"]);
    let k7 = sseq(&["verify", "thm-8.10", "--prime", "7"]);
    ok &= passed(&k5) && passed(&k7);
    ok &= detail(result(&k5, 0), "rank") == "48" && detail(result(&k5, 0), "euler") == "0";
    ok &= detail(result(&k7, 0), "rank") == "92" && detail(result(&k7, 0), "euler") == "0";
    let lp = sseq(&["verify", "cor-k-lp", "--prime", "5"]);
    ok &= item_passes(result(&lp, 0), "v2-localized series equal K");
    (ok, String::new())
}

fn runner(cases: u32) -> TestRunner {
    let config = RunnerConfig {
        failure_persistence: None,
        ..RunnerConfig::with_cases(cases)
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn err<T: std::fmt::Debug>(e: TestError<T>) -> String {
    format!("{e:?}")
}

fn property_suite() -> std::result::Result<(), String> {
    let mut big = runner(48);
    let raw = || prop::collection::vec(0i64..40, 12);
    let flavor = prop_oneof![Just(Flavor::Tate), Just(Flavor::Hofix)];

    big.run(&(flavor.clone(), 1u32..3, raw()), |(f, n, r)| {
        let alg = cyclic_algebra(f, 5, n).unwrap();
        prop_assert!(d_squared(&alg, &d2_rule(f), &monomial_from_choices(&alg, &r)).is_zero());
        Ok(())
    })
    .map_err(err)?;
    big.run(&raw(), |r| {
        let alg = bokstedt_algebra(5, Ring::Zp, 200).unwrap();
        prop_assert!(
            d_squared(&alg, &bokstedt_rule(5), &monomial_from_choices(&alg, &r)).is_zero()
        );
        Ok(())
    })
    .map_err(err)?;
    big.run(&(flavor.clone(), raw(), raw()), |(f, a, b)| {
        let alg = cyclic_algebra(f, 5, 1).unwrap();
        let (a, b) = (
            monomial_from_choices(&alg, &a),
            monomial_from_choices(&alg, &b),
        );
        prop_assert!(leibniz_defect(&alg, &d2_rule(f), &a, &b).is_zero());
        Ok(())
    })
    .map_err(err)?;
    big.run(&(raw(), raw()), |(a, b)| {
        let alg = bokstedt_algebra(5, Ring::Ell, 200).unwrap();
        let (a, b) = (
            monomial_from_choices(&alg, &a),
            monomial_from_choices(&alg, &b),
        );
        prop_assert!(leibniz_defect(&alg, &bokstedt_rule(5), &a, &b).is_zero());
        Ok(())
    })
    .map_err(err)?;
    let mut small = runner(12);
    small
        .run(&(flavor, 1u32..5, -30i64..30), |(f, c, lo)| {
            let alg = Arc::new(cyclic_algebra(f, 5, 1).unwrap());
            let (s_lo, s_hi) = s_range(f, 5, 1, lo, lo + 25).unwrap();
            let page = closed_form(f, 5, 1, Stage::E2, &alg)
                .unwrap()
                .page(&alg, Window::new(lo, lo + 25, s_lo, s_hi))
                .unwrap();
            prop_assert!(unit_invariant(&page, &d2_rule(f), c, ExecMode::default()).unwrap());
            Ok(())
        })
        .map_err(err)?;
    small
        .run(&(1u32..5, 10i64..60), |(c, hi)| {
            let page = bokstedt_e2(5, Ring::EllModP, 0, hi).unwrap();
            prop_assert!(unit_invariant(&page, &bokstedt_rule(5), c, ExecMode::default()).unwrap());
            Ok(())
        })
        .map_err(err)?;
    let run = cp_tate_run(5, -20, 120, ExecMode::default()).map_err(|e| e.to_string())?;
    let pages: Vec<&Page> = run.checks.iter().map(|c| &c.page).collect();
    let w = monotonicity_witnesses(&pages);
    if !w.is_empty() {
        return Err(format!("monotonicity: {}", w[0]));
    }
    Ok(())
}

fn c11() -> (bool, String) {
    if let Err(e) = property_suite() {
        return (false, e);
    }
    let runs = [
        vec!["verify", "prop-6.8", "--window", "-20:120"],
        vec!["tables", "tate:cp:1", "--page", "3", "--window", "-20:60"],
        vec!["poincare", "k", "--window", "-1:200"],
    ];
    for args in runs {
        let a = sseq(&args);
        let b = sseq(&args);
        if a.stdout != b.stdout || a.stdout.is_empty() {
            return (false, format!("rerun differs: {}", args.join(" ")));
        }
    }
    (true, format!("tolerance={TOLERANCE}"))
}

#[test]
fn acceptance() {
    let outcomes = [
        criterion(1, "HH oracle agreement", 30, c1),
        criterion(2, "Bokstedt E^inf for four rings on [0,60]", 60, c2),
        criterion(3, "primitivity suite and alpha forcing", 10, c3),
        criterion(4, "comodule Poincare identity to degree 30", 30, c4),
        criterion(5, "C_p Tate run on [-20,120]", 120, c5),
        criterion(6, "C_{p^n} Tate runs n=1,2 on [-40,160]", 600, c6),
        criterion(
            7,
            "C_{p^n} homotopy fixed point runs n=1,2 on [-40,160]",
            600,
            c7,
        ),
        criterion(8, "exhaustive degree checks n=1,2 on [-200,400]", 300, c8),
        criterion(9, "circle stabilization on [-40,160]", 60, c9),
        criterion(10, "TC and K endgame", 120, c10),
        criterion(11, "engine property suite and determinism", 300, c11),
    ];
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.ok).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

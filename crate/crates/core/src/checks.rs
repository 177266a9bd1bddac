//! Named verification targets and instance pages, dispatched by id.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fp_linalg::is_prime;
use crate::graded_algebra::{Algebra, Generator, GeneratorKind, PoincareSeries, Window};
use crate::instances::bokstedt::{
    bokstedt_e2, bokstedt_run, e_infinity_series, thh_homology_series, Ring,
};
use crate::instances::degree_checks::{lower_filtration_check, unique_source_check};
use crate::instances::hh::{hh_bruteforce, hh_closed_form_single};
use crate::instances::tate::{
    basis_in_degree, circle_page, circle_stabilization, cp_tate_run, relabel_check, run_propagate,
    run_verify, Flavor, RunReport,
};
use crate::instances::v1::{poincare_identity, v1_thh_series};
use crate::par::ExecMode;
use crate::report::CheckResult;
use crate::spectral_sequence::{compare_pages, Page};
use crate::steenrod::{alpha_forcing, v1_thh_classes, v1_thh_comodule};
use crate::tc;

#[derive(Clone, Debug)]
pub struct Config {
    pub p: u32,
    pub lo: i64,
    pub hi: i64,
    pub n: Option<u32>,
    pub mode: ExecMode,
}

impl Config {
    pub fn new(p: u32, window: Option<(i64, i64)>) -> Config {
        let pp = p as i64;
        let (lo, hi) = window.unwrap_or((-2 * pp * pp, 5 * pp * pp));
        Config {
            p,
            lo,
            hi,
            n: None,
            mode: ExecMode::default(),
        }
    }

    fn ns(&self) -> Vec<u32> {
        self.n.map_or(vec![1, 2], |n| vec![n])
    }

    /// The window restricted to degrees above 2p-2.
    fn upper(&self) -> (i64, i64) {
        (self.lo.max(2 * self.p as i64 - 1), self.hi)
    }
}

pub const VERIFY_IDS: &[&str] = &[
    "oracle-hh",
    "bokstedt",
    "primitivity",
    "poincare-identity",
    "prop-6.8",
    "thm-7.1",
    "thm-7.4",
    "thm-7.12",
    "lemma-7.8",
    "lemma-7.9",
    "prop-8.2",
    "prop-8.6",
    "thm-8.8",
    "thm-8.10",
    "cor-k-lp",
];

fn canonical(id: &str) -> &str {
    match id {
        "cor-7.2" => "thm-7.1",
        "cor-7.5" => "thm-7.4",
        "prop-8.4" => "prop-8.6",
        other => other,
    }
}

fn low_prime_ok(id: &str) -> bool {
    id == "oracle-hh" || id == "bokstedt" || id.starts_with("bokstedt:")
}

/// Usage errors: unknown ids, bad primes, empty windows.
pub fn validate(id: &str, cfg: &Config) -> Result<()> {
    let id = canonical(id);
    let known = id == "all"
        || VERIFY_IDS.contains(&id)
        || parse_instance(id).is_ok()
        || id.starts_with("thh:v1:")
        || tc::presentation_ids().contains(&id);
    if !known {
        return Err(Error::UnknownId(id.into()));
    }
    let min = if low_prime_ok(id) { 3 } else { 5 };
    if cfg.p < min || !is_prime(cfg.p as u64) {
        return Err(Error::NotPrime(cfg.p as u64));
    }
    if cfg.lo > cfg.hi {
        return Err(Error::OutOfRange(format!(
            "empty window {}:{}",
            cfg.lo, cfg.hi
        )));
    }
    if cfg.n == Some(0) || cfg.n.is_some_and(|n| n > 3) {
        return Err(Error::OutOfRange("n must be 1, 2 or 3".into()));
    }
    Ok(())
}

/// Runs a verification target. Computation errors become failing items.
pub fn verify(id: &str, cfg: &Config) -> Result<Vec<CheckResult>> {
    validate(id, cfg)?;
    let id = canonical(id);
    if id == "all" {
        return VERIFY_IDS.iter().map(|i| verify_one(i, cfg)).collect();
    }
    if let Ok(inst) = parse_instance(id) {
        return Ok(vec![guard(id, instance_check(&inst, cfg))]);
    }
    Ok(vec![verify_one(id, cfg)?])
}

fn verify_one(id: &str, cfg: &Config) -> Result<CheckResult> {
    let r = match id {
        "oracle-hh" => oracle_hh(cfg),
        "bokstedt" => bokstedt(cfg),
        "primitivity" => primitivity(cfg),
        "poincare-identity" => poincare_ident(cfg),
        "prop-6.8" => cp_tate(cfg),
        "thm-7.1" => cyclic(Flavor::Tate, id, cfg),
        "thm-7.4" => cyclic(Flavor::Hofix, id, cfg),
        "thm-7.12" => circle(cfg),
        "lemma-7.8" => lemma(id, cfg, true),
        "lemma-7.9" => lemma(id, cfg, false),
        "prop-8.2" => prop_rh(cfg),
        "prop-8.6" => fixed_points(cfg),
        "thm-8.8" => tc_check(cfg),
        "thm-8.10" => k_check(cfg),
        "cor-k-lp" => k_lp(cfg),
        _ => return Err(Error::UnknownId(id.into())),
    };
    Ok(guard(id, r))
}

fn guard(id: &str, r: Result<CheckResult>) -> CheckResult {
    r.unwrap_or_else(|e| {
        let mut c = CheckResult::new(id);
        c.item("computation", false, e.to_string());
        c
    })
}

fn series_note(a: &PoincareSeries, b: &PoincareSeries) -> String {
    match a.first_difference(b) {
        None => String::new(),
        Some((n, x, y)) => format!("first difference in degree {n}: {x} vs {y}"),
    }
}

fn oracle_hh(cfg: &Config) -> Result<CheckResult> {
    let mut c = CheckResult::new("oracle-hh");
    let max = 12;
    for (name, deg, kind) in [
        (
            "E(x), |x|=2p-1",
            2 * cfg.p as i64 - 1,
            GeneratorKind::Exterior,
        ),
        ("P(x), |x|=2", 2, GeneratorKind::Polynomial),
    ] {
        let a = Algebra::new(cfg.p, vec![Generator::new("x", 0, deg, kind)])?;
        let brute = hh_bruteforce(&a, max)?;
        let closed = hh_closed_form_single(cfg.p, deg, max)?;
        c.item(
            name,
            brute == closed,
            format!("bidegrees={} max_total={max}", closed.len()),
        );
    }
    Ok(c)
}

fn bokstedt(cfg: &Config) -> Result<CheckResult> {
    let mut c = CheckResult::new("bokstedt");
    let (lo, hi) = (cfg.lo.max(0), cfg.hi);
    for ring in Ring::ALL {
        let run = bokstedt_run(cfg.p, ring, lo, hi, cfg.mode)?;
        c.item(
            format!("{} E^inf", ring.id()),
            run.comparison.ok(),
            format!("checked={}", run.comparison.checked),
        );
        let a = e_infinity_series(&run, lo, hi);
        let b = thh_homology_series(cfg.p, ring, lo, hi)?;
        c.item(
            format!("{} abutment series", ring.id()),
            a == b,
            series_note(&a, &b),
        );
    }
    c.detail("window", format!("{lo}:{hi}"));
    Ok(c)
}

fn primitivity(cfg: &Config) -> Result<CheckResult> {
    let mut c = CheckResult::new("primitivity");
    let co = v1_thh_comodule(cfg.p)?;
    for (name, x) in v1_thh_classes(&co) {
        c.item(name, co.is_primitive(&x)?, "");
    }
    let a = alpha_forcing(&co)?;
    let alphas: Vec<String> = a.primitive_alphas.iter().map(|x| x.to_string()).collect();
    c.item(
        "alpha forcing",
        a.primitive_alphas == vec![cfg.p - 1],
        format!("primitive for alpha in {{{}}}", alphas.join(",")),
    );
    c.item(
        "unique lift",
        a.lift_kernel_dim == 0,
        format!("kernel_dim={}", a.lift_kernel_dim),
    );
    Ok(c)
}

fn poincare_ident(cfg: &Config) -> Result<CheckResult> {
    let mut c = CheckResult::new("poincare-identity");
    let max = cfg.hi.clamp(0, 30);
    for ring in [Ring::Zp, Ring::Ell, Ring::EllModP] {
        let id = poincare_identity(cfg.p, ring, max)?;
        c.item(ring.id(), id.holds(), series_note(&id.lhs, &id.rhs));
    }
    c.detail("max_degree", max);
    Ok(c)
}

fn push_run(c: &mut CheckResult, prefix: &str, run: &RunReport) {
    for s in &run.checks[1..] {
        c.item(
            format!("{prefix}{}", s.label),
            s.comparison.ok(),
            format!("checked={}", s.comparison.checked),
        );
    }
    for (label, w) in &run.well_defined {
        c.item(
            format!("{prefix}well-defined {label}"),
            w.witnesses.is_empty(),
            format!("checked={}", w.checked),
        );
    }
}

fn cp_tate(cfg: &Config) -> Result<CheckResult> {
    let mut c = CheckResult::new("prop-6.8");
    let run = cp_tate_run(cfg.p, cfg.lo, cfg.hi, cfg.mode)?;
    push_run(&mut c, "", &run);
    if cfg.lo <= 8 && 8 <= cfg.hi {
        let basis = basis_in_degree(run.last(), 8);
        let pp = cfg.p as i64;
        let want = format!("eb1*l2*t^{}", pp * pp);
        let ok = basis.len() == 2 && basis.contains(&want);
        c.item(
            "E^inf in degree 8",
            ok,
            format!("basis=[{}]", basis.join(",")),
        );
    }
    Ok(c)
}

fn cyclic(flavor: Flavor, id: &str, cfg: &Config) -> Result<CheckResult> {
    let mut c = CheckResult::new(id);
    for n in cfg.ns() {
        let run = run_propagate(flavor, cfg.p, n, cfg.lo, cfg.hi, None, cfg.mode)?;
        push_run(&mut c, &format!("n={n} "), &run);
        let direct = run_verify(flavor, cfg.p, n, cfg.lo, cfg.hi, cfg.mode)?;
        c.item(
            format!("n={n} single-step runs"),
            direct.ok(),
            format!("steps={}", direct.checks.len() - 1),
        );
        for (label, cmp) in relabel_check(&run)? {
            c.item(
                format!("n={n} {label} agrees for n={}", n + 1),
                cmp.ok(),
                format!("checked={}", cmp.checked),
            );
        }
        if flavor == Flavor::Tate && n == 1 {
            let cp = cp_tate_run(cfg.p, cfg.lo, cfg.hi, cfg.mode)?;
            let mut ok = run.checks.len() == cp.checks.len();
            for (a, b) in run.checks.iter().zip(&cp.checks) {
                ok &= compare_pages(&a.page, &b.page)?.ok();
            }
            c.item(
                "n=1 pages equal the C_p pages",
                ok,
                format!("pages={}", cp.checks.len()),
            );
        }
    }
    Ok(c)
}

fn circle(cfg: &Config) -> Result<CheckResult> {
    let mut c = CheckResult::new("thm-7.12");
    for flavor in [Flavor::Tate, Flavor::Hofix] {
        let r = circle_stabilization(flavor, cfg.p, cfg.lo, cfg.hi, 4)?;
        c.item(
            format!("{} u-free E^inf stabilizes", flavor.id()),
            r.ok(),
            format!(
                "n_probe={} confirmed={} kmax={}",
                r.n_probe.map_or("none".into(), |n| n.to_string()),
                r.confirmed,
                r.kmax
            ),
        );
    }
    let g = tc::g_check(cfg.p, cfg.lo, cfg.hi, tc::DEFAULT_KMAX)?;
    c.item(
        "G bijective on families",
        g.bijective.ok(),
        format!(
            "classes={} {}",
            g.source_classes,
            g.bijective.witnesses.join("; ")
        ),
    );
    Ok(c)
}

fn lemma(id: &str, cfg: &Config, lower: bool) -> Result<CheckResult> {
    let mut c = CheckResult::new(id);
    for n in cfg.ns() {
        let r = if lower {
            lower_filtration_check(cfg.p, n, cfg.lo, cfg.hi)?
        } else {
            unique_source_check(cfg.p, n, cfg.lo, cfg.hi)?
        };
        let note = format!(
            "cases={} {}",
            r.cases,
            r.witnesses
                .iter()
                .take(5)
                .cloned()
                .collect::<Vec<_>>()
                .join("; ")
        );
        c.item(format!("n={n}"), r.ok(), note.trim_end().to_string());
    }
    c.detail("multipliers", format!("{}:{}", cfg.lo, cfg.hi));
    Ok(c)
}

fn clause(c: &mut CheckResult, name: &str, r: &tc::ClauseReport) {
    c.item(
        name,
        r.ok(),
        format!("checked={} {}", r.checked, r.witnesses.join("; "))
            .trim_end()
            .to_string(),
    );
}

fn prop_rh(cfg: &Config) -> Result<CheckResult> {
    let mut c = CheckResult::new("prop-8.2");
    let (lo, hi) = cfg.upper();
    let r = tc::rh_map_check(cfg.p, lo, hi, tc::DEFAULT_KMAX)?;
    clause(&mut c, "(a) identity on E(eb1,l2) P(tm2)", &r.a);
    clause(&mut c, "(b) onto E(l2) t^j P(tm2)", &r.b);
    clause(&mut c, "(c) onto E(eb1) t^j l2 P(tm2)", &r.c);
    clause(&mut c, "(d) zero elsewhere", &r.d);
    c.detail("window", format!("{lo}:{hi}"));
    Ok(c)
}

fn fixed_points(cfg: &Config) -> Result<CheckResult> {
    let mut c = CheckResult::new("prop-8.6");
    let (lo, hi) = cfg.upper();
    let dec = tc::tf_decompose(cfg.p, lo, hi, tc::DEFAULT_KMAX)?;
    c.item(
        "A+B+C+D decomposition",
        true,
        format!("classes={}", dec.len()),
    );
    let comp = tc::r_composite_check(cfg.p, &dec)?;
    clause(&mut c, "R identity on A", &comp.identity_on_a);
    clause(&mut c, "R maps B_k+1, C_k+1 onto B_k, C_k", &comp.tower);
    clause(&mut c, "R kernel on B_k, C_k", &comp.kernel);
    clause(&mut c, "R zero on B_2, C_2, D", &comp.zero);
    let fp = tc::r_fixed_points(cfg.p, lo, hi, tc::DEFAULT_KMAX)?;
    c.item(
        "towers stabilize in window",
        fp.k0.is_some_and(|k| k < tc::DEFAULT_KMAX),
        format!("k0={}", fp.k0.map_or("none".into(), |k| k.to_string())),
    );
    c.item("lim B = E(l2){t^d} P(v2)", fp.lim_b_matches, "");
    c.item("lim C = E(eb1){t^dp l2} P(v2)", fp.lim_c_matches, "");
    c.item("cok = E(eb1,l2) P(v2)", fp.a_matches, "");
    let ker = tc::ker_presentation(cfg.p).series(lo, hi);
    c.item("ker series", fp.ker == ker, series_note(&fp.ker, &ker));
    c.detail("window", format!("{lo}:{hi}"));
    Ok(c)
}

fn tc_check(cfg: &Config) -> Result<CheckResult> {
    let mut c = CheckResult::new("thm-8.8");
    let (lo, hi) = cfg.upper();
    let (_, ex) = tc::exactness_check(cfg.p, lo, hi, tc::DEFAULT_KMAX)?;
    let note = ex
        .failures
        .iter()
        .take(5)
        .map(|f| format!("n={} tc={} ker={} cok={}", f.0, f.1, f.2, f.3))
        .collect::<Vec<_>>()
        .join("; ");
    c.item(
        "dim TC_n = dim ker_n + dim cok_n+1",
        ex.failures.is_empty(),
        format!("degrees={} {note}", ex.checked)
            .trim_end()
            .to_string(),
    );
    let pp = cfg.p as i64;
    let low = tc::tc_presentation(cfg.p).series(-1, 2 * pp - 2);
    let e = PoincareSeries::from_counts(-1, 2 * pp - 2, [(-1, 1), (0, 1), (2 * pp - 2, 1)]);
    c.item(
        "degrees -1..2p-2 agree with E(d, eb1)",
        low == e,
        series_note(&low, &e),
    );
    let m = tc::tc_presentation(cfg.p);
    c.detail("rank", m.rank());
    c.detail("euler", m.euler());
    c.detail("window", format!("{lo}:{hi}"));
    Ok(c)
}

fn k_check(cfg: &Config) -> Result<CheckResult> {
    let mut c = CheckResult::new("thm-8.10");
    let pp = cfg.p as i64;
    let r = tc::k_check(cfg.p, cfg.hi.max(5 * pp * pp))?;
    c.item(
        "rank",
        r.rank == r.expected_rank,
        format!("rank={} expected={}", r.rank, r.expected_rank),
    );
    c.item("euler", r.euler == 0, format!("euler={}", r.euler));
    c.item("rows parity balanced", r.rows_balanced, "");
    c.item("TC = K + desuspended E(eb1)", r.tc_splits, "");
    c.item("TC in degrees -1..2p-2", r.low_degrees, "");
    for (row, n) in &r.row_counts {
        c.detail(format!("row {row}"), n);
    }
    c.detail("rank", r.rank);
    c.detail("euler", r.euler);
    Ok(c)
}

fn k_lp(cfg: &Config) -> Result<CheckResult> {
    let mut c = CheckResult::new("cor-k-lp");
    c.conditional = true;
    let r = tc::k_lp_checks(cfg.p);
    let pp = cfg.p as i64;
    c.item("v2-localized series equal K", r.localized_equal, "");
    c.item(
        "rank",
        r.rank as i64 == 2 * pp * pp - 2 * pp + 8,
        format!("rank={}", r.rank),
    );
    c.item("euler", r.euler == 0, format!("euler={}", r.euler));
    let input: Vec<String> = r
        .k_zp_input
        .iter()
        .map(|(d, n)| format!("{d}:{n}"))
        .collect();
    c.detail("K(Z/p) input", input.join(","));
    Ok(c)
}

/// A spectral sequence instance named on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Bokstedt(Ring),
    Cyclic(Flavor, u32),
    Circle(Flavor),
}

pub fn parse_instance(id: &str) -> Result<Instance> {
    let parts: Vec<&str> = id.split(':').collect();
    let flavor = |s: &str| match s {
        "tate" => Some(Flavor::Tate),
        "hofix" => Some(Flavor::Hofix),
        _ => None,
    };
    match parts.as_slice() {
        ["bokstedt", r] => Ok(Instance::Bokstedt(Ring::parse(r)?)),
        [f, "cp", n] => match (flavor(f), n.parse::<u32>()) {
            (Some(fl), Ok(n)) if (1..=3).contains(&n) => Ok(Instance::Cyclic(fl, n)),
            _ => Err(Error::UnknownId(id.into())),
        },
        [f, "s1"] => flavor(f)
            .map(Instance::Circle)
            .ok_or_else(|| Error::UnknownId(id.into())),
        _ => Err(Error::UnknownId(id.into())),
    }
}

fn instance_check(inst: &Instance, cfg: &Config) -> Result<CheckResult> {
    match inst {
        Instance::Bokstedt(ring) => {
            let mut c = CheckResult::new(format!("bokstedt:{}", ring.id()));
            let run = bokstedt_run(cfg.p, *ring, cfg.lo.max(0), cfg.hi, cfg.mode)?;
            c.item(
                "E^inf",
                run.comparison.ok(),
                format!("checked={}", run.comparison.checked),
            );
            Ok(c)
        }
        Instance::Cyclic(flavor, n) => {
            let mut c = CheckResult::new(format!("{}:cp:{n}", flavor.id()));
            let run = run_propagate(*flavor, cfg.p, *n, cfg.lo, cfg.hi, None, cfg.mode)?;
            push_run(&mut c, "", &run);
            Ok(c)
        }
        Instance::Circle(flavor) => {
            let mut c = CheckResult::new(format!("{}:s1", flavor.id()));
            let r = circle_stabilization(*flavor, cfg.p, cfg.lo, cfg.hi, 4)?;
            c.item("stabilization", r.ok(), format!("n_probe={:?}", r.n_probe));
            Ok(c)
        }
    }
}

/// Which page to print.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PageSel {
    R(u64),
    Inf,
}

impl PageSel {
    pub fn parse(s: &str) -> Result<PageSel> {
        if s == "inf" {
            return Ok(PageSel::Inf);
        }
        match s.parse::<u64>() {
            Ok(r) if r >= 2 => Ok(PageSel::R(r)),
            _ => Err(Error::OutOfRange(format!("page {s}"))),
        }
    }
}

/// The page E^r of an instance on the configured window.
pub fn instance_page(id: &str, sel: PageSel, cfg: &Config) -> Result<Page> {
    validate(id, cfg)?;
    let inst = parse_instance(id)?;
    match inst {
        Instance::Bokstedt(ring) => {
            let lo = cfg.lo.max(0);
            match sel {
                PageSel::R(r) if r < cfg.p as u64 => bokstedt_e2(cfg.p, ring, lo, cfg.hi),
                _ => Ok(bokstedt_run(cfg.p, ring, lo, cfg.hi, cfg.mode)?.e_inf),
            }
        }
        Instance::Cyclic(flavor, n) => {
            let run = run_propagate(flavor, cfg.p, n, cfg.lo, cfg.hi, None, cfg.mode)?;
            let pick = run
                .checks
                .iter()
                .rev()
                .find(|s| match sel {
                    PageSel::Inf => true,
                    PageSel::R(r) => s.r <= r,
                })
                .ok_or_else(|| Error::OutOfRange("no such page".into()))?;
            Ok(pick.page.clone())
        }
        Instance::Circle(flavor) => match sel {
            PageSel::Inf => circle_page(flavor, cfg.p, cfg.lo, cfg.hi),
            PageSel::R(_) => Err(Error::Unsupported(
                "circle instances provide E^inf only".into(),
            )),
        },
    }
}

/// Degree-to-dimension series of a presentation or V(1)_*THH.
pub fn series(id: &str, cfg: &Config) -> Result<PoincareSeries> {
    validate(id, cfg)?;
    if let Some(r) = id.strip_prefix("thh:v1:") {
        return v1_thh_series(cfg.p, Ring::parse(r)?, cfg.lo, cfg.hi);
    }
    Ok(tc::presentation(id, cfg.p)?.series(cfg.lo, cfg.hi))
}

/// Shared helper for circle checks in tests.
pub fn circle_algebra_arc(flavor: Flavor, p: u32) -> Result<Arc<Algebra>> {
    Ok(Arc::new(crate::instances::tate::circle_algebra(flavor, p)?))
}

/// Window helper used by the tables command.
pub fn full_window(cfg: &Config) -> Window {
    Window::total(cfg.lo, cfg.hi)
}

//! Tate and homotopy fixed point spectral sequences for THH(l/p) over the
//! cyclic groups C_{p^n} and over the circle.
//!
//! Pages are described by closed forms: unions of summands, each summand a
//! per-generator condition on exponents. Differentials are family rules on
//! monomials.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded_algebra::{Algebra, Element, Generator, GeneratorKind, Monomial, Window};
use crate::numerics::{pow_i64, rho_i64, vp_i64};
use crate::par::ExecMode;
use crate::spectral_sequence::{
    compare_pages, turn_page_with, verify_step, well_definedness_check, DiffRule, Page,
    PageComparison, WellDefinedness,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Tate,
    Hofix,
}

impl Flavor {
    pub fn id(self) -> &'static str {
        match self {
            Flavor::Tate => "tate",
            Flavor::Hofix => "hofix",
        }
    }
}

fn rho(p: u32, k: i64) -> Result<i64> {
    rho_i64(p, k)
}

fn val(p: u32, x: i64) -> Option<u32> {
    vp_i64(p, x).ok()
}

/// The periodicity generator: t for Tate, m2 for homotopy fixed points.
fn laurent_name(f: Flavor) -> &'static str {
    match f {
        Flavor::Tate => "t",
        Flavor::Hofix => "m2",
    }
}

/// E(u_n) (x) E(e0) (x) P_p(m0) (x) E(eb1, l2) (x) P(t^{+-1}, tm2) as an
/// ambient algebra; the module part is cut out by the closed forms.
pub fn cyclic_algebra(flavor: Flavor, p: u32, n: u32) -> Result<Algebra> {
    use GeneratorKind::*;
    let pp = p as i64;
    let mut gens = vec![
        Generator::new(format!("u{n}"), -1, 0, Exterior),
        Generator::new("e0", 0, 1, Exterior),
        Generator::new("m0", 0, 2, Truncated(p)),
        Generator::new("eb1", 0, 2 * pp - 1, Exterior),
        Generator::new("l2", 0, 2 * pp * pp - 1, Exterior),
    ];
    match flavor {
        Flavor::Tate => {
            gens.push(Generator::new("t", -2, 0, Laurent));
            gens.push(Generator::new("tm2", -2, 2 * pp * pp, Polynomial).grouped());
        }
        Flavor::Hofix => {
            gens.push(Generator::new("tm2", -2, 2 * pp * pp, Polynomial).grouped());
            gens.push(Generator::new("m2", 0, 2 * pp * pp, Laurent));
        }
    }
    Algebra::new(p, gens)
}

/// The circle versions: no u, and only the generators that survive.
pub fn circle_algebra(flavor: Flavor, p: u32) -> Result<Algebra> {
    use GeneratorKind::*;
    let pp = p as i64;
    let mut gens = vec![
        Generator::new("eb1", 0, 2 * pp - 1, Exterior),
        Generator::new("l2", 0, 2 * pp * pp - 1, Exterior),
    ];
    match flavor {
        Flavor::Tate => {
            gens.push(Generator::new("t", -2, 0, Laurent));
            gens.push(Generator::new("tm2", -2, 2 * pp * pp, Polynomial).grouped());
        }
        Flavor::Hofix => {
            gens.push(Generator::new("m0", 0, 2, Truncated(p)));
            gens.push(Generator::new("tm2", -2, 2 * pp * pp, Polynomial).grouped());
            gens.push(Generator::new("m2", 0, 2 * pp * pp, Laurent));
        }
    }
    Algebra::new(p, gens)
}

/// Condition on one exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpRule {
    Any,
    Between(i64, i64),
    Residues {
        modulus: i64,
        set: Vec<i64>,
    },
    /// Nonzero with exactly this p-adic valuation.
    Valuation(u32),
    Multiple(i64),
}

impl ExpRule {
    pub fn below(h: i64) -> ExpRule {
        ExpRule::Between(0, h - 1)
    }

    pub fn one() -> ExpRule {
        ExpRule::Between(1, 1)
    }

    pub fn accepts(&self, p: u32, e: i64) -> bool {
        match self {
            ExpRule::Any => true,
            ExpRule::Between(a, b) => *a <= e && e <= *b,
            ExpRule::Residues { modulus, set } => set.contains(&e.rem_euclid(*modulus)),
            ExpRule::Valuation(v) => e != 0 && val(p, e) == Some(*v),
            ExpRule::Multiple(m) => e % m == 0,
        }
    }
}

/// A tensor product of one-generator pieces; unlisted generators have
/// exponent zero.
#[derive(Clone, Debug)]
pub struct Summand {
    pub label: String,
    pub rules: Vec<(usize, ExpRule)>,
}

impl Summand {
    fn rule(&self, g: usize) -> ExpRule {
        self.rules
            .iter()
            .find(|(i, _)| *i == g)
            .map(|(_, r)| r.clone())
            .unwrap_or(ExpRule::Between(0, 0))
    }

    pub fn contains(&self, p: u32, m: &Monomial) -> bool {
        (0..m.0.len()).all(|g| self.rule(g).accepts(p, m.0[g]))
    }
}

#[derive(Clone, Debug)]
pub struct ClosedForm {
    pub label: String,
    pub r: u64,
    pub summands: Vec<Summand>,
}

impl ClosedForm {
    pub fn matching(&self, p: u32, m: &Monomial) -> usize {
        self.summands.iter().filter(|s| s.contains(p, m)).count()
    }

    pub fn contains(&self, p: u32, m: &Monomial) -> bool {
        self.matching(p, m) > 0
    }

    fn caps(&self, alg: &Algebra) -> Vec<(usize, i64, i64)> {
        let mut out = Vec::new();
        for (g, gen) in alg.gens().iter().enumerate() {
            if gen.kind == GeneratorKind::Laurent {
                continue;
            }
            let mut hull: Option<(i64, i64)> = None;
            let mut bounded = true;
            for s in &self.summands {
                match s.rule(g) {
                    ExpRule::Between(a, b) if a <= b => {
                        hull = Some(hull.map_or((a, b), |(x, y)| (x.min(a), y.max(b))));
                    }
                    ExpRule::Between(_, _) => {}
                    _ => bounded = false,
                }
            }
            if bounded {
                let (a, b) = hull.unwrap_or((1, 0));
                out.push((g, a, b));
            }
        }
        out
    }

    /// The page spanned by the summands in a window. Errors if two summands
    /// share a monomial.
    pub fn page(&self, alg: &Arc<Algebra>, w: Window) -> Result<Page> {
        let p = alg.p();
        let keep = |m: &Monomial| self.contains(p, m);
        let cells = alg.enumerate_capped(&w, &self.caps(alg), &keep)?;
        for v in cells.values() {
            for m in v {
                if self.matching(p, m) > 1 {
                    return Err(Error::Overlap(format!(
                        "{} in {}",
                        alg.format_monomial(m),
                        self.label
                    )));
                }
            }
        }
        let mut page = Page::closed_form(alg.clone(), self.r, Window::new(1, 0, 0, 0), &|_| true)?;
        page.window = w;
        page.cells = cells;
        Ok(page)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    E2,
    E3,
    /// After the odd family of index m.
    Odd(u32),
    /// After the even family of index m.
    Even(u32),
    Inf,
}

impl Stage {
    pub fn r(self, p: u32, n: u32) -> Result<u64> {
        Ok(match self {
            Stage::E2 => 2,
            Stage::E3 => 3,
            Stage::Odd(m) => (2 * rho(p, 2 * m as i64 - 1)? + 1) as u64,
            Stage::Even(m) => (2 * rho(p, 2 * m as i64)? + 1) as u64,
            Stage::Inf => (2 * rho(p, 2 * n as i64)? + 2) as u64,
        })
    }

    pub fn name(self, p: u32, n: u32) -> Result<String> {
        Ok(match self {
            Stage::Inf => "E^inf".to_string(),
            s => format!("E^{}", s.r(p, n)?),
        })
    }
}

/// Generator positions in the cyclic layout.
#[derive(Clone, Copy, Debug)]
struct Cols {
    u: usize,
    e0: usize,
    m0: usize,
    eb1: usize,
    l2: usize,
    tm2: usize,
    per: usize,
}

impl Cols {
    fn of(alg: &Algebra, flavor: Flavor) -> Cols {
        let u = alg
            .gens()
            .iter()
            .position(|g| g.name.starts_with('u'))
            .unwrap_or(usize::MAX);
        Cols {
            u,
            e0: alg.gen_index("e0").unwrap_or(usize::MAX),
            m0: alg.gen_index("m0").unwrap_or(usize::MAX),
            eb1: alg.idx("eb1"),
            l2: alg.idx("l2"),
            tm2: alg.idx("tm2"),
            per: alg.idx(laurent_name(flavor)),
        }
    }
}

fn summand(label: impl Into<String>, rules: Vec<(usize, ExpRule)>) -> Summand {
    Summand {
        label: label.into(),
        rules: rules
            .into_iter()
            .filter(|(g, _)| *g != usize::MAX)
            .collect(),
    }
}

/// F_p{t^{-i} | 0<i<p} (x) P(t^{+-modulus}) as residues.
fn negative_residues(p: u32, modulus: i64) -> ExpRule {
    ExpRule::Residues {
        modulus,
        set: (1..p as i64).map(|i| modulus - i).collect(),
    }
}

fn module_summands(c: Cols, p: u32, free: &[usize]) -> Vec<Summand> {
    use ExpRule::*;
    let base: Vec<(usize, ExpRule)> = free.iter().map(|&g| (g, Any)).collect();
    let with = |extra: Vec<(usize, ExpRule)>| {
        let mut v = base.clone();
        v.extend(extra);
        v
    };
    vec![
        summand(
            "e0^d m0^i",
            with(vec![(c.e0, Any), (c.m0, Between(0, p as i64 - 2))]),
        ),
        summand(
            "m0^(p-1)",
            with(vec![(c.m0, Between(p as i64 - 1, p as i64 - 1))]),
        ),
        summand("eb1", with(vec![(c.eb1, ExpRule::one())])),
    ]
}

/// Closed form of a page of the C_{p^n} spectral sequence.
pub fn closed_form(
    flavor: Flavor,
    p: u32,
    n: u32,
    stage: Stage,
    alg: &Algebra,
) -> Result<ClosedForm> {
    use ExpRule::*;
    let c = Cols::of(alg, flavor);
    let pp = p as i64;
    let pw = |e: i64| pow_i64(p, e as u32);
    let mut out: Vec<Summand> = Vec::new();
    let tate = flavor == Flavor::Tate;
    // Families: B_k and C_k for Tate start at k = 2, for hofix at k = 1.
    let k0: u32 = if tate { 2 } else { 1 };
    let b_height = |k: i64| -> Result<i64> {
        if tate {
            rho(p, 2 * k - 3)
        } else {
            rho(p, 2 * k - 1)
        }
    };
    let c_height = |k: i64| -> Result<i64> {
        if tate {
            rho(p, 2 * k - 2)
        } else {
            rho(p, 2 * k)
        }
    };
    let low = |modulus: i64| -> Summand {
        if tate {
            summand(
                "E(u,l2) Fp{t^-i} P(t^+-)",
                vec![
                    (c.u, Any),
                    (c.l2, Any),
                    (c.per, negative_residues(p, modulus)),
                ],
            )
        } else {
            summand(
                "E(u,l2) Fp{m0^i} P(m2^+-1)",
                vec![
                    (c.u, Any),
                    (c.l2, Any),
                    (c.m0, Between(1, pp - 1)),
                    (c.per, Any),
                ],
            )
        }
    };
    let fam_b = |k: u32| -> Result<Summand> {
        Ok(summand(
            format!("B{k}"),
            vec![
                (c.u, Any),
                (c.l2, Any),
                (c.per, Valuation(2 * k - 2)),
                (c.tm2, ExpRule::below(b_height(k as i64)?)),
            ],
        ))
    };
    let fam_c = |k: u32| -> Result<Summand> {
        Ok(summand(
            format!("C{k}"),
            vec![
                (c.u, Any),
                (c.eb1, Any),
                (c.l2, ExpRule::one()),
                (c.per, Valuation(2 * k - 1)),
                (c.tm2, ExpRule::below(c_height(k as i64)?)),
            ],
        ))
    };
    let main = |step: i64| {
        summand(
            format!("E(u,eb1,l2) P(per^{step}, tm2)"),
            vec![
                (c.u, Any),
                (c.eb1, Any),
                (c.l2, Any),
                (c.per, Multiple(step)),
                (c.tm2, Any),
            ],
        )
    };
    match stage {
        Stage::E2 => out.extend(module_summands(c, p, &[c.u, c.l2, c.per, c.tm2])),
        Stage::E3 => {
            if !tate {
                out.push(low(1));
            }
            out.push(main(1));
        }
        Stage::Odd(m) | Stage::Even(m) => {
            if m < 1 || m > n {
                return Err(Error::OutOfRange(format!("stage index {m} for n = {n}")));
            }
            let odd = matches!(stage, Stage::Odd(_));
            out.push(low(if tate && odd && m == 1 { pp } else { pp * pp }));
            for k in k0..=m {
                out.push(fam_b(k)?);
            }
            let c_top = if odd { m - 1 } else { m };
            for k in k0..=c_top {
                out.push(fam_c(k)?);
            }
            out.push(main(if odd {
                pw(2 * m as i64 - 1)
            } else {
                pw(2 * m as i64)
            }));
        }
        Stage::Inf => {
            out.push(low(pp * pp));
            for k in k0..=n {
                out.push(fam_b(k)?);
                out.push(fam_c(k)?);
            }
            let top = if tate {
                rho(p, 2 * n as i64 - 2)? + 1
            } else {
                rho(p, 2 * n as i64)? + 1
            };
            out.push(summand(
                "E(eb1,l2) P(per^{p^2n}) P_h(tm2)",
                vec![
                    (c.eb1, Any),
                    (c.l2, Any),
                    (c.per, Multiple(pw(2 * n as i64))),
                    (c.tm2, ExpRule::below(top)),
                ],
            ));
        }
    }
    Ok(ClosedForm {
        label: format!("{}(C_p^{n}) {}", flavor.id(), stage.name(p, n)?),
        r: stage.r(p, n)?,
        summands: out,
    })
}

/// The four pages of the C_p Tate spectral sequence, written out directly
/// in terms of p.
pub fn cp_tate_forms(p: u32, alg: &Algebra) -> Result<Vec<ClosedForm>> {
    use ExpRule::*;
    let c = Cols::of(alg, Flavor::Tate);
    let pp = p as i64;
    let p2 = pp * pp;
    let low = |m: i64| {
        summand(
            "E(u1,l2) Fp{t^-i} P(t^+-)",
            vec![(c.u, Any), (c.l2, Any), (c.per, negative_residues(p, m))],
        )
    };
    let main = |m: i64| {
        summand(
            "E(u1,eb1,l2) P(t^+-, tm2)",
            vec![
                (c.u, Any),
                (c.eb1, Any),
                (c.l2, Any),
                (c.per, Multiple(m)),
                (c.tm2, Any),
            ],
        )
    };
    Ok(vec![
        ClosedForm {
            label: "E^3".into(),
            r: 3,
            summands: vec![main(1)],
        },
        ClosedForm {
            label: format!("E^{}", 2 * p2 - 2 * pp + 3),
            r: (2 * p2 - 2 * pp + 3) as u64,
            summands: vec![low(pp), main(pp)],
        },
        ClosedForm {
            label: format!("E^{}", 2 * p2 + 1),
            r: (2 * p2 + 1) as u64,
            summands: vec![low(p2), main(p2)],
        },
        ClosedForm {
            label: "E^inf".into(),
            r: (2 * p2 + 2) as u64,
            summands: vec![
                low(p2),
                summand(
                    "E(eb1,l2) P(t^+-p^2)",
                    vec![(c.eb1, Any), (c.l2, Any), (c.per, Multiple(p2))],
                ),
            ],
        },
    ])
}

/// The module-level d^2: d(e0) = t m0, resp. tm2 m2^-1 m0.
pub fn d2_rule(flavor: Flavor) -> DiffRule {
    DiffRule::derivation(2, "d^2(e0 m0^(i-1)) = t m0^i", move |alg, g, e| {
        if alg.gens()[g].name != "e0" || e != 1 {
            return Element::zero();
        }
        match flavor {
            Flavor::Tate => alg.elem(&[("t", 1), ("m0", 1)]),
            Flavor::Hofix => alg.elem(&[("tm2", 1), ("m2", -1), ("m0", 1)]),
        }
    })
}

/// Odd family k: eb1 per^J (v_p(J) = 2k-2) hits per^{J'} tm2^{c+h}.
pub fn odd_family(flavor: Flavor, p: u32, k: u32, alg: &Algebra) -> Result<DiffRule> {
    let c = Cols::of(alg, flavor);
    let k = k as i64;
    let r = 2 * rho(p, 2 * k - 1)?;
    let shift = pow_i64(p, 2 * k as u32) - pow_i64(p, 2 * k as u32 - 1);
    let (shift, dc) = match flavor {
        Flavor::Tate => (shift, rho(p, 2 * k - 3)?),
        Flavor::Hofix => (-shift, rho(p, 2 * k - 1)?),
    };
    let v = (2 * k - 2) as u32;
    Ok(DiffRule::family(
        r as u64,
        format!("odd family k={k}"),
        move |_, m| {
            let x = &m.0;
            if nonzero(x, c.e0) || nonzero(x, c.m0) || x[c.eb1] != 1 || val(p, x[c.per]) != Some(v)
            {
                return Element::zero();
            }
            let mut y = x.clone();
            y[c.eb1] = 0;
            y[c.per] += shift;
            y[c.tm2] += dc;
            Element::from_monomial(Monomial(y))
        },
    ))
}

/// Even family k: per^J (v_p(J) = 2k-1) hits l2 per^{J'} tm2^{c+h}.
pub fn even_family(flavor: Flavor, p: u32, k: u32, alg: &Algebra) -> Result<DiffRule> {
    let c = Cols::of(alg, flavor);
    let k = k as i64;
    let pp = p as i64;
    let r = 2 * rho(p, 2 * k)?;
    let (shift, dc) = match flavor {
        Flavor::Tate => (pow_i64(p, 2 * k as u32), rho(p, 2 * k - 2)?),
        Flavor::Hofix => (-pow_i64(p, 2 * k as u32), rho(p, 2 * k)?),
    };
    let v = (2 * k - 1) as u32;
    Ok(DiffRule::family(
        r as u64,
        format!("even family k={k}"),
        move |_, m| {
            let x = &m.0;
            if nonzero(x, c.e0) || nonzero(x, c.m0) || x[c.l2] != 0 {
                return Element::zero();
            }
            let j = x[c.per];
            let base = if flavor == Flavor::Tate && j % pp != 0 {
                // t^-i t^{J+i}: the t^-i factor is a cycle and t^-i tm2 is zero.
                if x[c.tm2] > 0 || dc > 0 {
                    return Element::zero();
                }
                j + (-j).rem_euclid(pp)
            } else {
                j
            };
            if val(p, base) != Some(v) {
                return Element::zero();
            }
            let mut y = x.clone();
            y[c.l2] = 1;
            y[c.per] += shift;
            y[c.tm2] += dc;
            Element::from_monomial(Monomial(y))
        },
    ))
}

/// The final odd-length differential on u_n per^{-+p^{2n}}.
pub fn final_rule(flavor: Flavor, p: u32, n: u32, alg: &Algebra) -> Result<DiffRule> {
    let c = Cols::of(alg, flavor);
    let n = n as i64;
    let r = 2 * rho(p, 2 * n)? + 1;
    let step = pow_i64(p, 2 * n as u32);
    let (shift, dc) = match flavor {
        Flavor::Tate => (step, rho(p, 2 * n - 2)? + 1),
        Flavor::Hofix => (-step, rho(p, 2 * n)? + 1),
    };
    Ok(DiffRule::family(
        r as u64,
        "final odd-length differential",
        move |_, m| {
            let x = &m.0;
            if x[c.u] != 1 || nonzero(x, c.e0) || nonzero(x, c.m0) || x[c.per] % step != 0 {
                return Element::zero();
            }
            let mut y = x.clone();
            y[c.u] = 0;
            y[c.per] += shift;
            y[c.tm2] += dc;
            Element::from_monomial(Monomial(y))
        },
    ))
}

fn nonzero(x: &[i64], g: usize) -> bool {
    g != usize::MAX && x[g] != 0
}

#[derive(Clone, Debug)]
pub struct Step {
    pub rule: DiffRule,
    pub from: Stage,
    pub to: Stage,
}

/// The ordered differentials with the pages they connect.
pub fn script(flavor: Flavor, p: u32, n: u32, alg: &Algebra) -> Result<Vec<Step>> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    let mut steps = vec![Step {
        rule: d2_rule(flavor),
        from: Stage::E2,
        to: Stage::E3,
    }];
    let mut prev = Stage::E3;
    for k in 1..=n {
        steps.push(Step {
            rule: odd_family(flavor, p, k, alg)?,
            from: prev,
            to: Stage::Odd(k),
        });
        steps.push(Step {
            rule: even_family(flavor, p, k, alg)?,
            from: Stage::Odd(k),
            to: Stage::Even(k),
        });
        prev = Stage::Even(k);
    }
    steps.push(Step {
        rule: final_rule(flavor, p, n, alg)?,
        from: prev,
        to: Stage::Inf,
    });
    Ok(steps)
}

/// Filtration range holding every E-infinity class with total degree in
/// [lo, hi].
pub fn s_range(flavor: Flavor, p: u32, n: u32, lo: i64, hi: i64) -> Result<(i64, i64)> {
    let pp = p as i64;
    Ok(match flavor {
        Flavor::Tate => {
            let top = rho(p, 2 * n as i64 - 2)? + 1;
            (lo.min(0) - 2 * pp - 2 * pp * pp - 2 * pp * pp * top, hi + 1)
        }
        Flavor::Hofix => (-2 * rho(p, 2 * n as i64)? - 4, 1),
    })
}

#[derive(Clone, Debug)]
pub struct StageCheck {
    pub label: String,
    pub r: u64,
    pub comparison: PageComparison,
    pub page: Page,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub flavor: Flavor,
    pub p: u32,
    pub n: u32,
    pub window: Window,
    pub checks: Vec<StageCheck>,
    pub well_defined: Vec<(String, WellDefinedness)>,
}

impl RunReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.comparison.ok())
            && self.well_defined.iter().all(|w| w.1.witnesses.is_empty())
    }

    pub fn last(&self) -> &Page {
        &self.checks.last().expect("nonempty run").page
    }

    pub fn page(&self, label: &str) -> Option<&Page> {
        self.checks
            .iter()
            .find(|c| c.label == label)
            .map(|c| &c.page)
    }
}

/// Each differential applied to the closed form of its source page and
/// compared with the closed form of its target page.
pub fn run_verify(
    flavor: Flavor,
    p: u32,
    n: u32,
    lo: i64,
    hi: i64,
    mode: ExecMode,
) -> Result<RunReport> {
    let alg = Arc::new(cyclic_algebra(flavor, p, n)?);
    let (s_lo, s_hi) = s_range(flavor, p, n, lo, hi)?;
    let inner = Window::new(lo, hi, s_lo, s_hi);
    let mut checks = Vec::new();
    let e2 = closed_form(flavor, p, n, Stage::E2, &alg)?;
    checks.push(StageCheck {
        label: "E^2".into(),
        r: 2,
        comparison: PageComparison::default(),
        page: e2.page(&alg, inner)?,
    });
    for step in script(flavor, p, n, &alg)? {
        let r = step.rule.r as i64;
        let bx = Window::new(lo - 1, hi + 1, s_lo - r - 1, s_hi + r + 1);
        let seed = closed_form(flavor, p, n, step.from, &alg)?.page(&alg, bx)?;
        let target = closed_form(flavor, p, n, step.to, &alg)?;
        let expected = target.page(&alg, bx)?;
        let check = crate::spectral_sequence::verify_step(&seed, &step.rule, &expected, mode)?;
        checks.push(StageCheck {
            label: step.to.name(p, n)?,
            r: target.r,
            comparison: check.comparison,
            page: check.computed.restrict(&inner),
        });
    }
    Ok(RunReport {
        flavor,
        p,
        n,
        window: inner,
        checks,
        well_defined: Vec::new(),
    })
}

/// One chained run from E^2, carrying boundaries, with a well-definedness
/// check before every differential after the first.
pub fn run_propagate(
    flavor: Flavor,
    p: u32,
    n: u32,
    lo: i64,
    hi: i64,
    forms: Option<&[ClosedForm]>,
    mode: ExecMode,
) -> Result<RunReport> {
    let alg = Arc::new(cyclic_algebra(flavor, p, n)?);
    let steps = script(flavor, p, n, &alg)?;
    let (s_lo, s_hi) = s_range(flavor, p, n, lo, hi)?;
    let inner = Window::new(lo, hi, s_lo, s_hi);
    let depth = steps.len() as i64;
    let reach: i64 = steps.iter().map(|s| s.rule.r as i64).sum();
    let bx = Window::new(lo - depth, hi + depth, s_lo - reach - 1, s_hi + reach + 1);
    let mut page = closed_form(flavor, p, n, Stage::E2, &alg)?.page(&alg, bx)?;
    let mut checks = vec![StageCheck {
        label: "E^2".into(),
        r: 2,
        comparison: PageComparison::default(),
        page: page.restrict(&inner),
    }];
    let mut well_defined = Vec::new();
    for (i, step) in steps.iter().enumerate() {
        if i > 0 {
            well_defined.push((
                step.rule.label.clone(),
                well_definedness_check(&page, &step.rule),
            ));
        }
        page = turn_page_with(&page, &step.rule, mode)?;
        let target = match forms {
            Some(f) => f.get(i).cloned().ok_or_else(|| {
                Error::DimensionMismatch("too few closed forms for the script".into())
            })?,
            None => closed_form(flavor, p, n, step.to, &alg)?,
        };
        page.r = target.r;
        let expected = target.page(&alg, page.window)?;
        checks.push(StageCheck {
            label: if forms.is_some() {
                target.label.clone()
            } else {
                step.to.name(p, n)?
            },
            r: target.r,
            comparison: compare_pages(&page, &expected)?,
            page: page.restrict(&inner),
        });
    }
    Ok(RunReport {
        flavor,
        p,
        n,
        window: inner,
        checks,
        well_defined,
    })
}

/// The C_p Tate run checked against the directly written pages.
pub fn cp_tate_run(p: u32, lo: i64, hi: i64, mode: ExecMode) -> Result<RunReport> {
    let alg = cyclic_algebra(Flavor::Tate, p, 1)?;
    let forms = cp_tate_forms(p, &alg)?;
    run_propagate(Flavor::Tate, p, 1, lo, hi, Some(&forms), mode)
}

/// Moves a page to another algebra with the same generator degrees and kinds.
pub fn relabel(page: &Page, target: &Arc<Algebra>) -> Result<Page> {
    let same = page.alg.ngens() == target.ngens()
        && page
            .alg
            .gens()
            .iter()
            .zip(target.gens())
            .all(|(a, b)| a.s == b.s && a.t == b.t && a.kind == b.kind);
    if !same {
        return Err(Error::Incomparable("generator layouts differ".into()));
    }
    let mut out = page.clone();
    out.alg = target.clone();
    Ok(out)
}

/// Compares the pages E^r, r <= 2 rho(2n) + 1, of a C_{p^n} run with the
/// closed forms for C_{p^{n+1}} under u_n -> u_{n+1}.
pub fn relabel_check(run: &RunReport) -> Result<Vec<(String, PageComparison)>> {
    let (flavor, p, n) = (run.flavor, run.p, run.n);
    let next = Arc::new(cyclic_algebra(flavor, p, n + 1)?);
    let mut stages = vec![Stage::E3];
    for m in 1..=n {
        stages.push(Stage::Odd(m));
        stages.push(Stage::Even(m));
    }
    let mut out = Vec::new();
    for st in stages {
        let label = st.name(p, n)?;
        let Some(page) = run.page(&label) else {
            return Err(Error::Incomparable(format!("run has no page {label}")));
        };
        let moved = relabel(page, &next)?;
        let expected = closed_form(flavor, p, n + 1, st, &next)?.page(&next, page.window)?;
        out.push((label, compare_pages(&moved, &expected)?));
    }
    Ok(out)
}

/// Monomials of a page in one total degree.
pub fn basis_in_degree(page: &Page, total: i64) -> Vec<String> {
    let mut out: Vec<(i64, String)> = page
        .cells
        .iter()
        .filter(|((s, t), _)| s + t == total)
        .flat_map(|((s, _), v)| v.iter().map(move |m| (*s, m)))
        .map(|(s, m)| (s, page.alg.format_monomial(m)))
        .collect();
    out.sort();
    out.into_iter().map(|x| x.1).collect()
}

/// The circle closed forms: the Tate E-infinity (flavor Tate) and the
/// mu2-inverted homotopy fixed point E-infinity (flavor Hofix), with the
/// infinite families cut at index `kmax`.
pub fn circle_form(flavor: Flavor, p: u32, kmax: u32, alg: &Algebra) -> Result<ClosedForm> {
    use ExpRule::*;
    let g = |n: &str| alg.idx(n);
    let pp = p as i64;
    let mut out = Vec::new();
    let (per, k0) = match flavor {
        Flavor::Tate => (g("t"), 2u32),
        Flavor::Hofix => (g("m2"), 1u32),
    };
    match flavor {
        Flavor::Tate => out.push(summand(
            "E(l2) Fp{t^-i} P(t^+-p^2)",
            vec![(g("l2"), Any), (per, negative_residues(p, pp * pp))],
        )),
        Flavor::Hofix => out.push(summand(
            "E(l2) Fp{m0^i} P(m2^+-1)",
            vec![(g("l2"), Any), (g("m0"), Between(1, pp - 1)), (per, Any)],
        )),
    }
    for k in k0..=kmax {
        let k = k as i64;
        let (hb, hc) = match flavor {
            Flavor::Tate => (rho(p, 2 * k - 3)?, rho(p, 2 * k - 2)?),
            Flavor::Hofix => (rho(p, 2 * k - 1)?, rho(p, 2 * k)?),
        };
        out.push(summand(
            format!("B{k}"),
            vec![
                (g("l2"), Any),
                (per, Valuation((2 * k - 2) as u32)),
                (g("tm2"), ExpRule::below(hb)),
            ],
        ));
        out.push(summand(
            format!("C{k}"),
            vec![
                (g("eb1"), Any),
                (g("l2"), ExpRule::one()),
                (per, Valuation((2 * k - 1) as u32)),
                (g("tm2"), ExpRule::below(hc)),
            ],
        ));
    }
    out.push(summand(
        "E(eb1,l2) P(tm2)",
        vec![(g("eb1"), Any), (g("l2"), Any), (g("tm2"), Any)],
    ));
    Ok(ClosedForm {
        label: format!("{}(S^1) E^inf", flavor.id()),
        r: u64::MAX,
        summands: out,
    })
}

/// Filtration box used for circle comparisons over total degrees [lo, hi].
pub fn circle_box(p: u32, lo: i64, hi: i64) -> Window {
    Window::new(lo, hi, -(hi - lo) * p as i64, hi + 1)
}

/// Smallest family index whose classes can reach the box.
pub fn circle_kmax(p: u32, w: &Window) -> u32 {
    let bound = 2 * (w.lo.abs() + w.hi.abs() + w.s_lo.abs() + w.s_hi.abs()) + 10;
    let mut k = 1u32;
    while pow_i64(p, 2 * k - 2) <= bound {
        k += 1;
    }
    k + 1
}

/// Restriction of a C_{p^n} page to monomials free of u_n (and of any
/// generator missing from the circle algebra), moved into the circle algebra.
pub fn u_free_part(page: &Page, target: &Arc<Algebra>) -> Page {
    let src = &page.alg;
    let map: Vec<Option<usize>> = target
        .gens()
        .iter()
        .map(|g| src.gen_index(&g.name))
        .collect();
    let extra: Vec<usize> = (0..src.ngens())
        .filter(|&i| target.gen_index(&src.gens()[i].name).is_none())
        .collect();
    let mut cells = std::collections::BTreeMap::new();
    for (b, v) in &page.cells {
        let kept: Vec<Monomial> = v
            .iter()
            .filter(|m| extra.iter().all(|&i| m.0[i] == 0))
            .map(|m| Monomial(map.iter().map(|i| i.map_or(0, |i| m.0[i])).collect()))
            .collect();
        if !kept.is_empty() {
            cells.insert(*b, kept);
        }
    }
    Page {
        alg: target.clone(),
        r: page.r,
        window: page.window,
        cells,
        boundaries: Default::default(),
        provenance: page.provenance,
    }
}

#[derive(Clone, Debug)]
pub struct CircleReport {
    pub flavor: Flavor,
    pub window: Window,
    pub kmax: u32,
    pub per_n: Vec<(u32, PageComparison)>,
    /// Smallest n whose u-free E-infinity agrees with the circle form.
    pub n_probe: Option<u32>,
    /// Agreement persists at n_probe + 1.
    pub confirmed: bool,
}

impl CircleReport {
    pub fn ok(&self) -> bool {
        self.n_probe.is_some() && self.confirmed
    }
}

/// Stabilization of the C_{p^n} E-infinity terms to the circle closed form.
pub fn circle_stabilization(
    flavor: Flavor,
    p: u32,
    lo: i64,
    hi: i64,
    n_max: u32,
) -> Result<CircleReport> {
    let w = circle_box(p, lo, hi);
    let kmax = circle_kmax(p, &w);
    let circ = Arc::new(circle_algebra(flavor, p)?);
    let expected = circle_form(flavor, p, kmax, &circ)?.page(&circ, w)?;
    let mut per_n = Vec::new();
    let mut n_probe = None;
    let mut confirmed = false;
    for n in 1..=n_max {
        let alg = Arc::new(cyclic_algebra(flavor, p, n)?);
        let inf = closed_form(flavor, p, n, Stage::Inf, &alg)?.page(&alg, w)?;
        let cmp = compare_pages(&u_free_part(&inf, &circ), &expected)?;
        let ok = cmp.ok();
        per_n.push((n, cmp));
        match n_probe {
            None if ok => n_probe = Some(n),
            Some(_) => {
                confirmed = ok;
                break;
            }
            None => {}
        }
    }
    Ok(CircleReport {
        flavor,
        window: w,
        kmax,
        per_n,
        n_probe,
        confirmed,
    })
}

/// Closed-form circle page on a box, for table output.
pub fn circle_page(flavor: Flavor, p: u32, lo: i64, hi: i64) -> Result<Page> {
    let w = circle_box(p, lo, hi);
    let circ = Arc::new(circle_algebra(flavor, p)?);
    circle_form(flavor, p, circle_kmax(p, &w), &circ)?.page(&circ, w)
}

/// Convenience used by the table command: the page E^r of a verified run.
pub fn verify_single(
    seed: &Page,
    rule: &DiffRule,
    expected: &Page,
    mode: ExecMode,
) -> Result<PageComparison> {
    Ok(verify_step(seed, rule, expected, mode)?.comparison)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_lengths_at_five() {
        assert_eq!(Stage::Odd(1).r(5, 1).unwrap(), 43);
        assert_eq!(Stage::Even(1).r(5, 1).unwrap(), 51);
        assert_eq!(Stage::Inf.r(5, 1).unwrap(), 52);
    }

    #[test]
    fn e3_is_free_on_eb1() {
        let alg = Arc::new(cyclic_algebra(Flavor::Tate, 5, 1).unwrap());
        let e3 = closed_form(Flavor::Tate, 5, 1, Stage::E3, &alg).unwrap();
        let page = e3.page(&alg, Window::new(9, 9, -2, 9)).unwrap();
        assert_eq!(page.dim(0, 9), 1);
    }

    #[test]
    fn summands_are_disjoint() {
        let alg = Arc::new(cyclic_algebra(Flavor::Hofix, 5, 2).unwrap());
        for st in [
            Stage::E3,
            Stage::Odd(1),
            Stage::Even(1),
            Stage::Odd(2),
            Stage::Even(2),
            Stage::Inf,
        ] {
            let f = closed_form(Flavor::Hofix, 5, 2, st, &alg).unwrap();
            f.page(&alg, Window::new(-10, 60, -60, 1)).unwrap();
        }
    }
}

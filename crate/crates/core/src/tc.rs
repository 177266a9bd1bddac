//! Assembly of TC and K from the circle E-infinity terms.
//!
//! Classes of the Tate E-infinity term are eb1^eb l2^l t^e (tm2)^c; classes
//! of the mu2-inverted homotopy fixed point term are
//! eb1^eb l2^l m0^mu0 m2^e (tm2)^c. Everything here works in total degrees
//! above 2p-2, where both model TF.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded_algebra::{div_ceil, div_floor, PoincareSeries};
use crate::numerics::{pow_i64, rho_i64, vp_i64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Class {
    pub eb: u8,
    pub l: u8,
    pub mu0: i64,
    pub e: i64,
    pub c: i64,
}

impl Class {
    pub fn tate(eb: u8, l: u8, e: i64, c: i64) -> Class {
        Class {
            eb,
            l,
            mu0: 0,
            e,
            c,
        }
    }

    pub fn fixed(eb: u8, l: u8, mu0: i64, e: i64, c: i64) -> Class {
        Class { eb, l, mu0, e, c }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Tate,
    Fixed,
}

pub fn degree(side: Side, p: u32, x: &Class) -> i64 {
    let pp = p as i64;
    let base =
        (2 * pp - 1) * x.eb as i64 + (2 * pp * pp - 1) * x.l as i64 + (2 * pp * pp - 2) * x.c;
    match side {
        Side::Tate => base - 2 * x.e,
        Side::Fixed => base + 2 * x.mu0 + 2 * pp * pp * x.e,
    }
}

pub fn format_class(side: Side, x: &Class) -> String {
    let mut parts = Vec::new();
    if x.eb == 1 {
        parts.push("eb1".to_string());
    }
    if x.l == 1 {
        parts.push("l2".to_string());
    }
    if x.mu0 != 0 {
        parts.push(format!("m0^{}", x.mu0));
    }
    if x.e != 0 {
        let g = if side == Side::Tate { "t" } else { "m2" };
        parts.push(format!("{g}^{}", x.e));
    }
    if x.c != 0 {
        parts.push(format!("(tm2)^{}", x.c));
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Summand of a circle E-infinity term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    /// The t^-i resp. m0^i classes.
    Low,
    B(u32),
    C(u32),
    /// E(eb1, l2) (x) P(tm2).
    Top,
}

fn val(p: u32, x: i64) -> Option<u32> {
    vp_i64(p, x).ok()
}

/// The summand of the Tate E-infinity term holding x, if x is a class.
pub fn tate_family(p: u32, x: &Class) -> Result<Option<Family>> {
    let pp = p as i64;
    if x.mu0 != 0 || x.c < 0 || x.eb > 1 || x.l > 1 {
        return Ok(None);
    }
    if x.e == 0 {
        return Ok(Some(Family::Top));
    }
    let v = val(p, x.e).unwrap_or(0);
    Ok(if v == 0 {
        let i = (-x.e).rem_euclid(pp * pp);
        (x.eb == 0 && x.c == 0 && 0 < i && i < pp).then_some(Family::Low)
    } else if v.is_multiple_of(2) {
        let k = v / 2 + 1;
        (x.eb == 0 && x.c < rho_i64(p, 2 * k as i64 - 3)?).then_some(Family::B(k))
    } else if v >= 3 {
        let k = v.div_ceil(2);
        (x.l == 1 && x.c < rho_i64(p, 2 * k as i64 - 2)?).then_some(Family::C(k))
    } else {
        None
    })
}

/// The summand of the localized homotopy fixed point E-infinity term
/// holding x, if x is a class.
pub fn fixed_family(p: u32, x: &Class) -> Result<Option<Family>> {
    let pp = p as i64;
    if x.c < 0 || x.eb > 1 || x.l > 1 || x.mu0 < 0 {
        return Ok(None);
    }
    if x.mu0 > 0 {
        return Ok((x.eb == 0 && x.c == 0 && x.mu0 < pp).then_some(Family::Low));
    }
    if x.e == 0 {
        return Ok(Some(Family::Top));
    }
    let v = val(p, x.e).unwrap_or(0);
    Ok(if v.is_multiple_of(2) {
        let k = v / 2 + 1;
        (x.eb == 0 && x.c < rho_i64(p, 2 * k as i64 - 1)?).then_some(Family::B(k))
    } else {
        let k = v.div_ceil(2);
        (x.l == 1 && x.c < rho_i64(p, 2 * k as i64)?).then_some(Family::C(k))
    })
}

fn family_of(side: Side, p: u32, x: &Class) -> Result<Option<Family>> {
    match side {
        Side::Tate => tate_family(p, x),
        Side::Fixed => fixed_family(p, x),
    }
}

#[derive(Clone, Debug)]
enum ECond {
    Zero,
    Any,
    Residues(i64, Vec<i64>),
    Val(u32),
}

struct Shape {
    family: Family,
    eb: &'static [u8],
    l: &'static [u8],
    mu0: (i64, i64),
    e: ECond,
    c_max: Option<i64>,
}

fn shapes(side: Side, p: u32, kmax: u32) -> Result<Vec<Shape>> {
    let pp = p as i64;
    let mut out = Vec::new();
    let k0 = match side {
        Side::Tate => {
            out.push(Shape {
                family: Family::Low,
                eb: &[0],
                l: &[0, 1],
                mu0: (0, 0),
                e: ECond::Residues(pp * pp, (1..pp).map(|i| pp * pp - i).collect()),
                c_max: Some(1),
            });
            2
        }
        Side::Fixed => {
            out.push(Shape {
                family: Family::Low,
                eb: &[0],
                l: &[0, 1],
                mu0: (1, pp - 1),
                e: ECond::Any,
                c_max: Some(1),
            });
            1
        }
    };
    for k in k0..=kmax {
        let k64 = k as i64;
        let (hb, hc) = match side {
            Side::Tate => (rho_i64(p, 2 * k64 - 3)?, rho_i64(p, 2 * k64 - 2)?),
            Side::Fixed => (rho_i64(p, 2 * k64 - 1)?, rho_i64(p, 2 * k64)?),
        };
        out.push(Shape {
            family: Family::B(k),
            eb: &[0],
            l: &[0, 1],
            mu0: (0, 0),
            e: ECond::Val(2 * k - 2),
            c_max: Some(hb),
        });
        out.push(Shape {
            family: Family::C(k),
            eb: &[0, 1],
            l: &[1],
            mu0: (0, 0),
            e: ECond::Val(2 * k - 1),
            c_max: Some(hc),
        });
    }
    out.push(Shape {
        family: Family::Top,
        eb: &[0, 1],
        l: &[0, 1],
        mu0: (0, 0),
        e: ECond::Zero,
        c_max: None,
    });
    Ok(out)
}

/// Integers x with lo <= a x <= hi.
fn solve_range(a: i64, lo: i64, hi: i64) -> (i64, i64) {
    if a > 0 {
        (div_ceil(lo, a), div_floor(hi, a))
    } else {
        (div_ceil(hi, a), div_floor(lo, a))
    }
}

/// Classes of the families with index at most `kmax` in total degrees
/// [lo, hi], each tagged with its family. Errors if the family predicate
/// disagrees with the enumerator.
pub fn enumerate(side: Side, p: u32, kmax: u32, lo: i64, hi: i64) -> Result<Vec<(Class, Family)>> {
    let pp = p as i64;
    let w = 2 * pp * pp - 2;
    let a = match side {
        Side::Tate => -2,
        Side::Fixed => 2 * pp * pp,
    };
    let mut out = Vec::new();
    for sh in shapes(side, p, kmax)? {
        for &eb in sh.eb {
            for &l in sh.l {
                for mu0 in sh.mu0.0..=sh.mu0.1 {
                    let base = degree(side, p, &Class::fixed(eb, l, mu0, 0, 0));
                    let es: Vec<i64> = match (&sh.e, sh.c_max) {
                        (ECond::Zero, _) => vec![0],
                        (_, None) => return Err(Error::InfiniteDegree(format!("{:?}", sh.family))),
                        (cond, Some(cm)) => {
                            let (e_lo, e_hi) = solve_range(a, lo - base - w * (cm - 1), hi - base);
                            match cond {
                                ECond::Val(v) => {
                                    let step = pow_i64(p, *v);
                                    let first = div_ceil(e_lo, step) * step;
                                    (0..)
                                        .map(|i| first + i * step)
                                        .take_while(|e| *e <= e_hi)
                                        .filter(|&e| e != 0 && val(p, e) == Some(*v))
                                        .collect()
                                }
                                ECond::Residues(m, set) => (e_lo..=e_hi)
                                    .filter(|e| set.contains(&e.rem_euclid(*m)))
                                    .collect(),
                                _ => (e_lo..=e_hi).collect(),
                            }
                        }
                    };
                    for e in es {
                        let b = base + a * e;
                        let (c_lo, c_hi) = solve_range(w, lo - b, hi - b);
                        let c_hi = sh.c_max.map_or(c_hi, |cm| c_hi.min(cm - 1));
                        for c in c_lo.max(0)..=c_hi {
                            let x = Class::fixed(eb, l, mu0, e, c);
                            let f = family_of(side, p, &x)?;
                            if f != Some(sh.family) {
                                return Err(Error::Overlap(format!(
                                    "{} enumerated in {:?}, classified as {:?}",
                                    format_class(side, &x),
                                    sh.family,
                                    f
                                )));
                            }
                            out.push((x, sh.family));
                        }
                    }
                }
            }
        }
    }
    out.sort();
    for w in out.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::Overlap(format_class(side, &w[0].0)));
        }
    }
    Ok(out)
}

/// The isomorphism from the Tate term to the localized fixed point term:
/// t^{-i + p^2 a} -> m0^i m2^-a and t^{p^2 j} -> m2^-j, keeping eb1, l2, tm2.
pub fn g_map(p: u32, x: &Class) -> Option<Class> {
    let p2 = (p as i64) * (p as i64);
    if x.e % p2 == 0 {
        return Some(Class::fixed(x.eb, x.l, 0, -x.e / p2, x.c));
    }
    let i = (-x.e).rem_euclid(p2);
    (i < p as i64).then(|| Class::fixed(x.eb, x.l, i, -(x.e + i) / p2, x.c))
}

/// The map inverting t: m0-classes go to zero and
/// m2^m (tm2)^c -> t^-m (tm2)^{c+m} when that is a nonzero class.
pub fn rh_map(p: u32, x: &Class) -> Result<Option<Class>> {
    if x.mu0 != 0 {
        return Ok(None);
    }
    let y = Class::tate(x.eb, x.l, -x.e, x.c + x.e);
    Ok(tate_family(p, &y)?.map(|_| y))
}

/// The E-infinity model of the restriction map.
pub fn r_map(p: u32, x: &Class) -> Result<Option<Class>> {
    match g_map(p, x) {
        Some(y) => rh_map(p, &y),
        None => Ok(None),
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ClauseReport {
    pub checked: usize,
    pub witnesses: Vec<String>,
}

impl ClauseReport {
    fn fail(&mut self, s: String) {
        if self.witnesses.len() < 20 {
            self.witnesses.push(s);
        } else if self.witnesses.len() == 20 {
            self.witnesses.push("...".into());
        }
    }

    pub fn ok(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Default family cap: enough indices for the in-window towers to be seen
/// stabilizing.
pub const DEFAULT_KMAX: u32 = 5;

fn check_window(p: u32, lo: i64) -> Result<()> {
    if lo <= 2 * p as i64 - 2 {
        return Err(Error::OutOfRange(format!(
            "window must lie above degree {}",
            2 * p - 2
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct GReport {
    pub source_classes: usize,
    pub bijective: ClauseReport,
}

/// G is a degree-preserving bijection from the Tate families up to index K
/// onto the fixed point families up to index K-1, sending B_k to B_{k-1}
/// and C_k to C_{k-1}.
pub fn g_check(p: u32, lo: i64, hi: i64, kmax: u32) -> Result<GReport> {
    let src = enumerate(Side::Tate, p, kmax, lo, hi)?;
    let tgt: BTreeSet<Class> = enumerate(Side::Fixed, p, kmax - 1, lo, hi)?
        .into_iter()
        .map(|x| x.0)
        .collect();
    let mut rep = ClauseReport::default();
    let mut seen = BTreeSet::new();
    for (x, f) in &src {
        rep.checked += 1;
        let Some(y) = g_map(p, x) else {
            rep.fail(format!("G undefined on {}", format_class(Side::Tate, x)));
            continue;
        };
        let fy = fixed_family(p, &y)?;
        let shifted = match f {
            Family::B(k) => Family::B(k - 1),
            Family::C(k) => Family::C(k - 1),
            other => *other,
        };
        if degree(Side::Fixed, p, &y) != degree(Side::Tate, p, x)
            || fy != Some(shifted)
            || !tgt.contains(&y)
        {
            rep.fail(format!(
                "{} -> {}",
                format_class(Side::Tate, x),
                format_class(Side::Fixed, &y)
            ));
        }
        if !seen.insert(y) {
            rep.fail(format!("{} hit twice", format_class(Side::Fixed, &y)));
        }
    }
    for y in tgt.difference(&seen) {
        rep.fail(format!("{} not hit", format_class(Side::Fixed, y)));
    }
    Ok(GReport {
        source_classes: src.len(),
        bijective: rep,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RhReport {
    pub window: (i64, i64),
    pub kmax: u32,
    /// Identity on E(eb1, l2) (x) P(tm2).
    pub a: ClauseReport,
    /// B-type sources onto E(l2) F_p{t^j} P_{rho(2k-3)}(tm2).
    pub b: ClauseReport,
    /// C-type sources onto E(eb1) F_p{t^j l2} P_{rho(2k-2)}(tm2).
    pub c: ClauseReport,
    /// Everything else to zero.
    pub d: ClauseReport,
}

impl RhReport {
    pub fn ok(&self) -> bool {
        self.a.ok() && self.b.ok() && self.c.ok() && self.d.ok()
    }
}

/// d for which t^j, j = d p^{2k-2}, spans a B-clause target.
fn b_range(p: u32, k: u32, j: i64) -> bool {
    let pp = p as i64;
    let s = pow_i64(p, 2 * k - 2);
    k >= 2 && j % s == 0 && {
        let d = j / s;
        0 < d && d < pp * pp - pp && d % pp != 0
    }
}

fn c_range(p: u32, k: u32, j: i64) -> bool {
    let s = pow_i64(p, 2 * k - 1);
    k >= 2 && j % s == 0 && {
        let d = j / s;
        0 < d && d < p as i64
    }
}

/// Checks the behaviour of the t-inverting map on the fixed point families.
pub fn rh_map_check(p: u32, lo: i64, hi: i64, kmax: u32) -> Result<RhReport> {
    check_window(p, lo)?;
    let src = enumerate(Side::Fixed, p, kmax, lo, hi)?;
    let (mut a, mut b, mut c, mut d) = Default::default();
    let mut hit = BTreeSet::new();
    let fmt_map = |x: &Class, y: &Option<Class>| {
        format!(
            "{} -> {}",
            format_class(Side::Fixed, x),
            y.map_or("0".into(), |y| format_class(Side::Tate, &y))
        )
    };
    for (x, f) in &src {
        let y = rh_map(p, x)?;
        if let Some(y) = y {
            hit.insert(y);
        }
        match f {
            Family::Top => {
                let r: &mut ClauseReport = &mut a;
                r.checked += 1;
                if y != Some(Class::tate(x.eb, x.l, 0, x.c)) {
                    r.fail(fmt_map(x, &y));
                }
            }
            Family::B(k) if b_range(p, *k, -x.e) => {
                let r: &mut ClauseReport = &mut b;
                r.checked += 1;
                if let Some(yy) = y {
                    if yy.e != -x.e || tate_family(p, &yy)? != Some(Family::B(*k)) {
                        r.fail(fmt_map(x, &y));
                    }
                }
            }
            Family::C(k) if c_range(p, *k, -x.e) => {
                let r: &mut ClauseReport = &mut c;
                r.checked += 1;
                if let Some(yy) = y {
                    if yy.e != -x.e || tate_family(p, &yy)? != Some(Family::C(*k)) {
                        r.fail(fmt_map(x, &y));
                    }
                }
            }
            _ => {
                let r: &mut ClauseReport = &mut d;
                r.checked += 1;
                if y.is_some() {
                    r.fail(fmt_map(x, &y));
                }
            }
        }
    }
    // Surjectivity onto the stated targets.
    for (y, f) in enumerate(Side::Tate, p, kmax, lo, hi)? {
        let r: &mut ClauseReport = match f {
            Family::Top => &mut a,
            Family::B(k) if b_range(p, k, y.e) => &mut b,
            Family::C(k) if c_range(p, k, y.e) => &mut c,
            _ => continue,
        };
        if !hit.contains(&y) {
            r.fail(format!("{} not hit", format_class(Side::Tate, &y)));
        }
    }
    Ok(RhReport {
        window: (lo, hi),
        kmax,
        a,
        b,
        c,
        d,
    })
}

/// Parts of the Tate E-infinity term used to split TF.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Part {
    A,
    B(u32),
    C(u32),
    D,
}

pub fn part_of(p: u32, x: &Class, f: Family) -> Part {
    match f {
        Family::Top => Part::A,
        Family::B(k) if b_range(p, k, x.e) => Part::B(k),
        Family::C(k) if c_range(p, k, x.e) => Part::C(k),
        _ => Part::D,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub window: (i64, i64),
    pub kmax: u32,
    pub parts: BTreeMap<Part, Vec<Class>>,
}

impl Decomposition {
    pub fn series(&self, p: u32, part: Part) -> PoincareSeries {
        let mut counts = BTreeMap::new();
        for x in self.parts.get(&part).into_iter().flatten() {
            *counts.entry(degree(Side::Tate, p, x)).or_insert(0u64) += 1;
        }
        PoincareSeries::from_counts(self.window.0, self.window.1, counts)
    }

    pub fn len(&self) -> usize {
        self.parts.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Splits the Tate E-infinity classes of the window into A, B_k, C_k, D.
/// Errors if a class satisfies more than one of the A, B, C conditions.
pub fn tf_decompose(p: u32, lo: i64, hi: i64, kmax: u32) -> Result<Decomposition> {
    check_window(p, lo)?;
    let mut parts: BTreeMap<Part, Vec<Class>> = BTreeMap::new();
    for (x, f) in enumerate(Side::Tate, p, kmax, lo, hi)? {
        let is_a = x.e == 0;
        let is_b = (2..=kmax).any(|k| f == Family::B(k) && b_range(p, k, x.e));
        let is_c = (2..=kmax).any(|k| f == Family::C(k) && c_range(p, k, x.e));
        if [is_a, is_b, is_c].iter().filter(|b| **b).count() > 1 {
            return Err(Error::Overlap(format_class(Side::Tate, &x)));
        }
        parts.entry(part_of(p, &x, f)).or_default().push(x);
    }
    Ok(Decomposition {
        window: (lo, hi),
        kmax,
        parts,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RCompositeReport {
    pub identity_on_a: ClauseReport,
    /// B_{k+1} onto B_k and C_{k+1} onto C_k.
    pub tower: ClauseReport,
    /// The kernel on B_k (C_k), k >= 3, is the range of tm2-powers
    /// c >= d p^{2k-4} + rho(2k-5) (c >= d p^{2k-3} + rho(2k-4)).
    pub kernel: ClauseReport,
    /// Zero on B_2, C_2 and D.
    pub zero: ClauseReport,
}

impl RCompositeReport {
    pub fn ok(&self) -> bool {
        self.identity_on_a.ok() && self.tower.ok() && self.kernel.ok() && self.zero.ok()
    }
}

fn kernel_floor(p: u32, part: Part, e: i64) -> Result<i64> {
    Ok(match part {
        Part::B(k) => e / pow_i64(p, 2) + rho_i64(p, 2 * k as i64 - 5)?,
        Part::C(k) => e / pow_i64(p, 2) + rho_i64(p, 2 * k as i64 - 4)?,
        _ => 0,
    })
}

/// The composite restriction model on the parts of the decomposition.
pub fn r_composite_check(p: u32, dec: &Decomposition) -> Result<RCompositeReport> {
    let mut id = ClauseReport::default();
    let mut tower = ClauseReport::default();
    let mut kernel = ClauseReport::default();
    let mut zero = ClauseReport::default();
    let mut hit: BTreeSet<Class> = BTreeSet::new();
    let show = |x: &Class, y: &Option<Class>| {
        format!(
            "{} -> {}",
            format_class(Side::Tate, x),
            y.map_or("0".into(), |y| format_class(Side::Tate, &y))
        )
    };
    for (part, xs) in &dec.parts {
        for x in xs {
            let y = r_map(p, x)?;
            match part {
                Part::A => {
                    id.checked += 1;
                    if y != Some(*x) {
                        id.fail(show(x, &y));
                    }
                }
                Part::B(k) | Part::C(k) if *k >= 3 => {
                    tower.checked += 1;
                    kernel.checked += 1;
                    let want = match part {
                        Part::B(_) => Part::B(k - 1),
                        _ => Part::C(k - 1),
                    };
                    match y {
                        Some(yy)
                            if tate_family(p, &yy)?.map(|f| part_of(p, &yy, f)) == Some(want) =>
                        {
                            hit.insert(yy);
                        }
                        Some(_) => tower.fail(show(x, &y)),
                        None => {}
                    }
                    if y.is_none() != (x.c >= kernel_floor(p, *part, x.e)?) {
                        kernel.fail(show(x, &y));
                    }
                }
                _ => {
                    zero.checked += 1;
                    if y.is_some() {
                        zero.fail(show(x, &y));
                    }
                }
            }
        }
    }
    for (part, xs) in &dec.parts {
        if let Part::B(k) | Part::C(k) = part {
            if *k < dec.kmax {
                for x in xs {
                    if !hit.contains(x) {
                        tower.fail(format!("{} not hit", format_class(Side::Tate, x)));
                    }
                }
            }
        }
    }
    Ok(RCompositeReport {
        identity_on_a: id,
        tower,
        kernel,
        zero,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Freeness {
    Free,
    Truncated(u32),
}

#[derive(Clone, Debug, Serialize)]
pub struct PvGenerator {
    pub label: String,
    pub degree: i64,
    pub freeness: Freeness,
    pub row: String,
}

/// A P(v2)-module given by generators.
#[derive(Clone, Debug, Serialize)]
pub struct PvModule {
    pub name: String,
    pub p: u32,
    pub v2_degree: i64,
    pub generators: Vec<PvGenerator>,
    pub conditional: bool,
}

impl PvModule {
    fn new(name: &str, p: u32) -> PvModule {
        PvModule {
            name: name.into(),
            p,
            v2_degree: 2 * (p as i64) * (p as i64) - 2,
            generators: Vec::new(),
            conditional: false,
        }
    }

    fn free(&mut self, row: &str, label: String, degree: i64) {
        self.generators.push(PvGenerator {
            label,
            degree,
            freeness: Freeness::Free,
            row: row.into(),
        });
    }

    /// Adds the products of `labels` with every subset of `ext`, exterior
    /// generators given as (name, degree).
    fn free_exterior(&mut self, row: &str, ext: &[(&str, i64)], base: &[(String, i64)]) {
        for (lab, deg) in base {
            for mask in 0..(1u32 << ext.len()) {
                let mut names = Vec::new();
                let mut d = *deg;
                for (i, (n, e)) in ext.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        names.push(n.to_string());
                        d += e;
                    }
                }
                if lab != "1" || names.is_empty() {
                    names.push(lab.clone());
                }
                self.free(row, names.join("*"), d);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.generators
            .iter()
            .filter(|g| g.freeness == Freeness::Free)
            .count()
    }

    /// Even-degree generators minus odd-degree generators.
    pub fn euler(&self) -> i64 {
        self.generators
            .iter()
            .map(|g| if g.degree.rem_euclid(2) == 0 { 1 } else { -1 })
            .sum()
    }

    pub fn rows(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for g in &self.generators {
            if !out.contains(&g.row) {
                out.push(g.row.clone());
            }
        }
        out
    }

    pub fn row_euler(&self, row: &str) -> i64 {
        self.generators
            .iter()
            .filter(|g| g.row == row)
            .map(|g| if g.degree.rem_euclid(2) == 0 { 1 } else { -1 })
            .sum()
    }

    pub fn series(&self, lo: i64, hi: i64) -> PoincareSeries {
        let mut counts = BTreeMap::new();
        for g in &self.generators {
            let top = match g.freeness {
                Freeness::Free => i64::MAX,
                Freeness::Truncated(h) => h as i64,
            };
            let mut k = 0;
            while k < top {
                let d = g.degree + k * self.v2_degree;
                if d > hi {
                    break;
                }
                if d >= lo {
                    *counts.entry(d).or_insert(0u64) += 1;
                }
                k += 1;
            }
        }
        PoincareSeries::from_counts(lo, hi, counts)
    }

    /// Free generator counts per residue class modulo the degree of v2: the
    /// dimensions of the v2-localization.
    pub fn localized(&self) -> Vec<usize> {
        let mut out = vec![0; self.v2_degree as usize];
        for g in &self.generators {
            if g.freeness == Freeness::Free {
                out[g.degree.rem_euclid(self.v2_degree) as usize] += 1;
            }
        }
        out
    }
}

fn degrees(p: u32) -> (i64, i64, i64, i64) {
    let pp = p as i64;
    (2 * pp - 1, 2 * pp * pp - 1, 2 * pp * pp - 2, -1)
}

fn t_d(p: u32) -> impl Iterator<Item = i64> {
    let pp = p as i64;
    (1..pp * pp - pp).filter(move |d| d % pp != 0)
}

/// E(eb1, l2) (x) P(v2): the part of TF fixed by R and the cokernel of R-1.
pub fn a_presentation(p: u32) -> PvModule {
    let (eb, l, _, _) = degrees(p);
    let mut m = PvModule::new("A", p);
    m.free_exterior("E(eb1,l2)", &[("eb1", eb), ("l2", l)], &[("1".into(), 0)]);
    m
}

/// lim B_k: E(l2) (x) F_p{t^d | 0<d<p^2-p, p does not divide d} (x) P(v2).
pub fn lim_b_presentation(p: u32) -> PvModule {
    let (_, l, _, _) = degrees(p);
    let mut m = PvModule::new("lim B", p);
    let base: Vec<(String, i64)> = t_d(p).map(|d| (format!("t^{d}"), -2 * d)).collect();
    m.free_exterior("E(l2){t^d}", &[("l2", l)], &base);
    m
}

/// lim C_k: E(eb1) (x) F_p{t^{dp} l2 | 0<d<p} (x) P(v2).
pub fn lim_c_presentation(p: u32) -> PvModule {
    let (eb, l, _, _) = degrees(p);
    let pp = p as i64;
    let mut m = PvModule::new("lim C", p);
    let base: Vec<(String, i64)> = (1..pp)
        .map(|d| (format!("t^{}*l2", d * pp), l - 2 * d * pp))
        .collect();
    m.free_exterior("E(eb1){t^dp l2}", &[("eb1", eb)], &base);
    m
}

fn merge(name: &str, p: u32, parts: &[PvModule]) -> PvModule {
    let mut m = PvModule::new(name, p);
    for x in parts {
        m.generators.extend(x.generators.iter().cloned());
    }
    m
}

/// ker(R-1) = A + lim B + lim C.
pub fn ker_presentation(p: u32) -> PvModule {
    merge(
        "ker(R-1)",
        p,
        &[
            a_presentation(p),
            lim_b_presentation(p),
            lim_c_presentation(p),
        ],
    )
}

fn rows_two_three(p: u32, m: &mut PvModule, top_label: &str) {
    let (eb, l, v2, _) = degrees(p);
    let pp = p as i64;
    let base: Vec<(String, i64)> = t_d(p).map(|d| (format!("t^{d}*v2"), v2 - 2 * d)).collect();
    m.free_exterior("E(dlog v1){t^d v2}", &[("dlog v1", 1)], &base);
    let base: Vec<(String, i64)> = (1..pp)
        .map(|d| {
            (
                top_label.replace("{dp}", &(d * pp).to_string()),
                l - 2 * d * pp,
            )
        })
        .collect();
    m.free_exterior("E(eb1){t^dp l2}", &[("eb1", eb)], &base);
}

/// V(1)_* TC(l/p; p) as a P(v2)-module.
pub fn tc_presentation(p: u32) -> PvModule {
    let (eb, l, _, del) = degrees(p);
    let mut m = PvModule::new("TC", p);
    m.free_exterior(
        "E(d,eb1,l2)",
        &[("d", del), ("eb1", eb), ("l2", l)],
        &[("1".into(), 0)],
    );
    rows_two_three(p, &mut m, "t^{dp}*l2");
    m
}

/// V(1)_* K(l/p) as a P(v2)-module.
pub fn k_presentation(p: u32) -> PvModule {
    let (eb, l, v2, _) = degrees(p);
    let mut m = PvModule::new("K", p);
    let base = vec![
        ("1".to_string(), 0),
        ("d*l2".to_string(), l - 1),
        ("l2".to_string(), l),
        ("d*v2".to_string(), v2 - 1),
    ];
    m.free_exterior("E(eb1){1,dl2,l2,dv2}", &[("eb1", eb)], &base);
    rows_two_three(p, &mut m, "t^{dp}*l2");
    m
}

/// The K(L/p) presentation that holds if dlog v1 exists with
/// l2 = v2 dlog v1.
pub fn k_lp_conditional_presentation(p: u32) -> PvModule {
    let (eb, l, v2, _) = degrees(p);
    let mut m = PvModule::new("K(L/p)", p);
    m.conditional = true;
    let base = vec![
        ("1".to_string(), 0),
        ("d*l2".to_string(), l - 1),
        ("dlog v1".to_string(), 1),
        ("d*v2".to_string(), v2 - 1),
    ];
    m.free_exterior("E(eb1){1,dl2,dlog v1,dv2}", &[("eb1", eb)], &base);
    rows_two_three(p, &mut m, "t^{dp}*v2*dlog v1");
    m
}

/// E(eb1), the input for K(Z/p).
pub fn k_zp_input(p: u32) -> PoincareSeries {
    let (eb, _, _, _) = degrees(p);
    PoincareSeries::from_counts(0, eb, [(0, 1), (eb, 1)])
}

pub fn presentation_ids() -> &'static [&'static str] {
    &["tc", "k", "k-lp-conditional", "ker", "cok"]
}

pub fn presentation(id: &str, p: u32) -> Result<PvModule> {
    Ok(match id {
        "tc" => tc_presentation(p),
        "k" => k_presentation(p),
        "k-lp-conditional" => k_lp_conditional_presentation(p),
        "ker" => ker_presentation(p),
        "cok" => a_presentation(p),
        _ => return Err(Error::UnknownId(id.into())),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPoints {
    pub window: (i64, i64),
    pub kmax: u32,
    /// Smallest k from which the in-window B_k and C_k no longer change.
    pub k0: Option<u32>,
    pub tower_surjective: bool,
    pub ker: PoincareSeries,
    pub cok: PoincareSeries,
    pub lim_b_matches: bool,
    pub lim_c_matches: bool,
    pub a_matches: bool,
}

impl FixedPoints {
    pub fn ok(&self) -> bool {
        self.k0.is_some()
            && self.tower_surjective
            && self.lim_b_matches
            && self.lim_c_matches
            && self.a_matches
    }
}

/// Kernel and cokernel of R-1 in degrees [lo, hi] from the in-window
/// towers B_k and C_k.
pub fn r_fixed_points(p: u32, lo: i64, hi: i64, kmax: u32) -> Result<FixedPoints> {
    let dec = tf_decompose(p, lo, hi, kmax)?;
    let comp = r_composite_check(p, &dec)?;
    let b: Vec<PoincareSeries> = (2..=kmax).map(|k| dec.series(p, Part::B(k))).collect();
    let c: Vec<PoincareSeries> = (2..=kmax).map(|k| dec.series(p, Part::C(k))).collect();
    let mut k0 = None;
    for i in 0..b.len().saturating_sub(1) {
        if b[i..].iter().all(|s| *s == b[i]) && c[i..].iter().all(|s| *s == c[i]) {
            k0 = Some(i as u32 + 2);
            break;
        }
    }
    let a = dec.series(p, Part::A);
    let lim_b = b
        .last()
        .cloned()
        .unwrap_or_else(|| PoincareSeries::zero(lo, hi));
    let lim_c = c
        .last()
        .cloned()
        .unwrap_or_else(|| PoincareSeries::zero(lo, hi));
    let ker = add(&add(&a, &lim_b), &lim_c);
    Ok(FixedPoints {
        window: (lo, hi),
        kmax,
        k0,
        tower_surjective: comp.ok(),
        lim_b_matches: lim_b == lim_b_presentation(p).series(lo, hi),
        lim_c_matches: lim_c == lim_c_presentation(p).series(lo, hi),
        a_matches: a == a_presentation(p).series(lo, hi),
        cok: a,
        ker,
    })
}

fn add(a: &PoincareSeries, b: &PoincareSeries) -> PoincareSeries {
    let counts: Vec<(i64, u64)> = a.iter().map(|(d, n)| (d, n + b.get(d))).collect();
    PoincareSeries::from_counts(a.lo, a.hi, counts)
}

#[derive(Clone, Debug, Serialize)]
pub struct Exactness {
    pub checked: usize,
    /// (n, dim TC_n, dim ker_n, dim cok_{n+1})
    pub failures: Vec<(i64, u64, u64, u64)>,
}

/// dim TC_n = dim ker(R-1)_n + dim cok(R-1)_{n+1} for n in [lo, hi].
pub fn exactness_check(p: u32, lo: i64, hi: i64, kmax: u32) -> Result<(FixedPoints, Exactness)> {
    let fp = r_fixed_points(p, lo, hi + 1, kmax)?;
    let tc = tc_presentation(p).series(lo, hi);
    let mut failures = Vec::new();
    for n in lo..=hi {
        let (t, k, c) = (tc.get(n), fp.ker.get(n), fp.cok.get(n + 1));
        if t != k + c {
            failures.push((n, t, k, c));
        }
    }
    Ok((
        fp,
        Exactness {
            checked: (hi - lo + 1) as usize,
            failures,
        },
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct KReport {
    pub p: u32,
    pub rank: usize,
    pub expected_rank: usize,
    pub euler: i64,
    pub row_counts: Vec<(String, usize)>,
    pub rows_balanced: bool,
    /// TC agrees with K plus the desuspension of E(eb1), degreewise.
    pub tc_splits: bool,
    /// TC in degrees [-1, 2p-2] agrees with E(d, eb1).
    pub low_degrees: bool,
}

impl KReport {
    pub fn ok(&self) -> bool {
        self.rank == self.expected_rank
            && self.euler == 0
            && self.rows_balanced
            && self.tc_splits
            && self.low_degrees
    }
}

pub fn k_check(p: u32, hi: i64) -> Result<KReport> {
    let k = k_presentation(p);
    let tc = tc_presentation(p);
    let pp = p as i64;
    let lo = -1;
    let shifted = PoincareSeries::from_counts(lo, hi, [(-1, 1), (2 * pp - 2, 1)]);
    let tc_splits = tc.series(lo, hi) == add(&k.series(lo, hi), &shifted);
    let e_d_eb1 = PoincareSeries::from_counts(
        -1,
        2 * pp - 2,
        [(-1, 1), (0, 1), (2 * pp - 2, 1), (2 * pp - 1, 1)],
    );
    let low_degrees = tc.series(-1, 2 * pp - 2) == e_d_eb1;
    let rows = k.rows();
    Ok(KReport {
        p,
        rank: k.rank(),
        expected_rank: (2 * pp * pp - 2 * pp + 8) as usize,
        euler: k.euler(),
        row_counts: rows
            .iter()
            .map(|r| {
                (
                    r.clone(),
                    k.generators.iter().filter(|g| &g.row == r).count(),
                )
            })
            .collect(),
        rows_balanced: rows.iter().all(|r| k.row_euler(r) == 0),
        tc_splits,
        low_degrees,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct KlpReport {
    pub conditional: bool,
    pub localized_equal: bool,
    pub rank: usize,
    pub euler: i64,
    pub k_zp_input: Vec<(i64, u64)>,
}

impl KlpReport {
    pub fn ok(&self, p: u32) -> bool {
        let pp = p as i64;
        self.localized_equal && self.rank as i64 == 2 * pp * pp - 2 * pp + 8 && self.euler == 0
    }
}

pub fn k_lp_checks(p: u32) -> KlpReport {
    let c = k_lp_conditional_presentation(p);
    KlpReport {
        conditional: c.conditional,
        localized_equal: c.localized() == k_presentation(p).localized(),
        rank: c.rank(),
        euler: c.euler(),
        k_zp_input: k_zp_input(p).iter().filter(|x| x.1 > 0).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        assert_eq!(k_presentation(5).rank(), 48);
        assert_eq!(k_presentation(7).rank(), 92);
        assert_eq!(tc_presentation(5).rank(), 8 + 32 + 8);
    }

    #[test]
    fn g_examples() {
        assert_eq!(
            g_map(5, &Class::tate(0, 0, -1, 0)),
            Some(Class::fixed(0, 0, 1, 0, 0))
        );
        assert_eq!(
            g_map(5, &Class::tate(0, 1, 50, 3)),
            Some(Class::fixed(0, 1, 0, -2, 3))
        );
        assert_eq!(g_map(5, &Class::tate(0, 0, 7, 0)), None);
    }

    #[test]
    fn rh_examples() {
        let x = Class::fixed(1, 1, 0, 0, 3);
        assert_eq!(rh_map(5, &x).unwrap(), Some(Class::tate(1, 1, 0, 3)));
        assert_eq!(rh_map(5, &Class::fixed(0, 0, 1, 0, 0)).unwrap(), None);
    }

    #[test]
    fn ranges() {
        assert_eq!(solve_range(-2, 3, 9), (-4, -2));
        assert_eq!(solve_range(3, -4, 7), (-1, 2));
    }
}

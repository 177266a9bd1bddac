//! Bokstedt spectral sequences for H_*THH of Z/p, Z_(p), l and l/p.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded_algebra::{
    cells_series, Algebra, Element, Generator, GeneratorKind, PoincareSeries, Window,
};
use crate::par::ExecMode;
use crate::spectral_sequence::{verify_step, DiffRule, Page, PageComparison};
use crate::steenrod::{tau_degree, xi_degree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Zp,
    Zlocal,
    Ell,
    EllModP,
}

impl Ring {
    pub const ALL: [Ring; 4] = [Ring::Zp, Ring::Zlocal, Ring::Ell, Ring::EllModP];

    pub fn id(self) -> &'static str {
        match self {
            Ring::Zp => "zp",
            Ring::Zlocal => "zlocal",
            Ring::Ell => "ell",
            Ring::EllModP => "ellmodp",
        }
    }

    pub fn parse(s: &str) -> Result<Ring> {
        Ring::ALL
            .into_iter()
            .find(|r| r.id() == s)
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }

    /// Indices k of the tau-bar generators of H_*(B).
    pub fn has_tau(self, k: u32) -> bool {
        match self {
            Ring::Zp => true,
            Ring::Zlocal => k >= 1,
            Ring::Ell => k >= 2,
            Ring::EllModP => k == 0 || k >= 2,
        }
    }

    /// Sigma xi-bar classes that survive to E-infinity.
    pub fn surviving_sigma_xi(self) -> &'static [u32] {
        match self {
            Ring::Zp => &[],
            Ring::Zlocal => &[1],
            Ring::Ell => &[1, 2],
            Ring::EllModP => &[2],
        }
    }
}

fn push_homology_gens(p: u32, ring: Ring, max: i64, gens: &mut Vec<Generator>) {
    let mut k = 1;
    while xi_degree(p, k) <= max {
        gens.push(Generator::new(
            format!("xb{k}"),
            0,
            xi_degree(p, k),
            GeneratorKind::Polynomial,
        ));
        k += 1;
    }
    let mut k = 0;
    while tau_degree(p, k) <= max {
        if ring.has_tau(k) {
            gens.push(Generator::new(
                format!("tb{k}"),
                0,
                tau_degree(p, k),
                GeneratorKind::Exterior,
            ));
        }
        k += 1;
    }
}

/// E^2 = H_*(B) (x) E(sxb_k) (x) Gamma(stb_k) with generators up to `max`.
pub fn bokstedt_algebra(p: u32, ring: Ring, max: i64) -> Result<Algebra> {
    let mut gens = Vec::new();
    push_homology_gens(p, ring, max, &mut gens);
    let mut k = 1;
    while xi_degree(p, k) < max {
        gens.push(Generator::new(
            format!("sxb{k}"),
            1,
            xi_degree(p, k),
            GeneratorKind::Exterior,
        ));
        k += 1;
    }
    let mut k = 0;
    while tau_degree(p, k) < max {
        if ring.has_tau(k) {
            gens.push(Generator::new(
                format!("stb{k}"),
                1,
                tau_degree(p, k),
                GeneratorKind::DividedPower,
            ));
        }
        k += 1;
    }
    Algebra::new(p, gens)
}

/// d^{p-1}(gamma_j stb_k) = sxb_{k+1} gamma_{j-p} stb_k, extended as a derivation.
pub fn bokstedt_rule(p: u32) -> DiffRule {
    DiffRule::derivation(
        (p - 1) as u64,
        "d^{p-1} gamma_j(stb_k)",
        move |alg, g, e| {
            let name = &alg.gens()[g].name;
            let Some(k) = name.strip_prefix("stb").and_then(|s| s.parse::<u32>().ok()) else {
                return Element::zero();
            };
            if e < p as i64 {
                return Element::zero();
            }
            match alg.gen_index(&format!("sxb{}", k + 1)) {
                Some(sx) => {
                    let target = alg.one().with(sx, 1);
                    let lower = alg.one().with(g, e - p as i64);
                    alg.multiply(
                        &Element::from_monomial(target),
                        &Element::from_monomial(lower),
                    )
                }
                None => Element::zero(),
            }
        },
    )
}

fn e_infinity_keep(
    alg: &Algebra,
    ring: Ring,
) -> impl Fn(&crate::graded_algebra::Monomial) -> bool + Sync + '_ {
    let p = alg.p() as i64;
    let survivors = ring.surviving_sigma_xi();
    move |m| {
        alg.gens().iter().zip(&m.0).all(|(g, &e)| {
            if g.name.starts_with("stb") {
                e < p
            } else if let Some(k) = g.name.strip_prefix("sxb") {
                e == 0 || survivors.contains(&k.parse::<u32>().unwrap())
            } else {
                true
            }
        })
    }
}

pub fn window_box(lo: i64, hi: i64, p: u32) -> Window {
    Window::new(lo - 1, hi + 1, -(p as i64), hi + 1 + p as i64)
}

#[derive(Clone, Debug)]
pub struct BokstedtRun {
    pub ring: Ring,
    pub e2: Page,
    pub e_inf: Page,
    pub expected: Page,
    pub comparison: PageComparison,
}

/// Turns E^2 once and compares with the E-infinity closed form.
pub fn bokstedt_run(p: u32, ring: Ring, lo: i64, hi: i64, mode: ExecMode) -> Result<BokstedtRun> {
    let w = window_box(lo, hi, p);
    let alg = Arc::new(bokstedt_algebra(p, ring, w.hi)?);
    let e2 = Page::closed_form(alg.clone(), (p - 1) as u64, w, &|_| true)?;
    let keep = e_infinity_keep(&alg, ring);
    let expected = Page::closed_form(alg.clone(), p as u64, w, &keep)?;
    let step = verify_step(&e2, &bokstedt_rule(p), &expected, mode)?;
    let inner = Window::total(lo, hi);
    Ok(BokstedtRun {
        ring,
        e2: e2.restrict(&inner),
        e_inf: step.computed.restrict(&inner),
        expected: expected.restrict(&inner),
        comparison: step.comparison,
    })
}

/// E^2 of the Bokstedt spectral sequence as a page, for table output.
pub fn bokstedt_e2(p: u32, ring: Ring, lo: i64, hi: i64) -> Result<Page> {
    let w = window_box(lo, hi, p);
    let alg = Arc::new(bokstedt_algebra(p, ring, w.hi)?);
    Ok(Page::closed_form(alg, 2, w, &|_| true)?.restrict(&Window::total(lo, hi)))
}

/// Abutment H_*THH(B) as a graded vector space, for total-degree comparison.
pub fn thh_homology_series(p: u32, ring: Ring, lo: i64, hi: i64) -> Result<PoincareSeries> {
    use GeneratorKind::*;
    let pp = p as i64;
    let mut gens = Vec::new();
    let base_ring = match ring {
        Ring::EllModP => Ring::Ell,
        r => r,
    };
    push_homology_gens(p, base_ring, hi, &mut gens);
    let sx = |k: u32| Generator::new(format!("sxb{k}"), 0, xi_degree(p, k) + 1, Exterior);
    let st = |k: u32| Generator::new(format!("stb{k}"), 0, tau_degree(p, k) + 1, Polynomial);
    match ring {
        Ring::Zp => gens.push(st(0)),
        Ring::Zlocal => gens.extend([sx(1), st(1)]),
        Ring::Ell => gens.extend([sx(1), sx(2), st(2)]),
        Ring::EllModP => gens.extend([
            sx(2),
            st(2),
            Generator::new("tb0", 0, 1, Exterior),
            Generator::new("stb0", 0, 2, Truncated(p)),
            Generator::new("y", 0, 2 * pp - 1, Exterior),
        ]),
    }
    let alg = Algebra::new(p, gens)?;
    if ring == Ring::EllModP {
        let (d, i, y) = (alg.idx("tb0"), alg.idx("stb0"), alg.idx("y"));
        alg.poincare_series_filtered(lo, hi, &|m| module_filter(p, m.0[d], m.0[i], m.0[y]))
    } else {
        alg.poincare_series(lo, hi)
    }
}

/// The 2p classes x^delta m^i (delta + 2i <= 2p-2) and the top class y.
pub fn module_filter(p: u32, delta: i64, i: i64, y: i64) -> bool {
    if y == 1 {
        delta == 0 && i == 0
    } else {
        delta + 2 * i <= 2 * p as i64 - 2
    }
}

pub fn e_infinity_series(run: &BokstedtRun, lo: i64, hi: i64) -> PoincareSeries {
    cells_series(&run.e_inf.cells, lo, hi)
}

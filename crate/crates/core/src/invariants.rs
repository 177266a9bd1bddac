//! Structural checks on differentials and page sequences.

use crate::error::Result;
use crate::graded_algebra::{Algebra, Element, GeneratorKind, Monomial};
use crate::par::ExecMode;
use crate::spectral_sequence::{turn_page_with, DiffRule, Page};

/// d(d(m)).
pub fn d_squared(alg: &Algebra, rule: &DiffRule, m: &Monomial) -> Element {
    rule.apply_element(alg, &rule.apply(alg, m))
}

/// d(ab) - d(a) b - (-1)^{|a|} a d(b).
pub fn leibniz_defect(alg: &Algebra, rule: &DiffRule, a: &Monomial, b: &Monomial) -> Element {
    let f = alg.field();
    let lhs = match alg.mul_monomials(a, b) {
        Some((m, c)) => rule.apply(alg, &m).scale(f, c),
        None => Element::zero(),
    };
    let ea = Element::from_monomial(a.clone());
    let eb = Element::from_monomial(b.clone());
    let left = alg.multiply(&rule.apply(alg, a), &eb);
    let right = alg
        .multiply(&ea, &rule.apply(alg, b))
        .scale(f, f.sign(alg.odd(a)));
    lhs.sub(f, &left.add(f, &right))
}

/// Bidegrees where a later page is larger than an earlier one.
pub fn monotonicity_witnesses(pages: &[&Page]) -> Vec<String> {
    let mut out = Vec::new();
    for w in pages.windows(2) {
        let (a, b) = (w[0], w[1]);
        for &(s, t) in b.cells.keys() {
            if a.window.contains(s, t) && b.dim(s, t) > a.dim(s, t) {
                out.push(format!(
                    "E^{} -> E^{} at ({s},{t}): {} -> {}",
                    a.r,
                    b.r,
                    a.dim(s, t),
                    b.dim(s, t)
                ));
            }
        }
    }
    out
}

/// Turns `page` with `rule` and with `rule` times `c`; true when every
/// bidegree has the same dimension.
pub fn unit_invariant(page: &Page, rule: &DiffRule, c: u32, mode: ExecMode) -> Result<bool> {
    let a = turn_page_with(page, rule, mode)?;
    let b = turn_page_with(page, &rule.scaled(c), mode)?;
    let dims = |p: &Page| {
        p.cells
            .iter()
            .map(|(k, v)| (*k, v.len()))
            .collect::<Vec<_>>()
    };
    Ok(dims(&a) == dims(&b))
}

/// Builds a valid monomial from raw choices, one per generator.
pub fn monomial_from_choices(alg: &Algebra, raw: &[i64]) -> Monomial {
    let p = alg.p() as i64;
    let exps = alg
        .gens()
        .iter()
        .zip(raw.iter().chain(std::iter::repeat(&0)))
        .map(|(g, &x)| match g.kind {
            GeneratorKind::Exterior => x.rem_euclid(2),
            GeneratorKind::Truncated(h) => x.rem_euclid(h as i64),
            GeneratorKind::Polynomial => x.rem_euclid(4),
            GeneratorKind::DividedPower => x.rem_euclid(2 * p),
            GeneratorKind::Laurent => x.rem_euclid(7) - 3,
        })
        .collect();
    Monomial(exps)
}

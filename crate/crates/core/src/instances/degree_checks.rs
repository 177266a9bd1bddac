//! Exhaustive degree checks behind the extension of the differential
//! pattern from C_{p^n} to C_{p^{n+1}}.
//!
//! Both checks range over multipliers q in a window with p not dividing q.

use std::sync::Arc;

use crate::error::Result;
use crate::graded_algebra::{Algebra, Window};
use crate::instances::tate::{
    closed_form, cyclic_algebra, ClosedForm, ExpRule, Flavor, Stage, Summand,
};
use crate::numerics::{pow_i64, rho_i64};

#[derive(Clone, Debug)]
pub struct DegreeReport {
    pub cases: usize,
    pub witnesses: Vec<String>,
}

impl DegreeReport {
    pub fn ok(&self) -> bool {
        self.witnesses.is_empty()
    }
}

fn multipliers(p: u32, lo: i64, hi: i64) -> impl Iterator<Item = i64> {
    (lo..=hi).filter(move |q| q % p as i64 != 0)
}

/// For j = q p^{2n-2}: no class of the localized homotopy fixed point
/// E-infinity in the total degree of y = (tm2)^{rho(2n-1)} m2^j sits in
/// lower filtration than y.
pub fn lower_filtration_check(p: u32, n: u32, lo: i64, hi: i64) -> Result<DegreeReport> {
    let alg = Arc::new(cyclic_algebra(Flavor::Hofix, p, n)?);
    let inf = closed_form(Flavor::Hofix, p, n, Stage::Inf, &alg)?;
    let pp = p as i64;
    let h = rho_i64(p, 2 * n as i64 - 1)?;
    let s_lo = -2 * rho_i64(p, 2 * n as i64)? - 4;
    let s_y = -2 * h;
    let mut cases = 0;
    let mut witnesses = Vec::new();
    for q in multipliers(p, lo, hi) {
        let j = q * pow_i64(p, 2 * n - 2);
        let total = (2 * pp * pp - 2) * h + 2 * pp * pp * j;
        let page = inf.page(&alg, Window::new(total, total, s_lo, s_y - 1))?;
        cases += 1;
        for v in page.cells.values() {
            for m in v {
                witnesses.push(format!("j={j}: {}", alg.format_monomial(m)));
            }
        }
    }
    Ok(DegreeReport { cases, witnesses })
}

/// For i = q p^{2n}: the only odd class of E(u, eb1, l2) (x) P(t^{+-p^{2n}}, tm2)
/// one degree above z = (tm2)^{rho(2n-1)} t^i within the admissible vertical
/// degrees is t^{p^{2n+1} - p^{2n+2} + i} eb1.
pub fn unique_source_check(p: u32, n: u32, lo: i64, hi: i64) -> Result<DegreeReport> {
    let alg: Arc<Algebra> = Arc::new(cyclic_algebra(Flavor::Tate, p, n + 1)?);
    let pp = p as i64;
    let step = pow_i64(p, 2 * n);
    let any = |g: &str| (alg.idx(g), ExpRule::Any);
    let form = ClosedForm {
        label: "E(u,eb1,l2) P(t^+-p^2n, tm2)".into(),
        r: 0,
        summands: vec![Summand {
            label: "all".into(),
            rules: vec![
                any(&format!("u{}", n + 1)),
                any("eb1"),
                any("l2"),
                any("tm2"),
                (alg.idx("t"), ExpRule::Multiple(step)),
            ],
        }],
    };
    let h = rho_i64(p, 2 * n as i64 - 1)?;
    let bound = 2 * pp * pp * h - 2 * rho_i64(p, 2 * n as i64)? - 1;
    let (t, eb1) = (alg.idx("t"), alg.idx("eb1"));
    let mut cases = 0;
    let mut witnesses = Vec::new();
    for q in multipliers(p, lo, hi) {
        let i = q * step;
        let z = (2 * pp * pp - 2) * h - 2 * i;
        let d = z + 1;
        let page = form.page(&alg, Window::new(d, d, d - bound, d))?;
        cases += 1;
        let found: Vec<_> = page.cells.values().flatten().collect();
        let want = pow_i64(p, 2 * n + 1) - pow_i64(p, 2 * n + 2) + i;
        let expected = |m: &crate::graded_algebra::Monomial| {
            m.0.iter().enumerate().all(|(g, &e)| {
                e == if g == t {
                    want
                } else if g == eb1 {
                    1
                } else {
                    0
                }
            })
        };
        if found.len() != 1 || !expected(found[0]) {
            let list: Vec<String> = found.iter().map(|m| alg.format_monomial(m)).collect();
            witnesses.push(format!("i={i}: [{}]", list.join(", ")));
        }
    }
    Ok(DegreeReport { cases, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranges() {
        assert!(lower_filtration_check(5, 1, -10, 10).unwrap().ok());
        let r = unique_source_check(5, 1, -10, 10).unwrap();
        assert!(r.ok(), "{:?}", r.witnesses);
        assert_eq!(r.cases, 16);
    }
}

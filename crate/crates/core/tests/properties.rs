use std::sync::Arc;

use proptest::prelude::*;
use sseq_core::graded_algebra::{Algebra, Generator, GeneratorKind, Window};
use sseq_core::instances::bokstedt::{bokstedt_algebra, bokstedt_e2, bokstedt_rule, Ring};
use sseq_core::instances::tate::{
    closed_form, cp_tate_run, cyclic_algebra, d2_rule, s_range, Flavor, Stage,
};
use sseq_core::invariants::{
    d_squared, leibniz_defect, monomial_from_choices, monotonicity_witnesses, unit_invariant,
};
use sseq_core::par::ExecMode;
use sseq_core::spectral_sequence::{turn_page_with, DiffRule, Page};

fn raw() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..40, 12)
}

fn flavor() -> impl Strategy<Value = Flavor> {
    prop_oneof![Just(Flavor::Tate), Just(Flavor::Hofix)]
}

fn prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(5u32), Just(7u32)]
}

fn koszul(p: u32) -> Arc<Algebra> {
    use GeneratorKind::*;
    Arc::new(
        Algebra::new(
            p,
            vec![
                Generator::new("x", 0, 3, Exterior),
                Generator::new("y", 1, 3, Polynomial),
            ],
        )
        .unwrap(),
    )
}

fn koszul_rule(alg: &Algebra) -> DiffRule {
    let y = alg.idx("y");
    let x = alg.elem(&[("x", 1)]);
    DiffRule::from_generator_values(1, "d(y) = x", vec![(y, x)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d2_squares_to_zero(f in flavor(), p in prime(), n in 1u32..3, r in raw()) {
        let alg = cyclic_algebra(f, p, n).unwrap();
        let m = monomial_from_choices(&alg, &r);
        prop_assert!(d_squared(&alg, &d2_rule(f), &m).is_zero());
    }

    #[test]
    fn bokstedt_squares_to_zero(p in prime(), r in raw()) {
        let alg = bokstedt_algebra(p, Ring::Zp, 200).unwrap();
        let m = monomial_from_choices(&alg, &r);
        prop_assert!(d_squared(&alg, &bokstedt_rule(p), &m).is_zero());
    }

    #[test]
    fn d2_is_a_derivation(f in flavor(), p in prime(), a in raw(), b in raw()) {
        let alg = cyclic_algebra(f, p, 1).unwrap();
        let (a, b) = (monomial_from_choices(&alg, &a), monomial_from_choices(&alg, &b));
        let d = leibniz_defect(&alg, &d2_rule(f), &a, &b);
        prop_assert!(d.is_zero(), "{}", alg.format_element(&d));
    }

    #[test]
    fn bokstedt_is_a_derivation(p in prime(), a in raw(), b in raw()) {
        let alg = bokstedt_algebra(p, Ring::Ell, 200).unwrap();
        let (a, b) = (monomial_from_choices(&alg, &a), monomial_from_choices(&alg, &b));
        let d = leibniz_defect(&alg, &bokstedt_rule(p), &a, &b);
        prop_assert!(d.is_zero(), "{}", alg.format_element(&d));
    }

    #[test]
    fn koszul_is_a_derivation(a in raw(), b in raw()) {
        let alg = koszul(5);
        let (a, b) = (monomial_from_choices(&alg, &a), monomial_from_choices(&alg, &b));
        prop_assert!(leibniz_defect(&alg, &koszul_rule(&alg), &a, &b).is_zero());
    }

    #[test]
    fn scaled_rules_give_equal_dimensions(f in flavor(), c in 1u32..5, lo in -30i64..30) {
        let alg = Arc::new(cyclic_algebra(f, 5, 1).unwrap());
        let form = closed_form(f, 5, 1, Stage::E2, &alg).unwrap();
        let (s_lo, s_hi) = s_range(f, 5, 1, lo, lo + 25).unwrap();
        let page = form.page(&alg, Window::new(lo, lo + 25, s_lo, s_hi)).unwrap();
        prop_assert!(unit_invariant(&page, &d2_rule(f), c, ExecMode::Sequential).unwrap());
    }

    #[test]
    fn scaled_bokstedt_rule_gives_equal_dimensions(c in 1u32..7, hi in 10i64..50) {
        let page = bokstedt_e2(7, Ring::Zp, 0, hi).unwrap();
        prop_assert!(unit_invariant(&page, &bokstedt_rule(7), c, ExecMode::Sequential).unwrap());
    }

    #[test]
    fn koszul_homology_in_characteristic_p(p in prime(), hi in 10i64..60) {
        let alg = koszul(p);
        let page = Page::closed_form(alg.clone(), 1, Window::new(0, hi, 0, hi), &|_| true).unwrap();
        let next = turn_page_with(&page, &koszul_rule(&alg), ExecMode::Sequential).unwrap();
        // H(E(x) (x) P(y), dy = x) = E(x y^{p-1}) (x) P(y^p).
        let pp = p as i64;
        let expected = |s: i64, t: i64| {
            (0..=1)
                .filter(|e| {
                    let (s0, t0) = (s - e * (pp - 1), t - e * 3 * pp);
                    s0 >= 0 && s0 % pp == 0 && t0 == 3 * s0
                })
                .count()
        };
        let w = next.window;
        for s in w.s_lo.max(0)..=w.s_hi.min(hi) {
            for t in 0..=3 * hi {
                if w.contains(s, t) {
                    prop_assert_eq!(next.dim(s, t), expected(s, t), "({}, {})", s, t);
                }
            }
        }
    }

    #[test]
    fn parallel_and_sequential_pages_agree(f in flavor(), lo in -20i64..20) {
        let alg = Arc::new(cyclic_algebra(f, 5, 1).unwrap());
        let (s_lo, s_hi) = s_range(f, 5, 1, lo, lo + 30).unwrap();
        let page = closed_form(f, 5, 1, Stage::E2, &alg).unwrap().page(&alg, Window::new(lo, lo + 30, s_lo, s_hi)).unwrap();
        let a = turn_page_with(&page, &d2_rule(f), ExecMode::Parallel).unwrap();
        let b = turn_page_with(&page, &d2_rule(f), ExecMode::Sequential).unwrap();
        prop_assert_eq!(a.dump(), b.dump());
    }
}

#[test]
fn pages_shrink_along_the_run() {
    let run = cp_tate_run(5, -20, 120, ExecMode::default()).unwrap();
    let pages: Vec<&Page> = run.checks.iter().map(|c| &c.page).collect();
    let w = monotonicity_witnesses(&pages);
    assert!(w.is_empty(), "{w:?}");
}

#[test]
fn bokstedt_pages_shrink() {
    let e2 = bokstedt_e2(5, Ring::EllModP, 0, 60).unwrap();
    let next = turn_page_with(&e2, &bokstedt_rule(5), ExecMode::default()).unwrap();
    assert!(monotonicity_witnesses(&[&e2, &next]).is_empty());
}

use proptest::prelude::*;
use sseq_core::tc::{self, Class, Side};

fn window() -> impl Strategy<Value = (i64, i64)> {
    (9i64..150, 0i64..80).prop_map(|(lo, w)| (lo, lo + w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rh_clauses_hold(w in window()) {
        let r = tc::rh_map_check(5, w.0, w.1, tc::DEFAULT_KMAX).unwrap();
        prop_assert!(r.ok());
    }

    #[test]
    fn exactness_on_subwindows(w in window()) {
        let (_, ex) = tc::exactness_check(5, w.0, w.1, tc::DEFAULT_KMAX).unwrap();
        prop_assert!(ex.failures.is_empty(), "{:?}", ex.failures);
    }

    #[test]
    fn g_is_bijective(w in window()) {
        prop_assert!(tc::g_check(5, w.0, w.1, tc::DEFAULT_KMAX).unwrap().bijective.ok());
    }

    #[test]
    fn maps_preserve_degree(eb in 0u8..2, l in 0u8..2, mu0 in 0i64..5, e in -40i64..40, c in 0i64..30) {
        let x = Class::fixed(eb, l, mu0, e, c);
        if let Some(y) = tc::rh_map(5, &x).unwrap() {
            prop_assert_eq!(tc::degree(Side::Fixed, 5, &x), tc::degree(Side::Tate, 5, &y));
        }
    }

    #[test]
    fn decomposition_is_a_partition(w in window()) {
        let dec = tc::tf_decompose(5, w.0, w.1, tc::DEFAULT_KMAX).unwrap();
        let total = tc::enumerate(Side::Tate, 5, tc::DEFAULT_KMAX, w.0, w.1).unwrap().len();
        prop_assert_eq!(dec.len(), total);
    }
}

#[test]
fn euler_characteristics_vanish() {
    for p in [5u32, 7, 11, 13] {
        assert_eq!(tc::k_presentation(p).euler(), 0);
        assert!(tc::k_lp_checks(p).ok(p));
    }
}

#[test]
fn presentation_ids_resolve() {
    for id in tc::presentation_ids() {
        assert!(tc::presentation(id, 5).is_ok(), "{id}");
    }
    assert!(tc::presentation("nope", 5).is_err());
}

use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use sseq_core::fp_linalg::{rank, Fp, SparseMatrix};
use sseq_core::graded_algebra::{Algebra, Generator, GeneratorKind, PoincareSeries};
use sseq_core::instances::bokstedt::Ring;
use sseq_core::instances::hh::hh_bruteforce;
use sseq_core::instances::tate::{basis_in_degree, cp_tate_run, Stage};
use sseq_core::instances::v1::v1_thh_series;
use sseq_core::numerics::{binom_mod_p, rho, rho_i64, vp};
use sseq_core::par::ExecMode;
use sseq_core::steenrod::{alpha_forcing, v1_thh_comodule};
use sseq_core::tc;

fn alternating_sum(p: i64, top: u32) -> i64 {
    (0..=top).map(|i| (-p).pow(i)).sum()
}

fn even_powers(p: i64, k: u32) -> i64 {
    (1..=k).map(|i| p.pow(2 * i)).sum()
}

#[test]
fn rho_matches_geometric_sums() {
    for p in [3u32, 5, 7, 11, 13] {
        let pp = p as i64;
        for k in 1..=5u32 {
            assert_eq!(
                rho_i64(p, 2 * k as i64 - 1).unwrap(),
                alternating_sum(pp, 2 * k)
            );
            assert_eq!(rho_i64(p, 2 * k as i64).unwrap(), even_powers(pp, k));
        }
    }
}

#[test]
fn rho_big_values_agree_with_small() {
    for k in -1..=8 {
        assert_eq!(rho(5, k).unwrap(), BigInt::from(rho_i64(5, k).unwrap()));
    }
}

#[test]
fn page_indices_at_five() {
    // E^{2p^2-2p+3} and E^{2p^2+1} follow the first odd and even differentials.
    assert_eq!(Stage::Odd(1).r(5, 1).unwrap(), 2 * 25 - 2 * 5 + 3);
    assert_eq!(Stage::Even(1).r(5, 1).unwrap(), 2 * 25 + 1);
}

fn binom_exact(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn dense_rank(p: u32, rows: usize, cols: usize, entries: &[(usize, usize, u32)]) -> usize {
    let p = p as u64;
    let mut m = vec![vec![0u64; cols]; rows];
    for &(r, c, v) in entries {
        m[r][c] = (m[r][c] + v as u64) % p;
    }
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = (1..p).find(|x| x * m[rank][c] % p == 1).unwrap();
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c] * inv % p;
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x = (*x + p * p - f * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

proptest! {
    #[test]
    fn rank_matches_dense_elimination(
        p in prop_oneof![Just(3u32), Just(5u32), Just(7u32)],
        rows in 1usize..9,
        cols in 1usize..9,
        raw in prop::collection::vec((0usize..9, 0usize..9, 0u32..7), 0..40),
    ) {
        let entries: Vec<_> = raw.into_iter().map(|(r, c, v)| (r % rows, c % cols, v % p)).collect();
        let f = Fp::new(p).unwrap();
        let m = SparseMatrix::new(f, rows, cols, entries.clone()).unwrap();
        prop_assert_eq!(rank(f, &m), dense_rank(p, rows, cols, &entries));
    }

    #[test]
    fn divided_power_constants_match_exact(i in 0u64..40, j in 0u64..40) {
        let want = (binom_exact(i + j, i) % 7) as u32;
        prop_assert_eq!(binom_mod_p(7, i, j).unwrap().value(), want);
    }

    #[test]
    fn valuation_by_division(x in 1i64..1_000_000, e in 0u32..6) {
        let n = x * 5i64.pow(e);
        let mut m = n;
        let mut v = 0;
        while m % 5 == 0 {
            m /= 5;
            v += 1;
        }
        prop_assert_eq!(vp(5, &BigInt::from(n)).unwrap(), v);
    }
}

fn hh_exterior_by_hand(d: i64, max: i64) -> BTreeMap<(i64, i64), usize> {
    // E(x) (x) Gamma(sigma x): gamma_j at (j, jd), x gamma_j at (j, (j+1)d).
    let mut out = BTreeMap::new();
    for j in 0..=max {
        for t in [j * d, (j + 1) * d] {
            if j + t <= max {
                *out.entry((j, t)).or_insert(0) += 1;
            }
        }
    }
    out
}

fn hh_polynomial_by_hand(d: i64, max: i64) -> BTreeMap<(i64, i64), usize> {
    // P(x) (x) E(sigma x): x^k at (0, kd), x^k sigma x at (1, (k+1)d).
    let mut out = BTreeMap::new();
    for k in 0..=max {
        for (s, t) in [(0, k * d), (1, (k + 1) * d)] {
            if s + t <= max {
                *out.entry((s, t)).or_insert(0) += 1;
            }
        }
    }
    out
}

#[test]
fn hochschild_homology_of_one_generator() {
    for p in [5u32, 7] {
        let odd = 2 * p as i64 - 1;
        let e = Algebra::new(
            p,
            vec![Generator::new("x", 0, odd, GeneratorKind::Exterior)],
        )
        .unwrap();
        assert_eq!(hh_bruteforce(&e, 12).unwrap(), hh_exterior_by_hand(odd, 12));
        let q = Algebra::new(
            p,
            vec![Generator::new("x", 0, 2, GeneratorKind::Polynomial)],
        )
        .unwrap();
        assert_eq!(hh_bruteforce(&q, 12).unwrap(), hh_polynomial_by_hand(2, 12));
    }
}

#[test]
fn alpha_is_minus_one() {
    for p in [5u32, 7] {
        let a = alpha_forcing(&v1_thh_comodule(p).unwrap()).unwrap();
        assert_eq!(a.primitive_alphas, vec![p - 1]);
        assert_eq!(a.lift_kernel_dim, 0);
    }
}

#[test]
fn degree_eight_of_the_cp_tate_abutment() {
    let run = cp_tate_run(5, -20, 120, ExecMode::default()).unwrap();
    let b = basis_in_degree(run.last(), 8);
    assert_eq!(b.len(), 2);
    assert!(b.contains(&"eb1*l2*t^25".to_string()));
}

#[test]
fn k_rank_and_euler() {
    for p in [5u32, 7, 11] {
        let k = tc::k_presentation(p);
        let pp = p as usize;
        assert_eq!(k.rank(), 2 * pp * pp - 2 * pp + 8);
        assert_eq!(k.euler(), 0);
    }
}

#[test]
fn tc_starts_with_the_boundary_class() {
    let s = tc::tc_presentation(5).series(-3, 8);
    assert_eq!(s.get(-2), 0);
    assert_eq!(s.get(-1), 1);
    assert_eq!(s.get(0), 1);
    assert_eq!(s.get(8), 1);
}

#[test]
fn k_has_the_eb1_class() {
    assert!(tc::k_presentation(5).series(-1, 20).get(9) >= 1);
}

#[test]
fn v1_thh_of_ell_mod_p_in_low_degrees() {
    let s = v1_thh_series(5, Ring::EllModP, 0, 9).unwrap();
    assert_eq!(
        s,
        PoincareSeries::from_counts(0, 9, (0..=9).map(|n| (n, 1)))
    );
}

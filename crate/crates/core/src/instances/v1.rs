//! V(1)_*THH(B) as graded vector spaces and the comodule Poincare identity
//! PS(E(t0,t1)) PS(H_*THH(B)) = PS(A_*) PS(V(1)_*THH(B)).

use crate::error::Result;
use crate::graded_algebra::{Algebra, Generator, GeneratorKind, PoincareSeries};
use crate::instances::bokstedt::{module_filter, thh_homology_series, Ring};
use crate::steenrod::DualSteenrod;

/// Generators of V(1)_*THH(B) with the ring of the presentation.
pub fn v1_thh_algebra(p: u32, ring: Ring) -> Result<Algebra> {
    use GeneratorKind::*;
    let pp = p as i64;
    let g = |n: &str, d: i64, k: GeneratorKind| Generator::new(n, 0, d, k);
    let gens = match ring {
        Ring::Zp => vec![
            g("e0", 1, Exterior),
            g("e1", 2 * pp - 1, Exterior),
            g("m0", 2, Polynomial),
        ],
        Ring::Zlocal => vec![
            g("e1", 2 * pp - 1, Exterior),
            g("l1", 2 * pp - 1, Exterior),
            g("m1", 2 * pp, Polynomial),
        ],
        Ring::Ell => vec![
            g("l1", 2 * pp - 1, Exterior),
            g("l2", 2 * pp * pp - 1, Exterior),
            g("m2", 2 * pp * pp, Polynomial),
        ],
        Ring::EllModP => vec![
            g("e0", 1, Exterior),
            g("m0", 2, Truncated(p)),
            g("eb1", 2 * pp - 1, Exterior),
            g("l2", 2 * pp * pp - 1, Exterior),
            g("m2", 2 * pp * pp, Polynomial),
        ],
    };
    Algebra::new(p, gens)
}

pub fn v1_thh_series(p: u32, ring: Ring, lo: i64, hi: i64) -> Result<PoincareSeries> {
    let alg = v1_thh_algebra(p, ring)?;
    if ring == Ring::EllModP {
        let (d, i, y) = (alg.idx("e0"), alg.idx("m0"), alg.idx("eb1"));
        alg.poincare_series_filtered(lo, hi, &|m| module_filter(p, m.0[d], m.0[i], m.0[y]))
    } else {
        alg.poincare_series(lo, hi)
    }
}

#[derive(Clone, Debug)]
pub struct PoincareIdentity {
    pub ring: Ring,
    pub lhs: PoincareSeries,
    pub rhs: PoincareSeries,
}

impl PoincareIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Both sides of the identity in degrees [0, max].
pub fn poincare_identity(p: u32, ring: Ring, max: i64) -> Result<PoincareIdentity> {
    let pp = p as i64;
    let v1 = Algebra::new(
        p,
        vec![
            Generator::new("t0", 0, 1, GeneratorKind::Exterior),
            Generator::new("t1", 0, 2 * pp - 1, GeneratorKind::Exterior),
        ],
    )?;
    let a = DualSteenrod::new(p, max)?;
    let lhs = v1
        .poincare_series(0, max)?
        .product(&thh_homology_series(p, ring, 0, max)?);
    let rhs = a
        .algebra()
        .poincare_series(0, max)?
        .product(&v1_thh_series(p, ring, 0, max)?);
    Ok(PoincareIdentity { ring, lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_low_degrees() {
        assert_eq!(v1_thh_series(5, Ring::EllModP, 0, 9).unwrap().get(9), 1);
        assert_eq!(v1_thh_series(5, Ring::Zp, 0, 10).unwrap().get(10), 2);
    }
}

//! Brute-force Hochschild homology from the normalized Hochschild complex.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::fp_linalg::{rank, SparseMatrix, SparseVec};
use crate::graded_algebra::{Algebra, Generator, GeneratorKind, Monomial, Window};

type Chain = Vec<Monomial>;

/// dim HH_{n, q}(A) for n + q <= `max_total`, keyed by (n, q).
///
/// A must be concentrated in internal degrees (s = 0) with every generator
/// of positive degree.
pub fn hh_bruteforce(alg: &Algebra, max_total: i64) -> Result<BTreeMap<(i64, i64), usize>> {
    for g in alg.gens() {
        if g.s != 0 || g.t <= 0 {
            return Err(Error::InvalidGenerators(format!(
                "{} must sit in positive internal degree",
                g.name
            )));
        }
    }
    let f = alg.field();
    let basis: Vec<(Monomial, i64)> = alg
        .enumerate(&Window::new(0, max_total + 1, 0, 0))?
        .into_values()
        .flatten()
        .map(|m| {
            let d = alg.total_degree(&m);
            (m, d)
        })
        .collect();
    let reduced: Vec<&(Monomial, i64)> = basis.iter().filter(|(m, _)| !m.is_one()).collect();

    // Chains grouped by (n, internal degree) with n + internal <= max_total + 1.
    let mut groups: BTreeMap<(i64, i64), Vec<Chain>> = BTreeMap::new();
    let mut frontier: Vec<(Chain, i64)> =
        basis.iter().map(|(m, d)| (vec![m.clone()], *d)).collect();
    let mut n = 0i64;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (chain, q) in frontier {
            if n + q <= max_total + 1 {
                groups.entry((n, q)).or_default().push(chain.clone());
                for (m, d) in &reduced {
                    if n + 1 + q + d <= max_total + 1 {
                        let mut c = chain.clone();
                        c.push(m.clone());
                        next.push((c, q + d));
                    }
                }
            }
        }
        frontier = next;
        n += 1;
    }
    let index: HashMap<(i64, i64), HashMap<Chain, usize>> = groups
        .iter()
        .map(|(k, v)| {
            (
                *k,
                v.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect(),
            )
        })
        .collect();

    let boundary = |chain: &Chain| -> Vec<(Chain, u32)> { hochschild_boundary(alg, chain) };
    let mut ranks: HashMap<(i64, i64), usize> = HashMap::new();
    for ((n, q), chains) in &groups {
        if *n == 0 {
            continue;
        }
        let Some(tgt) = index.get(&(n - 1, *q)) else {
            continue;
        };
        let mut rows: Vec<SparseVec> = Vec::new();
        for c in chains {
            let mut v: BTreeMap<usize, u32> = BTreeMap::new();
            for (x, coef) in boundary(c) {
                let i = tgt[&x];
                let slot = v.entry(i).or_insert(0);
                *slot = f.add(*slot, coef);
            }
            rows.push(v.into_iter().filter(|e| e.1 != 0).collect());
        }
        // b o b = 0 on this group.
        if *n >= 2 {
            for c in chains {
                let mut acc: BTreeMap<Chain, u32> = BTreeMap::new();
                for (x, a) in boundary(c) {
                    for (y, b) in boundary(&x) {
                        let slot = acc.entry(y).or_insert(0);
                        *slot = f.add(*slot, f.mul(a, b));
                    }
                }
                if acc.values().any(|&v| v != 0) {
                    return Err(Error::NonzeroSquare(format!("{c:?}"), 1));
                }
            }
        }
        let m = SparseMatrix::from_rows(f, tgt.len(), &rows)?;
        ranks.insert((*n, *q), rank(f, &m));
    }
    let mut out = BTreeMap::new();
    for ((n, q), chains) in &groups {
        if n + q > max_total {
            continue;
        }
        let out_rank = ranks.get(&(*n, *q)).copied().unwrap_or(0);
        let in_rank = ranks.get(&(n + 1, *q)).copied().unwrap_or(0);
        let d = chains.len() - out_rank - in_rank;
        if d > 0 {
            out.insert((*n, *q), d);
        }
    }
    Ok(out)
}

/// b(a0[a1|...|an]) with the Koszul sign on the cyclic face.
fn hochschild_boundary(alg: &Algebra, c: &Chain) -> Vec<(Chain, u32)> {
    let f = alg.field();
    let n = c.len() - 1;
    let mut out = Vec::new();
    for i in 0..n {
        if let Some((m, coef)) = alg.mul_monomials(&c[i], &c[i + 1]) {
            if i > 0 && m.is_one() {
                continue;
            }
            let mut x = c[..i].to_vec();
            x.push(m);
            x.extend_from_slice(&c[i + 2..]);
            out.push((x, f.mul(coef, f.sign(i % 2 == 1))));
        }
    }
    if n >= 1 {
        let last = &c[n];
        let rest: i64 = c[..n].iter().map(|m| alg.total_degree(m)).sum();
        let odd = (n as i64 + alg.total_degree(last) * rest).rem_euclid(2) == 1;
        if let Some((m, coef)) = alg.mul_monomials(last, &c[0]) {
            let mut x = vec![m];
            x.extend_from_slice(&c[1..n]);
            out.push((x, f.mul(coef, f.sign(odd))));
        }
    }
    out
}

/// Closed form A (x) Gamma(sigma x) or A (x) E(sigma x) for a single
/// generator x, as bigraded dimensions keyed by (n, q).
pub fn hh_closed_form_single(
    p: u32,
    degree: i64,
    max_total: i64,
) -> Result<BTreeMap<(i64, i64), usize>> {
    use GeneratorKind::*;
    let gens = if degree % 2 == 1 {
        vec![
            Generator::new("x", 0, degree, Exterior),
            Generator::new("sx", 1, degree, DividedPower),
        ]
    } else {
        vec![
            Generator::new("x", 0, degree, Polynomial),
            Generator::new("sx", 1, degree, Exterior),
        ]
    };
    bigraded_dims(&Algebra::new(p, gens)?, max_total)
}

/// Bigraded dimensions of an algebra in total degrees [0, max_total].
pub fn bigraded_dims(alg: &Algebra, max_total: i64) -> Result<BTreeMap<(i64, i64), usize>> {
    Ok(alg
        .enumerate(&Window::new(0, max_total, 0, max_total))?
        .into_iter()
        .filter(|(_, v)| !v.is_empty())
        .map(|(k, v)| (k, v.len()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exterior_on_degree_one() {
        let a = Algebra::new(3, vec![Generator::new("x", 0, 1, GeneratorKind::Exterior)]).unwrap();
        assert_eq!(
            hh_bruteforce(&a, 8).unwrap(),
            hh_closed_form_single(3, 1, 8).unwrap()
        );
    }

    #[test]
    fn degree_zero_generator_rejected() {
        let a = Algebra::new(
            3,
            vec![Generator::new("x", 0, 0, GeneratorKind::Truncated(3))],
        )
        .unwrap();
        assert!(hh_bruteforce(&a, 4).is_err());
    }
}

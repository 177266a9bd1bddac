//! Exact sparse linear algebra over F_p.
//!
//! Vectors are sorted `(index, value)` lists with no stored zeros. Every
//! routine is deterministic: pivots are chosen leftmost-first and kernel
//! vectors are emitted in ascending free-column order.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use crate::error::{Error, Result};

pub type SparseVec = Vec<(usize, u32)>;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Arithmetic context for the prime field F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Fp> {
        if p < 3 || !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(Fp { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a as u64 % self.p as u64;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p as u64;
            }
            base = base * base % self.p as u64;
            e >>= 1;
        }
        acc as u32
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, (self.p - 2) as u64)
    }

    pub fn sign(&self, odd: bool) -> u32 {
        if odd {
            self.p - 1
        } else {
            1
        }
    }
}

/// An element of F_p carrying its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpScalar {
    value: u32,
    modulus: u32,
}

impl FpScalar {
    pub fn new(value: i64, modulus: u32) -> Result<FpScalar> {
        let f = Fp::new(modulus)?;
        Ok(FpScalar {
            value: f.reduce(value),
            modulus,
        })
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }
}

/// Sparse matrix with canonical (row, col) ordered entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<(usize, usize, u32)>,
}

impl SparseMatrix {
    pub fn new(
        field: Fp,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, u32)>,
    ) -> Result<SparseMatrix> {
        let mut acc: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({r},{c}) outside {rows}x{cols}"
                )));
            }
            if v >= field.p() {
                return Err(Error::OutOfRange(format!(
                    "entry value {v} mod {}",
                    field.p()
                )));
            }
            let slot = acc.entry((r, c)).or_insert(0);
            *slot = field.add(*slot, v);
        }
        let entries = acc
            .into_iter()
            .filter(|&(_, v)| v != 0)
            .map(|((r, c), v)| (r, c, v))
            .collect();
        Ok(SparseMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(field: Fp, cols: usize, rows: &[SparseVec]) -> Result<SparseMatrix> {
        let entries = rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)));
        SparseMatrix::new(field, rows.len(), cols, entries)
    }

    pub fn entries(&self) -> &[(usize, usize, u32)] {
        &self.entries
    }

    pub fn row_vectors(&self) -> Vec<SparseVec> {
        let mut out = vec![Vec::new(); self.rows];
        for &(r, c, v) in &self.entries {
            out[r].push((c, v));
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut entries: Vec<_> = self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        entries.sort_unstable();
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }
}

/// Incrementally maintained reduced row echelon basis.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Fp,
    rows: Vec<SparseVec>,
    pivot_of: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new(field: Fp) -> Echelon {
        Echelon {
            field,
            rows: Vec::new(),
            pivot_of: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; the result has no pivot columns.
    pub fn reduce(&self, v: &[(usize, u32)]) -> SparseVec {
        let f = self.field;
        let mut acc: BTreeMap<usize, u32> = v.iter().copied().filter(|e| e.1 != 0).collect();
        let hits: Vec<(usize, u32)> = v
            .iter()
            .filter(|(c, x)| *x != 0 && self.pivot_of.contains_key(c))
            .copied()
            .collect();
        for (c, x) in hits {
            let row = &self.rows[self.pivot_of[&c]];
            for &(rc, rv) in row {
                let slot = acc.entry(rc).or_insert(0);
                *slot = f.sub(*slot, f.mul(x, rv));
            }
        }
        acc.into_iter().filter(|e| e.1 != 0).collect()
    }

    pub fn contains(&self, v: &[(usize, u32)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns false if it was already dependent.
    pub fn insert(&mut self, v: &[(usize, u32)]) -> bool {
        let f = self.field;
        let w = self.reduce(v);
        if w.is_empty() {
            return false;
        }
        let inv = f.inv(w[0].1);
        let w: SparseVec = w.into_iter().map(|(c, x)| (c, f.mul(x, inv))).collect();
        let pc = w[0].0;
        for row in self.rows.iter_mut() {
            if let Ok(pos) = row.binary_search_by_key(&pc, |e| e.0) {
                let x = row[pos].1;
                let mut acc: BTreeMap<usize, u32> = row.iter().copied().collect();
                for &(c, y) in &w {
                    let slot = acc.entry(c).or_insert(0);
                    *slot = f.sub(*slot, f.mul(x, y));
                }
                *row = acc.into_iter().filter(|e| e.1 != 0).collect();
            }
        }
        self.pivot_of.insert(pc, self.rows.len());
        self.rows.push(w);
        true
    }

    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.pivot_of.keys().copied().collect();
        p.sort_unstable();
        p
    }

    /// Rows sorted by pivot column.
    pub fn sorted_rows(&self) -> Vec<SparseVec> {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|r| r[0].0);
        rows
    }
}

#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: SparseMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

pub fn rref(field: Fp, m: &SparseMatrix) -> Rref {
    let mut ech = Echelon::new(field);
    for row in m.row_vectors() {
        ech.insert(&row);
    }
    let rows = ech.sorted_rows();
    let rank = rows.len();
    let pivots = rows.iter().map(|r| r[0].0).collect();
    let entries: Vec<_> = rows
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.iter().map(move |&(c, v)| (i, c, v)))
        .collect();
    Rref {
        matrix: SparseMatrix {
            rows: m.rows,
            cols: m.cols,
            entries,
        },
        pivots,
        rank,
    }
}

pub fn rank(field: Fp, m: &SparseMatrix) -> usize {
    rref(field, m).rank
}

/// Basis of `{x : m x = 0}`, one vector per free column in ascending order,
/// with that free coordinate equal to 1.
pub fn kernel_basis(field: Fp, m: &SparseMatrix) -> Vec<SparseVec> {
    let r = rref(field, m);
    let rows = r.matrix.row_vectors();
    let pivot_set: std::collections::HashSet<usize> = r.pivots.iter().copied().collect();
    let mut by_free: BTreeMap<usize, Vec<(usize, u32)>> = (0..m.cols)
        .filter(|c| !pivot_set.contains(c))
        .map(|c| (c, vec![(c, 1)]))
        .collect();
    for (i, &pc) in r.pivots.iter().enumerate() {
        for &(c, v) in &rows[i] {
            if c != pc {
                if let Some(vec) = by_free.get_mut(&c) {
                    vec.push((pc, field.neg(v)));
                }
            }
        }
    }
    by_free
        .into_values()
        .map(|mut v| {
            v.sort_unstable();
            v
        })
        .collect()
}

/// Elements of `ambient` that are not pivots after echelonizing `subspace`
/// in ambient order; they represent a basis of the quotient.
pub fn quotient_basis<T: Clone + Eq + Hash + std::fmt::Debug>(
    field: Fp,
    ambient: &[T],
    subspace: &[Vec<(T, u32)>],
) -> Result<Vec<T>> {
    let index: HashMap<&T, usize> = ambient.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut ech = Echelon::new(field);
    for v in subspace {
        let mut sv = Vec::with_capacity(v.len());
        for (id, x) in v {
            let i = index
                .get(id)
                .ok_or_else(|| Error::OutsideAmbient(format!("{id:?}")))?;
            sv.push((*i, field.reduce(*x as i64)));
        }
        sv.sort_unstable();
        ech.insert(&sv);
    }
    let pivots: std::collections::HashSet<usize> = ech.pivots().into_iter().collect();
    Ok(ambient
        .iter()
        .enumerate()
        .filter(|(i, _)| !pivots.contains(i))
        .map(|(_, x)| x.clone())
        .collect())
}

/// Solves `sum_i x_i columns[i] = rhs`. Returns one solution (free
/// variables zero) and the dimension of the solution space's kernel.
pub fn solve(field: Fp, columns: &[SparseVec], rhs: &SparseVec) -> Option<(Vec<u32>, usize)> {
    let n = columns.len();
    let mut entries = Vec::new();
    let mut nrows = 0;
    for (j, col) in columns.iter().enumerate() {
        for &(r, v) in col {
            entries.push((r, j, v));
            nrows = nrows.max(r + 1);
        }
    }
    for &(r, v) in rhs {
        entries.push((r, n, v));
        nrows = nrows.max(r + 1);
    }
    let m = SparseMatrix::new(field, nrows, n + 1, entries).ok()?;
    let r = rref(field, &m);
    if r.pivots.contains(&n) {
        return None;
    }
    let mut x = vec![0u32; n];
    for (i, row) in r.matrix.row_vectors().into_iter().take(r.rank).enumerate() {
        let pc = r.pivots[i];
        let rv = row.iter().find(|e| e.0 == n).map(|e| e.1).unwrap_or(0);
        x[pc] = rv;
    }
    Some((x, n - r.rank))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    #[test]
    fn small_kernel() {
        let m = SparseMatrix::new(f5(), 1, 2, [(0, 0, 1), (0, 1, 2)]).unwrap();
        assert_eq!(kernel_basis(f5(), &m), vec![vec![(0, 3), (1, 1)]]);
        assert_eq!(rank(f5(), &m), 1);
    }

    #[test]
    fn quotient_of_diagonal() {
        let q = quotient_basis(f5(), &["a", "b"], &[vec![("a", 1), ("b", 1)]]).unwrap();
        assert_eq!(q, vec!["b"]);
        let e = quotient_basis(f5(), &["a"], &[vec![("c", 1)]]);
        assert!(matches!(e, Err(Error::OutsideAmbient(_))));
    }

    #[test]
    fn zero_columns_and_non_prime() {
        let m = SparseMatrix::new(f5(), 3, 0, []).unwrap();
        assert!(kernel_basis(f5(), &m).is_empty());
        assert_eq!(Fp::new(4), Err(Error::NotPrime(4)));
        assert!(Fp::new(2).is_err());
    }

    #[test]
    fn solve_unique() {
        let f = f5();
        let cols = vec![vec![(0, 1)], vec![(1, 1)]];
        let (x, k) = solve(f, &cols, &vec![(0, 2), (1, 4)]).unwrap();
        assert_eq!((x, k), (vec![2, 4], 0));
        assert!(solve(f, &cols, &vec![(2, 1)]).is_none());
    }
}

//! Bigraded graded-commutative algebras over F_p built from one-generator
//! blocks, with Koszul-signed multiplication and windowed basis enumeration.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fp_linalg::Fp;
use crate::numerics::binom_lucas;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    Exterior,
    Polynomial,
    Laurent,
    Truncated(u32),
    DividedPower,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub s: i64,
    pub t: i64,
    pub kind: GeneratorKind,
    grouped: bool,
}

impl Generator {
    pub fn new(name: impl Into<String>, s: i64, t: i64, kind: GeneratorKind) -> Generator {
        Generator {
            name: name.into(),
            s,
            t,
            kind,
            grouped: false,
        }
    }

    /// Prints as `(name)^e`; used for generators named after a product.
    pub fn grouped(mut self) -> Generator {
        self.grouped = true;
        self
    }

    pub fn total(&self) -> i64 {
        self.s + self.t
    }

    pub fn odd(&self) -> bool {
        self.total().rem_euclid(2) == 1
    }

    fn effective(&self) -> GeneratorKind {
        match self.kind {
            GeneratorKind::Exterior if !self.odd() => GeneratorKind::Truncated(2),
            k => k,
        }
    }

    /// Largest exponent allowed, or None if unbounded.
    pub fn max_exponent(&self) -> Option<i64> {
        match self.effective() {
            GeneratorKind::Exterior => Some(1),
            GeneratorKind::Truncated(h) => Some(h as i64 - 1),
            _ => None,
        }
    }

    pub fn valid_exponent(&self, e: i64) -> bool {
        match self.kind {
            GeneratorKind::Laurent => true,
            _ => e >= 0 && self.max_exponent().is_none_or(|m| e <= m),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn exps(&self) -> &[i64] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn with(&self, i: usize, e: i64) -> Monomial {
        let mut v = self.0.clone();
        v[i] = e;
        Monomial(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

/// Finite F_p-linear combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Element {
    terms: BTreeMap<Monomial, u32>,
}

impl Element {
    pub fn zero() -> Element {
        Element::default()
    }

    pub fn from_monomial(m: Monomial) -> Element {
        Element::term(m, 1)
    }

    pub fn term(m: Monomial, c: u32) -> Element {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(m, c);
        }
        Element { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, f: Fp, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c % f.p());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let x = f.add(*o.get(), c);
                if x == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = x;
                }
            }
        }
    }

    pub fn add_assign(&mut self, f: Fp, other: &Element) {
        for (m, c) in other.terms() {
            self.add_term(f, m.clone(), c);
        }
    }

    pub fn add(&self, f: Fp, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_assign(f, other);
        out
    }

    pub fn sub(&self, f: Fp, other: &Element) -> Element {
        self.add(f, &other.scale(f, f.p() - 1))
    }

    pub fn scale(&self, f: Fp, c: u32) -> Element {
        let c = c % f.p();
        if c == 0 {
            return Element::zero();
        }
        Element {
            terms: self
                .terms
                .iter()
                .map(|(m, &x)| (m.clone(), f.mul(x, c)))
                .collect(),
        }
    }

    pub fn map_monomials(&self, f: Fp, g: impl Fn(&Monomial) -> Monomial) -> Element {
        let mut out = Element::zero();
        for (m, c) in self.terms() {
            out.add_term(f, g(m), c);
        }
        out
    }
}

/// Degree box: total degree in `[lo, hi]` and filtration `s` in `[s_lo, s_hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
    pub s_lo: i64,
    pub s_hi: i64,
}

const S_UNBOUNDED: i64 = 1 << 40;
const MAX_LAURENT_SPAN: i64 = 50_000_000;

impl Window {
    pub fn new(lo: i64, hi: i64, s_lo: i64, s_hi: i64) -> Window {
        Window { lo, hi, s_lo, s_hi }
    }

    /// Total-degree window with no constraint on `s`.
    pub fn total(lo: i64, hi: i64) -> Window {
        Window::new(lo, hi, -S_UNBOUNDED, S_UNBOUNDED)
    }

    pub fn contains(&self, s: i64, t: i64) -> bool {
        let n = s + t;
        self.lo <= n && n <= self.hi && self.s_lo <= s && s <= self.s_hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || self.s_lo > self.s_hi
    }

    pub fn intersect(&self, o: &Window) -> Window {
        Window::new(
            self.lo.max(o.lo),
            self.hi.min(o.hi),
            self.s_lo.max(o.s_lo),
            self.s_hi.min(o.s_hi),
        )
    }
}

pub type Cells = BTreeMap<(i64, i64), Vec<Monomial>>;

/// Total-degree Poincare series truncated to `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PoincareSeries {
    pub lo: i64,
    pub hi: i64,
    dims: Vec<u64>,
}

impl PoincareSeries {
    pub fn zero(lo: i64, hi: i64) -> PoincareSeries {
        let len = if hi >= lo { (hi - lo + 1) as usize } else { 0 };
        PoincareSeries {
            lo,
            hi,
            dims: vec![0; len],
        }
    }

    pub fn from_counts(lo: i64, hi: i64, counts: impl IntoIterator<Item = (i64, u64)>) -> Self {
        let mut ps = PoincareSeries::zero(lo, hi);
        for (n, c) in counts {
            ps.add(n, c);
        }
        ps
    }

    pub fn add(&mut self, n: i64, c: u64) {
        if n >= self.lo && n <= self.hi {
            self.dims[(n - self.lo) as usize] += c;
        }
    }

    pub fn get(&self, n: i64) -> u64 {
        if n >= self.lo && n <= self.hi {
            self.dims[(n - self.lo) as usize]
        } else {
            0
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.dims
            .iter()
            .enumerate()
            .map(move |(i, &d)| (self.lo + i as i64, d))
    }

    /// Truncated product; both factors must be supported in degrees >= 0 and
    /// start at 0 for the truncation to be exact.
    pub fn product(&self, other: &PoincareSeries) -> PoincareSeries {
        let lo = self.lo.min(other.lo);
        let hi = self.hi.min(other.hi);
        let mut out = PoincareSeries::zero(lo, hi);
        for (a, x) in self.iter().filter(|e| e.1 != 0) {
            for (b, y) in other.iter().filter(|e| e.1 != 0) {
                out.add(a + b, x * y);
            }
        }
        out
    }

    pub fn first_difference(&self, other: &PoincareSeries) -> Option<(i64, u64, u64)> {
        let lo = self.lo.min(other.lo);
        let hi = self.hi.max(other.hi);
        (lo..=hi).find_map(|n| {
            let (a, b) = (self.get(n), other.get(n));
            (a != b).then_some((n, a, b))
        })
    }
}

/// Graded-commutative algebra on an ordered list of generators.
#[derive(Clone, Debug)]
pub struct Algebra {
    field: Fp,
    gens: Vec<Generator>,
    index: HashMap<String, usize>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Algebra) -> bool {
        self.field == other.field && self.gens == other.gens
    }
}

impl Algebra {
    pub fn new(p: u32, gens: Vec<Generator>) -> Result<Algebra> {
        let field = Fp::new(p)?;
        let mut index = HashMap::new();
        for (i, g) in gens.iter().enumerate() {
            if index.insert(g.name.clone(), i).is_some() {
                return Err(Error::InvalidGenerators(format!(
                    "duplicate name {}",
                    g.name
                )));
            }
            match g.kind {
                GeneratorKind::Truncated(h) if h < 2 => {
                    return Err(Error::InvalidGenerators(format!(
                        "{}: truncation {h}",
                        g.name
                    )))
                }
                GeneratorKind::Truncated(2) | GeneratorKind::Exterior => {}
                _ if g.odd() => {
                    return Err(Error::InvalidGenerators(format!(
                        "{} has odd degree and must be exterior",
                        g.name
                    )))
                }
                _ => {}
            }
        }
        Ok(Algebra { field, gens, index })
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn idx(&self, name: &str) -> usize {
        self.gen_index(name)
            .unwrap_or_else(|| panic!("no generator named {name}"))
    }

    pub fn one(&self) -> Monomial {
        Monomial(vec![0; self.gens.len()])
    }

    /// Monomial from `(name, exponent)` pairs.
    pub fn mono(&self, factors: &[(&str, i64)]) -> Monomial {
        let mut m = self.one();
        for &(n, e) in factors {
            m.0[self.idx(n)] += e;
        }
        m
    }

    pub fn elem(&self, factors: &[(&str, i64)]) -> Element {
        Element::from_monomial(self.mono(factors))
    }

    pub fn bidegree(&self, m: &Monomial) -> (i64, i64) {
        m.0.iter()
            .zip(&self.gens)
            .fold((0, 0), |(s, t), (&e, g)| (s + e * g.s, t + e * g.t))
    }

    pub fn total_degree(&self, m: &Monomial) -> i64 {
        let (s, t) = self.bidegree(m);
        s + t
    }

    pub fn odd(&self, m: &Monomial) -> bool {
        self.total_degree(m).rem_euclid(2) == 1
    }

    pub fn is_valid(&self, m: &Monomial) -> bool {
        m.0.len() == self.gens.len()
            && m.0
                .iter()
                .zip(&self.gens)
                .all(|(&e, g)| g.valid_exponent(e))
    }

    pub fn check(&self, m: &Monomial) -> Result<()> {
        if m.0.len() != self.gens.len() {
            return Err(Error::DimensionMismatch(format!(
                "monomial of length {} in algebra with {} generators",
                m.0.len(),
                self.gens.len()
            )));
        }
        for (&e, g) in m.0.iter().zip(&self.gens) {
            if !g.valid_exponent(e) {
                return Err(Error::InvalidExponent {
                    gen: g.name.clone(),
                    exp: e,
                });
            }
        }
        Ok(())
    }

    /// Product of two monomials with its coefficient, or None if zero.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, u32)> {
        let f = self.field;
        let mut coeff = 1u32;
        let mut out = Vec::with_capacity(self.gens.len());
        for (i, g) in self.gens.iter().enumerate() {
            let (x, y) = (a.0[i], b.0[i]);
            let e = x + y;
            match g.effective() {
                GeneratorKind::Exterior => {
                    if e > 1 {
                        return None;
                    }
                }
                GeneratorKind::Truncated(h) => {
                    if e >= h as i64 {
                        return None;
                    }
                }
                GeneratorKind::DividedPower => {
                    let c = binom_lucas(self.p(), e as u64, x as u64);
                    if c == 0 {
                        return None;
                    }
                    coeff = f.mul(coeff, c);
                }
                GeneratorKind::Polynomial | GeneratorKind::Laurent => {}
            }
            out.push(e);
        }
        // Moving each factor of b past the later factors of a.
        let mut odd_a_after = 0u32;
        let mut sign_odd = false;
        for i in (0..self.gens.len()).rev() {
            let g = &self.gens[i];
            if g.odd() && b.0[i].rem_euclid(2) == 1 && odd_a_after % 2 == 1 {
                sign_odd = !sign_odd;
            }
            if g.odd() && a.0[i].rem_euclid(2) == 1 {
                odd_a_after += 1;
            }
        }
        if sign_odd {
            coeff = f.neg(coeff);
        }
        Some((Monomial(out), coeff))
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        let f = self.field;
        let mut out = Element::zero();
        for (x, cx) in a.terms() {
            for (y, cy) in b.terms() {
                if let Some((m, c)) = self.mul_monomials(x, y) {
                    out.add_term(f, m, f.mul(c, f.mul(cx, cy)));
                }
            }
        }
        out
    }

    pub fn mul_all(&self, factors: &[Element]) -> Element {
        factors
            .iter()
            .fold(Element::from_monomial(self.one()), |acc, x| {
                self.multiply(&acc, x)
            })
    }

    /// Canonical order: total degree, then exponent vectors lexicographically.
    pub fn cmp_canonical(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.total_degree(a)
            .cmp(&self.total_degree(b))
            .then_with(|| a.0.cmp(&b.0))
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut out = String::new();
        for (g, &e) in self.gens.iter().zip(&m.0) {
            if e == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('*');
            }
            if g.kind == GeneratorKind::DividedPower {
                let _ = write!(out, "{}[{}]", g.name, e);
            } else if e == 1 {
                if g.grouped {
                    let _ = write!(out, "({})", g.name);
                } else {
                    out.push_str(&g.name);
                }
            } else if g.grouped {
                let _ = write!(out, "({})^{}", g.name, e);
            } else {
                let _ = write!(out, "{}^{}", g.name, e);
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }

    pub fn format_element(&self, x: &Element) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = x
            .terms()
            .map(|(m, c)| {
                if c == 1 {
                    self.format_monomial(m)
                } else {
                    format!("{}*{}", c, self.format_monomial(m))
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Tensor product with generators renamed by prefix.
    pub fn tensor(&self, other: &Algebra, left: &str, right: &str) -> Result<Algebra> {
        if self.field != other.field {
            return Err(Error::Incomparable(
                "tensor factors over different primes".into(),
            ));
        }
        let rename = |g: &Generator, pre: &str| Generator {
            name: format!("{pre}{}", g.name),
            ..g.clone()
        };
        let gens = self
            .gens
            .iter()
            .map(|g| rename(g, left))
            .chain(other.gens.iter().map(|g| rename(g, right)))
            .collect();
        Algebra::new(self.p(), gens)
    }

    /// Monomials in the window, grouped by bidegree, in canonical order.
    pub fn enumerate(&self, w: &Window) -> Result<Cells> {
        self.enumerate_filtered(w, &|_| true)
    }

    pub fn enumerate_filtered(
        &self,
        w: &Window,
        keep: &(dyn Fn(&Monomial) -> bool + Sync),
    ) -> Result<Cells> {
        self.enumerate_capped(w, &[], keep)
    }

    /// As `enumerate_filtered`, with extra exponent bounds `(generator, lo, hi)`
    /// on non-Laurent generators.
    pub fn enumerate_capped(
        &self,
        w: &Window,
        caps: &[(usize, i64, i64)],
        keep: &(dyn Fn(&Monomial) -> bool + Sync),
    ) -> Result<Cells> {
        let mut cells: Cells = BTreeMap::new();
        if w.is_empty() {
            return Ok(cells);
        }
        let plan = EnumPlan::new(self, w, caps)?;
        if plan.bounds.iter().any(|(lo, hi)| lo > hi) {
            return Ok(cells);
        }
        let mut exps = vec![0i64; self.gens.len()];
        plan.recurse(self, w, 0, &mut exps, &mut |m| {
            if keep(&m) {
                let b = self.bidegree(&m);
                cells.entry(b).or_default().push(m);
            }
        })?;
        for v in cells.values_mut() {
            v.sort_by(|a, b| self.cmp_canonical(a, b));
        }
        Ok(cells)
    }

    pub fn basis_in_bidegree(&self, s: i64, t: i64) -> Result<Vec<Monomial>> {
        let mut cells = self.enumerate(&Window::new(s + t, s + t, s, s))?;
        Ok(cells.remove(&(s, t)).unwrap_or_default())
    }

    pub fn poincare_series(&self, lo: i64, hi: i64) -> Result<PoincareSeries> {
        self.poincare_series_filtered(lo, hi, &|_| true)
    }

    pub fn poincare_series_filtered(
        &self,
        lo: i64,
        hi: i64,
        keep: &(dyn Fn(&Monomial) -> bool + Sync),
    ) -> Result<PoincareSeries> {
        let cells = self.enumerate_filtered(&Window::total(lo, hi), keep)?;
        Ok(cells_series(&cells, lo, hi))
    }
}

pub fn cells_series(cells: &Cells, lo: i64, hi: i64) -> PoincareSeries {
    PoincareSeries::from_counts(
        lo,
        hi,
        cells.iter().map(|(&(s, t), v)| (s + t, v.len() as u64)),
    )
}

/// A linear functional a*n + b*s on bidegrees, n the total degree.
#[derive(Clone, Copy, Debug)]
struct Functional {
    a: i64,
    b: i64,
    min: i64,
    max: i64,
}

impl Functional {
    fn eval(&self, g: &Generator) -> i64 {
        self.a * g.total() + self.b * g.s
    }
}

struct EnumPlan {
    order: Vec<usize>,
    bounds: Vec<(i64, i64)>,
    laurent: Vec<usize>,
    prune: Vec<(Functional, Vec<(i64, i64)>)>,
}

impl EnumPlan {
    fn new(alg: &Algebra, w: &Window, caps: &[(usize, i64, i64)]) -> Result<EnumPlan> {
        let gens = &alg.gens;
        let laurent: Vec<usize> = (0..gens.len())
            .filter(|&i| gens[i].kind == GeneratorKind::Laurent)
            .collect();
        if laurent.len() > 2 {
            return Err(Error::Unsupported(
                "more than two Laurent generators".into(),
            ));
        }
        let mut functionals = Vec::new();
        for a in -1..=1i64 {
            for b in -1..=1i64 {
                if a == 0 && b == 0 {
                    continue;
                }
                let (n_lo, n_hi) = if a >= 0 { (w.lo, w.hi) } else { (-w.hi, -w.lo) };
                let (s_lo, s_hi) = if b >= 0 {
                    (w.s_lo, w.s_hi)
                } else {
                    (-w.s_hi, -w.s_lo)
                };
                let (min, max) = (
                    a.abs() * n_lo + b.abs() * s_lo,
                    a.abs() * n_hi + b.abs() * s_hi,
                );
                let f = Functional { a, b, min, max };
                if laurent.iter().all(|&l| f.eval(&gens[l]) == 0) {
                    functionals.push(f);
                }
            }
        }
        let order: Vec<usize> = (0..gens.len())
            .filter(|&i| gens[i].kind != GeneratorKind::Laurent)
            .collect();
        let mut bounds = vec![(0i64, 0i64); gens.len()];
        for &i in &order {
            let g = &gens[i];
            let cap = caps.iter().find(|c| c.0 == i).map(|c| (c.1, c.2));
            let natural = match g.max_exponent() {
                Some(m) => Ok(m),
                None => {
                    let mut best: Option<i64> = None;
                    for f in &functionals {
                        let fg = f.eval(g);
                        if fg <= 0 {
                            continue;
                        }
                        let mut lower = 0i64;
                        let mut ok = true;
                        for &j in &order {
                            if j == i {
                                continue;
                            }
                            let fj = f.eval(&gens[j]);
                            if fj < 0 {
                                match gens[j].max_exponent() {
                                    Some(m) => lower += fj * m,
                                    None => {
                                        ok = false;
                                        break;
                                    }
                                }
                            }
                        }
                        if !ok {
                            continue;
                        }
                        let room = f.max - lower;
                        let e = if room < 0 { -1 } else { room / fg };
                        best = Some(best.map_or(e, |b: i64| b.min(e)));
                    }
                    best.ok_or_else(|| Error::InfiniteDegree(g.name.clone()))
                }
            };
            bounds[i] = match (cap, natural) {
                (Some((a, b)), Ok(h)) => (a.max(0), h.min(b)),
                (Some((a, b)), Err(_)) => (a.max(0), b),
                (None, n) => (0, n?),
            };
        }
        if laurent.len() == 2 {
            let (g1, g2) = (&gens[laurent[0]], &gens[laurent[1]]);
            if g1.s * g2.total() - g2.s * g1.total() == 0 {
                return Err(Error::InfiniteDegree(format!(
                    "{} and {}",
                    g1.name, g2.name
                )));
            }
        }
        if laurent.len() == 1 {
            let g = &gens[laurent[0]];
            if g.s == 0 && g.t == 0 {
                return Err(Error::InfiniteDegree(g.name.clone()));
            }
        }
        // Suffix extrema for pruning by each usable functional.
        let mut prune = Vec::new();
        for f in &functionals {
            let mut suffix = vec![(0i64, 0i64); order.len() + 1];
            for k in (0..order.len()).rev() {
                let i = order[k];
                let fi = f.eval(&gens[i]);
                let (lo, hi) = bounds[i];
                let (a, b) = (fi * lo, fi * hi);
                suffix[k] = (suffix[k + 1].0 + a.min(b), suffix[k + 1].1 + a.max(b));
            }
            prune.push((*f, suffix));
        }
        Ok(EnumPlan {
            order,
            bounds,
            laurent,
            prune,
        })
    }

    fn recurse(
        &self,
        alg: &Algebra,
        w: &Window,
        k: usize,
        exps: &mut Vec<i64>,
        emit: &mut dyn FnMut(Monomial),
    ) -> Result<()> {
        let gens = &alg.gens;
        for (f, suffix) in &self.prune {
            let partial: i64 = self.order[..k]
                .iter()
                .map(|&i| f.eval(&gens[i]) * exps[i])
                .sum();
            if partial + suffix[k].0 > f.max || partial + suffix[k].1 < f.min {
                return Ok(());
            }
        }
        if k == self.order.len() {
            return self.solve_laurent(alg, w, exps, emit);
        }
        let i = self.order[k];
        let (lo, hi) = self.bounds[i];
        for e in lo..=hi {
            exps[i] = e;
            self.recurse(alg, w, k + 1, exps, emit)?;
        }
        exps[i] = 0;
        Ok(())
    }

    fn solve_laurent(
        &self,
        alg: &Algebra,
        w: &Window,
        exps: &mut [i64],
        emit: &mut dyn FnMut(Monomial),
    ) -> Result<()> {
        let gens = &alg.gens;
        let (s0, t0) = alg.bidegree(&Monomial(exps.to_vec()));
        let n0 = s0 + t0;
        let in_box = |s: i64, n: i64| w.lo <= n && n <= w.hi && w.s_lo <= s && s <= w.s_hi;
        match self.laurent.as_slice() {
            [] => {
                if in_box(s0, n0) {
                    emit(Monomial(exps.to_vec()));
                }
            }
            [l] => {
                let g = &gens[*l];
                let (lo, hi) = laurent_range(&[
                    (g.total(), w.lo - n0, w.hi - n0),
                    (g.s, w.s_lo - s0, w.s_hi - s0),
                ])?;
                if hi - lo > MAX_LAURENT_SPAN {
                    return Err(Error::InfiniteDegree(g.name.clone()));
                }
                for e in lo..=hi {
                    exps[*l] = e;
                    emit(Monomial(exps.to_vec()));
                }
                exps[*l] = 0;
            }
            [l1, l2] => {
                let (g1, g2) = (&gens[*l1], &gens[*l2]);
                // Functional vanishing on g2: g2.n * s - g2.s * n.
                let phi = |s: i64, n: i64| g2.total() * s - g2.s * n;
                let c1 = phi(g1.s, g1.total());
                let corners = [
                    phi(w.s_lo, w.lo),
                    phi(w.s_lo, w.hi),
                    phi(w.s_hi, w.lo),
                    phi(w.s_hi, w.hi),
                ];
                let (pmin, pmax) = (
                    *corners.iter().min().unwrap() - phi(s0, n0),
                    *corners.iter().max().unwrap() - phi(s0, n0),
                );
                let (lo, hi) = laurent_range(&[(c1, pmin, pmax)])?;
                if hi - lo > MAX_LAURENT_SPAN {
                    return Err(Error::InfiniteDegree(g1.name.clone()));
                }
                for e1 in lo..=hi {
                    let (s1, n1) = (s0 + e1 * g1.s, n0 + e1 * g1.total());
                    let (lo2, hi2) = laurent_range(&[
                        (g2.total(), w.lo - n1, w.hi - n1),
                        (g2.s, w.s_lo - s1, w.s_hi - s1),
                    ])?;
                    if hi2 - lo2 > MAX_LAURENT_SPAN {
                        return Err(Error::InfiniteDegree(g2.name.clone()));
                    }
                    for e2 in lo2..=hi2 {
                        exps[*l1] = e1;
                        exps[*l2] = e2;
                        emit(Monomial(exps.to_vec()));
                    }
                }
                exps[*l1] = 0;
                exps[*l2] = 0;
            }
            _ => unreachable!(),
        }
        Ok(())
    }
}

/// Integer e with lo_k <= c_k * e <= hi_k for every constraint.
fn laurent_range(constraints: &[(i64, i64, i64)]) -> Result<(i64, i64)> {
    let mut lo = i64::MIN / 4;
    let mut hi = i64::MAX / 4;
    for &(c, a, b) in constraints {
        if c == 0 {
            if a > 0 || b < 0 {
                return Ok((1, 0));
            }
            continue;
        }
        let (x, y) = if c > 0 {
            (div_ceil(a, c), div_floor(b, c))
        } else {
            (div_ceil(b, c), div_floor(a, c))
        };
        lo = lo.max(x);
        hi = hi.min(y);
    }
    if lo <= i64::MIN / 8 || hi >= i64::MAX / 8 {
        return Err(Error::InfiniteDegree("Laurent generator".into()));
    }
    Ok((lo, hi))
}

pub fn div_floor(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

pub fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use GeneratorKind::*;

    fn alg() -> Algebra {
        Algebra::new(
            5,
            vec![
                Generator::new("u1", -1, 0, Exterior),
                Generator::new("t", -2, 0, Laurent),
                Generator::new("tm2", -2, 50, Polynomial).grouped(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn formatting() {
        let a = alg();
        assert_eq!(
            a.format_monomial(&a.mono(&[("u1", 1), ("t", -3), ("tm2", 2)])),
            "u1*t^-3*(tm2)^2"
        );
        assert_eq!(a.format_monomial(&a.one()), "1");
    }

    #[test]
    fn exterior_square_and_sign() {
        let a = Algebra::new(
            5,
            vec![
                Generator::new("x", 0, 1, Exterior),
                Generator::new("y", 0, 3, Exterior),
            ],
        )
        .unwrap();
        let x = a.elem(&[("x", 1)]);
        let y = a.elem(&[("y", 1)]);
        assert!(a.multiply(&x, &x).is_zero());
        let yx = a.multiply(&y, &x);
        assert_eq!(yx, a.elem(&[("x", 1), ("y", 1)]).scale(a.field(), 4));
    }

    #[test]
    fn divided_powers_and_truncation() {
        let a = Algebra::new(
            5,
            vec![
                Generator::new("g", 0, 2, DividedPower),
                Generator::new("m", 0, 2, Truncated(5)),
            ],
        )
        .unwrap();
        let g2 = a.elem(&[("g", 2)]);
        let g3 = a.elem(&[("g", 3)]);
        assert!(a.multiply(&g2, &g3).is_zero());
        let g1 = a.elem(&[("g", 1)]);
        assert_eq!(
            a.multiply(&g1, &g1),
            a.elem(&[("g", 2)]).scale(a.field(), 2)
        );
        let m3 = a.elem(&[("m", 3)]);
        let m2 = a.elem(&[("m", 2)]);
        assert!(a.multiply(&m3, &m2).is_zero());
    }

    #[test]
    fn odd_polynomial_rejected() {
        let e = Algebra::new(5, vec![Generator::new("x", 0, 3, Polynomial)]);
        assert!(matches!(e, Err(Error::InvalidGenerators(_))));
    }

    #[test]
    fn laurent_window_enumeration() {
        let a = alg();
        let cells = a.enumerate(&Window::new(-4, 4, -10, 4)).unwrap();
        for (&(s, t), ms) in &cells {
            for m in ms {
                assert_eq!(a.bidegree(m), (s, t));
            }
        }
        assert!(cells[&(0, 0)].contains(&a.one()));
        let inf = Algebra::new(5, vec![Generator::new("z", 0, 0, Polynomial)]).unwrap();
        assert!(matches!(
            inf.enumerate(&Window::total(0, 3)),
            Err(Error::InfiniteDegree(_))
        ));
    }

    #[test]
    fn proportional_laurent_pair_fails() {
        let a = Algebra::new(
            5,
            vec![
                Generator::new("a", -2, 0, Laurent),
                Generator::new("b", -4, 0, Laurent),
            ],
        )
        .unwrap();
        match a.enumerate(&Window::new(0, 0, -2, 2)) {
            Err(Error::InfiniteDegree(msg)) => assert!(msg.contains('a') && msg.contains('b')),
            other => panic!("{other:?}"),
        }
    }
}

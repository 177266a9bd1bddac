//! Pages of a bigraded spectral sequence over a degree window, differential
//! rules, and page turning by exact linear algebra per bidegree.
//!
//! A differential d^r has bidegree (-r, r-1): it lowers total degree by one.
//! After turning, results are trusted on the shrunk window
//! `[lo+1, hi-1] x [s_lo+r, s_hi-r]`, where every incoming and outgoing
//! d^r was visible.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fp_linalg::{kernel_basis, Echelon, SparseMatrix, SparseVec};
use crate::graded_algebra::{Algebra, Cells, Element, GeneratorKind, Monomial, Window};
use crate::par::{self, ExecMode};

pub type PowerFn = dyn Fn(&Algebra, usize, i64) -> Element + Send + Sync;
pub type FamilyFn = dyn Fn(&Algebra, &Monomial) -> Element + Send + Sync;

#[derive(Clone)]
pub enum RuleKind {
    /// Values on generator powers, extended by the Leibniz rule.
    Derivation(Arc<PowerFn>),
    /// Values given directly on monomials.
    Family(Arc<FamilyFn>),
}

#[derive(Clone)]
pub struct DiffRule {
    pub r: u64,
    pub label: String,
    kind: RuleKind,
    unit: u32,
}

impl std::fmt::Debug for DiffRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DiffRule(d^{} {})", self.r, self.label)
    }
}

impl DiffRule {
    pub fn derivation(
        r: u64,
        label: impl Into<String>,
        power: impl Fn(&Algebra, usize, i64) -> Element + Send + Sync + 'static,
    ) -> DiffRule {
        DiffRule {
            r,
            label: label.into(),
            kind: RuleKind::Derivation(Arc::new(power)),
            unit: 1,
        }
    }

    pub fn family(
        r: u64,
        label: impl Into<String>,
        f: impl Fn(&Algebra, &Monomial) -> Element + Send + Sync + 'static,
    ) -> DiffRule {
        DiffRule {
            r,
            label: label.into(),
            kind: RuleKind::Family(Arc::new(f)),
            unit: 1,
        }
    }

    /// Derivation determined by its values on generators.
    pub fn from_generator_values(
        r: u64,
        label: impl Into<String>,
        values: Vec<(usize, Element)>,
    ) -> DiffRule {
        let table: HashMap<usize, Element> = values.into_iter().collect();
        DiffRule::derivation(r, label, move |alg, g, e| match table.get(&g) {
            Some(v) => power_rule(alg, g, e, v),
            None => Element::zero(),
        })
    }

    /// The same rule multiplied by the unit `c`.
    pub fn scaled(&self, c: u32) -> DiffRule {
        DiffRule {
            unit: (self.unit as u64 * c as u64 % 1_000_003) as u32,
            ..self.clone()
        }
    }

    pub fn apply(&self, alg: &Algebra, m: &Monomial) -> Element {
        let f = alg.field();
        let raw = match &self.kind {
            RuleKind::Derivation(pw) => apply_leibniz(alg, m, &|g, e| pw(alg, g, e)),
            RuleKind::Family(fam) => fam(alg, m),
        };
        if self.unit == 1 {
            raw
        } else {
            raw.scale(f, self.unit % f.p())
        }
    }

    pub fn apply_element(&self, alg: &Algebra, x: &Element) -> Element {
        let f = alg.field();
        let mut out = Element::zero();
        for (m, c) in x.terms() {
            out.add_assign(f, &self.apply(alg, m).scale(f, c));
        }
        out
    }
}

/// d(g^e) from d(g): e g^{e-1} d(g), or gamma_{e-1} d(g) for divided powers.
pub fn power_rule(alg: &Algebra, g: usize, e: i64, dg: &Element) -> Element {
    let f = alg.field();
    let gen = &alg.gens()[g];
    let lower = Element::from_monomial(alg.one().with(g, e - 1));
    match gen.kind {
        GeneratorKind::DividedPower => alg.multiply(&lower, dg),
        _ if e == 1 => dg.clone(),
        _ => alg.multiply(&lower, dg).scale(f, f.reduce(e)),
    }
}

/// d(m) = sum_i (-1)^{|f_0...f_{i-1}|} f_0...f_{i-1} d(f_i) f_{i+1}...
pub fn apply_leibniz(
    alg: &Algebra,
    m: &Monomial,
    power: &dyn Fn(usize, i64) -> Element,
) -> Element {
    let f = alg.field();
    let mut out = Element::zero();
    let mut prefix = alg.one();
    let mut prefix_odd = false;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let d = power(i, e);
        if !d.is_zero() {
            let mut suffix = m.clone();
            for j in 0..=i {
                suffix.0[j] = 0;
            }
            let term = alg.mul_all(&[
                Element::from_monomial(prefix.clone()),
                d,
                Element::from_monomial(suffix),
            ]);
            out.add_assign(f, &term.scale(f, f.sign(prefix_odd)));
        }
        prefix.0[i] = e;
        let g = &alg.gens()[i];
        if g.odd() && e.rem_euclid(2) == 1 {
            prefix_odd = !prefix_odd;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Computed,
}

/// A page E^r on a degree window. `cells` holds monomial representatives;
/// `boundaries` holds, per bidegree, elements already killed.
#[derive(Clone, Debug)]
pub struct Page {
    pub alg: Arc<Algebra>,
    pub r: u64,
    pub window: Window,
    pub cells: Cells,
    pub boundaries: BTreeMap<(i64, i64), Vec<Element>>,
    pub provenance: Provenance,
}

impl Page {
    pub fn closed_form(
        alg: Arc<Algebra>,
        r: u64,
        window: Window,
        keep: &(dyn Fn(&Monomial) -> bool + Sync),
    ) -> Result<Page> {
        let cells = alg.enumerate_filtered(&window, keep)?;
        Ok(Page {
            alg,
            r,
            window,
            cells,
            boundaries: BTreeMap::new(),
            provenance: Provenance::ClosedForm,
        })
    }

    pub fn dim(&self, s: i64, t: i64) -> usize {
        self.cells.get(&(s, t)).map_or(0, |v| v.len())
    }

    /// Dimension per total degree over the window.
    pub fn total_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&(s, t), v) in &self.cells {
            if !v.is_empty() {
                *out.entry(s + t).or_insert(0) += v.len();
            }
        }
        out
    }

    pub fn restrict(&self, w: &Window) -> Page {
        let window = self.window.intersect(w);
        let keep = |k: &(i64, i64)| window.contains(k.0, k.1);
        Page {
            alg: self.alg.clone(),
            r: self.r,
            window,
            cells: self
                .cells
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
            boundaries: self
                .boundaries
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
            provenance: self.provenance,
        }
    }

    /// Nonempty bidegrees ordered by total degree, then s.
    pub fn ordered_bidegrees(&self) -> Vec<(i64, i64)> {
        let mut keys: Vec<(i64, i64)> = self
            .cells
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(k, _)| *k)
            .collect();
        keys.sort_by_key(|&(s, t)| (s + t, s));
        keys
    }

    /// One `s=.. t=.. dim=.. basis=m1,m2,..` line per nonempty bidegree.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (s, t) in self.ordered_bidegrees() {
            let basis: Vec<String> = self.cells[&(s, t)]
                .iter()
                .map(|m| self.alg.format_monomial(m))
                .collect();
            let _ = writeln!(
                out,
                "s={s} t={t} dim={} basis={}",
                basis.len(),
                basis.join(",")
            );
        }
        out
    }
}

fn target_of(b: (i64, i64), r: i64) -> (i64, i64) {
    (b.0 - r, b.1 + r - 1)
}

fn source_of(b: (i64, i64), r: i64) -> (i64, i64) {
    (b.0 + r, b.1 - r + 1)
}

/// Expresses elements of the total space at one bidegree in terms of the
/// page representatives, modulo recorded boundaries.
struct Projector {
    rep_count: usize,
    coord: HashMap<Monomial, usize>,
    ech: Echelon,
}

enum Projection {
    Vector(SparseVec),
    Outside(Monomial),
}

impl Projector {
    fn new(alg: &Algebra, reps: &[Monomial], boundaries: &[Element]) -> Projector {
        let f = alg.field();
        let mut coord: HashMap<Monomial, usize> = HashMap::new();
        let rep_count = reps.len();
        // Non-representative monomials take the low indices so that they are
        // eliminated first.
        let rep_set: std::collections::HashSet<&Monomial> = reps.iter().collect();
        let mut others: Vec<&Monomial> = boundaries
            .iter()
            .flat_map(|x| x.terms().map(|(m, _)| m))
            .filter(|m| !rep_set.contains(m))
            .collect();
        others.sort();
        others.dedup();
        let n_other = others.len();
        for (i, m) in others.into_iter().enumerate() {
            coord.insert(m.clone(), i);
        }
        for (i, m) in reps.iter().enumerate() {
            coord.insert(m.clone(), n_other + i);
        }
        let mut ech = Echelon::new(f);
        for x in boundaries {
            let mut v: SparseVec = x.terms().map(|(m, c)| (coord[m], c)).collect();
            v.sort_unstable();
            ech.insert(&v);
        }
        Projector {
            rep_count,
            coord,
            ech,
        }
    }

    fn offset(&self) -> usize {
        self.coord.len() - self.rep_count
    }

    fn raw(&self, x: &Element) -> std::result::Result<SparseVec, Monomial> {
        let mut v = Vec::with_capacity(x.len());
        for (m, c) in x.terms() {
            match self.coord.get(m) {
                Some(&i) => v.push((i, c)),
                None => return Err(m.clone()),
            }
        }
        v.sort_unstable();
        Ok(v)
    }

    fn project(&self, x: &Element) -> Projection {
        let v = match self.raw(x) {
            Ok(v) => v,
            Err(m) => return Projection::Outside(m),
        };
        let v = if self.ech.rank() > 0 {
            self.ech.reduce(&v)
        } else {
            v
        };
        let off = self.offset();
        let mut out = Vec::with_capacity(v.len());
        for (i, c) in v {
            if i < off {
                let m = self
                    .coord
                    .iter()
                    .find(|(_, &j)| j == i)
                    .map(|(m, _)| m.clone())
                    .expect("coordinate");
                return Projection::Outside(m);
            }
            out.push((i - off, c));
        }
        Projection::Vector(out)
    }

    fn in_boundary_span(&self, x: &Element) -> bool {
        match self.raw(x) {
            Ok(v) => self.ech.contains(&v),
            Err(_) => false,
        }
    }
}

fn build_projectors(page: &Page, mode: ExecMode) -> HashMap<(i64, i64), Projector> {
    let mut keys: Vec<(i64, i64)> = page.cells.keys().copied().collect();
    keys.extend(page.boundaries.keys().copied());
    keys.sort_unstable();
    keys.dedup();
    let empty_cells: Vec<Monomial> = Vec::new();
    let empty_bd: Vec<Element> = Vec::new();
    let built = par::map(mode, &keys, |k| {
        let reps = page.cells.get(k).unwrap_or(&empty_cells);
        let bd = page.boundaries.get(k).unwrap_or(&empty_bd);
        Projector::new(&page.alg, reps, bd)
    });
    keys.into_iter().zip(built).collect()
}

/// Images of every representative at `b` under the rule, in target coordinates.
fn images_at(
    page: &Page,
    rule: &DiffRule,
    projectors: &HashMap<(i64, i64), Projector>,
    b: (i64, i64),
) -> Result<Vec<SparseVec>> {
    let alg = &page.alg;
    let r = rule.r as i64;
    let tgt = target_of(b, r);
    let proj = projectors.get(&tgt);
    let mut out = Vec::new();
    for m in &page.cells[&b] {
        let img = rule.apply(alg, m);
        for (x, _) in img.terms() {
            let got = alg.bidegree(x);
            if got != tgt {
                return Err(Error::WrongBidegree {
                    r: rule.r,
                    from: alg.format_monomial(m),
                    got,
                    expected: tgt,
                });
            }
            alg.check(x)?;
        }
        if img.is_zero() {
            out.push(Vec::new());
            continue;
        }
        let outside = |mono: Monomial| Error::OutsidePage {
            r: page.r,
            s: tgt.0,
            t: tgt.1,
            from: alg.format_monomial(m),
            monomial: alg.format_monomial(&mono),
        };
        match proj {
            None => {
                let first = img.terms().next().unwrap().0.clone();
                return Err(outside(first));
            }
            Some(p) => match p.project(&img) {
                Projection::Vector(v) => out.push(v),
                Projection::Outside(mono) => return Err(outside(mono)),
            },
        }
    }
    Ok(out)
}

pub fn turn_page(page: &Page, rule: &DiffRule) -> Result<Page> {
    turn_page_with(page, rule, ExecMode::default())
}

/// Computes E^{r+1} = H(E^r, d^r) on the shrunk window.
pub fn turn_page_with(page: &Page, rule: &DiffRule, mode: ExecMode) -> Result<Page> {
    let alg = page.alg.clone();
    let f = alg.field();
    let r = rule.r as i64;
    let w = page.window;
    let new_window = Window::new(w.lo + 1, w.hi - 1, w.s_lo + r, w.s_hi - r);
    let projectors = build_projectors(page, mode);

    let sources: Vec<(i64, i64)> = page
        .cells
        .iter()
        .filter(|(b, v)| {
            let t = target_of(**b, r);
            !v.is_empty() && w.contains(t.0, t.1)
        })
        .map(|(b, _)| *b)
        .collect();
    let computed = par::map(mode, &sources, |b| images_at(page, rule, &projectors, *b));
    let mut images: HashMap<(i64, i64), Vec<SparseVec>> = HashMap::new();
    for (b, res) in sources.iter().zip(computed) {
        images.insert(*b, res?);
    }

    // d o d = 0 wherever both steps are visible.
    let dd: Vec<Result<()>> = par::map(mode, &sources, |b| {
        let tgt = target_of(*b, r);
        let Some(next) = images.get(&tgt) else {
            return Ok(());
        };
        for (i, v) in images[b].iter().enumerate() {
            let mut acc: BTreeMap<usize, u32> = BTreeMap::new();
            for &(j, c) in v {
                for &(k, y) in &next[j] {
                    let slot = acc.entry(k).or_insert(0);
                    *slot = f.add(*slot, f.mul(c, y));
                }
            }
            if acc.values().any(|&x| x != 0) {
                return Err(Error::NonzeroSquare(
                    alg.format_monomial(&page.cells[b][i]),
                    rule.r,
                ));
            }
        }
        Ok(())
    });
    for res in dd {
        res?;
    }

    let trusted: Vec<(i64, i64)> = page
        .cells
        .keys()
        .chain(page.boundaries.keys())
        .copied()
        .filter(|b| new_window.contains(b.0, b.1))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let empty: Vec<Monomial> = Vec::new();
    let results = par::map(
        mode,
        &trusted,
        |b| -> Result<(Vec<Monomial>, Vec<Element>)> {
            let reps = page.cells.get(b).unwrap_or(&empty);
            let tgt = target_of(*b, r);
            let src = source_of(*b, r);
            let out = images.get(b);
            let tgt_len = page.cells.get(&tgt).map_or(0, |v| v.len());
            let kernel_dim = match out {
                Some(rows) => {
                    let entries = rows
                        .iter()
                        .enumerate()
                        .flat_map(|(j, v)| v.iter().map(move |&(i, c)| (i, j, c)));
                    let m = SparseMatrix::new(f, tgt_len, reps.len(), entries)?;
                    kernel_basis(f, &m).len()
                }
                None => reps.len(),
            };
            let mut im = Echelon::new(f);
            if let Some(rows) = images.get(&src) {
                for v in rows {
                    im.insert(v);
                }
            }
            let mut boundary: Vec<Element> = page.boundaries.get(b).cloned().unwrap_or_default();
            for row in im.sorted_rows() {
                let mut x = Element::zero();
                for (i, c) in row {
                    x.add_term(f, reps[i].clone(), c);
                }
                boundary.push(x);
            }
            let dim = kernel_dim - im.rank();
            let mut chosen = Vec::new();
            let mut span = im;
            for (i, m) in reps.iter().enumerate() {
                let is_cycle = out.is_none_or(|rows| rows[i].is_empty());
                if is_cycle && span.insert(&[(i, 1)]) {
                    chosen.push(m.clone());
                }
            }
            if chosen.len() != dim {
                return Err(Error::NoMonomialRepresentatives(b.0, b.1));
            }
            Ok((chosen, boundary))
        },
    );
    let mut cells = BTreeMap::new();
    let mut boundaries = BTreeMap::new();
    for (b, res) in trusted.iter().zip(results) {
        let (reps, bd) = res?;
        if !reps.is_empty() {
            cells.insert(*b, reps);
        }
        if !bd.is_empty() {
            boundaries.insert(*b, bd);
        }
    }
    Ok(Page {
        alg,
        r: rule.r + 1,
        window: new_window,
        cells,
        boundaries,
        provenance: Provenance::Computed,
    })
}

#[derive(Clone, Debug, Default)]
pub struct PageComparison {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

impl PageComparison {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares two pages on their common window: equal dimensions and equal
/// spans of representatives modulo the recorded boundaries.
pub fn compare_pages(a: &Page, b: &Page) -> Result<PageComparison> {
    if a.alg != b.alg {
        return Err(Error::Incomparable("pages over different algebras".into()));
    }
    let alg = &a.alg;
    let f = alg.field();
    let w = a.window.intersect(&b.window);
    let mut keys: Vec<(i64, i64)> = a
        .cells
        .keys()
        .chain(b.cells.keys())
        .copied()
        .filter(|k| w.contains(k.0, k.1))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    let empty_c: Vec<Monomial> = Vec::new();
    let empty_b: Vec<Element> = Vec::new();
    let mut cmp = PageComparison::default();
    for k in keys {
        cmp.checked += 1;
        let ra = a.cells.get(&k).unwrap_or(&empty_c);
        let rb = b.cells.get(&k).unwrap_or(&empty_c);
        let tag = |why: &str| {
            format!(
                "({},{}) total {}: {} vs {} ({why})",
                k.0,
                k.1,
                k.0 + k.1,
                ra.len(),
                rb.len()
            )
        };
        if ra.len() != rb.len() {
            cmp.mismatches.push(tag("dimension"));
            continue;
        }
        let bd: Vec<&Element> = a
            .boundaries
            .get(&k)
            .unwrap_or(&empty_b)
            .iter()
            .chain(b.boundaries.get(&k).unwrap_or(&empty_b))
            .collect();
        if bd.is_empty() {
            let sa: std::collections::HashSet<&Monomial> = ra.iter().collect();
            if !rb.iter().all(|m| sa.contains(m)) {
                cmp.mismatches.push(tag("span"));
            }
            continue;
        }
        let mut coord: HashMap<Monomial, usize> = HashMap::new();
        let mut index = |m: &Monomial| -> usize {
            let n = coord.len();
            *coord.entry(m.clone()).or_insert(n)
        };
        let mut base = Echelon::new(f);
        for x in &bd {
            let mut v: SparseVec = x.terms().map(|(m, c)| (index(m), c)).collect();
            v.sort_unstable();
            base.insert(&v);
        }
        let mut ea = base.clone();
        let a_indep = ra.iter().all(|m| ea.insert(&[(index(m), 1)]));
        let mut eb = base.clone();
        let b_indep = rb.iter().all(|m| eb.insert(&[(index(m), 1)]));
        let within = rb.iter().all(|m| ea.contains(&[(index(m), 1)]));
        if !(a_indep && b_indep && within) {
            cmp.mismatches.push(tag("span"));
        }
    }
    Ok(cmp)
}

#[derive(Clone, Debug, Default)]
pub struct WellDefinedness {
    pub checked: usize,
    pub witnesses: Vec<String>,
}

/// Checks that the rule sends every recorded boundary into the boundary span
/// of its target bidegree.
pub fn well_definedness_check(page: &Page, rule: &DiffRule) -> WellDefinedness {
    let alg = &page.alg;
    let r = rule.r as i64;
    let mut out = WellDefinedness::default();
    for (b, bd) in &page.boundaries {
        let tgt = target_of(*b, r);
        if !page.window.contains(tgt.0, tgt.1) || !page.window.contains(b.0, b.1) {
            continue;
        }
        let empty_c: Vec<Monomial> = Vec::new();
        let empty_b: Vec<Element> = Vec::new();
        let proj = Projector::new(
            alg,
            page.cells.get(&tgt).unwrap_or(&empty_c),
            page.boundaries.get(&tgt).unwrap_or(&empty_b),
        );
        for x in bd {
            out.checked += 1;
            let img = rule.apply_element(alg, x);
            if !img.is_zero() && !proj.in_boundary_span(&img) {
                out.witnesses.push(format!(
                    "d^{}({}) = {}",
                    rule.r,
                    alg.format_element(x),
                    alg.format_element(&img)
                ));
            }
        }
    }
    out
}

/// Result of turning a closed-form page and comparing with the next one.
#[derive(Clone, Debug)]
pub struct StepCheck {
    pub from_r: u64,
    pub to_r: u64,
    pub comparison: PageComparison,
    pub computed: Page,
}

pub fn verify_step(
    seed: &Page,
    rule: &DiffRule,
    expected: &Page,
    mode: ExecMode,
) -> Result<StepCheck> {
    let mut computed = turn_page_with(seed, rule, mode)?;
    computed.r = expected.r;
    let comparison = compare_pages(&computed, expected)?;
    Ok(StepCheck {
        from_r: seed.r,
        to_r: expected.r,
        comparison,
        computed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_algebra::Generator;
    use GeneratorKind::*;

    fn koszul() -> Arc<Algebra> {
        Arc::new(
            Algebra::new(
                5,
                vec![
                    Generator::new("x", 0, 3, Exterior),
                    Generator::new("y", 1, 3, Polynomial),
                ],
            )
            .unwrap(),
        )
    }

    #[test]
    fn exterior_polynomial_pair() {
        let alg = koszul();
        let page = Page::closed_form(alg.clone(), 1, Window::new(0, 40, 0, 10), &|_| true).unwrap();
        let y = alg.idx("y");
        let rule = DiffRule::from_generator_values(1, "d(y)=x", vec![(y, alg.elem(&[("x", 1)]))]);
        let next = turn_page(&page, &rule).unwrap();
        assert_eq!(next.window, Window::new(1, 39, 1, 9));
        assert_eq!(next.dim(1, 3), 0);
        assert_eq!(next.dim(0, 3), 0);
        assert_eq!(next.dim(5, 15), 1);
        assert_eq!(next.dim(4, 15), 1);
        assert_eq!(next.dim(3, 12), 0);
    }

    #[test]
    fn wrong_bidegree_rejected() {
        let alg = koszul();
        let page = Page::closed_form(alg.clone(), 2, Window::new(0, 12, 0, 3), &|_| true).unwrap();
        let y = alg.idx("y");
        let rule = DiffRule::from_generator_values(2, "bad", vec![(y, alg.elem(&[("x", 1)]))]);
        assert!(matches!(
            turn_page(&page, &rule),
            Err(Error::WrongBidegree { .. })
        ));
    }

    #[test]
    fn span_check_distinguishes() {
        let alg = Arc::new(
            Algebra::new(
                5,
                vec![
                    Generator::new("a", 0, 2, Exterior),
                    Generator::new("b", 0, 2, Exterior),
                ],
            )
            .unwrap(),
        );
        let w = Window::new(2, 2, 0, 0);
        let mk = |name: &str| Page {
            alg: alg.clone(),
            r: 2,
            window: w,
            cells: [((0, 2), vec![alg.mono(&[(name, 1)])])]
                .into_iter()
                .collect(),
            boundaries: BTreeMap::new(),
            provenance: Provenance::ClosedForm,
        };
        assert!(!compare_pages(&mk("a"), &mk("b")).unwrap().ok());
        let mut with_bd = mk("a");
        with_bd.boundaries.insert(
            (0, 2),
            vec![alg
                .elem(&[("a", 1)])
                .add(alg.field(), &alg.elem(&[("b", 1)]))],
        );
        assert!(compare_pages(&with_bd, &mk("b")).unwrap().ok());
    }
}

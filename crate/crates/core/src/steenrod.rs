//! The dual Steenrod algebra A_* at an odd prime, its coproduct and
//! conjugation, and left A_*-comodule algebras with primitivity tests.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fp_linalg::{solve, Fp, SparseVec};
use crate::graded_algebra::{Algebra, Element, Generator, GeneratorKind, Monomial};
use crate::numerics::pow_i64;

/// A_* = P(xb_k) (x) E(tb_k) with generators of degree at most `max_degree`.
#[derive(Clone, Debug)]
pub struct DualSteenrod {
    alg: Algebra,
    xi: Vec<usize>,
    tau: Vec<usize>,
}

pub fn xi_degree(p: u32, k: u32) -> i64 {
    2 * (pow_i64(p, k) - 1)
}

pub fn tau_degree(p: u32, k: u32) -> i64 {
    2 * pow_i64(p, k) - 1
}

impl DualSteenrod {
    pub fn new(p: u32, max_degree: i64) -> Result<DualSteenrod> {
        let mut gens = Vec::new();
        let mut k = 1;
        while xi_degree(p, k) <= max_degree {
            gens.push(Generator::new(
                format!("xb{k}"),
                0,
                xi_degree(p, k),
                GeneratorKind::Polynomial,
            ));
            k += 1;
        }
        let mut k = 0;
        while tau_degree(p, k) <= max_degree {
            gens.push(Generator::new(
                format!("tb{k}"),
                0,
                tau_degree(p, k),
                GeneratorKind::Exterior,
            ));
            k += 1;
        }
        let alg = Algebra::new(p, gens)?;
        let xi = (1..)
            .map_while(|k| alg.gen_index(&format!("xb{k}")))
            .collect();
        let tau = (0..)
            .map_while(|k| alg.gen_index(&format!("tb{k}")))
            .collect();
        Ok(DualSteenrod { alg, xi, tau })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn p(&self) -> u32 {
        self.alg.p()
    }

    /// Number of xb generators present (xb_1 .. xb_n).
    pub fn n_xi(&self) -> usize {
        self.xi.len()
    }

    pub fn n_tau(&self) -> usize {
        self.tau.len()
    }

    /// xb_k^e as a monomial; k = 0 gives 1.
    fn xi_pow(&self, k: usize, e: i64) -> Monomial {
        let mut m = self.alg.one();
        if k > 0 {
            m.0[self.xi[k - 1]] = e;
        }
        m
    }

    fn tau_mono(&self, k: usize) -> Monomial {
        let mut m = self.alg.one();
        m.0[self.tau[k]] = 1;
        m
    }

    /// A_* (x) A_* with generators prefixed `L.` and `R.`.
    pub fn tensor_square(&self) -> Result<Algebra> {
        self.alg.tensor(&self.alg, "L.", "R.")
    }

    fn pair(&self, l: &Monomial, r: &Monomial) -> Monomial {
        Monomial(l.0.iter().chain(r.0.iter()).copied().collect())
    }

    /// Coproduct of a generator as a sum of (left, right) monomial pairs.
    pub fn coproduct_generator_terms(&self, g: usize) -> Vec<(Monomial, Monomial)> {
        let p = self.p();
        let one = self.alg.one();
        if let Some(k) = self.xi.iter().position(|&i| i == g) {
            let k = k + 1;
            (0..=k)
                .map(|i| (self.xi_pow(i, 1), self.xi_pow(k - i, pow_i64(p, i as u32))))
                .collect()
        } else {
            let k = self
                .tau
                .iter()
                .position(|&i| i == g)
                .expect("generator of A_*");
            let mut out = vec![(one.clone(), self.tau_mono(k))];
            for i in 0..=k {
                out.push((self.tau_mono(i), self.xi_pow(k - i, pow_i64(p, i as u32))));
            }
            out
        }
    }

    pub fn coproduct_generator(&self, g: usize) -> Element {
        let f = self.alg.field();
        let mut x = Element::zero();
        for (l, r) in self.coproduct_generator_terms(g) {
            x.add_term(f, self.pair(&l, &r), 1);
        }
        x
    }

    /// Multiplicative extension of the coproduct to a monomial.
    pub fn coproduct(&self, m: &Monomial, aa: &Algebra) -> Element {
        let mut acc = Element::from_monomial(aa.one());
        for (g, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let psi = self.coproduct_generator(g);
            for _ in 0..e {
                acc = aa.multiply(&acc, &psi);
            }
        }
        acc
    }

    /// Conjugation on generators, from the antipode recursion.
    pub fn conjugate_generator(&self, g: usize) -> Element {
        let f = self.alg.field();
        let p = self.p();
        if let Some(k) = self.xi.iter().position(|&i| i == g) {
            let k = k + 1;
            let mut chis: Vec<Element> = vec![Element::from_monomial(self.alg.one())];
            for kk in 1..=k {
                let mut acc = Element::zero();
                for (i, chi_i) in chis.iter().enumerate() {
                    let x = Element::from_monomial(self.xi_pow(kk - i, pow_i64(p, i as u32)));
                    acc.add_assign(f, &self.alg.multiply(chi_i, &x));
                }
                chis.push(acc.scale(f, p - 1));
            }
            chis.pop().unwrap()
        } else {
            let k = self
                .tau
                .iter()
                .position(|&i| i == g)
                .expect("generator of A_*");
            let mut chis: Vec<Element> = Vec::new();
            for kk in 0..=k {
                let mut acc = Element::from_monomial(self.tau_mono(kk));
                for (i, chi_i) in chis.iter().enumerate() {
                    let x = Element::from_monomial(self.xi_pow(kk - i, pow_i64(p, i as u32)));
                    acc.add_assign(f, &self.alg.multiply(chi_i, &x));
                }
                chis.push(acc.scale(f, p - 1));
            }
            chis.pop().unwrap()
        }
    }

    /// Conjugation extended multiplicatively.
    pub fn conjugate(&self, m: &Monomial) -> Element {
        let mut acc = Element::from_monomial(self.alg.one());
        for (g, &e) in m.0.iter().enumerate() {
            let c = self.conjugate_generator(g);
            for _ in 0..e {
                acc = self.alg.multiply(&acc, &c);
            }
        }
        acc
    }

    pub fn split(&self, m: &Monomial) -> (Monomial, Monomial) {
        let n = self.alg.ngens();
        (Monomial(m.0[..n].to_vec()), Monomial(m.0[n..].to_vec()))
    }
}

/// A left A_*-comodule algebra given by coaction values on generators,
/// extended multiplicatively in A_* (x) T.
#[derive(Clone, Debug)]
pub struct Comodule {
    pub steenrod: DualSteenrod,
    pub target: Algebra,
    pub combined: Algebra,
    values: Vec<Option<Element>>,
}

impl Comodule {
    pub fn new(steenrod: DualSteenrod, target: Algebra) -> Result<Comodule> {
        let combined = steenrod.algebra().tensor(&target, "A.", "T.")?;
        let values = vec![None; target.ngens()];
        Ok(Comodule {
            steenrod,
            target,
            combined,
            values,
        })
    }

    pub fn field(&self) -> Fp {
        self.target.field()
    }

    pub fn left(&self, m: &Monomial) -> Monomial {
        let mut v = m.0.clone();
        v.extend(std::iter::repeat_n(0, self.target.ngens()));
        Monomial(v)
    }

    pub fn right(&self, m: &Monomial) -> Monomial {
        let mut v = vec![0; self.steenrod.algebra().ngens()];
        v.extend_from_slice(&m.0);
        Monomial(v)
    }

    pub fn left_elem(&self, x: &Element) -> Element {
        x.map_monomials(self.field(), |m| self.left(m))
    }

    pub fn right_elem(&self, x: &Element) -> Element {
        x.map_monomials(self.field(), |m| self.right(m))
    }

    /// a (x) b in the combined algebra.
    pub fn pure(&self, a: &Element, b: &Element) -> Element {
        self.combined
            .multiply(&self.left_elem(a), &self.right_elem(b))
    }

    pub fn set(&mut self, name: &str, value: Element) {
        let i = self.target.idx(name);
        self.values[i] = Some(value);
    }

    /// Maps a monomial of A_* into T by generator name.
    pub fn a_to_target(&self, m: &Monomial) -> Result<Monomial> {
        let a = self.steenrod.algebra();
        let mut out = self.target.one();
        for (g, &e) in a.gens().iter().zip(&m.0) {
            if e != 0 {
                let j = self
                    .target
                    .gen_index(&g.name)
                    .ok_or_else(|| Error::MissingCoaction(g.name.clone()))?;
                out.0[j] = e;
            }
        }
        Ok(out)
    }

    /// Sets the coaction of an A_*-generator of T to the restricted coproduct.
    pub fn set_from_coproduct(&mut self, name: &str) -> Result<()> {
        let a = self.steenrod.algebra();
        let g = a.idx(name);
        let f = self.field();
        let mut v = Element::zero();
        for (l, r) in self.steenrod.coproduct_generator_terms(g) {
            let r = self.a_to_target(&r)?;
            v.add_assign(
                f,
                &self.combined.multiply(
                    &Element::from_monomial(self.left(&l)),
                    &Element::from_monomial(self.right(&r)),
                ),
            );
        }
        self.set(name, v);
        Ok(())
    }

    /// Sets the coaction of `sigma_name` by applying sigma to the right factor
    /// of the coproduct of `name`; sigma kills 1 and p-th powers.
    pub fn set_from_suspension(&mut self, sigma_name: &str, name: &str) -> Result<()> {
        let a = self.steenrod.algebra();
        let g = a.idx(name);
        let f = self.field();
        let mut v = Element::zero();
        for (l, r) in self.steenrod.coproduct_generator_terms(g) {
            let sr = self.sigma(&r)?;
            v.add_assign(f, &self.pure(&Element::from_monomial(l), &sr));
        }
        self.set(sigma_name, v);
        Ok(())
    }

    fn sigma(&self, m: &Monomial) -> Result<Element> {
        let a = self.steenrod.algebra();
        let f = self.field();
        let support: Vec<usize> = (0..m.0.len()).filter(|&i| m.0[i] != 0).collect();
        match support.as_slice() {
            [] => Ok(Element::zero()),
            [g] => {
                let e = m.0[*g];
                let c = f.reduce(e);
                if c == 0 {
                    return Ok(Element::zero());
                }
                let name = &a.gens()[*g].name;
                let sname = format!("s{name}");
                let sg = self
                    .target
                    .gen_index(&sname)
                    .ok_or_else(|| Error::MissingCoaction(sname.clone()))?;
                let rest = self.a_to_target(&m.with(*g, e - 1))?;
                let mut sm = self.target.one();
                sm.0[sg] = 1;
                Ok(self
                    .target
                    .multiply(&Element::from_monomial(rest), &Element::from_monomial(sm))
                    .scale(f, c))
            }
            _ => Err(Error::Unsupported(
                "sigma of a decomposable right factor".into(),
            )),
        }
    }

    pub fn value(&self, g: usize) -> Result<&Element> {
        self.values[g]
            .as_ref()
            .ok_or_else(|| Error::MissingCoaction(self.target.gens()[g].name.clone()))
    }

    pub fn coaction_monomial(&self, m: &Monomial) -> Result<Element> {
        let mut acc = Element::from_monomial(self.combined.one());
        for (g, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let v = self.value(g)?;
            for _ in 0..e {
                acc = self.combined.multiply(&acc, v);
            }
        }
        Ok(acc)
    }

    pub fn coaction(&self, x: &Element) -> Result<Element> {
        let f = self.field();
        let mut out = Element::zero();
        for (m, c) in x.terms() {
            out.add_assign(f, &self.coaction_monomial(m)?.scale(f, c));
        }
        Ok(out)
    }

    /// The coaction minus 1 (x) x.
    pub fn reduced_coaction(&self, x: &Element) -> Result<Element> {
        Ok(self.coaction(x)?.sub(self.field(), &self.right_elem(x)))
    }

    pub fn is_primitive(&self, x: &Element) -> Result<bool> {
        Ok(self.reduced_coaction(x)?.is_zero())
    }
}

/// T = H_*(V(1)) (x) H_*THH(l/p) region used for primitivity, with the
/// H_*(V(1)) coaction written through conjugates of A_* generators.
pub fn v1_thh_comodule(p: u32) -> Result<Comodule> {
    let pp = p as i64;
    let a = DualSteenrod::new(p, 2 * pp * pp + 2)?;
    use GeneratorKind::*;
    let g = |n: &str, d: i64, k: GeneratorKind| Generator::new(n, 0, d, k);
    let target = Algebra::new(
        p,
        vec![
            g("t0", 1, Exterior),
            g("t1", 2 * pp - 1, Exterior),
            g("tb0", 1, Exterior),
            g("tb1", tau_degree(p, 1), Exterior),
            g("tb2", tau_degree(p, 2), Exterior),
            g("xb1", xi_degree(p, 1), Polynomial),
            g("xb2", xi_degree(p, 2), Polynomial),
            g("sxb1", xi_degree(p, 1) + 1, Exterior),
            g("sxb2", xi_degree(p, 2) + 1, Exterior),
            g("stb0", 2, Polynomial),
            g("stb1", tau_degree(p, 1) + 1, Polynomial),
            g("stb2", tau_degree(p, 2) + 1, Polynomial),
            g("y", 2 * pp - 1, Exterior),
        ],
    )?;
    let mut c = Comodule::new(a, target)?;
    for n in ["tb0", "tb1", "tb2", "xb1", "xb2"] {
        c.set_from_coproduct(n)?;
    }
    for (s, n) in [
        ("sxb1", "xb1"),
        ("sxb2", "xb2"),
        ("stb0", "tb0"),
        ("stb1", "tb1"),
        ("stb2", "tb2"),
    ] {
        c.set_from_suspension(s, n)?;
    }
    let f = c.field();
    let a = c.steenrod.algebra().clone();
    let t = c.target.clone();
    let one_a = Element::from_monomial(a.one());
    let chi = |n: &str| c.steenrod.conjugate_generator(a.idx(n));
    let t0 = c
        .pure(&one_a, &t.elem(&[("t0", 1)]))
        .add(f, &c.pure(&chi("tb0"), &Element::from_monomial(t.one())));
    let t1 = c
        .pure(&one_a, &t.elem(&[("t1", 1)]))
        .add(f, &c.pure(&chi("xb1"), &t.elem(&[("t0", 1)])))
        .add(f, &c.pure(&chi("tb1"), &Element::from_monomial(t.one())));
    let y = c
        .pure(&one_a, &t.elem(&[("y", 1)]))
        .add(
            f,
            &c.pure(&a.elem(&[("tb0", 1)]), &t.elem(&[("stb0", pp - 1)])),
        )
        .sub(f, &c.pure(&a.elem(&[("tb0", 1)]), &t.elem(&[("xb1", 1)])))
        .sub(
            f,
            &c.pure(&a.elem(&[("tb1", 1)]), &Element::from_monomial(t.one())),
        );
    c.set("t0", t0);
    c.set("t1", t1);
    c.set("y", y);
    Ok(c)
}

/// The classes of V(1)_*THH(l/p) in the smash-product presentation.
pub fn v1_thh_classes(c: &Comodule) -> Vec<(&'static str, Element)> {
    let t = &c.target;
    let f = c.field();
    let p = t.p() as i64;
    let e = |fs: &[(&str, i64)]| t.elem(fs);
    vec![
        ("epsilon0", e(&[("tb0", 1)]).add(f, &e(&[("t0", 1)]))),
        (
            "epsilon1",
            e(&[("tb1", 1)])
                .add(f, &e(&[("t0", 1), ("xb1", 1)]))
                .add(f, &e(&[("t1", 1)])),
        ),
        ("lambda1", e(&[("sxb1", 1)])),
        ("lambda2", e(&[("sxb2", 1)])),
        ("mu0", e(&[("stb0", 1)])),
        (
            "mu1",
            e(&[("stb1", 1)]).add(f, &e(&[("t0", 1), ("sxb1", 1)])),
        ),
        (
            "mu2",
            e(&[("stb2", 1)]).add(f, &e(&[("t0", 1), ("sxb2", 1)])),
        ),
        (
            "epsilonbar1",
            e(&[("y", 1)])
                .add(f, &e(&[("t0", 1), ("stb0", p - 1)]))
                .sub(f, &e(&[("t0", 1), ("xb1", 1)]))
                .sub(f, &e(&[("t1", 1)])),
        ),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaReport {
    /// Values of alpha for which the candidate class is primitive.
    pub primitive_alphas: Vec<u32>,
    /// Coefficients of the unique lift of y to H_*THH(Z/p) in degree 2p-1.
    pub lift: Vec<(String, u32)>,
    pub lift_kernel_dim: usize,
}

/// Determines the coefficient alpha in the image of y and checks that only
/// alpha = -1 yields a primitive class.
pub fn alpha_forcing(c: &Comodule) -> Result<AlphaReport> {
    let t = &c.target;
    let f = c.field();
    let p = t.p();
    let pi = p as i64;
    let e = |fs: &[(&str, i64)]| t.elem(fs);
    let mut primitive_alphas = Vec::new();
    for alpha in 0..p {
        let z = e(&[("tb0", 1), ("stb0", pi - 1)])
            .add(f, &e(&[("tb1", 1)]).scale(f, alpha))
            .add(f, &e(&[("t0", 1), ("stb0", pi - 1)]))
            .sub(f, &e(&[("t0", 1), ("xb1", 1)]))
            .sub(f, &e(&[("t1", 1)]));
        if c.is_primitive(&z)? {
            primitive_alphas.push(alpha);
        }
    }
    // Degree 2p-1 basis of A_* (x) P(stb0) inside T.
    let sub_names = ["tb0", "tb1", "tb2", "xb1", "xb2", "stb0"];
    let sub = Algebra::new(
        p,
        sub_names
            .iter()
            .map(|n| t.gens()[t.idx(n)].clone())
            .collect(),
    )?;
    let basis = sub.basis_in_bidegree(0, 2 * pi - 1)?;
    let lift_to_t = |m: &Monomial| {
        let mut out = t.one();
        for (k, n) in sub_names.iter().enumerate() {
            out.0[t.idx(n)] = m.0[k];
        }
        out
    };
    let mut coords: HashMap<Monomial, usize> = HashMap::new();
    let mut to_vec = |x: &Element| -> SparseVec {
        let mut v: SparseVec = x
            .terms()
            .map(|(m, cf)| {
                let n = coords.len();
                (*coords.entry(m.clone()).or_insert(n), cf)
            })
            .collect();
        v.sort_unstable();
        v
    };
    let cols: Vec<SparseVec> = basis
        .iter()
        .map(|m| {
            let x = Element::from_monomial(lift_to_t(m));
            c.reduced_coaction(&x).map(|r| to_vec(&r))
        })
        .collect::<Result<_>>()?;
    let rhs = to_vec(&c.reduced_coaction(&e(&[("y", 1)]))?);
    let (x, kdim) = solve(f, &cols, &rhs)
        .ok_or_else(|| Error::Unsupported("no lift of y is compatible with the coaction".into()))?;
    let lift = basis
        .iter()
        .zip(&x)
        .map(|(m, &v)| (sub.format_monomial(m), v))
        .collect();
    Ok(AlphaReport {
        primitive_alphas,
        lift,
        lift_kernel_dim: kdim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugates_low() {
        let a = DualSteenrod::new(5, 60).unwrap();
        let alg = a.algebra();
        let f = alg.field();
        assert_eq!(
            a.conjugate_generator(alg.idx("tb0")),
            alg.elem(&[("tb0", 1)]).scale(f, 4)
        );
        let expect = alg
            .elem(&[("tb1", 1)])
            .scale(f, 4)
            .add(f, &alg.elem(&[("xb1", 1), ("tb0", 1)]));
        assert_eq!(a.conjugate_generator(alg.idx("tb1")), expect);
    }

    #[test]
    fn sigma_table_literal() {
        let c = v1_thh_comodule(5).unwrap();
        let a = c.steenrod.algebra().clone();
        let t = c.target.clone();
        let f = c.field();
        let one_a = Element::from_monomial(a.one());
        let nu = |n: &str| c.coaction(&t.elem(&[(n, 1)])).unwrap();
        let lit = |n: &str, extra: Option<(&str, &str)>| {
            let mut x = c.pure(&one_a, &t.elem(&[(n, 1)]));
            if let Some((l, r)) = extra {
                x.add_assign(f, &c.pure(&a.elem(&[(l, 1)]), &t.elem(&[(r, 1)])));
            }
            x
        };
        assert_eq!(nu("stb1"), lit("stb1", Some(("tb0", "sxb1"))));
        assert_eq!(nu("stb2"), lit("stb2", Some(("tb0", "sxb2"))));
        assert_eq!(nu("sxb1"), lit("sxb1", None));
        assert_eq!(nu("sxb2"), lit("sxb2", None));
        assert_eq!(nu("stb0"), lit("stb0", None));
    }

    #[test]
    fn lone_tau_bar_is_not_primitive() {
        let c = v1_thh_comodule(5).unwrap();
        assert!(!c.is_primitive(&c.target.elem(&[("tb0", 1)])).unwrap());
    }
}

//! Variational 1-forms `Σ g_{i,s} δu^{i,s} + h^i_s δθ_i^s`, coefficients on
//! the left.
//!
//! Signs follow the bigraded rule: moving `δθ` past a coefficient `a` costs
//! `(-1)^{|a|}`, and `δ` itself is even. Reduced forms keep only `s = 0`
//! slots; every form is equivalent to exactly one of them modulo `∂_x`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::coeffs::{RatFunc, Rational, Scalar};
use crate::error::{Error, Result};
use crate::functionals::{apply, Derivation, EvDerivation};
use crate::jetring::{Gen, Jet, JetPoly};

/// `Σ coeff · δgen`, keyed by the differentiated generator.
#[derive(Clone, PartialEq)]
pub struct OneForm<C = RatFunc> {
    parts: BTreeMap<Gen, JetPoly<C>>,
}

impl<C: Scalar> Default for OneForm<C> {
    fn default() -> Self {
        Self::zero()
    }
}

fn gen_bidegree(g: Gen) -> (i32, i32) {
    match g {
        Gen::U(j) => (0, j.s as i32),
        Gen::Th(j) => (1, j.s as i32),
    }
}

impl<C: Scalar> OneForm<C> {
    pub fn zero() -> Self {
        OneForm {
            parts: BTreeMap::new(),
        }
    }

    /// `a · δg`.
    pub fn single(g: Gen, a: JetPoly<C>) -> Self {
        let mut f = Self::zero();
        f.add_part(g, &a);
        f
    }

    /// `δu^{i,s}`.
    pub fn du(i: usize, s: usize) -> Self {
        Self::single(Gen::u(i, s), JetPoly::one())
    }

    /// `δθ_i^s`.
    pub fn dth(i: usize, s: usize) -> Self {
        Self::single(Gen::th(i, s), JetPoly::one())
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Gen, &JetPoly<C>)> {
        self.parts.iter()
    }

    pub fn part(&self, g: Gen) -> JetPoly<C> {
        self.parts.get(&g).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub(crate) fn add_part(&mut self, g: Gen, a: &JetPoly<C>) {
        if a.is_zero() {
            return;
        }
        let e = self.parts.entry(g).or_default();
        e.add_assign_ref(a);
        if e.is_zero() {
            self.parts.remove(&g);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (g, a) in &o.parts {
            r.add_part(*g, a);
        }
        r
    }

    pub fn neg(&self) -> Self {
        OneForm {
            parts: self.parts.iter().map(|(g, a)| (*g, -a)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self::zero();
        for (g, a) in &self.parts {
            out.add_part(*g, &a.scale(r));
        }
        out
    }

    /// `b · ω`.
    pub fn mul_left(&self, b: &JetPoly<C>) -> Self {
        let mut out = Self::zero();
        for (g, a) in &self.parts {
            out.add_part(*g, &(b * a));
        }
        out
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&JetPoly<C>) -> JetPoly<D>) -> OneForm<D> {
        let mut out = OneForm::zero();
        for (g, a) in &self.parts {
            out.add_part(*g, &f(a));
        }
        out
    }

    pub fn bidegrees(&self) -> BTreeSet<(i32, i32)> {
        let mut out = BTreeSet::new();
        for (g, a) in &self.parts {
            let (gp, gd) = gen_bidegree(*g);
            for (p, d) in a.bidegrees() {
                out.insert((p + gp, d + gd));
            }
        }
        out
    }

    /// Bidegree if homogeneous; `None` for zero.
    pub fn bidegree(&self) -> Result<Option<(i32, i32)>> {
        let b = self.bidegrees();
        match b.len() {
            0 => Ok(None),
            1 => Ok(b.into_iter().next()),
            _ => Err(Error::NonHomogeneous),
        }
    }

    pub fn theta_degree(&self) -> Result<Option<i32>> {
        let ps: BTreeSet<i32> = self.bidegrees().into_iter().map(|b| b.0).collect();
        match ps.len() {
            0 => Ok(None),
            1 => Ok(ps.into_iter().next()),
            _ => Err(Error::NonHomogeneous),
        }
    }

    pub fn components(&self) -> BTreeMap<(i32, i32), Self> {
        let mut out: BTreeMap<(i32, i32), Self> = BTreeMap::new();
        for (g, a) in &self.parts {
            let (gp, gd) = gen_bidegree(*g);
            for ((p, d), c) in a.components() {
                out.entry((p + gp, d + gd)).or_default().add_part(*g, &c);
            }
        }
        out
    }

    pub fn max_index(&self) -> usize {
        self.parts
            .iter()
            .map(|(g, a)| g.jet().idx().max(a.max_index()))
            .max()
            .unwrap_or(0)
    }

    /// Integration by parts: `∫ a δv^{(s)} = ∫ (-∂_x)^s(a) δv`.
    pub fn reduce(&self) -> ReducedOneForm<C> {
        let mut out = Self::zero();
        for (g, a) in &self.parts {
            let s = g.jet().s as usize;
            let mut b = a.dx_n(s);
            if s % 2 == 1 {
                b = -b;
            }
            out.add_part(g.with_order(0), &b);
        }
        ReducedOneForm(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.parts.keys().all(|g| g.jet().s == 0)
    }
}

/// `δF = Σ ∂F/∂u^{i,s} δu^{i,s} + Σ (-1)^{|a|} a δθ_i^s`, `a = ∂F/∂θ_i^s`
/// (left partial); the twist is the cost of moving `δθ` to the right.
pub fn de_rham<C: Scalar>(f: &JetPoly<C>) -> OneForm<C> {
    let mut out = OneForm::zero();
    for g in f.generators() {
        let a = f.partial(g);
        let a = if g.is_odd() { a.parity_twist() } else { a };
        out.add_part(g, &a);
    }
    out
}

/// Form with only `s = 0` slots: `∫ Σ g_i δu^i + h^i δθ_i`.
#[derive(Clone, PartialEq)]
pub struct ReducedOneForm<C = RatFunc>(OneForm<C>);

impl<C: Scalar> Default for ReducedOneForm<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Scalar> ReducedOneForm<C> {
    pub fn zero() -> Self {
        ReducedOneForm(OneForm::zero())
    }

    /// From the `g_i` and `h^i` lists (either may be shorter).
    pub fn from_gh(g: Vec<JetPoly<C>>, h: Vec<JetPoly<C>>) -> Self {
        let mut f = OneForm::zero();
        for (k, a) in g.iter().enumerate() {
            f.add_part(Gen::u(k + 1, 0), a);
        }
        for (k, a) in h.iter().enumerate() {
            f.add_part(Gen::th(k + 1, 0), a);
        }
        ReducedOneForm(f)
    }

    /// Coefficient of `δu^i`.
    pub fn g(&self, i: usize) -> JetPoly<C> {
        self.0.part(Gen::u(i, 0))
    }

    /// Coefficient of `δθ_i`.
    pub fn h(&self, i: usize) -> JetPoly<C> {
        self.0.part(Gen::th(i, 0))
    }

    pub fn form(&self) -> &OneForm<C> {
        &self.0
    }

    pub fn into_form(self) -> OneForm<C> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        ReducedOneForm(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        ReducedOneForm(self.0.sub(&o.0))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        ReducedOneForm(self.0.scale(r))
    }

    pub fn n(&self) -> usize {
        self.0.max_index()
    }

    pub fn bidegree(&self) -> Result<Option<(i32, i32)>> {
        self.0.bidegree()
    }

    pub fn theta_degree(&self) -> Result<Option<i32>> {
        self.0.theta_degree()
    }
}

/// `∫ δF`, as a reduced form.
pub fn de_rham_reduced<C: Scalar>(f: &JetPoly<C>) -> ReducedOneForm<C> {
    de_rham(f).reduce()
}

/// `L_X ω = Σ X(g) δv + (-1)^{q|g|} g δ(X(v))` over the slots `g δv` of `ω`,
/// where `q` is the degree of `X`.
pub fn lie_derivative<C: Scalar>(x: &EvDerivation<C>, w: &OneForm<C>) -> Result<OneForm<C>> {
    w.theta_degree()?;
    Ok(lie_derivative_unchecked(x, w))
}

/// As [`lie_derivative`], without requiring `ω` to be homogeneous.
pub fn lie_derivative_unchecked<C: Scalar>(x: &EvDerivation<C>, w: &OneForm<C>) -> OneForm<C> {
    let q_odd = x.degree().rem_euclid(2) == 1;
    let mut cache: BTreeMap<Gen, Vec<JetPoly<C>>> = BTreeMap::new();
    let mut out = OneForm::zero();
    for (g, a) in w.parts() {
        out.add_part(*g, &apply(x, a));
        let fam = g.with_order(0);
        let s = g.jet().s as usize;
        let imgs = cache.entry(fam).or_insert_with(|| x.images(fam, s));
        if imgs.len() <= s {
            *imgs = x.images(fam, s);
        }
        let xv = &imgs[s];
        if xv.is_zero() {
            continue;
        }
        let dxv = de_rham(xv);
        let coeff = if q_odd { a.parity_twist() } else { a.clone() };
        out = out.add(&dxv.mul_left(&coeff));
    }
    out
}

/// `D̃ ω = L_{D} ω` for the derivation `D` of a Hamiltonian structure.
pub fn dtilde<C: Scalar>(d: &EvDerivation, w: &OneForm<C>) -> Result<OneForm<C>> {
    lie_derivative(&d.lift::<C>(), w)
}

/// `D̃` on reduced forms.
pub fn dtilde_reduced<C: Scalar>(d: &EvDerivation, w: &ReducedOneForm<C>) -> ReducedOneForm<C> {
    lie_derivative_unchecked(&d.lift::<C>(), w.form()).reduce()
}

/// `Φ(X) = ∫ Σ X(u^i) δθ_i - X(θ_i) δu^i`.
pub fn phi<C: Scalar>(x: &EvDerivation<C>) -> ReducedOneForm<C> {
    let g = x.th_images().iter().map(|p| -p).collect();
    let h = x.u_images().to_vec();
    ReducedOneForm::from_gh(g, h)
}

/// Inverse of [`phi`]: `X(u^i) = h^i`, `X(θ_i) = -g_i`.
pub fn phi_inverse<C: Scalar>(w: &ReducedOneForm<C>, n: usize) -> Result<EvDerivation<C>> {
    let n = n.max(w.n());
    let u: Vec<_> = (1..=n).map(|i| w.h(i)).collect();
    let th: Vec<_> = (1..=n).map(|i| -w.g(i)).collect();
    let degree = w.theta_degree()?.map(|p| p - 1).unwrap_or(0);
    EvDerivation::new(u, th, degree)
}

/// Checks `Φ([D, X]) = L_D Φ(X)` on reduced forms.
pub fn intertwine_check(d: &EvDerivation, x: &EvDerivation) -> bool {
    let lhs = phi(&d.commutator(x));
    let rhs = dtilde_reduced(d, &phi(x));
    lhs == rhs
}

fn fmt_gen(g: Gen) -> String {
    match g {
        Gen::U(Jet { i, s }) => format!("du[{i},{s}]"),
        Gen::Th(Jet { i, s }) => format!("dth[{i},{s}]"),
    }
}

impl<C: Scalar> fmt::Display for OneForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<(String, &C)> = self
            .parts
            .iter()
            .flat_map(|(g, a)| {
                let gs = fmt_gen(*g);
                a.terms().map(move |(m, c)| {
                    let ms = if m.is_one() {
                        gs.clone()
                    } else {
                        format!("{m}*{gs}")
                    };
                    (ms, c)
                })
            })
            .collect();
        crate::jetring::poly::write_terms(f, items.into_iter())
    }
}

impl<C: Scalar> fmt::Debug for OneForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<C: Scalar> fmt::Display for ReducedOneForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "int({})", self.0)
    }
}

impl<C: Scalar> fmt::Debug for ReducedOneForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{derivation_of, th_th, LocalFunctional};
    use crate::jetring::DiffPoly as P;

    fn half() -> Rational {
        Rational::new(1, 2)
    }

    fn kdv0() -> LocalFunctional {
        LocalFunctional::new(th_th(1, 1, 1).scale(&half()))
    }

    #[test]
    fn reduction_integrates_by_parts() {
        let w = OneForm::single(Gen::u(1, 2), P::th(1, 1));
        let r = w.reduce();
        assert_eq!(r.g(1), P::th(1, 3));
        assert!(r.h(1).is_zero());
    }

    #[test]
    fn de_rham_of_kdv_bivector() {
        // the bigraded sign gives -int(θ^1 δθ), consistent with Φ(D_P0) = int(θ^1 δθ)
        let r = de_rham_reduced(kdv0().density());
        assert_eq!(
            r,
            ReducedOneForm::from_gh(vec![P::zero()], vec![-P::th(1, 1)])
        );
        let d0 = derivation_of(&kdv0(), 1).unwrap();
        assert_eq!(
            phi(&d0),
            ReducedOneForm::from_gh(vec![P::zero()], vec![P::th(1, 1)])
        );
    }

    #[test]
    fn dtilde_kdv_example() {
        let d0 = derivation_of(&kdv0(), 1).unwrap();
        let w = ReducedOneForm::from_gh(vec![P::th(1, 0)], vec![]);
        let r = dtilde_reduced(&d0, &w);
        assert_eq!(r, ReducedOneForm::from_gh(vec![], vec![P::th(1, 1)]));
    }

    #[test]
    fn phi_round_trip() {
        let x = EvDerivation::new(
            vec![P::u(1, 1) * P::th(1, 0)],
            vec![P::th(1, 0) * P::th(1, 2)],
            1,
        )
        .unwrap();
        assert_eq!(phi_inverse(&phi(&x), 1).unwrap(), x);
    }

    #[test]
    fn exact_forms_reduce_consistently() {
        let f = P::u(1, 0) * P::u(1, 2) * P::th(1, 0) * P::th(1, 1);
        let a = de_rham_reduced(&f.dx());
        assert!(a.is_zero());
    }

    #[test]
    fn printing() {
        let w = OneForm::single(Gen::th(1, 0), P::u(1, 2)).add(&OneForm::du(1, 1).scale(&half()));
        assert_eq!(w.to_string(), "1/2*du[1,1] + u[1,2]*dth[1,0]");
    }
}

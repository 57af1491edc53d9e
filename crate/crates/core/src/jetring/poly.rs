use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::mono::{Gen, Jet, Mono};
use crate::coeffs::{RatFunc, Rational, Scalar, MAX_U};
use crate::error::{Error, Result};

/// Element of the super jet ring with coefficients in `C`.
#[derive(Clone, PartialEq)]
pub struct JetPoly<C> {
    pub(crate) terms: BTreeMap<Mono, C>,
}

/// Differential polynomial with rational-function coefficients.
pub type DiffPoly = JetPoly<RatFunc>;

impl<C: Scalar> Default for JetPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Scalar> JetPoly<C> {
    pub fn zero() -> Self {
        JetPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::scalar(C::one())
    }

    pub fn scalar(c: C) -> Self {
        Self::term(Mono::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Self::scalar(C::from_base(RatFunc::int(n)))
    }

    pub fn rational(r: Rational) -> Self {
        Self::scalar(C::from_base(RatFunc::constant(r)))
    }

    pub fn term(m: Mono, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        JetPoly { terms }
    }

    /// `u^{i,s}`; for `s = 0` this is the coefficient function `u^i`.
    pub fn u(i: usize, s: usize) -> Self {
        if s == 0 {
            Self::scalar(C::from_base(RatFunc::u(i)))
        } else {
            Self::term(Mono::u(Jet::new(i, s)), C::one())
        }
    }

    pub fn th(i: usize, s: usize) -> Self {
        Self::term(Mono::th(Jet::new(i, s)), C::one())
    }

    pub fn gen(g: Gen) -> Self {
        match g {
            Gen::U(j) => Self::u(j.idx(), j.s as usize),
            Gen::Th(j) => Self::th(j.idx(), j.s as usize),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn from_terms(ts: impl IntoIterator<Item = (Mono, C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in ts {
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Mono, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub(crate) fn add_signed(&mut self, m: Mono, c: C, sign: i32) {
        if sign < 0 {
            self.add_term(m, c.neg());
        } else {
            self.add_term(m, c);
        }
    }

    pub fn add_assign_ref(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign_ref(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.neg());
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        JetPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.scale(r)))
                .collect(),
        }
    }

    pub fn mul_scalar(&self, k: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.mul(k))))
    }

    pub fn mul_poly(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                if let Some((m, s)) = m1.mul(m2) {
                    out.add_signed(m, c1.mul(c2), s);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul_poly(self);
        }
        acc
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> JetPoly<D> {
        JetPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn try_map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> Result<D>) -> Result<JetPoly<D>> {
        let mut out = JetPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn map_monos(&self, f: impl Fn(&Mono, &C) -> Option<(Mono, C)>) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|(m, c)| f(m, c)))
    }

    /// Keeps the terms for which `keep` holds.
    pub fn filter(&self, keep: impl Fn(&Mono) -> bool) -> Self {
        JetPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Multiplies every term by `(-1)^{deg_θ}`.
    pub fn parity_twist(&self) -> Self {
        JetPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), if m.parity() == 1 { c.neg() } else { c.clone() }))
                .collect(),
        }
    }

    /// Even and odd parts.
    pub fn split_parity(&self) -> (Self, Self) {
        (
            self.filter(|m| m.parity() == 0),
            self.filter(|m| m.parity() == 1),
        )
    }

    pub fn bidegrees(&self) -> BTreeSet<(i32, i32)> {
        self.terms.keys().map(|m| m.bidegree()).collect()
    }

    pub fn components(&self) -> BTreeMap<(i32, i32), Self> {
        let mut out: BTreeMap<(i32, i32), Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.bidegree())
                .or_default()
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Bidegree if homogeneous, `None` for zero.
    pub fn bidegree(&self) -> Result<Option<(i32, i32)>> {
        let b = self.bidegrees();
        match b.len() {
            0 => Ok(None),
            1 => Ok(b.into_iter().next()),
            _ => Err(Error::NonHomogeneous),
        }
    }

    /// deg_θ if homogeneous in super degree.
    pub fn theta_degree(&self) -> Result<Option<i32>> {
        let ps: BTreeSet<i32> = self.terms.keys().map(|m| m.theta_degree()).collect();
        match ps.len() {
            0 => Ok(None),
            1 => Ok(ps.into_iter().next()),
            _ => Err(Error::NonHomogeneous),
        }
    }

    /// Parity of the super degree if homogeneous, 0 for zero.
    pub fn parity(&self) -> Result<u8> {
        let ps: BTreeSet<u8> = self.terms.keys().map(|m| m.parity()).collect();
        match ps.len() {
            0 => Ok(0),
            1 => Ok(*ps.iter().next().unwrap()),
            _ => Err(Error::NonHomogeneous),
        }
    }

    /// Highest component index occurring, including in coefficients.
    pub fn max_index(&self) -> usize {
        let mut n = 0;
        for (m, c) in &self.terms {
            let mask = c.u_mask();
            if mask != 0 {
                n = n.max(32 - mask.leading_zeros() as usize);
            }
            for (j, _) in m.even() {
                n = n.max(j.idx());
            }
            for j in m.odd() {
                n = n.max(j.idx());
            }
            for (i, _) in m.logs() {
                n = n.max(*i as usize);
            }
        }
        n
    }

    /// Generators the element depends on; `u^{i,0}` when a coefficient depends on `u^i`.
    pub fn generators(&self) -> BTreeSet<Gen> {
        let mut out = BTreeSet::new();
        for (m, c) in &self.terms {
            let mask = c.u_mask();
            for i in 0..MAX_U {
                if mask >> i & 1 == 1 {
                    out.insert(Gen::u(i + 1, 0));
                }
            }
            for (j, _) in m.even() {
                out.insert(Gen::U(*j));
            }
            for (i, _) in m.logs() {
                out.insert(Gen::u(*i as usize, 1));
            }
            for j in m.odd() {
                out.insert(Gen::Th(*j));
            }
        }
        out
    }

    /// Highest derivative order of `g`'s component family occurring (`None` if absent).
    pub fn max_order(&self, odd: bool, i: usize) -> Option<usize> {
        self.generators()
            .into_iter()
            .filter(|g| g.is_odd() == odd && g.jet().idx() == i)
            .map(|g| g.jet().s as usize)
            .max()
    }

    /// Partial derivative with respect to a generator; left derivative for odd ones.
    pub fn partial(&self, g: Gen) -> Self {
        let mut out = Self::zero();
        match g {
            Gen::U(j) if j.s == 0 => {
                for (m, c) in &self.terms {
                    out.add_term(m.clone(), c.partial_u(j.idx()));
                }
            }
            Gen::U(j) => {
                for (m, c) in &self.terms {
                    let e = m.exponent(j);
                    if e != 0 {
                        let mut nm = m.clone();
                        nm.adjust_even(j, -1);
                        out.add_term(nm, c.scale(&Rational::from_int(e as i64)));
                    }
                    if j.s == 1 {
                        let k = m.log_exponent(j.i);
                        if k > 0 {
                            // d(log u^{i,1}) = (u^{i,1})^{-1}
                            let mut nm = m.clone();
                            nm.adjust_log(j.i, -1);
                            nm.adjust_even(j, -1);
                            out.add_term(nm, c.scale(&Rational::from_int(k as i64)));
                        }
                    }
                }
            }
            Gen::Th(j) => {
                for (m, c) in &self.terms {
                    if let Some(k) = m.position_odd(j) {
                        let (nm, s) = m.remove_odd(k);
                        out.add_signed(nm, c.clone(), s);
                    }
                }
            }
        }
        out
    }

    /// Total x-derivative.
    pub fn dx(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mask = c.u_mask();
            for i in 0..MAX_U {
                if mask >> i & 1 == 1 {
                    let mut nm = m.clone();
                    nm.adjust_even(Jet::new(i + 1, 1), 1);
                    out.add_term(nm, c.partial_u(i + 1));
                }
            }
            for (j, e) in m.even() {
                let mut nm = m.clone();
                nm.adjust_even(*j, -1);
                nm.adjust_even(j.next(), 1);
                out.add_term(nm, c.scale(&Rational::from_int(*e as i64)));
            }
            for (i, k) in m.logs() {
                // d/dx log u^{i,1} = u^{i,2} / u^{i,1}
                let mut nm = m.clone();
                nm.adjust_log(*i, -1);
                nm.adjust_even(Jet { i: *i, s: 1 }, -1);
                nm.adjust_even(Jet { i: *i, s: 2 }, 1);
                out.add_term(nm, c.scale(&Rational::from_int(*k as i64)));
            }
            for (k, j) in m.odd().iter().enumerate() {
                if let Some((nm, s)) = m.replace_odd(k, j.next()) {
                    out.add_signed(nm, c.clone(), s);
                }
            }
        }
        out
    }

    pub fn dx_n(&self, k: usize) -> Self {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.dx();
        }
        p
    }

    /// Variational derivative `δ/δu^i` (for `odd = false`) or `δ/δθ_i`.
    pub fn var_der(&self, odd: bool, i: usize) -> Self {
        let Some(smax) = self.max_order(odd, i) else {
            return Self::zero();
        };
        let mk = |s| if odd { Gen::th(i, s) } else { Gen::u(i, s) };
        // Horner: Σ (-∂x)^s a_s = a_0 - ∂x(a_1 - ∂x(a_2 - ...))
        let mut acc = self.partial(mk(smax));
        for s in (0..smax).rev() {
            let mut t = self.partial(mk(s));
            t.sub_assign_ref(&acc.dx());
            acc = t;
        }
        acc
    }

    /// Coefficient of the monomial built from the given factors.
    pub fn coefficient_of(&self, even: &[(Jet, i32)], odd: &[Jet]) -> C {
        let mut m = Mono::one();
        for (j, k) in even {
            m.adjust_even(*j, *k);
        }
        let (o, s) = super::mono::sort_odd(odd).expect("repeated odd generator");
        m.odd = o;
        let c = self.coeff(&m);
        if s < 0 {
            c.neg()
        } else {
            c
        }
    }
}

impl DiffPoly {
    /// Lifts to another coefficient ring.
    pub fn lift<D: Scalar>(&self) -> JetPoly<D> {
        self.map_coeffs(|c| D::from_base(c.clone()))
    }
}

impl<C: Scalar> fmt::Display for JetPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(m, c)| (m.to_string(), c)))
    }
}

impl<C: Scalar> fmt::Debug for JetPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Writes `Σ coeff*factor` in the parseable text syntax.
pub(crate) fn write_terms<'a, C: Scalar + 'a>(
    f: &mut fmt::Formatter<'_>,
    it: impl Iterator<Item = (String, &'a C)>,
) -> fmt::Result {
    let mut first = true;
    for (m, c) in it {
        let body = match c.as_rational() {
            Some(r) => {
                let neg = r.is_negative();
                let a = r.abs();
                let s = if m == "1" {
                    a.to_string()
                } else if a.is_one() {
                    m
                } else {
                    format!("{a}*{m}")
                };
                (neg, s)
            }
            None => {
                let s = if m == "1" {
                    format!("({c})")
                } else {
                    format!("({c})*{m}")
                };
                (false, s)
            }
        };
        match (first, body.0) {
            (true, true) => write!(f, "-{}", body.1)?,
            (true, false) => write!(f, "{}", body.1)?,
            (false, true) => write!(f, " - {}", body.1)?,
            (false, false) => write!(f, " + {}", body.1)?,
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

macro_rules! ops {
    ($t:ident, $m:ident, $body:expr) => {
        impl<C: Scalar> $t<&JetPoly<C>> for &JetPoly<C> {
            type Output = JetPoly<C>;
            fn $m(self, o: &JetPoly<C>) -> JetPoly<C> {
                let f: fn(&JetPoly<C>, &JetPoly<C>) -> JetPoly<C> = $body;
                f(self, o)
            }
        }
        impl<C: Scalar> $t<JetPoly<C>> for JetPoly<C> {
            type Output = JetPoly<C>;
            fn $m(self, o: JetPoly<C>) -> JetPoly<C> {
                (&self).$m(&o)
            }
        }
        impl<C: Scalar> $t<&JetPoly<C>> for JetPoly<C> {
            type Output = JetPoly<C>;
            fn $m(self, o: &JetPoly<C>) -> JetPoly<C> {
                (&self).$m(o)
            }
        }
        impl<C: Scalar> $t<JetPoly<C>> for &JetPoly<C> {
            type Output = JetPoly<C>;
            fn $m(self, o: JetPoly<C>) -> JetPoly<C> {
                self.$m(&o)
            }
        }
    };
}

ops!(Add, add, |a, b| {
    let mut r = a.clone();
    r.add_assign_ref(b);
    r
});
ops!(Sub, sub, |a, b| {
    let mut r = a.clone();
    r.sub_assign_ref(b);
    r
});
ops!(Mul, mul, |a, b| a.mul_poly(b));

impl<C: Scalar> Neg for JetPoly<C> {
    type Output = JetPoly<C>;
    fn neg(self) -> JetPoly<C> {
        -&self
    }
}

impl<C: Scalar> Neg for &JetPoly<C> {
    type Output = JetPoly<C>;
    fn neg(self) -> JetPoly<C> {
        JetPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = DiffPoly;

    fn half() -> Rational {
        Rational::new(1, 2)
    }

    #[test]
    fn graded_commutativity() {
        let a = P::th(1, 1) * P::th(1, 0);
        assert_eq!(a, -(P::th(1, 0) * P::th(1, 1)));
        let b = (P::u(1, 1) * P::th(1, 0)) * (P::th(1, 1) * P::th(2, 0));
        let c = P::u(1, 1) * (P::th(1, 0) * (P::th(1, 1) * P::th(2, 0)));
        assert_eq!(b, c);
        assert_eq!(b.len(), 1);
        assert!(b.terms().next().unwrap().1.is_one());
    }

    #[test]
    fn dx_examples() {
        let p = P::u(1, 0) * P::u(1, 0);
        assert_eq!(
            p.dx(),
            P::u(1, 0).scale(&Rational::from_int(2)) * P::u(1, 1)
        );
        let q = (P::th(1, 0) * P::th(1, 1)).dx();
        assert_eq!(q, P::th(1, 0) * P::th(1, 2));
    }

    #[test]
    fn variational_derivative_left_convention() {
        let p = (P::th(1, 0) * P::th(1, 1)).scale(&half());
        assert_eq!(p.var_der(true, 1), P::th(1, 1));
        assert!(p.var_der(false, 1).is_zero());
    }

    #[test]
    fn variational_derivative_of_total_derivative_vanishes() {
        let g = P::u(1, 0) * P::u(1, 2) * P::th(1, 0) + P::u(2, 1) * P::th(2, 1) * P::th(1, 0);
        let h = g.dx();
        for i in 1..=2 {
            assert!(h.var_der(false, i).is_zero());
            assert!(h.var_der(true, i).is_zero());
        }
    }

    #[test]
    fn bidegree_components() {
        let p = P::u(1, 1) * P::th(1, 2) + P::u(1, 2);
        let comps = p.components();
        assert_eq!(
            comps.keys().copied().collect::<Vec<_>>(),
            vec![(0, 2), (1, 3)]
        );
        assert_eq!(p.bidegree(), Err(Error::NonHomogeneous));
    }

    #[test]
    fn printing() {
        let p = (P::th(1, 0) * P::th(1, 1)).scale(&half()) - P::u(1, 0) * P::u(1, 2);
        assert_eq!(p.to_string(), "(-u[1])*u[1,2] + 1/2*th[1,0]*th[1,1]");
    }
}

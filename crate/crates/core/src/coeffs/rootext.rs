//! Base rational functions extended by formal square roots `s_i` of metric
//! entries, with `s_i^2 = f^i`.

use std::fmt;
use std::sync::Arc;

use super::ratfunc::RatFunc;
use super::rational::Rational;
use super::scalar::{EvalPoint, Scalar};
use crate::error::{Error, Result};

/// The registered radicands `f^1..f^n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RootTower {
    f: Vec<RatFunc>,
}

impl RootTower {
    pub fn new(f: Vec<RatFunc>) -> Result<Arc<Self>> {
        for (i, x) in f.iter().enumerate() {
            if x.is_zero() {
                return Err(Error::ZeroMetricEntry(i + 1));
            }
        }
        Ok(Arc::new(RootTower { f }))
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    pub fn radicand(&self, i: usize) -> &RatFunc {
        &self.f[i - 1]
    }

    /// `s_i`, `i` counted from 1.
    pub fn s(self: &Arc<Self>, i: usize) -> Result<RootExt> {
        if i == 0 || i > self.f.len() {
            return Err(Error::RootNotRegistered(i));
        }
        Ok(RootExt {
            terms: vec![(1 << (i - 1), RatFunc::one())],
            tower: Some(self.clone()),
        })
    }

    /// `(f^i)^(k/2)` for any integer `k`.
    pub fn half_power(self: &Arc<Self>, i: usize, k: i32) -> Result<RootExt> {
        let f = self.radicand(i).clone();
        let whole = f.pow(k.div_euclid(2))?;
        let mut r = RootExt::from_base(whole);
        if k.rem_euclid(2) == 1 {
            r = r.try_mul(&self.s(i)?)?;
        }
        Ok(r)
    }
}

#[derive(Clone)]
pub struct RootExt {
    /// `(mask, c)` means `c * prod_{i in mask} s_i`; sorted by mask, no zero `c`.
    terms: Vec<(u32, RatFunc)>,
    tower: Option<Arc<RootTower>>,
}

impl PartialEq for RootExt {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms
    }
}

impl RootExt {
    pub fn terms(&self) -> &[(u32, RatFunc)] {
        &self.terms
    }

    pub fn tower(&self) -> Option<&Arc<RootTower>> {
        self.tower.as_ref()
    }

    /// Pure base part, if no root occurs.
    pub fn as_base(&self) -> Option<RatFunc> {
        match self.terms.as_slice() {
            [] => Some(RatFunc::zero()),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    fn join(&self, o: &Self) -> Result<Option<Arc<RootTower>>> {
        match (&self.tower, &o.tower) {
            (None, t) | (t, None) => Ok(t.clone()),
            (Some(a), Some(b)) if Arc::ptr_eq(a, b) || a == b => Ok(Some(a.clone())),
            _ => Err(Error::MixedExtension),
        }
    }

    fn normalize(mut ts: Vec<(u32, RatFunc)>, tower: Option<Arc<RootTower>>) -> Self {
        ts.sort_by_key(|t| t.0);
        let mut out: Vec<(u32, RatFunc)> = Vec::with_capacity(ts.len());
        for (m, c) in ts {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.add(&c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        RootExt { terms: out, tower }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        let t = self.join(o)?;
        let mut ts = self.terms.clone();
        ts.extend(o.terms.iter().cloned());
        Ok(Self::normalize(ts, t))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&Scalar::neg(o))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        let t = self.join(o)?;
        let mut ts = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut c = c1.mul(c2);
                let both = m1 & m2;
                if both != 0 {
                    let tw = t.as_ref().ok_or(Error::RootNotRegistered(0))?;
                    for i in 0..tw.n() {
                        if both >> i & 1 == 1 {
                            c = c.mul(&tw.f[i]);
                        }
                    }
                }
                ts.push((m1 ^ m2, c));
            }
        }
        Ok(Self::normalize(ts, t))
    }

    /// Exact inverse of a single-term element.
    pub fn try_inv(&self) -> Result<Self> {
        match self.terms.as_slice() {
            [(m, c)] => {
                // (c s_M)^-1 = s_M / (c prod f^i)
                let mut d = c.clone();
                if *m != 0 {
                    let tw = self.tower.as_ref().ok_or(Error::RootNotRegistered(0))?;
                    for i in 0..tw.n() {
                        if m >> i & 1 == 1 {
                            d = d.mul(&tw.f[i]);
                        }
                    }
                }
                Ok(RootExt {
                    terms: vec![(*m, d.inv()?)],
                    tower: self.tower.clone(),
                })
            }
            [] => Err(Error::DivisionByZero),
            _ => Err(Error::Invalid(
                "inverse of a multi-term radical expression".into(),
            )),
        }
    }

    fn root_value(&self, i: usize, at: &EvalPoint) -> Result<Rational> {
        let tw = self.tower.as_ref().ok_or(Error::RootNotRegistered(i + 1))?;
        let v = Scalar::eval(&tw.f[i], at)?;
        v.sqrt().ok_or(Error::NonSquareRoot(i + 1))
    }
}

/// Binary operations with tower checking.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_ops(a: &RootExt, b: &RootExt, op: FieldOp) -> Result<RootExt> {
    match op {
        FieldOp::Add => a.try_add(b),
        FieldOp::Sub => a.try_sub(b),
        FieldOp::Mul => a.try_mul(b),
        FieldOp::Div => a.try_mul(&b.try_inv()?),
    }
}

impl Scalar for RootExt {
    fn zero() -> Self {
        RootExt {
            terms: Vec::new(),
            tower: None,
        }
    }
    fn one() -> Self {
        Self::from_base(RatFunc::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_base(b: RatFunc) -> Self {
        Self::normalize(vec![(0, b)], None)
    }
    fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("mixed root towers")
    }
    fn sub(&self, o: &Self) -> Self {
        self.try_sub(o).expect("mixed root towers")
    }
    fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("mixed root towers")
    }
    fn neg(&self) -> Self {
        RootExt {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
            tower: self.tower.clone(),
        }
    }
    fn scale(&self, c: &Rational) -> Self {
        Self::normalize(
            self.terms.iter().map(|(m, x)| (*m, x.scale(c))).collect(),
            self.tower.clone(),
        )
    }
    fn partial_u(&self, j: usize) -> Self {
        let mut ts = Vec::new();
        for (m, c) in &self.terms {
            ts.push((*m, c.partial_u(j)));
            if *m != 0 {
                let tw = self.tower.as_ref().expect("roots without tower");
                for i in 0..tw.n() {
                    if m >> i & 1 == 1 {
                        // d s_i = (d f^i) / (2 f^i) * s_i
                        let f = &tw.f[i];
                        let k = f.partial_u(j).div(f).unwrap().scale(&Rational::new(1, 2));
                        ts.push((*m, c.mul(&k)));
                    }
                }
            }
        }
        Self::normalize(ts, self.tower.clone())
    }
    fn u_mask(&self) -> u32 {
        let mut mask = 0;
        for (m, c) in &self.terms {
            mask |= c.u_mask();
            if let Some(tw) = &self.tower {
                for i in 0..tw.n() {
                    if m >> i & 1 == 1 {
                        mask |= tw.f[i].u_mask();
                    }
                }
            }
        }
        mask
    }
    fn eval(&self, at: &EvalPoint) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = Scalar::eval(c, at)?;
            for i in 0..32 {
                if m >> i & 1 == 1 {
                    t = &t * &self.root_value(i, at)?;
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }
    fn as_rational(&self) -> Option<Rational> {
        self.as_base().and_then(|b| b.constant_value())
    }
}

impl fmt::Display for RootExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for i in 0..32 {
                if m >> i & 1 == 1 {
                    write!(f, "*s[{}]", i + 1)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RootExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower() -> Arc<RootTower> {
        RootTower::new(vec![RatFunc::u(1).mul(&RatFunc::u(2)), RatFunc::u(2)]).unwrap()
    }

    #[test]
    fn square_of_root() {
        let t = tower();
        let s1 = t.s(1).unwrap();
        assert_eq!(
            s1.try_mul(&s1).unwrap().as_base(),
            Some(RatFunc::u(1).mul(&RatFunc::u(2)))
        );
    }

    #[test]
    fn inverse_of_root() {
        let t = tower();
        let s2 = t.s(2).unwrap();
        let p = s2.try_mul(&s2.try_inv().unwrap()).unwrap();
        assert_eq!(p, RootExt::one());
    }

    #[test]
    fn mixed_towers_rejected() {
        let a = tower().s(1).unwrap();
        let b = RootTower::new(vec![RatFunc::u(1)]).unwrap().s(1).unwrap();
        assert_eq!(field_ops(&a, &b, FieldOp::Add), Err(Error::MixedExtension));
        assert_eq!(tower().s(3).unwrap_err(), Error::RootNotRegistered(3));
    }

    #[test]
    fn eval_roots() {
        let t = tower();
        let s = t.s(1).unwrap().try_mul(&t.s(2).unwrap()).unwrap();
        let at = EvalPoint::new(vec![Rational::from_int(4), Rational::from_int(9)]);
        assert_eq!(s.eval(&at), Ok(Rational::from_int(18)));
        let bad = EvalPoint::new(vec![Rational::from_int(2), Rational::from_int(9)]);
        assert_eq!(t.s(1).unwrap().eval(&bad), Err(Error::NonSquareRoot(1)));
    }

    #[test]
    fn derivative_of_root() {
        let t = RootTower::new(vec![RatFunc::u(1)]).unwrap();
        let s = t.s(1).unwrap();
        // d/du sqrt(u) = s / (2u)
        let want = s
            .try_mul(&RootExt::from_base(
                RatFunc::u(1).scale(&Rational::from_int(2)).inv().unwrap(),
            ))
            .unwrap();
        assert_eq!(s.partial_u(1), want);
    }
}

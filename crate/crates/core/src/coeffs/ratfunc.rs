//! Rational functions of the base coordinates, held in lowest terms with
//! a monic denominator.

use std::fmt;

use super::mpoly::{MPoly, MAX_U, MAX_VARS, PARAM_BASE};
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc {
            num: MPoly::one(),
            den: MPoly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        RatFunc {
            num: MPoly::constant(c),
            den: MPoly::one(),
        }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_int(n))
    }

    /// The base coordinate `u^i`, with `i` counted from 1.
    pub fn u(i: usize) -> Self {
        assert!(
            (1..=MAX_U).contains(&i),
            "base coordinate index out of range"
        );
        Self::poly(MPoly::var(i - 1))
    }

    /// Free symbolic parameter `C[k]`, `k` counted from 1.
    pub fn param(k: usize) -> Self {
        assert!(
            k >= 1 && PARAM_BASE + k - 1 < MAX_VARS,
            "parameter index out of range"
        );
        Self::poly(MPoly::var(PARAM_BASE + k - 1))
    }

    pub fn poly(p: MPoly) -> Self {
        RatFunc {
            num: p,
            den: MPoly::one(),
        }
    }

    /// Reduces `num/den` to lowest terms.
    pub fn from_parts(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.constant_value() {
            let ci = c.inv().unwrap();
            return RatFunc {
                num: num.scale(&ci),
                den: MPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (n, d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let lc = d.leading_coeff().inv().unwrap();
        RatFunc {
            num: n.scale(&lc),
            den: d.scale(&lc),
        }
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn denom(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Bitmask of the base coordinates (not parameters) that occur.
    pub fn u_mask(&self) -> u32 {
        (self.num.var_mask() | self.den.var_mask()) & ((1 << MAX_U) - 1)
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return Self::poly(self.num.add(&o.num));
        }
        if self.den.is_one() {
            return RatFunc {
                num: self.num.mul(&o.den).add(&o.num),
                den: o.den.clone(),
            };
        }
        if o.den.is_one() {
            return RatFunc {
                num: o.num.mul(&self.den).add(&self.num),
                den: self.den.clone(),
            };
        }
        if self.den == o.den {
            return Self::normalized(self.num.add(&o.num), self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        let d1 = self.den.div_exact(&g).unwrap();
        let d2 = o.den.div_exact(&g).unwrap();
        let num = self.num.mul(&d2).add(&o.num.mul(&d1));
        Self::normalized(num, self.den.mul(&d2))
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Self::poly(self.num.mul(&o.num));
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = o.den.div_exact(&g1).unwrap();
        let n2 = o.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading_coeff().inv().unwrap();
        RatFunc {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<RatFunc> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RatFunc {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// Partial derivative in polynomial variable slot `k`.
    pub fn partial_var(&self, k: usize) -> RatFunc {
        let dn = self.num.partial(k);
        if self.den.is_one() {
            return Self::poly(dn);
        }
        let dd = self.den.partial(k);
        if dd.is_zero() {
            return RatFunc {
                num: dn,
                den: self.den.clone(),
            };
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::normalized(num, self.den.mul(&self.den))
    }

    /// Partial derivative with respect to `u^i`, `i` counted from 1.
    pub fn partial_u(&self, i: usize) -> RatFunc {
        self.partial_var(i - 1)
    }

    /// Evaluates at `u = point` (parameters taken from `params`).
    pub fn eval_with(&self, point: &[Rational], params: &[Rational]) -> Result<Rational> {
        let mut full = vec![Rational::zero(); MAX_VARS];
        for (k, v) in point.iter().enumerate().take(MAX_U) {
            full[k] = v.clone();
        }
        for (k, v) in params.iter().enumerate() {
            full[PARAM_BASE + k] = v.clone();
        }
        let d = self.den.eval(&full);
        if d.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        Ok(&self.num.eval(&full) / &d)
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        self.eval_with(point, &[])
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(i: usize) -> RatFunc {
        RatFunc::u(i)
    }

    #[test]
    fn lowest_terms() {
        let a = u(1).mul(&u(1)).sub(&RatFunc::int(1));
        let b = u(1).sub(&RatFunc::int(1));
        let q = a.div(&b).unwrap();
        assert_eq!(q, u(1).add(&RatFunc::int(1)));
        assert!(q.is_polynomial());
    }

    #[test]
    fn monic_denominator() {
        let q = RatFunc::int(1)
            .div(&u(1).scale(&Rational::from_int(-2)))
            .unwrap();
        assert_eq!(q.to_string(), "(-1/2)/(u[1])");
    }

    #[test]
    fn field_identities() {
        let a = u(1).div(&u(2).add(&RatFunc::int(1))).unwrap();
        let b = u(2).div(&u(1)).unwrap();
        let s = a.add(&b).sub(&b);
        assert_eq!(s, a);
        assert_eq!(a.mul(&a.inv().unwrap()), RatFunc::one());
    }

    #[test]
    fn derivative_quotient_rule() {
        let a = RatFunc::int(1).div(&u(1)).unwrap();
        assert_eq!(
            a.partial_u(1),
            RatFunc::int(-1).div(&u(1).mul(&u(1))).unwrap()
        );
    }

    #[test]
    fn zero_division() {
        assert_eq!(u(1).div(&RatFunc::zero()), Err(Error::DivisionByZero));
        let a = RatFunc::int(1).div(&u(1)).unwrap();
        assert_eq!(a.eval(&[Rational::zero()]), Err(Error::PoleAtPoint));
    }
}

use std::fmt;

use super::ratfunc::RatFunc;
use super::rational::Rational;
use super::scalar::{EvalPoint, Scalar};
use crate::error::{Error, Result};

/// Polynomial in the formal parameter `lam` over base rational functions.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LamPoly {
    /// Coefficient of `lam^k` at index `k`; no trailing zeros.
    coeffs: Vec<RatFunc>,
}

impl LamPoly {
    pub fn lam() -> Self {
        LamPoly {
            coeffs: vec![RatFunc::zero(), RatFunc::one()],
        }
    }

    pub fn from_coeffs(mut coeffs: Vec<RatFunc>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        LamPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> RatFunc {
        self.coeffs.get(k).cloned().unwrap_or_else(RatFunc::zero)
    }

    /// Degree in `lam`; zero for the zero element.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn substitute(&self, l: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(l).add(c);
        }
        acc
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut v = vec![RatFunc::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        LamPoly { coeffs: v }
    }

    fn zip(&self, o: &Self, f: impl Fn(&RatFunc, &RatFunc) -> RatFunc) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = RatFunc::zero();
        let v = (0..n)
            .map(|k| {
                f(
                    self.coeffs.get(k).unwrap_or(&z),
                    o.coeffs.get(k).unwrap_or(&z),
                )
            })
            .collect();
        Self::from_coeffs(v)
    }
}

impl Scalar for LamPoly {
    fn zero() -> Self {
        LamPoly { coeffs: Vec::new() }
    }
    fn one() -> Self {
        LamPoly {
            coeffs: vec![RatFunc::one()],
        }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn from_base(b: RatFunc) -> Self {
        Self::from_coeffs(vec![b])
    }
    fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(b))
    }
    fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.sub(b))
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![RatFunc::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(v)
    }
    fn neg(&self) -> Self {
        LamPoly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }
    fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x.scale(c)).collect())
    }
    fn partial_u(&self, i: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x.partial_u(i)).collect())
    }
    fn u_mask(&self) -> u32 {
        self.coeffs.iter().fold(0, |m, c| m | c.u_mask())
    }
    fn eval(&self, at: &EvalPoint) -> Result<Rational> {
        if self.degree() == 0 {
            return Scalar::eval(&self.coeff(0), at);
        }
        let l = at.lambda.as_ref().ok_or(Error::MixedExtension)?;
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * l) + &Scalar::eval(c, at)?;
        }
        Ok(acc)
    }
    fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => self.coeffs[0].constant_value(),
            _ => None,
        }
    }
}

impl fmt::Display for LamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*lam")?,
                _ => write!(f, "({c})*lam^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

use std::fmt;

use super::ratfunc::RatFunc;
use super::rational::Rational;
use crate::error::Result;

/// Values assigned to the base coordinates, the parameters and `lam`.
#[derive(Clone, Debug, Default)]
pub struct EvalPoint {
    pub u: Vec<Rational>,
    pub params: Vec<Rational>,
    pub lambda: Option<Rational>,
}

impl EvalPoint {
    pub fn new(u: Vec<Rational>) -> Self {
        EvalPoint {
            u,
            params: Vec::new(),
            lambda: None,
        }
    }

    pub fn with_lambda(mut self, l: Rational) -> Self {
        self.lambda = Some(l);
        self
    }

    pub fn with_params(mut self, p: Vec<Rational>) -> Self {
        self.params = p;
        self
    }
}

/// Coefficient rings of jet polynomials: functions of the base coordinates,
/// possibly extended by `lam` or by square roots of metric entries.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_base(b: RatFunc) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
    /// Partial derivative in `u^i`, `i` counted from 1.
    fn partial_u(&self, i: usize) -> Self;
    /// Bitmask of base coordinates the value depends on (bit `i-1` for `u^i`).
    fn u_mask(&self) -> u32;
    fn eval(&self, at: &EvalPoint) -> Result<Rational>;
    /// Constant rational value, if the element is one.
    fn as_rational(&self) -> Option<Rational>;
}

impl Scalar for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn from_base(b: RatFunc) -> Self {
        b
    }
    fn add(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFunc::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn scale(&self, c: &Rational) -> Self {
        RatFunc::scale(self, c)
    }
    fn partial_u(&self, i: usize) -> Self {
        RatFunc::partial_u(self, i)
    }
    fn u_mask(&self) -> u32 {
        RatFunc::u_mask(self)
    }
    fn eval(&self, at: &EvalPoint) -> Result<Rational> {
        self.eval_with(&at.u, &at.params)
    }
    fn as_rational(&self) -> Option<Rational> {
        self.constant_value()
    }
}

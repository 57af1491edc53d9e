use std::collections::BTreeMap;
use std::fmt;

use super::mono::{Jet, Mono, OddPart};
use super::poly::{DiffPoly, JetPoly};
use crate::coeffs::{EvalPoint, RatFunc, Rational, Scalar};
use crate::error::{Error, Result};

/// Jet polynomial extended by `log u^{i,1}` and negative powers of `u^{i,1}`.
///
/// Intermediate values of constructions that only produce ordinary
/// polynomials after cancellation; [`ExtDiffPoly::assert_polynomial`] is the
/// way back.
#[derive(Clone, PartialEq, Default)]
pub struct ExtDiffPoly(pub(crate) DiffPoly);

impl ExtDiffPoly {
    pub fn from_poly(p: DiffPoly) -> Self {
        ExtDiffPoly(p)
    }

    /// `log u^{i,1}`.
    pub fn log(i: usize) -> Self {
        ExtDiffPoly(JetPoly::term(Mono::log(i as u8), RatFunc::one()))
    }

    /// `(u^{i,1})^k` for any integer `k`.
    pub fn u1_pow(i: usize, k: i32) -> Self {
        let mut m = Mono::one();
        m.adjust_even(Jet::new(i, 1), k);
        ExtDiffPoly(JetPoly::term(m, RatFunc::one()))
    }

    pub fn inner(&self) -> &DiffPoly {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        ExtDiffPoly(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Self) -> Self {
        ExtDiffPoly(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        ExtDiffPoly(&self.0 * &o.0)
    }

    pub fn dx(&self) -> Self {
        ExtDiffPoly(self.0.dx())
    }

    /// The ordinary polynomial, or `NotPolynomial` if a log or a negative
    /// power survives.
    pub fn assert_polynomial(&self) -> Result<DiffPoly> {
        for (m, _) in self.0.terms() {
            if !m.is_polynomial() {
                return Err(Error::NotPolynomial(format!("surviving term {m}")));
            }
        }
        Ok(self.0.clone())
    }
}

impl fmt::Display for ExtDiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for ExtDiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Values of the positive-order coordinates `u^{i,s}`, `s >= 1`.
pub type JetValues = BTreeMap<Jet, Rational>;

/// Evaluates every even coordinate; the result is indexed by odd monomials.
///
/// Two elements agree as functions on the jet space exactly when their
/// evaluations agree at every point, which makes this a cross-check for
/// symbolic identities.
pub fn eval_oracle<C: Scalar>(
    a: &JetPoly<C>,
    base: &EvalPoint,
    jets: &JetValues,
) -> Result<BTreeMap<OddPart, Rational>> {
    let mut out: BTreeMap<OddPart, Rational> = BTreeMap::new();
    for (m, c) in a.terms() {
        if !m.logs().is_empty() {
            return Err(Error::NotPolynomial("logarithm in evaluation".into()));
        }
        let mut v = c.eval(base)?;
        for (j, k) in m.even() {
            let x = jets.get(j).cloned().unwrap_or_else(Rational::zero);
            if *k < 0 && x.is_zero() {
                return Err(Error::PoleAtPoint);
            }
            v = &v * &x.pow(*k);
        }
        let e = out
            .entry(m.odd().iter().copied().collect())
            .or_insert_with(Rational::zero);
        *e = &*e + &v;
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_derivative() {
        let l = ExtDiffPoly::log(1);
        let want = ExtDiffPoly::from_poly(DiffPoly::u(1, 2)).mul(&ExtDiffPoly::u1_pow(1, -1));
        assert_eq!(l.dx(), want);
    }

    #[test]
    fn logs_cancel_to_polynomial() {
        // d/dx (u' log u') - u'' log u' = u''
        let u1 = ExtDiffPoly::from_poly(DiffPoly::u(1, 1));
        let u2 = ExtDiffPoly::from_poly(DiffPoly::u(1, 2));
        let l = ExtDiffPoly::log(1);
        let e = u1.mul(&l).dx().sub(&u2.mul(&l));
        assert_eq!(e.assert_polynomial().unwrap(), DiffPoly::u(1, 2));
        assert!(l.assert_polynomial().is_err());
    }

    #[test]
    fn oracle_groups_by_odd_part() {
        let p = DiffPoly::u(1, 0) * DiffPoly::u(1, 1) * DiffPoly::th(1, 0)
            + DiffPoly::u(1, 2) * DiffPoly::th(1, 0);
        let base = EvalPoint::new(vec![Rational::from_int(2)]);
        let mut jets = JetValues::new();
        jets.insert(Jet::new(1, 1), Rational::from_int(3));
        jets.insert(Jet::new(1, 2), Rational::from_int(5));
        let v = eval_oracle(&p, &base, &jets).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v.values().next().unwrap(), &Rational::from_int(11));
    }
}

use super::cocycle::IndexVector;
use super::pair::SemisimpleHydroPair;
use crate::coeffs::{RatFunc, Rational};
use crate::error::{Error, Result};
use crate::functionals::{apply, commutator_apply, Derivation, Dx};
use crate::jetring::{DiffPoly, Gen, JetPoly};

/// Scaling exponents `d^i` and the constants `λ_0, λ_1, μ`.
#[derive(Clone, PartialEq, Debug)]
pub struct ConformalData {
    pub d: Vec<Rational>,
    pub lambda0: Rational,
    pub lambda1: Rational,
    pub mu: Rational,
}

impl ConformalData {
    pub fn new(
        d: Vec<Rational>,
        lambda0: Rational,
        lambda1: Rational,
        mu: Rational,
    ) -> Result<Self> {
        if lambda0 == lambda1 {
            return Err(Error::DegenerateScaling);
        }
        Ok(ConformalData {
            d,
            lambda0,
            lambda1,
            mu,
        })
    }

    fn spread(&self) -> Rational {
        &self.lambda1 - &self.lambda0
    }
}

/// Solves `Σ_j u^j ∂_j f^i = d^i f^i` and checks `(d^i - d^j) ∂_i f^j = 0`.
pub fn conformal_check(f: &[RatFunc]) -> Result<Vec<Rational>> {
    let n = f.len();
    let mut d = Vec::with_capacity(n);
    for (k, fi) in f.iter().enumerate() {
        if fi.is_zero() {
            return Err(Error::ZeroMetricEntry(k + 1));
        }
        let mut e = RatFunc::zero();
        for j in 1..=n {
            e = e.add(&RatFunc::u(j).mul(&fi.partial_u(j)));
        }
        let ratio = e.div(fi)?;
        d.push(ratio.constant_value().ok_or(Error::NotHomogeneous(k + 1))?);
    }
    for i in 1..=n {
        for j in 1..=n {
            let c = &d[i - 1] - &d[j - 1];
            if !c.is_zero() && !f[j - 1].partial_u(i).is_zero() {
                return Err(Error::IrreducibilityViolated(i, j));
            }
        }
    }
    Ok(d)
}

/// `E = Σ (λ1-λ0+sμ) u^{i,s} ∂/∂u^{i,s} + (λ1-(λ1-λ0)d^i+(s-1)μ) θ_i^s ∂/∂θ_i^s`.
///
/// Not evolutionary unless `μ = 0`; it acts through per-generator weights.
#[derive(Clone, PartialEq, Debug)]
pub struct EulerField {
    data: ConformalData,
}

impl EulerField {
    pub fn data(&self) -> &ConformalData {
        &self.data
    }

    pub fn u_weight(&self, s: usize) -> Rational {
        let d = &self.data;
        &d.spread() + &(&d.mu * &Rational::from_int(s as i64))
    }

    pub fn th_weight(&self, i: usize, s: usize) -> Rational {
        let d = &self.data;
        let base = &d.lambda1 - &(&d.spread() * &d.d[i - 1]);
        &base + &(&d.mu * &Rational::from_int(s as i64 - 1))
    }
}

impl Derivation<RatFunc> for EulerField {
    fn degree(&self) -> i32 {
        0
    }

    fn images(&self, family: Gen, smax: usize) -> Vec<DiffPoly> {
        let i = family.jet().idx();
        if i > self.data.d.len() {
            return vec![JetPoly::zero(); smax + 1];
        }
        (0..=smax)
            .map(|s| {
                let g = family.with_order(s);
                let w = if g.is_odd() {
                    self.th_weight(i, s)
                } else {
                    self.u_weight(s)
                };
                JetPoly::gen(g).scale(&w)
            })
            .collect()
    }
}

const CHECK_ORDER: usize = 2;

/// Builds `E` and verifies `[E, ∂_x] = μ ∂_x` and `[E, D_{P_a}] = λ_a D_{P_a}`
/// on the generators up to order two.
pub fn euler_field(s: &SemisimpleHydroPair, cd: &ConformalData) -> Result<EulerField> {
    if cd.lambda0 == cd.lambda1 {
        return Err(Error::DegenerateScaling);
    }
    let n = s.n();
    if cd.d.len() != n {
        return Err(Error::WrongShape(format!("expected {n} exponents d^i")));
    }
    let d = conformal_check(s.f())?;
    if d != cd.d {
        return Err(Error::ConformalityFailed(format!(
            "exponents {:?} differ from {:?}",
            cd.d, d
        )));
    }
    let e = EulerField { data: cd.clone() };
    for i in 1..=n {
        for k in 0..=CHECK_ORDER {
            for g in [Gen::u(i, k), Gen::th(i, k)] {
                let v = JetPoly::gen(g);
                let lhs = commutator_apply(&e, &Dx, &v);
                if lhs != v.dx().scale(&cd.mu) {
                    return Err(Error::ConformalityFailed(format!("[E, d/dx] on {v}")));
                }
                for (a, la) in [(0, &cd.lambda0), (1, &cd.lambda1)] {
                    let da = s.d(a);
                    let lhs = commutator_apply(&e, da, &v);
                    if lhs != apply(da, &v).scale(la) {
                        return Err(Error::ConformalityFailed(format!("[E, D_{a}] on {v}")));
                    }
                }
            }
        }
    }
    Ok(e)
}

/// Exponents of the central invariants `c_i = C_i (u^i)^{m_i}`.
#[derive(Clone, PartialEq, Debug)]
pub struct CentralInvariantLaw {
    pub m: Vec<Rational>,
}

impl CentralInvariantLaw {
    /// `C (u^i)^{m_i}` when `m_i` is an integer.
    pub fn instance(&self, i: usize, c: &RatFunc) -> Result<RatFunc> {
        let m = &self.m[i - 1];
        let k = m
            .to_i64()
            .ok_or_else(|| Error::Invalid(format!("exponent {m} is not an integer")))?;
        Ok(c.mul(&RatFunc::u(i).pow(k as i32)?))
    }
}

/// `m_i = (λ1-λ0-2μ-(λ1-λ0)d^i)/(λ1-λ0)`.
pub fn conformal_central_invariants(cd: &ConformalData) -> Result<CentralInvariantLaw> {
    let w = cd.spread();
    let winv = w.inv().ok_or(Error::DegenerateScaling)?;
    let two_mu = &cd.mu * &Rational::from_int(2);
    let m =
        cd.d.iter()
            .map(|di| &(&(&w - &two_mu) - &(&w * di)) * &winv)
            .collect();
    Ok(CentralInvariantLaw { m })
}

/// `3(λ1-λ0-2μ-(λ1-λ0)d^i) c_i - 3 E^[0](c_i)`, `E^[0] = (λ1-λ0) Σ u^j ∂_j`.
pub fn index_ode_check(
    s: &SemisimpleHydroPair,
    cd: &ConformalData,
    c: &[RatFunc],
) -> Result<IndexVector> {
    let n = s.n();
    if c.len() != n || cd.d.len() != n {
        return Err(Error::WrongShape(format!("expected {n} functions c_i")));
    }
    let w = cd.spread();
    let three = Rational::from_int(3);
    let two_mu = &cd.mu * &Rational::from_int(2);
    let mut ind = Vec::with_capacity(n);
    for i in 1..=n {
        let ci = &c[i - 1];
        let k = &(&w - &two_mu) - &(&w * &cd.d[i - 1]);
        let mut e0 = RatFunc::zero();
        for j in 1..=n {
            e0 = e0.add(&RatFunc::u(j).mul(&ci.partial_u(j)));
        }
        ind.push(ci.scale(&(&k * &three)).sub(&e0.scale(&(&w * &three))));
    }
    Ok(IndexVector { ind })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn exponents() {
        assert_eq!(conformal_check(&[RatFunc::one()]).unwrap(), vec![q(0)]);
        assert_eq!(
            conformal_check(&[RatFunc::u(1), RatFunc::one()]).unwrap(),
            vec![q(1), q(0)]
        );
        assert_eq!(
            conformal_check(&[RatFunc::u(2), RatFunc::one()]).unwrap_err(),
            Error::IrreducibilityViolated(2, 1)
        );
        let f = RatFunc::u(1).add(&RatFunc::one());
        assert_eq!(conformal_check(&[f]).unwrap_err(), Error::NotHomogeneous(1));
    }

    #[test]
    fn kdv_euler_weights() {
        let s = SemisimpleHydroPair::new(vec![RatFunc::one()]).unwrap();
        let cd = ConformalData::new(vec![q(0)], q(0), q(2), q(1)).unwrap();
        let e = euler_field(&s, &cd).unwrap();
        for k in 0..4 {
            assert_eq!(e.u_weight(k), q(2 + k as i64));
            assert_eq!(e.th_weight(1, k), q(1 + k as i64));
        }
    }

    #[test]
    fn central_exponents() {
        let m = |l1: i64| {
            conformal_central_invariants(
                &ConformalData::new(vec![q(0)], q(0), q(l1), q(1)).unwrap(),
            )
            .unwrap()
            .m
        };
        assert_eq!(m(2), vec![q(0)]);
        assert_eq!(m(3), vec![Rational::new(1, 3)]);
        assert_eq!(
            ConformalData::new(vec![q(0)], q(1), q(1), q(0)).unwrap_err(),
            Error::DegenerateScaling
        );
    }
}

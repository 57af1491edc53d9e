use std::sync::Arc;

use crate::coeffs::{RatFunc, Rational, RootTower};
use crate::error::{Error, Result};
use crate::functionals::{derivation_of_any, schouten, th_th, EvDerivation, LocalFunctional};
use crate::jetring::DiffPoly;

/// Semisimple bihamiltonian structure of hydrodynamic type in canonical
/// coordinates, fixed by the diagonal entries `f^i` of the first metric.
#[derive(Clone, Debug)]
pub struct SemisimpleHydroPair {
    f: Vec<RatFunc>,
    p0: LocalFunctional,
    p1: LocalFunctional,
    d0: EvDerivation,
    d1: EvDerivation,
    a: Vec<Vec<RatFunc>>,
    b: Vec<Vec<RatFunc>>,
    tower: Arc<RootTower>,
}

/// `[P0, P0] = [P0, P1] = [P1, P1] = 0`.
pub fn is_bihamiltonian(p0: &LocalFunctional, p1: &LocalFunctional) -> Result<bool> {
    for (x, y) in [(p0, p0), (p0, p1), (p1, p1)] {
        if !schouten(x, y)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The connection coefficient of `θ_i θ_j` in the bivector with metric
/// `g^k = w^k f^k`: `½(g^i/f^j ∂_i f^j u^{j,1} - g^j/f^i ∂_j f^i u^{i,1})`.
fn connection(f: &[RatFunc], w: &dyn Fn(usize) -> RatFunc, i: usize, j: usize) -> Result<DiffPoly> {
    let (fi, fj) = (&f[i - 1], &f[j - 1]);
    let gi = w(i).mul(fi);
    let gj = w(j).mul(fj);
    let c1 = gi.div(fj)?.mul(&fj.partial_u(i));
    let c2 = gj.div(fi)?.mul(&fi.partial_u(j));
    let t = DiffPoly::u(j, 1).mul_scalar(&c1) - DiffPoly::u(i, 1).mul_scalar(&c2);
    Ok(t.scale(&Rational::new(1, 2)))
}

fn bivector(f: &[RatFunc], w: &dyn Fn(usize) -> RatFunc) -> Result<LocalFunctional> {
    let n = f.len();
    let mut acc = DiffPoly::zero();
    for i in 1..=n {
        acc = acc + th_th(i, i, 1).mul_scalar(&w(i).mul(&f[i - 1]));
        for j in 1..=n {
            // diagonal terms would multiply θ_i θ_i = 0
            if i != j {
                acc = acc + connection(f, w, i, j)? * th_th(i, j, 0);
            }
        }
    }
    Ok(LocalFunctional::new(acc.scale(&Rational::new(1, 2))))
}

impl SemisimpleHydroPair {
    /// Assembles `P_0`, `P_1` from `f` and verifies that they form a
    /// bihamiltonian pair.
    pub fn new(f: Vec<RatFunc>) -> Result<Self> {
        let p = Self::assemble(f)?;
        if !is_bihamiltonian(&p.p0, &p.p1)? {
            return Err(Error::NotBihamiltonian(format!("f = {:?}", p.f)));
        }
        Ok(p)
    }

    /// As [`SemisimpleHydroPair::new`] without the bracket verification.
    pub fn assemble(f: Vec<RatFunc>) -> Result<Self> {
        let n = f.len();
        if n > crate::coeffs::MAX_U {
            return Err(Error::TooManyCoordinates(n, crate::coeffs::MAX_U));
        }
        for (k, fi) in f.iter().enumerate() {
            if fi.is_zero() {
                return Err(Error::ZeroMetricEntry(k + 1));
            }
        }
        let tower = RootTower::new(f.clone())?;
        let p0 = bivector(&f, &|_| RatFunc::one())?;
        let p1 = bivector(&f, &RatFunc::u)?;
        let d0 = derivation_of_any(&p0, n)?;
        let d1 = derivation_of_any(&p1, n)?;
        let half = Rational::new(1, 2);
        let mut a = vec![vec![RatFunc::zero(); n]; n];
        let mut b = vec![vec![RatFunc::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let dfj = f[j].partial_u(i + 1);
                a[i][j] = dfj.scale(&half);
                b[i][j] = f[i].mul(&dfj).div(&f[j])?.scale(&half);
            }
        }
        Ok(SemisimpleHydroPair {
            f,
            p0,
            p1,
            d0,
            d1,
            a,
            b,
            tower,
        })
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    pub fn f(&self) -> &[RatFunc] {
        &self.f
    }

    /// `f^i`, counted from 1.
    pub fn fi(&self, i: usize) -> &RatFunc {
        &self.f[i - 1]
    }

    pub fn p0(&self) -> &LocalFunctional {
        &self.p0
    }

    pub fn p1(&self) -> &LocalFunctional {
        &self.p1
    }

    pub fn d0(&self) -> &EvDerivation {
        &self.d0
    }

    pub fn d1(&self) -> &EvDerivation {
        &self.d1
    }

    /// `D_{P_a}` for `a = 0, 1`.
    pub fn d(&self, a: usize) -> &EvDerivation {
        if a == 0 {
            &self.d0
        } else {
            &self.d1
        }
    }

    /// `a_ij = ½ ∂_i f^j`.
    pub fn a(&self, i: usize, j: usize) -> &RatFunc {
        &self.a[i - 1][j - 1]
    }

    /// `b_ij = ½ f^i ∂_i f^j / f^j`.
    pub fn b(&self, i: usize, j: usize) -> &RatFunc {
        &self.b[i - 1][j - 1]
    }

    /// Square roots `s_i` with `s_i^2 = f^i`.
    pub fn tower(&self) -> &Arc<RootTower> {
        &self.tower
    }
}

//! Leading pieces of the `λ`-complex: `d̂_i`, its de Rham version,
//! `Δ_{-1}`, the rescaling `Ψ` and the rotation coefficients.

use super::pair::SemisimpleHydroPair;
use crate::coeffs::{LamPoly, RatFunc, Rational, RootExt, Scalar};
use crate::error::{Error, Result};
use crate::forms::OneForm;
use crate::functionals::{apply, Derivation};
use crate::jetring::{Gen, JetPoly, LamDiffPoly, Mono, RootDiffPoly};

/// `d̂_i = Σ_{s≥1} θ_i^{s+1} ∂/∂u^{i,s}`, an odd derivation.
#[derive(Clone, Copy, Debug)]
pub struct DHat(pub usize);

impl<C: Scalar> Derivation<C> for DHat {
    fn degree(&self) -> i32 {
        1
    }

    fn images(&self, family: Gen, smax: usize) -> Vec<JetPoly<C>> {
        (0..=smax)
            .map(|s| match family {
                Gen::U(j) if j.idx() == self.0 && s >= 1 => JetPoly::th(self.0, s + 1),
                _ => JetPoly::zero(),
            })
            .collect()
    }
}

pub fn dhat<C: Scalar>(i: usize, p: &JetPoly<C>) -> JetPoly<C> {
    apply(&DHat(i), p)
}

/// `δd̂_i = d̂_i + Σ_{s≥0} δθ_i^{s+1} ∂/∂δu^{i,s}`.
pub fn delta_dhat<C: Scalar>(i: usize, w: &OneForm<C>) -> OneForm<C> {
    let mut out = OneForm::zero();
    for (g, a) in w.parts() {
        out.add_part(*g, &dhat(i, a));
        if let Gen::U(j) = g {
            if j.idx() == i {
                // the odd operator passes the coefficient first
                out.add_part(Gen::th(i, j.s as usize + 1), &a.parity_twist());
            }
        }
    }
    out
}

/// `(-λ + u^i) f^i`.
fn weight(s: &SemisimpleHydroPair, i: usize) -> LamPoly {
    let u = RatFunc::u(i);
    LamPoly::from_coeffs(vec![u.mul(s.fi(i)), s.fi(i).neg()])
}

/// `Δ_{-1} = Σ_i (-λ + u^i) f^i δd̂_i` on forms.
pub fn delta_minus_one(s: &SemisimpleHydroPair, w: &OneForm<LamPoly>) -> OneForm<LamPoly> {
    let mut out = OneForm::zero();
    for i in 1..=s.n() {
        let c = JetPoly::scalar(weight(s, i));
        out = out.add(&delta_dhat(i, w).mul_left(&c));
    }
    out
}

/// `Δ_{-1}` on functions, `Σ_i (-λ + u^i) f^i d̂_i`.
pub fn delta_minus_one_poly(s: &SemisimpleHydroPair, p: &LamDiffPoly) -> LamDiffPoly {
    let mut out = JetPoly::zero();
    for i in 1..=s.n() {
        out = out + dhat(i, p).mul_scalar(&weight(s, i));
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Exponent `k` of `(f^i)^{k/2}` attached to a generator by `Ψ`.
fn half_exponent(g: Gen) -> i32 {
    match g {
        Gen::U(j) => j.s as i32,
        Gen::Th(j) => j.s as i32 + 1,
    }
}

fn mono_factor(s: &SemisimpleHydroPair, m: &Mono, sign: i32) -> Result<RootExt> {
    if !m.logs().is_empty() {
        return Err(Error::NotPolynomial(format!("cannot rescale {m}")));
    }
    let n = s.n();
    let mut k = vec![0i32; n + 1];
    let mut bump = |g: Gen, times: i32| -> Result<()> {
        let i = g.jet().idx();
        if i > n {
            return Err(Error::RootNotRegistered(i));
        }
        k[i] += sign * times * half_exponent(g);
        Ok(())
    };
    for (j, e) in m.even() {
        bump(Gen::U(*j), *e)?;
    }
    for j in m.odd() {
        bump(Gen::Th(*j), 1)?;
    }
    let mut acc = RootExt::one();
    for (i, &ki) in k.iter().enumerate().skip(1) {
        if ki != 0 {
            acc = acc.try_mul(&s.tower().half_power(i, ki)?)?;
        }
    }
    Ok(acc)
}

fn check_tower(s: &SemisimpleHydroPair, c: &RootExt) -> Result<()> {
    match c.tower() {
        Some(t) if **t != **s.tower() => Err(Error::MixedExtension),
        _ => Ok(()),
    }
}

fn rescale_poly(s: &SemisimpleHydroPair, p: &RootDiffPoly, sign: i32) -> Result<RootDiffPoly> {
    let mut out = JetPoly::zero();
    for (m, c) in p.terms() {
        check_tower(s, c)?;
        let f = mono_factor(s, m, sign)?;
        out = out + JetPoly::term(m.clone(), c.try_mul(&f)?);
    }
    Ok(out)
}

fn sign_of(dir: Direction) -> i32 {
    match dir {
        Direction::Forward => 1,
        Direction::Inverse => -1,
    }
}

/// `Ψ: u^{i,s} ↦ (f^i)^{s/2} u^{i,s}`, `θ_i^s ↦ (f^i)^{(s+1)/2} θ_i^s`.
pub fn psi(s: &SemisimpleHydroPair, p: &RootDiffPoly, dir: Direction) -> Result<RootDiffPoly> {
    rescale_poly(s, p, sign_of(dir))
}

/// `Ψ` on forms, rescaling `δu^{i,s}` and `δθ_i^s` like their generators.
pub fn psi_form(
    s: &SemisimpleHydroPair,
    w: &OneForm<RootExt>,
    dir: Direction,
) -> Result<OneForm<RootExt>> {
    let sign = sign_of(dir);
    let mut out = OneForm::zero();
    for (g, a) in w.parts() {
        let i = g.jet().idx();
        if i > s.n() {
            return Err(Error::RootNotRegistered(i));
        }
        let slot = s.tower().half_power(i, sign * half_exponent(*g))?;
        let a = rescale_poly(s, a, sign)?.mul_scalar(&slot);
        out.add_part(*g, &a);
    }
    Ok(out)
}

/// `γ_ij = -½ (f^i/f^j)^{1/2} ∂_i f^j / f^j` for `i ≠ j`; zero on the diagonal.
pub fn rotation_coeffs(s: &SemisimpleHydroPair) -> Result<Vec<Vec<RootExt>>> {
    let n = s.n();
    let tw = s.tower();
    let mut out = vec![vec![RootExt::zero(); n]; n];
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            let fj = s.fi(j);
            // (f^i/f^j)^{1/2} = s_i s_j / f^j
            let base = fj
                .partial_u(i)
                .div(&fj.mul(fj))?
                .scale(&Rational::new(-1, 2));
            let roots = tw.s(i)?.try_mul(&tw.s(j)?)?;
            out[i - 1][j - 1] = roots.try_mul(&RootExt::from_base(base))?;
        }
    }
    Ok(out)
}

//! Local functionals, the Schouten bracket and evolutionary derivations.
//!
//! A derivation `X` acts by `X(f) = Σ X(v) · ∂f/∂v` over the generators `v`
//! of the jet ring, with the image on the left of the left partial
//! derivative. Evolutionary derivations commute with `∂_x`, so they are
//! fixed by the images of `u^i` and `θ_i`.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeffs::{RatFunc, Rational, Scalar};
use crate::error::{Error, Result};
use crate::jetring::{DiffPoly, Gen, JetPoly};

/// `∫ density`, modulo total x-derivatives.
#[derive(Clone)]
pub struct LocalFunctional<C = RatFunc> {
    density: JetPoly<C>,
}

impl<C: Scalar> LocalFunctional<C> {
    pub fn new(density: JetPoly<C>) -> Self {
        LocalFunctional { density }
    }

    pub fn zero() -> Self {
        Self::new(JetPoly::zero())
    }

    pub fn density(&self) -> &JetPoly<C> {
        &self.density
    }

    /// Super degree `p`, if homogeneous (`None` for the zero density).
    pub fn theta_degree(&self) -> Result<Option<i32>> {
        self.density.theta_degree()
    }

    pub fn n_hint(&self) -> usize {
        self.density.max_index()
    }

    /// `(δ/δu^i, δ/δθ_i)` for `i = 1..n`.
    pub fn var_ders(&self, n: usize) -> (Vec<JetPoly<C>>, Vec<JetPoly<C>>) {
        let u = (1..=n).map(|i| self.density.var_der(false, i)).collect();
        let t = (1..=n).map(|i| self.density.var_der(true, i)).collect();
        (u, t)
    }

    /// Vanishes in the space of local functionals.
    pub fn is_zero(&self) -> bool {
        let n = self.n_hint();
        let (u, t) = self.var_ders(n);
        if u.iter().chain(t.iter()).any(|p| !p.is_zero()) {
            return false;
        }
        // all variational derivatives vanish: what is left of degree (0,0) is a constant
        self.density.filter(|m| m.is_one()).is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.density + &o.density)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.density - &o.density)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(self.density.scale(r))
    }
}

impl<C: Scalar> PartialEq for LocalFunctional<C> {
    fn eq(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}

impl<C: Scalar> fmt::Display for LocalFunctional<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "int({})", self.density)
    }
}

impl<C: Scalar> fmt::Debug for LocalFunctional<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn homogeneous_degree<C: Scalar>(p: &LocalFunctional<C>) -> Result<i32> {
    Ok(p.theta_degree()?.unwrap_or(0))
}

/// `[P, Q] = ∫ Σ δP/δθ_i δQ/δu^i + (-1)^p δP/δu^i δQ/δθ_i`.
pub fn schouten<C: Scalar>(
    p: &LocalFunctional<C>,
    q: &LocalFunctional<C>,
) -> Result<LocalFunctional<C>> {
    let pd = homogeneous_degree(p)?;
    homogeneous_degree(q)?;
    let n = p.n_hint().max(q.n_hint());
    let (pu, pt) = p.var_ders(n);
    let (qu, qt) = q.var_ders(n);
    let mut acc = JetPoly::zero();
    for i in 0..n {
        acc.add_assign_ref(&(&pt[i] * &qu[i]));
        let t = &pu[i] * &qt[i];
        if pd % 2 == 0 {
            acc.add_assign_ref(&t);
        } else {
            acc.sub_assign_ref(&t);
        }
    }
    Ok(LocalFunctional::new(acc))
}

/// Anything that acts on the jet ring as a graded derivation.
pub trait Derivation<C: Scalar> {
    /// Shift of `deg_θ`; the parity of the derivation is its residue mod 2.
    fn degree(&self) -> i32;

    /// Images of `v^{(0)}, ..., v^{(smax)}` for the family of `family`.
    fn images(&self, family: Gen, smax: usize) -> Vec<JetPoly<C>>;
}

/// `X(f) = Σ_v X(v) · ∂f/∂v`.
pub fn apply<C: Scalar, X: Derivation<C> + ?Sized>(x: &X, f: &JetPoly<C>) -> JetPoly<C> {
    let mut by_family: BTreeMap<Gen, usize> = BTreeMap::new();
    for g in f.generators() {
        let fam = g.with_order(0);
        let s = g.jet().s as usize;
        let e = by_family.entry(fam).or_insert(0);
        *e = (*e).max(s);
    }
    let mut acc = JetPoly::zero();
    for (fam, smax) in by_family {
        let imgs = x.images(fam, smax);
        for (s, img) in imgs.iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            let d = f.partial(fam.with_order(s));
            if !d.is_zero() {
                acc.add_assign_ref(&(img * &d));
            }
        }
    }
    acc
}

/// `[X, Y](f) = X(Y f) - (-1)^{|X||Y|} Y(X f)`.
pub fn commutator_apply<C: Scalar, X: Derivation<C> + ?Sized, Y: Derivation<C> + ?Sized>(
    x: &X,
    y: &Y,
    f: &JetPoly<C>,
) -> JetPoly<C> {
    let a = apply(x, &apply(y, f));
    let b = apply(y, &apply(x, f));
    if (x.degree() * y.degree()) % 2 == 0 {
        a - b
    } else {
        a + b
    }
}

/// Derivation commuting with `∂_x`, given by the images of `u^i` and `θ_i`.
#[derive(Clone, PartialEq)]
pub struct EvDerivation<C = RatFunc> {
    u: Vec<JetPoly<C>>,
    th: Vec<JetPoly<C>>,
    degree: i32,
}

impl<C: Scalar> EvDerivation<C> {
    /// Images must satisfy `deg_θ X(u^i) = q`, `deg_θ X(θ_i) = q + 1`.
    pub fn new(u: Vec<JetPoly<C>>, th: Vec<JetPoly<C>>, degree: i32) -> Result<Self> {
        if u.len() != th.len() {
            return Err(Error::Invalid("image lists differ in length".into()));
        }
        for p in &u {
            if let Some(d) = p.theta_degree()? {
                if d != degree {
                    return Err(Error::NonHomogeneous);
                }
            }
        }
        for p in &th {
            if let Some(d) = p.theta_degree()? {
                if d != degree + 1 {
                    return Err(Error::NonHomogeneous);
                }
            }
        }
        Ok(EvDerivation { u, th, degree })
    }

    /// Infers the degree from the images.
    pub fn from_images(u: Vec<JetPoly<C>>, th: Vec<JetPoly<C>>) -> Result<Self> {
        let mut q = None;
        for p in &u {
            if let Some(d) = p.theta_degree()? {
                q = Some(d);
            }
        }
        for p in &th {
            if let Some(d) = p.theta_degree()? {
                q = Some(d - 1);
            }
        }
        Self::new(u, th, q.unwrap_or(0))
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn u_image(&self, i: usize) -> &JetPoly<C> {
        &self.u[i - 1]
    }

    pub fn th_image(&self, i: usize) -> &JetPoly<C> {
        &self.th[i - 1]
    }

    pub fn u_images(&self) -> &[JetPoly<C>] {
        &self.u
    }

    pub fn th_images(&self) -> &[JetPoly<C>] {
        &self.th
    }

    pub fn is_zero(&self) -> bool {
        self.u.iter().chain(self.th.iter()).all(|p| p.is_zero())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        EvDerivation {
            u: self.u.iter().map(|p| p.scale(r)).collect(),
            th: self.th.iter().map(|p| p.scale(r)).collect(),
            degree: self.degree,
        }
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D + Copy) -> EvDerivation<D> {
        EvDerivation {
            u: self.u.iter().map(|p| p.map_coeffs(f)).collect(),
            th: self.th.iter().map(|p| p.map_coeffs(f)).collect(),
            degree: self.degree,
        }
    }

    /// `[X, Y] = X∘Y - (-1)^{|X||Y|} Y∘X`, again evolutionary.
    pub fn commutator(&self, o: &Self) -> Self {
        let n = self.n().max(o.n());
        let u = (1..=n)
            .map(|i| commutator_apply(self, o, &JetPoly::u(i, 0)))
            .collect();
        let th = (1..=n)
            .map(|i| commutator_apply(self, o, &JetPoly::th(i, 0)))
            .collect();
        EvDerivation {
            u,
            th,
            degree: self.degree + o.degree,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.n().max(o.n());
        let z = JetPoly::zero();
        let get = |v: &Vec<JetPoly<C>>, i: usize| v.get(i).cloned().unwrap_or_else(|| z.clone());
        EvDerivation {
            u: (0..n).map(|i| get(&self.u, i) - get(&o.u, i)).collect(),
            th: (0..n).map(|i| get(&self.th, i) - get(&o.th, i)).collect(),
            degree: self.degree,
        }
    }
}

impl EvDerivation<RatFunc> {
    pub fn lift<D: Scalar>(&self) -> EvDerivation<D> {
        self.map_coeffs(|c| D::from_base(c.clone()))
    }
}

impl<C: Scalar> Derivation<C> for EvDerivation<C> {
    fn degree(&self) -> i32 {
        self.degree
    }

    fn images(&self, family: Gen, smax: usize) -> Vec<JetPoly<C>> {
        let i = family.jet().idx();
        let base = match family {
            Gen::U(_) => self.u.get(i - 1),
            Gen::Th(_) => self.th.get(i - 1),
        };
        let Some(base) = base else {
            return vec![JetPoly::zero(); smax + 1];
        };
        let mut out = Vec::with_capacity(smax + 1);
        out.push(base.clone());
        for s in 1..=smax {
            let next = out[s - 1].dx();
            out.push(next);
        }
        out
    }
}

impl<C: Scalar> fmt::Display for EvDerivation<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.u.iter().enumerate() {
            writeln!(f, "u[{}] -> {}", k + 1, p)?;
        }
        for (k, p) in self.th.iter().enumerate() {
            writeln!(f, "th[{}] -> {}", k + 1, p)?;
        }
        Ok(())
    }
}

impl<C: Scalar> fmt::Debug for EvDerivation<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The total derivative as a derivation of degree zero.
pub struct Dx;

impl<C: Scalar> Derivation<C> for Dx {
    fn degree(&self) -> i32 {
        0
    }

    fn images(&self, family: Gen, smax: usize) -> Vec<JetPoly<C>> {
        (0..=smax)
            .map(|s| JetPoly::gen(family.with_order(s + 1)))
            .collect()
    }
}

/// `D_P`: `u^i ↦ δP/δθ_i`, `θ_i ↦ (-1)^p δP/δu^i`, for any homogeneous `P`.
pub fn derivation_of_any<C: Scalar>(p: &LocalFunctional<C>, n: usize) -> Result<EvDerivation<C>> {
    let pd = homogeneous_degree(p)?;
    let (du, dt) = p.var_ders(n.max(p.n_hint()));
    let th = if pd % 2 == 0 {
        du
    } else {
        du.into_iter().map(|x| -x).collect()
    };
    EvDerivation::new(dt, th, pd - 1)
}

/// `D_P` for a Hamiltonian `P`, refusing when `[P, P] ≠ 0`.
pub fn derivation_of<C: Scalar>(p: &LocalFunctional<C>, n: usize) -> Result<EvDerivation<C>> {
    if !schouten(p, p)?.is_zero() {
        return Err(Error::UnverifiedStructure);
    }
    derivation_of_any(p, n)
}

/// A bivector with vanishing self-bracket, together with its derivation.
#[derive(Clone, Debug)]
pub struct HamiltonianStructure {
    pub p: LocalFunctional,
    pub d: EvDerivation,
}

impl HamiltonianStructure {
    pub fn new(p: LocalFunctional, n: usize) -> Result<Self> {
        let d = derivation_of(&p, n)?;
        Ok(HamiltonianStructure { p, d })
    }
}

/// `θ_i θ_j^s`.
pub fn th_th(i: usize, j: usize, s: usize) -> DiffPoly {
    DiffPoly::th(i, 0) * DiffPoly::th(j, s)
}

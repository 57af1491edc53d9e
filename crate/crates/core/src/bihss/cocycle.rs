use std::fmt;

use super::pair::SemisimpleHydroPair;
use crate::coeffs::{RatFunc, Rational};
use crate::error::{Error, Result};
use crate::forms::{de_rham, dtilde_reduced, ReducedOneForm};
use crate::functionals::apply;
use crate::jetring::{DiffPoly, ExtDiffPoly, Jet, Mono};
use crate::linalg;

fn check_12(w: &ReducedOneForm) -> Result<()> {
    match w.bidegree()? {
        None | Some((1, 2)) => Ok(()),
        Some((p, d)) => Err(Error::WrongBidegree {
            want_p: 1,
            want_d: 2,
            got_p: p,
            got_d: d,
        }),
    }
}

/// `ind_i` for `i = 1..n`.
#[derive(Clone, PartialEq, Debug)]
pub struct IndexVector {
    pub ind: Vec<RatFunc>,
}

impl IndexVector {
    /// First `(i, j)`, `j ≠ i`, with `∂_j ind_i ≠ 0`.
    pub fn single_variable_violation(&self) -> Option<(usize, usize)> {
        let n = self.ind.len();
        for i in 1..=n {
            for j in (1..=n).filter(|&j| j != i) {
                if !self.ind[i - 1].partial_u(j).is_zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn assert_single_variable(&self) -> Result<()> {
        match self.single_variable_violation() {
            Some((i, _)) => Err(Error::NotSingleVariable(i)),
            None => Ok(()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ind.iter().all(|x| x.is_zero())
    }
}

impl fmt::Display for IndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ind.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Coefficients of a reduced form of bidegree `(1, 2)` in the basis
///
/// `X^i = Σ X^(i)_j θ_j^2 + X^(i)_kj u^{j,1} θ_k^1 + Z^(i)_jk u^{k,2} θ_j + Z^(i)_{j;kl} u^{k,1} u^{l,1} θ_j`,
/// `Y^i = Σ Y^(i)_j u^{j,2} + Y^(i)_jk u^{j,1} u^{k,1}`,
///
/// with `Z^(i)_{j;kl}` and `Y^(i)_jk` symmetric in the last two indices.
/// All indices are stored from 0.
#[derive(Clone, PartialEq, Debug)]
pub struct NormalFormCocycle {
    pub n: usize,
    /// `x[i][j] = X^(i)_j`
    pub x: Vec<Vec<RatFunc>>,
    /// `xd[i][k][j] = X^(i)_kj`
    pub xd: Vec<Vec<Vec<RatFunc>>>,
    /// `z[i][j][k] = Z^(i)_jk`
    pub z: Vec<Vec<Vec<RatFunc>>>,
    /// `zz[i][j][k][l] = Z^(i)_{j;kl}`
    pub zz: Vec<Vec<Vec<Vec<RatFunc>>>>,
    /// `y[i][j] = Y^(i)_j`
    pub y: Vec<Vec<RatFunc>>,
    /// `yy[i][j][k] = Y^(i)_jk`
    pub yy: Vec<Vec<Vec<RatFunc>>>,
}

fn zeros2(n: usize) -> Vec<Vec<RatFunc>> {
    vec![vec![RatFunc::zero(); n]; n]
}

fn zeros3(n: usize) -> Vec<Vec<Vec<RatFunc>>> {
    vec![zeros2(n); n]
}

impl NormalFormCocycle {
    pub fn zero(n: usize) -> Self {
        NormalFormCocycle {
            n,
            x: zeros2(n),
            xd: zeros3(n),
            z: zeros3(n),
            zz: vec![zeros3(n); n],
            y: zeros2(n),
            yy: zeros3(n),
        }
    }

    /// Reads off the coefficients; fails on monomials outside the basis.
    pub fn from_form(n: usize, w: &ReducedOneForm) -> Result<Self> {
        check_12(w)?;
        if w.n() > n {
            return Err(Error::IndexOutOfRange {
                what: "component",
                value: w.n() as i64,
            });
        }
        let half = Rational::new(1, 2);
        let mut out = Self::zero(n);
        let bad = |m: &Mono| Error::WrongShape(format!("unexpected monomial {m}"));
        for i in 0..n {
            for (m, c) in w.g(i + 1).terms() {
                let [th] = m.odd() else { return Err(bad(m)) };
                let t = th.idx() - 1;
                match (th.s, m.even()) {
                    (2, []) => out.x[i][t] = c.clone(),
                    (1, [(j, 1)]) if j.s == 1 => out.xd[i][t][j.idx() - 1] = c.clone(),
                    (0, [(k, 1)]) if k.s == 2 => out.z[i][t][k.idx() - 1] = c.clone(),
                    (0, [(k, 2)]) if k.s == 1 => out.zz[i][t][k.idx() - 1][k.idx() - 1] = c.clone(),
                    (0, [(k, 1), (l, 1)]) if k.s == 1 && l.s == 1 => {
                        let v = c.scale(&half);
                        out.zz[i][t][k.idx() - 1][l.idx() - 1] = v.clone();
                        out.zz[i][t][l.idx() - 1][k.idx() - 1] = v;
                    }
                    _ => return Err(bad(m)),
                }
            }
            for (m, c) in w.h(i + 1).terms() {
                if !m.odd().is_empty() {
                    return Err(bad(m));
                }
                match m.even() {
                    [(j, 1)] if j.s == 2 => out.y[i][j.idx() - 1] = c.clone(),
                    [(j, 2)] if j.s == 1 => out.yy[i][j.idx() - 1][j.idx() - 1] = c.clone(),
                    [(j, 1), (k, 1)] if j.s == 1 && k.s == 1 => {
                        let v = c.scale(&half);
                        out.yy[i][j.idx() - 1][k.idx() - 1] = v.clone();
                        out.yy[i][k.idx() - 1][j.idx() - 1] = v;
                    }
                    _ => return Err(bad(m)),
                }
            }
        }
        Ok(out)
    }

    pub fn to_form(&self) -> ReducedOneForm {
        let n = self.n;
        let u = |i: usize, s: usize| DiffPoly::u(i + 1, s);
        let th = |i: usize, s: usize| DiffPoly::th(i + 1, s);
        let mut g = vec![DiffPoly::zero(); n];
        let mut h = vec![DiffPoly::zero(); n];
        for i in 0..n {
            let mut x = DiffPoly::zero();
            let mut y = DiffPoly::zero();
            for j in 0..n {
                x = x + th(j, 2).mul_scalar(&self.x[i][j]);
                y = y + u(j, 2).mul_scalar(&self.y[i][j]);
                for k in 0..n {
                    x = x + (u(k, 1) * th(j, 1)).mul_scalar(&self.xd[i][j][k]);
                    x = x + (u(k, 2) * th(j, 0)).mul_scalar(&self.z[i][j][k]);
                    y = y + (u(j, 1) * u(k, 1)).mul_scalar(&self.yy[i][j][k]);
                    for l in 0..n {
                        x = x + (u(k, 1) * u(l, 1) * th(j, 0)).mul_scalar(&self.zz[i][j][k][l]);
                    }
                }
            }
            g[i] = x;
            h[i] = y;
        }
        ReducedOneForm::from_gh(g, h)
    }

    /// Conditions of the normal form: `X^(i)_j = 0` for `j ≠ i`,
    /// `Y^(i)_j = 0`, `Y^(i)_ii = 0`.
    pub fn is_normal(&self) -> bool {
        (0..self.n).all(|i| {
            self.yy[i][i][i].is_zero()
                && (0..self.n).all(|j| self.y[i][j].is_zero() && (i == j || self.x[i][j].is_zero()))
        })
    }
}

/// `ind_i(ω) = (X^(i)_i + Y^(i)_i) / f^i`.
pub fn indices(s: &SemisimpleHydroPair, w: &ReducedOneForm) -> Result<IndexVector> {
    check_12(w)?;
    let n = s.n();
    let mut ind = Vec::with_capacity(n);
    for i in 1..=n {
        let x = w.g(i).coefficient_of(&[], &[Jet::new(i, 2)]);
        let y = w.h(i).coefficient_of(&[(Jet::new(i, 2), 1)], &[]);
        ind.push(x.add(&y).div(s.fi(i))?);
    }
    Ok(IndexVector { ind })
}

/// `D̃_0 D̃_1 ω = 0` for `ω` of bidegree `(1, 2)`.
pub fn is_cocycle(s: &SemisimpleHydroPair, w: &ReducedOneForm) -> Result<bool> {
    check_12(w)?;
    Ok(dtilde_reduced(s.d0(), &dtilde_reduced(s.d1(), w)).is_zero())
}

fn check_single_variable(c: &[RatFunc]) -> Result<()> {
    for (k, ci) in c.iter().enumerate() {
        if ci.u_mask() & !(1 << k) != 0 {
            return Err(Error::NotSingleVariable(k + 1));
        }
    }
    Ok(())
}

/// `τ = ∫ δ(D_1 Σ c_i u^{i,1} log u^{i,1} - D_0 Σ u^i c_i u^{i,1} log u^{i,1})`.
///
/// The density lives in the log-extended ring; the logs cancel after
/// integration by parts, which is checked on the way out.
pub fn build_tau(s: &SemisimpleHydroPair, c: &[RatFunc]) -> Result<ReducedOneForm> {
    let n = s.n();
    if c.len() != n {
        return Err(Error::WrongShape(format!(
            "expected {n} functions c_i, got {}",
            c.len()
        )));
    }
    check_single_variable(c)?;
    let mut h0 = ExtDiffPoly::default();
    let mut h1 = ExtDiffPoly::default();
    for i in 1..=n {
        let ci = &c[i - 1];
        let base = ExtDiffPoly::u1_pow(i, 1).mul(&ExtDiffPoly::log(i));
        h0 = h0.add(&ExtDiffPoly::from_poly(base.inner().mul_scalar(ci)));
        h1 = h1.add(&ExtDiffPoly::from_poly(
            base.inner().mul_scalar(&ci.mul(&RatFunc::u(i))),
        ));
    }
    let dens = apply(s.d1(), h0.inner()) - apply(s.d0(), h1.inner());
    let red = de_rham(&dens).reduce();
    let mut g = Vec::with_capacity(n);
    let mut h = Vec::with_capacity(n);
    for i in 1..=n {
        g.push(ExtDiffPoly::from_poly(red.g(i)).assert_polynomial()?);
        h.push(ExtDiffPoly::from_poly(red.h(i)).assert_polynomial()?);
    }
    Ok(ReducedOneForm::from_gh(g, h))
}

/// The exact forms added by [`normalize_cocycle`]:
/// `ω_out = ω + D̃_0 γ + D̃_0 α + D̃_1 β` with `α_i = -u^i β_i`.
#[derive(Clone, PartialEq, Debug)]
pub struct Gauge {
    pub gamma: ReducedOneForm,
    pub alpha: ReducedOneForm,
    pub beta: ReducedOneForm,
}

impl Gauge {
    pub fn is_zero(&self) -> bool {
        self.gamma.is_zero() && self.alpha.is_zero() && self.beta.is_zero()
    }

    pub fn image(&self, s: &SemisimpleHydroPair) -> ReducedOneForm {
        dtilde_reduced(s.d0(), &self.gamma)
            .add(&dtilde_reduced(s.d0(), &self.alpha))
            .add(&dtilde_reduced(s.d1(), &self.beta))
    }
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub cocycle: NormalFormCocycle,
    pub form: ReducedOneForm,
    pub gauge: Gauge,
}

/// `∫ Σ c[i][j] w_i u^{j,1} δu^i`.
fn first_order(c: &[Vec<RatFunc>], weight: impl Fn(usize) -> RatFunc) -> ReducedOneForm {
    let n = c.len();
    let g = (0..n)
        .map(|i| {
            let mut a = DiffPoly::zero();
            for j in 0..n {
                a = a + DiffPoly::u(j + 1, 1).mul_scalar(&c[i][j].mul(&weight(i)));
            }
            a
        })
        .collect();
    ReducedOneForm::from_gh(g, vec![])
}

fn gauge_of(gamma: &[Vec<RatFunc>], beta: &[Vec<RatFunc>]) -> Gauge {
    Gauge {
        gamma: first_order(gamma, |_| RatFunc::one()),
        alpha: first_order(beta, |i| RatFunc::u(i + 1).neg()),
        beta: first_order(beta, |_| RatFunc::one()),
    }
}

type Features = fn(&NormalFormCocycle) -> Vec<RatFunc>;

fn y_features(c: &NormalFormCocycle) -> Vec<RatFunc> {
    c.y.iter().flatten().cloned().collect()
}

fn xy_features(c: &NormalFormCocycle) -> Vec<RatFunc> {
    let mut out = Vec::new();
    for i in 0..c.n {
        for j in 0..c.n {
            out.push(if i == j {
                c.yy[i][i][i].clone()
            } else {
                c.x[i][j].clone()
            });
        }
    }
    out
}

/// Solves for the unknown coefficients of a gauge step. The features
/// depend on the unknowns pointwise (no derivatives of the unknowns enter),
/// so the response of each unit gauge is measured once.
fn gauge_step(
    s: &SemisimpleHydroPair,
    w: &ReducedOneForm,
    feats: Features,
    is_gamma: bool,
) -> Result<Vec<Vec<RatFunc>>> {
    let n = s.n();
    let target = feats(&NormalFormCocycle::from_form(n, w)?);
    let mut cols = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut unit = zeros2(n);
            unit[i][j] = RatFunc::one();
            let zero = zeros2(n);
            let gauge = if is_gamma {
                gauge_of(&unit, &zero)
            } else {
                gauge_of(&zero, &unit)
            };
            cols.push(feats(&NormalFormCocycle::from_form(n, &gauge.image(s))?));
        }
    }
    let rows = target.len();
    let m: Vec<Vec<RatFunc>> = (0..rows)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    let rhs: Vec<RatFunc> = target.iter().map(|t| t.neg()).collect();
    let x = linalg::solve(&m, &rhs)
        .ok_or_else(|| Error::Invalid("gauge system is inconsistent".into()))?;
    Ok((0..n).map(|i| x[i * n..(i + 1) * n].to_vec()).collect())
}

/// Normal form of the class of a cocycle `ω` modulo `im D̃_0 + im D̃_1`.
pub fn normalize_cocycle(s: &SemisimpleHydroPair, w: &ReducedOneForm) -> Result<Normalized> {
    if !is_cocycle(s, w)? {
        return Err(Error::NotACocycle);
    }
    let n = s.n();
    let mut gamma = zeros2(n);
    let mut beta = zeros2(n);
    let mut cur = w.clone();
    for _ in 0..4 {
        if NormalFormCocycle::from_form(n, &cur)?.is_normal() {
            break;
        }
        let dg = gauge_step(s, &cur, y_features, true)?;
        let step = gauge_of(&dg, &zeros2(n));
        cur = cur.add(&step.image(s));
        let db = gauge_step(s, &cur, xy_features, false)?;
        let step = gauge_of(&zeros2(n), &db);
        cur = cur.add(&step.image(s));
        for i in 0..n {
            for j in 0..n {
                gamma[i][j] = gamma[i][j].add(&dg[i][j]);
                beta[i][j] = beta[i][j].add(&db[i][j]);
            }
        }
    }
    let cocycle = NormalFormCocycle::from_form(n, &cur)?;
    if !cocycle.is_normal() {
        return Err(Error::Invalid("normal form conditions not reached".into()));
    }
    Ok(Normalized {
        cocycle,
        form: cur,
        gauge: gauge_of(&gamma, &beta),
    })
}

//! Closed-form components of `D̃_0 ω` for `ω = ∫ Σ X^i δu^i + Y^i δθ_i` of
//! bidegree `(1, 2)`, written out term by term. Used to cross-check the
//! generic Lie-derivative path.

use super::cocycle::NormalFormCocycle;
use super::pair::SemisimpleHydroPair;
use crate::error::Result;
use crate::functionals::apply;
use crate::jetring::DiffPoly;

/// `(M^i, N^i)` with `D̃_0 ω = ∫ Σ M^i δu^i + N^i δθ_i`.
pub fn mn_oracle(
    s: &SemisimpleHydroPair,
    w: &NormalFormCocycle,
) -> Result<(Vec<DiffPoly>, Vec<DiffPoly>)> {
    let n = s.n();
    if w.n != n {
        return Err(crate::Error::WrongShape(format!(
            "cocycle has {} components, structure {n}",
            w.n
        )));
    }
    let form = w.to_form();
    let x: Vec<DiffPoly> = (1..=n).map(|i| form.g(i)).collect();
    let y: Vec<DiffPoly> = (1..=n).map(|i| form.h(i)).collect();
    let d0 = s.d0();
    let u1 = |j: usize| DiffPoly::u(j, 1);
    let th = |j: usize, k: usize| DiffPoly::th(j, k);
    let f = |j: usize| s.fi(j).clone();
    let a = |i: usize, j: usize| s.a(i, j).clone();
    let b = |i: usize, j: usize| s.b(i, j).clone();
    let xs = |j: usize| x[j - 1].clone();
    let ys = |j: usize| y[j - 1].clone();
    let idx = || 1..=n;

    let mut ms = Vec::with_capacity(n);
    let mut ns = Vec::with_capacity(n);
    for i in 1..=n {
        let mut m = apply(d0, &xs(i));
        let mut inner = DiffPoly::zero();
        for j in idx() {
            m = m - (xs(j) * th(j, 1)).mul_scalar(&f(j).partial_u(i));
            inner = inner + (xs(j) * th(j, 0)).mul_scalar(&a(i, j));
            inner = inner + (xs(j) * th(i, 0)).mul_scalar(&b(j, i));
            inner = inner - (xs(i) * th(j, 0)).mul_scalar(&b(j, i));
            for k in idx() {
                m = m - (xs(k) * u1(j) * th(k, 0)).mul_scalar(&a(j, k).partial_u(i));
                m = m - (xs(k) * u1(j) * th(j, 0)).mul_scalar(&b(k, j).partial_u(i));
                m = m + (xs(k) * u1(k) * th(j, 0)).mul_scalar(&b(j, k).partial_u(i));
                m = m + (ys(k) * th(j, 0) * th(j, 1)).mul_scalar(&a(k, j).partial_u(i));
                m = m + (ys(k) * th(k, 0) * th(j, 1)).mul_scalar(&b(j, k).partial_u(i));
                m = m - (ys(k) * th(j, 0) * th(k, 1)).mul_scalar(&b(j, k).partial_u(i));
                inner = inner - (ys(j) * th(k, 0) * th(i, 0)).mul_scalar(&b(k, i).partial_u(j));
                inner = inner + (ys(j) * th(k, 0) * th(j, 0)).mul_scalar(&b(k, j).partial_u(i));
                for l in idx() {
                    m = m
                        + (ys(l) * u1(j) * th(k, 0) * th(j, 0))
                            .mul_scalar(&b(k, j).partial_u(l).partial_u(i));
                    m = m
                        - (ys(l) * u1(j) * th(k, 0) * th(l, 0))
                            .mul_scalar(&b(k, l).partial_u(j).partial_u(i));
                }
            }
        }
        ms.push(m + inner.dx());

        let mut nn = apply(d0, &ys(i));
        let mut inner = xs(i).mul_scalar(&f(i));
        for j in idx() {
            nn = nn - (xs(i) * u1(j)).mul_scalar(&a(j, i));
            nn = nn - (xs(j) * u1(i)).mul_scalar(&b(j, i));
            nn = nn + (xs(j) * u1(j)).mul_scalar(&b(i, j));
            inner = inner - (ys(j) * th(i, 0)).mul_scalar(&a(j, i));
            nn = nn - (ys(j) * th(i, 1)).mul_scalar(&a(j, i));
            inner = inner - (ys(j) * th(j, 0)).mul_scalar(&b(i, j));
            nn = nn - (ys(i) * th(j, 1)).mul_scalar(&b(j, i));
            inner = inner + (ys(i) * th(j, 0)).mul_scalar(&b(j, i));
            nn = nn + (ys(j) * th(j, 1)).mul_scalar(&b(i, j));
            for k in idx() {
                nn = nn + (ys(j) * u1(i) * th(k, 0)).mul_scalar(&b(k, i).partial_u(j));
                nn = nn - (ys(k) * u1(j) * th(j, 0)).mul_scalar(&b(i, j).partial_u(k));
                nn = nn - (ys(i) * u1(j) * th(k, 0)).mul_scalar(&b(k, i).partial_u(j));
                nn = nn + (ys(k) * u1(j) * th(k, 0)).mul_scalar(&b(i, k).partial_u(j));
            }
        }
        ns.push(nn + inner.dx());
    }
    Ok((ms, ns))
}

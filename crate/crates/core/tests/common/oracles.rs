//! Random generators and hand-derived formulas shared by the test targets.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use vbh::bihss::{NormalFormCocycle, SemisimpleHydroPair};
use vbh::coeffs::{LamPoly, RatFunc};
use vbh::forms::{dtilde_reduced, ReducedOneForm};
use vbh::jetring::{DiffPoly as P, LamDiffPoly};

use super::{half, q, rand_base};

/// `c(u^i)` of degree at most `deg` with small integer coefficients.
pub fn rand_single(r: &mut ChaCha8Rng, i: usize, deg: i32) -> RatFunc {
    let mut c = RatFunc::zero();
    for k in 0..=deg {
        let a = r.gen_range(-3i64..=3);
        c = c.add(&RatFunc::u(i).pow(k).unwrap().scale(&q(a)));
    }
    c
}

/// `∫ Σ c_ij u^{j,1} δu^i` with polynomial `c_ij` of degree at most `deg`.
pub fn rand_gauge(r: &mut ChaCha8Rng, n: usize, deg: u32) -> ReducedOneForm {
    let g = (1..=n)
        .map(|_| {
            let mut a = P::zero();
            for j in 1..=n {
                a = a + P::u(j, 1).mul_scalar(&rand_base(r, n, deg));
            }
            a
        })
        .collect();
    ReducedOneForm::from_gh(g, vec![])
}

pub fn coboundary(
    s: &SemisimpleHydroPair,
    a: &ReducedOneForm,
    b: &ReducedOneForm,
) -> ReducedOneForm {
    dtilde_reduced(s.d0(), a).add(&dtilde_reduced(s.d1(), b))
}

// Hand-derived images of the derivation of ½∫ Σ g^i θ_i θ_i^1 + Σ_{i≠j} A^ij θ_i θ_j,
// with A^ij = α^ij u^{j,1} - β^ij u^{i,1}:
//   D(u^k) = g^k θ_k^1 + ½ (g^k)' θ_k + Σ_j A^kj θ_j
//   D(θ_k) = ½ Σ_i ∂_k g^i θ_i θ_i^1 + ½ Σ ∂_k A^ij θ_i θ_j - ½ (Σ ∂A^ij/∂u^{k,1} θ_i θ_j)'
pub fn explicit_derivation(f: &[RatFunc], second: bool) -> (Vec<P>, Vec<P>) {
    let n = f.len();
    let g: Vec<RatFunc> = (1..=n)
        .map(|i| {
            if second {
                RatFunc::u(i).mul(&f[i - 1])
            } else {
                f[i - 1].clone()
            }
        })
        .collect();
    let half = half();
    let alpha = |i: usize, j: usize| {
        g[i - 1]
            .div(&f[j - 1])
            .unwrap()
            .mul(&f[j - 1].partial_u(i))
            .scale(&half)
    };
    let beta = |i: usize, j: usize| {
        g[j - 1]
            .div(&f[i - 1])
            .unwrap()
            .mul(&f[i - 1].partial_u(j))
            .scale(&half)
    };
    let amat = |i: usize, j: usize| {
        P::u(j, 1).mul_scalar(&alpha(i, j)) - P::u(i, 1).mul_scalar(&beta(i, j))
    };
    let tt = |i: usize, j: usize| P::th(i, 0) * P::th(j, 0);
    let mut du = Vec::new();
    let mut dt = Vec::new();
    for k in 1..=n {
        let gk = P::scalar(g[k - 1].clone());
        let mut a = P::th(k, 1).mul_scalar(&g[k - 1]) + (gk.dx() * P::th(k, 0)).scale(&half);
        let mut b = P::zero();
        let mut c = P::zero();
        for i in 1..=n {
            b = b
                + (P::th(i, 0) * P::th(i, 1))
                    .mul_scalar(&g[i - 1].partial_u(k))
                    .scale(&half);
            for j in (1..=n).filter(|&j| j != i) {
                if i == k {
                    a = a + amat(k, j) * P::th(j, 0);
                }
                let dk = P::u(j, 1).mul_scalar(&alpha(i, j).partial_u(k))
                    - P::u(i, 1).mul_scalar(&beta(i, j).partial_u(k));
                b = b + (dk * tt(i, j)).scale(&half);
                if k == j {
                    c = c + tt(i, j).mul_scalar(&alpha(i, j));
                }
                if k == i {
                    c = c - tt(i, j).mul_scalar(&beta(i, j));
                }
            }
        }
        du.push(a);
        dt.push(b - c.dx().scale(&half));
    }
    (du, dt)
}

pub fn rand_normal_form(r: &mut ChaCha8Rng, n: usize) -> NormalFormCocycle {
    let mut w = NormalFormCocycle::zero(n);
    let mut c = || rand_base(r, n, 1);
    for i in 0..n {
        w.x[i][i] = c();
        for j in 0..n {
            for k in 0..n {
                w.xd[i][j][k] = c();
                w.z[i][j][k] = c();
                for l in 0..=k {
                    let v = c();
                    w.zz[i][j][k][l] = v.clone();
                    w.zz[i][j][l][k] = v;
                }
            }
            for k in 0..=j {
                if (i, j, k) != (i, i, i) {
                    let v = c();
                    w.yy[i][j][k] = v.clone();
                    w.yy[i][k][j] = v;
                }
            }
        }
    }
    w
}

pub fn lam_lift(r: &mut ChaCha8Rng, a: &P) -> LamDiffPoly {
    let k = r.gen_range(0..=2);
    a.lift::<LamPoly>().mul_scalar(&LamPoly::lam().shift(k))
}

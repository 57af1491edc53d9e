#![allow(dead_code)]

pub mod oracles;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vbh::coeffs::{RatFunc, Rational};
use vbh::forms::{OneForm, ReducedOneForm};
use vbh::functionals::LocalFunctional;
use vbh::jetring::basis::{base_monomials, monomials};
use vbh::jetring::{DiffPoly, Gen, JetPoly};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

pub fn half() -> Rational {
    Rational::new(1, 2)
}

/// Random polynomial in `u^1..u^n` of degree at most `deg`.
pub fn rand_base(r: &mut ChaCha8Rng, n: usize, deg: u32) -> RatFunc {
    let mut acc = RatFunc::zero();
    for m in base_monomials(n, deg) {
        if r.gen_bool(0.5) {
            let c = r.gen_range(-3i64..=3);
            acc = acc.add(&m.scale(&q(c)));
        }
    }
    acc
}

/// Random homogeneous element of bidegree `(p, d)` with at most `terms` terms.
pub fn rand_poly(
    r: &mut ChaCha8Rng,
    n: usize,
    p: usize,
    d: usize,
    udeg: u32,
    terms: usize,
) -> DiffPoly {
    let mut basis = monomials(n, p, d);
    basis.shuffle(r);
    let mut acc = DiffPoly::zero();
    for m in basis.into_iter().take(terms) {
        let mut c = rand_base(r, n, udeg);
        if c.is_zero() {
            c = RatFunc::int(r.gen_range(1..=3));
        }
        acc = acc + JetPoly::term(m, c);
    }
    acc
}

pub fn rand_functional(r: &mut ChaCha8Rng, n: usize, p: usize, d: usize) -> LocalFunctional {
    LocalFunctional::new(rand_poly(r, n, p, d, 2, 3))
}

/// Random form of bidegree `(p, d)` with slot orders up to `smax`.
pub fn rand_form(r: &mut ChaCha8Rng, n: usize, p: usize, d: usize, smax: usize) -> OneForm {
    let mut w = OneForm::zero();
    for _ in 0..3 {
        let i = r.gen_range(1..=n);
        let s = r.gen_range(0..=smax.min(d));
        let odd = p > 0 && r.gen_bool(0.5);
        let (g, cp) = if odd {
            (Gen::th(i, s), p - 1)
        } else {
            (Gen::u(i, s), p)
        };
        let a = rand_poly(r, n, cp, d - s, 2, 2);
        w = w.add(&OneForm::single(g, a));
    }
    w
}

pub fn rand_reduced(r: &mut ChaCha8Rng, n: usize, p: usize, d: usize) -> ReducedOneForm {
    rand_form(r, n, p, d, 0).reduce()
}

/// f = (u^1, ..., u^{n-1}, 1).
pub fn staircase_metric(n: usize) -> Vec<RatFunc> {
    (1..=n)
        .map(|i| if i < n { RatFunc::u(i) } else { RatFunc::one() })
        .collect()
}

use super::mono::{Jet, Mono, OddPart};
use crate::coeffs::mpoly::Exps;
use crate::coeffs::{MPoly, RatFunc, Rational};

/// All monomials of bidegree `(p, d)` in components `1..=n`.
pub fn monomials(n: usize, p: usize, d: usize) -> Vec<Mono> {
    let odd_gens: Vec<Jet> = (1..=n)
        .flat_map(|i| (0..=d).map(move |s| Jet::new(i, s)))
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    odd_subsets(&odd_gens, 0, p, d, &mut chosen, &mut |odd, rest| {
        let mut evens = Vec::new();
        even_parts(n, rest, 1, 1, &mut Vec::new(), &mut evens);
        for e in evens {
            let mut m = Mono::one();
            m.odd = odd.iter().copied().collect::<OddPart>();
            for (j, k) in e {
                m.adjust_even(j, k);
            }
            out.push(m);
        }
    });
    out.sort();
    out
}

fn odd_subsets(
    gens: &[Jet],
    start: usize,
    left: usize,
    budget: usize,
    chosen: &mut Vec<Jet>,
    emit: &mut dyn FnMut(&[Jet], usize),
) {
    if left == 0 {
        emit(chosen, budget);
        return;
    }
    for k in start..gens.len() {
        let s = gens[k].s as usize;
        if s > budget {
            continue;
        }
        chosen.push(gens[k]);
        odd_subsets(gens, k + 1, left - 1, budget - s, chosen, emit);
        chosen.pop();
    }
}

/// Multisets of `u^{i,s}` (`s >= 1`) with total order `rest`, generated in
/// non-decreasing `(i, s)` order to avoid repeats.
fn even_parts(
    n: usize,
    rest: usize,
    i0: usize,
    s0: usize,
    cur: &mut Vec<(Jet, i32)>,
    out: &mut Vec<Vec<(Jet, i32)>>,
) {
    if rest == 0 {
        out.push(cur.clone());
        return;
    }
    for i in i0..=n {
        let smin = if i == i0 { s0 } else { 1 };
        for s in smin..=rest {
            let j = Jet::new(i, s);
            for k in 1..=rest / s {
                cur.push((j, k as i32));
                // next generator strictly after (i, s)
                even_parts(n, rest - k * s, i, s + 1, cur, out);
                cur.pop();
            }
        }
    }
}

/// Monomials `u^α` in the base coordinates with `|α| <= deg`.
pub fn base_monomials(n: usize, deg: u32) -> Vec<RatFunc> {
    let mut out = Vec::new();
    let mut e = [0u16; 8];
    fn rec(n: usize, k: usize, left: u32, e: &mut [u16; 8], out: &mut Vec<RatFunc>) {
        if k == n {
            out.push(RatFunc::poly(MPoly::monomial(Exps(*e), Rational::one())));
            return;
        }
        for x in 0..=left {
            e[k] = x as u16;
            rec(n, k + 1, left - x, e, out);
        }
        e[k] = 0;
    }
    rec(n, 0, deg, &mut e, &mut out);
    out
}

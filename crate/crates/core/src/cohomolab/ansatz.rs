//! Bounded probes of `ker D̃_0 ∩ ker D̃_1` and of `im D̃_0 D̃_1` on reduced
//! 1-forms whose coefficients are polynomials of bounded degree in `u`.
//! Every answer holds only inside the ansatz; reports carry the bound.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::bihss::SemisimpleHydroPair;
use crate::coeffs::mpoly::Exps;
use crate::coeffs::{MPoly, RatFunc, Rational};
use crate::error::{Error, Result};
use crate::forms::{dtilde_reduced, ReducedOneForm};
use crate::jetring::basis::{base_monomials, monomials};
use crate::jetring::{Gen, JetPoly, Mono};
use crate::linalg;

pub const DEFAULT_CAP: usize = 4000;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AnsatzMode {
    /// Basis of `{ω : D̃_0 ω = D̃_1 ω = 0}` at the target bidegree.
    Kernel2,
    /// Whether the target lies in `D̃_0 D̃_1` of the ansatz two bidegrees down.
    Coboundary,
}

impl fmt::Display for AnsatzMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnsatzMode::Kernel2 => "kernel2",
            AnsatzMode::Coboundary => "coboundary",
        })
    }
}

#[derive(Clone, Debug)]
pub struct AnsatzProblem {
    pub p: usize,
    pub d: usize,
    /// Maximal total degree of the coefficient polynomials in `u`.
    pub udeg: u32,
    /// Needed in coboundary mode; must have bidegree `(p, d)`.
    pub target: Option<ReducedOneForm>,
    /// Largest admissible number of unknowns.
    pub cap: usize,
}

impl AnsatzProblem {
    pub fn kernel(p: usize, d: usize, udeg: u32) -> Self {
        AnsatzProblem {
            p,
            d,
            udeg,
            target: None,
            cap: DEFAULT_CAP,
        }
    }

    /// Reads `(p, d)` off the target. The zero form is accepted at any bidegree.
    pub fn coboundary(target: ReducedOneForm, p: usize, d: usize, udeg: u32) -> Result<Self> {
        if let Some((tp, td)) = target.bidegree()? {
            if (tp as usize, td as usize) != (p, d) {
                return Err(Error::WrongBidegree {
                    want_p: p as i32,
                    want_d: d as i32,
                    got_p: tp,
                    got_d: td,
                });
            }
        }
        Ok(AnsatzProblem {
            p,
            d,
            udeg,
            target: Some(target),
            cap: DEFAULT_CAP,
        })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }
}

/// Reduced forms `c u^α m δu^i` and `c u^α m δθ_i` spanning bidegree
/// `(p, d)`, with `|α| ≤ udeg`.
pub fn form_basis(n: usize, p: usize, d: usize, udeg: u32) -> Vec<ReducedOneForm> {
    let coeffs = base_monomials(n, udeg);
    let mut out = Vec::new();
    let mut push = |g: Gen, ms: Vec<Mono>| {
        for m in ms {
            for c in &coeffs {
                let part = JetPoly::term(m.clone(), c.clone());
                let (gs, hs) = match g {
                    Gen::U(_) => (one_slot(n, g, part), vec![]),
                    Gen::Th(_) => (vec![], one_slot(n, g, part)),
                };
                out.push(ReducedOneForm::from_gh(gs, hs));
            }
        }
    };
    for i in 1..=n {
        push(Gen::u(i, 0), monomials(n, p, d));
        if p >= 1 {
            push(Gen::th(i, 0), monomials(n, p - 1, d));
        }
    }
    out
}

fn one_slot(n: usize, g: Gen, part: JetPoly<RatFunc>) -> Vec<JetPoly<RatFunc>> {
    let i = g.jet().idx();
    let mut v = vec![JetPoly::zero(); n];
    v[i - 1] = part;
    v
}

/// Solution description of a probe.
#[derive(Clone, Debug)]
pub enum AnsatzOutcome {
    Kernel(Vec<ReducedOneForm>),
    /// `Some(η)` with `D̃_0 D̃_1 η` equal to the target, `None` if no such `η`
    /// exists within the ansatz.
    Coboundary(Option<ReducedOneForm>),
}

#[derive(Clone, Debug)]
pub struct AnsatzReport {
    pub mode: AnsatzMode,
    pub p: usize,
    pub d: usize,
    pub udeg: u32,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub outcome: AnsatzOutcome,
}

impl AnsatzReport {
    /// Kernel is zero, or the target is not a coboundary (within bounds).
    pub fn only_trivial(&self) -> bool {
        match &self.outcome {
            AnsatzOutcome::Kernel(b) => b.is_empty(),
            AnsatzOutcome::Coboundary(eta) => eta.is_none(),
        }
    }
}

impl fmt::Display for AnsatzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match &self.outcome {
            AnsatzOutcome::Kernel(b) => format!("kernel of dimension {}", b.len()),
            AnsatzOutcome::Coboundary(Some(_)) => "target is a coboundary".to_string(),
            AnsatzOutcome::Coboundary(None) => "target is not a coboundary".to_string(),
        };
        write!(
            f,
            "{} at (p, d) = ({}, {}): {} within bounds (u-degree <= {}, {} unknowns, rank {})",
            self.mode, self.p, self.d, what, self.udeg, self.unknowns, self.rank
        )
    }
}

type Key = (u8, Gen, Mono);

fn collect(tag: u8, w: &ReducedOneForm, out: &mut BTreeMap<Key, RatFunc>) {
    for (g, a) in w.form().parts() {
        for (m, c) in a.terms() {
            out.insert((tag, *g, m.clone()), c.clone());
        }
    }
}

fn lcm(a: &MPoly, b: &MPoly) -> MPoly {
    let g = a.gcd(b);
    a.div_exact(&g).expect("gcd divides").mul(b).monic()
}

/// Rows over the rationals for `Σ x_k c_k = t`, one per key of the column
/// images and per monomial in `u` after clearing denominators.
fn equations(
    columns: &[BTreeMap<Key, RatFunc>],
    target: &BTreeMap<Key, RatFunc>,
) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let mut by_key: BTreeMap<&Key, Vec<(usize, &RatFunc)>> = BTreeMap::new();
    for (k, col) in columns.iter().enumerate() {
        for (key, c) in col {
            by_key.entry(key).or_default().push((k, c));
        }
    }
    for key in target.keys() {
        by_key.entry(key).or_default();
    }
    let ncols = columns.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (key, entries) in by_key {
        let t = target.get(key);
        let mut den = MPoly::one();
        for c in entries.iter().map(|(_, c)| *c).chain(t) {
            den = lcm(&den, c.denom());
        }
        let clear = |c: &RatFunc| -> MPoly {
            c.numer()
                .mul(&den.div_exact(c.denom()).expect("lcm is a multiple"))
        };
        let mut block: BTreeMap<Exps, (Vec<Rational>, Rational)> = BTreeMap::new();
        let blank = || (vec![Rational::zero(); ncols], Rational::zero());
        for &(k, c) in &entries {
            for (e, x) in clear(c).terms() {
                block.entry(*e).or_insert_with(blank).0[k] = x.clone();
            }
        }
        if let Some(t) = t {
            for (e, x) in clear(t).terms() {
                block.entry(*e).or_insert_with(blank).1 = x.clone();
            }
        }
        for (_, (row, b)) in block {
            rows.push(row);
            rhs.push(b);
        }
    }
    (rows, rhs)
}

fn combine(basis: &[ReducedOneForm], x: &[Rational]) -> ReducedOneForm {
    let mut acc = ReducedOneForm::zero();
    for (e, c) in basis.iter().zip(x) {
        if !c.is_zero() {
            acc = acc.add(&e.scale(c));
        }
    }
    acc
}

pub fn ansatz_solve(
    s: &SemisimpleHydroPair,
    problem: &AnsatzProblem,
    mode: AnsatzMode,
) -> Result<AnsatzReport> {
    let n = s.n();
    let (p, d) = (problem.p, problem.d);
    let (basis, target) = match mode {
        AnsatzMode::Kernel2 => (form_basis(n, p, d, problem.udeg), BTreeMap::new()),
        AnsatzMode::Coboundary => {
            let t = problem
                .target
                .as_ref()
                .ok_or_else(|| Error::Invalid("coboundary mode needs a target".into()))?;
            let mut tk = BTreeMap::new();
            collect(0, t, &mut tk);
            let src = if p >= 2 && d >= 2 {
                form_basis(n, p - 2, d - 2, problem.udeg)
            } else {
                vec![]
            };
            (src, tk)
        }
    };
    if basis.len() > problem.cap {
        return Err(Error::SystemTooLarge(basis.len()));
    }
    let columns: Vec<BTreeMap<Key, RatFunc>> = basis
        .par_iter()
        .map(|e| {
            let mut col = BTreeMap::new();
            match mode {
                AnsatzMode::Kernel2 => {
                    collect(0, &dtilde_reduced(s.d0(), e), &mut col);
                    collect(1, &dtilde_reduced(s.d1(), e), &mut col);
                }
                AnsatzMode::Coboundary => {
                    collect(
                        0,
                        &dtilde_reduced(s.d0(), &dtilde_reduced(s.d1(), e)),
                        &mut col,
                    );
                }
            }
            col
        })
        .collect();
    let (rows, rhs) = equations(&columns, &target);
    let equations = rows.len();
    let ncols = basis.len();
    let (rank, outcome) = match mode {
        AnsatzMode::Kernel2 => {
            let ker = linalg::nullspace(rows.clone(), ncols);
            let forms = ker.iter().map(|x| combine(&basis, x)).collect();
            (ncols - ker.len(), AnsatzOutcome::Kernel(forms))
        }
        AnsatzMode::Coboundary => {
            let rank = linalg::rank(rows.clone(), ncols);
            let eta = if rows.is_empty() {
                // no equations: only the zero target is reachable
                rhs.iter().all(|b| b.is_zero()).then(ReducedOneForm::zero)
            } else {
                linalg::solve(&rows, &rhs).map(|x| combine(&basis, &x))
            };
            (rank, AnsatzOutcome::Coboundary(eta))
        }
    };
    Ok(AnsatzReport {
        mode,
        p,
        d,
        udeg: problem.udeg,
        unknowns: ncols,
        equations,
        rank,
        outcome,
    })
}

//! Brute-force bidegree atlases of the graded spaces that appear in the
//! spectral-sequence computation. Elements are enumerated monomial by
//! monomial, so every count is exact up to the cutoffs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use super::window::Bidegree;
use crate::error::{Error, Result};
use crate::jetring::basis::monomials;
use crate::jetring::{Gen, Jet, Mono};

/// The spaces that can be charted. `i` indices count from 1.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Space {
    /// `Ĉ{δθ}`: polynomials in `θ_j, θ_j^1` times some `δθ_k`.
    CDeltaTheta,
    /// `Ĉ[λ]{δθ}`; `λ` has bidegree `(0, 0)`, so the chart agrees with `Ĉ{δθ}`.
    CLambdaDeltaTheta,
    /// `Ĉ_i = Ĉ[[u^{i,s}, θ_i^{s+1} | s ≥ 1]]`.
    C(usize),
    /// Nontrivial monomials of `Ĉ_i`.
    CNontrivial(usize),
    /// Monomials with a mixed quadratic factor in two different components.
    Mixed,
    /// `Ĥ_i = Ĉ_i{δu^{i,s}}` with `s ≤ smax`.
    HSlice(usize, usize),
    /// `Ĉ^i_0 θ_i θ_i^2 δθ_j` for `j ≠ i`.
    OffDiagonalFamily(usize),
    /// `Ĉ^i_0 θ_i^2 δθ_i`.
    DiagonalFamily(usize),
    /// `Ĉ^i_0 θ_i θ_i^3 δθ_i`.
    DiagonalFamily3(usize),
    /// `Ĉ^i_0 θ_i θ_i^2 δθ_i^1`.
    DeltaFamily(usize),
}

impl Space {
    fn component(self) -> Option<usize> {
        match self {
            Space::C(i)
            | Space::CNontrivial(i)
            | Space::HSlice(i, _)
            | Space::OffDiagonalFamily(i)
            | Space::DiagonalFamily(i)
            | Space::DiagonalFamily3(i)
            | Space::DeltaFamily(i) => Some(i),
            _ => None,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::CDeltaTheta => write!(f, "C{{dth}}"),
            Space::CLambdaDeltaTheta => write!(f, "C[lam]{{dth}}"),
            Space::C(i) => write!(f, "C_{i}"),
            Space::CNontrivial(i) => write!(f, "Cnt_{i}"),
            Space::Mixed => write!(f, "M"),
            Space::HSlice(i, s) => write!(f, "H_{i}:{s}"),
            Space::OffDiagonalFamily(i) => write!(f, "fam-offdiag_{i}"),
            Space::DiagonalFamily(i) => write!(f, "fam-diag_{i}"),
            Space::DiagonalFamily3(i) => write!(f, "fam-diag3_{i}"),
            Space::DeltaFamily(i) => write!(f, "fam-delta_{i}"),
        }
    }
}

impl FromStr for Space {
    type Err = Error;

    /// Parses the names printed by `Display`, e.g. `C{dth}`, `Cnt_2`, `H_1:3`.
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownSpace(s.to_string());
        match s {
            "C{dth}" => return Ok(Space::CDeltaTheta),
            "C[lam]{dth}" => return Ok(Space::CLambdaDeltaTheta),
            "M" => return Ok(Space::Mixed),
            _ => {}
        }
        let (head, idx) = s.rsplit_once('_').ok_or_else(unknown)?;
        if head == "H" {
            let (i, smax) = idx.split_once(':').ok_or_else(unknown)?;
            let i = i.parse().map_err(|_| unknown())?;
            let smax = smax.parse().map_err(|_| unknown())?;
            return Ok(Space::HSlice(i, smax));
        }
        let i: usize = idx.parse().map_err(|_| unknown())?;
        Ok(match head {
            "C" => Space::C(i),
            "Cnt" => Space::CNontrivial(i),
            "fam-offdiag" => Space::OffDiagonalFamily(i),
            "fam-diag" => Space::DiagonalFamily(i),
            "fam-diag3" => Space::DiagonalFamily3(i),
            "fam-delta" => Space::DeltaFamily(i),
            _ => return Err(unknown()),
        })
    }
}

/// Number of monomials of the space in each occupied bidegree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonomialAtlas {
    pub space: Space,
    pub n: usize,
    pub p_max: usize,
    pub d_max: usize,
    pub counts: BTreeMap<Bidegree, usize>,
}

impl MonomialAtlas {
    pub fn occupied(&self) -> BTreeSet<Bidegree> {
        self.counts.keys().copied().collect()
    }
}

/// `u^{i,s}` with `s ≥ 1` or `θ_i^s` with `s ≥ 2`: the generators that make
/// a monomial of `Ĉ_i` nontrivial.
fn jet_factors(m: &Mono) -> impl Iterator<Item = Jet> + '_ {
    let even = m.even().iter().map(|(j, _)| *j);
    let odd = m.odd().iter().copied().filter(|j| j.s >= 2);
    even.chain(odd)
}

pub fn in_c(m: &Mono) -> bool {
    m.even().is_empty() && m.odd().iter().all(|j| j.s <= 1)
}

pub fn in_c_i(m: &Mono, i: usize) -> bool {
    jet_factors(m).all(|j| j.idx() == i)
}

pub fn in_c_i_nontrivial(m: &Mono, i: usize) -> bool {
    in_c_i(m, i) && jet_factors(m).next().is_some()
}

pub fn in_mixed(m: &Mono) -> bool {
    let mut it = jet_factors(m).map(|j| j.idx());
    match it.next() {
        Some(first) => it.any(|k| k != first),
        None => false,
    }
}

/// `m = g · θ_i^{s_1} ⋯` with `g ∈ Ĉ^i_0`, i.e. removing exactly the listed
/// `θ_i` jets leaves a monomial of `Ĉ` free of `θ_i`.
fn is_family_member(m: &Mono, i: usize, orders: &[usize]) -> bool {
    if !m.even().is_empty() {
        return false;
    }
    let mut rest: Vec<Jet> = m.odd().to_vec();
    for &s in orders {
        match rest.iter().position(|&j| j == Jet::new(i, s)) {
            Some(k) => {
                rest.remove(k);
            }
            None => return false,
        }
    }
    rest.iter().all(|j| j.s <= 1 && !(j.idx() == i && j.s == 0))
}

type Slot = Option<Gen>;

fn slot_bidegree(g: Slot) -> (usize, usize) {
    match g {
        None => (0, 0),
        Some(Gen::U(j)) => (0, j.s as usize),
        Some(Gen::Th(j)) => (1, j.s as usize),
    }
}

fn slots(space: Space, n: usize) -> Vec<Slot> {
    match space {
        Space::CDeltaTheta | Space::CLambdaDeltaTheta => {
            (1..=n).map(|k| Some(Gen::th(k, 0))).collect()
        }
        Space::C(_) | Space::CNontrivial(_) | Space::Mixed => vec![None],
        Space::HSlice(i, smax) => (0..=smax).map(|s| Some(Gen::u(i, s))).collect(),
        Space::OffDiagonalFamily(i) => (1..=n)
            .filter(|&j| j != i)
            .map(|j| Some(Gen::th(j, 0)))
            .collect(),
        Space::DiagonalFamily(i) | Space::DiagonalFamily3(i) => vec![Some(Gen::th(i, 0))],
        Space::DeltaFamily(i) => vec![Some(Gen::th(i, 1))],
    }
}

fn member(space: Space, m: &Mono) -> bool {
    match space {
        Space::CDeltaTheta | Space::CLambdaDeltaTheta => in_c(m),
        Space::C(i) | Space::HSlice(i, _) => in_c_i(m, i),
        Space::CNontrivial(i) => in_c_i_nontrivial(m, i),
        Space::Mixed => in_mixed(m),
        Space::OffDiagonalFamily(i) | Space::DeltaFamily(i) => is_family_member(m, i, &[0, 2]),
        Space::DiagonalFamily(i) => is_family_member(m, i, &[2]),
        Space::DiagonalFamily3(i) => is_family_member(m, i, &[0, 3]),
    }
}

/// Counts the monomials of `space` in every bidegree `(p, d)` with
/// `p ≤ p_max`, `d ≤ d_max`.
pub fn atlas(space: Space, n: usize, p_max: usize, d_max: usize) -> Result<MonomialAtlas> {
    if n == 0 || n > crate::coeffs::MAX_U {
        return Err(Error::IndexOutOfRange {
            what: "n",
            value: n as i64,
        });
    }
    if let Some(i) = space.component() {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange {
                what: "component",
                value: i as i64,
            });
        }
    }
    let slots = slots(space, n);
    let mut counts = BTreeMap::new();
    for p in 0..=p_max {
        for d in 0..=d_max {
            let mut count = 0;
            for &g in &slots {
                let (sp, sd) = slot_bidegree(g);
                if sp > p || sd > d {
                    continue;
                }
                count += monomials(n, p - sp, d - sd)
                    .iter()
                    .filter(|m| member(space, m))
                    .count();
            }
            if count > 0 {
                counts.insert((p, d), count);
            }
        }
    }
    Ok(MonomialAtlas {
        space,
        n,
        p_max,
        d_max,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_forms_one_component() {
        let a = atlas(Space::CLambdaDeltaTheta, 1, 6, 6).unwrap();
        let want: BTreeSet<_> = [(1, 0), (2, 0), (2, 1), (3, 1)].into();
        assert_eq!(a.occupied(), want);
        assert_eq!(a.counts[&(2, 0)], 1);
    }

    #[test]
    fn parse_names() {
        for s in [
            Space::CDeltaTheta,
            Space::Mixed,
            Space::HSlice(2, 3),
            Space::CNontrivial(1),
            Space::DeltaFamily(2),
        ] {
            assert_eq!(s.to_string().parse::<Space>().unwrap(), s);
        }
        assert_eq!(
            "Q_1".parse::<Space>().unwrap_err(),
            Error::UnknownSpace("Q_1".into())
        );
    }

    #[test]
    fn slice_at_order_zero() {
        let a = atlas(Space::HSlice(1, 0), 2, 4, 0).unwrap();
        let want: BTreeSet<_> = [(0, 0), (1, 0), (2, 0)].into();
        assert_eq!(a.occupied(), want);
    }
}

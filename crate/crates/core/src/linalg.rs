//! Dense Gaussian elimination over exact fields.

use crate::coeffs::{RatFunc, Rational};

pub trait Field: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        Rational::inv(self).expect("pivot is nonzero")
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFunc::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn inv(&self) -> Self {
        RatFunc::inv(self).expect("pivot is nonzero")
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Vec<Vec<F>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].inv();
        for x in m[row].iter_mut() {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let k = other[col].clone();
            for (c, pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    other[c] = other[c].sub(&k.mul(pv));
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    pivots
}

/// Basis of `{x : M x = 0}`.
pub fn nullspace<F: Field>(mut m: Vec<Vec<F>>, ncols: usize) -> Vec<Vec<F>> {
    let pivots = rref(&mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![F::zero(); ncols];
        v[free] = F::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = m[r][free].neg();
        }
        out.push(v);
    }
    out
}

/// Solves `M x = b`; `None` when inconsistent. Free unknowns are set to zero.
pub fn solve<F: Field>(m: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<F>> = m
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![F::zero(); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][ncols].clone();
    }
    Some(x)
}

pub fn rank<F: Field>(mut m: Vec<Vec<F>>, ncols: usize) -> usize {
    rref(&mut m, ncols).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let ns = nullspace(m.clone(), 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            for row in &m {
                let dot = row.iter().zip(&v).fold(q(0), |a, (x, y)| &a + &(x * y));
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn solve_over_rational_functions() {
        let u = RatFunc::u(1);
        let m = vec![
            vec![u.clone(), RatFunc::one()],
            vec![RatFunc::one(), RatFunc::zero()],
        ];
        let b = vec![RatFunc::zero(), RatFunc::int(2)];
        let x = solve(&m, &b).unwrap();
        assert_eq!(x[0], RatFunc::int(2));
        assert_eq!(x[1], u.scale(&q(-2)));
    }

    #[test]
    fn inconsistent_system() {
        let m = vec![vec![q(1)], vec![q(1)]];
        assert!(solve(&m, &[q(1), q(2)]).is_none());
        assert_eq!(rank(m, 1), 1);
    }
}

//! Sparse multivariate polynomials over Q in graded-lex order.
//!
//! Variables `0..MAX_U` stand for the base coordinates `u^1..u^MAX_U`;
//! the remaining slots are free parameters (symbolic constants) that
//! no jet operation differentiates.

use std::cmp::Ordering;
use std::fmt;

use super::rational::Rational;

pub const MAX_VARS: usize = 8;
pub const MAX_U: usize = 6;
pub const PARAM_BASE: usize = MAX_U;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Exps(pub [u16; MAX_VARS]);

impl Exps {
    pub fn var(k: usize) -> Self {
        let mut e = [0; MAX_VARS];
        e[k] = 1;
        Exps(e)
    }

    pub fn deg(&self) -> u32 {
        self.0.iter().map(|&x| x as u32).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &Exps) -> Exps {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0.iter()) {
            *a += *b;
        }
        Exps(e)
    }

    pub fn checked_sub(&self, o: &Exps) -> Option<Exps> {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0.iter()) {
            if *a < *b {
                return None;
            }
            *a -= *b;
        }
        Some(Exps(e))
    }

    pub fn meet(&self, o: &Exps) -> Exps {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0.iter()) {
            *a = (*a).min(*b);
        }
        Exps(e)
    }
}

impl Ord for Exps {
    fn cmp(&self, o: &Self) -> Ordering {
        self.deg().cmp(&o.deg()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Exps {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Terms are kept sorted by descending monomial order with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: Vec<(Exps, Rational)>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MPoly {
                terms: vec![(Exps::default(), c)],
            }
        }
    }

    pub fn var(k: usize) -> Self {
        MPoly {
            terms: vec![(Exps::var(k), Rational::one())],
        }
    }

    pub fn monomial(e: Exps, c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MPoly {
                terms: vec![(e, c)],
            }
        }
    }

    /// Builds from arbitrary terms, combining duplicates.
    pub fn from_terms(mut ts: Vec<(Exps, Rational)>) -> Self {
        ts.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Exps, Rational)> = Vec::with_capacity(ts.len());
        for (e, c) in ts {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc = &*lc + &c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        MPoly { terms: out }
    }

    pub fn terms(&self) -> &[(Exps, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_zero())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(e, c)] if e.is_zero() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Exps, Rational)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.terms
            .first()
            .map(|t| t.1.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.deg()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, k: usize) -> u16 {
        self.terms.iter().map(|t| t.0 .0[k]).max().unwrap_or(0)
    }

    /// Bitmask of the variables that occur.
    pub fn var_mask(&self) -> u32 {
        let mut m = 0;
        for (e, _) in &self.terms {
            for (k, &x) in e.0.iter().enumerate() {
                if x > 0 {
                    m |= 1 << k;
                }
            }
        }
        m
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        MPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, -x)).collect(),
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.merge(o, true)
    }

    fn merge(&self, o: &MPoly, negate: bool) -> MPoly {
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0, c));
        }
        MPoly { terms: out }
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if let Some(c) = self.constant_value() {
            return o.scale(&c);
        }
        if let Some(c) = o.constant_value() {
            return self.scale(&c);
        }
        let mut ts = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                ts.push((e1.add(e2), c1 * c2));
            }
        }
        Self::from_terms(ts)
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn partial(&self, k: usize) -> MPoly {
        let mut ts = Vec::new();
        for (e, c) in &self.terms {
            let x = e.0[k];
            if x > 0 {
                let mut ne = *e;
                ne.0[k] -= 1;
                ts.push((ne, c * &Rational::from_int(x as i64)));
            }
        }
        // differentiation can reorder terms of equal total degree
        Self::from_terms(ts)
    }

    /// Evaluates at a point; missing coordinates count as zero.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, &x) in e.0.iter().enumerate() {
                if x > 0 {
                    let v = point.get(k).cloned().unwrap_or_else(Rational::zero);
                    t = &t * &v.pow(x as i32);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> MPoly {
        match self.terms.first() {
            None => Self::zero(),
            Some((_, c)) => self.scale(&c.inv().unwrap()),
        }
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.inv().unwrap()));
        }
        let (le, lc) = d.terms[0].clone();
        let lci = lc.inv().unwrap();
        let mut r = self.clone();
        let mut q = Vec::new();
        while let Some((re, rc)) = r.terms.first().cloned() {
            let e = re.checked_sub(&le)?;
            let c = &rc * &lci;
            r = r.sub(&d.mul_term(&e, &c));
            q.push((e, c));
        }
        Some(Self::from_terms(q))
    }

    fn mul_term(&self, e: &Exps, c: &Rational) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(x, y)| (x.add(e), y * c)).collect(),
        }
    }

    /// Coefficients with respect to variable `k`, indexed by power.
    pub fn to_univariate(&self, k: usize) -> Vec<MPoly> {
        let deg = self.degree_in(k) as usize;
        let mut buckets: Vec<Vec<(Exps, Rational)>> = vec![Vec::new(); deg + 1];
        for (e, c) in &self.terms {
            let p = e.0[k] as usize;
            let mut ne = *e;
            ne.0[k] = 0;
            buckets[p].push((ne, c.clone()));
        }
        buckets.into_iter().map(Self::from_terms).collect()
    }

    pub fn from_univariate(k: usize, cs: &[MPoly]) -> MPoly {
        let mut ts = Vec::new();
        for (p, c) in cs.iter().enumerate() {
            for (e, x) in &c.terms {
                let mut ne = *e;
                ne.0[k] += p as u16;
                ts.push((ne, x.clone()));
            }
        }
        Self::from_terms(ts)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &MPoly) -> MPoly {
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        if self.is_constant() || o.is_constant() {
            return MPoly::one();
        }
        if self.terms.len() == 1 || o.terms.len() == 1 {
            let mut e = self.terms[0].0;
            for (x, _) in self.terms.iter().chain(o.terms.iter()) {
                e = e.meet(x);
            }
            return MPoly::monomial(e, Rational::one());
        }
        if self == o {
            return self.monic();
        }
        if certainly_coprime(self, o) {
            return MPoly::one();
        }
        let mask = self.var_mask() | o.var_mask();
        let v = 31 - mask.leading_zeros() as usize;
        let (ina, inb) = (self.var_mask() >> v & 1 == 1, o.var_mask() >> v & 1 == 1);
        if !ina || !inb {
            let (with, without) = if ina { (self, o) } else { (o, self) };
            let mut g = without.clone();
            for c in with.to_univariate(v) {
                if g.is_constant() {
                    break;
                }
                g = g.gcd(&c);
            }
            return g.monic();
        }
        let a = self.to_univariate(v);
        let b = o.to_univariate(v);
        let ca = content(&a);
        let cb = content(&b);
        let g = ca.gcd(&cb);
        let mut pa = primitive(&a, &ca);
        let mut pb = primitive(&b, &cb);
        if pa.len() < pb.len() {
            std::mem::swap(&mut pa, &mut pb);
        }
        loop {
            let r = prem(&pa, &pb);
            if r.is_empty() {
                break;
            }
            if r.len() == 1 {
                // constant in v: the primitive parts are coprime
                pb = vec![MPoly::one()];
                break;
            }
            let cr = content(&r);
            pa = pb;
            pb = primitive(&r, &cr);
        }
        let cpb = content(&pb);
        let h = MPoly::from_univariate(v, &primitive(&pb, &cpb));
        g.mul(&h).monic()
    }
}

/// Euclid over the rationals; coefficients from the constant term up.
fn univariate_gcd_degree(mut a: Vec<Rational>, mut b: Vec<Rational>) -> usize {
    let strip = |v: &mut Vec<Rational>| {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    };
    strip(&mut a);
    strip(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let lb = b.last().unwrap().inv().unwrap();
        while a.len() >= b.len() {
            let k = a.len() - b.len();
            let t = a.last().unwrap() * &lb;
            for (j, bj) in b.iter().enumerate() {
                a[k + j] = &a[k + j] - &(&t * bj);
            }
            a.pop();
            strip(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True when `gcd(a, b) = 1` is certified by specialising all but one
/// variable at a time. A specialisation with nonzero leading coefficient
/// preserves the degree of the gcd in the remaining variable, so a
/// constant specialised gcd bounds that degree by zero. `false` only means
/// the test was inconclusive.
fn certainly_coprime(a: &MPoly, b: &MPoly) -> bool {
    const SAMPLES: [i64; 7] = [2, -3, 5, 7, -11, 13, 17];
    let common = a.var_mask() & b.var_mask();
    for v in (0..MAX_VARS).filter(|v| common >> v & 1 == 1) {
        let ua = a.to_univariate(v);
        let ub = b.to_univariate(v);
        let mut settled = false;
        for attempt in 0..3 {
            let point: Vec<Rational> = (0..MAX_VARS)
                .map(|k| {
                    Rational::from_int(SAMPLES[(k + 3 * attempt) % SAMPLES.len()] + attempt as i64)
                })
                .collect();
            if ua.last().unwrap().eval(&point).is_zero() {
                continue;
            }
            let sa = ua.iter().map(|c| c.eval(&point)).collect();
            let sb = ub.iter().map(|c| c.eval(&point)).collect();
            if univariate_gcd_degree(sa, sb) > 0 {
                return false;
            }
            settled = true;
            break;
        }
        if !settled {
            return false;
        }
    }
    true
}

fn content(cs: &[MPoly]) -> MPoly {
    let mut g = MPoly::zero();
    for c in cs {
        if c.is_zero() {
            continue;
        }
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Primitive part, scaled so the top coefficient has leading coefficient 1;
/// without the scaling rational coefficients grow exponentially in the PRS.
fn primitive(cs: &[MPoly], cont: &MPoly) -> Vec<MPoly> {
    let out: Vec<MPoly> = cs
        .iter()
        .map(|c| c.div_exact(cont).expect("content divides coefficients"))
        .collect();
    match out.iter().rev().find(|c| !c.is_zero()) {
        Some(top) => {
            let k = top.leading_coeff().inv().unwrap();
            out.iter().map(|c| c.scale(&k)).collect()
        }
        None => out,
    }
}

fn trim(v: &mut Vec<MPoly>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Pseudo-remainder of univariate polynomials with polynomial coefficients.
fn prem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let mut r: Vec<MPoly> = a.to_vec();
    trim(&mut r);
    let n = b.len() - 1;
    let lb = &b[n];
    while r.len() > n {
        let d = r.len() - 1;
        let lr = r[d].clone();
        for x in r.iter_mut() {
            *x = x.mul(lb);
        }
        for (j, bj) in b.iter().enumerate() {
            let t = lr.mul(bj);
            r[d - n + j] = r[d - n + j].sub(&t);
        }
        trim(&mut r);
    }
    r
}

/// Prints with `u[i]` for base variables and `C[k]` for parameters.
pub fn var_name(k: usize) -> String {
    if k < MAX_U {
        format!("u[{}]", k + 1)
    } else {
        format!("C[{}]", k - PARAM_BASE + 1)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors = Vec::new();
            for (k, &x) in e.0.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(var_name(k)),
                    _ => factors.push(format!("{}^{}", var_name(k), x)),
                }
            }
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(k: usize) -> MPoly {
        MPoly::var(k)
    }

    fn c(n: i64) -> MPoly {
        MPoly::constant(Rational::from_int(n))
    }

    #[test]
    fn arithmetic_and_order() {
        let p = x(0).add(&x(1)).mul(&x(0).sub(&x(1)));
        assert_eq!(p, x(0).mul(&x(0)).sub(&x(1).mul(&x(1))));
        assert_eq!(p.to_string(), "u[1]^2 - u[2]^2");
        assert_eq!(p.partial(0), x(0).scale(&Rational::from_int(2)));
    }

    #[test]
    fn exact_division() {
        let a = x(0).add(&x(1));
        let b = x(0).sub(&c(3));
        let p = a.mul(&b).mul(&b);
        assert_eq!(p.div_exact(&b).unwrap(), a.mul(&b));
        assert!(p.div_exact(&x(2)).is_none());
    }

    #[test]
    fn gcd_multivariate() {
        let a = x(0).add(&x(1));
        let b = x(0).mul(&x(2)).sub(&c(1));
        let k = x(1).mul(&x(1)).add(&x(2));
        let p = a.mul(&b).mul(&k);
        let q = a.mul(&k).mul(&x(0).add(&c(5)));
        assert_eq!(p.gcd(&q), a.mul(&k).monic());
        assert!(b.gcd(&x(0).add(&c(5))).is_one());
    }

    #[test]
    fn gcd_with_monomials() {
        let p = x(0).mul(&x(0)).mul(&x(1)).add(&x(0).mul(&x(1)).mul(&x(1)));
        assert_eq!(p.gcd(&x(0).mul(&x(0))), x(0));
        assert_eq!(p.gcd(&x(0).mul(&x(1))), x(0).mul(&x(1)));
    }

    #[test]
    fn gcd_rational_coefficients() {
        let a = x(0).scale(&Rational::new(1, 2)).add(&c(1));
        let p = a.mul(&x(1).add(&c(2)));
        let q = a.mul(&x(1).sub(&c(2)));
        assert_eq!(p.gcd(&q), a.monic());
    }
    #[test]
    fn coprimality_fast_path() {
        let f1 = x(0).mul(&x(0)).add(&x(0).mul(&x(1))).add(&c(1));
        let f2 = x(1).mul(&x(1)).sub(&x(0)).add(&c(2));
        assert!(certainly_coprime(&f1.pow(3), &f2.pow(2)));
        assert!(!certainly_coprime(&f1.mul(&f2), &f2.pow(2)));
        assert_eq!(
            univariate_gcd_degree(
                vec![Rational::from_int(-1), Rational::zero(), Rational::one()],
                vec![Rational::one(), Rational::one()]
            ),
            1
        );
    }

    #[test]
    fn gcd_of_high_powers() {
        let f1 = x(0)
            .mul(&x(0))
            .scale(&Rational::from_int(-2))
            .add(&x(0).mul(&x(1)))
            .add(&x(1))
            .add(&c(1));
        let f2 = x(0)
            .mul(&x(0))
            .add(&x(0).mul(&x(1)).scale(&Rational::new(2, 3)))
            .sub(&c(3));
        let a = f1.pow(3).mul(&f2.pow(2)).mul(&x(0).add(&x(1)));
        let b = f1.pow(2).mul(&f2.pow(4));
        assert_eq!(a.gcd(&b), f1.pow(2).mul(&f2.pow(2)).monic());
    }
}

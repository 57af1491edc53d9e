use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Jet coordinate `(i, s)`: component `i` (from 1), derivative order `s`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Jet {
    pub i: u8,
    pub s: u16,
}

impl Jet {
    pub fn new(i: usize, s: usize) -> Self {
        Jet {
            i: i as u8,
            s: s as u16,
        }
    }

    pub fn next(self) -> Self {
        Jet {
            i: self.i,
            s: self.s + 1,
        }
    }

    pub fn idx(self) -> usize {
        self.i as usize
    }
}

/// A generator of the jet ring: `u^{i,s}` or `θ_i^s`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Gen {
    U(Jet),
    Th(Jet),
}

impl Gen {
    pub fn u(i: usize, s: usize) -> Self {
        Gen::U(Jet::new(i, s))
    }

    pub fn th(i: usize, s: usize) -> Self {
        Gen::Th(Jet::new(i, s))
    }

    pub fn jet(self) -> Jet {
        match self {
            Gen::U(j) | Gen::Th(j) => j,
        }
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Gen::Th(_))
    }

    pub fn with_order(self, s: usize) -> Self {
        match self {
            Gen::U(j) => Gen::u(j.idx(), s),
            Gen::Th(j) => Gen::th(j.idx(), s),
        }
    }
}

pub type EvenPart = SmallVec<[(Jet, i32); 4]>;
pub type OddPart = SmallVec<[Jet; 4]>;
pub type LogPart = SmallVec<[(u8, u32); 1]>;

/// Monomial in the jet generators of positive order (even, with integer
/// exponents), odd generators in increasing `(i, s)` order, and logarithms
/// `log u^{i,1}` (only in the extended ring).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Mono {
    pub(crate) even: EvenPart,
    pub(crate) odd: OddPart,
    pub(crate) logs: LogPart,
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        let (pa, da) = self.bidegree();
        let (pb, db) = o.bidegree();
        (pa, da)
            .cmp(&(pb, db))
            .then_with(|| self.odd.cmp(&o.odd))
            .then_with(|| self.even.cmp(&o.even))
            .then_with(|| self.logs.cmp(&o.logs))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Mono {
    pub fn one() -> Self {
        Mono::default()
    }

    /// `u^{i,s}` for `s >= 1`.
    pub fn u(j: Jet) -> Self {
        assert!(j.s >= 1, "u^{{i,0}} lives in the coefficients");
        let mut m = Mono::one();
        m.even.push((j, 1));
        m
    }

    pub fn th(j: Jet) -> Self {
        let mut m = Mono::one();
        m.odd.push(j);
        m
    }

    pub fn log(i: u8) -> Self {
        let mut m = Mono::one();
        m.logs.push((i, 1));
        m
    }

    pub fn even(&self) -> &[(Jet, i32)] {
        &self.even
    }

    pub fn odd(&self) -> &[Jet] {
        &self.odd
    }

    pub fn logs(&self) -> &[(u8, u32)] {
        &self.logs
    }

    pub fn is_one(&self) -> bool {
        self.even.is_empty() && self.odd.is_empty() && self.logs.is_empty()
    }

    pub fn theta_degree(&self) -> i32 {
        self.odd.len() as i32
    }

    pub fn x_degree(&self) -> i32 {
        let e: i32 = self.even.iter().map(|(j, k)| j.s as i32 * k).sum();
        let o: i32 = self.odd.iter().map(|j| j.s as i32).sum();
        e + o
    }

    /// `(deg_θ, deg_x)`.
    pub fn bidegree(&self) -> (i32, i32) {
        (self.theta_degree(), self.x_degree())
    }

    pub fn parity(&self) -> u8 {
        (self.odd.len() % 2) as u8
    }

    pub fn exponent(&self, j: Jet) -> i32 {
        self.even
            .iter()
            .find(|t| t.0 == j)
            .map(|t| t.1)
            .unwrap_or(0)
    }

    pub fn log_exponent(&self, i: u8) -> u32 {
        self.logs
            .iter()
            .find(|t| t.0 == i)
            .map(|t| t.1)
            .unwrap_or(0)
    }

    pub fn has_negative_powers(&self) -> bool {
        self.even.iter().any(|t| t.1 < 0)
    }

    pub fn is_polynomial(&self) -> bool {
        self.logs.is_empty() && !self.has_negative_powers()
    }

    /// Multiplies in `u^j` to the power `delta` (may be negative).
    pub fn adjust_even(&mut self, j: Jet, delta: i32) {
        match self.even.binary_search_by(|t| t.0.cmp(&j)) {
            Ok(k) => {
                self.even[k].1 += delta;
                if self.even[k].1 == 0 {
                    self.even.remove(k);
                }
            }
            Err(k) => {
                if delta != 0 {
                    self.even.insert(k, (j, delta));
                }
            }
        }
    }

    pub fn adjust_log(&mut self, i: u8, delta: i32) {
        match self.logs.binary_search_by(|t| t.0.cmp(&i)) {
            Ok(k) => {
                let v = self.logs[k].1 as i32 + delta;
                assert!(v >= 0);
                if v == 0 {
                    self.logs.remove(k);
                } else {
                    self.logs[k].1 = v as u32;
                }
            }
            Err(k) => {
                assert!(delta >= 0);
                if delta > 0 {
                    self.logs.insert(k, (i, delta as u32));
                }
            }
        }
    }

    /// Product with its sign, or `None` when an odd generator repeats.
    pub fn mul(&self, o: &Mono) -> Option<(Mono, i32)> {
        let (odd, sign) = merge_odd(&self.odd, &o.odd)?;
        let mut m = Mono {
            even: self.even.clone(),
            odd,
            logs: self.logs.clone(),
        };
        for (j, k) in &o.even {
            m.adjust_even(*j, *k);
        }
        for (i, k) in &o.logs {
            m.adjust_log(*i, *k as i32);
        }
        Some((m, sign))
    }

    /// Removes the odd generator at position `k`; sign of moving it to the front.
    pub fn remove_odd(&self, k: usize) -> (Mono, i32) {
        let mut m = self.clone();
        m.odd.remove(k);
        (m, if k % 2 == 0 { 1 } else { -1 })
    }

    /// Replaces the odd generator at position `k` by `j`, re-sorting.
    pub fn replace_odd(&self, k: usize, j: Jet) -> Option<(Mono, i32)> {
        let mut m = self.clone();
        m.odd.remove(k);
        let q = match m.odd.binary_search(&j) {
            Ok(_) => return None,
            Err(q) => q,
        };
        m.odd.insert(q, j);
        Some((m, if (k + q) % 2 == 0 { 1 } else { -1 }))
    }

    pub fn position_odd(&self, j: Jet) -> Option<usize> {
        self.odd.binary_search(&j).ok()
    }
}

/// Merges two sorted odd lists, returning the sign of the reordering.
pub fn merge_odd(a: &[Jet], b: &[Jet]) -> Option<(OddPart, i32)> {
    let mut out = OddPart::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut swaps = 0usize;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                // b[j] moves past the remaining elements of a
                swaps += a.len() - i;
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => return None,
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, if swaps % 2 == 0 { 1 } else { -1 }))
}

/// Sorts an arbitrary sequence of odd generators with sign.
pub fn sort_odd(v: &[Jet]) -> Option<(OddPart, i32)> {
    let mut w: OddPart = v.iter().copied().collect();
    let mut sign = 1;
    for a in 1..w.len() {
        let mut b = a;
        while b > 0 && w[b - 1] > w[b] {
            w.swap(b - 1, b);
            sign = -sign;
            b -= 1;
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((w, sign))
}

pub fn fmt_u(j: Jet) -> String {
    format!("u[{},{}]", j.i, j.s)
}

pub fn fmt_th(j: Jet) -> String {
    format!("th[{},{}]", j.i, j.s)
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, k) in &self.even {
            if *k == 1 {
                parts.push(fmt_u(*j));
            } else if *k < 0 {
                parts.push(format!("{}^({})", fmt_u(*j), k));
            } else {
                parts.push(format!("{}^{}", fmt_u(*j), k));
            }
        }
        for (i, k) in &self.logs {
            if *k == 1 {
                parts.push(format!("L[{i}]"));
            } else {
                parts.push(format!("L[{i}]^{k}"));
            }
        }
        for j in &self.odd {
            parts.push(fmt_th(*j));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

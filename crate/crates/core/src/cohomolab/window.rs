use std::collections::BTreeSet;
use std::fmt;

pub type Bidegree = (usize, usize);

/// The index sets `I_1, I_2, I_3` of the vanishing statement for
/// `H(Ω̄, D̃_0, D̃_1)` and the two windows outside which `H(Ω[λ], ∂_λ)`
/// vanishes. Pairs are stored as `(p, d)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BidegreeWindow {
    pub n: usize,
    pub i1: BTreeSet<Bidegree>,
    pub i2: BTreeSet<Bidegree>,
    pub i3: BTreeSet<Bidegree>,
    pub case1: BTreeSet<Bidegree>,
    pub case2: BTreeSet<Bidegree>,
}

fn band(
    ds: impl Iterator<Item = usize>,
    lo: impl Fn(usize) -> usize,
    hi: impl Fn(usize) -> usize,
) -> BTreeSet<Bidegree> {
    let mut out = BTreeSet::new();
    for d in ds {
        for p in lo(d)..=hi(d) {
            out.insert((p, d));
        }
    }
    out
}

impl BidegreeWindow {
    pub fn new(n: usize) -> Self {
        BidegreeWindow {
            n,
            i1: band(0..=1, |d| d + 1, |d| d + n + 1),
            i2: band(2..=n, |d| d, |d| d + n + 1),
            i3: band(n + 1..=n + 3, |d| d, |d| d + n),
            case1: band(0..=n, |d| d + 1, |d| d + n + 1),
            case2: band(2..=n + 3, |d| d, |d| d + n),
        }
    }

    /// `I = I_1 ∪ I_2 ∪ I_3`.
    pub fn index_set(&self) -> BTreeSet<Bidegree> {
        self.i1
            .iter()
            .chain(&self.i2)
            .chain(&self.i3)
            .copied()
            .collect()
    }

    pub fn in_index_set(&self, p: usize, d: usize) -> bool {
        let k = (p, d);
        self.i1.contains(&k) || self.i2.contains(&k) || self.i3.contains(&k)
    }

    pub fn guaranteed_zero(&self, p: usize, d: usize) -> bool {
        d >= 2 && !self.in_index_set(p, d) && !self.in_index_set(p + 1, d)
    }

    pub fn classify(&self, p: usize, d: usize) -> WindowCase {
        match (self.case1.contains(&(p, d)), self.case2.contains(&(p, d))) {
            (true, true) => WindowCase::Both,
            (true, false) => WindowCase::Case1,
            (false, true) => WindowCase::Case2,
            (false, false) => WindowCase::Outside,
        }
    }
}

/// Position of a bidegree relative to the two windows. The windows overlap
/// for `n ≥ 2`, e.g. at `(3, 2)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WindowCase {
    Case1,
    Case2,
    Both,
    Outside,
}

impl WindowCase {
    /// `H^p_d(Ω[λ], ∂_λ)` is known to vanish.
    pub fn vanishes(self) -> bool {
        self == WindowCase::Outside
    }
}

impl fmt::Display for WindowCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WindowCase::Case1 => "case1",
            WindowCase::Case2 => "case2",
            WindowCase::Both => "case1+case2",
            WindowCase::Outside => "outside",
        })
    }
}

/// `d ≥ 2` and neither `(p, d)` nor `(p+1, d)` lies in the index set.
pub fn vbh_guaranteed_zero(n: usize, p: usize, d: usize) -> bool {
    BidegreeWindow::new(n).guaranteed_zero(p, d)
}

pub fn omega_lambda_window(n: usize, p: usize, d: usize) -> WindowCase {
    BidegreeWindow::new(n).classify(p, d)
}

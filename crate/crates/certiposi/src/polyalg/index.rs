use serde::{Deserialize, Serialize};
use std::fmt;

/// Exponent vector α ∈ ℕⁿ. Ordering is lexicographic on the entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// |α|.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// C(a, b) for the small arguments used in index arithmetic.
pub(crate) fn small_binom(a: u64, b: u64) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b as u128 {
        acc = acc * (a as u128 - i) / (i + 1);
    }
    acc as u64
}

/// Dense lexicographic layout of {α ∈ ℕⁿ : |α| ≤ m}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Layout {
    pub n: usize,
    pub m: u32,
}

impl Layout {
    pub fn new(n: usize, m: u32) -> Self {
        Layout { n, m }
    }

    /// Number of vectors in ℕᵏ with sum ≤ r.
    pub fn count(k: usize, r: u32) -> usize {
        small_binom(r as u64 + k as u64, k as u64) as usize
    }

    pub fn len(&self) -> usize {
        Self::count(self.n, self.m)
    }

    pub fn rank(&self, a: &[u32]) -> usize {
        debug_assert_eq!(a.len(), self.n);
        let mut rem = self.m as u64;
        let mut r = 0u64;
        for (i, &ai) in a.iter().enumerate() {
            let k = (self.n - i - 1) as u64;
            let ai = ai as u64;
            if ai > 0 {
                r += small_binom(rem + k + 1, k + 1) - small_binom(rem - ai + k + 1, k + 1);
            }
            rem -= ai;
        }
        r as usize
    }

    /// All indices in rank order.
    pub fn indices(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::with_capacity(self.len());
        let mut cur = vec![0u32; self.n];
        fn rec(pos: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if pos == cur.len() {
                out.push(cur.clone());
                return;
            }
            for v in 0..=rem {
                cur[pos] = v;
                rec(pos + 1, rem - v, cur, out);
            }
            cur[pos] = 0;
        }
        rec(0, self.m, &mut cur, &mut out);
        out
    }

    /// Ranks of every axis-parallel line {α + j·e_axis : 0 ≤ j ≤ m − |α|} with α_axis = 0.
    pub fn lines(&self, axis: usize, indices: &[Vec<u32>]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for a in indices.iter().filter(|a| a[axis] == 0) {
            let len = self.m - a.iter().sum::<u32>();
            let mut b = a.clone();
            let mut line = Vec::with_capacity(len as usize + 1);
            for j in 0..=len {
                b[axis] = j;
                line.push(self.rank(&b));
            }
            out.push(line);
        }
        out
    }
}

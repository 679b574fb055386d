//! Brute-force ground truth over all sequences `n-1 ≥ d₁ ≥ … ≥ dₙ ≥ 0`.
//!
//! Everything here is exhaustive and only meant for small `n`; it provides
//! the independent reference the engine and the random-walk code are
//! checked against.

mod ballot;
mod walkmap;

use num_integer::binomial;

use crate::exec::Exec;

pub use ballot::{
    ballot_count, double_factorial_odd, explore_ties, random_sum_distinct, sum_distinct,
    BallotError, TieExploration,
};
pub use walkmap::{to_walk, MappedWalk};

/// A non-increasing sequence with entries in `0..=n-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeSequence(Vec<u32>);

impl DegreeSequence {
    /// Returns `None` unless `n-1 ≥ d₁ ≥ … ≥ dₙ ≥ 0` with `n ≥ 1`.
    pub fn new(d: Vec<u32>) -> Option<Self> {
        let n = d.len() as u32;
        if n == 0 || d[0] > n - 1 || d.windows(2).any(|w| w[0] < w[1]) {
            return None;
        }
        Some(DegreeSequence(d))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree_sum(&self) -> u64 {
        self.0.iter().map(|&x| u64::from(x)).sum()
    }

    pub fn conjugate(&self) -> ConjugateData {
        ConjugateData::of(self)
    }
}

/// Derived quantities used by the dominating condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugateData {
    /// `d'_i = #{j : d_j ≥ i}` for `i = 1..=n`.
    pub d_prime: Vec<u32>,
    /// `s_i = (n-1) - d_i`.
    pub s: Vec<i64>,
    /// `s'_i = n - d'_i`.
    pub s_prime: Vec<i64>,
    /// Largest `j` with `d_j ≥ j` (0 if none).
    pub ell: usize,
}

impl ConjugateData {
    fn of(d: &DegreeSequence) -> Self {
        let d = d.as_slice();
        let n = d.len();
        let d_prime: Vec<u32> = (1..=n as u32)
            .map(|i| d.iter().take_while(|&&x| x >= i).count() as u32)
            .collect();
        let s = d.iter().map(|&x| n as i64 - 1 - i64::from(x)).collect();
        let s_prime = d_prime.iter().map(|&x| n as i64 - i64::from(x)).collect();
        let ell = d
            .iter()
            .enumerate()
            .take_while(|&(j, &x)| x as usize > j)
            .count();
        ConjugateData {
            d_prime,
            s,
            s_prime,
            ell,
        }
    }
}

/// Outcome of the graphicality test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Graphicality {
    /// `Σ_{i≤k} s_i ≥ Σ_{i≤k} s'_i` for all `k ≤ ℓ`.
    pub dominates: bool,
    pub even: bool,
}

impl Graphicality {
    pub fn is_graphic(self) -> bool {
        self.dominates && self.even
    }
}

/// Erdős–Gallai in dominating-condition form.
pub fn is_graphic(d: &DegreeSequence) -> Graphicality {
    let c = d.conjugate();
    let mut lhs = 0i64;
    let mut rhs = 0i64;
    let mut dominates = true;
    for k in 0..c.ell {
        lhs += c.s[k];
        rhs += c.s_prime[k];
        if lhs < rhs {
            dominates = false;
            break;
        }
    }
    Graphicality {
        dominates,
        even: d.degree_sum().is_multiple_of(2),
    }
}

/// Havel–Hakimi: repeatedly connect the largest-degree vertex to the next
/// largest ones.
pub fn havel_hakimi(d: &DegreeSequence) -> bool {
    let mut rest: Vec<u32> = d.as_slice().to_vec();
    loop {
        rest.sort_unstable_by(|a, b| b.cmp(a));
        while rest.last() == Some(&0) {
            rest.pop();
        }
        let Some((&first, tail)) = rest.split_first() else {
            return true;
        };
        let k = first as usize;
        if k > tail.len() {
            return false;
        }
        let mut next = tail.to_vec();
        for x in &mut next[..k] {
            if *x == 0 {
                return false;
            }
            *x -= 1;
        }
        rest = next;
    }
}

/// Iterator over every sequence of length `n`, in decreasing lexicographic
/// order starting from `(n-1, …, n-1)`.
#[derive(Clone, Debug)]
pub struct Sequences {
    current: Option<Vec<u32>>,
    /// Entries at index < `fixed` never change (used to split work by head).
    fixed: usize,
}

impl Iterator for Sequences {
    type Item = DegreeSequence;

    fn next(&mut self) -> Option<DegreeSequence> {
        let cur = self.current.take()?;
        let out = DegreeSequence(cur.clone());
        // decrement the rightmost positive free entry, reset everything after it
        let mut next = cur;
        if let Some(i) = (self.fixed..next.len()).rev().find(|&i| next[i] > 0) {
            next[i] -= 1;
            let v = next[i];
            for x in &mut next[i + 1..] {
                *x = v;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

/// All `C(2n-1, n-1)` sequences of length `n`.
pub fn enumerate(n: usize) -> Sequences {
    assert!(n >= 1, "sequence length must be positive");
    Sequences {
        current: Some(vec![n as u32 - 1; n]),
        fixed: 0,
    }
}

/// The sequences of length `n` whose first entry is `head`.
pub fn enumerate_with_head(n: usize, head: u32) -> Sequences {
    assert!(n >= 1 && head < n as u32);
    Sequences {
        current: Some(vec![head; n]),
        fixed: 1,
    }
}

/// `C(2n-1, n-1)`.
pub fn sequence_count(n: u64) -> u64 {
    binomial(2 * n - 1, n - 1)
}

/// Exhaustive counts for one length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteCounts {
    /// Graphic sequences.
    pub g: u64,
    /// Dominating with odd sum.
    pub h: u64,
    /// All dominating sequences, `g + h`.
    pub d: u64,
}

/// `(G, H, D)` by testing every sequence of length `n`. Work is split by the
/// first entry and run under `exec`.
pub fn brute_counts_with(n: usize, exec: Exec) -> BruteCounts {
    let parts = exec.map(n, |head| {
        let mut g = 0;
        let mut h = 0;
        for d in enumerate_with_head(n, head as u32) {
            let t = is_graphic(&d);
            if t.dominates {
                if t.even {
                    g += 1;
                } else {
                    h += 1;
                }
            }
        }
        (g, h)
    });
    let (g, h) = parts
        .into_iter()
        .fold((0, 0), |(g, h), (a, b)| (g + a, h + b));
    BruteCounts { g, h, d: g + h }
}

pub fn brute_counts(n: usize) -> BruteCounts {
    brute_counts_with(n, Exec::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(d: &[u32]) -> DegreeSequence {
        DegreeSequence::new(d.to_vec()).unwrap()
    }

    #[test]
    fn rejects_invalid_sequences() {
        assert!(DegreeSequence::new(vec![]).is_none());
        assert!(DegreeSequence::new(vec![1]).is_none());
        assert!(DegreeSequence::new(vec![0, 1]).is_none());
        assert!(DegreeSequence::new(vec![3, 1, 1]).is_none());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate(1).count(), 1);
        let two: Vec<_> = enumerate(2).map(|d| d.as_slice().to_vec()).collect();
        assert_eq!(two, vec![vec![1, 1], vec![1, 0], vec![0, 0]]);
        assert_eq!(enumerate(3).count(), 10);
        for n in 1..=9 {
            assert_eq!(enumerate(n).count() as u64, sequence_count(n as u64));
            let by_head: usize = (0..n as u32)
                .map(|h| enumerate_with_head(n, h).count())
                .sum();
            assert_eq!(by_head, enumerate(n).count());
        }
    }

    #[test]
    fn enumeration_has_no_duplicates() {
        let all: std::collections::HashSet<_> = enumerate(7).collect();
        assert_eq!(all.len() as u64, sequence_count(7));
        assert!(all
            .iter()
            .all(|d| DegreeSequence::new(d.as_slice().to_vec()).is_some()));
    }

    #[test]
    fn graphicality_examples() {
        let t = is_graphic(&seq(&[2, 1, 1]));
        assert!(t.dominates && t.even);
        let t = is_graphic(&seq(&[2, 2, 0]));
        assert!(!t.dominates && t.even);
        let t = is_graphic(&seq(&[1, 1, 1]));
        assert!(t.dominates && !t.even);
        assert!(havel_hakimi(&seq(&[1, 1])));
        assert!(!havel_hakimi(&seq(&[2, 2, 0])));
        assert!(havel_hakimi(&seq(&[0])));
    }

    #[test]
    fn conjugate_data_example() {
        let c = seq(&[2, 1, 1]).conjugate();
        assert_eq!(c.d_prime, vec![3, 1, 0]);
        assert_eq!(c.s, vec![0, 1, 1]);
        assert_eq!(c.s_prime, vec![0, 2, 3]);
        assert_eq!(c.ell, 1);
        assert_eq!(seq(&[0, 0]).conjugate().ell, 0);
    }

    #[test]
    fn erdos_gallai_agrees_with_havel_hakimi() {
        for n in 1..=10 {
            for d in enumerate(n) {
                assert_eq!(is_graphic(&d).is_graphic(), havel_hakimi(&d), "{d:?}");
            }
        }
    }

    #[test]
    fn brute_counts_small() {
        assert_eq!(brute_counts(1), BruteCounts { g: 1, h: 0, d: 1 });
        assert_eq!(brute_counts(2), BruteCounts { g: 2, h: 0, d: 2 });
        assert_eq!(brute_counts(3), BruteCounts { g: 4, h: 1, d: 5 });
        assert_eq!(
            brute_counts_with(8, Exec::Sequential),
            brute_counts_with(8, Exec::Parallel)
        );
    }
}

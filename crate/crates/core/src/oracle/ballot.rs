//! Signed-permutation ballot counts.
//!
//! For positive `x`, counts the pairs `(σ, s) ∈ Sₙ × {−1, 1}ⁿ` whose partial
//! sums `Σ_{i≤k} s_i x_{σ(i)}` are all non-negative. The count is at least
//! `(2n−1)!!` and equals it when all subset sums of `x` are distinct.

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use rand::Rng;
use thiserror::Error;

pub const MAX_BALLOT_LEN: usize = 7;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BallotError {
    #[error("ballot count supports at most {MAX_BALLOT_LEN} entries, got {0}")]
    TooLong(usize),
    #[error("entry {0} is not strictly positive")]
    NotPositive(usize),
}

/// `(2n−1)!! = 1·3·5⋯(2n−1)`, with `(−1)!! = 1`.
pub fn double_factorial_odd(n: u32) -> u64 {
    (1..=u64::from(n)).map(|k| 2 * k - 1).product()
}

pub fn ballot_count(x: &[Rational64]) -> Result<u64, BallotError> {
    if x.len() > MAX_BALLOT_LEN {
        return Err(BallotError::TooLong(x.len()));
    }
    if let Some(i) = x.iter().position(|v| !v.is_positive()) {
        return Err(BallotError::NotPositive(i));
    }
    let mut used = vec![false; x.len()];
    Ok(extend(x, &mut used, x.len(), Rational64::zero()))
}

// Depth-first over partial (σ, s); a prefix with negative sum is dead.
fn extend(x: &[Rational64], used: &mut [bool], remaining: usize, sum: Rational64) -> u64 {
    if remaining == 0 {
        return 1;
    }
    let mut total = 0;
    for i in 0..x.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        for next in [sum + x[i], sum - x[i]] {
            if !next.is_negative() {
                total += extend(x, used, remaining - 1, next);
            }
        }
        used[i] = false;
    }
    total
}

/// Whether distinct index subsets always have distinct sums.
pub fn sum_distinct(x: &[Rational64]) -> bool {
    let mut sums: Vec<Rational64> = (0u32..1 << x.len())
        .map(|mask| {
            x.iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, v)| *v)
                .sum()
        })
        .collect();
    sums.sort_unstable();
    sums.windows(2).all(|w| w[0] != w[1])
}

fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational64 {
    Rational64::new(rng.random_range(1..=60), rng.random_range(1..=12))
}

/// A random sum-distinct vector of small-denominator rationals.
pub fn random_sum_distinct<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Rational64> {
    loop {
        let x: Vec<Rational64> = (0..n).map(|_| random_rational(rng)).collect();
        if sum_distinct(&x) {
            return x;
        }
    }
}

/// Summary of a search over vectors with repeated entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TieExploration {
    pub n: usize,
    pub trials: usize,
    pub lower_bound: u64,
    pub all_equal: u64,
    pub max_seen: u64,
    pub argmax: Vec<Rational64>,
}

impl TieExploration {
    /// Whether no sampled vector beat the all-equal one.
    pub fn all_equal_is_max(&self) -> bool {
        self.max_seen <= self.all_equal
    }
}

/// Samples vectors whose entries come from a pool of at most three values,
/// so ties are common, and records the largest count seen.
pub fn explore_ties<R: Rng + ?Sized>(n: usize, trials: usize, rng: &mut R) -> TieExploration {
    let ones = vec![Rational64::from_integer(1); n];
    let all_equal = ballot_count(&ones).expect("valid length");
    let mut max_seen = all_equal;
    let mut argmax = ones;
    for _ in 0..trials {
        let pool: Vec<Rational64> = (0..3).map(|_| random_rational(rng)).collect();
        let x: Vec<Rational64> = (0..n)
            .map(|_| pool[rng.random_range(0..pool.len())])
            .collect();
        let c = ballot_count(&x).expect("valid length");
        if c > max_seen {
            max_seen = c;
            argmax = x;
        }
    }
    TieExploration {
        n,
        trials,
        lower_bound: double_factorial_odd(n as u32),
        all_equal,
        max_seen,
        argmax,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(p: i64, q: i64) -> Rational64 {
        Rational64::new(p, q)
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial_odd(0), 1);
        assert_eq!(double_factorial_odd(2), 3);
        assert_eq!(double_factorial_odd(3), 15);
        assert_eq!(double_factorial_odd(7), 135135);
    }

    #[test]
    fn small_examples() {
        assert_eq!(ballot_count(&[r(1, 1), r(3, 5)]).unwrap(), 3);
        assert!(ballot_count(&[r(1, 1), r(1, 1)]).unwrap() >= 3);
        assert_eq!(ballot_count(&[r(1, 1), r(2, 1), r(4, 1)]).unwrap(), 15);
        assert_eq!(ballot_count(&[]).unwrap(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            ballot_count(&[r(1, 1), r(0, 1)]),
            Err(BallotError::NotPositive(1))
        );
        assert_eq!(ballot_count(&[r(1, 1); 8]), Err(BallotError::TooLong(8)));
    }

    #[test]
    fn sum_distinctness() {
        assert!(sum_distinct(&[r(1, 1), r(2, 1), r(4, 1)]));
        assert!(!sum_distinct(&[r(1, 1), r(2, 1), r(3, 1)]));
        assert!(!sum_distinct(&[r(1, 2), r(1, 2)]));
    }

    #[test]
    fn equality_for_sum_distinct_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=5 {
            for _ in 0..20 {
                let x = random_sum_distinct(n, &mut rng);
                assert_eq!(
                    ballot_count(&x).unwrap(),
                    double_factorial_odd(n as u32),
                    "{x:?}"
                );
            }
        }
    }

    #[test]
    fn ties_never_fall_below_the_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 2..=5 {
            let e = explore_ties(n, 30, &mut rng);
            assert!(e.all_equal >= e.lower_bound);
            assert!(e.max_seen >= e.lower_bound);
        }
    }
}

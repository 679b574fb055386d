use num_bigint::BigInt;
use num_bigint::BigUint;
use num_integer::binomial;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{WalkError, WalkPath};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum WalkKind {
    /// Steps ±1 with probability 1/4 each, 0 with probability 1/2.
    Lazy,
    /// Steps ±1 with probability 1/2 each.
    Simple,
}

/// Uniform bridges of a fixed length.
///
/// A simple bridge of length `2n` is a uniform shuffle of `n` up-steps and
/// `n` down-steps. A lazy bridge of length `n` is read off a simple bridge
/// of length `2n` as `Y_i = U_{2i}/2`.
#[derive(Clone, Debug)]
pub struct BridgeSampler {
    n: usize,
    kind: WalkKind,
    rng: ChaCha8Rng,
    buf: Vec<i8>,
}

impl BridgeSampler {
    pub fn new(n: usize, kind: WalkKind, seed: u64) -> Self {
        let mut buf = vec![1i8; n];
        buf.extend(std::iter::repeat_n(-1i8, n));
        BridgeSampler {
            n,
            kind,
            rng: ChaCha8Rng::seed_from_u64(seed),
            buf,
        }
    }

    pub fn len(&self) -> usize {
        match self.kind {
            WalkKind::Lazy => self.n,
            WalkKind::Simple => 2 * self.n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn sample(&mut self) -> WalkPath {
        self.buf.shuffle(&mut self.rng);
        match self.kind {
            WalkKind::Simple => WalkPath::from_steps(self.buf.clone()),
            WalkKind::Lazy => WalkPath::from_steps(
                self.buf
                    .chunks_exact(2)
                    .map(|p| (p[0] + p[1]) / 2)
                    .collect(),
            ),
        }
    }
}

/// `P(N_n ≥ k)` where `N_n` is the number of returns to 0 (after time 0) of
/// a lazy bridge with `n` steps: `2^k C(2n−k, n) / C(2n, n)`.
pub fn returns_tail(n: u64, k: u64) -> Result<BigRational, WalkError> {
    if n == 0 || k > n {
        return Err(WalkError::Invalid(format!(
            "need 0 ≤ k ≤ n and n ≥ 1, got n={n}, k={k}"
        )));
    }
    let num = BigUint::from(1u8) << k as usize;
    let num = num * binomial(BigUint::from(2 * n - k), BigUint::from(n));
    let den = binomial(BigUint::from(2 * n), BigUint::from(n));
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, ToPrimitive};

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn tail_examples() {
        assert_eq!(returns_tail(2, 2).unwrap(), r(4, 6));
        for n in 1..20 {
            assert!(returns_tail(n, 0).unwrap().is_one());
            assert!(returns_tail(n, 1).unwrap().is_one());
        }
        assert!(returns_tail(3, 4).is_err());
    }

    #[test]
    fn tail_is_monotone_and_above_quadratic_bound() {
        for n in 1..60u64 {
            let mut prev = 1.0f64;
            for k in 0..=n {
                let t = returns_tail(n, k).unwrap().to_f64().unwrap();
                assert!(t <= prev + 1e-15);
                assert!(
                    t >= 1.0 - (k * k) as f64 / (2 * n) as f64 - 1e-12,
                    "n={n} k={k}"
                );
                prev = t;
            }
        }
    }

    #[test]
    fn samplers_produce_bridges() {
        let mut lazy = BridgeSampler::new(25, WalkKind::Lazy, 3);
        let mut simple = BridgeSampler::new(25, WalkKind::Simple, 3);
        for _ in 0..100 {
            let l = lazy.sample();
            assert_eq!(l.len(), 25);
            assert_eq!(l.end(), 0);
            let s = simple.sample();
            assert_eq!(s.len(), 50);
            assert_eq!(s.end(), 0);
            assert_eq!(s.zero_steps(), 0);
        }
    }

    #[test]
    fn lazy_bridge_return_law_matches_tail() {
        // frequency of N_n ≥ 3 for n = 6 vs the closed form
        let n = 6;
        let mut s = BridgeSampler::new(n, WalkKind::Lazy, 17);
        let trials = 40_000;
        let hits = (0..trials)
            .filter(|_| s.sample().positions().iter().filter(|&&y| y == 0).count() >= 3)
            .count();
        let p = returns_tail(n as u64, 3).unwrap().to_f64().unwrap();
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((hits as f64 / trials as f64 - p).abs() < 4.0 * se);
    }
}

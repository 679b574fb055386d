use std::collections::{BTreeMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{WalkError, WalkPath};
use crate::engine::decrease_cap;
use crate::exec::Exec;

pub const MAX_EXACT_STEPS: u32 = 40;
pub const DEFAULT_SHARDS: u32 = 64;

/// Conditioning on the final position of an `n`-step lazy walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EndCondition {
    Zero,
    ZeroOrMinusOne,
}

impl EndCondition {
    fn accepts(self, y: i64) -> bool {
        match self {
            EndCondition::Zero => y == 0,
            EndCondition::ZeroOrMinusOne => y == 0 || y == -1,
        }
    }
}

/// Weighted number of `n`-step lazy walks meeting `end`, with each walk
/// weighted by `2^{#zero steps}` (so the total weight is `4^n`).
fn end_weight(n: u64, end: EndCondition) -> BigUint {
    let two_n = BigUint::from(2 * n);
    let zero = binomial(two_n.clone(), BigUint::from(n));
    match end {
        EndCondition::Zero => zero,
        EndCondition::ZeroOrMinusOne => zero + binomial(two_n, BigUint::from(n + 1)),
    }
}

/// `P(A_1, …, A_n ≥ 0 | Y_n ∈ end)` for the lazy walk, exactly.
pub fn persistence_exact(n: u32, end: EndCondition) -> Result<BigRational, WalkError> {
    if n == 0 {
        return Err(WalkError::Invalid("persistence needs n ≥ 1".into()));
    }
    if n > MAX_EXACT_STEPS {
        return Err(WalkError::TooLarge {
            what: "persistence_exact",
            n: n.into(),
            max: MAX_EXACT_STEPS.into(),
        });
    }
    let mut states: BTreeMap<(i64, i64), BigUint> = BTreeMap::new();
    states.insert((0, 0), BigUint::from(1u8));
    for _ in 0..n {
        let mut next: BTreeMap<(i64, i64), BigUint> = BTreeMap::new();
        for ((y, a), w) in &states {
            for (dy, mult) in [(1i64, 1u8), (0, 2), (-1, 1)] {
                let y2 = y + dy;
                let a2 = a + y2;
                if a2 >= 0 {
                    *next.entry((y2, a2)).or_default() += w * BigUint::from(mult);
                }
            }
        }
        states = next;
    }
    let good: BigUint = states
        .iter()
        .filter(|((y, _), _)| end.accepts(*y))
        .map(|(_, w)| w)
        .sum();
    Ok(BigRational::new(
        BigInt::from(good),
        BigInt::from(end_weight(n.into(), end)),
    ))
}

/// A Monte Carlo estimate together with everything needed to reproduce it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub n: u64,
    pub end: EndCondition,
    pub samples: u64,
    pub seed: u64,
    pub shards: u32,
    pub successes: u64,
    pub estimate: f64,
    pub stderr: f64,
}

impl McEstimate {
    /// `n^{1/4} · q̂`.
    pub fn scaled(&self) -> f64 {
        (self.n as f64).powf(0.25) * self.estimate
    }
}

pub fn persistence_mc(n: u64, samples: u64, end: EndCondition, seed: u64) -> McEstimate {
    persistence_mc_with(n, samples, end, seed, DEFAULT_SHARDS, Exec::default())
}

/// Splits `samples` over `shards` independent ChaCha streams derived from
/// `seed`; the result depends on `(seed, shards)` but not on `exec`.
pub fn persistence_mc_with(
    n: u64,
    samples: u64,
    end: EndCondition,
    seed: u64,
    shards: u32,
    exec: Exec,
) -> McEstimate {
    assert!(n >= 1 && samples >= 1 && shards >= 1);
    let base = samples / u64::from(shards);
    let extra = samples % u64::from(shards);
    let counts = exec.map(shards as usize, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let m = base + u64::from((i as u64) < extra);
        (0..m).filter(|_| sample_survives(n, end, &mut rng)).count() as u64
    });
    let successes: u64 = counts.iter().sum();
    let p = successes as f64 / samples as f64;
    let stderr = if samples > 1 {
        (p * (1.0 - p) / (samples - 1) as f64).sqrt()
    } else {
        0.0
    };
    McEstimate {
        n,
        end,
        samples,
        seed,
        shards,
        successes,
        estimate: p,
        stderr,
    }
}

// Draws one lazy walk conditioned on its end value and reports whether every
// running area stays non-negative. The walk is generated as a uniformly
// ordered simple path of length 2n, drawing each step given the remaining
// up/down budget, and stops as soon as the outcome is decided.
fn sample_survives<R: Rng>(n: u64, end: EndCondition, rng: &mut R) -> bool {
    let minus_one = match end {
        EndCondition::Zero => false,
        // the end value −1 carries weight C(2n, n+1) against C(2n, n) for 0
        EndCondition::ZeroOrMinusOne => rng.random_range(0..2 * n + 1) < n,
    };
    let mut ups = if minus_one { n - 1 } else { n };
    let mut remaining = 2 * n;
    let mut u = 0i64;
    let mut area = 0i64;
    for i in 1..=n {
        for _ in 0..2 {
            if rng.random_range(0..remaining) < ups {
                ups -= 1;
                u += 1;
            } else {
                u -= 1;
            }
            remaining -= 1;
        }
        let y = u / 2;
        area += y;
        if area < 0 {
            return false;
        }
        // no completion can lose more than this much area
        if area >= decrease_cap((n - i) as u32, y).max(0) {
            return true;
        }
    }
    true
}

/// Result of checking the last-excursion sign flip on every short path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlipMapCheck {
    pub n: usize,
    /// Paths ending at −1 with non-negative areas.
    pub sources: usize,
    pub images_valid: bool,
    pub injective: bool,
}

impl FlipMapCheck {
    pub fn holds(&self) -> bool {
        self.images_valid && self.injective
    }
}

/// Applies the last-excursion flip to every `n`-step lazy path that ends at
/// −1 with non-negative areas, and checks that the images end at +1, keep
/// non-negative (pointwise larger) areas and are pairwise distinct.
pub fn check_flip_map(n: usize) -> FlipMapCheck {
    let mut images = HashSet::new();
    let mut sources = 0;
    let mut images_valid = true;
    let mut steps = vec![-1i8; n];
    loop {
        let w = WalkPath::from_steps(steps.clone());
        if w.end() == -1 && w.area_nonnegative() {
            sources += 1;
            let f = w.flip_last_excursion();
            let pointwise = f.areas().iter().zip(w.areas()).all(|(x, y)| *x >= y);
            images_valid &= f.end() == 1 && f.area_nonnegative() && pointwise;
            images.insert(f);
        }
        // ternary odometer over {-1, 0, 1}
        match steps.iter().rposition(|&s| s < 1) {
            Some(i) => {
                steps[i] += 1;
                steps[i + 1..].iter_mut().for_each(|s| *s = -1);
            }
            None => break,
        }
    }
    FlipMapCheck {
        n,
        sources,
        images_valid,
        injective: images.len() == sources,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_counts, sequence_count};
    use num_traits::{One, ToPrimitive};

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn exact_small_cases() {
        assert_eq!(persistence_exact(2, EndCondition::Zero).unwrap(), r(5, 6));
        assert!(persistence_exact(1, EndCondition::Zero).unwrap().is_one());
        assert!(persistence_exact(0, EndCondition::Zero).is_err());
        assert!(persistence_exact(MAX_EXACT_STEPS + 1, EndCondition::Zero).is_err());
    }

    #[test]
    fn exact_matches_dominating_fraction() {
        // P(A_1..A_{n-1} ≥ 0 | Y_{n-1} ∈ {0, −1}) is the dominating fraction
        for n in 2..=10usize {
            let p = persistence_exact(n as u32 - 1, EndCondition::ZeroOrMinusOne).unwrap();
            let d = brute_counts(n).d;
            assert_eq!(p, r(d as i64, sequence_count(n as u64) as i64), "n={n}");
        }
    }

    #[test]
    fn end_ratio_between_half_and_one() {
        for n in 1..=14 {
            let ratio = persistence_exact(n, EndCondition::ZeroOrMinusOne).unwrap()
                / persistence_exact(n, EndCondition::Zero).unwrap();
            assert!(ratio >= r(1, 2) && ratio <= r(1, 1), "n={n}");
        }
    }

    #[test]
    fn mc_agrees_with_exact() {
        for end in [EndCondition::Zero, EndCondition::ZeroOrMinusOne] {
            for n in [2u32, 5, 9, 14] {
                let exact = persistence_exact(n, end).unwrap().to_f64().unwrap();
                let est = persistence_mc(n.into(), 60_000, end, 99);
                assert!(
                    (est.estimate - exact).abs() < 3.5 * est.stderr,
                    "{end:?} n={n}: {} vs {exact}",
                    est.estimate
                );
            }
        }
    }

    #[test]
    fn mc_is_reproducible_and_worker_independent() {
        let a = persistence_mc_with(30, 5000, EndCondition::Zero, 7, 8, Exec::Sequential);
        let b = persistence_mc_with(30, 5000, EndCondition::Zero, 7, 8, Exec::Parallel);
        assert_eq!(a, b);
        let c = persistence_mc_with(30, 5000, EndCondition::Zero, 8, 8, Exec::Sequential);
        assert_ne!(a.successes, c.successes);
    }

    #[test]
    fn flip_map_small() {
        for n in 1..=10 {
            assert!(check_flip_map(n).holds(), "n={n}");
        }
        assert_eq!(check_flip_map(1).sources, 0);
    }
}

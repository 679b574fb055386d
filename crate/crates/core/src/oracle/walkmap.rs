//! Deterministic map from a sequence to a lazy walk.
//!
//! The sequence is drawn as a down/right lattice path from `(0, n-1)` to
//! `(n, 0)`. The first `n-1` steps plus one extra down step form `W`; the last
//! `n` steps, read backwards with the two directions swapped, form `W'`. The
//! walk counts the signed number of diagonals between the two paths.

use super::DegreeSequence;
use crate::walklab::WalkPath;

/// Image of a sequence: the first `n-1` steps of its walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappedWalk {
    pub walk: WalkPath,
    /// `Y_{n-1}`, always 0 or -1.
    pub end_value: i64,
    /// Zero steps among the first `n-1`; the walk is the image of exactly
    /// `2^z` sequences.
    pub lazy_steps: usize,
}

impl MappedWalk {
    /// All running areas `A_1, …, A_{n-1}` are non-negative.
    pub fn area_nonnegative(&self) -> bool {
        self.walk.area_nonnegative()
    }

    /// `A_{n-1}` is even.
    pub fn area_even(&self) -> bool {
        self.walk.total_area() % 2 == 0
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Dir {
    Down,
    Right,
}

fn lattice_path(d: &[u32]) -> Vec<Dir> {
    let n = d.len();
    let mut path = Vec::with_capacity(2 * n - 1);
    let mut height = n as u32 - 1;
    for &di in d {
        path.extend(std::iter::repeat_n(Dir::Down, (height - di) as usize));
        path.push(Dir::Right);
        height = di;
    }
    path.extend(std::iter::repeat_n(Dir::Down, height as usize));
    path
}

pub fn to_walk(d: &DegreeSequence) -> MappedWalk {
    let n = d.len();
    let p = lattice_path(d.as_slice());
    debug_assert_eq!(p.len(), 2 * n - 1);

    let mut w: Vec<Dir> = p[..n - 1].to_vec();
    w.push(Dir::Down);
    let w_prime: Vec<Dir> = p[n - 1..]
        .iter()
        .rev()
        .map(|&s| match s {
            Dir::Down => Dir::Right,
            Dir::Right => Dir::Down,
        })
        .collect();

    let steps: Vec<i8> = w
        .iter()
        .zip(&w_prime)
        .map(|(&a, &b)| {
            let z = if a == Dir::Down { 1 } else { -1 };
            let z_prime = if b == Dir::Down { -1 } else { 1 };
            ((z + z_prime) / 2) as i8
        })
        .collect();
    debug_assert_eq!(steps.iter().map(|&s| i64::from(s)).sum::<i64>(), 0);

    let walk = WalkPath::from_steps(steps[..n - 1].to_vec());
    MappedWalk {
        end_value: walk.end(),
        lazy_steps: walk.zero_steps(),
        walk,
    }
}

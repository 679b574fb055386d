use std::f64::consts::PI;

use super::WalkError;

/// Largest `n` for [`joint_dist`].
pub const MAX_JOINT_STEPS: u32 = 400;
/// Largest `n` for [`joint_counts`]; weights stay below `4^n ≤ 2^64`.
pub const MAX_EXACT_JOINT_STEPS: u32 = 32;

/// `φ(x, y) = (2√3/π) exp(−4x² + 12xy − 12y²)`, the limiting density of
/// `(Y_n/√n, A_n/n^{3/2})`.
pub fn phi(x: f64, y: f64) -> f64 {
    2.0 * 3f64.sqrt() / PI * (-4.0 * x * x + 12.0 * x * y - 12.0 * y * y).exp()
}

#[derive(Clone, Debug, PartialEq)]
struct Row<T> {
    a_lo: i64,
    cells: Vec<T>,
}

impl<T: Copy + Default> Row<T> {
    fn get(&self, a: i64) -> T {
        let i = a - self.a_lo;
        if i < 0 {
            return T::default();
        }
        self.cells.get(i as usize).copied().unwrap_or_default()
    }

    fn a_hi(&self) -> i64 {
        self.a_lo + self.cells.len() as i64 - 1
    }
}

// One row per position y = −k..=k. `step(up, mid, down)` combines the three
// parents (y−1, y, y+1) of a child cell.
fn joint_dp<T, F>(n: u32, one: T, step: F) -> Vec<Row<T>>
where
    T: Copy + Default,
    F: Fn(T, T, T) -> T,
{
    let mut rows = vec![Row {
        a_lo: 0,
        cells: vec![one],
    }];
    for k in 1..=n as i64 {
        let parent = |y: i64| -> Option<&Row<T>> {
            let i = y + k - 1;
            if i < 0 {
                None
            } else {
                rows.get(i as usize)
            }
        };
        let mut next = Vec::with_capacity(2 * k as usize + 1);
        for y in -k..=k {
            let parents = [parent(y - 1), parent(y), parent(y + 1)];
            let lo = parents.iter().flatten().map(|r| r.a_lo).min().unwrap() + y;
            let hi = parents.iter().flatten().map(|r| r.a_hi()).max().unwrap() + y;
            let cells = (lo..=hi)
                .map(|a| {
                    let at = |p: Option<&Row<T>>| p.map_or(T::default(), |r| r.get(a - y));
                    step(at(parents[0]), at(parents[1]), at(parents[2]))
                })
                .collect();
            next.push(Row { a_lo: lo, cells });
        }
        rows = next;
    }
    rows
}

/// Exact law of `(Y_n, A_n)` for the lazy walk as weights out of `4^n`.
pub fn joint_counts(n: u32) -> Result<Vec<(i64, i64, u128)>, WalkError> {
    if n > MAX_EXACT_JOINT_STEPS {
        return Err(WalkError::TooLarge {
            what: "joint_counts",
            n: n.into(),
            max: MAX_EXACT_JOINT_STEPS.into(),
        });
    }
    let rows = joint_dp(n, 1u128, |up, mid, down| up + 2 * mid + down);
    let k = n as i64;
    Ok(rows
        .iter()
        .enumerate()
        .flat_map(|(i, r)| {
            let y = i as i64 - k;
            r.cells
                .iter()
                .enumerate()
                .filter(|(_, &w)| w > 0)
                .map(move |(j, &w)| (y, r.a_lo + j as i64, w))
        })
        .collect())
}

/// The joint law of position and area after `n` lazy steps.
#[derive(Clone, Debug, PartialEq)]
pub struct JointTable {
    n: u32,
    rows: Vec<Row<f64>>,
}

impl JointTable {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn get(&self, y: i64, a: i64) -> f64 {
        let i = y + i64::from(self.n);
        if i < 0 {
            return 0.0;
        }
        self.rows.get(i as usize).map_or(0.0, |r| r.get(a))
    }

    /// Non-zero cells as `(y, a, probability)`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, f64)> + '_ {
        let k = i64::from(self.n);
        self.rows.iter().enumerate().flat_map(move |(i, r)| {
            r.cells
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0.0)
                .map(move |(j, &p)| (i as i64 - k, r.a_lo + j as i64, p))
        })
    }

    /// Compensated sum of all probabilities.
    pub fn total(&self) -> f64 {
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for (_, _, p) in self.iter() {
            let t = sum + p;
            comp += if sum.abs() >= p.abs() {
                (sum - t) + p
            } else {
                (p - t) + sum
            };
            sum = t;
        }
        sum + comp
    }

    /// Whether `P(y, a) = P(−y, −a)` holds bit-for-bit.
    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|(y, a, p)| self.get(-y, -a) == p)
    }
}

/// Probabilities are combined as `(up + down)/4 + mid/2`; since the sum of
/// the two outer parents is commutative the table is exactly symmetric.
pub fn joint_dist(n: u32) -> Result<JointTable, WalkError> {
    if n > MAX_JOINT_STEPS {
        return Err(WalkError::TooLarge {
            what: "joint_dist",
            n: n.into(),
            max: MAX_JOINT_STEPS.into(),
        });
    }
    let rows = joint_dp(n, 1.0f64, |up, mid, down| 0.25 * (up + down) + 0.5 * mid);
    Ok(JointTable { n, rows })
}

/// `sup_{a,b} |n² P(Y_n = a, A_n = b) − φ(a/√n, b/n^{3/2})|`.
///
/// Cells outside the reachable band have probability 0, and there `φ` is
/// below `e^{-n}`; the supremum is taken over the band.
pub fn llt_error(n: u32) -> Result<f64, WalkError> {
    if n == 0 {
        return Err(WalkError::Invalid("llt_error needs n ≥ 1".into()));
    }
    let t = joint_dist(n)?;
    let nf = f64::from(n);
    let (sx, sy) = (nf.sqrt(), nf.powf(1.5));
    let k = i64::from(n);
    let mut sup = 0.0f64;
    for (i, r) in t.rows.iter().enumerate() {
        let y = i as i64 - k;
        for (j, &p) in r.cells.iter().enumerate() {
            let a = r.a_lo + j as i64;
            sup = sup.max((nf * nf * p - phi(y as f64 / sx, a as f64 / sy)).abs());
        }
    }
    Ok(sup)
}

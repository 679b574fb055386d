use crate::bigcount::BigCount;

use super::layer::{add_into, sub_from, Layer, Row};
use super::InitialParity;

/// Layer stored as same-parity differences `f(N, y, a) = F(a) - F(a - 2)`
/// (with `F` below `a_min` read as zero).
///
/// Within one parity class `F` is non-decreasing in `a`, so the differences
/// are non-negative, and they vanish for every `a ≥ cap + 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceLayer {
    depth: u32,
    parity: InitialParity,
    width: usize,
    rows: Vec<Row>,
}

impl DifferenceLayer {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn parity(&self) -> InitialParity {
        self.parity
    }

    /// `f(N, y, a)` for any integers `y`, `a`.
    pub fn get(&self, y: i64, a: i64) -> BigCount {
        let n = self.depth as i64;
        if y < -n - 1 || y > n || a < 0 {
            return BigCount::zero();
        }
        let row = &self.rows[(y + n + 1) as usize];
        let a = a as u64;
        if a < row.a_min || a > row.cap + 1 {
            return BigCount::zero();
        }
        let start = (a - row.a_min) as usize * self.width;
        BigCount::from_limbs(&row.cells[start..start + self.width])
    }

    /// Total number of limbs that are non-zero, a rough size measure.
    pub fn nonzero_limbs(&self) -> usize {
        self.rows
            .iter()
            .flat_map(|r| r.cells.iter())
            .filter(|&&l| l != 0)
            .count()
    }
}

pub fn to_difference(layer: &Layer) -> DifferenceLayer {
    let w = layer.width;
    let rows = layer
        .rows
        .iter()
        .map(|row| {
            let mut cells = row.cells.clone();
            for idx in (2..row.len()).rev() {
                let (lo, hi) = cells.split_at_mut(idx * w);
                let ok = sub_from(&mut hi[..w], &lo[(idx - 2) * w..(idx - 1) * w]);
                assert!(ok, "F decreased within a parity class");
            }
            Row {
                a_min: row.a_min,
                cap: row.cap,
                cells,
            }
        })
        .collect();
    DifferenceLayer {
        depth: layer.depth,
        parity: layer.parity,
        width: w,
        rows,
    }
}

pub fn from_difference(diff: &DifferenceLayer) -> Layer {
    let w = diff.width;
    let rows = diff
        .rows
        .iter()
        .map(|row| {
            let mut cells = row.cells.clone();
            for idx in 2..row.len() {
                let (lo, hi) = cells.split_at_mut(idx * w);
                add_into(&mut hi[..w], &lo[(idx - 2) * w..(idx - 1) * w]);
            }
            Row {
                a_min: row.a_min,
                cap: row.cap,
                cells,
            }
        })
        .collect();
    Layer::from_parts(diff.depth, diff.parity, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::cap_for;
    use crate::exec::Exec;

    fn layer_at(depth: u32, parity: InitialParity) -> Layer {
        let mut l = Layer::initial(parity);
        for _ in 0..depth {
            l = l.advance(Exec::Sequential);
        }
        l
    }

    #[test]
    fn round_trip_depth_five() {
        let l = layer_at(5, InitialParity::Even);
        assert_eq!(from_difference(&to_difference(&l)), l);
        let o = layer_at(5, InitialParity::Odd);
        assert_eq!(from_difference(&to_difference(&o)), o);
    }

    #[test]
    fn origin_difference_is_plain_value() {
        for depth in 0..8 {
            let l = layer_at(depth, InitialParity::Even);
            assert_eq!(to_difference(&l).get(0, 0), l.get(0, 0));
        }
    }

    #[test]
    fn differences_vanish_past_cap() {
        let l = layer_at(6, InitialParity::Even);
        let d = to_difference(&l);
        for y in -7..=6i64 {
            let cap = cap_for(6, y) as i64;
            for a in 0..cap + 12 {
                let plain = l.get(y, a).0;
                let below = if a >= 2 {
                    l.get(y, a - 2).0
                } else {
                    Default::default()
                };
                assert_eq!(d.get(y, a).0, plain - below, "y={y} a={a}");
                if a >= cap + 2 {
                    assert!(d.get(y, a).is_zero());
                }
            }
        }
    }

    #[test]
    fn differences_are_smaller() {
        let l = layer_at(30, InitialParity::Even);
        let d = to_difference(&l);
        let plain: usize = l
            .rows
            .iter()
            .flat_map(|r| r.cells.iter())
            .filter(|&&x| x != 0)
            .count();
        assert!(d.nonzero_limbs() <= plain);
    }
}

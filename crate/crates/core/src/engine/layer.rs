use num_bigint::BigUint;

use crate::bigcount::BigCount;
use crate::exec::Exec;

use super::{decrease_cap, lower_area, InitialParity};

/// Limbs per cell at a given depth. Every `F(N, y, a)` is bounded by the
/// total weight `4^N` of all walks with `N` steps, so `2N + 1` bits suffice.
pub fn width_for(depth: u32) -> usize {
    (2 * depth as usize + 1).div_ceil(64)
}

/// Stabilisation cap `max{0, a'(N, y)}`.
pub fn cap_for(depth: u32, y: i64) -> u64 {
    decrease_cap(depth, y).max(0) as u64
}

/// One row of a layer: the cells `a_min ..= cap + 1` at a fixed height.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Row {
    pub(crate) a_min: u64,
    pub(crate) cap: u64,
    pub(crate) cells: Vec<u64>,
}

impl Row {
    pub(crate) fn len(&self) -> usize {
        (self.cap + 2 - self.a_min) as usize
    }
}

/// Read-only view of one stored row.
#[derive(Clone, Copy, Debug)]
pub struct RowView<'a> {
    pub y: i64,
    pub a_min: u64,
    pub cap: u64,
    width: usize,
    cells: &'a [u64],
}

impl<'a> RowView<'a> {
    /// Number of stored cells, covering `a_min ..= cap + 1`.
    pub fn len(&self) -> usize {
        self.cells.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn value(&self, idx: usize) -> BigCount {
        BigCount::from_limbs(&self.cells[idx * self.width..(idx + 1) * self.width])
    }

    pub fn values(&self) -> impl Iterator<Item = BigCount> + 'a {
        self.cells
            .chunks_exact(self.width)
            .map(BigCount::from_limbs)
    }
}

/// All values `F(N, ·, ·)` for one depth `N`, stored densely per height.
///
/// Rows cover `-N-1 ≤ y ≤ N`. Within a row, cells run from
/// `a_min(y)` (0, or `y(y+1)/2` for negative `y`) up to `cap + 1`; any
/// larger area reads the cell of matching parity at `cap` or `cap + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub(crate) depth: u32,
    pub(crate) parity: InitialParity,
    pub(crate) width: usize,
    pub(crate) rows: Vec<Row>,
}

impl Layer {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn parity(&self) -> InitialParity {
        self.parity
    }

    /// Limbs per stored cell.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn y_range(&self) -> (i64, i64) {
        let n = self.depth as i64;
        (-n - 1, n)
    }

    pub fn rows(&self) -> impl Iterator<Item = RowView<'_>> {
        let (y_lo, _) = self.y_range();
        self.rows.iter().enumerate().map(move |(k, r)| RowView {
            y: y_lo + k as i64,
            a_min: r.a_min,
            cap: r.cap,
            width: self.width,
            cells: &r.cells,
        })
    }

    pub fn cell_count(&self) -> usize {
        self.rows.iter().map(Row::len).sum()
    }

    /// Heap bytes held by the cell storage.
    pub fn size_bytes(&self) -> u64 {
        let cells: usize = self.rows.iter().map(|r| r.cells.len()).sum();
        (cells * 8 + self.rows.len() * std::mem::size_of::<Row>()) as u64
    }

    /// Bytes a full layer at `depth` will occupy, without building it.
    pub fn projected_bytes(depth: u32) -> u64 {
        let n = depth as i64;
        let width = width_for(depth) as u64;
        let cells: u64 = (-n - 1..=n)
            .map(|y| cap_for(depth, y) + 2 - lower_area(y) as u64)
            .sum();
        cells * width * 8 + (2 * n as u64 + 2) * std::mem::size_of::<Row>() as u64
    }

    /// Limbs of `F(N, y, a)`, or `None` when the value is zero by the
    /// boundary conditions.
    pub(crate) fn cell(&self, y: i64, a: i64) -> Option<&[u64]> {
        let n = self.depth as i64;
        if y < -n - 1 || y > n || a < 0 {
            return None;
        }
        let row = &self.rows[(y + n + 1) as usize];
        let mut a = a as u64;
        if a < row.a_min {
            return None;
        }
        if a > row.cap + 1 {
            a = row.cap + ((a - row.cap) & 1);
        }
        let start = (a - row.a_min) as usize * self.width;
        Some(&row.cells[start..start + self.width])
    }

    /// `F(N, y, a)` for any integers `y`, `a`.
    pub fn get(&self, y: i64, a: i64) -> BigCount {
        match self.cell(y, a) {
            Some(limbs) => BigCount::from_limbs(limbs),
            None => BigCount::zero(),
        }
    }

    /// `F(N, 0, 0)`: the number of counted sequences of length `N + 1`.
    pub fn origin(&self) -> BigCount {
        self.get(0, 0)
    }

    /// Depth-0 layer: `F(0, y, a) = 1` iff `y ∈ {0, -1}`, `a ≥ 0` and `a`
    /// has the requested parity.
    pub fn initial(parity: InitialParity) -> Layer {
        let target = parity.residue();
        let rows = [-1i64, 0]
            .iter()
            .map(|&y| {
                let a_min = lower_area(y) as u64;
                let cap = cap_for(0, y);
                let cells = (a_min..=cap + 1)
                    .map(|a| u64::from(a % 2 == target))
                    .collect();
                Row { a_min, cap, cells }
            })
            .collect();
        Layer {
            depth: 0,
            parity,
            width: 1,
            rows,
        }
    }

    /// Computes the full layer at depth `N + 1` from this one via
    /// `F(N, y, a) = F(N-1, y+1, a+y+1) + F(N-1, y-1, a+y-1) + 2F(N-1, y, a+y)`.
    ///
    /// Rows are independent, so they are evaluated under `exec`; the parent is
    /// only read. The result does not depend on the policy or worker count.
    pub fn advance(&self, exec: Exec) -> Layer {
        let depth = self.depth + 1;
        let n = depth as i64;
        let width = width_for(depth);
        let rows = exec.map((2 * n + 2) as usize, |k| {
            let y = k as i64 - n - 1;
            self.child_row(depth, y, width)
        });
        Layer {
            depth,
            parity: self.parity,
            width,
            rows,
        }
    }

    fn child_row(&self, depth: u32, y: i64, width: usize) -> Row {
        let a_min = lower_area(y) as u64;
        let cap = cap_for(depth, y);
        debug_assert!(a_min <= cap, "empty row at depth {depth}, y {y}");
        let len = (cap + 2 - a_min) as usize;
        let mut cells = vec![0u64; len * width];
        for (idx, out) in cells.chunks_exact_mut(width).enumerate() {
            let a = (a_min as usize + idx) as i64;
            if let Some(up) = self.cell(y + 1, a + y + 1) {
                add_into(out, up);
            }
            if let Some(down) = self.cell(y - 1, a + y - 1) {
                add_into(out, down);
            }
            if let Some(level) = self.cell(y, a + y) {
                add_into(out, level);
                add_into(out, level);
            }
        }
        Row { a_min, cap, cells }
    }

    pub(crate) fn from_parts(depth: u32, parity: InitialParity, rows: Vec<Row>) -> Layer {
        Layer {
            depth,
            parity,
            width: width_for(depth),
            rows,
        }
    }

    /// Builds a layer from `(a_min, cap, values)` rows ordered by `y`.
    pub(crate) fn values_to_row(
        width: usize,
        a_min: u64,
        cap: u64,
        values: &[BigUint],
    ) -> Option<Row> {
        let mut cells = vec![0u64; values.len() * width];
        for (v, out) in values.iter().zip(cells.chunks_exact_mut(width)) {
            if !crate::bigcount::biguint_to_limbs(v, out) {
                return None;
            }
        }
        Some(Row { a_min, cap, cells })
    }
}

/// `out += src` on little-endian limbs; `src` may be shorter than `out`.
#[inline]
pub(crate) fn add_into(out: &mut [u64], src: &[u64]) {
    let mut carry = false;
    let (head, tail) = out.split_at_mut(src.len());
    for (o, &s) in head.iter_mut().zip(src) {
        let (v, c1) = o.overflowing_add(s);
        let (v, c2) = v.overflowing_add(carry as u64);
        *o = v;
        carry = c1 | c2;
    }
    for o in tail {
        if !carry {
            break;
        }
        let (v, c) = o.overflowing_add(1);
        *o = v;
        carry = c;
    }
    debug_assert!(!carry, "cell overflow");
}

/// `out -= src`; returns `false` on underflow.
#[inline]
pub(crate) fn sub_from(out: &mut [u64], src: &[u64]) -> bool {
    let mut borrow = false;
    for (i, o) in out.iter_mut().enumerate() {
        let s = src.get(i).copied().unwrap_or(0);
        let (v, b1) = o.overflowing_sub(s);
        let (v, b2) = v.overflowing_sub(borrow as u64);
        *o = v;
        borrow = b1 | b2;
    }
    !borrow
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limb_arithmetic_carries() {
        let mut out = [u64::MAX, u64::MAX, 0];
        add_into(&mut out, &[1]);
        assert_eq!(out, [0, 0, 1]);
        assert!(sub_from(&mut out, &[1]));
        assert_eq!(out, [u64::MAX, u64::MAX, 0]);
        let mut small = [0u64, 0];
        assert!(!sub_from(&mut small, &[1]));
    }

    #[test]
    fn widths_cover_total_weight() {
        assert_eq!(width_for(0), 1);
        assert_eq!(width_for(31), 1);
        assert_eq!(width_for(32), 2);
        assert_eq!(width_for(299), 10);
    }

    #[test]
    fn projected_size_matches_built_layer() {
        let mut l = Layer::initial(InitialParity::Even);
        for _ in 0..20 {
            l = l.advance(Exec::Sequential);
        }
        assert_eq!(Layer::projected_bytes(20), l.size_bytes());
    }
}

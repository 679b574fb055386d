/// A finite walk with steps in `{-1, 0, +1}` started at `Y₀ = 0`.
///
/// Positions are `Y_k = Σ_{i≤k} step_i` and areas `A_k = Σ_{i≤k} Y_i`,
/// both indexed from `k = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WalkPath {
    steps: Vec<i8>,
}

impl WalkPath {
    /// # Panics
    /// If any step lies outside `{-1, 0, 1}`.
    pub fn from_steps(steps: Vec<i8>) -> Self {
        assert!(
            steps.iter().all(|s| (-1..=1).contains(s)),
            "step outside {{-1, 0, 1}}"
        );
        WalkPath { steps }
    }

    /// Walk visiting the given positions `Y_1, …, Y_n` (each move ≤ 1).
    pub fn from_positions(positions: &[i64]) -> Option<Self> {
        let mut prev = 0;
        let mut steps = Vec::with_capacity(positions.len());
        for &p in positions {
            let d = p - prev;
            if !(-1..=1).contains(&d) {
                return None;
            }
            steps.push(d as i8);
            prev = p;
        }
        Some(WalkPath { steps })
    }

    pub fn steps(&self) -> &[i8] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn positions(&self) -> Vec<i64> {
        self.steps
            .iter()
            .scan(0i64, |y, &s| {
                *y += i64::from(s);
                Some(*y)
            })
            .collect()
    }

    pub fn areas(&self) -> Vec<i64> {
        self.positions()
            .into_iter()
            .scan(0i64, |a, y| {
                *a += y;
                Some(*a)
            })
            .collect()
    }

    /// Final position `Y_n` (0 for the empty walk).
    pub fn end(&self) -> i64 {
        self.steps.iter().map(|&s| i64::from(s)).sum()
    }

    /// Final area `A_n`.
    pub fn total_area(&self) -> i64 {
        self.areas().last().copied().unwrap_or(0)
    }

    pub fn zero_steps(&self) -> usize {
        self.steps.iter().filter(|&&s| s == 0).count()
    }

    /// Whether `A_1, …, A_n ≥ 0`.
    pub fn area_nonnegative(&self) -> bool {
        let (mut y, mut a) = (0i64, 0i64);
        for &s in &self.steps {
            y += i64::from(s);
            a += y;
            if a < 0 {
                return false;
            }
        }
        true
    }

    /// Negates every step after the last visit to 0, turning a walk that
    /// ends at `-1` into one that ends at `+1` with pointwise larger areas.
    pub fn flip_last_excursion(&self) -> WalkPath {
        let positions = self.positions();
        // index of the first step after the last zero (Y_0 = 0 counts)
        let start = positions.iter().rposition(|&y| y == 0).map_or(0, |k| k + 1);
        let mut steps = self.steps.clone();
        for s in &mut steps[start..] {
            *s = -*s;
        }
        WalkPath { steps }
    }

    /// Signed areas of the maximal excursions away from 0, in order; a
    /// trailing unfinished excursion is included.
    pub fn excursion_areas(&self) -> Vec<i64> {
        let mut out = Vec::new();
        let mut current = 0i64;
        let mut open = false;
        for y in self.positions() {
            if y == 0 {
                if open {
                    out.push(current);
                }
                current = 0;
                open = false;
            } else {
                current += y;
                open = true;
            }
        }
        if open {
            out.push(current);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn positions_and_areas() {
        let w = WalkPath::from_steps(vec![1, 0, -1, -1, 1]);
        assert_eq!(w.positions(), vec![1, 1, 0, -1, 0]);
        assert_eq!(w.areas(), vec![1, 2, 2, 1, 1]);
        assert_eq!(w.end(), 0);
        assert_eq!(w.zero_steps(), 1);
        assert!(w.area_nonnegative());
        assert_eq!(w.excursion_areas(), vec![2, -1]);
        assert_eq!(WalkPath::from_positions(&[1, 1, 0, -1, 0]).unwrap(), w);
        assert!(WalkPath::from_positions(&[2]).is_none());
    }

    #[test]
    fn flip_last_excursion_example() {
        let w = WalkPath::from_steps(vec![1, -1, 0, -1]);
        let f = w.flip_last_excursion();
        assert_eq!(f.steps(), &[1, -1, 0, 1]);
        assert_eq!(f.end(), 1);
    }

    fn steps() -> impl Strategy<Value = Vec<i8>> {
        proptest::collection::vec(-1i8..=1, 0..40)
    }

    proptest! {
        #[test]
        fn area_is_monotone_on_excursions(s in steps()) {
            let w = WalkPath::from_steps(s);
            let ys = w.positions();
            let areas = w.areas();
            for k in 1..ys.len() {
                // on an excursion above 0 the area increases, below it decreases
                if ys[k] > 0 { prop_assert!(areas[k] > areas[k - 1]); }
                if ys[k] < 0 { prop_assert!(areas[k] < areas[k - 1]); }
            }
        }

        #[test]
        fn excursion_areas_sum_to_total(s in steps()) {
            let w = WalkPath::from_steps(s);
            prop_assert_eq!(w.excursion_areas().iter().sum::<i64>(), w.total_area());
        }
    }
}

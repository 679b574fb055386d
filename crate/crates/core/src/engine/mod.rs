//! Exact enumeration of `G(n)` and `H(n)` by the weighted-walk recursion.
//!
//! `F(N, y, a)` is the weighted number of walks with `N` steps in
//! `{-1, 0, +1}` that start at height `y` with area offset `a`, keep the
//! running area non-negative, end in `{0, -1}` and finish with an even
//! (or, for [`InitialParity::Odd`], odd) area. Zero steps carry weight 2.
//! The number of graphic sequences of length `n` is `F(n-1, 0, 0)`.

mod checkpoint;
mod difference;
mod layer;
mod ondemand;

use thiserror::Error;

use crate::bigcount::BigCount;
use crate::exec::Exec;

pub use checkpoint::{Checkpoint, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
pub use difference::{from_difference, to_difference, DifferenceLayer};
pub use layer::{cap_for, width_for, Layer, RowView};
pub use ondemand::{extend_on_demand, OnDemand};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("sequence length must be at least 1")]
    EmptySequence,
    #[error("memory budget of {limit} bytes exceeded at depth {depth_reached} (next layer needs {required} bytes)")]
    MemoryBudgetExceeded {
        depth_reached: u32,
        required: u64,
        limit: u64,
    },
    #[error("on-demand target depth {target} must exceed checkpoint depth {base}")]
    TargetNotBeyondCheckpoint { target: u32, base: u32 },
    #[error("checkpoint version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("checkpoint is not a graphseq checkpoint")]
    BadMagic,
    #[error("corrupt checkpoint: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which parity class of the final area the recursion counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InitialParity {
    /// Even total degree: counts `G(n)`.
    Even,
    /// Odd total degree: counts `H(n)`.
    Odd,
}

impl InitialParity {
    pub(crate) fn residue(self) -> u64 {
        match self {
            InitialParity::Even => 0,
            InitialParity::Odd => 1,
        }
    }

    pub fn tag(self) -> u8 {
        self.residue() as u8
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(InitialParity::Even),
            1 => Some(InitialParity::Odd),
            _ => None,
        }
    }
}

/// Largest possible area decrease over `N`-step completions that start at
/// `y` and end in `{0, -1}`:
/// `a' = (N² - 2Ny + 2N - y² + [N - y odd]) / 4`.
pub fn decrease_cap(depth: u32, y: i64) -> i64 {
    let n = depth as i64;
    let odd = (n - y).rem_euclid(2);
    let num = n * n - 2 * n * y + 2 * n - y * y + odd;
    debug_assert_eq!(num.rem_euclid(4), 0);
    num.div_euclid(4)
}

/// Smallest area with a possibly non-zero count at height `y`. A walk from
/// `y < 0` must pass through `y+1, …, -1` before reaching `{0, -1}`, adding
/// `-y(y+1)/2` to the area on the way.
pub(crate) fn lower_area(y: i64) -> i64 {
    if y < 0 {
        y * (y + 1) / 2
    } else {
        0
    }
}

pub fn initial_layer(parity: InitialParity) -> Layer {
    Layer::initial(parity)
}

/// Full layer at depth `N` from the layer at depth `N - 1`.
pub fn advance(layer: &Layer) -> Layer {
    layer.advance(Exec::default())
}

/// `F(n-1, 0, 0)`: `G(n)` for [`InitialParity::Even`], `H(n)` for
/// [`InitialParity::Odd`].
pub fn count_graphic(n: u32, parity: InitialParity) -> Result<BigCount, EngineError> {
    if n == 0 {
        return Err(EngineError::EmptySequence);
    }
    let mut engine = Engine::new(parity);
    while engine.depth() + 1 < n {
        engine.step()?;
    }
    Ok(engine.count())
}

/// Layer-by-layer driver with an optional memory ceiling.
#[derive(Debug)]
pub struct Engine {
    layer: Layer,
    exec: Exec,
    memory_limit: Option<u64>,
}

impl Engine {
    pub fn new(parity: InitialParity) -> Self {
        Self::from_layer(Layer::initial(parity))
    }

    /// Resumes from a previously computed (e.g. checkpointed) layer.
    pub fn from_layer(layer: Layer) -> Self {
        Engine {
            layer,
            exec: Exec::default(),
            memory_limit: None,
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn with_memory_limit(mut self, bytes: Option<u64>) -> Self {
        self.memory_limit = bytes;
        self
    }

    pub fn layer(&self) -> &Layer {
        &self.layer
    }

    pub fn into_layer(self) -> Layer {
        self.layer
    }

    pub fn depth(&self) -> u32 {
        self.layer.depth
    }

    /// Count for sequence length `depth + 1`.
    pub fn count(&self) -> BigCount {
        self.layer.origin()
    }

    /// Bytes needed to hold the current and the next layer at once.
    pub fn next_step_bytes(&self) -> u64 {
        self.layer.size_bytes() + Layer::projected_bytes(self.depth() + 1)
    }

    /// Advances one layer and returns the new count. On a budget breach the
    /// current layer is kept so the caller can checkpoint it.
    pub fn step(&mut self) -> Result<BigCount, EngineError> {
        if let Some(limit) = self.memory_limit {
            let required = self.next_step_bytes();
            if required > limit {
                return Err(EngineError::MemoryBudgetExceeded {
                    depth_reached: self.depth(),
                    required,
                    limit,
                });
            }
        }
        self.layer = self.layer.advance(self.exec);
        Ok(self.count())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    /// Reference `F` by direct memoised recursion, with no caps or row
    /// bounds beyond `a < 0`.
    struct Reference {
        parity: u64,
        memo: HashMap<(u32, i64, i64), u128>,
    }

    impl Reference {
        fn new(parity: InitialParity) -> Self {
            Reference {
                parity: parity.residue(),
                memo: HashMap::new(),
            }
        }

        fn f(&mut self, n: u32, y: i64, a: i64) -> u128 {
            if a < 0 {
                return 0;
            }
            if n == 0 {
                return u128::from((y == 0 || y == -1) && (a as u64) % 2 == self.parity);
            }
            if let Some(&v) = self.memo.get(&(n, y, a)) {
                return v;
            }
            let v = self.f(n - 1, y + 1, a + y + 1)
                + self.f(n - 1, y - 1, a + y - 1)
                + 2 * self.f(n - 1, y, a + y);
            self.memo.insert((n, y, a), v);
            v
        }
    }

    /// Exhaustive maximum area decrease (negated minimum running area) over
    /// all `n`-step paths from `y` ending in `{0, -1}`.
    fn brute_max_decrease(n: u32, y: i64) -> Option<i64> {
        let mut best: Option<i64> = None;
        let total = 3usize.pow(n);
        for code in 0..total {
            let mut c = code;
            let (mut pos, mut area, mut min_area) = (y, 0i64, 0i64);
            for _ in 0..n {
                pos += (c % 3) as i64 - 1;
                c /= 3;
                area += pos;
                min_area = min_area.min(area);
            }
            if pos == 0 || pos == -1 {
                best = Some(best.map_or(-min_area, |b: i64| b.max(-min_area)));
            }
        }
        best
    }

    #[test]
    fn initial_layer_values() {
        let even = initial_layer(InitialParity::Even);
        assert_eq!(even.depth(), 0);
        assert_eq!(even.get(0, 0), BigCount::from(1));
        assert_eq!(even.get(-1, 0), BigCount::from(1));
        assert_eq!(even.get(0, 1), BigCount::zero());
        assert_eq!(even.get(1, 0), BigCount::zero());
        assert_eq!(even.get(0, 1000), BigCount::from(1));
        assert_eq!(even.get(0, 1001), BigCount::zero());

        let odd = initial_layer(InitialParity::Odd);
        assert_eq!(odd.get(0, 1), BigCount::from(1));
        assert_eq!(odd.get(0, 0), BigCount::zero());
    }

    #[test]
    fn advance_small_values() {
        let l1 = advance(&initial_layer(InitialParity::Even));
        assert_eq!(l1.get(0, 0), BigCount::from(2));
        let l2 = advance(&l1);
        assert_eq!(l2.get(0, 0), BigCount::from(4));
        let h2 = advance(&advance(&initial_layer(InitialParity::Odd)));
        assert_eq!(h2.get(0, 0), BigCount::from(1));
    }

    #[test]
    fn count_graphic_small() {
        assert_eq!(
            count_graphic(1, InitialParity::Even).unwrap(),
            BigCount::from(1)
        );
        assert_eq!(
            count_graphic(2, InitialParity::Even).unwrap(),
            BigCount::from(2)
        );
        assert_eq!(
            count_graphic(3, InitialParity::Odd).unwrap(),
            BigCount::from(1)
        );
        assert!(matches!(
            count_graphic(0, InitialParity::Even),
            Err(EngineError::EmptySequence)
        ));
    }

    #[test]
    fn decrease_cap_examples() {
        assert_eq!(decrease_cap(2, 0), 2);
        assert_eq!(decrease_cap(3, 0), 4);
        assert_eq!(decrease_cap(0, 0), 0);
    }

    #[test]
    fn decrease_cap_matches_exhaustive_minimum() {
        for n in 0..=9u32 {
            for y in -(n as i64) - 1..=n as i64 {
                let brute = brute_max_decrease(n, y).expect("some completion exists");
                assert_eq!(decrease_cap(n, y).max(0), brute, "N={n} y={y}");
            }
        }
    }

    #[test]
    fn lower_area_prunes_only_zero_cells() {
        let mut reference = Reference::new(InitialParity::Even);
        for n in 0..=10u32 {
            for y in -(n as i64) - 1..0 {
                for a in 0..lower_area(y) {
                    assert_eq!(reference.f(n, y, a), 0, "N={n} y={y} a={a}");
                }
            }
        }
    }

    #[test]
    fn stabilised_reads_match_reference_recursion() {
        for parity in [InitialParity::Even, InitialParity::Odd] {
            let mut reference = Reference::new(parity);
            let mut layer = initial_layer(parity);
            for n in 0..=11u32 {
                if n > 0 {
                    layer = layer.advance(Exec::Sequential);
                }
                let ni = n as i64;
                for y in -ni - 3..=ni + 2 {
                    let cap = cap_for(n, y) as i64;
                    for a in -2..=cap + 8 {
                        let expected = reference.f(n, y, a);
                        assert_eq!(
                            layer.get(y, a),
                            BigCount::from(expected as u64),
                            "{parity:?} N={n} y={y} a={a}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn parallel_and_sequential_layers_are_identical() {
        let mut seq = initial_layer(InitialParity::Even);
        let mut par = seq.clone();
        for _ in 0..40 {
            seq = seq.advance(Exec::Sequential);
            par = par.advance(Exec::Parallel);
            assert_eq!(seq, par);
        }
    }

    #[test]
    fn memory_budget_stops_before_allocating() {
        let mut engine = Engine::new(InitialParity::Even).with_memory_limit(Some(20_000));
        let err = loop {
            match engine.step() {
                Ok(_) => continue,
                Err(e) => break e,
            }
        };
        match err {
            EngineError::MemoryBudgetExceeded {
                depth_reached,
                required,
                limit,
            } => {
                assert_eq!(depth_reached, engine.depth());
                assert!(required > limit);
                assert!(engine.layer().size_bytes() <= limit);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn rows_are_never_empty() {
        for n in 0..=300u32 {
            for y in -(n as i64) - 1..=n as i64 {
                assert!(lower_area(y) as u64 <= cap_for(n, y), "N={n} y={y}");
            }
        }
    }
}

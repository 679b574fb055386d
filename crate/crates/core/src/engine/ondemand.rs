use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::bigcount::BigCount;

use super::checkpoint::{Checkpoint, CHECKPOINT_VERSION};
use super::layer::{cap_for, Layer};
use super::{lower_area, EngineError};

/// Top-down evaluation of `F(M, y, a)` for depths beyond a fully known base
/// layer, memoising every value it touches.
///
/// Only cells reachable from the queried origin are ever created: a value
/// at depth `d` needed by `F(M, 0, 0)` has `|y| ≤ M - d`.
#[derive(Debug)]
pub struct OnDemand<'a> {
    base: &'a Layer,
    memo: HashMap<(u32, i64, i64), BigUint>,
    max_entries: Option<usize>,
}

impl<'a> OnDemand<'a> {
    pub fn new(base: &'a Layer) -> Self {
        OnDemand {
            base,
            memo: HashMap::new(),
            max_entries: None,
        }
    }

    /// Caps the memo size; exceeding it reports a memory-budget error.
    pub fn with_max_entries(mut self, entries: Option<usize>) -> Self {
        self.max_entries = entries;
        self
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// `F(target, 0, 0)`, i.e. the count for sequence length `target + 1`.
    pub fn origin(&mut self, target: u32) -> Result<BigCount, EngineError> {
        if target <= self.base.depth() {
            if target == self.base.depth() {
                return Ok(self.base.origin());
            }
            return Err(EngineError::TargetNotBeyondCheckpoint {
                target,
                base: self.base.depth(),
            });
        }
        self.value(target, 0, 0).map(BigCount)
    }

    fn value(&mut self, depth: u32, y: i64, a: i64) -> Result<BigUint, EngineError> {
        let n = depth as i64;
        if a < 0 || y < -n - 1 || y > n || a < lower_area(y) {
            return Ok(BigUint::zero());
        }
        let cap = cap_for(depth, y) as i64;
        let a = if a > cap + 1 {
            cap + ((a - cap) & 1)
        } else {
            a
        };
        if depth == self.base.depth() {
            return Ok(self.base.get(y, a).into_biguint());
        }
        if let Some(v) = self.memo.get(&(depth, y, a)) {
            return Ok(v.clone());
        }
        let up = self.value(depth - 1, y + 1, a + y + 1)?;
        let down = self.value(depth - 1, y - 1, a + y - 1)?;
        let level = self.value(depth - 1, y, a + y)?;
        let v = up + down + (level << 1u32);
        if let Some(limit) = self.max_entries {
            if self.memo.len() >= limit {
                return Err(EngineError::MemoryBudgetExceeded {
                    depth_reached: depth,
                    required: (self.memo.len() + 1) as u64,
                    limit: limit as u64,
                });
            }
        }
        self.memo.insert((depth, y, a), v.clone());
        Ok(v)
    }
}

/// `F(target, 0, 0)` computed top-down from a checkpointed layer.
pub fn extend_on_demand(checkpoint: &Checkpoint, target: u32) -> Result<BigCount, EngineError> {
    if checkpoint.version != CHECKPOINT_VERSION {
        return Err(EngineError::VersionMismatch {
            found: checkpoint.version,
            expected: CHECKPOINT_VERSION,
        });
    }
    if target <= checkpoint.depth() {
        return Err(EngineError::TargetNotBeyondCheckpoint {
            target,
            base: checkpoint.depth(),
        });
    }
    OnDemand::new(&checkpoint.layer).origin(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{count_graphic, InitialParity};
    use crate::exec::Exec;

    fn checkpoint_at(depth: u32, parity: InitialParity) -> Checkpoint {
        let mut l = Layer::initial(parity);
        for _ in 0..depth {
            l = l.advance(Exec::Sequential);
        }
        Checkpoint::new(l)
    }

    #[test]
    fn matches_full_layers() {
        let ck = checkpoint_at(10, InitialParity::Even);
        assert_eq!(
            extend_on_demand(&ck, 12).unwrap(),
            count_graphic(13, InitialParity::Even).unwrap()
        );
    }

    #[test]
    fn from_initial_layer() {
        let even = checkpoint_at(0, InitialParity::Even);
        assert_eq!(extend_on_demand(&even, 2).unwrap(), BigCount::from(4));
        let odd = checkpoint_at(0, InitialParity::Odd);
        assert_eq!(extend_on_demand(&odd, 2).unwrap(), BigCount::from(1));
    }

    #[test]
    fn shared_memo_over_several_targets() {
        let ck = checkpoint_at(15, InitialParity::Odd);
        let mut od = OnDemand::new(&ck.layer);
        for target in 16..=24 {
            assert_eq!(
                od.origin(target).unwrap(),
                count_graphic(target + 1, InitialParity::Odd).unwrap(),
                "target {target}"
            );
        }
    }

    #[test]
    fn errors() {
        let mut ck = checkpoint_at(3, InitialParity::Even);
        assert!(matches!(
            extend_on_demand(&ck, 3),
            Err(EngineError::TargetNotBeyondCheckpoint { .. })
        ));
        let mut od = OnDemand::new(&ck.layer).with_max_entries(Some(4));
        assert!(matches!(
            od.origin(20),
            Err(EngineError::MemoryBudgetExceeded { .. })
        ));
        ck.version = 99;
        assert!(matches!(
            extend_on_demand(&ck, 5),
            Err(EngineError::VersionMismatch { found: 99, .. })
        ));
    }
}

//! Lazy and simple random walks: bridge sampling, persistence of the area
//! process, bridge return counts and the joint law of position and area.

mod bridge;
mod joint;
mod path;
mod persistence;

pub use bridge::{returns_tail, BridgeSampler, WalkKind};
pub use joint::{joint_counts, joint_dist, llt_error, phi, JointTable};
pub use path::WalkPath;
pub use persistence::{
    check_flip_map, persistence_exact, persistence_mc, persistence_mc_with, EndCondition,
    FlipMapCheck, McEstimate, DEFAULT_SHARDS, MAX_EXACT_STEPS,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WalkError {
    #[error("{what} supports n ≤ {max}, got {n}")]
    TooLarge {
        what: &'static str,
        n: u64,
        max: u64,
    },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

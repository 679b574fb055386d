//! Exact enumeration of graphic degree sequences together with the random-walk
//! machinery that governs their asymptotic growth `G(n) ~ c·4ⁿ/n^{3/4}`.
//!
//! The crate is organised around five areas:
//!
//! * [`engine`]: the layered big-integer recursion that counts `G(n)` (even
//!   total degree) and `H(n)` (odd total degree, dominating condition only).
//! * [`oracle`]: brute-force ground truth over all bounded non-increasing
//!   sequences, the sequence-to-walk mapping and the ballot identity.
//! * [`walklab`]: lazy and simple random-walk bridges, persistence
//!   probabilities, return counts and the local limit law of `(Yₙ, Aₙ)`.
//! * [`constants`]: excursion-area distributions, the absorbing chain bounding
//!   `ρ`, Richardson extrapolation and the constant `c`.
//! * [`cli`]: the `graphseq` command line front end.
//!
//! Data-parallel loops go through [`exec::Exec`], which uses rayon when the
//! `parallel` feature is enabled and runs sequentially otherwise.

pub mod bigcount;
pub mod cli;
pub mod constants;
pub mod engine;
pub mod exec;
pub mod export;
pub mod oracle;
pub mod verify;
pub mod walklab;

pub use bigcount::BigCount;
pub use engine::{count_graphic, InitialParity, Layer};
pub use exec::Exec;

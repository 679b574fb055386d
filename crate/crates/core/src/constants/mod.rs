//! Excursion-area laws, the absorbing chain for ρ, extrapolation and the
//! constant `c` in `G(n) ~ c·4ⁿ/n^{3/4}`.

mod cdeg;
mod chain;
mod empirical;
mod pmf;
mod richardson;
mod series;

pub use cdeg::{c_from_rho, persistence_constant, GAMMA_3_4};
pub use chain::{
    levinson, rho_amalgamated, rho_bounds, rho_bounds_exact, AmalgamatedEstimate, ChainSpec,
    ExactRho, RhoEstimate, Solver, MAX_EXACT_GRID, RESIDUAL_TOL,
};
pub use empirical::{c_empirical, parity_gap};
pub use pmf::{area_pmf, area_pmf_float, AreaPmf, PmfMethod};
pub use richardson::{richardson, richardson_table};
pub use series::{series_g, TruncatedSeries, MAX_SERIES_ORDER};

use serde::Serialize;
use thiserror::Error;

use crate::walklab::WalkKind;

#[derive(Debug, Error, PartialEq)]
pub enum ConstantsError {
    #[error("{what}: order {k} outside 1..={max}")]
    Order {
        what: &'static str,
        k: usize,
        max: usize,
    },
    #[error("{0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("singular chain system")]
    Singular,
    #[error("no convergence after {sweeps} sweeps (residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
}

/// Largest truncation for which the area law is computed exactly before
/// rounding; above it the double-precision recursion is used.
pub const EXACT_PMF_LIMIT: usize = 1 << 13;

/// Area law truncated at `k`, exact-then-rounded when affordable.
pub fn pmf_for(kind: WalkKind, k: usize) -> AreaPmf {
    if k <= EXACT_PMF_LIMIT {
        area_pmf(k, kind, PmfMethod::Dp).expect("k ≥ 1")
    } else {
        area_pmf_float(k, kind)
    }
}

/// One row per grid size plus the extrapolated start value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhoTable {
    pub kind: WalkKind,
    pub k: usize,
    pub bounds: Vec<RhoEstimate>,
    pub amalgamated: Vec<AmalgamatedEstimate>,
    /// Richardson apex over the lower bounds in `1/n`.
    pub extrapolated: f64,
}

/// Solves the chain at each grid size with a single area law truncated at
/// `K = max(grids)` and extrapolates the lower bounds.
pub fn estimate_rho(
    kind: WalkKind,
    grids: &[usize],
    solver: Solver,
) -> Result<RhoTable, ConstantsError> {
    let k = grids
        .iter()
        .copied()
        .max()
        .ok_or_else(|| ConstantsError::Invalid("at least one grid size is needed".into()))?;
    let pmf = pmf_for(kind, k);
    let mut bounds = Vec::with_capacity(grids.len());
    let mut amalgamated = Vec::with_capacity(grids.len());
    for &n in grids {
        let spec = ChainSpec::new(n, &pmf)?;
        bounds.push(rho_bounds(&spec, solver)?);
        amalgamated.push(rho_amalgamated(&spec, solver)?);
    }
    let points: Vec<(f64, f64)> = bounds.iter().map(|b| (b.n as f64, b.lower)).collect();
    let extrapolated = if points.len() >= 2 {
        richardson(&points)?
    } else {
        points[0].1
    };
    Ok(RhoTable {
        kind,
        k,
        bounds,
        amalgamated,
        extrapolated,
    })
}

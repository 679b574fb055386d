//! The absorbing chain on `{−, 0, 1, …, n−1, ★}` driven by signed excursion
//! areas.
//!
//! From a state `i ≥ 1` the chain adds an excursion area `X`; landing below 0
//! means `−`, landing at `n` or above means `★`. Writing `h_i` for the
//! probability of reaching 0 before `−` or `★`, and `s_i` for reaching `★`
//! first, both solve `(I − T) v = r` over the inner states `1..n−1`, where
//! `T_{ij} = P(X = j − i)` is a symmetric Toeplitz matrix. Then
//!
//! ```text
//! P₀(hit 0) = P(X = 0) + Σ_j p_j h_j  ≤  ρ  ≤  P₀(hit 0) + P₀(hit ★)
//! ```
//!
//! Since `K ≥ n − 1` is enforced, every in-range jump has known mass and the
//! lumped tails only ever feed `−` and `★`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::pmf::AreaPmf;
use super::ConstantsError;
use crate::walklab::WalkKind;

pub const MAX_EXACT_GRID: usize = 32;
pub const RESIDUAL_TOL: f64 = 1e-12;

/// The chain for grid size `n` and a given area law.
#[derive(Clone, Copy, Debug)]
pub struct ChainSpec<'a> {
    pub n: usize,
    pub pmf: &'a AreaPmf,
}

impl<'a> ChainSpec<'a> {
    pub fn new(n: usize, pmf: &'a AreaPmf) -> Result<Self, ConstantsError> {
        if n < 2 {
            return Err(ConstantsError::Invalid(format!(
                "grid size must be ≥ 2, got {n}"
            )));
        }
        if pmf.k + 1 < n {
            return Err(ConstantsError::Invalid(format!(
                "area law truncated at K = {} but grid {n} needs K ≥ {}",
                pmf.k,
                n - 1
            )));
        }
        Ok(ChainSpec { n, pmf })
    }

    fn inner(&self) -> usize {
        self.n - 1
    }

    /// Full transition matrix over `[−, 0, 1, …, n−1, ★]` in exact
    /// arithmetic; row 1 is the start state.
    pub fn exact_rows(&self) -> Result<Vec<Vec<BigRational>>, ConstantsError> {
        let t = ExactTails::new(self.pmf)?;
        let n = self.n;
        let size = n + 2;
        let mut rows = vec![vec![BigRational::zero(); size]; size];
        rows[0][0] = BigRational::one();
        rows[size - 1][size - 1] = BigRational::one();
        for i in 0..n {
            let r = &mut rows[i + 1];
            // X ≤ −(i+1) leaves downwards, X ≥ n − i leaves upwards
            r[0] = t.at_least(i + 1);
            r[size - 1] = t.at_least(n - i);
            for j in 0..n {
                r[j + 1] = t.prob(j as i64 - i as i64);
            }
        }
        Ok(rows)
    }

    /// Same as [`Self::exact_rows`] in double precision.
    pub fn float_rows(&self) -> Vec<Vec<f64>> {
        let tails = self.pmf.upper_tails();
        let n = self.n;
        let size = n + 2;
        let mut rows = vec![vec![0.0; size]; size];
        rows[0][0] = 1.0;
        rows[size - 1][size - 1] = 1.0;
        for i in 0..n {
            let r = &mut rows[i + 1];
            r[0] = tails[i + 1];
            r[size - 1] = tails[n - i];
            for j in 0..n {
                r[j + 1] = self.pmf.prob(j as i64 - i as i64);
            }
        }
        rows
    }
}

struct ExactTails {
    zero: BigRational,
    p: Vec<BigRational>,
    /// `tails[m] = P(X ≥ m)` for `1 ≤ m ≤ K + 1`.
    tails: Vec<BigRational>,
}

impl ExactTails {
    fn new(pmf: &AreaPmf) -> Result<Self, ConstantsError> {
        let p = pmf
            .exact
            .clone()
            .ok_or_else(|| ConstantsError::Invalid("exact solve needs an exact area law".into()))?;
        let mut tails = vec![BigRational::zero(); pmf.k + 2];
        tails[pmf.k + 1] = pmf.exact_pos_tail().expect("exact");
        for m in (1..=pmf.k).rev() {
            tails[m] = &tails[m + 1] + &p[m];
        }
        Ok(ExactTails {
            zero: pmf.exact_zero_mass(),
            p,
            tails,
        })
    }

    fn prob(&self, x: i64) -> BigRational {
        match x.unsigned_abs() as usize {
            0 => self.zero.clone(),
            i => self.p.get(i).cloned().unwrap_or_else(BigRational::zero),
        }
    }

    fn at_least(&self, m: usize) -> BigRational {
        if m == 0 {
            return &self.tails[1] + &self.zero;
        }
        self.tails
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.tails.last().cloned().unwrap())
    }
}

/// Exact solution of a small chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactRho {
    pub n: usize,
    pub lower: BigRational,
    pub upper: BigRational,
    /// `P₀(hit ★)`.
    pub hit_star: BigRational,
    /// `h_{i0}` for `i = 1..n−1`.
    pub h0: Vec<BigRational>,
    /// `h_{i★}` for `i = 1..n−1`.
    pub h_star: Vec<BigRational>,
    /// Start value of the chain with `n−1` and `★` merged.
    pub amalgamated: BigRational,
}

/// How the inner linear systems are solved in floating point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Solver {
    /// Levinson recursion for the symmetric Toeplitz system, followed by
    /// residual-driven refinement.
    Levinson,
    /// Gauss–Seidel sweeps until the residual falls below the tolerance.
    GaussSeidel { max_sweeps: usize },
}

/// Float bounds on ρ for one grid size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhoEstimate {
    pub n: usize,
    pub k: usize,
    pub kind: WalkKind,
    pub solver: Solver,
    pub lower: f64,
    pub upper: f64,
    /// Largest residual `|(I − T)v − r|` over both systems.
    pub residual: f64,
    /// Both bounds are rigorous.
    pub rigorous: bool,
}

/// Single estimate from the chain with `n−1` and `★` merged. Not a proven
/// bound: it presumes `h_{i0}` is decreasing in `i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AmalgamatedEstimate {
    pub n: usize,
    pub k: usize,
    pub kind: WalkKind,
    pub estimate: f64,
    pub rigorous: bool,
}

pub fn rho_bounds_exact(spec: &ChainSpec) -> Result<ExactRho, ConstantsError> {
    let n = spec.n;
    if n > MAX_EXACT_GRID {
        return Err(ConstantsError::Invalid(format!(
            "exact chain solve supports n ≤ {MAX_EXACT_GRID}, got {n}"
        )));
    }
    let t = ExactTails::new(spec.pmf)?;
    let m = spec.inner();
    // inner state i (0-based) is chain state i + 1
    let mut a = vec![vec![BigRational::zero(); m]; m];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = -t.prob(j as i64 - i as i64);
            if i == j {
                *v += BigRational::one();
            }
        }
    }
    let b: Vec<BigRational> = (1..=m).map(|i| t.prob(i as i64)).collect();
    let c: Vec<BigRational> = (1..=m).map(|i| t.at_least(n - i)).collect();
    let sol = gauss_exact(a, vec![b, c])?;
    let (h0, h_star) = (sol[0].clone(), sol[1].clone());

    let dot = |v: &[BigRational]| -> BigRational {
        v.iter()
            .enumerate()
            .map(|(j, x)| t.prob(j as i64 + 1) * x)
            .sum()
    };
    let lower = t.zero.clone() + dot(&h0);
    let hit_star = t.at_least(n) + dot(&h_star);
    let upper = &lower + &hit_star;

    let last = m - 1;
    let denom = BigRational::one() - &h_star[last];
    let x_last = &h0[last] / &denom;
    let merged: Vec<BigRational> = h0
        .iter()
        .zip(&h_star)
        .map(|(h, s)| h + s * &x_last)
        .collect();
    let amalgamated = t.zero.clone() + dot(&merged) + t.at_least(n) * &x_last;
    Ok(ExactRho {
        n,
        lower,
        upper,
        hit_star,
        h0,
        h_star,
        amalgamated,
    })
}

// Gaussian elimination with exact pivots on a shared matrix.
fn gauss_exact(
    mut a: Vec<Vec<BigRational>>,
    mut rhs: Vec<Vec<BigRational>>,
) -> Result<Vec<Vec<BigRational>>, ConstantsError> {
    let m = a.len();
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(ConstantsError::Singular)?;
        a.swap(col, pivot);
        for r in rhs.iter_mut() {
            r.swap(col, pivot);
        }
        let inv = BigRational::one() / &a[col][col];
        for row in col + 1..m {
            if a[row][col].is_zero() {
                continue;
            }
            let f = &a[row][col] * &inv;
            for k in col..m {
                let d = &f * &a[col][k];
                a[row][k] -= d;
            }
            for r in rhs.iter_mut() {
                let d = &f * &r[col];
                r[row] -= d;
            }
        }
    }
    let mut out = Vec::with_capacity(rhs.len());
    for r in rhs {
        let mut x = vec![BigRational::zero(); m];
        for row in (0..m).rev() {
            let mut s = r[row].clone();
            for k in row + 1..m {
                s -= &a[row][k] * &x[k];
            }
            x[row] = s / &a[row][row];
        }
        debug_assert!(x.iter().all(|v| !v.is_negative()));
        out.push(x);
    }
    Ok(out)
}

/// First column of `I − T`.
fn system_column(spec: &ChainSpec) -> Vec<f64> {
    (0..spec.inner())
        .map(|d| {
            if d == 0 {
                1.0 - spec.pmf.zero_mass()
            } else {
                -spec.pmf.p[d]
            }
        })
        .collect()
}

fn toeplitz_residual(col: &[f64], x: &[f64], b: &[f64]) -> f64 {
    let m = col.len();
    (0..m)
        .map(|i| {
            let ax: f64 = (0..m).map(|j| col[i.abs_diff(j)] * x[j]).sum();
            (b[i] - ax).abs()
        })
        .fold(0.0, f64::max)
}

/// Solves the symmetric Toeplitz system with first column `col` by the
/// Levinson recursion (positive definite case).
pub fn levinson(col: &[f64], b: &[f64]) -> Vec<f64> {
    let m = col.len();
    assert_eq!(b.len(), m);
    if m == 0 {
        return Vec::new();
    }
    let t0 = col[0];
    let r: Vec<f64> = col[1..].iter().map(|v| v / t0).collect();
    let b: Vec<f64> = b.iter().map(|v| v / t0).collect();
    let mut x = vec![b[0]];
    if m == 1 {
        return x;
    }
    let mut y = vec![-r[0]];
    let mut beta = 1.0;
    let mut alpha = -r[0];
    for k in 1..m {
        beta *= 1.0 - alpha * alpha;
        let dot: f64 = (0..k).map(|i| r[i] * x[k - 1 - i]).sum();
        let mu = (b[k] - dot) / beta;
        for i in 0..k {
            x[i] += mu * y[k - 1 - i];
        }
        x.push(mu);
        if k < m - 1 {
            let dot: f64 = (0..k).map(|i| r[i] * y[k - 1 - i]).sum();
            alpha = -(r[k] + dot) / beta;
            let z: Vec<f64> = (0..k).map(|i| y[i] + alpha * y[k - 1 - i]).collect();
            y = z;
            y.push(alpha);
        }
    }
    x
}

fn solve_levinson(col: &[f64], b: &[f64]) -> (Vec<f64>, f64) {
    let mut x = levinson(col, b);
    let mut res = toeplitz_residual(col, &x, b);
    for _ in 0..4 {
        if res < RESIDUAL_TOL * 1e-2 {
            break;
        }
        let m = col.len();
        let r: Vec<f64> = (0..m)
            .map(|i| b[i] - (0..m).map(|j| col[i.abs_diff(j)] * x[j]).sum::<f64>())
            .collect();
        let d = levinson(col, &r);
        let cand: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + b).collect();
        let cand_res = toeplitz_residual(col, &cand, b);
        if cand_res >= res {
            break;
        }
        x = cand;
        res = cand_res;
    }
    (x, res)
}

fn solve_gauss_seidel(
    col: &[f64],
    b: &[f64],
    max_sweeps: usize,
) -> Result<(Vec<f64>, f64), ConstantsError> {
    let m = col.len();
    let mut x = vec![0.0; m];
    for sweep in 1..=max_sweeps {
        for i in 0..m {
            let off: f64 = (0..m)
                .filter(|&j| j != i)
                .map(|j| col[i.abs_diff(j)] * x[j])
                .sum();
            x[i] = (b[i] - off) / col[0];
        }
        if sweep % 8 == 0 || sweep == max_sweeps {
            let res = toeplitz_residual(col, &x, b);
            if res < RESIDUAL_TOL {
                return Ok((x, res));
            }
        }
    }
    Err(ConstantsError::NoConvergence {
        sweeps: max_sweeps,
        residual: toeplitz_residual(col, &x, b),
    })
}

struct FloatSolution {
    h0: Vec<f64>,
    h_star: Vec<f64>,
    residual: f64,
}

fn solve_float(spec: &ChainSpec, solver: Solver) -> Result<FloatSolution, ConstantsError> {
    let n = spec.n;
    let tails = spec.pmf.upper_tails();
    let col = system_column(spec);
    let b: Vec<f64> = (1..n).map(|i| spec.pmf.p[i]).collect();
    let c: Vec<f64> = (1..n).map(|i| tails[n - i]).collect();
    let ((h0, r0), (h_star, r1)) = match solver {
        Solver::Levinson => (solve_levinson(&col, &b), solve_levinson(&col, &c)),
        Solver::GaussSeidel { max_sweeps } => (
            solve_gauss_seidel(&col, &b, max_sweeps)?,
            solve_gauss_seidel(&col, &c, max_sweeps)?,
        ),
    };
    let residual = r0.max(r1);
    if residual >= RESIDUAL_TOL {
        return Err(ConstantsError::NoConvergence {
            sweeps: 0,
            residual,
        });
    }
    Ok(FloatSolution {
        h0,
        h_star,
        residual,
    })
}

fn start_value(pmf: &AreaPmf, v: &[f64]) -> f64 {
    // the sum is accumulated from the smallest terms up
    v.iter()
        .enumerate()
        .rev()
        .map(|(j, x)| pmf.p[j + 1] * x)
        .sum()
}

pub fn rho_bounds(spec: &ChainSpec, solver: Solver) -> Result<RhoEstimate, ConstantsError> {
    let sol = solve_float(spec, solver)?;
    let tails = spec.pmf.upper_tails();
    let lower = spec.pmf.zero_mass() + start_value(spec.pmf, &sol.h0);
    let hit_star = tails[spec.n] + start_value(spec.pmf, &sol.h_star);
    Ok(RhoEstimate {
        n: spec.n,
        k: spec.pmf.k,
        kind: spec.pmf.kind,
        solver,
        lower,
        upper: lower + hit_star,
        residual: sol.residual,
        rigorous: true,
    })
}

/// Merging `n−1` with `★` turns the matrix into `I − T − c·e_lastᵀ` where
/// `c` is the ★ right-hand side, so the merged solution is
/// `h + s·x_last` with `x_last = h_last / (1 − s_last)`.
pub fn rho_amalgamated(
    spec: &ChainSpec,
    solver: Solver,
) -> Result<AmalgamatedEstimate, ConstantsError> {
    let sol = solve_float(spec, solver)?;
    let tails = spec.pmf.upper_tails();
    let last = spec.inner() - 1;
    let x_last = sol.h0[last] / (1.0 - sol.h_star[last]);
    let merged: Vec<f64> = sol
        .h0
        .iter()
        .zip(&sol.h_star)
        .map(|(h, s)| h + s * x_last)
        .collect();
    let estimate = spec.pmf.zero_mass() + start_value(spec.pmf, &merged) + tails[spec.n] * x_last;
    Ok(AmalgamatedEstimate {
        n: spec.n,
        k: spec.pmf.k,
        kind: spec.pmf.kind,
        estimate,
        rigorous: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::pmf::{area_pmf, area_pmf_float, PmfMethod};

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn grid_two_worked_example() {
        let pmf = area_pmf(4, WalkKind::Lazy, PmfMethod::Gf).unwrap();
        let spec = ChainSpec::new(2, &pmf).unwrap();
        let rows = spec.exact_rows().unwrap();
        let expect = [
            [r(1, 1), r(0, 1), r(0, 1), r(0, 1)],
            [r(1, 4), r(1, 2), r(1, 16), r(3, 16)],
            [r(3, 16), r(1, 16), r(1, 2), r(1, 4)],
            [r(0, 1), r(0, 1), r(0, 1), r(1, 1)],
        ];
        for (row, e) in rows.iter().zip(&expect) {
            assert_eq!(row.as_slice(), e.as_slice());
        }
        let x = rho_bounds_exact(&spec).unwrap();
        assert_eq!(x.h0, vec![r(1, 8)]);
        assert_eq!(x.h_star, vec![r(1, 2)]);
        assert_eq!(x.lower, r(65, 128));
        assert_eq!(x.hit_star, r(7, 32));
        assert_eq!(x.upper, r(93, 128));
        // merged state 1 ∪ ★: h = 1/16 + 3/4·h, start = 1/2 + 1/4·h
        assert_eq!(x.amalgamated, r(9, 16));
    }

    #[test]
    fn rows_sum_to_one() {
        let pmf = area_pmf(12, WalkKind::Lazy, PmfMethod::Dp).unwrap();
        for n in 2..=12 {
            let spec = ChainSpec::new(n, &pmf).unwrap();
            for row in spec.exact_rows().unwrap() {
                assert!(row.iter().sum::<BigRational>().is_one());
            }
            for row in spec.float_rows() {
                assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn truncation_must_cover_grid() {
        let pmf = area_pmf(4, WalkKind::Lazy, PmfMethod::Dp).unwrap();
        assert!(ChainSpec::new(6, &pmf).is_err());
        assert!(ChainSpec::new(1, &pmf).is_err());
    }

    #[test]
    fn float_solvers_match_exact() {
        for kind in [WalkKind::Lazy, WalkKind::Simple] {
            let pmf = area_pmf(20, kind, PmfMethod::Dp).unwrap();
            for n in [2, 3, 8, 20] {
                let spec = ChainSpec::new(n, &pmf).unwrap();
                let x = rho_bounds_exact(&spec).unwrap();
                use num_traits::ToPrimitive;
                for solver in [
                    Solver::Levinson,
                    Solver::GaussSeidel {
                        max_sweeps: 100_000,
                    },
                ] {
                    // residual-based stopping leaves Gauss–Seidel a little less accurate
                    let tol = match solver {
                        Solver::Levinson => 1e-13,
                        Solver::GaussSeidel { .. } => 1e-11,
                    };
                    let e = rho_bounds(&spec, solver).unwrap();
                    assert!((e.lower - x.lower.to_f64().unwrap()).abs() < tol);
                    let d = (e.upper - x.upper.to_f64().unwrap()).abs();
                    assert!(d < tol, "{kind:?} n={n} {solver:?} {d:e}");
                    let a = rho_amalgamated(&spec, solver).unwrap();
                    assert!((a.estimate - x.amalgamated.to_f64().unwrap()).abs() < tol);
                }
            }
        }
    }

    #[test]
    fn levinson_agrees_with_gauss_seidel_on_larger_grid() {
        let pmf = area_pmf_float(200, WalkKind::Lazy);
        let spec = ChainSpec::new(150, &pmf).unwrap();
        let a = rho_bounds(&spec, Solver::Levinson).unwrap();
        let b = rho_bounds(
            &spec,
            Solver::GaussSeidel {
                max_sweeps: 200_000,
            },
        )
        .unwrap();
        assert!((a.lower - b.lower).abs() < 1e-11);
        assert!((a.upper - b.upper).abs() < 1e-11);
    }

    #[test]
    fn gauss_seidel_reports_non_convergence() {
        let pmf = area_pmf_float(100, WalkKind::Lazy);
        let spec = ChainSpec::new(100, &pmf).unwrap();
        assert!(matches!(
            rho_bounds(&spec, Solver::GaussSeidel { max_sweeps: 2 }),
            Err(ConstantsError::NoConvergence { .. })
        ));
    }

    #[test]
    fn bounds_and_merged_estimate_are_ordered() {
        let pmf = area_pmf_float(512, WalkKind::Lazy);
        let mut prev = 0.0;
        for n in [4, 16, 64, 256, 512] {
            let spec = ChainSpec::new(n, &pmf).unwrap();
            let b = rho_bounds(&spec, Solver::Levinson).unwrap();
            let a = rho_amalgamated(&spec, Solver::Levinson).unwrap();
            assert!(b.lower >= prev && b.lower <= b.upper);
            assert!(b.lower <= a.estimate && a.estimate <= b.upper, "n={n}");
            prev = b.lower;
        }
    }
}

//! Cross-module consistency checks run by `graphseq verify`.
//!
//! Each check compares two independent computations (or a computation with
//! a known value) at sizes small enough to finish in seconds.

use num_rational::{BigRational, Rational64};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bigcount::BigCount;
use crate::constants::{self, ChainSpec, PmfMethod};
use crate::engine::{self, Checkpoint, Engine, InitialParity};
use crate::export;
use crate::oracle;
use crate::walklab::{self, EndCondition, WalkKind};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

type Check = fn() -> Result<String, String>;

const CHECKS: &[(&str, Check)] = &[
    ("engine-vs-oracle", engine_vs_oracle),
    ("growth-bounds", growth_bounds),
    ("erdos-gallai-vs-havel-hakimi", eg_vs_hh),
    ("sequence-to-walk", sequence_to_walk),
    ("ballot-identity", ballot_identity),
    ("persistence-vs-dominating", persistence_vs_dominating),
    ("end-ratio", end_ratio),
    ("flip-map", flip_map),
    ("bridge-returns", bridge_returns),
    ("joint-law", joint_law),
    ("area-law", area_law),
    ("chain-worked-example", chain_example),
    ("c-from-rho", c_value),
    ("checkpoint-round-trip", checkpoint_round_trip),
    ("on-demand-extension", on_demand),
    ("bfile-csv-round-trip", export_round_trip),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

/// Runs every check; a panic inside a check counts as a failure.
pub fn run_verification() -> VerifyReport {
    let checks = CHECKS
        .iter()
        .map(|&(name, f)| {
            let outcome =
                std::panic::catch_unwind(f).unwrap_or_else(|_| Err("check panicked".to_string()));
            match outcome {
                Ok(detail) => CheckResult {
                    name,
                    passed: true,
                    detail,
                },
                Err(detail) => CheckResult {
                    name,
                    passed: false,
                    detail,
                },
            }
        })
        .collect();
    VerifyReport { checks }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn engine_counts(max_n: u32, parity: InitialParity) -> Vec<BigCount> {
    let mut e = Engine::new(parity);
    let mut out = vec![e.count()];
    while e.depth() + 1 < max_n {
        out.push(e.step().expect("no memory limit"));
    }
    out
}

fn engine_vs_oracle() -> Result<String, String> {
    let max = 11;
    let g = engine_counts(max, InitialParity::Even);
    let h = engine_counts(max, InitialParity::Odd);
    for n in 1..=max {
        let b = oracle::brute_counts(n as usize);
        let i = n as usize - 1;
        ensure(g[i] == b.g.into() && h[i] == b.h.into(), || {
            format!(
                "n={n}: engine ({}, {}) vs oracle ({}, {})",
                g[i], h[i], b.g, b.h
            )
        })?;
    }
    Ok(format!("G, H agree for n ≤ {max}"))
}

fn growth_bounds() -> Result<String, String> {
    let max = 80;
    let g = engine_counts(max, InitialParity::Even);
    let h = engine_counts(max, InitialParity::Odd);
    for i in 1..g.len() {
        ensure(g[i].0 >= g[i - 1].0, || {
            format!("G decreases at n={}", i + 1)
        })?;
        ensure(&g[i].0 * 2u8 >= &g[i - 1].0 + &h[i - 1].0, || {
            format!("2G(n+1) < G(n) + H(n) at n={i}")
        })?;
    }
    Ok(format!("monotone and 2G(n+1) ≥ G(n)+H(n) for n ≤ {max}"))
}

fn eg_vs_hh() -> Result<String, String> {
    let mut total = 0;
    for n in 1..=9 {
        for d in oracle::enumerate(n) {
            total += 1;
            ensure(
                oracle::is_graphic(&d).is_graphic() == oracle::havel_hakimi(&d),
                || format!("disagree on {:?}", d.as_slice()),
            )?;
        }
    }
    Ok(format!("{total} sequences"))
}

fn sequence_to_walk() -> Result<String, String> {
    for n in 1..=9 {
        for d in oracle::enumerate(n) {
            let m = oracle::to_walk(&d);
            let t = oracle::is_graphic(&d);
            ensure(m.end_value == 0 || m.end_value == -1, || {
                format!("end of {d:?}")
            })?;
            ensure(t.dominates == m.area_nonnegative(), || {
                format!("dominating {d:?}")
            })?;
            ensure(t.even == m.area_even(), || format!("parity {d:?}"))?;
        }
    }
    Ok("graphic ⟺ non-negative even area for n ≤ 9".into())
}

fn ballot_identity() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in 2..=5 {
        let target = oracle::double_factorial_odd(n as u32);
        for _ in 0..10 {
            let x = oracle::random_sum_distinct(n, &mut rng);
            let c = oracle::ballot_count(&x).map_err(|e| e.to_string())?;
            ensure(c == target, || format!("{x:?}: {c} ≠ {target}"))?;
        }
        let ones = vec![Rational64::from_integer(1); n];
        let c = oracle::ballot_count(&ones).map_err(|e| e.to_string())?;
        ensure(c >= target, || format!("all-equal n={n}: {c} < {target}"))?;
    }
    Ok("(2n−1)!! on sum-distinct vectors, ≥ on ties, n ≤ 5".into())
}

fn persistence_vs_dominating() -> Result<String, String> {
    for n in 2..=9usize {
        let p = walklab::persistence_exact(n as u32 - 1, EndCondition::ZeroOrMinusOne)
            .map_err(|e| e.to_string())?;
        let d = oracle::brute_counts(n).d;
        let frac = BigRational::new(d.into(), oracle::sequence_count(n as u64).into());
        ensure(p == frac, || format!("n={n}: {p} vs {frac}"))?;
    }
    Ok("dominating fraction = walk persistence for n ≤ 9".into())
}

fn end_ratio() -> Result<String, String> {
    let half = BigRational::new(1.into(), 2.into());
    for n in 1..=14 {
        let r = walklab::persistence_exact(n, EndCondition::ZeroOrMinusOne)
            .map_err(|e| e.to_string())?
            / walklab::persistence_exact(n, EndCondition::Zero).map_err(|e| e.to_string())?;
        ensure(
            r >= half && r <= BigRational::from_integer(1.into()),
            || format!("n={n}: ratio {r}"),
        )?;
    }
    Ok("ratio in [1/2, 1] for n ≤ 14".into())
}

fn flip_map() -> Result<String, String> {
    for n in 1..=8 {
        let c = walklab::check_flip_map(n);
        ensure(c.holds(), || format!("n={n}: {c:?}"))?;
    }
    Ok("injective with valid images for n ≤ 8".into())
}

fn bridge_returns() -> Result<String, String> {
    for n in 1..=7u64 {
        // tail differences give P(N_n = k); they must be non-negative and
        // sum to 1
        let mut total = BigRational::from_integer(0.into());
        for k in 1..=n {
            let next = if k < n {
                walklab::returns_tail(n, k + 1).map_err(|e| e.to_string())?
            } else {
                BigRational::from_integer(0.into())
            };
            let mass = walklab::returns_tail(n, k).map_err(|e| e.to_string())? - next;
            ensure(mass >= BigRational::from_integer(0.into()), || {
                format!("n={n} k={k}")
            })?;
            total += mass;
        }
        ensure(total == BigRational::from_integer(1.into()), || {
            format!("n={n}: {total}")
        })?;
    }
    Ok("return-count law is a distribution for n ≤ 7".into())
}

fn joint_law() -> Result<String, String> {
    for n in [1, 10, 40] {
        let t = walklab::joint_dist(n).map_err(|e| e.to_string())?;
        ensure((t.total() - 1.0).abs() < 1e-12, || {
            format!("n={n} total {}", t.total())
        })?;
        ensure(t.is_symmetric(), || format!("n={n} not symmetric"))?;
    }
    let e25 = walklab::llt_error(25).map_err(|e| e.to_string())?;
    let e50 = walklab::llt_error(50).map_err(|e| e.to_string())?;
    ensure(e50 < e25, || format!("llt error {e50} ≥ {e25}"))?;
    Ok(format!("llt error {e25:.4} (n=25) → {e50:.4} (n=50)"))
}

fn area_law() -> Result<String, String> {
    let gf = constants::area_pmf(30, WalkKind::Lazy, PmfMethod::Gf).map_err(|e| e.to_string())?;
    let dp = constants::area_pmf(30, WalkKind::Lazy, PmfMethod::Dp).map_err(|e| e.to_string())?;
    ensure(gf.exact == dp.exact, || {
        "series and first-passage laws differ".into()
    })?;
    Ok("series = first-passage recursion through area 30".into())
}

fn chain_example() -> Result<String, String> {
    let pmf = constants::area_pmf(4, WalkKind::Lazy, PmfMethod::Dp).map_err(|e| e.to_string())?;
    let spec = ChainSpec::new(2, &pmf).map_err(|e| e.to_string())?;
    let x = constants::rho_bounds_exact(&spec).map_err(|e| e.to_string())?;
    let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
    ensure(x.lower == r(65, 128) && x.upper == r(93, 128), || {
        format!("{} ≤ rho ≤ {}", x.lower, x.upper)
    })?;
    Ok(format!("{} ≤ rho ≤ {}", x.lower, x.upper))
}

fn c_value() -> Result<String, String> {
    let c = constants::c_from_rho(0.515802638).map_err(|e| e.to_string())?;
    ensure((c - 0.099094083).abs() < 1e-8, || format!("c = {c}"))?;
    Ok(format!("c = {c:.9}"))
}

fn checkpoint_round_trip() -> Result<String, String> {
    let mut e = Engine::new(InitialParity::Odd);
    for _ in 0..20 {
        e.step().map_err(|e| e.to_string())?;
    }
    let ck = Checkpoint::new(e.into_layer());
    let mut buf = Vec::new();
    ck.write_to(&mut buf).map_err(|e| e.to_string())?;
    let back = Checkpoint::read_from(buf.as_slice()).map_err(|e| e.to_string())?;
    ensure(back == ck, || "layer changed".into())?;
    Ok(format!("{} bytes at depth 20", buf.len()))
}

fn on_demand() -> Result<String, String> {
    let mut e = Engine::new(InitialParity::Even);
    for _ in 0..12 {
        e.step().map_err(|e| e.to_string())?;
    }
    let ck = Checkpoint::new(e.into_layer());
    let v = engine::extend_on_demand(&ck, 18).map_err(|e| e.to_string())?;
    let full = engine::count_graphic(19, InitialParity::Even).map_err(|e| e.to_string())?;
    ensure(v == full, || format!("{v} ≠ {full}"))?;
    Ok(format!("G(19) = {v}"))
}

fn export_round_trip() -> Result<String, String> {
    let g = engine_counts(30, InitialParity::Even);
    let pairs: Vec<(u32, BigCount)> = g
        .iter()
        .enumerate()
        .map(|(i, v)| (i as u32 + 1, v.clone()))
        .collect();
    let mut bfile = Vec::new();
    export::write_bfile(&mut bfile, &pairs).map_err(|e| e.to_string())?;
    let parsed = export::parse_bfile(bfile.as_slice()).map_err(|e| e.to_string())?;
    let rows: Vec<export::CountRow> = parsed
        .into_iter()
        .map(|(n, g)| export::CountRow { n, g, h: None })
        .collect();
    let mut csv = Vec::new();
    export::write_counts_csv(&mut csv, &rows).map_err(|e| e.to_string())?;
    let back = export::parse_counts_csv(csv.as_slice()).map_err(|e| e.to_string())?;
    let back: Vec<(u32, BigCount)> = back.into_iter().map(|r| (r.n, r.g)).collect();
    ensure(back == pairs, || "values changed".into())?;
    let ratio = export::count_ratio(&g[29], &g[28]);
    Ok(format!(
        "30 rows, G(30)/G(29) = {}",
        ratio.to_f64().unwrap_or(f64::NAN)
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes() {
        let report = run_verification();
        for c in &report.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert_eq!(report.checks.len(), check_names().len());
    }
}

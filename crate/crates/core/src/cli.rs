//! The `graphseq` command line.
//!
//! Exit status: 0 on success, 1 on runtime errors, 2 on bad arguments, 3
//! when the memory budget stopped a `count` run (after checkpointing), and
//! 4 when `verify` found a violation.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bigcount::BigCount;
use crate::constants::{self, ChainSpec, ConstantsError, Solver};
use crate::engine::{self, Checkpoint, Engine, EngineError, InitialParity};
use crate::exec::{self, Exec};
use crate::export::{self, CountRow, ExportError, RunStore};
use crate::oracle;
use crate::verify;
use crate::walklab::{self, EndCondition, WalkError, WalkKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_BAD_ARGS: i32 = 2;
pub const EXIT_MEMORY_LIMIT: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

pub const CHECKPOINT_DIR_ENV: &str = "GRAPHSEQ_CHECKPOINT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "graphseq",
    version,
    about = "Graphic degree sequence counts and walk constants"
)]
pub struct Cli {
    /// Worker threads for layer advances and Monte Carlo shards (default:
    /// all cores). One worker runs everything sequentially.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,

    /// Directory for layer checkpoints.
    #[arg(long, global = true, env = CHECKPOINT_DIR_ENV)]
    pub checkpoint_dir: Option<PathBuf>,

    /// Directory receiving a manifest and append-only result files.
    #[arg(long, global = true)]
    pub run_dir: Option<PathBuf>,

    /// Output format for count tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Bfile)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Bfile,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl From<Parity> for InitialParity {
    fn from(p: Parity) -> Self {
        match p {
            Parity::Even => InitialParity::Even,
            Parity::Odd => InitialParity::Odd,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Lazy,
    Simple,
}

impl From<Kind> for WalkKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Lazy => WalkKind::Lazy,
            Kind::Simple => WalkKind::Simple,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum End {
    Zero,
    ZeroOrMinusOne,
}

impl From<End> for EndCondition {
    fn from(e: End) -> Self {
        match e {
            End::Zero => EndCondition::Zero,
            End::ZeroOrMinusOne => EndCondition::ZeroOrMinusOne,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverArg {
    Levinson,
    GaussSeidel,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stream G(n) and H(n) for n = 1..=max-n.
    Count(CountArgs),
    /// Extend a checkpointed layer to a single count without storing layers.
    CountOndemand(OndemandArgs),
    /// Brute-force tables and cross-checks for small n.
    Oracle(OracleArgs),
    /// Persistence probability of the area of a lazy bridge.
    Walk(WalkArgs),
    /// Bounds on the persistence constant from the absorbing chain.
    Rho(RhoArgs),
    /// Extrapolated ρ, ρ̂ and the derived constants.
    Constants(ConstantsArgs),
    /// Run the cross-module property suite.
    Verify,
}

#[derive(Debug, Args, Serialize)]
pub struct CountArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_n: u32,
    /// Byte ceiling for the two live layer pairs.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub memory_limit: Option<u64>,
    /// Write checkpoints every this many layers (needs a checkpoint dir).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub checkpoint_every: Option<u32>,
    /// Continue from the checkpoints in the checkpoint dir.
    #[arg(long)]
    pub resume: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct OndemandArgs {
    /// Checkpoint file; defaults to the parity's file in the checkpoint dir.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Parity::Even)]
    pub parity: Parity,
    /// Sequence length to reach.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=15))]
    pub max_n: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct WalkArgs {
    /// Bridge length.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = walklab::DEFAULT_SHARDS, value_parser = clap::value_parser!(u32).range(1..))]
    pub shards: u32,
    #[arg(long, value_enum, default_value_t = End::Zero)]
    pub end: End,
    /// Also report the exact probability (n ≤ 40).
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct RhoArgs {
    /// Grid sizes n (comma separated or repeated).
    #[arg(long, value_delimiter = ',', required = true, value_parser = clap::value_parser!(u64).range(2..))]
    pub grid: Vec<u64>,
    #[arg(long, value_enum, default_value_t = Kind::Lazy)]
    pub kind: Kind,
    /// Coefficient order K of the area law (default: the largest grid).
    #[arg(long)]
    pub coeff_order: Option<usize>,
    /// Solve in exact rationals (n ≤ 32).
    #[arg(long)]
    pub exact: bool,
    #[arg(long, value_enum, default_value_t = SolverArg::Levinson)]
    pub solver: SolverArg,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_sweeps: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstantsArgs {
    /// Grid sizes used for the extrapolation.
    #[arg(long, value_delimiter = ',', default_values_t = [1024u64, 2048, 4096], value_parser = clap::value_parser!(u64).range(2..))]
    pub grid: Vec<u64>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("memory limit reached at n = {n}; checkpoints written to {dir}")]
    MemoryLimit { n: u32, dir: String },
    #[error("verification failed")]
    VerifyFailed,
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Export(#[from] ExportError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Constants(#[from] ConstantsError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_BAD_ARGS,
            CliError::MemoryLimit { .. } => EXIT_MEMORY_LIMIT,
            CliError::VerifyFailed => EXIT_VERIFY_FAILED,
            _ => EXIT_FAILURE,
        }
    }
}

type CliResult = Result<(), CliError>;

/// Parses `args` (including the program name) and runs the command against
/// the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_BAD_ARGS;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let exec = match cli.workers {
        Some(1) => Exec::Sequential,
        Some(w) => {
            // the global pool can only be built once per process
            let _ = exec::set_workers(w as usize);
            Exec::Parallel
        }
        None => Exec::default(),
    };
    let store = match &cli.run_dir {
        Some(dir) => Some(RunStore::open(dir, &manifest(cli))?),
        None => None,
    };
    let ctx = Ctx {
        cli,
        exec,
        store: store.as_ref(),
    };
    match &cli.command {
        Command::Count(a) => ctx.count(a, out, err),
        Command::CountOndemand(a) => ctx.count_ondemand(a, out),
        Command::Oracle(a) => ctx.oracle(a, out),
        Command::Walk(a) => ctx.walk(a, out),
        Command::Rho(a) => ctx.rho(a, out),
        Command::Constants(a) => ctx.constants(a, out),
        Command::Verify => ctx.verify(out),
    }
}

fn manifest(cli: &Cli) -> serde_json::Value {
    let (name, args) = match &cli.command {
        Command::Count(a) => ("count", json!(a)),
        Command::CountOndemand(a) => ("count-ondemand", json!(a)),
        Command::Oracle(a) => ("oracle", json!(a)),
        Command::Walk(a) => ("walk", json!(a)),
        Command::Rho(a) => ("rho", json!(a)),
        Command::Constants(a) => ("constants", json!(a)),
        Command::Verify => ("verify", json!({})),
    };
    json!({
        "command": name,
        "args": args,
        "format": cli.format,
        "workers": cli.workers,
        "checkpoint_dir": cli.checkpoint_dir,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

struct Ctx<'a> {
    cli: &'a Cli,
    exec: Exec,
    store: Option<&'a RunStore>,
}

fn checkpoint_path(dir: &Path, parity: InitialParity) -> PathBuf {
    match parity {
        InitialParity::Even => dir.join("even.ckpt"),
        InitialParity::Odd => dir.join("odd.ckpt"),
    }
}

impl Ctx<'_> {
    fn emit(&self, out: &mut dyn Write, file: &str, line: &str) -> CliResult {
        writeln!(out, "{line}")?;
        if let Some(s) = self.store {
            s.append(file, line)?;
        }
        Ok(())
    }

    fn count_row(&self, out: &mut dyn Write, row: &CountRow, prev: Option<&CountRow>) -> CliResult {
        match self.cli.format {
            Format::Bfile => self.emit(out, "counts.bfile", &export::bfile_line(row.n, &row.g)),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(export::counts_record(row, prev))
                    .map_err(ExportError::from)?;
                let bytes = w
                    .into_inner()
                    .map_err(|e| io::Error::other(e.to_string()))?;
                let line = String::from_utf8_lossy(&bytes);
                self.emit(out, "counts.csv", line.trim_end())
            }
        }
    }

    fn save_checkpoints(&self, dir: &Path, g: &Engine, h: &Engine) -> CliResult {
        std::fs::create_dir_all(dir)?;
        for e in [g, h] {
            Checkpoint::new(e.layer().clone()).save(&checkpoint_path(dir, e.layer().parity()))?;
        }
        Ok(())
    }

    fn count(&self, a: &CountArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
        let dir = self.cli.checkpoint_dir.as_deref();
        if (a.resume || a.checkpoint_every.is_some()) && dir.is_none() {
            return Err(CliError::Usage(format!(
                "--resume and --checkpoint-every need --checkpoint-dir or {CHECKPOINT_DIR_ENV}"
            )));
        }
        let (mut g, mut h) = if a.resume {
            let dir = dir.expect("checked above");
            let load = |p| Checkpoint::load(&checkpoint_path(dir, p));
            let (cg, ch) = (load(InitialParity::Even)?, load(InitialParity::Odd)?);
            if cg.depth() != ch.depth() {
                return Err(CliError::Usage(
                    "even and odd checkpoints differ in depth".into(),
                ));
            }
            (Engine::from_layer(cg.layer), Engine::from_layer(ch.layer))
        } else {
            (
                Engine::new(InitialParity::Even),
                Engine::new(InitialParity::Odd),
            )
        };
        g = g.with_exec(self.exec);
        h = h.with_exec(self.exec);

        if self.cli.format == Format::Csv {
            self.emit(out, "counts.csv", &export::COUNTS_HEADER.join(","))?;
        }
        let mut prev: Option<CountRow> = None;
        loop {
            let n = g.depth() + 1;
            if n > a.max_n {
                break;
            }
            let row = CountRow {
                n,
                g: g.count(),
                h: Some(h.count()),
            };
            self.count_row(out, &row, prev.as_ref())?;
            prev = Some(row);
            if n == a.max_n {
                break;
            }
            if let Some(limit) = a.memory_limit {
                if g.next_step_bytes() + h.next_step_bytes() > limit {
                    let Some(dir) = dir else {
                        return Err(CliError::MemoryLimit {
                            n,
                            dir: "(no checkpoint dir)".into(),
                        });
                    };
                    self.save_checkpoints(dir, &g, &h)?;
                    return Err(CliError::MemoryLimit {
                        n,
                        dir: dir.display().to_string(),
                    });
                }
            }
            g.step()?;
            h.step()?;
            if let (Some(every), Some(dir)) = (a.checkpoint_every, dir) {
                if g.depth() % every == 0 {
                    self.save_checkpoints(dir, &g, &h)?;
                    writeln!(err, "checkpoint at n = {}", g.depth() + 1)?;
                }
            }
        }
        Ok(())
    }

    fn count_ondemand(&self, a: &OndemandArgs, out: &mut dyn Write) -> CliResult {
        let path = match (&a.checkpoint, &self.cli.checkpoint_dir) {
            (Some(p), _) => p.clone(),
            (None, Some(dir)) => checkpoint_path(dir, a.parity.into()),
            (None, None) => {
                return Err(CliError::Usage(format!(
                    "need --checkpoint, --checkpoint-dir or {CHECKPOINT_DIR_ENV}"
                )))
            }
        };
        let ck = Checkpoint::load(&path)?;
        let value: BigCount = if a.n == ck.depth() + 1 {
            ck.layer.origin()
        } else {
            engine::extend_on_demand(&ck, a.n - 1)?
        };
        self.emit(out, "ondemand.bfile", &export::bfile_line(a.n, &value))
    }

    fn oracle(&self, a: &OracleArgs, out: &mut dyn Write) -> CliResult {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "n",
            "sequences",
            "G",
            "H",
            "D",
            "havel_hakimi_agrees",
            "walk_map_agrees",
        ])
        .map_err(ExportError::from)?;
        for n in 1..=a.max_n as usize {
            let b = oracle::brute_counts_with(n, self.exec);
            let (mut hh, mut walk) = (true, true);
            for d in oracle::enumerate(n) {
                let t = oracle::is_graphic(&d);
                hh &= t.is_graphic() == oracle::havel_hakimi(&d);
                let m = oracle::to_walk(&d);
                walk &= t.dominates == m.area_nonnegative() && t.even == m.area_even();
            }
            w.write_record([
                n.to_string(),
                oracle::sequence_count(n as u64).to_string(),
                b.g.to_string(),
                b.h.to_string(),
                b.d.to_string(),
                hh.to_string(),
                walk.to_string(),
            ])
            .map_err(ExportError::from)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| io::Error::other(e.to_string()))?;
        for line in String::from_utf8_lossy(&bytes).lines() {
            self.emit(out, "oracle.csv", line)?;
        }
        Ok(())
    }

    fn walk(&self, a: &WalkArgs, out: &mut dyn Write) -> CliResult {
        let est =
            walklab::persistence_mc_with(a.n, a.samples, a.end.into(), a.seed, a.shards, self.exec);
        let mut record = json!({
            "n": est.n,
            "end": a.end,
            "samples": est.samples,
            "seed": est.seed,
            "shards": est.shards,
            "successes": est.successes,
            "estimate": est.estimate,
            "stderr": est.stderr,
            "scaled": est.scaled(),
        });
        if a.exact {
            let n = u32::try_from(a.n).map_err(|_| WalkError::TooLarge {
                what: "exact persistence length",
                n: a.n,
                max: walklab::MAX_EXACT_STEPS as u64,
            })?;
            let p = walklab::persistence_exact(n, a.end.into())?;
            record["exact"] = json!(p.to_string());
        }
        self.emit(out, "walk.jsonl", &record.to_string())
    }

    fn rho(&self, a: &RhoArgs, out: &mut dyn Write) -> CliResult {
        let kind: WalkKind = a.kind.into();
        let max_grid = *a.grid.iter().max().expect("clap requires one grid") as usize;
        let k = a.coeff_order.unwrap_or(max_grid);
        if k + 1 < max_grid {
            return Err(CliError::Usage(format!(
                "--coeff-order must be at least n − 1 = {}",
                max_grid - 1
            )));
        }
        if a.exact {
            let pmf = constants::area_pmf(k, kind, constants::PmfMethod::Dp)?;
            for &n in &a.grid {
                let x = constants::rho_bounds_exact(&ChainSpec::new(n as usize, &pmf)?)?;
                self.emit(out, "rho.txt", &format!("{} ≤ rho ≤ {}", x.lower, x.upper))?;
                let rec = json!({
                    "n": n, "k": k, "kind": kind,
                    "lower": x.lower.to_string(), "upper": x.upper.to_string(),
                    "amalgamated": x.amalgamated.to_string(),
                });
                if let Some(s) = self.store {
                    s.append("rho.jsonl", &rec.to_string())?;
                }
            }
            return Ok(());
        }
        let solver = match a.solver {
            SolverArg::Levinson => Solver::Levinson,
            SolverArg::GaussSeidel => Solver::GaussSeidel {
                max_sweeps: a.max_sweeps,
            },
        };
        let pmf = constants::pmf_for(kind, k);
        let mut lowers = Vec::new();
        for &n in &a.grid {
            let spec = ChainSpec::new(n as usize, &pmf)?;
            let b = constants::rho_bounds(&spec, solver)?;
            let m = constants::rho_amalgamated(&spec, solver)?;
            self.emit(
                out,
                "rho.txt",
                &format!(
                    "n={n} K={k} {:.12} ≤ rho ≤ {:.12} amalgamated={:.12} residual={:.1e}",
                    b.lower, b.upper, m.estimate, b.residual
                ),
            )?;
            if let Some(s) = self.store {
                s.append(
                    "rho.jsonl",
                    &json!({"bounds": b, "amalgamated": m}).to_string(),
                )?;
            }
            lowers.push((n as f64, b.lower));
        }
        if lowers.len() >= 2 {
            let r = constants::richardson(&lowers)?;
            self.emit(out, "rho.txt", &format!("richardson={r:.12}"))?;
        }
        Ok(())
    }

    fn constants(&self, a: &ConstantsArgs, out: &mut dyn Write) -> CliResult {
        let grids: Vec<usize> = a.grid.iter().map(|&g| g as usize).collect();
        let lazy = constants::estimate_rho(WalkKind::Lazy, &grids, Solver::Levinson)?;
        let simple = constants::estimate_rho(WalkKind::Simple, &grids, Solver::Levinson)?;
        let rho = lazy.extrapolated;
        let lines = [
            format!("rho={rho:.12}"),
            format!("rho_hat={:.12}", simple.extrapolated),
            format!("c={:.12}", constants::c_from_rho(rho)?),
            format!(
                "persistence_constant={:.12}",
                constants::persistence_constant(rho)?
            ),
        ];
        for l in &lines {
            self.emit(out, "constants.txt", l)?;
        }
        Ok(())
    }

    fn verify(&self, out: &mut dyn Write) -> CliResult {
        let report = verify::run_verification();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["check", "passed", "detail"])
            .map_err(ExportError::from)?;
        for c in &report.checks {
            w.write_record([c.name, if c.passed { "true" } else { "false" }, &c.detail])
                .map_err(ExportError::from)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| io::Error::other(e.to_string()))?;
        for line in String::from_utf8_lossy(&bytes).lines() {
            self.emit(out, "verify.csv", line)?;
        }
        if report.passed() {
            Ok(())
        } else {
            Err(CliError::VerifyFailed)
        }
    }
}

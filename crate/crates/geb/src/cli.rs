//! The `geb` command line: `generate`, `analyze`, `simulate`, `sweep`.
//!
//! Exit codes: 0 success, 1 runtime or data error, 2 usage error.

use std::ffi::OsString;
use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use geb_core::costmodel::{self, equal_investment_n};
use geb_core::rng::mix;
use geb_core::{
    count_matches, generate_database, plant_matches, EngineConfig, EngineReport, IterationPolicy,
    Mode,
};

use crate::error::{usage, CliError, Result};
use crate::parallel::{build_pool, run_engine};
use crate::report::{self, csv_writer, num, simulate_row, SIMULATE_COLUMNS, SWEEP_COLUMNS};
use crate::source::resolve_criterion;
use crate::store::{load_database, save_database};

#[derive(Debug, Parser)]
#[command(
    name = "geb",
    version,
    about = "Classical vs. Grover search engine experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded random database, optionally with planted matches.
    Generate(GenerateArgs),
    /// Tabulate engine sizes, search times and speedups.
    Analyze(AnalyzeArgs),
    /// Run one engine repeatedly over a database file.
    Simulate(SimulateArgs),
    /// Compare simulated and modelled speedups across partition sizes.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Classical,
    Quantum,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Classical => Mode::Classical,
            ModeArg::Quantum => Mode::Quantum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Paper,
    Optimal,
}

impl From<PolicyArg> for IterationPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Paper => IterationPolicy::Paper,
            PolicyArg::Optimal => IterationPolicy::Optimal,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub count: u64,
    #[arg(long)]
    pub width: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Criterion source used for planting, e.g. `equality:9a3c`.
    #[arg(long, requires = "plant_count")]
    pub plant_criterion: Option<String>,
    #[arg(long, requires = "plant_criterion")]
    pub plant_count: Option<usize>,
    /// Seed for choosing planted positions; defaults to `--seed`.
    #[arg(long)]
    pub plant_seed: Option<u64>,
}

#[derive(Debug, clap::Args)]
pub struct AnalyzeArgs {
    #[arg(long = "N")]
    pub total: u64,
    #[arg(long)]
    pub t: u64,
    #[arg(long = "p-list", value_delimiter = ',', required = true)]
    pub p_list: Vec<u64>,
    #[arg(
        long = "n-list",
        value_delimiter = ',',
        conflicts_with = "equal_investment"
    )]
    pub n_list: Vec<u64>,
    /// Use n = min(p, N) for each p.
    #[arg(long)]
    pub equal_investment: bool,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub db: PathBuf,
    #[arg(long)]
    pub criterion: String,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    #[arg(long, conflicts_with = "equal_investment")]
    pub n: Option<usize>,
    #[arg(long)]
    pub equal_investment: bool,
    #[arg(long, value_enum, default_value = "optimal")]
    pub policy: PolicyArg,
    #[arg(long, default_value_t = geb_core::engine::DEFAULT_MAX_ROUNDS)]
    pub max_rounds: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Add rows to an existing CSV instead of overwriting it.
    #[arg(long)]
    pub append: bool,
    /// Print the full key-value report of every run.
    #[arg(long)]
    pub print_report: bool,
}

#[derive(Debug, clap::Args)]
pub struct SweepArgs {
    #[arg(long = "N")]
    pub total: u64,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub criterion: String,
    #[arg(long = "n-list", value_delimiter = ',', required = true)]
    pub n_list: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub plant_count: usize,
    #[arg(long, value_enum, default_value = "optimal")]
    pub policy: PolicyArg,
    #[arg(long, default_value_t = geb_core::engine::DEFAULT_MAX_ROUNDS)]
    pub max_rounds: u32,
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command, stdout: &mut dyn Write) -> Result<()> {
    match command {
        Command::Generate(a) => cmd_generate(&a, stdout),
        Command::Analyze(a) => cmd_analyze(&a, stdout),
        Command::Simulate(a) => cmd_simulate(&a, stdout),
        Command::Sweep(a) => cmd_sweep(&a, stdout),
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_owned(),
        source,
    }
}

fn stdout_err(source: io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

pub fn cmd_generate(a: &GenerateArgs, stdout: &mut dyn Write) -> Result<()> {
    let mut db = generate_database(a.count, a.width, a.seed)?;
    let mut planted = None;
    if let (Some(src), Some(count)) = (&a.plant_criterion, a.plant_count) {
        let criterion = resolve_criterion(src, a.width)?;
        db = plant_matches(&db, &criterion, count, a.plant_seed.unwrap_or(a.seed))?;
        planted = Some(count_matches(&db, &criterion)?);
    }
    save_database(&db, &a.out)?;
    writeln!(stdout, "N: {}", db.len()).map_err(stdout_err)?;
    writeln!(stdout, "d: {}", db.width()).map_err(stdout_err)?;
    writeln!(stdout, "seed: {}", db.seed()).map_err(stdout_err)?;
    if let Some(m) = planted {
        writeln!(stdout, "matches: {m}").map_err(stdout_err)?;
    }
    Ok(())
}

pub fn cmd_analyze(a: &AnalyzeArgs, stdout: &mut dyn Write) -> Result<()> {
    if a.p_list.is_empty() {
        return Err(usage("--p-list must not be empty"));
    }
    if !a.equal_investment && a.n_list.is_empty() {
        return Err(usage("give --n-list or --equal-investment"));
    }
    if a.total == 0 || a.t == 0 {
        return Err(usage("--N and --t must be positive"));
    }
    let rows = if a.equal_investment {
        costmodel::equal_investment_sweep(a.total, a.t, &a.p_list)?
    } else {
        costmodel::sweep(a.total, a.t, &a.p_list, &a.n_list)?
    };
    match &a.out {
        Some(path) => {
            let file = File::create(path).map_err(io_err(path))?;
            report::write_cost_reports(file, &rows)
        }
        None => report::write_cost_reports(stdout, &rows),
    }
}

fn engine_config(
    mode: Mode,
    n: usize,
    policy: PolicyArg,
    max_rounds: u32,
    seed: u64,
) -> EngineConfig {
    let base = match mode {
        Mode::Classical => EngineConfig::classical(n),
        Mode::Quantum => EngineConfig::quantum(n, seed),
    };
    EngineConfig { seed, ..base }
        .with_policy(policy.into())
        .with_max_rounds(max_rounds)
}

/// `reps` runs with sub-seeds `splitmix64(seed ^ rep)`, returned in rep order.
fn repeat(
    db: &geb_core::Database,
    criterion: &geb_core::Criterion,
    reps: usize,
    seed: u64,
    config: impl Fn(u64) -> EngineConfig + Sync,
) -> Result<Vec<(u64, EngineReport)>> {
    let pool = build_pool()?;
    pool.install(|| {
        (0..reps)
            .into_par_iter()
            .map(|rep| {
                let sub = mix(seed ^ rep as u64);
                run_engine(db, criterion, &config(sub)).map(|r| (sub, r))
            })
            .collect()
    })
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

pub fn cmd_simulate(a: &SimulateArgs, stdout: &mut dyn Write) -> Result<()> {
    if a.reps == 0 {
        return Err(usage("--reps must be at least 1"));
    }
    let db = load_database(&a.db)?;
    let criterion = resolve_criterion(&a.criterion, db.width())?;
    let n = match (a.n, a.equal_investment) {
        (Some(n), false) => n,
        (None, true) => {
            equal_investment_n(criterion.gate_count() as u64, db.len() as u64)? as usize
        }
        _ => return Err(usage("give exactly one of --n and --equal-investment")),
    };
    let mode: Mode = a.mode.into();
    let runs = repeat(&db, &criterion, a.reps, a.seed, |sub| {
        engine_config(mode, n, a.policy, a.max_rounds, sub)
    })?;

    let append = a.append && a.out.metadata().map(|m| m.len() > 0).unwrap_or(false);
    let file = OpenOptions::new()
        .create(true)
        .write(true)
        .append(append)
        .truncate(!append)
        .open(&a.out)
        .map_err(io_err(&a.out))?;
    let mut w = csv_writer(file);
    if !append {
        w.write_record(SIMULATE_COLUMNS)?;
    }
    for (rep, (sub, r)) in runs.iter().enumerate() {
        w.write_record(simulate_row(rep, db.width(), *sub, r))?;
    }
    w.flush().map_err(io_err(&a.out))?;

    if a.print_report {
        for (rep, (_, r)) in runs.iter().enumerate() {
            writeln!(stdout, "# run {rep}\n{}", report::key_value(r)).map_err(stdout_err)?;
        }
    }

    let first = &runs[0].1;
    let found_rate = runs.iter().filter(|(_, r)| r.found).count() as f64 / runs.len() as f64;
    let mean_cycles = mean(runs.iter().map(|(_, r)| r.cycles as f64));
    let model = report::model_cycles(first);
    let t = criterion.depth() as u64;
    let mut summary = vec![
        format!("runs: {}", runs.len()),
        format!("mode: {}", mode.name()),
        format!("N: {}", db.len()),
        format!("d: {}", db.width()),
        format!("n: {n}"),
        format!("p: {}", criterion.gate_count()),
        format!("t: {t}"),
        format!("n1_total: {}", first.total_matches()),
        format!("found rate: {}", num(found_rate)),
        format!("mean cycles: {}", num(mean_cycles)),
        format!("model cycles: {}", num(model)),
        format!("ratio: {}", num(mean_cycles / model)),
    ];
    if mode == Mode::Quantum {
        let winners = runs.iter().filter_map(|(_, r)| {
            r.winning_partition
                .map(|w| r.per_partition[w].round_cycles as f64)
        });
        summary.push(format!("mean winning-round cost: {}", num(mean(winners))));
        summary.push(format!("classical worst case: {}", n as u64 * t));
    }
    for line in summary {
        writeln!(stdout, "{line}").map_err(stdout_err)?;
    }
    Ok(())
}

struct Aggregate {
    found_rate: f64,
    mean_cycles: f64,
}

fn aggregate(runs: &[(u64, EngineReport)]) -> Aggregate {
    Aggregate {
        found_rate: runs.iter().filter(|(_, r)| r.found).count() as f64 / runs.len() as f64,
        mean_cycles: mean(runs.iter().map(|(_, r)| r.cycles as f64)),
    }
}

pub fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write) -> Result<()> {
    if a.reps == 0 {
        return Err(usage("--reps must be at least 1"));
    }
    if a.n_list.is_empty() {
        return Err(usage("--n-list must not be empty"));
    }
    let criterion = resolve_criterion(&a.criterion, a.d)?;
    let t = criterion.depth() as u64;
    if t == 0 {
        return Err(usage("sweep needs a criterion of depth at least 1"));
    }
    let db = generate_database(a.total, a.d, a.seed)?;
    let db = plant_matches(&db, &criterion, a.plant_count, a.seed)?;
    if let Some(&bad) = a.n_list.iter().find(|&&n| n == 0 || n > db.len()) {
        return Err(usage(format!(
            "partition size {bad} outside [1, {}]",
            db.len()
        )));
    }

    let file = File::create(&a.out).map_err(io_err(&a.out))?;
    let mut w = csv_writer(file);
    w.write_record(SWEEP_COLUMNS)?;
    let p = criterion.gate_count().to_string();
    for &n in &a.n_list {
        let base = |kind: &str| {
            vec![
                kind.to_string(),
                a.total.to_string(),
                a.d.to_string(),
                n.to_string(),
                p.clone(),
                t.to_string(),
                a.reps.to_string(),
            ]
        };
        let classical = repeat(&db, &criterion, a.reps, a.seed, |sub| {
            engine_config(Mode::Classical, n, a.policy, a.max_rounds, sub)
        })?;
        let quantum = repeat(&db, &criterion, a.reps, a.seed, |sub| {
            engine_config(Mode::Quantum, n, a.policy, a.max_rounds, sub)
        })?;
        let c = aggregate(&classical);
        let q = aggregate(&quantum);
        let tc = costmodel::classical_time(n as u64, t);
        let tq = costmodel::quantum_time(n as u64, t);
        for (kind, agg, model) in [("classical", &c, tc), ("quantum", &q, tq)] {
            let mut row = base(kind);
            row.extend([
                num(agg.found_rate),
                num(agg.mean_cycles),
                num(model),
                String::new(),
                String::new(),
                String::new(),
            ]);
            w.write_record(row)?;
        }
        let simulated = c.mean_cycles / q.mean_cycles;
        let model = tc / tq;
        let mut row = base("comparison");
        row.extend([
            String::new(),
            String::new(),
            String::new(),
            num(simulated),
            num(model),
            num(simulated / model),
        ]);
        w.write_record(row)?;
        writeln!(
            stdout,
            "n={n}: classical {} cycles, quantum {} cycles (found {}), speedup {} vs model {}",
            num(c.mean_cycles),
            num(q.mean_cycles),
            num(q.found_rate),
            num(simulated),
            num(model)
        )
        .map_err(stdout_err)?;
    }
    w.flush().map_err(io_err(&a.out))?;
    Ok(())
}

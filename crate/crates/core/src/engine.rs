//! The partitioned search engine: `ceil(N / n)` criterion processors, each
//! sitting atop `n` consecutive datasets under a binary addressing tree.
//!
//! Every partition is simulated independently by [`simulate_partition`]
//! and the results are combined by [`merge`], so callers may run partitions
//! on any schedule and still get an identical [`EngineReport`].

use alloc::vec::Vec;

use crate::criterion::Criterion;
use crate::datastore::Database;
use crate::error::{invalid, Result};
use crate::grover::{amplified_state, success_probability, IterationPolicy};
use crate::rng::{mix, SplitMix64};

pub const DEFAULT_MAX_ROUNDS: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Classical,
    Quantum,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Classical => "classical",
            Mode::Quantum => "quantum",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EngineConfig {
    pub partition_size: usize,
    pub mode: Mode,
    pub policy: IterationPolicy,
    pub max_rounds: u32,
    pub seed: u64,
}

impl EngineConfig {
    pub fn classical(partition_size: usize) -> Self {
        Self {
            partition_size,
            mode: Mode::Classical,
            policy: IterationPolicy::Optimal,
            max_rounds: DEFAULT_MAX_ROUNDS,
            seed: 0,
        }
    }

    pub fn quantum(partition_size: usize, seed: u64) -> Self {
        Self {
            mode: Mode::Quantum,
            seed,
            ..Self::classical(partition_size)
        }
    }

    pub fn with_policy(mut self, policy: IterationPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_max_rounds(mut self, max_rounds: u32) -> Self {
        self.max_rounds = max_rounds;
        self
    }
}

/// What one processor did.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionSummary {
    pub index: usize,
    pub start: usize,
    pub end: usize,
    /// Ground-truth number of matching datasets in the partition.
    pub matches: usize,
    /// Grover iterations per round; `None` in classical mode.
    pub iterations: Option<u64>,
    /// Cycles per round: `(k + 1) * t` in quantum mode, the full scan
    /// `len * t` in classical mode.
    pub round_cycles: u64,
    pub rounds: u32,
    /// Cycle at which this processor first held a verified match.
    pub hit_cycle: Option<u64>,
    pub hit_index: Option<usize>,
    /// Cycles spent if left to run alone until success or give-up.
    pub cycles: u64,
    /// Closed-form per-round success probability (quantum only).
    pub success_probability: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EngineReport {
    pub mode: Mode,
    pub total: usize,
    pub partition_size: usize,
    pub gate_count: usize,
    pub depth: usize,
    pub found: bool,
    pub found_index: Option<usize>,
    pub winning_partition: Option<usize>,
    pub cycles: u64,
    pub propagation_cycles: u64,
    pub rounds_used: u32,
    pub per_partition: Vec<PartitionSummary>,
}

impl EngineReport {
    pub fn processors(&self) -> usize {
        self.per_partition.len()
    }

    pub fn total_matches(&self) -> usize {
        self.per_partition.iter().map(|p| p.matches).sum()
    }
}

pub fn processor_count(total: usize, partition_size: usize) -> usize {
    total.div_ceil(partition_size)
}

/// Half-open global index range of partition `i`; the last one may be short.
pub fn partition_bounds(total: usize, partition_size: usize, i: usize) -> Result<(usize, usize)> {
    if partition_size == 0 || partition_size > total {
        return Err(invalid(alloc::format!(
            "partition size {partition_size} outside [1, {total}]"
        )));
    }
    let count = processor_count(total, partition_size);
    if i >= count {
        return Err(invalid(alloc::format!("partition {i} of {count}")));
    }
    let start = i * partition_size;
    Ok((start, (start + partition_size).min(total)))
}

/// Depth of the addressing tree above the processors,
/// `ceil(log2(max(1, N / n)))`.
pub fn propagation_cycles(total: usize, partition_size: usize) -> u64 {
    let p = processor_count(total, partition_size).max(1);
    (usize::BITS - (p - 1).leading_zeros()) as u64
}

/// Seed of processor `i`'s private generator.
pub fn partition_seed(seed: u64, i: usize) -> u64 {
    mix(seed ^ i as u64)
}

fn validate(db: &Database, criterion: &Criterion, config: &EngineConfig) -> Result<()> {
    if db.width() != criterion.input_width() {
        return Err(invalid(alloc::format!(
            "criterion expects {} input bits but datasets have {}",
            criterion.input_width(),
            db.width()
        )));
    }
    if config.partition_size == 0 || config.partition_size > db.len() {
        return Err(invalid(alloc::format!(
            "partition size {} outside [1, {}]",
            config.partition_size,
            db.len()
        )));
    }
    if config.mode == Mode::Quantum && config.max_rounds == 0 {
        return Err(invalid("max_rounds must be at least 1"));
    }
    Ok(())
}

/// Simulate processor `i` on its own.
pub fn simulate_partition(
    db: &Database,
    criterion: &Criterion,
    config: &EngineConfig,
    i: usize,
) -> Result<PartitionSummary> {
    validate(db, criterion, config)?;
    let (start, end) = partition_bounds(db.len(), config.partition_size, i)?;
    let t = criterion.depth() as u64;
    let slice = &db.datasets()[start..end];
    let marked = slice
        .iter()
        .map(|d| criterion.evaluate(d))
        .collect::<Result<Vec<_>>>()?;
    let matches = marked.iter().filter(|&&m| m).count();

    match config.mode {
        Mode::Classical => {
            // one dataset per t cycles, in index order
            let first = marked.iter().position(|&m| m);
            Ok(PartitionSummary {
                index: i,
                start,
                end,
                matches,
                iterations: None,
                round_cycles: slice.len() as u64 * t,
                rounds: 1,
                hit_cycle: first.map(|j| (j as u64 + 1) * t),
                hit_index: first.map(|j| start + j),
                cycles: slice.len() as u64 * t,
                success_probability: None,
            })
        }
        Mode::Quantum => {
            let n = slice.len() as u64;
            // the amplified state depends only on the marked set, so it is
            // prepared once and re-measured each round
            let (state, k) = amplified_state(marked, config.policy)?;
            let round_cycles = (k + 1) * t;
            let mut rng = SplitMix64::new(partition_seed(config.seed, i));
            let mut hit = None;
            let mut rounds = 0;
            while rounds < config.max_rounds {
                rounds += 1;
                let round_seed = rng.next_u64();
                let measured = state.measure(&mut SplitMix64::new(round_seed));
                if criterion.evaluate(&slice[measured])? {
                    hit = Some(start + measured);
                    break;
                }
            }
            Ok(PartitionSummary {
                index: i,
                start,
                end,
                matches,
                iterations: Some(k),
                round_cycles,
                rounds,
                hit_cycle: hit.map(|_| rounds as u64 * round_cycles),
                hit_index: hit,
                cycles: rounds as u64 * round_cycles,
                success_probability: Some(success_probability(n, matches as u64, k)),
            })
        }
    }
}

/// Combine per-partition results, which must be given in partition order.
///
/// The winner is the processor with the earliest verified hit, ties going
/// to the lowest partition index. Classical search time is always the
/// worst case `n * t`; quantum search time is the winner's hit cycle, or the
/// longest processor run when nobody verified a match.
pub fn merge(
    db: &Database,
    criterion: &Criterion,
    config: &EngineConfig,
    per_partition: Vec<PartitionSummary>,
) -> Result<EngineReport> {
    validate(db, criterion, config)?;
    let expected = processor_count(db.len(), config.partition_size);
    if per_partition.len() != expected
        || per_partition.iter().enumerate().any(|(i, p)| p.index != i)
    {
        return Err(invalid(alloc::format!(
            "expected {expected} partition summaries in order"
        )));
    }
    let t = criterion.depth() as u64;
    let winner = per_partition
        .iter()
        .filter_map(|p| p.hit_cycle.map(|c| (c, p.index)))
        .min()
        .map(|(_, i)| &per_partition[i]);

    let (cycles, rounds_used) = match config.mode {
        Mode::Classical => (config.partition_size as u64 * t, 1),
        Mode::Quantum => match winner {
            Some(w) => (w.hit_cycle.unwrap_or(0), w.rounds),
            None => (
                per_partition.iter().map(|p| p.cycles).max().unwrap_or(0),
                config.max_rounds,
            ),
        },
    };

    Ok(EngineReport {
        mode: config.mode,
        total: db.len(),
        partition_size: config.partition_size,
        gate_count: criterion.gate_count(),
        depth: criterion.depth(),
        found: winner.is_some(),
        found_index: winner.and_then(|w| w.hit_index),
        winning_partition: winner.map(|w| w.index),
        cycles,
        propagation_cycles: propagation_cycles(db.len(), config.partition_size),
        rounds_used,
        per_partition,
    })
}

/// Run every processor in sequence and merge.
pub fn run(db: &Database, criterion: &Criterion, config: &EngineConfig) -> Result<EngineReport> {
    validate(db, criterion, config)?;
    let parts = (0..processor_count(db.len(), config.partition_size))
        .map(|i| simulate_partition(db, criterion, config, i))
        .collect::<Result<Vec<_>>>()?;
    merge(db, criterion, config, parts)
}

pub fn run_classical(
    db: &Database,
    criterion: &Criterion,
    config: &EngineConfig,
) -> Result<EngineReport> {
    if config.mode != Mode::Classical {
        return Err(invalid("run_classical needs a classical config"));
    }
    run(db, criterion, config)
}

pub fn run_quantum(
    db: &Database,
    criterion: &Criterion,
    config: &EngineConfig,
) -> Result<EngineReport> {
    if config.mode != Mode::Quantum {
        return Err(invalid("run_quantum needs a quantum config"));
    }
    run(db, criterion, config)
}

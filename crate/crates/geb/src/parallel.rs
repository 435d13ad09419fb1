//! Worker pool sizing and schedule-independent engine runs.

use rayon::prelude::*;

use geb_core::engine::{self, processor_count, simulate_partition};
use geb_core::{Criterion, Database, EngineConfig, EngineReport};

use crate::error::{usage, Result};

pub const THREADS_ENV: &str = "GEB_THREADS";

/// Worker cap from `GEB_THREADS`; unset, empty or `0` means rayon's default.
pub fn thread_count() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(n) => Ok(Some(n)),
            Err(_) => Err(usage(format!("{THREADS_ENV}={v} is not a thread count"))),
        },
    }
}

pub fn build_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| usage(format!("cannot start worker pool: {e}")))
}

/// Simulate partitions concurrently; results are merged in partition order,
/// so the report equals [`engine::run`]'s.
pub fn run_engine(
    db: &Database,
    criterion: &Criterion,
    config: &EngineConfig,
) -> Result<EngineReport> {
    let count = processor_count(db.len(), config.partition_size.max(1));
    let parts = (0..count)
        .into_par_iter()
        .map(|i| simulate_partition(db, criterion, config, i))
        .collect::<geb_core::Result<Vec<_>>>()?;
    Ok(engine::merge(db, criterion, config, parts)?)
}

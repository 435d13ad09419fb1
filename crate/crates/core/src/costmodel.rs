//! Closed-form sizes and search times of the classical and quantum engines,
//! and the equal-investment choice of partition size.

use alloc::vec::Vec;

use crate::error::{invalid, Result};

/// Gate count `(N / n) * p + N`: the processors plus an addressing tree
/// about the size of the database. Quantum and classical engines of the
/// same `n` have the same size.
pub fn engine_size(total: u64, partition_size: u64, gate_count: u64) -> f64 {
    if partition_size != 0 && total.is_multiple_of(partition_size) {
        ((total / partition_size) * gate_count + total) as f64
    } else {
        total as f64 / partition_size as f64 * gate_count as f64 + total as f64
    }
}

/// `n * t`
pub fn classical_time(partition_size: u64, depth: u64) -> f64 {
    (partition_size * depth) as f64
}

/// `sqrt(n) * t`
pub fn quantum_time(partition_size: u64, depth: u64) -> f64 {
    libm::sqrt(partition_size as f64) * depth as f64
}

/// Spend as much on processors as on addressing: `n = p`, capped at `N`.
pub fn equal_investment_n(gate_count: u64, total: u64) -> Result<u64> {
    if gate_count == 0 {
        return Err(invalid(
            "equal investment is undefined for a zero-gate criterion",
        ));
    }
    if total == 0 {
        return Err(invalid("database must be nonempty"));
    }
    Ok(gate_count.min(total))
}

/// Quantum speedup under equal investment, `min(sqrt(p), sqrt(N))`.
pub fn speedup(gate_count: u64, total: u64) -> f64 {
    libm::sqrt(gate_count.min(total) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostReport {
    pub total: u64,
    pub partition_size: u64,
    pub gate_count: u64,
    pub depth: u64,
    pub classical_size: f64,
    pub quantum_size: f64,
    pub classical_time: f64,
    pub quantum_time: f64,
    pub speedup: f64,
    pub equal_investment_n: u64,
}

impl CostReport {
    pub fn new(total: u64, partition_size: u64, gate_count: u64, depth: u64) -> Result<Self> {
        if partition_size == 0 || partition_size > total {
            return Err(invalid(alloc::format!(
                "partition size {partition_size} outside [1, {total}]"
            )));
        }
        if depth == 0 {
            return Err(invalid("criterion depth must be positive"));
        }
        let size = engine_size(total, partition_size, gate_count);
        let tc = classical_time(partition_size, depth);
        let tq = quantum_time(partition_size, depth);
        Ok(Self {
            total,
            partition_size,
            gate_count,
            depth,
            classical_size: size,
            quantum_size: size,
            classical_time: tc,
            quantum_time: tq,
            speedup: tc / tq,
            equal_investment_n: equal_investment_n(gate_count, total)?,
        })
    }
}

/// One report per `(p, n)` pair, `p` in the outer loop.
pub fn sweep(
    total: u64,
    depth: u64,
    gate_counts: &[u64],
    partition_sizes: &[u64],
) -> Result<Vec<CostReport>> {
    if gate_counts.is_empty() || partition_sizes.is_empty() {
        return Err(invalid("sweep needs at least one p and one n"));
    }
    let mut out = Vec::with_capacity(gate_counts.len() * partition_sizes.len());
    for &p in gate_counts {
        for &n in partition_sizes {
            out.push(CostReport::new(total, n, p, depth)?);
        }
    }
    Ok(out)
}

/// One report per `p`, each at its equal-investment partition size.
pub fn equal_investment_sweep(
    total: u64,
    depth: u64,
    gate_counts: &[u64],
) -> Result<Vec<CostReport>> {
    if gate_counts.is_empty() {
        return Err(invalid("sweep needs at least one p"));
    }
    gate_counts
        .iter()
        .map(|&p| CostReport::new(total, equal_investment_n(p, total)?, p, depth))
        .collect()
}

//! CSV schemas and the key-value engine report.

use std::fmt::Write as _;
use std::io::Write;

use geb_core::costmodel::CostReport;
use geb_core::EngineReport;

use crate::error::Result;

pub const SIMULATE_COLUMNS: [&str; 15] = [
    "run_id",
    "mode",
    "N",
    "d",
    "n",
    "p",
    "t",
    "n1_total",
    "found",
    "found_index",
    "cycles",
    "propagation_cycles",
    "rounds_used",
    "model_cycles",
    "seed",
];

pub const COST_COLUMNS: [&str; 10] = [
    "N",
    "n",
    "p",
    "t",
    "S_c",
    "S_q",
    "T_c",
    "T_q",
    "speedup",
    "equal_investment_n",
];

pub const SWEEP_COLUMNS: [&str; 13] = [
    "kind",
    "N",
    "d",
    "n",
    "p",
    "t",
    "reps",
    "found_rate",
    "mean_cycles",
    "model_cycles",
    "simulated_speedup",
    "model_speedup",
    "speedup_ratio",
];

/// Integral values print without a fractional part.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Closed-form search time for the report's mode: `n t` or `sqrt(n) t`.
pub fn model_cycles(report: &EngineReport) -> f64 {
    let (n, t) = (report.partition_size as u64, report.depth as u64);
    match report.mode {
        geb_core::Mode::Classical => geb_core::costmodel::classical_time(n, t),
        geb_core::Mode::Quantum => geb_core::costmodel::quantum_time(n, t),
    }
}

pub fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

pub fn simulate_row(run_id: usize, width: usize, seed: u64, r: &EngineReport) -> Vec<String> {
    vec![
        run_id.to_string(),
        r.mode.name().to_string(),
        r.total.to_string(),
        width.to_string(),
        r.partition_size.to_string(),
        r.gate_count.to_string(),
        r.depth.to_string(),
        r.total_matches().to_string(),
        r.found.to_string(),
        r.found_index.map(|i| i.to_string()).unwrap_or_default(),
        r.cycles.to_string(),
        r.propagation_cycles.to_string(),
        r.rounds_used.to_string(),
        num(model_cycles(r)),
        seed.to_string(),
    ]
}

pub fn cost_row(r: &CostReport) -> Vec<String> {
    vec![
        r.total.to_string(),
        r.partition_size.to_string(),
        r.gate_count.to_string(),
        r.depth.to_string(),
        num(r.classical_size),
        num(r.quantum_size),
        num(r.classical_time),
        num(r.quantum_time),
        num(r.speedup),
        r.equal_investment_n.to_string(),
    ]
}

pub fn write_cost_reports<W: Write>(out: W, rows: &[CostReport]) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(COST_COLUMNS)?;
    for r in rows {
        w.write_record(cost_row(r))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Flat `key: value` block, one field per line, partitions last.
pub fn key_value(r: &EngineReport) -> String {
    let opt = |v: Option<usize>| v.map(|i| i.to_string()).unwrap_or_else(|| "none".into());
    let mut s = String::new();
    let _ = writeln!(s, "mode: {}", r.mode.name());
    let _ = writeln!(s, "N: {}", r.total);
    let _ = writeln!(s, "n: {}", r.partition_size);
    let _ = writeln!(s, "processors: {}", r.processors());
    let _ = writeln!(s, "p: {}", r.gate_count);
    let _ = writeln!(s, "t: {}", r.depth);
    let _ = writeln!(s, "n1_total: {}", r.total_matches());
    let _ = writeln!(s, "found: {}", r.found);
    let _ = writeln!(s, "found_index: {}", opt(r.found_index));
    let _ = writeln!(s, "winning_partition: {}", opt(r.winning_partition));
    let _ = writeln!(s, "cycles: {}", r.cycles);
    let _ = writeln!(s, "propagation_cycles: {}", r.propagation_cycles);
    let _ = writeln!(s, "rounds_used: {}", r.rounds_used);
    let _ = writeln!(s, "model_cycles: {}", num(model_cycles(r)));
    for p in &r.per_partition {
        let _ = writeln!(
            s,
            "partition.{}: start={} end={} n1={} k={} round_cycles={} rounds={} hit_cycle={} hit_index={}",
            p.index,
            p.start,
            p.end,
            p.matches,
            p.iterations.map(|k| k.to_string()).unwrap_or_else(|| "-".into()),
            p.round_cycles,
            p.rounds,
            p.hit_cycle.map(|c| c.to_string()).unwrap_or_else(|| "none".into()),
            opt(p.hit_index),
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use geb_core::{engine, equality_criterion, generate_database, plant_matches, EngineConfig};

    #[test]
    fn numbers() {
        assert_eq!(num(2.0), "2");
        assert_eq!(num(256.0), "256");
        assert_eq!(num(2.5), "2.5");
    }

    #[test]
    fn rows_follow_schema() {
        let c = equality_criterion(&[true; 8]).unwrap();
        let db = plant_matches(&generate_database(64, 8, 1).unwrap(), &c, 1, 1).unwrap();
        let r = engine::run(&db, &c, &EngineConfig::classical(8)).unwrap();
        let row = simulate_row(0, 8, 9, &r);
        assert_eq!(row.len(), SIMULATE_COLUMNS.len());
        assert_eq!(row[1], "classical");
        assert_eq!(row[10], "32");
        assert_eq!(row[13], "32");
        let kv = key_value(&r);
        assert!(kv.contains("cycles: 32\n"));
        assert!(kv.contains("partition.7: "));

        let mut buf = Vec::new();
        let rows = geb_core::costmodel::equal_investment_sweep(1 << 16, 5, &[4]).unwrap();
        write_cost_reports(&mut buf, &rows).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "N,n,p,t,S_c,S_q,T_c,T_q,speedup,equal_investment_n\n65536,4,4,5,131072,131072,20,10,2,4\n"
        );
    }
}

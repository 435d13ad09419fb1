//! Models of classical and Grover-based database search engines.
//!
//! A database of `N` fixed-width datasets is split into partitions of `n`,
//! each served by a processor that evaluates a boolean-circuit search
//! criterion of `p` gates and depth `t`. The classical engine scans each
//! partition; the quantum engine runs Grover's algorithm on it. This crate
//! simulates both exactly, with cycle accounting, and evaluates the
//! closed-form size and time equations they are compared against.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod costmodel;
pub mod criterion;
pub mod datastore;
pub mod engine;
mod error;
pub mod grover;
pub mod rng;

pub use criterion::{cnf_criterion, equality_criterion, Criterion, Gate, GateKind, Literal, Wire};
pub use datastore::{
    count_matches, decode_database, encode_database, generate_database, plant_matches, Database,
    Dataset,
};
pub use engine::{EngineConfig, EngineReport, Mode, PartitionSummary};
pub use error::{Error, Result};
pub use grover::{GroverOutcome, GroverState, IterationPolicy};
pub use rng::SplitMix64;

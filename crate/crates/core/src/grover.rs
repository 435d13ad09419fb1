//! Exact Grover search over an arbitrary-size index space.
//!
//! The state is a vector of `n` real amplitudes, one per dataset in a
//! partition. A phase oracle followed by inversion about the mean keeps
//! every amplitude real, so no qubit register or complex arithmetic is
//! needed and `n` need not be a power of two.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, PI};

use crate::criterion::Criterion;
use crate::datastore::Dataset;
use crate::error::{invalid, Error, Result};
use crate::rng::SplitMix64;

/// How many Grover iterations a processor runs for a given `(n, n1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum IterationPolicy {
    /// `floor(pi/4 * sqrt(n / n1))`
    Paper,
    /// `round(pi / (4 theta) - 1/2)` with `theta = asin(sqrt(n1 / n))`
    #[default]
    Optimal,
}

impl IterationPolicy {
    pub fn iterations(self, n: u64, n1: u64) -> Result<u64> {
        match self {
            IterationPolicy::Paper => paper_iterations(n, n1),
            IterationPolicy::Optimal => optimal_iterations(n, n1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IterationPolicy::Paper => "paper",
            IterationPolicy::Optimal => "optimal",
        }
    }
}

fn check_counts(n: u64, n1: u64) -> Result<()> {
    if n1 == 0 {
        return Err(Error::UndefinedIterations);
    }
    if n1 > n {
        return Err(invalid(alloc::format!("{n1} marked out of {n}")));
    }
    Ok(())
}

#[inline]
fn angle(n: u64, n1: u64) -> f64 {
    libm::asin(libm::sqrt((n1 as f64 / n as f64).min(1.0)))
}

pub fn paper_iterations(n: u64, n1: u64) -> Result<u64> {
    check_counts(n, n1)?;
    Ok(libm::floor(FRAC_PI_4 * libm::sqrt(n as f64 / n1 as f64)) as u64)
}

pub fn optimal_iterations(n: u64, n1: u64) -> Result<u64> {
    check_counts(n, n1)?;
    let x = PI / (4.0 * angle(n, n1)) - 0.5;
    // round half up
    Ok(libm::floor(x + 0.5).max(0.0) as u64)
}

/// `sin^2((2k + 1) theta)`, the probability of measuring a marked index
/// after `k` iterations; zero when nothing is marked. Requires
/// `1 <= n` and `n1 <= n`.
pub fn success_probability(n: u64, n1: u64, k: u64) -> f64 {
    if n1 == 0 {
        return 0.0;
    }
    let s = libm::sin((2 * k + 1) as f64 * angle(n, n1));
    s * s
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroverState {
    amplitudes: Vec<f64>,
    marked: Vec<bool>,
    marked_count: usize,
}

impl GroverState {
    /// The uniform superposition over `marked.len()` indices.
    pub fn uniform(marked: Vec<bool>) -> Result<Self> {
        let n = marked.len();
        if n == 0 {
            return Err(invalid("Grover state needs at least one index"));
        }
        let a = 1.0 / libm::sqrt(n as f64);
        Ok(Self {
            amplitudes: vec![a; n],
            marked_count: marked.iter().filter(|&&m| m).count(),
            marked,
        })
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn marked_count(&self) -> usize {
        self.marked_count
    }

    pub fn is_marked(&self, i: usize) -> bool {
        self.marked[i]
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// One oracle query: negate marked amplitudes, then reflect every
    /// amplitude about the mean.
    pub fn iterate(&mut self) {
        for (a, &m) in self.amplitudes.iter_mut().zip(&self.marked) {
            if m {
                *a = -*a;
            }
        }
        let mean = self.amplitudes.iter().sum::<f64>() / self.amplitudes.len() as f64;
        for a in &mut self.amplitudes {
            *a = 2.0 * mean - *a;
        }
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }

    pub fn marked_probability(&self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&self.marked)
            .filter(|(_, &m)| m)
            .map(|(a, _)| a * a)
            .sum()
    }

    /// Inverse-CDF sample over the squared amplitudes using one draw from
    /// `rng`.
    pub fn measure(&self, rng: &mut SplitMix64) -> usize {
        let u = rng.next_f64();
        let mut cumulative = 0.0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            cumulative += a * a;
            if u < cumulative {
                return i;
            }
        }
        // rounding left the total just under u; take the last index with mass
        self.amplitudes
            .iter()
            .rposition(|a| *a != 0.0)
            .unwrap_or(self.amplitudes.len() - 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroverOutcome {
    pub measured_index: usize,
    pub iterations_used: u64,
    pub verified: bool,
    pub success_probability: f64,
}

/// Iteration count for a partition of `n` with `n1` marked; zero-match
/// partitions get no iterations.
pub fn planned_iterations(policy: IterationPolicy, n: u64, n1: u64) -> u64 {
    match n1 {
        0 => 0,
        _ => policy.iterations(n, n1).unwrap_or(0),
    }
}

/// Prepare the uniform state over `marked` and apply the policy's
/// iteration count.
pub fn amplified_state(marked: Vec<bool>, policy: IterationPolicy) -> Result<(GroverState, u64)> {
    let mut state = GroverState::uniform(marked)?;
    let k = planned_iterations(policy, state.len() as u64, state.marked_count() as u64);
    for _ in 0..k {
        state.iterate();
    }
    Ok((state, k))
}

/// Search one partition: classify every member (standing in for the
/// oracle's quantum parallelism), amplify, measure with a generator seeded
/// by `seed`, and re-check the measured dataset classically.
pub fn run_grover(
    partition: &[Dataset],
    criterion: &Criterion,
    policy: IterationPolicy,
    seed: u64,
) -> Result<GroverOutcome> {
    if partition.is_empty() {
        return Err(invalid("cannot search an empty partition"));
    }
    let marked = partition
        .iter()
        .map(|d| criterion.evaluate(d))
        .collect::<Result<Vec<_>>>()?;
    let (state, k) = amplified_state(marked, policy)?;
    let n = state.len() as u64;
    let n1 = state.marked_count() as u64;
    let measured = state.measure(&mut SplitMix64::new(seed));
    Ok(GroverOutcome {
        measured_index: measured,
        iterations_used: k,
        verified: criterion.evaluate(&partition[measured])?,
        success_probability: success_probability(n, n1, k),
    })
}

//! Parallel replications.

use rayon::prelude::*;

use mpbandit_core::sim::{aggregate, derive_seed, run_episode, Aggregate, SimError};
use mpbandit_core::{PolicySpec, ProblemInstance, RunResult};

/// All replications of one policy, in replication order.
#[derive(Debug, Clone, PartialEq)]
pub struct Replicated {
    pub seeds: Vec<u64>,
    pub runs: Vec<RunResult>,
    pub aggregate: Aggregate,
}

impl Replicated {
    /// Mean of a per-run quantity.
    pub fn mean_of(&self, f: impl Fn(&RunResult) -> f64) -> f64 {
        mpbandit_core::sim::mean_stderr(&self.runs.iter().map(f).collect::<Vec<_>>()).0
    }

    /// Whether every run kept its regret total equal to the recount.
    pub fn bookkeeping_consistent(&self) -> bool {
        self.runs.iter().all(RunResult::bookkeeping_consistent)
    }
}

/// Runs `replications` seeded episodes. Replication `r` uses
/// `derive_seed(master_seed, r)`; results do not depend on thread scheduling.
pub fn run_replicated(
    instance: &ProblemInstance,
    spec: &PolicySpec,
    horizon: u64,
    checkpoints: &[u64],
    replications: u64,
    master_seed: u64,
) -> Result<Replicated, SimError> {
    let seeds: Vec<u64> = (0..replications).map(|r| derive_seed(master_seed, r)).collect();
    let runs = seeds
        .par_iter()
        .map(|&seed| run_episode(instance, spec, horizon, checkpoints, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let aggregate = aggregate(&runs);
    Ok(Replicated {
        seeds,
        runs,
        aggregate,
    })
}

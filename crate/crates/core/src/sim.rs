//! Single-replication simulation with exact regret bookkeeping.
//!
//! Pseudo-regret of every list is quantized to integer units of `2^-60` and
//! summed in `u128`, so the running total and the recount from per-list play
//! counts agree exactly.

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::divergence::regret_table;
use crate::model::{sample_observation, ListIndexer, ProblemInstance};
use crate::policy::{PolicyError, PolicySpec};

/// Size of one regret unit.
pub const REGRET_UNIT: f64 = 1.0 / (1u64 << 60) as f64;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Simulation failures.
#[derive(Debug, Clone, PartialEq, Error)]
#[allow(missing_docs)]
pub enum SimError {
    #[error("horizon: must be at least 2, got {0}")]
    Horizon(u64),
    #[error("checkpoints: must be strictly increasing within [2, horizon]")]
    Checkpoints,
    #[error(transparent)]
    Policy(#[from] PolicyError),
}

/// Outcome of one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// Steps at which the state was recorded.
    pub checkpoints: Vec<u64>,
    /// Cumulative pseudo-regret at each checkpoint.
    pub regret: Vec<f64>,
    /// `regret / ln t` at each checkpoint.
    pub regret_over_log: Vec<f64>,
    /// Running regret total in units.
    pub regret_units: Vec<u128>,
    /// The same total recounted from per-list play counts.
    pub recomputed_units: Vec<u128>,
    /// Plays per list rank, initialization included.
    pub list_plays: Vec<u64>,
    /// `slot_arm_plays[k][j]`: plays of arm `j` in slot `k`.
    pub slot_arm_plays: Vec<Vec<u64>>,
    /// Number of examined slots.
    pub observations: u64,
    /// Steps spent in initialization.
    pub init_steps: u64,
    /// Steps on which the policy explored.
    pub exploration_steps: u64,
}

impl RunResult {
    /// Whether the running total matched the recount at every checkpoint.
    pub fn bookkeeping_consistent(&self) -> bool {
        self.regret_units == self.recomputed_units
    }
}

/// Seed of replication `r` under `master`.
pub fn derive_seed(master: u64, replication: u64) -> u64 {
    let mut z = master.wrapping_add(replication.wrapping_add(1).wrapping_mul(GOLDEN));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Ten checkpoints per decade from `1000`, always ending at `horizon`.
pub fn log_spaced_checkpoints(horizon: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 0;
    loop {
        let t = libm::round(libm::pow(10.0, 3.0 + i as f64 / 10.0)) as u64;
        if t >= horizon {
            break;
        }
        out.push(t);
        i += 1;
    }
    if horizon >= 2 {
        out.push(horizon);
    }
    out
}

fn quantize(regret: f64) -> u128 {
    libm::round(regret / REGRET_UNIT) as u128
}

/// Runs `spec` on `instance` for `horizon` steps.
///
/// The environment draws from stream 0 and the policy from stream 1 of a
/// ChaCha8 generator seeded with `seed`.
pub fn run_episode(
    instance: &ProblemInstance,
    spec: &PolicySpec,
    horizon: u64,
    checkpoints: &[u64],
    seed: u64,
) -> Result<RunResult, SimError> {
    if horizon < 2 {
        return Err(SimError::Horizon(horizon));
    }
    let valid = checkpoints.windows(2).all(|w| w[0] < w[1])
        && checkpoints.iter().all(|&t| (2..=horizon).contains(&t));
    if !valid {
        return Err(SimError::Checkpoints);
    }
    let mut policy = spec.build(instance)?;
    let table = regret_table(instance);
    let indexer = ListIndexer::for_instance(instance);
    let units: Vec<u128> = table.per_list().iter().map(|&r| quantize(r)).collect();
    let (m, n) = (instance.num_slots(), instance.num_arms());

    let mut env_rng = ChaCha8Rng::seed_from_u64(seed);
    env_rng.set_stream(0);
    let mut policy_rng = ChaCha8Rng::seed_from_u64(seed);
    policy_rng.set_stream(1);

    let mut result = RunResult {
        checkpoints: checkpoints.to_vec(),
        regret: Vec::with_capacity(checkpoints.len()),
        regret_over_log: Vec::with_capacity(checkpoints.len()),
        regret_units: Vec::with_capacity(checkpoints.len()),
        recomputed_units: Vec::with_capacity(checkpoints.len()),
        list_plays: vec![0; indexer.len()],
        slot_arm_plays: vec![vec![0; n]; m],
        observations: 0,
        init_steps: 0,
        exploration_steps: 0,
    };
    let mut total: u128 = 0;
    let mut next = 0;
    for t in 1..=horizon {
        let decision = policy.decide(t, &mut policy_rng);
        let rank = indexer.rank(&decision.list);
        result.list_plays[rank] += 1;
        total += units[rank];
        for (k, &arm) in decision.list.arms().iter().enumerate() {
            result.slot_arm_plays[k][arm] += 1;
        }
        result.init_steps += decision.initializing as u64;
        result.exploration_steps += decision.exploring as u64;
        let obs = sample_observation(instance, &decision.list, &mut env_rng);
        result.observations += obs.exam.iter().filter(|&&e| e).count() as u64;
        policy.observe(&decision, &obs);

        if next < checkpoints.len() && checkpoints[next] == t {
            let recount: u128 = result
                .list_plays
                .iter()
                .zip(&units)
                .map(|(&c, &u)| c as u128 * u)
                .sum();
            let regret = total as f64 * REGRET_UNIT;
            result.regret.push(regret);
            result.regret_over_log.push(regret / libm::log(t as f64));
            result.regret_units.push(total);
            result.recomputed_units.push(recount);
            next += 1;
        }
    }
    Ok(result)
}

/// Mean and standard error of a sample, summed in sorted order.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let r = values.len();
    if r == 0 {
        return (0.0, 0.0);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = sorted.iter().sum::<f64>() / r as f64;
    if r == 1 {
        return (mean, 0.0);
    }
    let mut dev: Vec<f64> = sorted.iter().map(|v| (v - mean) * (v - mean)).collect();
    dev.sort_by(f64::total_cmp);
    let var = dev.iter().sum::<f64>() / (r - 1) as f64;
    (mean, libm::sqrt(var / r as f64))
}

/// Per-checkpoint summary over replications.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    /// Checkpoint steps.
    pub checkpoints: Vec<u64>,
    /// Mean regret.
    pub regret_mean: Vec<f64>,
    /// Standard error of the regret.
    pub regret_stderr: Vec<f64>,
    /// Mean of `regret / ln t`.
    pub regret_over_log_mean: Vec<f64>,
    /// Standard error of `regret / ln t`.
    pub regret_over_log_stderr: Vec<f64>,
}

/// Summarizes replications sharing the same checkpoints. The result does not
/// depend on the order of `runs`.
pub fn aggregate(runs: &[RunResult]) -> Aggregate {
    let checkpoints = runs.first().map(|r| r.checkpoints.clone()).unwrap_or_default();
    let mut agg = Aggregate {
        checkpoints: checkpoints.clone(),
        regret_mean: Vec::new(),
        regret_stderr: Vec::new(),
        regret_over_log_mean: Vec::new(),
        regret_over_log_stderr: Vec::new(),
    };
    for c in 0..checkpoints.len() {
        let regret: Vec<f64> = runs.iter().map(|r| r.regret[c]).collect();
        let (mean, se) = mean_stderr(&regret);
        agg.regret_mean.push(mean);
        agg.regret_stderr.push(se);
        let scaled: Vec<f64> = runs.iter().map(|r| r.regret_over_log[c]).collect();
        let (mean, se) = mean_stderr(&scaled);
        agg.regret_over_log_mean.push(mean);
        agg.regret_over_log_stderr.push(se);
    }
    agg
}

/// Least-squares slope of `values` against `ln t` over checkpoints
/// `t >= t_last / 10`; `0` with fewer than three points or no spread.
pub fn slope_estimate(checkpoints: &[u64], values: &[f64]) -> f64 {
    let Some(&last) = checkpoints.last() else {
        return 0.0;
    };
    let pts: Vec<(f64, f64)> = checkpoints
        .iter()
        .zip(values)
        .filter(|(&t, _)| t * 10 >= last)
        .map(|(&t, &v)| (libm::log(t as f64), v))
        .collect();
    if pts.len() < 3 {
        return 0.0;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 1e-300 {
        0.0
    } else {
        sxy / sxx
    }
}

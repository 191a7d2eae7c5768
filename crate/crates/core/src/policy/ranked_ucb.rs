//! Baseline ranking arms by their KL-UCB index.

use alloc::vec::Vec;

use rand::RngCore;

use super::index::{klucb_index_with_tolerance, DEFAULT_INDEX_TOLERANCE};
use super::stats::ArmStats;
use super::{check_tolerance, Policy, PolicyDecision, PolicyError};
use crate::model::{Arm, ArmList, Observation, ProblemInstance};

/// Parameters of [`RankedUcb`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankedUcbConfig {
    /// Bisection tolerance of the index.
    pub index_tolerance: f64,
}

impl Default for RankedUcbConfig {
    fn default() -> Self {
        Self {
            index_tolerance: DEFAULT_INDEX_TOLERANCE,
        }
    }
}

/// Top-`m` arms by index, unobserved arms first; ties to the smaller arm id.
pub fn ranked_ucb_decide(stats: &ArmStats, num_slots: usize, index_tolerance: f64, step: u64) -> PolicyDecision {
    let index: Vec<f64> = (0..stats.num_arms())
        .map(|j| match stats.count(j) {
            0 => f64::INFINITY,
            n => klucb_index_with_tolerance(stats.mean(j), n, step.max(2), index_tolerance),
        })
        .collect();
    let mut order: Vec<Arm> = (0..stats.num_arms()).collect();
    order.sort_by(|&a, &b| index[b].total_cmp(&index[a]).then(a.cmp(&b)));
    order.truncate(num_slots);
    PolicyDecision::exploit(ArmList::from_vec_unchecked(order))
}

/// The ranked-UCB baseline.
#[derive(Debug, Clone)]
pub struct RankedUcb {
    stats: ArmStats,
    num_slots: usize,
    index_tolerance: f64,
}

impl RankedUcb {
    /// Builds the baseline; any instance shape is accepted.
    pub fn new(instance: &ProblemInstance, config: &RankedUcbConfig) -> Result<Self, PolicyError> {
        check_tolerance(config.index_tolerance)?;
        Ok(Self {
            stats: ArmStats::new(instance.num_arms()),
            num_slots: instance.num_slots(),
            index_tolerance: config.index_tolerance,
        })
    }
}

impl Policy for RankedUcb {
    fn name(&self) -> &'static str {
        "ranked_ucb"
    }

    fn decide(&mut self, step: u64, _rng: &mut dyn RngCore) -> PolicyDecision {
        let mut d = ranked_ucb_decide(&self.stats, self.num_slots, self.index_tolerance, step);
        d.initializing = self.stats.min_count() == 0;
        d
    }

    fn observe(&mut self, decision: &PolicyDecision, obs: &Observation) {
        for (k, &arm) in decision.list.arms().iter().enumerate() {
            if obs.exam[k] {
                self.stats.record(arm, obs.values[k]);
            }
        }
    }
}

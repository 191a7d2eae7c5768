//! KL-UCB with per-(slot, arm) statistics for instances without a factorized
//! structure.

use alloc::vec::Vec;

use rand::RngCore;

use super::index::{klucb_index_with_tolerance, DEFAULT_INDEX_TOLERANCE};
use super::stats::SlotArmStats;
use super::{check_tolerance, Policy, PolicyDecision, PolicyError};
use crate::assignment::max_weight_assignment;
use crate::model::{Arm, ArmList, Observation, ProblemInstance, Slot};

/// When a candidate `(k*, j*)` displaces the greedy list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExplorationRule {
    /// Explore when the candidate index plus the best mean completion of the
    /// other slots reaches the greedy list value.
    #[default]
    ListValue,
    /// Explore when the candidate index reaches the mean of the greedy arm in
    /// slot `k*`.
    SlotMean,
}

/// Parameters of [`PerSlot`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerSlotConfig {
    /// Exploration test.
    pub rule: ExplorationRule,
    /// Bisection tolerance of the index.
    pub index_tolerance: f64,
}

impl Default for PerSlotConfig {
    fn default() -> Self {
        Self {
            rule: ExplorationRule::ListValue,
            index_tolerance: DEFAULT_INDEX_TOLERANCE,
        }
    }
}

fn best_list(stats: &SlotArmStats, num_slots: usize, num_arms: usize, pin: Option<(Slot, Arm)>) -> (f64, Vec<Arm>) {
    let slots: Vec<Slot> = (0..num_slots).filter(|&k| pin.is_none_or(|(s, _)| s != k)).collect();
    let objects: Vec<Arm> = (0..num_arms).filter(|&j| pin.is_none_or(|(_, a)| a != j)).collect();
    let best = max_weight_assignment(&slots, &objects, |k, j| stats.mean(k, j))
        .expect("at least as many arms as slots");
    let mut arms = alloc::vec![0; num_slots];
    for (&k, &j) in slots.iter().zip(&best.objects) {
        arms[k] = j;
    }
    if let Some((k, j)) = pin {
        arms[k] = j;
    }
    (best.value, arms)
}

/// One decision after every (slot, arm) pair has been observed.
pub fn perslot_decide(
    stats: &SlotArmStats,
    num_slots: usize,
    num_arms: usize,
    rule: ExplorationRule,
    index_tolerance: f64,
    step: u64,
) -> Result<PolicyDecision, PolicyError> {
    let m = num_slots;
    if (0..m).any(|k| (0..num_arms).any(|j| stats.count(k, j) == 0)) {
        return Err(PolicyError::InitIncomplete);
    }
    let pair = (step % (m * num_arms) as u64) as usize;
    let (slot, arm) = (pair / num_arms, pair % num_arms);
    let (greedy_value, greedy) = best_list(stats, m, num_arms, None);
    let mut decision = PolicyDecision::exploit(ArmList::from_vec_unchecked(greedy.clone()));
    decision.explored_arm = Some(arm);
    if greedy[slot] == arm {
        return Ok(decision);
    }
    let index = klucb_index_with_tolerance(
        stats.mean(slot, arm),
        stats.count(slot, arm),
        step.max(2),
        index_tolerance,
    );
    let (rest_value, pinned) = best_list(stats, m, num_arms, Some((slot, arm)));
    let explore = match rule {
        ExplorationRule::ListValue => index + rest_value >= greedy_value,
        ExplorationRule::SlotMean => index >= stats.mean(slot, greedy[slot]),
    };
    if explore {
        decision.list = ArmList::from_vec_unchecked(pinned);
        decision.exploring = true;
        decision.explored_slot = Some(slot);
    }
    Ok(decision)
}

/// The per-slot policy.
#[derive(Debug, Clone)]
pub struct PerSlot {
    stats: SlotArmStats,
    num_slots: usize,
    num_arms: usize,
    rule: ExplorationRule,
    index_tolerance: f64,
    shift: usize,
}

impl PerSlot {
    /// Builds the policy; any instance shape is accepted.
    pub fn new(instance: &ProblemInstance, config: &PerSlotConfig) -> Result<Self, PolicyError> {
        check_tolerance(config.index_tolerance)?;
        let (n, m) = (instance.num_arms(), instance.num_slots());
        Ok(Self {
            stats: SlotArmStats::new(m, n),
            num_slots: m,
            num_arms: n,
            rule: config.rule,
            index_tolerance: config.index_tolerance,
            shift: 0,
        })
    }

    /// Current statistics.
    pub fn stats(&self) -> &SlotArmStats {
        &self.stats
    }
}

impl Policy for PerSlot {
    fn name(&self) -> &'static str {
        "perslot"
    }

    fn decide(&mut self, step: u64, _rng: &mut dyn RngCore) -> PolicyDecision {
        if self.shift < self.num_arms {
            // cyclic shifts cover every (slot, arm) pair in N steps
            let s = self.shift;
            self.shift += 1;
            let arms = (0..self.num_slots).map(|k| (s + k) % self.num_arms).collect();
            return PolicyDecision::init(ArmList::from_vec_unchecked(arms));
        }
        perslot_decide(
            &self.stats,
            self.num_slots,
            self.num_arms,
            self.rule,
            self.index_tolerance,
            step,
        )
        .expect("initialization complete")
    }

    fn observe(&mut self, decision: &PolicyDecision, obs: &Observation) {
        for (k, &arm) in decision.list.arms().iter().enumerate() {
            self.stats.record(k, arm, obs.values[k]);
        }
    }
}

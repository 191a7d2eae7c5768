//! Bernoulli KL divergences and regret tables.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::model::{
    enumerate_lists, list_value, optimal_structure, Arm, ArmList, ModelError, OptimalStructure,
    ProblemInstance, Slot, TIE_TOLERANCE,
};

/// Errors from divergence evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
#[allow(missing_docs)]
pub enum DivergenceError {
    #[error("bernoulli_kl: arguments must lie strictly inside (0, 1), got ({p}, {q})")]
    Domain { p: f64, q: f64 },
    #[error("slot {slot} or arm out of range")]
    Index { slot: Slot },
    #[error(transparent)]
    List(#[from] ModelError),
}

/// `kl(p, q)` in nats for Bernoulli laws; both arguments in `(0, 1)`.
pub fn bernoulli_kl(p: f64, q: f64) -> Result<f64, DivergenceError> {
    if !(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) {
        return Err(DivergenceError::Domain { p, q });
    }
    Ok(kl_unchecked(p, q))
}

/// Unvalidated KL; exact zero when `p == q`.
#[inline]
pub(crate) fn kl_unchecked(p: f64, q: f64) -> f64 {
    if p == q {
        return 0.0;
    }
    p * libm::log(p / q) + (1.0 - p) * libm::log((1.0 - p) / (1.0 - q))
}

/// `I_k(a, b)`: divergence between the slot-`k` reward laws of arms `a` and `b`.
pub fn slot_divergence(
    instance: &ProblemInstance,
    slot: Slot,
    a: Arm,
    b: Arm,
) -> Result<f64, DivergenceError> {
    if slot >= instance.num_slots() || a >= instance.num_arms() || b >= instance.num_arms() {
        return Err(DivergenceError::Index { slot });
    }
    match (instance.exam_probs(), instance.arm_means()) {
        (Some(p), Some(mu)) => Ok(p[slot] * bernoulli_kl(mu[a], mu[b])?),
        _ => bernoulli_kl(
            instance.expected_slot_reward(slot, a),
            instance.expected_slot_reward(slot, b),
        ),
    }
}

/// Divergence between the reward laws of `list` and `list` with `arm`
/// substituted at `slot`. Slot rewards are independent, so this collapses to
/// the slot divergence of the incumbent against the substitute.
pub fn list_divergence(
    instance: &ProblemInstance,
    list: &ArmList,
    slot: Slot,
    arm: Arm,
) -> Result<f64, DivergenceError> {
    list.validate(instance.num_arms(), instance.num_slots())?;
    if slot >= list.len() {
        return Err(DivergenceError::Index { slot });
    }
    slot_divergence(instance, slot, list.arm_at(slot), arm)
}

/// Per-list regrets and per-(slot, arm) minimal regrets.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTable {
    num_arms: usize,
    num_slots: usize,
    lists: Vec<ArmList>,
    per_list: Vec<f64>,
    // num_slots x num_arms
    per_slot_arm: Vec<f64>,
    structure: OptimalStructure,
}

impl RegretTable {
    /// Lists in lexicographic order; `per_list` is aligned with it.
    pub fn lists(&self) -> &[ArmList] {
        &self.lists
    }

    /// `Reg(pi)` for every list, indexed by lexicographic rank.
    pub fn per_list(&self) -> &[f64] {
        &self.per_list
    }

    /// `Reg(pi)` for the list of the given rank.
    pub fn list_regret(&self, rank: usize) -> f64 {
        self.per_list[rank]
    }

    /// `Reg(k, j)`: smallest regret of a list placing `arm` at `slot`.
    pub fn slot_arm(&self, slot: Slot, arm: Arm) -> f64 {
        self.per_slot_arm[slot * self.num_arms + arm]
    }

    /// Optimal structure the table was built from.
    pub fn structure(&self) -> &OptimalStructure {
        &self.structure
    }

    /// Number of slots.
    pub fn num_slots(&self) -> usize {
        self.num_slots
    }

    /// Number of arms.
    pub fn num_arms(&self) -> usize {
        self.num_arms
    }
}

/// Brute-force regret table. Lists within [`TIE_TOLERANCE`] of the optimum
/// get exactly zero regret.
pub fn regret_table(instance: &ProblemInstance) -> RegretTable {
    let structure = optimal_structure(instance);
    let lists = enumerate_lists(instance);
    let (n, m) = (instance.num_arms(), instance.num_slots());
    let mut per_slot_arm = vec![f64::INFINITY; m * n];
    let per_list: Vec<f64> = lists
        .iter()
        .map(|l| {
            let gap = structure.optimal_value - list_value(instance, l.arms());
            let reg = if gap <= TIE_TOLERANCE { 0.0 } else { gap };
            for (k, &a) in l.arms().iter().enumerate() {
                let cell = &mut per_slot_arm[k * n + a];
                *cell = cell.min(reg);
            }
            reg
        })
        .collect();
    RegretTable {
        num_arms: n,
        num_slots: m,
        lists,
        per_list,
        per_slot_arm,
        structure,
    }
}

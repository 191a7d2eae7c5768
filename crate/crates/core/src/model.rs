//! Bandit instances, arm lists, expected rewards and sampled feedback.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, RngCore};
use thiserror::Error;

/// Arm index, 0-based.
pub type Arm = usize;
/// Slot index, 0-based; slot 0 is the most important one.
pub type Slot = usize;

/// Two expected list rewards closer than this are treated as equal.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Largest number of lists an instance may have.
pub const MAX_LISTS: usize = 1 << 20;

/// Validation failures for instances and lists.
#[derive(Debug, Clone, PartialEq, Error)]
#[allow(missing_docs)]
pub enum ModelError {
    #[error("num_arms: need at least 2 arms, got {0}")]
    TooFewArms(usize),
    #[error("num_slots: need 1 <= m <= N, got m = {slots} with N = {arms}")]
    BadSlotCount { slots: usize, arms: usize },
    #[error("{field}[{index}]: value {value} outside {range}")]
    OutOfRange {
        field: &'static str,
        index: usize,
        value: f64,
        range: &'static str,
    },
    #[error("exam_probs[{index}]: examination probabilities must be strictly decreasing")]
    NotDecreasing { index: usize },
    #[error("slot_means[{row}]: expected {expected} slot entries, got {got}")]
    RaggedRow { row: usize, expected: usize, got: usize },
    #[error("instance has {0} lists, more than the supported maximum")]
    TooManyLists(usize),
    #[error("list: expected {expected} arms, got {got}")]
    ListLength { expected: usize, got: usize },
    #[error("list: arm {0} is outside the instance")]
    ArmOutOfRange(Arm),
    #[error("list: arm {0} appears more than once")]
    DuplicateArm(Arm),
}

/// Which reward parametrization an instance uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    /// Position-based: `E F(k, j) = p_k * mu_j`, with the examination bit observed.
    Factorized,
    /// Independent Bernoulli mean per (arm, slot).
    PerSlot,
}

#[derive(Debug, Clone, PartialEq)]
enum RewardModel {
    Factorized {
        exam_probs: Vec<f64>,
        arm_means: Vec<f64>,
    },
    PerSlot {
        // row-major, num_arms x num_slots
        slot_means: Vec<f64>,
    },
}

/// A Bernoulli bandit environment with `N` arms and `m` ordered slots.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    num_arms: usize,
    num_slots: usize,
    model: RewardModel,
}

fn check_open_unit(field: &'static str, values: &[f64]) -> Result<(), ModelError> {
    for (index, &value) in values.iter().enumerate() {
        if !(value > 0.0 && value < 1.0) {
            return Err(ModelError::OutOfRange {
                field,
                index,
                value,
                range: "(0, 1)",
            });
        }
    }
    Ok(())
}

fn check_shape(num_arms: usize, num_slots: usize) -> Result<(), ModelError> {
    if num_arms < 2 {
        return Err(ModelError::TooFewArms(num_arms));
    }
    if num_slots == 0 || num_slots > num_arms {
        return Err(ModelError::BadSlotCount {
            slots: num_slots,
            arms: num_arms,
        });
    }
    let lists = count_lists(num_arms, num_slots);
    if lists > MAX_LISTS {
        return Err(ModelError::TooManyLists(lists));
    }
    Ok(())
}

/// `N (N-1) ... (N-m+1)`, saturating.
fn count_lists(num_arms: usize, num_slots: usize) -> usize {
    (0..num_slots).fold(1usize, |acc, i| acc.saturating_mul(num_arms - i))
}

impl ProblemInstance {
    /// Position-based instance. `exam_probs` must be strictly decreasing in
    /// `(0, 1]`, `arm_means` in `(0, 1)`.
    pub fn factorized(exam_probs: Vec<f64>, arm_means: Vec<f64>) -> Result<Self, ModelError> {
        check_shape(arm_means.len(), exam_probs.len())?;
        for (index, &value) in exam_probs.iter().enumerate() {
            if !(value > 0.0 && value <= 1.0) {
                return Err(ModelError::OutOfRange {
                    field: "exam_probs",
                    index,
                    value,
                    range: "(0, 1]",
                });
            }
        }
        if let Some(index) = (1..exam_probs.len()).find(|&k| exam_probs[k] >= exam_probs[k - 1]) {
            return Err(ModelError::NotDecreasing { index });
        }
        check_open_unit("arm_means", &arm_means)?;
        Ok(Self {
            num_arms: arm_means.len(),
            num_slots: exam_probs.len(),
            model: RewardModel::Factorized {
                exam_probs,
                arm_means,
            },
        })
    }

    /// Per-slot instance from an `N x m` matrix of means, one row per arm.
    pub fn per_slot(rows: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        let num_arms = rows.len();
        let num_slots = rows.first().map_or(0, Vec::len);
        check_shape(num_arms, num_slots)?;
        let mut slot_means = Vec::with_capacity(num_arms * num_slots);
        for (row, values) in rows.iter().enumerate() {
            if values.len() != num_slots {
                return Err(ModelError::RaggedRow {
                    row,
                    expected: num_slots,
                    got: values.len(),
                });
            }
            slot_means.extend_from_slice(values);
        }
        check_open_unit("slot_means", &slot_means)?;
        Ok(Self {
            num_arms,
            num_slots,
            model: RewardModel::PerSlot { slot_means },
        })
    }

    /// Skips range validation so tests can use boundary means.
    #[cfg(test)]
    pub(crate) fn factorized_unchecked(exam_probs: Vec<f64>, arm_means: Vec<f64>) -> Self {
        Self {
            num_arms: arm_means.len(),
            num_slots: exam_probs.len(),
            model: RewardModel::Factorized {
                exam_probs,
                arm_means,
            },
        }
    }

    /// Reward parametrization.
    pub fn kind(&self) -> InstanceKind {
        match self.model {
            RewardModel::Factorized { .. } => InstanceKind::Factorized,
            RewardModel::PerSlot { .. } => InstanceKind::PerSlot,
        }
    }

    /// Number of arms `N`.
    pub fn num_arms(&self) -> usize {
        self.num_arms
    }

    /// Number of slots `m`.
    pub fn num_slots(&self) -> usize {
        self.num_slots
    }

    /// Number of distinct lists, `N! / (N-m)!`.
    pub fn num_lists(&self) -> usize {
        count_lists(self.num_arms, self.num_slots)
    }

    /// Slot examination probabilities (factorized instances only).
    pub fn exam_probs(&self) -> Option<&[f64]> {
        match &self.model {
            RewardModel::Factorized { exam_probs, .. } => Some(exam_probs),
            RewardModel::PerSlot { .. } => None,
        }
    }

    /// Arm satisfaction means (factorized instances only).
    pub fn arm_means(&self) -> Option<&[f64]> {
        match &self.model {
            RewardModel::Factorized { arm_means, .. } => Some(arm_means),
            RewardModel::PerSlot { .. } => None,
        }
    }

    /// Per-slot mean matrix as rows (per-slot instances only).
    pub fn slot_mean_rows(&self) -> Option<Vec<Vec<f64>>> {
        match &self.model {
            RewardModel::PerSlot { slot_means } => Some(
                slot_means
                    .chunks(self.num_slots)
                    .map(<[f64]>::to_vec)
                    .collect(),
            ),
            RewardModel::Factorized { .. } => None,
        }
    }

    /// Expected value of the slot reward `F(slot, arm)`.
    #[inline]
    pub fn expected_slot_reward(&self, slot: Slot, arm: Arm) -> f64 {
        match &self.model {
            RewardModel::Factorized {
                exam_probs,
                arm_means,
            } => exam_probs[slot] * arm_means[arm],
            RewardModel::PerSlot { slot_means } => slot_means[arm * self.num_slots + slot],
        }
    }
}

/// An ordered assignment of `m` distinct arms to the `m` slots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArmList(Vec<Arm>);

impl ArmList {
    /// Validates length, range and distinctness against an instance shape.
    pub fn new(arms: Vec<Arm>, num_arms: usize, num_slots: usize) -> Result<Self, ModelError> {
        let list = Self(arms);
        list.validate(num_arms, num_slots)?;
        Ok(list)
    }

    /// Checks the list against an instance shape.
    pub fn validate(&self, num_arms: usize, num_slots: usize) -> Result<(), ModelError> {
        let arms = &self.0;
        if arms.len() != num_slots {
            return Err(ModelError::ListLength {
                expected: num_slots,
                got: arms.len(),
            });
        }
        for (k, &arm) in arms.iter().enumerate() {
            if arm >= num_arms {
                return Err(ModelError::ArmOutOfRange(arm));
            }
            if arms[..k].contains(&arm) {
                return Err(ModelError::DuplicateArm(arm));
            }
        }
        Ok(())
    }

    /// Validates against `instance`.
    pub fn for_instance(arms: Vec<Arm>, instance: &ProblemInstance) -> Result<Self, ModelError> {
        Self::new(arms, instance.num_arms(), instance.num_slots())
    }

    pub(crate) fn from_vec_unchecked(arms: Vec<Arm>) -> Self {
        Self(arms)
    }

    /// Arms in slot order.
    pub fn arms(&self) -> &[Arm] {
        &self.0
    }

    /// Arm shown in `slot`.
    pub fn arm_at(&self, slot: Slot) -> Arm {
        self.0[slot]
    }

    /// Slot holding `arm`, if any.
    pub fn slot_of(&self, arm: Arm) -> Option<Slot> {
        self.0.iter().position(|&a| a == arm)
    }

    /// Whether `arm` is shown.
    pub fn contains(&self, arm: Arm) -> bool {
        self.0.contains(&arm)
    }

    /// Number of slots.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false for valid lists.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Formats with 1-based arm labels, e.g. `(1,2)`.
impl fmt::Display for ArmList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, arm) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", arm + 1)?;
        }
        f.write_str(")")
    }
}

/// Bijection between lists and their rank in lexicographic order.
#[derive(Debug, Clone)]
pub struct ListIndexer {
    num_arms: usize,
    num_slots: usize,
    // weights[k] = number of completions of a prefix of length k + 1
    weights: Vec<usize>,
}

impl ListIndexer {
    /// Indexer for the given shape.
    pub fn new(num_arms: usize, num_slots: usize) -> Self {
        let weights = (0..num_slots)
            .map(|k| count_lists(num_arms - k - 1, num_slots - k - 1))
            .collect();
        Self {
            num_arms,
            num_slots,
            weights,
        }
    }

    /// Indexer for `instance`.
    pub fn for_instance(instance: &ProblemInstance) -> Self {
        Self::new(instance.num_arms(), instance.num_slots())
    }

    /// Number of lists.
    pub fn len(&self) -> usize {
        count_lists(self.num_arms, self.num_slots)
    }

    /// Always false: every valid shape has at least one list.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Lexicographic rank of `list`.
    pub fn rank(&self, list: &ArmList) -> usize {
        self.rank_arms(list.arms())
    }

    /// Lexicographic rank of a raw arm sequence (must be a valid list).
    pub fn rank_arms(&self, arms: &[Arm]) -> usize {
        let mut rank = 0;
        for (k, &arm) in arms.iter().enumerate() {
            let smaller_unused = arm - arms[..k].iter().filter(|&&a| a < arm).count();
            rank += smaller_unused * self.weights[k];
        }
        rank
    }

    /// Inverse of [`rank`](Self::rank).
    pub fn unrank(&self, mut rank: usize) -> ArmList {
        let mut used = vec![false; self.num_arms];
        let mut arms = Vec::with_capacity(self.num_slots);
        for k in 0..self.num_slots {
            let mut skip = rank / self.weights[k];
            rank %= self.weights[k];
            let arm = (0..self.num_arms)
                .find(|&a| {
                    if used[a] {
                        return false;
                    }
                    if skip == 0 {
                        return true;
                    }
                    skip -= 1;
                    false
                })
                .expect("rank within range");
            used[arm] = true;
            arms.push(arm);
        }
        ArmList(arms)
    }
}

/// All lists of `m` distinct arms, lexicographically sorted.
pub fn enumerate_lists(instance: &ProblemInstance) -> Vec<ArmList> {
    fn extend(
        prefix: &mut Vec<Arm>,
        used: &mut [bool],
        num_slots: usize,
        out: &mut Vec<ArmList>,
    ) {
        if prefix.len() == num_slots {
            out.push(ArmList(prefix.clone()));
            return;
        }
        for arm in 0..used.len() {
            if used[arm] {
                continue;
            }
            used[arm] = true;
            prefix.push(arm);
            extend(prefix, used, num_slots, out);
            prefix.pop();
            used[arm] = false;
        }
    }
    let mut out = Vec::with_capacity(instance.num_lists());
    let mut used = vec![false; instance.num_arms()];
    extend(
        &mut Vec::with_capacity(instance.num_slots()),
        &mut used,
        instance.num_slots(),
        &mut out,
    );
    out
}

/// `E R = sum_k E F(k, list[k])`.
pub fn expected_list_reward(instance: &ProblemInstance, list: &ArmList) -> Result<f64, ModelError> {
    list.validate(instance.num_arms(), instance.num_slots())?;
    Ok(list_value(instance, list.arms()))
}

#[inline]
pub(crate) fn list_value(instance: &ProblemInstance, arms: &[Arm]) -> f64 {
    arms.iter()
        .enumerate()
        .map(|(k, &a)| instance.expected_slot_reward(k, a))
        .sum()
}

/// Which lists are optimal, and how arms split around them.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalStructure {
    /// Best expected list reward.
    pub optimal_value: f64,
    /// Lists within [`TIE_TOLERANCE`] of the best, lexicographic order.
    pub optimal_lists: Vec<ArmList>,
    /// Arms shown in at least one optimal list, ascending.
    pub relevant_arms: Vec<Arm>,
    /// All other arms, ascending.
    pub irrelevant_arms: Vec<Arm>,
    /// `slot_winners[k]`: arms placed in slot `k` by some optimal list.
    pub slot_winners: Vec<Vec<Arm>>,
}

impl OptimalStructure {
    /// Whether `arm` is relevant.
    pub fn is_relevant(&self, arm: Arm) -> bool {
        self.relevant_arms.binary_search(&arm).is_ok()
    }
}

/// Exhaustive maximization of the expected list reward.
pub fn optimal_structure(instance: &ProblemInstance) -> OptimalStructure {
    let lists = enumerate_lists(instance);
    let values: Vec<f64> = lists.iter().map(|l| list_value(instance, l.arms())).collect();
    let optimal_value = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let optimal_lists: Vec<ArmList> = lists
        .into_iter()
        .zip(&values)
        .filter(|(_, &v)| optimal_value - v <= TIE_TOLERANCE)
        .map(|(l, _)| l)
        .collect();

    let mut relevant = vec![false; instance.num_arms()];
    let mut slot_winners = vec![Vec::new(); instance.num_slots()];
    for list in &optimal_lists {
        for (k, &arm) in list.arms().iter().enumerate() {
            relevant[arm] = true;
            if !slot_winners[k].contains(&arm) {
                slot_winners[k].push(arm);
            }
        }
    }
    for winners in &mut slot_winners {
        winners.sort_unstable();
    }
    let (relevant_arms, irrelevant_arms) = (0..instance.num_arms()).partition(|&a| relevant[a]);
    OptimalStructure {
        optimal_value,
        optimal_lists,
        relevant_arms,
        irrelevant_arms,
        slot_winners,
    }
}

/// One step's feedback.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    /// Examination bits; always set for per-slot instances.
    pub exam: Vec<bool>,
    /// Observed slot values `f_k`.
    pub values: Vec<f64>,
    /// List reward, the sum of `values`.
    pub reward: f64,
}

/// Draws feedback for `list`. Consumes the stream in slot order: for a
/// factorized instance two uniforms per slot (examination, then satisfaction,
/// the latter drawn even when unexamined); one uniform per slot otherwise.
pub fn sample_observation<R: RngCore + ?Sized>(
    instance: &ProblemInstance,
    list: &ArmList,
    rng: &mut R,
) -> Observation {
    let m = instance.num_slots();
    let mut exam = Vec::with_capacity(m);
    let mut values = Vec::with_capacity(m);
    match &instance.model {
        RewardModel::Factorized {
            exam_probs,
            arm_means,
        } => {
            for (k, &arm) in list.arms().iter().enumerate() {
                let examined = rng.gen::<f64>() < exam_probs[k];
                let satisfied = rng.gen::<f64>() < arm_means[arm];
                exam.push(examined);
                values.push(if examined && satisfied { 1.0 } else { 0.0 });
            }
        }
        RewardModel::PerSlot { slot_means } => {
            for (k, &arm) in list.arms().iter().enumerate() {
                let hit = rng.gen::<f64>() < slot_means[arm * m + k];
                exam.push(true);
                values.push(if hit { 1.0 } else { 0.0 });
            }
        }
    }
    let reward = values.iter().sum();
    Observation {
        exam,
        values,
        reward,
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// p = (1.0, 0.5), mu = (0.9, 0.8, 0.6).
    pub fn pbm_3x2() -> ProblemInstance {
        ProblemInstance::factorized(vec![1.0, 0.5], vec![0.9, 0.8, 0.6]).unwrap()
    }

    /// theta = [[0.9, 0.5], [0.7, 0.6], [0.5, 0.3]].
    pub fn pos_2x2() -> ProblemInstance {
        ProblemInstance::per_slot(vec![vec![0.9, 0.5], vec![0.7, 0.6], vec![0.5, 0.3]]).unwrap()
    }

    pub fn list(arms: &[Arm]) -> ArmList {
        ArmList(arms.to_vec())
    }
}

//! Asymptotic lower bounds on `Reg_T / log T`.
//!
//! Three routes are available:
//! - the linear program over per-list play rates ([`lp`]), whose duals are the
//!   multipliers of its optimality system; [`kkt`] enumerates that system's
//!   active sets exhaustively for small instances,
//! - the closed form `sum_j max_i min_k Reg(k, j) / I_k(j, i)` ([`theorem1_bound`]),
//! - the per-slot form `sum_{j, k} max_{i in A*_k} Reg(k, j) / I_k(j, i)`
//!   ([`theorem2_bound`]) for instances whose arms are unrelated across slots.
//!
//! `j` ranges over irrelevant arms and `i` over relevant ones.

pub mod kkt;
pub mod lp;
pub mod slot_closing;

use alloc::vec::Vec;

use thiserror::Error;

use crate::divergence::{bernoulli_kl, regret_table, slot_divergence, DivergenceError, RegretTable};
use crate::model::{Arm, InstanceKind, ProblemInstance, Slot};

pub use lp::{build_lp, solve_lp, BoundLp, KktResiduals, LpSolution};
pub use slot_closing::{verify_slot_closing, SlotClosingReport};

/// Errors from bound computations.
#[derive(Debug, Clone, PartialEq, Error)]
#[allow(missing_docs)]
pub enum BoundError {
    #[error("ill-posed instance: irrelevant arm {irrelevant} and relevant arm {relevant} have zero divergence in slot {slot}")]
    ZeroDivergence {
        irrelevant: Arm,
        relevant: Arm,
        slot: Slot,
    },
    #[error("{operation} needs a {expected:?} instance")]
    WrongKind {
        operation: &'static str,
        expected: InstanceKind,
    },
    #[error("arm {0} is relevant; play-count bounds apply to irrelevant arms")]
    RelevantArm(Arm),
    #[error("instance has no irrelevant arm; the bound program is empty")]
    EmptyProgram,
    #[error("bound program row for (relevant {relevant}, irrelevant {irrelevant}) has no positive coefficient")]
    EmptyRow { relevant: Arm, irrelevant: Arm },
    #[error("internal solver error: bound program reported {0}")]
    Solver(&'static str),
    #[error("slot closing: {0}")]
    SlotClosing(&'static str),
    #[error(transparent)]
    Divergence(#[from] DivergenceError),
}

/// All bounds for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundResult {
    /// Optimum of the bound linear program (0 without irrelevant arms).
    pub lp_bound: f64,
    /// Solution of the bound program, when it is non-empty.
    pub lp_solution: Option<LpSolution>,
    /// Closed form `sum_j max_i min_k Reg(k, j) / I_k(j, i)`.
    pub theorem1: f64,
    /// Per-slot bound (per-slot instances only).
    pub theorem2: Option<f64>,
    /// `sum_j (mu_(m) - mu_j) / (p_m kl(mu_j, mu_(m)))` (factorized only).
    pub theorem3_as_stated: Option<f64>,
    /// The same asymptote evaluated through the closed form (factorized only).
    pub theorem3_theorem1_consistent: Option<f64>,
    /// `[k][j]` lower limit of `N_T(k, j) / log T` (per-slot only; 0 for relevant arms).
    pub per_slot_play_bounds: Option<Vec<Vec<f64>>>,
}

fn checked_divergence(
    instance: &ProblemInstance,
    slot: Slot,
    irrelevant: Arm,
    relevant: Arm,
) -> Result<f64, BoundError> {
    let d = slot_divergence(instance, slot, irrelevant, relevant)?;
    if d <= 0.0 {
        return Err(BoundError::ZeroDivergence {
            irrelevant,
            relevant,
            slot,
        });
    }
    Ok(d)
}

fn theorem1_from_table(instance: &ProblemInstance, table: &RegretTable) -> Result<f64, BoundError> {
    let s = table.structure();
    let mut total = 0.0;
    for &j in &s.irrelevant_arms {
        let mut worst = f64::NEG_INFINITY;
        for &i in &s.relevant_arms {
            let mut best = f64::INFINITY;
            for k in 0..instance.num_slots() {
                let ratio = table.slot_arm(k, j) / checked_divergence(instance, k, j, i)?;
                best = best.min(ratio);
            }
            worst = worst.max(best);
        }
        total += worst;
    }
    Ok(total)
}

/// Closed-form bound `sum_j max_i min_k Reg(k, j) / I_k(j, i)`.
pub fn theorem1_bound(instance: &ProblemInstance) -> Result<f64, BoundError> {
    theorem1_from_table(instance, &regret_table(instance))
}

fn theorem2_from_table(instance: &ProblemInstance, table: &RegretTable) -> Result<f64, BoundError> {
    let s = table.structure();
    let mut total = 0.0;
    for &j in &s.irrelevant_arms {
        for (k, winners) in s.slot_winners.iter().enumerate() {
            let mut worst = f64::NEG_INFINITY;
            for &i in winners {
                worst = worst.max(table.slot_arm(k, j) / checked_divergence(instance, k, j, i)?);
            }
            total += worst;
        }
    }
    Ok(total)
}

fn require_kind(
    instance: &ProblemInstance,
    expected: InstanceKind,
    operation: &'static str,
) -> Result<(), BoundError> {
    if instance.kind() != expected {
        return Err(BoundError::WrongKind {
            operation,
            expected,
        });
    }
    Ok(())
}

/// Per-slot bound `sum_{j, k} max_{i in A*_k} Reg(k, j) / I_k(j, i)`.
pub fn theorem2_bound(instance: &ProblemInstance) -> Result<f64, BoundError> {
    require_kind(instance, InstanceKind::PerSlot, "theorem2_bound")?;
    theorem2_from_table(instance, &regret_table(instance))
}

/// Lower limit of `E N_T(k, j) / log T` for an irrelevant arm `j`:
/// `max_{i in A*_k} 1 / I_k(j, i)`.
pub fn play_count_bound(
    instance: &ProblemInstance,
    slot: Slot,
    arm: Arm,
) -> Result<f64, BoundError> {
    require_kind(instance, InstanceKind::PerSlot, "play_count_bound")?;
    let s = crate::model::optimal_structure(instance);
    play_count_from_structure(instance, &s, slot, arm)
}

fn play_count_from_structure(
    instance: &ProblemInstance,
    s: &crate::model::OptimalStructure,
    slot: Slot,
    arm: Arm,
) -> Result<f64, BoundError> {
    if s.is_relevant(arm) {
        return Err(BoundError::RelevantArm(arm));
    }
    let mut worst = f64::NEG_INFINITY;
    for &i in &s.slot_winners[slot] {
        worst = worst.max(1.0 / checked_divergence(instance, slot, arm, i)?);
    }
    Ok(worst)
}

/// The two readings of the factorized asymptote.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem3Constants {
    /// `sum_j (mu_(m) - mu_j) / (p_m kl(mu_j, mu_(m)))`, `mu_(m)` the m-th largest mean.
    pub as_stated: f64,
    /// [`theorem1_bound`] on the same instance, which carries no `1/p_m`.
    pub theorem1_consistent: f64,
}

/// Both readings of the asymptotic regret constant of the factorized algorithm.
pub fn theorem3_constant(instance: &ProblemInstance) -> Result<Theorem3Constants, BoundError> {
    require_kind(instance, InstanceKind::Factorized, "theorem3_constant")?;
    let table = regret_table(instance);
    let as_stated = theorem3_literal(instance, &table)?;
    Ok(Theorem3Constants {
        as_stated,
        theorem1_consistent: theorem1_from_table(instance, &table)?,
    })
}

fn theorem3_literal(instance: &ProblemInstance, table: &RegretTable) -> Result<f64, BoundError> {
    let (p, mu) = match (instance.exam_probs(), instance.arm_means()) {
        (Some(p), Some(mu)) => (p, mu),
        _ => unreachable!("factorized instance"),
    };
    let m = instance.num_slots();
    let mut sorted = mu.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mth = sorted[m - 1];
    let p_m = p[m - 1];
    let mut total = 0.0;
    for &j in &table.structure().irrelevant_arms {
        let kl = bernoulli_kl(mu[j], mth)?;
        if kl <= 0.0 {
            let relevant = (0..mu.len()).find(|&a| mu[a] == mth).unwrap_or(j);
            return Err(BoundError::ZeroDivergence {
                irrelevant: j,
                relevant,
                slot: m - 1,
            });
        }
        total += (mth - mu[j]) / (p_m * kl);
    }
    Ok(total)
}

/// Every bound applicable to `instance`.
pub fn lower_bounds(instance: &ProblemInstance) -> Result<LowerBoundResult, BoundError> {
    let table = regret_table(instance);
    let (lp_bound, lp_solution) = match lp::build_lp_from_table(instance, &table) {
        Ok(program) => {
            let solution = solve_lp(&program)?;
            (solution.objective, Some(solution))
        }
        Err(BoundError::EmptyProgram) => (0.0, None),
        Err(e) => return Err(e),
    };
    let theorem1 = theorem1_from_table(instance, &table)?;
    let mut result = LowerBoundResult {
        lp_bound,
        lp_solution,
        theorem1,
        theorem2: None,
        theorem3_as_stated: None,
        theorem3_theorem1_consistent: None,
        per_slot_play_bounds: None,
    };
    match instance.kind() {
        InstanceKind::Factorized => {
            result.theorem3_as_stated = Some(theorem3_literal(instance, &table)?);
            result.theorem3_theorem1_consistent = Some(theorem1);
        }
        InstanceKind::PerSlot => {
            result.theorem2 = Some(theorem2_from_table(instance, &table)?);
            let s = table.structure();
            let mut grid = Vec::with_capacity(instance.num_slots());
            for k in 0..instance.num_slots() {
                let mut row = Vec::with_capacity(instance.num_arms());
                for j in 0..instance.num_arms() {
                    row.push(if s.is_relevant(j) {
                        0.0
                    } else {
                        play_count_from_structure(instance, s, k, j)?
                    });
                }
                grid.push(row);
            }
            result.per_slot_play_bounds = Some(grid);
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::model::ProblemInstance;
    use alloc::vec;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn kl(p: f64, q: f64) -> f64 {
        bernoulli_kl(p, q).unwrap()
    }

    #[test]
    fn theorem1_on_pbm() {
        // brute force over (i, k): i = arm 1 gives 0.64259, i = arm 2 gives 1.91113
        let i1 = f64::min(0.25 / kl(0.6, 0.9), 0.1 / (0.5 * kl(0.6, 0.9)));
        let i2 = f64::min(0.25 / kl(0.6, 0.8), 0.1 / (0.5 * kl(0.6, 0.8)));
        assert_abs_diff_eq!(i1, 0.64259, epsilon = 1e-5);
        assert_abs_diff_eq!(theorem1_bound(&pbm_3x2()).unwrap(), i2, epsilon = 1e-12);
        assert_abs_diff_eq!(i2, 1.91113, epsilon = 1e-5);
    }

    #[test]
    fn no_irrelevant_arms_gives_zero() {
        let two = ProblemInstance::factorized(vec![0.9, 0.4], vec![0.3, 0.7]).unwrap();
        assert_eq!(theorem1_bound(&two).unwrap(), 0.0);
        let r = lower_bounds(&two).unwrap();
        assert_eq!(r.lp_bound, 0.0);
        assert!(r.lp_solution.is_none());
        assert_eq!(r.theorem3_as_stated, Some(0.0));
        assert!(matches!(build_lp(&two), Err(BoundError::EmptyProgram)));
        let pos = ProblemInstance::per_slot(vec![vec![0.3, 0.2], vec![0.6, 0.4]]).unwrap();
        assert_eq!(theorem2_bound(&pos).unwrap(), 0.0);
    }

    #[test]
    fn single_slot_is_classic_form() {
        let p1 = 0.7;
        let mu = [0.8, 0.5, 0.3];
        let inst = ProblemInstance::factorized(vec![p1], mu.to_vec()).unwrap();
        // hand reduction: Reg(1, j) = p1 (mu_1 - mu_j), I_1 = p1 kl(mu_j, mu_1)
        let expected: f64 = mu[1..]
            .iter()
            .map(|&m| p1 * (mu[0] - m) / (p1 * kl(m, mu[0])))
            .sum();
        assert_abs_diff_eq!(theorem1_bound(&inst).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn theorem2_on_pos() {
        let inst = pos_2x2();
        let expected = 0.4 / kl(0.5, 0.9) + 0.3 / kl(0.3, 0.6);
        assert_abs_diff_eq!(theorem2_bound(&inst).unwrap(), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(expected, 2.41538, epsilon = 1e-5);
        assert_abs_diff_eq!(play_count_bound(&inst, 1, 2).unwrap(), 5.4411, epsilon = 1e-4);
        assert_abs_diff_eq!(play_count_bound(&inst, 0, 2).unwrap(), 1.9576, epsilon = 1e-4);
        assert_eq!(play_count_bound(&inst, 0, 1), Err(BoundError::RelevantArm(1)));
        assert!(matches!(
            theorem2_bound(&pbm_3x2()),
            Err(BoundError::WrongKind { .. })
        ));
    }

    #[test]
    fn far_arm_has_small_play_bound() {
        let inst =
            ProblemInstance::per_slot(vec![vec![0.99, 0.98], vec![0.97, 0.99], vec![0.01, 0.01]])
                .unwrap();
        assert!(play_count_bound(&inst, 0, 2).unwrap() < 0.25);
    }

    #[test]
    fn theorem2_tie_set_takes_max() {
        // (1,2) and (2,1) tie, so A*_k = {1, 2} in both slots
        let inst =
            ProblemInstance::per_slot(vec![vec![0.8, 0.6], vec![0.7, 0.5], vec![0.4, 0.2]])
                .unwrap();
        let s = crate::model::optimal_structure(&inst);
        assert_eq!(s.optimal_lists.len(), 2);
        let t = regret_table(&inst);
        let mut expected = 0.0;
        for k in 0..2 {
            let theta_j = [0.4, 0.2][k];
            let winners = [[0.8, 0.7], [0.6, 0.5]][k];
            expected += winners
                .iter()
                .map(|&w| t.slot_arm(k, 2) / kl(theta_j, w))
                .fold(f64::NEG_INFINITY, f64::max);
        }
        assert_abs_diff_eq!(theorem2_bound(&inst).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn theorem3_both_readings() {
        let c = theorem3_constant(&pbm_3x2()).unwrap();
        assert_abs_diff_eq!(c.as_stated, 0.2 / (0.5 * kl(0.6, 0.8)), epsilon = 1e-12);
        assert_abs_diff_eq!(c.as_stated, 3.822278, epsilon = 1e-6);
        assert_abs_diff_eq!(c.theorem1_consistent, 1.91113, epsilon = 1e-5);

        let full = ProblemInstance::factorized(vec![1.0], vec![0.9, 0.6, 0.4]).unwrap();
        let c = theorem3_constant(&full).unwrap();
        assert_abs_diff_eq!(c.as_stated, c.theorem1_consistent, epsilon = 1e-12);
    }

    #[test]
    fn duplicate_irrelevant_arm_adds_one_term() {
        let base = ProblemInstance::factorized(vec![1.0, 0.6], vec![0.9, 0.7, 0.4]).unwrap();
        let dup = ProblemInstance::factorized(vec![1.0, 0.6], vec![0.9, 0.7, 0.4, 0.4]).unwrap();
        let a = theorem1_bound(&base).unwrap();
        let b = theorem1_bound(&dup).unwrap();
        let term = (0.7 - 0.4) / kl(0.4, 0.7);
        assert_abs_diff_eq!(a, term, epsilon = 1e-12);
        assert_abs_diff_eq!(b - a, term, epsilon = 1e-12);
    }

    fn arb_per_slot() -> impl Strategy<Value = ProblemInstance> {
        (3usize..=4)
            .prop_flat_map(|n| (Just(n), 1usize..=2))
            .prop_flat_map(|(n, m)| {
                prop::collection::vec(0.02f64..0.98, n * m).prop_map(move |theta| {
                    ProblemInstance::per_slot(theta.chunks(m).map(<[f64]>::to_vec).collect())
                        .unwrap()
                })
            })
    }

    proptest! {
        #[test]
        fn theorem2_dominates_theorem1(inst in arb_per_slot()) {
            let t1 = theorem1_bound(&inst);
            let t2 = theorem2_bound(&inst);
            if let (Ok(t1), Ok(t2)) = (t1, t2) {
                prop_assert!(t2 >= t1 - 1e-9 * t1.max(1.0), "t2 {} < t1 {}", t2, t1);
            }
        }
    }
}

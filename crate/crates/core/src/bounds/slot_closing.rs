//! Exhaustive check that closing one slot per step is never worse than
//! closing several slots at once.
//!
//! There are `m` objects and `m` slots with reward `r(k, j)` for object `j` in
//! slot `k`. Over `|C|` steps each slot of `C` must be closed at exactly one
//! step. At every step the open slots receive a maximum-weight assignment of
//! distinct objects. A schedule is an ordered partition of `C` into non-empty
//! groups, one group per step; remaining steps close nothing.

use alloc::vec::Vec;

use super::BoundError;
use crate::assignment::max_weight_assignment;
use crate::model::Slot;

/// Largest `m` the exhaustive check accepts.
pub const MAX_SLOTS: usize = 4;

/// Outcome of [`verify_slot_closing`].
#[derive(Debug, Clone, PartialEq)]
pub struct SlotClosingReport {
    /// Number of schedules enumerated.
    pub schedules: usize,
    /// Best cumulative reward over all schedules.
    pub global_best: f64,
    /// Best cumulative reward over one-slot-per-step schedules.
    pub one_per_step_best: f64,
    /// Whether the two agree (relative tolerance `1e-12`).
    pub equal: bool,
}

/// Enumerates every schedule closing the slots of `close` for the `m x m`
/// reward matrix `rewards[k][j]`.
pub fn verify_slot_closing(
    rewards: &[Vec<f64>],
    close: &[Slot],
) -> Result<SlotClosingReport, BoundError> {
    let m = rewards.len();
    if m == 0 || m > MAX_SLOTS {
        return Err(BoundError::SlotClosing("need 1 <= m <= 4"));
    }
    if rewards.iter().any(|row| row.len() != m) {
        return Err(BoundError::SlotClosing("reward matrix must be m x m"));
    }
    if close.len() > m {
        return Err(BoundError::SlotClosing("more slots to close than slots"));
    }
    let mut closing_mask = 0usize;
    for &k in close {
        if k >= m || closing_mask & (1 << k) != 0 {
            return Err(BoundError::SlotClosing("slots to close must be distinct and in range"));
        }
        closing_mask |= 1 << k;
    }

    // step value for every closed-slot mask
    let objects: Vec<usize> = (0..m).collect();
    let step_value: Vec<f64> = (0..1usize << m)
        .map(|closed| {
            let open: Vec<usize> = (0..m).filter(|k| closed & (1 << k) == 0).collect();
            max_weight_assignment(&open, &objects, |k, j| rewards[k][j])
                .map_or(0.0, |a| a.value)
        })
        .collect();

    let steps = close.len();
    let mut schedules = 0usize;
    let mut global_best = f64::NEG_INFINITY;
    let mut one_per_step_best = f64::NEG_INFINITY;
    let mut groups = Vec::new();
    enumerate_ordered_partitions(closing_mask, &mut groups, &mut |groups: &[usize]| {
        schedules += 1;
        let idle = (steps - groups.len()) as f64;
        let value = groups.iter().map(|&g| step_value[g]).sum::<f64>() + idle * step_value[0];
        global_best = global_best.max(value);
        if groups.iter().all(|g| g.count_ones() == 1) {
            one_per_step_best = one_per_step_best.max(value);
        }
    });
    let equal =
        (global_best - one_per_step_best).abs() <= 1e-12 * global_best.abs().max(1.0);
    Ok(SlotClosingReport {
        schedules,
        global_best,
        one_per_step_best,
        equal,
    })
}

fn enumerate_ordered_partitions<F: FnMut(&[usize])>(
    remaining: usize,
    groups: &mut Vec<usize>,
    visit: &mut F,
) {
    if remaining == 0 {
        visit(groups);
        return;
    }
    // every non-empty sub-mask of `remaining`
    let mut group = remaining;
    while group != 0 {
        groups.push(group);
        enumerate_ordered_partitions(remaining & !group, groups, visit);
        groups.pop();
        group = (group - 1) & remaining;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn identity_two_by_two() {
        let r = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let rep = verify_slot_closing(&r, &[0, 1]).unwrap();
        assert_eq!(rep.schedules, 3);
        assert!(rep.equal);
        assert_eq!(rep.global_best, 2.0);
    }

    #[test]
    fn empty_subset() {
        let r = vec![vec![0.3, 0.1], vec![0.2, 0.9]];
        let rep = verify_slot_closing(&r, &[]).unwrap();
        assert_eq!(rep.schedules, 1);
        assert!(rep.equal);
        assert_eq!(rep.global_best, 0.0);
    }

    #[test]
    fn fubini_counts() {
        let r = vec![vec![0.5; 4]; 4];
        let counts: Vec<usize> = (0..=4)
            .map(|n| {
                let close: Vec<usize> = (0..n).collect();
                verify_slot_closing(&r, &close).unwrap().schedules
            })
            .collect();
        assert_eq!(counts, vec![1, 1, 3, 13, 75]);
    }

    #[test]
    fn rejects_bad_input() {
        let r = vec![vec![0.0; 5]; 5];
        assert!(verify_slot_closing(&r, &[0]).is_err());
        let r = vec![vec![0.0; 2]; 2];
        assert!(verify_slot_closing(&r, &[0, 0]).is_err());
        assert!(verify_slot_closing(&r, &[2]).is_err());
    }
}

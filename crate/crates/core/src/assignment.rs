//! Exhaustive maximum-weight assignment of objects to slots.
//!
//! Only meant for the tiny shapes used here (a few slots, a handful of
//! objects); the search visits every injective map from slots to objects.

use alloc::vec;
use alloc::vec::Vec;

/// A maximum-weight assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// Total weight.
    pub value: f64,
    /// `objects[i]` is placed in `slots[i]` of the request.
    pub objects: Vec<usize>,
}

/// Assigns distinct `objects` to every slot in `slots`, maximizing
/// `sum weight(slot, object)`. Ties go to the lexicographically smallest
/// object sequence (in slot order). Returns `None` when there are fewer
/// objects than slots.
pub fn max_weight_assignment<W>(slots: &[usize], objects: &[usize], weight: W) -> Option<Assignment>
where
    W: Fn(usize, usize) -> f64,
{
    if objects.len() < slots.len() {
        return None;
    }
    let mut sorted = objects.to_vec();
    sorted.sort_unstable();
    let mut search = Search {
        slots,
        objects: &sorted,
        weight: &weight,
        used: vec![false; sorted.len()],
        current: Vec::with_capacity(slots.len()),
        best: None,
    };
    search.descend(0.0);
    search.best
}

struct Search<'a, W> {
    slots: &'a [usize],
    objects: &'a [usize],
    weight: &'a W,
    used: Vec<bool>,
    current: Vec<usize>,
    best: Option<Assignment>,
}

impl<W: Fn(usize, usize) -> f64> Search<'_, W> {
    fn descend(&mut self, value: f64) {
        let depth = self.current.len();
        if depth == self.slots.len() {
            // strict improvement keeps the first (lexicographically smallest) optimum
            if self.best.as_ref().is_none_or(|b| value > b.value) {
                self.best = Some(Assignment {
                    value,
                    objects: self.current.clone(),
                });
            }
            return;
        }
        let slot = self.slots[depth];
        for i in 0..self.objects.len() {
            if self.used[i] {
                continue;
            }
            let object = self.objects[i];
            self.used[i] = true;
            self.current.push(object);
            self.descend(value + (self.weight)(slot, object));
            self.current.pop();
            self.used[i] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn picks_best_matching() {
        let w = [[0.9, 0.5], [0.7, 0.6], [0.5, 0.3]]; // arm x slot
        let a = max_weight_assignment(&[0, 1], &[0, 1, 2], |s, o| w[o][s]).unwrap();
        assert_eq!(a.objects, vec![0, 1]);
        assert!((a.value - 1.5).abs() < 1e-12);
        // pin arm 2 at slot 0; slot 1 gets the best remaining arm
        let rest = max_weight_assignment(&[1], &[0, 1], |s, o| w[o][s]).unwrap();
        assert_eq!(rest.objects, vec![1]);
    }

    #[test]
    fn ties_prefer_smallest_objects() {
        let a = max_weight_assignment(&[0, 1], &[2, 1, 0], |_, _| 1.0).unwrap();
        assert_eq!(a.objects, vec![0, 1]);
    }

    #[test]
    fn too_few_objects() {
        assert!(max_weight_assignment(&[0, 1], &[3], |_, _| 0.0).is_none());
        let empty = max_weight_assignment(&[], &[], |_, _| 0.0).unwrap();
        assert_eq!(empty.value, 0.0);
    }
}

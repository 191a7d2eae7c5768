//! Randomized driver for the slot-closing check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use mpbandit_core::bounds::slot_closing::{verify_slot_closing, MAX_SLOTS};
use mpbandit_core::bounds::BoundError;

/// Counts over all matrices and subsets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma2Report {
    pub m: usize,
    pub trials: u64,
    pub seed: u64,
    pub checks: u64,
    pub passed: u64,
    pub failed: u64,
    pub schedules: u64,
}

/// Draws `trials` uniform `m x m` reward matrices and checks every non-empty
/// subset of slots.
pub fn run_lemma2(m: usize, trials: u64, seed: u64) -> Result<Lemma2Report, BoundError> {
    if m == 0 || m > MAX_SLOTS {
        return Err(BoundError::SlotClosing("need 1 <= m <= 4"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Lemma2Report {
        m,
        trials,
        seed,
        checks: 0,
        passed: 0,
        failed: 0,
        schedules: 0,
    };
    for _ in 0..trials {
        let rewards: Vec<Vec<f64>> = (0..m).map(|_| (0..m).map(|_| rng.gen::<f64>()).collect()).collect();
        for mask in 1..1usize << m {
            let close: Vec<usize> = (0..m).filter(|k| mask & (1 << k) != 0).collect();
            let r = verify_slot_closing(&rewards, &close)?;
            report.checks += 1;
            report.schedules += r.schedules as u64;
            if r.equal {
                report.passed += 1;
            } else {
                report.failed += 1;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_subsets() {
        let r = run_lemma2(2, 100, 1).unwrap();
        assert_eq!(r.checks, 300);
        assert_eq!(r.failed, 0);
        assert_eq!(run_lemma2(3, 0, 1).unwrap().checks, 0);
        assert!(run_lemma2(5, 1, 1).is_err());
        assert_eq!(run_lemma2(3, 20, 7).unwrap(), run_lemma2(3, 20, 7).unwrap());
    }
}

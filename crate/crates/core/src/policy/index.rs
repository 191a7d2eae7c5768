//! KL-UCB upper confidence index for Bernoulli observations.

use crate::divergence::kl_unchecked;

/// Default bisection tolerance.
pub const DEFAULT_INDEX_TOLERANCE: f64 = 1e-9;

const MEAN_CLAMP: f64 = 1e-9;

/// Exploration budget `log t + 3 log(max(log t, 1))`.
#[inline]
pub fn exploration_budget(step: u64) -> f64 {
    let log_t = libm::log(step.max(1) as f64);
    log_t + 3.0 * libm::log(log_t.max(1.0))
}

/// Largest `q` in `[mean_hat, 1)` with `count * kl(mean_hat, q) <= budget(t)`.
pub fn klucb_index(mean_hat: f64, count: u64, step: u64) -> f64 {
    klucb_index_with_tolerance(mean_hat, count, step, DEFAULT_INDEX_TOLERANCE)
}

/// [`klucb_index`] with an explicit bisection tolerance.
pub fn klucb_index_with_tolerance(mean_hat: f64, count: u64, step: u64, tolerance: f64) -> f64 {
    debug_assert!(count >= 1);
    let threshold = exploration_budget(step) / count.max(1) as f64;
    let p = mean_hat.clamp(MEAN_CLAMP, 1.0 - MEAN_CLAMP);
    let (mut lo, mut hi) = (p, 1.0);
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if kl_unchecked(p, mid) <= threshold {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo.max(mean_hat)
}

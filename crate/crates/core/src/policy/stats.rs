//! Running observation statistics.

use alloc::vec;
use alloc::vec::Vec;

/// Per-arm observation counts and sums.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmStats {
    counts: Vec<u64>,
    sums: Vec<f64>,
}

impl ArmStats {
    /// Empty statistics for `num_arms` arms.
    pub fn new(num_arms: usize) -> Self {
        Self {
            counts: vec![0; num_arms],
            sums: vec![0.0; num_arms],
        }
    }

    /// Builds statistics from explicit counts and means.
    pub fn from_counts_and_means(counts: &[u64], means: &[f64]) -> Self {
        assert_eq!(counts.len(), means.len());
        Self {
            counts: counts.to_vec(),
            sums: counts.iter().zip(means).map(|(&n, &mu)| n as f64 * mu).collect(),
        }
    }

    /// Number of arms.
    pub fn num_arms(&self) -> usize {
        self.counts.len()
    }

    /// Observations of `arm`.
    #[inline]
    pub fn count(&self, arm: usize) -> u64 {
        self.counts[arm]
    }

    /// Empirical mean of `arm`, `0` if never observed.
    #[inline]
    pub fn mean(&self, arm: usize) -> f64 {
        match self.counts[arm] {
            0 => 0.0,
            n => self.sums[arm] / n as f64,
        }
    }

    /// Adds one observation.
    #[inline]
    pub fn record(&mut self, arm: usize, value: f64) {
        self.counts[arm] += 1;
        self.sums[arm] += value;
    }

    /// Smallest count over all arms.
    pub fn min_count(&self) -> u64 {
        self.counts.iter().copied().min().unwrap_or(0)
    }
}

/// Per-(slot, arm) observation counts and sums.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotArmStats {
    num_arms: usize,
    counts: Vec<u64>,
    sums: Vec<f64>,
}

impl SlotArmStats {
    /// Empty statistics.
    pub fn new(num_slots: usize, num_arms: usize) -> Self {
        Self {
            num_arms,
            counts: vec![0; num_slots * num_arms],
            sums: vec![0.0; num_slots * num_arms],
        }
    }

    /// Observations of `arm` in `slot`.
    #[inline]
    pub fn count(&self, slot: usize, arm: usize) -> u64 {
        self.counts[slot * self.num_arms + arm]
    }

    /// Empirical mean of `arm` in `slot`, `0` if never observed.
    #[inline]
    pub fn mean(&self, slot: usize, arm: usize) -> f64 {
        let i = slot * self.num_arms + arm;
        match self.counts[i] {
            0 => 0.0,
            n => self.sums[i] / n as f64,
        }
    }

    /// Adds one observation.
    #[inline]
    pub fn record(&mut self, slot: usize, arm: usize, value: f64) {
        let i = slot * self.num_arms + arm;
        self.counts[i] += 1;
        self.sums[i] += value;
    }

    /// Sets the statistics of one cell.
    pub fn set(&mut self, slot: usize, arm: usize, count: u64, mean: f64) {
        let i = slot * self.num_arms + arm;
        self.counts[i] = count;
        self.sums[i] = count as f64 * mean;
    }
}

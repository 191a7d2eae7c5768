//! Observation-based KL-UCB for factorized instances.
//!
//! After a short initialization, every step picks a candidate arm `j* = t mod N`,
//! forms the leader list from the arms observed more than `delta * t` times and
//! lets `j*` take the last slot when its index reaches the last leader's mean.

use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::RngCore;

use super::index::{klucb_index_with_tolerance, DEFAULT_INDEX_TOLERANCE};
use super::stats::ArmStats;
use super::{check_tolerance, Policy, PolicyDecision, PolicyError};
use crate::model::{Arm, ArmList, InstanceKind, Observation, ProblemInstance, Slot};

/// How the slot ranking is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SlotOrder {
    /// Slots are already sorted by decreasing examination probability.
    #[default]
    Known,
    /// Sorted by empirical examination rates.
    Empirical,
}

/// Parameters of [`Algorithm1`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Algorithm1Config {
    /// Filter threshold; `None` means `p_m / (4 N^2)`.
    pub delta: Option<f64>,
    /// Bisection tolerance of the index.
    pub index_tolerance: f64,
    /// Slot ranking mode.
    pub slot_order: SlotOrder,
}

impl Default for Algorithm1Config {
    fn default() -> Self {
        Self {
            delta: None,
            index_tolerance: DEFAULT_INDEX_TOLERANCE,
            slot_order: SlotOrder::Known,
        }
    }
}

/// Top-`m` arms among those observed more than `delta * step` times, ranked by
/// mean and written into `slot_order`. Missing leaders are drawn uniformly
/// from the remaining arms.
pub fn leader_list(
    stats: &ArmStats,
    slot_order: &[Slot],
    delta: f64,
    step: u64,
    rng: &mut dyn RngCore,
) -> Result<ArmList, PolicyError> {
    let m = slot_order.len();
    if stats.min_count() < m as u64 {
        return Err(PolicyError::InitIncomplete);
    }
    let threshold = delta * step as f64;
    let n = stats.num_arms();
    let mut group: Vec<Arm> = (0..n).filter(|&j| stats.count(j) as f64 > threshold).collect();
    if group.len() < m {
        let pool: Vec<Arm> = (0..n).filter(|&j| stats.count(j) as f64 <= threshold).collect();
        for i in sample(rng, pool.len(), m - group.len()) {
            group.push(pool[i]);
        }
    }
    group.sort_by(|&a, &b| stats.mean(b).total_cmp(&stats.mean(a)).then(a.cmp(&b)));
    let mut arms = alloc::vec![0; m];
    for (rank, &slot) in slot_order.iter().enumerate() {
        arms[slot] = group[rank];
    }
    Ok(ArmList::from_vec_unchecked(arms))
}

/// One decision after initialization.
pub fn algorithm1_decide(
    stats: &ArmStats,
    slot_order: &[Slot],
    delta: f64,
    index_tolerance: f64,
    step: u64,
    rng: &mut dyn RngCore,
) -> Result<PolicyDecision, PolicyError> {
    let leader = leader_list(stats, slot_order, delta, step, rng)?;
    let candidate = (step % stats.num_arms() as u64) as Arm;
    let mut decision = PolicyDecision::exploit(leader);
    decision.explored_arm = Some(candidate);
    if decision.list.contains(candidate) {
        return Ok(decision);
    }
    let last_slot = slot_order[slot_order.len() - 1];
    let last_mean = stats.mean(decision.list.arm_at(last_slot));
    let index = klucb_index_with_tolerance(
        stats.mean(candidate),
        stats.count(candidate),
        step.max(2),
        index_tolerance,
    );
    if index < last_mean {
        return Ok(decision);
    }
    let mut arms = decision.list.arms().to_vec();
    arms[last_slot] = candidate;
    decision.list = ArmList::from_vec_unchecked(arms);
    decision.exploring = true;
    decision.explored_slot = Some(last_slot);
    Ok(decision)
}

/// The factorized-optimal policy.
#[derive(Debug, Clone)]
pub struct Algorithm1 {
    stats: ArmStats,
    num_slots: usize,
    delta: f64,
    index_tolerance: f64,
    mode: SlotOrder,
    slot_order: Vec<Slot>,
    slot_plays: Vec<u64>,
    slot_exams: Vec<u64>,
    next_target: Arm,
}

impl Algorithm1 {
    /// Validates the configuration against a factorized instance.
    pub fn new(instance: &ProblemInstance, config: &Algorithm1Config) -> Result<Self, PolicyError> {
        let kind = instance.kind();
        let probs = match (kind, instance.exam_probs()) {
            (InstanceKind::Factorized, Some(p)) => p,
            _ => {
                return Err(PolicyError::ShapeMismatch {
                    policy: "algorithm1",
                    kind,
                })
            }
        };
        let (n, m) = (instance.num_arms(), instance.num_slots());
        let upper = probs[m - 1] / (2.0 * (n * n) as f64);
        let delta = config.delta.unwrap_or(upper / 2.0);
        if !(delta > 0.0 && delta < upper) {
            return Err(PolicyError::DeltaOutOfRange { value: delta, upper });
        }
        check_tolerance(config.index_tolerance)?;
        Ok(Self {
            stats: ArmStats::new(n),
            num_slots: m,
            delta,
            index_tolerance: config.index_tolerance,
            mode: config.slot_order,
            slot_order: (0..m).collect(),
            slot_plays: alloc::vec![0; m],
            slot_exams: alloc::vec![0; m],
            next_target: 0,
        })
    }

    /// Filter threshold in use.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Current statistics.
    pub fn stats(&self) -> &ArmStats {
        &self.stats
    }

    fn initializing(&self) -> bool {
        self.stats.min_count() < self.num_slots as u64
    }

    fn init_list(&mut self) -> ArmList {
        let n = self.stats.num_arms();
        let m = self.num_slots as u64;
        let owes = |j: Arm| self.stats.count(j) < m;
        let target = (0..n)
            .map(|i| (self.next_target + i) % n)
            .find(|&j| owes(j))
            .unwrap_or(0);
        self.next_target = (target + 1) % n;
        let mut arms = alloc::vec![target];
        let rest = (0..n).filter(|&j| j != target && owes(j));
        let filler = (0..n).filter(|&j| j != target && !owes(j));
        arms.extend(rest.chain(filler).take(self.num_slots - 1));
        let mut ordered = alloc::vec![0; self.num_slots];
        for (rank, &slot) in self.slot_order.iter().enumerate() {
            ordered[slot] = arms[rank];
        }
        ArmList::from_vec_unchecked(ordered)
    }

    fn refresh_slot_order(&mut self) {
        if self.mode != SlotOrder::Empirical {
            return;
        }
        let rate = |k: Slot| match self.slot_plays[k] {
            0 => 0.0,
            n => self.slot_exams[k] as f64 / n as f64,
        };
        let mut order: Vec<Slot> = (0..self.num_slots).collect();
        order.sort_by(|&a, &b| rate(b).total_cmp(&rate(a)).then(a.cmp(&b)));
        self.slot_order = order;
    }
}

impl Policy for Algorithm1 {
    fn name(&self) -> &'static str {
        "algorithm1"
    }

    fn decide(&mut self, step: u64, rng: &mut dyn RngCore) -> PolicyDecision {
        if self.initializing() {
            return PolicyDecision::init(self.init_list());
        }
        self.refresh_slot_order();
        algorithm1_decide(
            &self.stats,
            &self.slot_order,
            self.delta,
            self.index_tolerance,
            step,
            rng,
        )
        .expect("initialization complete")
    }

    fn observe(&mut self, decision: &PolicyDecision, obs: &Observation) {
        for (k, &arm) in decision.list.arms().iter().enumerate() {
            self.slot_plays[k] += 1;
            if obs.exam[k] {
                self.slot_exams[k] += 1;
                self.stats.record(arm, obs.values[k]);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::model::sample_observation;
    use alloc::vec;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(3)
    }

    #[test]
    fn protocol_error_before_init() {
        let stats = ArmStats::from_counts_and_means(&[5, 1, 5], &[0.5, 0.5, 0.5]);
        let err = algorithm1_decide(&stats, &[0, 1], 0.01, 0.0001, 100, &mut rng());
        assert_eq!(err, Err(PolicyError::InitIncomplete));
    }

    #[test]
    fn candidate_already_leading() {
        // t = 100, N = 3: j* = 1, leaders (0, 1)
        let stats = ArmStats::from_counts_and_means(&[50, 40, 10], &[0.9, 0.8, 0.6]);
        let d = algorithm1_decide(&stats, &[0, 1], 0.01, 1e-9, 100, &mut rng()).unwrap();
        assert_eq!(d.list, list(&[0, 1]));
        assert!(!d.exploring);
        assert_eq!(d.explored_arm, Some(1));
    }

    #[test]
    fn confident_candidate_is_skipped() {
        // t = 102: j* = 0 ... choose t = 101 so j* = 2 with many observations
        let stats = ArmStats::from_counts_and_means(&[500, 400, 10_000], &[0.9, 0.8, 0.6]);
        let d = algorithm1_decide(&stats, &[0, 1], 0.001, 1e-9, 101, &mut rng()).unwrap();
        assert!(klucb_index_with_tolerance(0.6, 10_000, 101, 1e-9) < 0.8);
        assert_eq!(d.list, list(&[0, 1]));
        assert!(!d.exploring);
    }

    #[test]
    fn uncertain_candidate_takes_last_slot() {
        let stats = ArmStats::from_counts_and_means(&[500, 400, 3], &[0.9, 0.8, 0.6]);
        let d = algorithm1_decide(&stats, &[0, 1], 0.001, 1e-9, 101, &mut rng()).unwrap();
        assert_eq!(d.list, list(&[0, 2]));
        assert!(d.exploring);
        assert_eq!(d.explored_slot, Some(1));
    }

    #[test]
    fn filter_pads_with_distinct_arms() {
        // nobody passes delta * t = 1000
        let stats = ArmStats::from_counts_and_means(&[5, 5, 5, 5], &[0.1, 0.2, 0.3, 0.4]);
        for seed in 0..50 {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let l = leader_list(&stats, &[0, 1], 1.0, 1000, &mut r).unwrap();
            assert!(l.validate(4, 2).is_ok());
            assert!(stats.mean(l.arm_at(0)) >= stats.mean(l.arm_at(1)));
        }
    }

    #[test]
    fn init_completes_with_m_observations() {
        let inst = pbm_3x2();
        let mut p = Algorithm1::new(&inst, &Algorithm1Config::default()).unwrap();
        let mut r = rng();
        let mut t = 1;
        while p.initializing() {
            let d = p.decide(t, &mut r);
            assert!(d.initializing);
            let obs = sample_observation(&inst, &d.list, &mut r);
            p.observe(&d, &obs);
            t += 1;
        }
        assert!(t <= 20);
        assert!(!p.decide(t, &mut r).initializing);
    }

    #[test]
    fn rejects_bad_delta() {
        let inst = pbm_3x2();
        // p_m / (2 N^2) = 0.5 / 18
        let cfg = Algorithm1Config {
            delta: Some(0.03),
            ..Default::default()
        };
        assert!(matches!(
            Algorithm1::new(&inst, &cfg),
            Err(PolicyError::DeltaOutOfRange { .. })
        ));
        let p = Algorithm1::new(&inst, &Algorithm1Config::default()).unwrap();
        assert!((p.delta() - 0.5 / 36.0).abs() < 1e-15);
    }

    #[test]
    fn empirical_order_follows_exam_rates() {
        let inst = ProblemInstance::factorized(vec![0.9, 0.3], vec![0.7, 0.5, 0.2]).unwrap();
        let cfg = Algorithm1Config {
            slot_order: SlotOrder::Empirical,
            ..Default::default()
        };
        let mut p = Algorithm1::new(&inst, &cfg).unwrap();
        p.slot_plays = vec![10, 10];
        p.slot_exams = vec![2, 8];
        p.refresh_slot_order();
        assert_eq!(p.slot_order, vec![1, 0]);
    }

    proptest! {
        // Rescaling every count and t by the same factor c = 1 (mod N) keeps
        // the candidate and the filter, so the decision can only change when
        // the index comparison flips toward exploitation.
        #[test]
        fn rescaling_keeps_leaders(
            counts in prop::collection::vec(3u64..200, 3),
            means in prop::collection::vec(0.05f64..0.95, 3),
            t in 100u64..1000,
            k in 1u64..4,
        ) {
            let c = 3 * k + 1;
            let a = ArmStats::from_counts_and_means(&counts, &means);
            let scaled: Vec<u64> = counts.iter().map(|&n| n * c).collect();
            let b = ArmStats::from_counts_and_means(&scaled, &means);
            let delta = 0.01;
            let da = algorithm1_decide(&a, &[0, 1], delta, 1e-9, t, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
            let db = algorithm1_decide(&b, &[0, 1], delta, 1e-9, t * c, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
            prop_assert_eq!(da.explored_arm, db.explored_arm);
            prop_assert_eq!(da.list.arm_at(0), db.list.arm_at(0));
            if !da.exploring {
                prop_assert!(!db.exploring);
                prop_assert_eq!(da.list, db.list);
            }
        }
    }
}

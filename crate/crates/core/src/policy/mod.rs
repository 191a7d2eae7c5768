//! Bandit policies.
//!
//! Every policy is a single-owner state machine: the harness alternates
//! [`Policy::decide`] and [`Policy::observe`]. Steps are global and 1-based.

mod algorithm1;
pub mod index;
mod perslot;
mod ranked_ucb;
mod stats;

use alloc::boxed::Box;

use rand::{Rng, RngCore};
use thiserror::Error;

use crate::model::{optimal_structure, Arm, ArmList, InstanceKind, ListIndexer, Observation, ProblemInstance, Slot};

pub use algorithm1::{algorithm1_decide, leader_list, Algorithm1, Algorithm1Config, SlotOrder};
pub use index::{klucb_index, klucb_index_with_tolerance, DEFAULT_INDEX_TOLERANCE};
pub use perslot::{perslot_decide, ExplorationRule, PerSlot, PerSlotConfig};
pub use ranked_ucb::{ranked_ucb_decide, RankedUcb, RankedUcbConfig};
pub use stats::{ArmStats, SlotArmStats};

/// Errors from policy configuration and protocol misuse.
#[derive(Debug, Clone, PartialEq, Error)]
#[allow(missing_docs)]
pub enum PolicyError {
    #[error("unknown policy name {0:?}; expected algorithm1, perslot, ranked_ucb, oracle or uniform")]
    UnknownName(alloc::string::String),
    #[error("policy {policy} cannot run on a {kind:?} instance")]
    ShapeMismatch {
        policy: &'static str,
        kind: InstanceKind,
    },
    #[error("delta: {value} must lie in (0, {upper})")]
    DeltaOutOfRange { value: f64, upper: f64 },
    #[error("index_tolerance: {0} must be positive and below 0.01")]
    BadTolerance(f64),
    #[error("decision requested before the initialization phase completed")]
    InitIncomplete,
}

/// What to show at one step.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyDecision {
    /// List to show.
    pub list: ArmList,
    /// Whether an exploration candidate replaced the exploitation choice.
    pub exploring: bool,
    /// The candidate arm considered at this step, if any.
    pub explored_arm: Option<Arm>,
    /// Slot the candidate occupies when exploring.
    pub explored_slot: Option<Slot>,
    /// Whether the step belongs to the initialization phase.
    pub initializing: bool,
}

impl PolicyDecision {
    pub(crate) fn exploit(list: ArmList) -> Self {
        Self {
            list,
            exploring: false,
            explored_arm: None,
            explored_slot: None,
            initializing: false,
        }
    }

    pub(crate) fn init(list: ArmList) -> Self {
        Self {
            initializing: true,
            ..Self::exploit(list)
        }
    }
}

/// A bandit policy.
pub trait Policy {
    /// Short name.
    fn name(&self) -> &'static str;
    /// Chooses the list for 1-based global `step`.
    fn decide(&mut self, step: u64, rng: &mut dyn RngCore) -> PolicyDecision;
    /// Feeds back the observation of the list just decided.
    fn observe(&mut self, decision: &PolicyDecision, obs: &Observation);
}

/// Policy selection and parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum PolicySpec {
    /// Factorized-optimal algorithm (observation-based KL-UCB with a sampling filter).
    Algorithm1(Algorithm1Config),
    /// Per-(slot, arm) statistics with matching-based exploitation.
    PerSlot(PerSlotConfig),
    /// Top-m arms by KL-UCB index.
    RankedUcb(RankedUcbConfig),
    /// Always a fixed optimal list.
    Oracle,
    /// Uniformly random list.
    Uniform,
}

impl PolicySpec {
    /// Default configuration for a policy name.
    pub fn from_name(name: &str) -> Result<Self, PolicyError> {
        Ok(match name {
            "algorithm1" => Self::Algorithm1(Algorithm1Config::default()),
            "perslot" => Self::PerSlot(PerSlotConfig::default()),
            "ranked_ucb" => Self::RankedUcb(RankedUcbConfig::default()),
            "oracle" => Self::Oracle,
            "uniform" => Self::Uniform,
            other => return Err(PolicyError::UnknownName(other.into())),
        })
    }

    /// Name used in configuration and reports.
    pub fn name(&self) -> &'static str {
        match self {
            Self::Algorithm1(_) => "algorithm1",
            Self::PerSlot(_) => "perslot",
            Self::RankedUcb(_) => "ranked_ucb",
            Self::Oracle => "oracle",
            Self::Uniform => "uniform",
        }
    }

    /// Instantiates the policy for `instance`.
    pub fn build(&self, instance: &ProblemInstance) -> Result<Box<dyn Policy + Send>, PolicyError> {
        Ok(match self {
            Self::Algorithm1(cfg) => Box::new(Algorithm1::new(instance, cfg)?),
            Self::PerSlot(cfg) => Box::new(PerSlot::new(instance, cfg)?),
            Self::RankedUcb(cfg) => Box::new(RankedUcb::new(instance, cfg)?),
            Self::Oracle => Box::new(Oracle {
                list: optimal_structure(instance).optimal_lists[0].clone(),
            }),
            Self::Uniform => Box::new(Uniform {
                indexer: ListIndexer::for_instance(instance),
            }),
        })
    }
}

pub(crate) fn check_tolerance(tolerance: f64) -> Result<(), PolicyError> {
    if tolerance > 0.0 && tolerance < 0.01 {
        Ok(())
    } else {
        Err(PolicyError::BadTolerance(tolerance))
    }
}

/// Plays a fixed optimal list.
#[derive(Debug, Clone)]
pub struct Oracle {
    list: ArmList,
}

impl Policy for Oracle {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn decide(&mut self, _step: u64, _rng: &mut dyn RngCore) -> PolicyDecision {
        PolicyDecision::exploit(self.list.clone())
    }

    fn observe(&mut self, _decision: &PolicyDecision, _obs: &Observation) {}
}

/// Plays a uniformly random list.
#[derive(Debug, Clone)]
pub struct Uniform {
    indexer: ListIndexer,
}

impl Policy for Uniform {
    fn name(&self) -> &'static str {
        "uniform"
    }

    fn decide(&mut self, _step: u64, rng: &mut dyn RngCore) -> PolicyDecision {
        let rank = rng.gen_range(0..self.indexer.len());
        PolicyDecision::exploit(self.indexer.unrank(rank))
    }

    fn observe(&mut self, _decision: &PolicyDecision, _obs: &Observation) {}
}

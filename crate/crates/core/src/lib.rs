//! Stochastic multi-armed bandits with non-equivalent multiple plays.
//!
//! An agent repeatedly shows a list of `m` distinct arms in `m` ordered slots.
//! The same arm yields different reward statistics in different slots, either
//! through a position-based factorization (slot examination probability times
//! arm satisfaction probability) or through an unrestricted arm×slot mean
//! matrix.
//!
//! The crate provides:
//! - [`model`]: instances, list enumeration, expected rewards, optimal structure
//!   and observation sampling.
//! - [`divergence`]: Bernoulli KL, per-slot divergences and regret tables.
//! - [`bounds`]: asymptotic regret lower bounds, the bound linear program with
//!   its duals, and an exhaustive verifier for the slot-closing lemma.
//! - [`policy`]: the factorized-optimal algorithm, its per-slot variant,
//!   ranked KL-UCB, oracle and uniform baselines.
//! - [`sim`]: seeded episodes, pseudo-regret bookkeeping, aggregation and
//!   slope estimation.
//!
//! Arms and slots are 0-based everywhere in this crate. Slot 0 is the most
//! important slot.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![warn(missing_docs)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod assignment;
pub mod bounds;
pub mod divergence;
pub mod model;
pub mod policy;
pub mod sim;
pub mod simplex;

pub use bounds::{lower_bounds, LowerBoundResult};
pub use divergence::{bernoulli_kl, regret_table, RegretTable};
pub use model::{
    enumerate_lists, expected_list_reward, optimal_structure, sample_observation, Arm, ArmList,
    InstanceKind, ListIndexer, Observation, OptimalStructure, ProblemInstance, Slot,
};
pub use policy::{Policy, PolicyDecision, PolicySpec};
pub use sim::{run_episode, RunResult};

//! Experiment documents, parallel replications, reports and the command-line
//! front end for `mpbandit-core`.
//!
//! Output uses 1-based arm and slot labels; the core library is 0-based.

pub mod cli;
pub mod document;
pub mod lemma2;
pub mod replicate;
pub mod report;

pub use document::{ExperimentDoc, InstanceDoc, PolicyDoc};
pub use replicate::{run_replicated, Replicated};

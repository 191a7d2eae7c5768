//! Instance and experiment documents (JSON).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use mpbandit_core::policy::{
    Algorithm1Config, ExplorationRule, PerSlotConfig, PolicyError, RankedUcbConfig, SlotOrder,
    DEFAULT_INDEX_TOLERANCE,
};
use mpbandit_core::model::ModelError;
use mpbandit_core::{PolicySpec, ProblemInstance};

/// A document that failed to parse or validate.
#[derive(Debug, Error)]
pub enum DocError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("instance: {0}")]
    Instance(#[from] ModelError),
    #[error("{field}: {reason}")]
    Field { field: &'static str, reason: String },
    #[error("policy: {0}")]
    Policy(#[from] PolicyError),
}

fn field(field: &'static str, reason: impl Into<String>) -> DocError {
    DocError::Field {
        field,
        reason: reason.into(),
    }
}

/// Reward structure of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindDoc {
    /// `exam_probs` and `arm_means`.
    Factorized,
    /// `slot_means`, one row per arm.
    PerSlot,
}

/// Problem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub kind: KindDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exam_probs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arm_means: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slot_means: Option<Vec<Vec<f64>>>,
}

impl InstanceDoc {
    /// Validates and builds the instance.
    pub fn build(&self) -> Result<ProblemInstance, DocError> {
        match self.kind {
            KindDoc::Factorized => {
                if self.slot_means.is_some() {
                    return Err(field("slot_means", "not allowed for a factorized instance"));
                }
                let p = self.exam_probs.clone().ok_or_else(|| field("exam_probs", "missing"))?;
                let mu = self.arm_means.clone().ok_or_else(|| field("arm_means", "missing"))?;
                Ok(ProblemInstance::factorized(p, mu)?)
            }
            KindDoc::PerSlot => {
                if self.exam_probs.is_some() {
                    return Err(field("exam_probs", "not allowed for a per_slot instance"));
                }
                if self.arm_means.is_some() {
                    return Err(field("arm_means", "not allowed for a per_slot instance"));
                }
                let rows = self.slot_means.clone().ok_or_else(|| field("slot_means", "missing"))?;
                Ok(ProblemInstance::per_slot(rows)?)
            }
        }
    }
}

/// Slot ranking mode of `algorithm1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotOrderDoc {
    Known,
    Empirical,
}

/// Exploration test of `perslot`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleDoc {
    ListValue,
    SlotMean,
}

/// Policy name and parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slot_order: Option<SlotOrderDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<RuleDoc>,
}

impl PolicyDoc {
    /// A policy block with default parameters.
    pub fn named(name: &str) -> Self {
        Self {
            name: name.to_string(),
            delta: None,
            index_tolerance: None,
            slot_order: None,
            rule: None,
        }
    }

    /// Validates the parameters against the policy name.
    pub fn to_spec(&self) -> Result<PolicySpec, DocError> {
        let tol = self.index_tolerance.unwrap_or(DEFAULT_INDEX_TOLERANCE);
        let name = self.name.as_str();
        let reject = |used: bool, f: &'static str| {
            if used {
                Err(field(f, format!("not a parameter of policy {name}")))
            } else {
                Ok(())
            }
        };
        let spec = PolicySpec::from_name(name)?;
        let uses_index = !matches!(spec, PolicySpec::Oracle | PolicySpec::Uniform);
        reject(!uses_index && self.index_tolerance.is_some(), "index_tolerance")?;
        reject(!matches!(spec, PolicySpec::Algorithm1(_)) && self.delta.is_some(), "delta")?;
        reject(!matches!(spec, PolicySpec::Algorithm1(_)) && self.slot_order.is_some(), "slot_order")?;
        reject(!matches!(spec, PolicySpec::PerSlot(_)) && self.rule.is_some(), "rule")?;
        Ok(match spec {
            PolicySpec::Algorithm1(_) => PolicySpec::Algorithm1(Algorithm1Config {
                delta: self.delta,
                index_tolerance: tol,
                slot_order: match self.slot_order {
                    Some(SlotOrderDoc::Empirical) => SlotOrder::Empirical,
                    _ => SlotOrder::Known,
                },
            }),
            PolicySpec::PerSlot(_) => PolicySpec::PerSlot(PerSlotConfig {
                rule: match self.rule {
                    Some(RuleDoc::SlotMean) => ExplorationRule::SlotMean,
                    _ => ExplorationRule::ListValue,
                },
                index_tolerance: tol,
            }),
            PolicySpec::RankedUcb(_) => PolicySpec::RankedUcb(RankedUcbConfig { index_tolerance: tol }),
            other => other,
        })
    }
}

/// Horizon, checkpoints and replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunDoc {
    pub horizon: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<u64>>,
    pub replications: u64,
    pub master_seed: u64,
}

/// Where results go.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputDoc {
    pub dir: String,
}

/// One experiment: an instance, one or more policies and a run block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentDoc {
    pub instance: InstanceDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<PolicyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policies: Option<Vec<PolicyDoc>>,
    pub run: RunDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputDoc>,
}

impl ExperimentDoc {
    /// Checks the run block; returns the checkpoints to use.
    pub fn checkpoints(&self) -> Result<Vec<u64>, DocError> {
        let run = &self.run;
        if run.horizon < 2 {
            return Err(field("run.horizon", "must be at least 2"));
        }
        if run.replications == 0 {
            return Err(field("run.replications", "must be at least 1"));
        }
        match &run.checkpoints {
            None => Ok(mpbandit_core::sim::log_spaced_checkpoints(run.horizon)),
            Some(cps) => {
                let ordered = cps.windows(2).all(|w| w[0] < w[1]);
                if cps.is_empty() || !ordered || cps.iter().any(|&t| t < 2 || t > run.horizon) {
                    Err(field(
                        "run.checkpoints",
                        "must be a non-empty increasing list within [2, horizon]",
                    ))
                } else {
                    Ok(cps.clone())
                }
            }
        }
    }

    /// Policies in document order: `policy` first, then `policies`.
    pub fn policy_docs(&self) -> Vec<PolicyDoc> {
        self.policy.iter().chain(self.policies.iter().flatten()).cloned().collect()
    }
}

/// Reads a JSON document from disk.
pub fn read_json<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T, DocError> {
    let text = std::fs::read_to_string(path).map_err(|source| DocError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

//! Bound reports, regret curves and run summaries.

use serde::Serialize;
use serde_json::{json, Value};

use mpbandit_core::bounds::BoundError;
use mpbandit_core::sim::{mean_stderr, slope_estimate, Aggregate};
use mpbandit_core::{
    lower_bounds, optimal_structure, InstanceKind, ListIndexer, LowerBoundResult, ProblemInstance,
};

use crate::replicate::Replicated;

/// Regret-curve CSV header.
pub const CSV_HEADER: &str =
    "checkpoint,regret_mean,regret_stderr,regret_over_logt_mean,regret_over_logt_stderr";

/// Slope acceptance window relative to a reference constant.
pub const SLOPE_WINDOW: (f64, f64) = (0.5, 3.0);

/// Six significant digits, dot decimal separator, trailing zeros trimmed.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x == 0.0 { "0".into() } else { format!("{x}") };
    }
    let exp = x.abs().log10().floor() as i32;
    let text = if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    };
    trim_zeros(&text)
}

fn trim_zeros(text: &str) -> String {
    let (mantissa, exp) = match text.find('e') {
        Some(i) => (&text[..i], &text[i..]),
        None => (text, ""),
    };
    let mantissa = if mantissa.contains('.') {
        mantissa.trim_end_matches('0').trim_end_matches('.')
    } else {
        mantissa
    };
    format!("{mantissa}{exp}")
}

/// A JSON number rounded to six significant digits.
pub fn num(x: f64) -> Value {
    sig6(x).parse::<f64>().ok().and_then(serde_json::Number::from_f64).map_or(Value::Null, Value::Number)
}

fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

/// Renders the regret curve.
pub fn curve_csv(agg: &Aggregate) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in 0..agg.checkpoints.len() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            agg.checkpoints[c],
            sig6(agg.regret_mean[c]),
            sig6(agg.regret_stderr[c]),
            sig6(agg.regret_over_log_mean[c]),
            sig6(agg.regret_over_log_stderr[c]),
        ));
    }
    out
}

/// Bound report of an instance.
pub fn bounds_report(instance: &ProblemInstance) -> Result<(LowerBoundResult, Value), BoundError> {
    let b = lower_bounds(instance)?;
    let s = optimal_structure(instance);
    let one_based = |arms: &[usize]| arms.iter().map(|a| a + 1).collect::<Vec<_>>();
    let opt = |x: Option<f64>| x.map_or(Value::Null, num);
    let value = json!({
        "kind": match instance.kind() {
            InstanceKind::Factorized => "factorized",
            InstanceKind::PerSlot => "per_slot",
        },
        "num_arms": instance.num_arms(),
        "num_slots": instance.num_slots(),
        "lp_bound": num(b.lp_bound),
        "theorem1": num(b.theorem1),
        "theorem2": opt(b.theorem2),
        "theorem3_as_stated": opt(b.theorem3_as_stated),
        "theorem3_theorem1_consistent": opt(b.theorem3_theorem1_consistent),
        "per_slot_play_bounds": b.per_slot_play_bounds.as_ref().map_or(Value::Null, |rows| {
            Value::Array(rows.iter().map(|r| nums(r)).collect())
        }),
        "optimal": {
            "value": num(s.optimal_value),
            "lists": s.optimal_lists.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "relevant_arms": one_based(&s.relevant_arms),
            "irrelevant_arms": one_based(&s.irrelevant_arms),
        },
    });
    Ok((b, value))
}

/// Comparison of a measured slope with one bound constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeReference {
    pub name: &'static str,
    pub value: f64,
    pub ratio: Option<f64>,
    pub within_window: bool,
}

/// Which bound constants a measured slope is consistent with.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeArbitration {
    pub slope: f64,
    pub references: Vec<SlopeReference>,
    /// Reference with the smallest `|ln(slope / value)|`.
    pub closest: Option<&'static str>,
}

impl SlopeArbitration {
    /// Whether the slope falls in the window of any reference.
    pub fn any_within(&self) -> bool {
        self.references.iter().any(|r| r.within_window)
    }

    /// One-line human summary.
    pub fn statement(&self) -> String {
        let parts: Vec<String> = self
            .references
            .iter()
            .map(|r| {
                format!(
                    "{} = {} (ratio {}, {})",
                    r.name,
                    sig6(r.value),
                    r.ratio.map_or("n/a".into(), sig6),
                    if r.within_window { "inside [0.5x, 3x]" } else { "outside [0.5x, 3x]" }
                )
            })
            .collect();
        format!(
            "slope {} vs {}; closest: {}",
            sig6(self.slope),
            parts.join(", "),
            self.closest.unwrap_or("none")
        )
    }
}

/// Compares `slope` with the bound constants relevant to the instance kind.
pub fn arbitrate_slope(slope: f64, bounds: &LowerBoundResult) -> SlopeArbitration {
    let mut candidates = vec![("theorem1", Some(bounds.theorem1))];
    candidates.push(("theorem3_as_stated", bounds.theorem3_as_stated));
    candidates.push(("theorem2", bounds.theorem2));
    let references: Vec<SlopeReference> = candidates
        .into_iter()
        .filter_map(|(name, v)| v.map(|v| (name, v)))
        .filter(|&(name, _)| name != "theorem1" || bounds.theorem2.is_none())
        .map(|(name, value)| {
            let ratio = (value > 0.0).then(|| slope / value);
            SlopeReference {
                name,
                value,
                ratio,
                within_window: ratio.is_some_and(|r| r >= SLOPE_WINDOW.0 && r <= SLOPE_WINDOW.1),
            }
        })
        .collect();
    let closest = references
        .iter()
        .filter_map(|r| r.ratio.filter(|&q| q > 0.0).map(|q| (r.name, q.ln().abs())))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(name, _)| name);
    SlopeArbitration {
        slope,
        references,
        closest,
    }
}

/// Summary document of one replicated policy run.
pub fn run_summary(
    instance: &ProblemInstance,
    policy: &str,
    master_seed: u64,
    rep: &Replicated,
    bounds: &LowerBoundResult,
) -> Value {
    let agg = &rep.aggregate;
    let last = agg.checkpoints.len() - 1;
    let horizon = agg.checkpoints[last];
    let slope = slope_estimate(&agg.checkpoints, &agg.regret_mean);
    let arbitration = arbitrate_slope(slope, bounds);
    let indexer = ListIndexer::for_instance(instance);
    let list_plays: serde_json::Map<String, Value> = (0..indexer.len())
        .map(|rank| {
            let mean = rep.mean_of(|r| r.list_plays[rank] as f64);
            (indexer.unrank(rank).to_string(), num(mean))
        })
        .collect();
    let slot_arm: Vec<Value> = (0..instance.num_slots())
        .map(|k| {
            let row: Vec<f64> = (0..instance.num_arms())
                .map(|j| rep.mean_of(|r| r.slot_arm_plays[k][j] as f64))
                .collect();
            nums(&row)
        })
        .collect();
    let final_regret: Vec<f64> = rep.runs.iter().map(|r| r.regret[last]).collect();
    let (reg_mean, reg_se) = mean_stderr(&final_regret);
    json!({
        "policy": policy,
        "horizon": horizon,
        "replications": rep.runs.len(),
        "master_seed": master_seed,
        "final_regret_mean": num(reg_mean),
        "final_regret_stderr": num(reg_se),
        "final_regret_over_logt_mean": num(agg.regret_over_log_mean[last]),
        "slope_estimate": num(slope),
        "slope_arbitration": {
            "statement": arbitration.statement(),
            "closest": arbitration.closest,
            "references": arbitration.references.iter().map(|r| json!({
                "name": r.name,
                "value": num(r.value),
                "ratio": r.ratio.map_or(Value::Null, num),
                "within_window": r.within_window,
            })).collect::<Vec<_>>(),
        },
        "counters": {
            "list_plays_mean": list_plays,
            "slot_arm_plays_mean": slot_arm,
            "observations_mean": num(rep.mean_of(|r| r.observations as f64)),
            "init_steps_mean": num(rep.mean_of(|r| r.init_steps as f64)),
            "exploration_steps_mean": num(rep.mean_of(|r| r.exploration_steps as f64)),
        },
        "bookkeeping_consistent": rep.bookkeeping_consistent(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(1.911139125703199), "1.91114");
        assert_eq!(sig6(3.822278251406398), "3.82228");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(1500.0), "1500");
        assert_eq!(sig6(123456789.0), "1.23457e8");
        assert_eq!(sig6(-0.000123456789), "-0.000123457");
        assert_eq!(sig6(2.5e-9), "2.5e-9");
    }

    #[test]
    fn arbitration_picks_closer_reference() {
        let b = LowerBoundResult {
            lp_bound: 1.9,
            lp_solution: None,
            theorem1: 2.0,
            theorem2: None,
            theorem3_as_stated: Some(4.0),
            theorem3_theorem1_consistent: Some(2.0),
            per_slot_play_bounds: None,
        };
        let a = arbitrate_slope(2.5, &b);
        assert_eq!(a.closest, Some("theorem1"));
        assert!(a.references.iter().all(|r| r.within_window));
        let a = arbitrate_slope(3.5, &b);
        assert_eq!(a.closest, Some("theorem3_as_stated"));
        assert!(!arbitrate_slope(13.0, &b).any_within());
    }
}

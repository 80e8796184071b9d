//! Scale efficiency, returns-to-scale classes and excess-input summaries.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::envelopment::EfficiencyRecord;
use crate::error::ScaleError;

/// Tolerance on `theta_crs <= theta_vrs` and on scores slightly above 1.
pub const SCORE_TOLERANCE: f64 = 1e-7;
/// RTS tolerance for freshly computed sum(lambda).
pub const RTS_TOLERANCE: f64 = 1e-6;
/// RTS tolerance for sum(lambda) values printed to two decimals.
pub const RTS_TOLERANCE_ROUNDED: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RtsStatus {
    Increasing,
    Constant,
    Decreasing,
}

impl RtsStatus {
    pub fn scale_class(self) -> ScaleClass {
        match self {
            RtsStatus::Increasing => ScaleClass::SuperOptimal,
            RtsStatus::Constant => ScaleClass::Optimal,
            RtsStatus::Decreasing => ScaleClass::SubOptimal,
        }
    }

    pub fn abbreviation(self) -> &'static str {
        match self {
            RtsStatus::Increasing => "incr.",
            RtsStatus::Constant => "const.",
            RtsStatus::Decreasing => "decr.",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleClass {
    SuperOptimal,
    Optimal,
    SubOptimal,
}

impl ScaleClass {
    pub const ALL: [ScaleClass; 3] = [ScaleClass::SuperOptimal, ScaleClass::Optimal, ScaleClass::SubOptimal];

    pub fn label(self) -> &'static str {
        match self {
            ScaleClass::SuperOptimal => "Super-optimal",
            ScaleClass::Optimal => "Optimal",
            ScaleClass::SubOptimal => "Sub-optimal",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleRecord {
    pub dmu_id: String,
    pub se: f64,
    pub rts: RtsStatus,
    pub scale_class: ScaleClass,
}

/// `theta_crs / theta_vrs`, clamped to 1 when it overshoots by at most
/// [`SCORE_TOLERANCE`].
pub fn scale_efficiency(theta_crs: f64, theta_vrs: f64) -> Result<f64, ScaleError> {
    let in_range = |t: f64| t > 0.0 && t <= 1.0 + SCORE_TOLERANCE;
    if !in_range(theta_crs) || !in_range(theta_vrs) {
        return Err(ScaleError::OutOfRange { crs: theta_crs, vrs: theta_vrs });
    }
    if theta_crs > theta_vrs + SCORE_TOLERANCE {
        return Err(ScaleError::CrsAboveVrs { crs: theta_crs, vrs: theta_vrs });
    }
    Ok((theta_crs / theta_vrs).min(1.0))
}

/// Returns-to-scale status from the CCR optimal sum(lambda):
/// above `1 + tol` decreasing, below `1 - tol` increasing, constant otherwise.
pub fn classify_rts(sum_lambda: f64, tol: f64) -> Result<RtsStatus, ScaleError> {
    if sum_lambda < 0.0 || sum_lambda.is_nan() {
        return Err(ScaleError::NegativeSumLambda(sum_lambda));
    }
    Ok(if (sum_lambda - 1.0).abs() <= tol {
        RtsStatus::Constant
    } else if sum_lambda > 1.0 {
        RtsStatus::Decreasing
    } else {
        RtsStatus::Increasing
    })
}

/// Scale record for one evaluated DMU. `None` when the VRS score is missing or
/// the DMU is degenerate (zero CRS score).
pub fn scale_record(record: &EfficiencyRecord, rts_tol: f64) -> Result<Option<ScaleRecord>, ScaleError> {
    let Some(theta_vrs) = record.theta_vrs else { return Ok(None) };
    if record.degenerate || record.theta_crs <= 0.0 {
        return Ok(None);
    }
    let se = scale_efficiency(record.theta_crs, theta_vrs)?;
    let rts = classify_rts(record.sum_lambda_crs, rts_tol)?;
    Ok(Some(ScaleRecord { dmu_id: record.dmu_id.clone(), se, rts, scale_class: rts.scale_class() }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlackSummary {
    pub group: String,
    pub mean_slack: f64,
    pub mean_input_use: f64,
    pub excess_input_pct: f64,
    pub member_count: usize,
}

/// `100 * mean_slack / mean_input_use`.
pub fn excess_input_pct(mean_slack: f64, mean_input_use: f64) -> Result<f64, ScaleError> {
    if mean_input_use <= 0.0 || mean_input_use.is_nan() {
        return Err(ScaleError::NonPositiveInputUse(mean_input_use));
    }
    Ok(100.0 * mean_slack / mean_input_use)
}

/// Mean reducible input and mean input use over the members of `group` whose
/// input excess exceeds `slack_tol`, for a single-input dataset.
///
/// `records` must be aligned with the dataset rows; rows outside `group` are
/// ignored.
pub fn excess_input_summary(
    records: &[EfficiencyRecord],
    dataset: &Dataset,
    group: &str,
    slack_tol: f64,
) -> Result<SlackSummary, ScaleError> {
    if dataset.n_inputs() != 1 {
        return Err(ScaleError::UnsupportedInputs(dataset.n_inputs()));
    }
    let (mut slack_sum, mut input_sum, mut count) = (0.0, 0.0, 0usize);
    for (record, dmu) in records.iter().zip(dataset.dmus()) {
        if dmu.group != group {
            continue;
        }
        let excess = record.input_excess[0];
        if excess > slack_tol {
            slack_sum += excess;
            input_sum += dmu.inputs[0];
            count += 1;
        }
    }
    if count == 0 {
        return Ok(SlackSummary {
            group: group.to_string(),
            mean_slack: 0.0,
            mean_input_use: 0.0,
            excess_input_pct: 0.0,
            member_count: 0,
        });
    }
    let mean_slack = slack_sum / count as f64;
    let mean_input_use = input_sum / count as f64;
    Ok(SlackSummary {
        group: group.to_string(),
        mean_slack,
        mean_input_use,
        excess_input_pct: excess_input_pct(mean_slack, mean_input_use)?,
        member_count: count,
    })
}

/// DMUs that could give up resources (decreasing RTS) and those that could
/// absorb them (increasing RTS). Advisory only; no amounts are computed.
pub fn reallocation_candidates(records: &[ScaleRecord]) -> (Vec<String>, Vec<String>) {
    let pick = |class: ScaleClass| {
        records
            .iter()
            .filter(|r| r.scale_class == class)
            .map(|r| r.dmu_id.clone())
            .collect::<Vec<_>>()
    };
    (pick(ScaleClass::SubOptimal), pick(ScaleClass::SuperOptimal))
}

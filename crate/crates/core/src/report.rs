//! Result tables: score frequency distributions, RTS/input characteristics and
//! optimal-class benchmark profiles.

use serde::{Deserialize, Serialize};

use crate::dataset::{mean_and_sample_std, Dataset, VariableRole};
use crate::envelopment::EfficiencyRecord;
use crate::error::ReportError;
use crate::scale::{RtsStatus, ScaleClass, ScaleRecord};

/// Lower edges of the score buckets; the last bucket holds efficient DMUs.
pub const BUCKET_EDGES: [f64; 7] = [0.0, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];
pub const BUCKET_LABELS: [&str; 7] = ["< 0.5", "0.5-0.6", "0.6-0.7", "0.7-0.8", "0.8-0.9", "0.9-1.0", "1.0"];
/// Scores within this distance of 1 land in the efficient bucket.
pub const EFFICIENT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub group: String,
    pub bin_edges: Vec<f64>,
    /// Seven counts: `(0,0.5]`, `(0.5,0.6]`, ..., `(0.8,0.9]`, `(0.9,1)`, efficient.
    pub counts: Vec<usize>,
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
}

impl FrequencyTable {
    pub fn efficient_count(&self) -> usize {
        self.counts[6]
    }
}

/// Bucket index of a score in `(0, 1 + EFFICIENT_TOLERANCE]`.
pub fn bucket_of(score: f64) -> Result<usize, ReportError> {
    if !(score > 0.0 && score <= 1.0 + EFFICIENT_TOLERANCE) {
        return Err(ReportError::ScoreOutOfRange(score));
    }
    if score >= 1.0 - EFFICIENT_TOLERANCE {
        return Ok(6);
    }
    Ok(BUCKET_EDGES[1..6].iter().position(|&upper| score <= upper).unwrap_or(5))
}

/// Frequency distribution of `scores`; intervals are lower-exclusive and
/// upper-inclusive, with a separate bucket for efficient scores.
pub fn frequency_table(scores: &[f64], group: &str) -> Result<FrequencyTable, ReportError> {
    if scores.is_empty() {
        return Err(ReportError::NoScores(group.to_string()));
    }
    let mut counts = vec![0usize; 7];
    for &s in scores {
        counts[bucket_of(s)?] += 1;
    }
    let (mean, std) = mean_and_sample_std(scores);
    Ok(FrequencyTable {
        group: group.to_string(),
        bin_edges: BUCKET_EDGES.to_vec(),
        counts,
        count: scores.len(),
        mean,
        std,
        min: scores.iter().copied().fold(f64::INFINITY, f64::min),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileStat {
    pub name: String,
    pub role: VariableRole,
    pub mean: f64,
    pub max: f64,
    pub min: f64,
}

/// Mean/max/min of every variable over a group's optimal class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkProfile {
    pub group: String,
    pub member_count: usize,
    pub members: Vec<String>,
    /// Empty when the optimal class is empty.
    pub variables: Vec<ProfileStat>,
}

/// Profile of the DMUs of `group` that are CCR-efficient and show constant
/// returns to scale. `records` and `scale` are aligned with dataset rows.
pub fn benchmark_profile(
    records: &[EfficiencyRecord],
    scale: &[Option<ScaleRecord>],
    dataset: &Dataset,
    group: &str,
    efficiency_tol: f64,
) -> BenchmarkProfile {
    let members: Vec<usize> = (0..dataset.len())
        .filter(|&k| {
            dataset.dmus()[k].group == group
                && records[k].is_efficient(efficiency_tol)
                && scale[k].as_ref().is_some_and(|s| s.rts == RtsStatus::Constant)
        })
        .collect();
    let mut variables = Vec::new();
    if !members.is_empty() {
        let dmus = dataset.dmus();
        let columns = dataset
            .input_names()
            .iter()
            .enumerate()
            .map(|(i, n)| (n, VariableRole::Input, members.iter().map(|&k| dmus[k].inputs[i]).collect::<Vec<_>>()))
            .chain(dataset.output_names().iter().enumerate().map(|(j, n)| {
                (n, VariableRole::Output, members.iter().map(|&k| dmus[k].outputs[j]).collect())
            }));
        for (name, role, values) in columns {
            variables.push(ProfileStat {
                name: name.clone(),
                role,
                mean: values.iter().sum::<f64>() / values.len() as f64,
                max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                min: values.iter().copied().fold(f64::INFINITY, f64::min),
            });
        }
    }
    BenchmarkProfile {
        group: group.to_string(),
        member_count: members.len(),
        members: members.iter().map(|&k| dataset.dmus()[k].id.clone()).collect(),
        variables,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassCell {
    pub class: ScaleClass,
    pub count: usize,
    /// Class mean of the input; only for single-input datasets.
    pub mean_input: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RtsSalaryRow {
    pub group: String,
    pub member_count: usize,
    pub mean_se: f64,
    pub classes: Vec<ClassCell>,
}

/// Scale-class counts and class-mean input per group, plus a pooled row when
/// there is more than one group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RtsSalaryTable {
    pub rows: Vec<RtsSalaryRow>,
}

/// Builds the table from scale records aligned with dataset rows. Rows with
/// no scale record (degenerate DMUs) are left out.
pub fn rts_salary_table(scale: &[Option<ScaleRecord>], dataset: &Dataset) -> RtsSalaryTable {
    let single_input = dataset.n_inputs() == 1;
    let row_for = |group: &str, members: &[usize]| -> RtsSalaryRow {
        let scored: Vec<(usize, &ScaleRecord)> =
            members.iter().filter_map(|&k| scale[k].as_ref().map(|s| (k, s))).collect();
        let mean_se = if scored.is_empty() {
            0.0
        } else {
            scored.iter().map(|(_, s)| s.se).sum::<f64>() / scored.len() as f64
        };
        let classes = ScaleClass::ALL
            .iter()
            .map(|&class| {
                let inputs: Vec<f64> = scored
                    .iter()
                    .filter(|(_, s)| s.scale_class == class)
                    .map(|(k, _)| dataset.dmus()[*k].inputs[0])
                    .collect();
                let mean_input = (single_input && !inputs.is_empty())
                    .then(|| inputs.iter().sum::<f64>() / inputs.len() as f64);
                ClassCell { class, count: inputs.len(), mean_input }
            })
            .collect();
        RtsSalaryRow { group: group.to_string(), member_count: scored.len(), mean_se, classes }
    };
    let groups = dataset.groups();
    let mut rows: Vec<RtsSalaryRow> =
        groups.iter().map(|g| row_for(g, &dataset.group_indices(g))).collect();
    if groups.len() > 1 {
        let all: Vec<usize> = (0..dataset.len()).collect();
        rows.push(row_for(crate::dataset::POOLED_GROUP, &all));
    }
    RtsSalaryTable { rows }
}

/// Rounds half away from zero to `decimals` places, for display only.
pub fn round_half_up(value: f64, decimals: i32) -> f64 {
    let factor = 10f64.powi(decimals);
    let scaled = value * factor;
    // Nudge values like 0.145 whose binary form sits just under the midpoint.
    let nudged = scaled + scaled.signum() * 1e-9 * scaled.abs().max(1.0);
    nudged.round() / factor
}

/// Two-decimal display string.
pub fn fmt2(value: f64) -> String {
    format!("{:.2}", round_half_up(value, 2))
}

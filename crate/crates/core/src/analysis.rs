//! The full pipeline: evaluate every DMU under one or both scenarios and
//! assemble the result tables into an [`AnalysisReport`].

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dataset::{Dataset, McConfig, RNG_ALGORITHM};
use crate::envelopment::{evaluate_all, sample_size_failures, EfficiencyRecord, EvaluationOptions, GroupScenario};
use crate::error::ReportError;
use crate::lp::SolverTolerances;
use crate::report::{
    benchmark_profile, frequency_table, rts_salary_table, BenchmarkProfile, FrequencyTable, RtsSalaryTable,
};
use crate::scale::{
    excess_input_summary, reallocation_candidates, scale_record, ScaleRecord, SlackSummary, RTS_TOLERANCE,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelChoice {
    Ccr,
    Bcc,
    Both,
}

/// Which score the frequency tables bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreBasis {
    ThetaCrs,
    ThetaVrs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub scenarios: Vec<GroupScenario>,
    pub model: ModelChoice,
    pub options: EvaluationOptions,
    pub rts_tolerance: f64,
    pub input_digest: String,
    /// Set when the dataset was expanded with virtual DMUs before analysis.
    pub monte_carlo: Option<McConfig>,
    pub timestamp: Option<String>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            scenarios: vec![GroupScenario::PerGroup],
            model: ModelChoice::Both,
            options: EvaluationOptions::default(),
            rts_tolerance: RTS_TOLERANCE,
            input_digest: String::new(),
            monte_carlo: None,
            timestamp: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportTolerances {
    pub solver: SolverTolerances,
    pub peer: f64,
    pub efficiency: f64,
    pub slack: f64,
    pub rts: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloMeta {
    pub seed: u64,
    pub virtual_count_per_group: usize,
    pub id_prefix: String,
    pub rng_algorithm: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub tool_version: String,
    pub model: ModelChoice,
    pub tolerances: ReportTolerances,
    pub monte_carlo: Option<MonteCarloMeta>,
    /// SHA-256 of the input bytes, hex encoded.
    pub input_digest: String,
    pub timestamp: Option<String>,
    /// The sample-size gate was bypassed.
    pub forced: bool,
    pub gate_warnings: Vec<String>,
    pub input_names: Vec<String>,
    pub output_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmuResult {
    pub efficiency: EfficiencyRecord,
    pub scale: Option<ScaleRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reallocation {
    pub from: Vec<String>,
    pub to: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSection {
    pub scenario: GroupScenario,
    pub score_basis: ScoreBasis,
    pub dmus: Vec<DmuResult>,
    pub frequency: Vec<FrequencyTable>,
    pub rts_salary: Option<RtsSalaryTable>,
    /// Only for single-input datasets.
    pub slack_summaries: Vec<SlackSummary>,
    pub benchmarks: Vec<BenchmarkProfile>,
    pub reallocation: Reallocation,
}

/// Per-DMU change in CCR score from the per-group to the merged frontier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioDelta {
    pub dmu_id: String,
    pub group: String,
    pub per_group_theta_crs: f64,
    pub merged_theta_crs: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub metadata: ReportMetadata,
    pub sections: Vec<ScenarioSection>,
    /// Present when both scenarios were run.
    pub comparison: Option<Vec<ScenarioDelta>>,
}

impl AnalysisReport {
    pub fn section(&self, scenario: GroupScenario) -> Option<&ScenarioSection> {
        self.sections.iter().find(|s| s.scenario == scenario)
    }
}

/// Hex SHA-256 of `bytes`.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn analyze(dataset: &Dataset, config: &AnalysisConfig) -> Result<AnalysisReport, ReportError> {
    let mut options = config.options;
    options.compute_vrs = config.model != ModelChoice::Ccr;
    let basis = match config.model {
        ModelChoice::Bcc => ScoreBasis::ThetaVrs,
        _ => ScoreBasis::ThetaCrs,
    };

    let mut gate_warnings = Vec::new();
    if options.force {
        for &scenario in &config.scenarios {
            for f in sample_size_failures(dataset, scenario) {
                gate_warnings.push(format!(
                    "{}: group `{}` has {} DMUs, below the minimum of {}",
                    scenario_name(scenario),
                    f.group,
                    f.size,
                    f.required
                ));
            }
        }
    }

    let mut sections = Vec::new();
    for &scenario in &config.scenarios {
        let records = evaluate_all(dataset, scenario, &options)?;
        sections.push(build_section(dataset, scenario, basis, records, &options, config.rts_tolerance)?);
    }

    let comparison = match (
        sections.iter().find(|s| s.scenario == GroupScenario::PerGroup),
        sections.iter().find(|s| s.scenario == GroupScenario::Merged),
    ) {
        (Some(pg), Some(mg)) => Some(
            pg.dmus
                .iter()
                .zip(&mg.dmus)
                .map(|(a, b)| ScenarioDelta {
                    dmu_id: a.efficiency.dmu_id.clone(),
                    group: a.efficiency.group.clone(),
                    per_group_theta_crs: a.efficiency.theta_crs,
                    merged_theta_crs: b.efficiency.theta_crs,
                    delta: b.efficiency.theta_crs - a.efficiency.theta_crs,
                })
                .collect(),
        ),
        _ => None,
    };

    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        metadata: ReportMetadata {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            model: config.model,
            tolerances: ReportTolerances {
                solver: options.solver,
                peer: options.peer_tolerance,
                efficiency: options.efficiency_tolerance,
                slack: options.slack_tolerance,
                rts: config.rts_tolerance,
            },
            monte_carlo: config.monte_carlo.as_ref().map(|mc| MonteCarloMeta {
                seed: mc.seed,
                virtual_count_per_group: mc.virtual_count_per_group,
                id_prefix: mc.id_prefix.clone(),
                rng_algorithm: RNG_ALGORITHM.to_string(),
            }),
            input_digest: config.input_digest.clone(),
            timestamp: config.timestamp.clone(),
            forced: options.force,
            gate_warnings,
            input_names: dataset.input_names().to_vec(),
            output_names: dataset.output_names().to_vec(),
        },
        sections,
        comparison,
    })
}

pub fn scenario_name(scenario: GroupScenario) -> &'static str {
    match scenario {
        GroupScenario::PerGroup => "per-group",
        GroupScenario::Merged => "merged",
    }
}

fn build_section(
    dataset: &Dataset,
    scenario: GroupScenario,
    basis: ScoreBasis,
    records: Vec<EfficiencyRecord>,
    options: &EvaluationOptions,
    rts_tolerance: f64,
) -> Result<ScenarioSection, ReportError> {
    let scale: Vec<Option<ScaleRecord>> = records
        .iter()
        .map(|r| scale_record(r, rts_tolerance))
        .collect::<Result<_, _>>()?;
    let has_scale = options.compute_vrs;

    let mut frequency = Vec::new();
    let mut slack_summaries = Vec::new();
    let mut benchmarks = Vec::new();
    for group in dataset.groups() {
        let scores: Vec<f64> = records
            .iter()
            .filter(|r| r.group == group && !r.degenerate)
            .map(|r| match basis {
                ScoreBasis::ThetaCrs => r.theta_crs,
                ScoreBasis::ThetaVrs => r.theta_vrs.unwrap_or(r.theta_crs),
            })
            .collect();
        if !scores.is_empty() {
            frequency.push(frequency_table(&scores, &group)?);
        }
        if dataset.n_inputs() == 1 {
            slack_summaries.push(excess_input_summary(&records, dataset, &group, options.slack_tolerance)?);
        }
        if has_scale {
            benchmarks.push(benchmark_profile(&records, &scale, dataset, &group, options.efficiency_tolerance));
        }
    }

    let scale_flat: Vec<ScaleRecord> = scale.iter().flatten().cloned().collect();
    let (from, to) = reallocation_candidates(&scale_flat);
    Ok(ScenarioSection {
        scenario,
        score_basis: basis,
        rts_salary: has_scale.then(|| rts_salary_table(&scale, dataset)),
        dmus: records
            .into_iter()
            .zip(scale)
            .map(|(efficiency, scale)| DmuResult { efficiency, scale })
            .collect(),
        frequency,
        slack_summaries,
        benchmarks,
        reallocation: Reallocation { from, to },
    })
}

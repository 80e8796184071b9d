//! Input-oriented envelopment models.
//!
//! For a target DMU `(x0, y0)` evaluated against a reference set of `K` DMUs:
//!
//! ```text
//! minimize    theta
//! subject to  sum_k lambda_k x_ik <= theta x_i0     i = 1..N
//!             sum_k lambda_k y_jk >= y_j0           j = 1..M
//!             lambda_k >= 0
//!             sum_k lambda_k = 1                    (VRS only)
//! ```
//!
//! A second stage fixes `theta` at its optimum and maximizes the total slack,
//! giving a canonical projection onto the efficient frontier.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{sample_size_threshold, Dataset};
use crate::error::{DatasetError, DeaError, GateFailure};
use crate::lp::{self, LinearProgram, LpStatus, Sense, SolverTolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RtsAssumption {
    /// Constant returns to scale (CCR).
    Crs,
    /// Variable returns to scale (BCC): CCR plus the convexity row.
    Vrs,
}

/// Which DMUs form the reference set of each evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupScenario {
    /// Each DMU is compared only with members of its own group.
    PerGroup,
    /// All DMUs share one frontier.
    Merged,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationOptions {
    pub solver: SolverTolerances,
    /// Minimum lambda for a DMU to be listed as a peer.
    pub peer_tolerance: f64,
    /// `theta >= 1 - efficiency_tolerance` counts as efficient.
    pub efficiency_tolerance: f64,
    /// Slacks at or below this are reported as zero.
    pub slack_tolerance: f64,
    /// Solve the BCC model as well.
    pub compute_vrs: bool,
    /// Also bound sum(lambda) over the whole CCR optimal face.
    pub robust_rts: bool,
    /// Skip the sample-size gate.
    pub force: bool,
}

impl Default for EvaluationOptions {
    fn default() -> Self {
        Self {
            solver: SolverTolerances::default(),
            peer_tolerance: 1e-6,
            efficiency_tolerance: 1e-6,
            slack_tolerance: 1e-9,
            compute_vrs: true,
            robust_rts: false,
            force: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Peer {
    pub id: String,
    pub weight: f64,
}

/// Outcome of evaluating one DMU. Lambda vectors are indexed by the members of
/// the DMU's reference set in dataset order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyRecord {
    pub dmu_id: String,
    pub group: String,
    pub theta_crs: f64,
    pub theta_vrs: Option<f64>,
    pub lambdas_crs: Vec<f64>,
    pub lambdas_vrs: Option<Vec<f64>>,
    pub sum_lambda_crs: f64,
    /// `[min, max]` of sum(lambda) over the CCR optimal face, when requested.
    pub sum_lambda_range: Option<[f64; 2]>,
    /// CCR second-stage input slacks.
    pub input_slacks: Vec<f64>,
    /// CCR second-stage output slacks.
    pub output_slacks: Vec<f64>,
    /// Total reducible input, `x0 - (theta* x0 - s-)`.
    pub input_excess: Vec<f64>,
    pub peers: Vec<Peer>,
    /// All outputs are zero, so the radial score collapses to zero.
    pub degenerate: bool,
}

impl EfficiencyRecord {
    pub fn is_efficient(&self, tol: f64) -> bool {
        self.theta_crs >= 1.0 - tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialScore {
    pub theta: f64,
    pub lambdas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlackSolution {
    pub input_slacks: Vec<f64>,
    pub output_slacks: Vec<f64>,
    pub lambdas: Vec<f64>,
}

fn check_target(dataset: &Dataset, target: usize) -> Result<(), DeaError> {
    if target >= dataset.len() {
        return Err(DeaError::TargetOutOfRange { index: target, len: dataset.len() });
    }
    for dmu in dataset.dmus() {
        for (v, name) in dmu.inputs.iter().zip(dataset.input_names()) {
            if *v <= 0.0 {
                return Err(DatasetError::NonPositiveInput {
                    dmu: dmu.id.clone(),
                    variable: name.clone(),
                    value: *v,
                }
                .into());
            }
        }
    }
    Ok(())
}

/// The radial envelopment LP for `target`, with variables `[theta, lambda_1..lambda_K]`.
///
/// Rows: `N` input rows (`<=`), `M` output rows (`>=`), plus the convexity row
/// under VRS.
pub fn build_envelopment_lp(
    dataset: &Dataset,
    target: usize,
    rts: RtsAssumption,
) -> Result<LinearProgram, DeaError> {
    check_target(dataset, target)?;
    let dmus = dataset.dmus();
    let k = dmus.len();
    let x0 = &dmus[target].inputs;
    let y0 = &dmus[target].outputs;

    let mut objective = vec![0.0; k + 1];
    objective[0] = 1.0;
    let mut rows = Vec::new();
    let mut senses = Vec::new();
    let mut rhs = Vec::new();
    for (i, &x) in x0.iter().enumerate() {
        let mut row = Vec::with_capacity(k + 1);
        row.push(-x);
        row.extend(dmus.iter().map(|d| d.inputs[i]));
        rows.push(row);
        senses.push(Sense::Le);
        rhs.push(0.0);
    }
    for (j, &y) in y0.iter().enumerate() {
        let mut row = Vec::with_capacity(k + 1);
        row.push(0.0);
        row.extend(dmus.iter().map(|d| d.outputs[j]));
        rows.push(row);
        senses.push(Sense::Ge);
        rhs.push(y);
    }
    if rts == RtsAssumption::Vrs {
        let mut row = vec![1.0; k + 1];
        row[0] = 0.0;
        rows.push(row);
        senses.push(Sense::Eq);
        rhs.push(1.0);
    }
    let names = std::iter::once("theta".to_string())
        .chain(dmus.iter().map(|d| format!("lambda[{}]", d.id)))
        .collect();
    Ok(LinearProgram::new(objective, rows, senses, rhs)?.with_names(names)?)
}

/// Minimal radial input contraction of `target` and the peer weights that attain it.
pub fn radial_efficiency(
    dataset: &Dataset,
    target: usize,
    rts: RtsAssumption,
    tol: &SolverTolerances,
) -> Result<RadialScore, DeaError> {
    let lp = build_envelopment_lp(dataset, target, rts)?;
    let sol = lp::solve(&lp, tol)?;
    match sol.status {
        LpStatus::Optimal => {
            let theta = sol.variable_values[0];
            Ok(RadialScore { theta, lambdas: sol.variable_values[1..].to_vec() })
        }
        // lambda = e_target, theta = 1 is always feasible.
        status => Err(DeaError::Inconsistent(format!(
            "envelopment LP for `{}` ({rts:?}) reported {status:?}",
            dataset.dmus()[target].id
        ))),
    }
}

/// Second stage: with `theta` fixed at `theta_star`, maximize the sum of input
/// and output slacks.
pub fn max_slack_stage(
    dataset: &Dataset,
    target: usize,
    rts: RtsAssumption,
    theta_star: f64,
    tol: &SolverTolerances,
) -> Result<SlackSolution, DeaError> {
    check_target(dataset, target)?;
    let dmus = dataset.dmus();
    let (k, n, m) = (dmus.len(), dataset.n_inputs(), dataset.n_outputs());
    let x0 = &dmus[target].inputs;
    let y0 = &dmus[target].outputs;
    let width = k + n + m;

    let mut objective = vec![0.0; width];
    objective[k..].iter_mut().for_each(|c| *c = -1.0);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        let mut row = vec![0.0; width];
        for (c, d) in row.iter_mut().zip(dmus) {
            *c = d.inputs[i];
        }
        row[k + i] = 1.0;
        rows.push(row);
        rhs.push(theta_star * x0[i]);
    }
    for j in 0..m {
        let mut row = vec![0.0; width];
        for (c, d) in row.iter_mut().zip(dmus) {
            *c = d.outputs[j];
        }
        row[k + n + j] = -1.0;
        rows.push(row);
        rhs.push(y0[j]);
    }
    if rts == RtsAssumption::Vrs {
        let mut row = vec![0.0; width];
        row[..k].iter_mut().for_each(|c| *c = 1.0);
        rows.push(row);
        rhs.push(1.0);
    }
    let senses = vec![Sense::Eq; rows.len()];
    let lp = LinearProgram::new(objective, rows, senses, rhs)?;
    let sol = lp::solve(&lp, tol)?;
    if sol.status != LpStatus::Optimal {
        return Err(DeaError::Inconsistent(format!(
            "slack stage for `{}` at theta {theta_star} reported {:?}; theta was not optimal",
            dmus[target].id, sol.status
        )));
    }
    let v = sol.variable_values;
    Ok(SlackSolution {
        lambdas: v[..k].to_vec(),
        input_slacks: v[k..k + n].to_vec(),
        output_slacks: v[k + n..].to_vec(),
    })
}

/// Smallest and largest sum(lambda) among CCR solutions attaining `theta_star`.
pub fn sum_lambda_range(
    dataset: &Dataset,
    target: usize,
    theta_star: f64,
    tol: &SolverTolerances,
) -> Result<[f64; 2], DeaError> {
    check_target(dataset, target)?;
    let dmus = dataset.dmus();
    let k = dmus.len();
    let x0 = &dmus[target].inputs;
    let y0 = &dmus[target].outputs;
    let mut rows = Vec::new();
    let mut senses = Vec::new();
    let mut rhs = Vec::new();
    for (i, &x) in x0.iter().enumerate() {
        rows.push(dmus.iter().map(|d| d.inputs[i]).collect::<Vec<_>>());
        senses.push(Sense::Le);
        rhs.push(theta_star * x);
    }
    for (j, &y) in y0.iter().enumerate() {
        rows.push(dmus.iter().map(|d| d.outputs[j]).collect::<Vec<_>>());
        senses.push(Sense::Ge);
        rhs.push(y);
    }
    let mut bounds = [0.0; 2];
    for (slot, sign) in [(0, 1.0), (1, -1.0)] {
        let lp = LinearProgram::new(vec![sign; k], rows.clone(), senses.clone(), rhs.clone())?;
        let sol = lp::solve(&lp, tol)?;
        if sol.status != LpStatus::Optimal {
            return Err(DeaError::Inconsistent(format!(
                "sum-lambda bound for `{}` reported {:?}",
                dmus[target].id, sol.status
            )));
        }
        bounds[slot] = sol.variable_values.iter().sum();
    }
    Ok(bounds)
}

fn clean(values: &mut [f64], tol: f64) {
    for v in values {
        if *v <= tol {
            *v = 0.0;
        }
    }
}

/// Full evaluation of `target` against every DMU of `reference`.
pub fn evaluate_dmu(
    reference: &Dataset,
    target: usize,
    opts: &EvaluationOptions,
) -> Result<EfficiencyRecord, DeaError> {
    let tol = &opts.solver;
    let dmu = &reference.dmus()[target];
    let degenerate = dmu.outputs.iter().all(|&y| y == 0.0);

    let crs = radial_efficiency(reference, target, RtsAssumption::Crs, tol)?;
    let theta_crs = crs.theta.clamp(0.0, 1.0);
    let slack = max_slack_stage(reference, target, RtsAssumption::Crs, crs.theta, tol)?;
    let mut input_slacks = slack.input_slacks;
    let mut output_slacks = slack.output_slacks;
    clean(&mut input_slacks, opts.slack_tolerance);
    clean(&mut output_slacks, opts.slack_tolerance);

    let mut lambdas_crs = slack.lambdas;
    clean(&mut lambdas_crs, 0.0);
    let slack_free = input_slacks.iter().chain(&output_slacks).all(|&s| s == 0.0);
    if theta_crs >= 1.0 - opts.efficiency_tolerance && slack_free {
        // An efficient, slack-free DMU is its own reference point.
        lambdas_crs.iter_mut().for_each(|l| *l = 0.0);
        lambdas_crs[target] = 1.0;
    }
    let sum_lambda_crs = lambdas_crs.iter().sum();

    let (theta_vrs, lambdas_vrs) = if opts.compute_vrs {
        let vrs = radial_efficiency(reference, target, RtsAssumption::Vrs, tol)?;
        let mut lambdas = vrs.lambdas;
        clean(&mut lambdas, 0.0);
        (Some(vrs.theta.clamp(0.0, 1.0).max(theta_crs)), Some(lambdas))
    } else {
        (None, None)
    };

    let sum_lambda_range = if opts.robust_rts {
        Some(sum_lambda_range(reference, target, crs.theta, tol)?)
    } else {
        None
    };

    let input_excess = dmu
        .inputs
        .iter()
        .zip(&input_slacks)
        .map(|(x, s)| (1.0 - theta_crs) * x + s)
        .collect();
    let peers = reference
        .dmus()
        .iter()
        .zip(&lambdas_crs)
        .filter(|(_, &w)| w > opts.peer_tolerance)
        .map(|(d, &w)| Peer { id: d.id.clone(), weight: w })
        .collect();

    Ok(EfficiencyRecord {
        dmu_id: dmu.id.clone(),
        group: dmu.group.clone(),
        theta_crs,
        theta_vrs,
        lambdas_crs,
        lambdas_vrs,
        sum_lambda_crs,
        sum_lambda_range,
        input_slacks,
        output_slacks,
        input_excess,
        peers,
        degenerate,
    })
}

/// Groups whose size falls below the minimum sample size for `scenario`.
/// Under `Merged` the whole dataset is one sample.
pub fn sample_size_failures(dataset: &Dataset, scenario: GroupScenario) -> Vec<GateFailure> {
    let required = sample_size_threshold(dataset.n_inputs(), dataset.n_outputs());
    let sizes: Vec<(String, usize)> = match scenario {
        GroupScenario::PerGroup => dataset
            .groups()
            .into_iter()
            .map(|g| {
                let n = dataset.group_indices(&g).len();
                (g, n)
            })
            .collect(),
        GroupScenario::Merged => vec![(crate::dataset::POOLED_GROUP.to_string(), dataset.len())],
    };
    sizes
        .into_iter()
        .filter(|(_, size)| *size < required)
        .map(|(group, size)| GateFailure { group, size, required })
        .collect()
}

/// The reference sets of `scenario` as lists of dataset row indices.
pub fn reference_sets(dataset: &Dataset, scenario: GroupScenario) -> Vec<Vec<usize>> {
    match scenario {
        GroupScenario::PerGroup => dataset.groups().iter().map(|g| dataset.group_indices(g)).collect(),
        GroupScenario::Merged => vec![(0..dataset.len()).collect()],
    }
}

/// Evaluates every DMU under `scenario`; records come back in dataset order.
pub fn evaluate_all(
    dataset: &Dataset,
    scenario: GroupScenario,
    opts: &EvaluationOptions,
) -> Result<Vec<EfficiencyRecord>, DeaError> {
    if !opts.force {
        let failures = sample_size_failures(dataset, scenario);
        if !failures.is_empty() {
            return Err(DeaError::SampleSize(failures));
        }
    }
    let mut slots: Vec<Option<EfficiencyRecord>> = vec![None; dataset.len()];
    for members in reference_sets(dataset, scenario) {
        let reference = dataset.subset(&members)?;
        let records = (0..members.len())
            .into_par_iter()
            .map(|t| evaluate_dmu(&reference, t, opts))
            .collect::<Result<Vec<_>, _>>()?;
        for (row, record) in members.into_iter().zip(records) {
            slots[row] = Some(record);
        }
    }
    Ok(slots.into_iter().map(|r| r.expect("every row belongs to one reference set")).collect())
}

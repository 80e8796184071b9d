//! DMU datasets: CSV ingestion, validation, summary statistics and Monte Carlo
//! expansion with virtual DMUs.
//!
//! CSV layout: a header row with `id`, `group`, one or more `input:<name>`
//! columns and one or more `output:<name>` columns, in any order. Inputs must
//! be strictly positive, outputs non-negative.

use std::collections::HashSet;
use std::io::Read;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::DatasetError;

/// Identifies the generator used by [`expand_monte_carlo`]; recorded in report
/// metadata so virtual rows can be regenerated.
pub const RNG_ALGORITHM: &str = "chacha8 (rand_chacha 0.9) + ziggurat normal (rand_distr 0.5)";

/// Rejection attempts per truncated-normal draw before clamping.
const MAX_REJECTIONS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dmu {
    pub id: String,
    pub group: String,
    pub inputs: Vec<f64>,
    pub outputs: Vec<f64>,
}

/// A validated population of DMUs sharing one input/output layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    input_names: Vec<String>,
    output_names: Vec<String>,
    dmus: Vec<Dmu>,
}

impl Dataset {
    pub fn new(
        input_names: Vec<String>,
        output_names: Vec<String>,
        dmus: Vec<Dmu>,
    ) -> Result<Self, DatasetError> {
        if input_names.is_empty() {
            return Err(DatasetError::NoVariables("input"));
        }
        if output_names.is_empty() {
            return Err(DatasetError::NoVariables("output"));
        }
        if dmus.is_empty() {
            return Err(DatasetError::Empty);
        }
        let mut seen = HashSet::new();
        for (k, dmu) in dmus.iter().enumerate() {
            if dmu.id.is_empty() {
                return Err(DatasetError::MissingId { line: k as u64 + 2 });
            }
            if !seen.insert(dmu.id.as_str()) {
                return Err(DatasetError::DuplicateId { line: k as u64 + 2, id: dmu.id.clone() });
            }
            validate_dmu(dmu, &input_names, &output_names)?;
        }
        Ok(Self { input_names, output_names, dmus })
    }

    /// Parses and validates CSV text from `source`.
    pub fn load<R: Read>(source: R) -> Result<Self, DatasetError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(source);
        let mut records = reader.records();

        let header = match records.next() {
            None => return Err(DatasetError::MissingHeader),
            Some(r) => r.map_err(csv_error)?,
        };
        let layout = Layout::from_header(&header)?;

        let mut dmus = Vec::new();
        let mut seen = HashSet::new();
        for record in records {
            let record = record.map_err(csv_error)?;
            let line = record.position().map_or(0, |p| p.line());
            if record.len() != layout.width {
                return Err(DatasetError::Ragged { line, expected: layout.width, found: record.len() });
            }
            let id = record[layout.id].to_string();
            if id.is_empty() {
                return Err(DatasetError::MissingId { line });
            }
            if !seen.insert(id.clone()) {
                return Err(DatasetError::DuplicateId { line, id });
            }
            let parse = |col: usize, name: &str| -> Result<f64, DatasetError> {
                let raw = &record[col];
                raw.parse::<f64>().map_err(|_| DatasetError::NonNumeric {
                    line,
                    column: name.to_string(),
                    value: raw.to_string(),
                })
            };
            let inputs = layout
                .inputs
                .iter()
                .map(|(c, n)| parse(*c, &format!("input:{n}")))
                .collect::<Result<Vec<_>, _>>()?;
            let outputs = layout
                .outputs
                .iter()
                .map(|(c, n)| parse(*c, &format!("output:{n}")))
                .collect::<Result<Vec<_>, _>>()?;
            let dmu = Dmu { id, group: record[layout.group].to_string(), inputs, outputs };
            validate_dmu(&dmu, &layout.input_names(), &layout.output_names())?;
            dmus.push(dmu);
        }
        if dmus.is_empty() {
            return Err(DatasetError::Empty);
        }
        Ok(Self { input_names: layout.input_names(), output_names: layout.output_names(), dmus })
    }

    pub fn from_csv_str(text: &str) -> Result<Self, DatasetError> {
        Self::load(text.as_bytes())
    }

    /// Renders the dataset in the layout accepted by [`Dataset::load`]. Numbers use
    /// the shortest representation that parses back to the same `f64`.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut header = vec!["id".to_string(), "group".to_string()];
        header.extend(self.input_names.iter().map(|n| format!("input:{n}")));
        header.extend(self.output_names.iter().map(|n| format!("output:{n}")));
        // Writing into a Vec cannot fail.
        writer.write_record(&header).expect("in-memory write");
        for dmu in &self.dmus {
            let mut row = vec![dmu.id.clone(), dmu.group.clone()];
            row.extend(dmu.inputs.iter().chain(&dmu.outputs).map(|v| format!("{v}")));
            writer.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn len(&self) -> usize {
        self.dmus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dmus.is_empty()
    }

    pub fn dmus(&self) -> &[Dmu] {
        &self.dmus
    }

    pub fn input_names(&self) -> &[String] {
        &self.input_names
    }

    pub fn output_names(&self) -> &[String] {
        &self.output_names
    }

    pub fn n_inputs(&self) -> usize {
        self.input_names.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.output_names.len()
    }

    /// Group labels in order of first appearance.
    pub fn groups(&self) -> Vec<String> {
        let mut seen = HashSet::new();
        self.dmus
            .iter()
            .filter(|d| seen.insert(d.group.as_str()))
            .map(|d| d.group.clone())
            .collect()
    }

    /// Row indices of the members of `group`, in dataset order.
    pub fn group_indices(&self, group: &str) -> Vec<usize> {
        self.dmus
            .iter()
            .enumerate()
            .filter(|(_, d)| d.group == group)
            .map(|(k, _)| k)
            .collect()
    }

    /// Dataset restricted to the given rows (kept in the given order).
    pub fn subset(&self, indices: &[usize]) -> Result<Self, DatasetError> {
        let dmus = indices.iter().map(|&k| self.dmus[k].clone()).collect::<Vec<_>>();
        if dmus.is_empty() {
            return Err(DatasetError::Empty);
        }
        Ok(Self { input_names: self.input_names.clone(), output_names: self.output_names.clone(), dmus })
    }

    /// Adds one DMU, validating it against the layout.
    pub fn push(&mut self, dmu: Dmu) -> Result<(), DatasetError> {
        validate_dmu(&dmu, &self.input_names, &self.output_names)?;
        if self.dmus.iter().any(|d| d.id == dmu.id) {
            return Err(DatasetError::DuplicateId { line: self.dmus.len() as u64 + 2, id: dmu.id });
        }
        self.dmus.push(dmu);
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> DatasetError {
    let line = e.position().map_or(0, |p| p.line());
    DatasetError::Csv { line, message: e.to_string() }
}

fn validate_dmu(dmu: &Dmu, inputs: &[String], outputs: &[String]) -> Result<(), DatasetError> {
    if dmu.inputs.len() != inputs.len() {
        return Err(DatasetError::Arity {
            dmu: dmu.id.clone(),
            kind: "inputs",
            expected: inputs.len(),
            found: dmu.inputs.len(),
        });
    }
    if dmu.outputs.len() != outputs.len() {
        return Err(DatasetError::Arity {
            dmu: dmu.id.clone(),
            kind: "outputs",
            expected: outputs.len(),
            found: dmu.outputs.len(),
        });
    }
    for (v, name) in dmu.inputs.iter().zip(inputs).chain(dmu.outputs.iter().zip(outputs)) {
        if !v.is_finite() {
            return Err(DatasetError::NonFinite { dmu: dmu.id.clone(), variable: name.clone(), value: *v });
        }
    }
    for (&v, name) in dmu.inputs.iter().zip(inputs) {
        if v <= 0.0 {
            return Err(DatasetError::NonPositiveInput { dmu: dmu.id.clone(), variable: name.clone(), value: v });
        }
    }
    for (&v, name) in dmu.outputs.iter().zip(outputs) {
        if v < 0.0 {
            return Err(DatasetError::NegativeOutput { dmu: dmu.id.clone(), variable: name.clone(), value: v });
        }
    }
    Ok(())
}

struct Layout {
    width: usize,
    id: usize,
    group: usize,
    inputs: Vec<(usize, String)>,
    outputs: Vec<(usize, String)>,
}

impl Layout {
    fn from_header(header: &csv::StringRecord) -> Result<Self, DatasetError> {
        let (mut id, mut group) = (None, None);
        let (mut inputs, mut outputs) = (Vec::new(), Vec::new());
        let mut seen = HashSet::new();
        for (column, name) in header.iter().enumerate() {
            if !seen.insert(name) {
                return Err(DatasetError::DuplicateColumn { column, name: name.to_string() });
            }
            if name == "id" {
                id = Some(column);
            } else if name == "group" {
                group = Some(column);
            } else if let Some(v) = name.strip_prefix("input:").filter(|v| !v.is_empty()) {
                inputs.push((column, v.to_string()));
            } else if let Some(v) = name.strip_prefix("output:").filter(|v| !v.is_empty()) {
                outputs.push((column, v.to_string()));
            } else {
                return Err(DatasetError::UnknownColumn { column, name: name.to_string() });
            }
        }
        let id = id.ok_or(DatasetError::MissingColumn("id"))?;
        let group = group.ok_or(DatasetError::MissingColumn("group"))?;
        if inputs.is_empty() {
            return Err(DatasetError::NoVariables("input"));
        }
        if outputs.is_empty() {
            return Err(DatasetError::NoVariables("output"));
        }
        Ok(Self { width: header.len(), id, group, inputs, outputs })
    }

    fn input_names(&self) -> Vec<String> {
        self.inputs.iter().map(|(_, n)| n.clone()).collect()
    }

    fn output_names(&self) -> Vec<String> {
        self.outputs.iter().map(|(_, n)| n.clone()).collect()
    }
}

/// Minimum number of DMUs for adequate discrimination with `n_inputs` inputs
/// and `m_outputs` outputs: `max(m*n, 3*(m+n))`.
pub fn sample_size_threshold(n_inputs: usize, m_outputs: usize) -> usize {
    (m_outputs * n_inputs).max(3 * (m_outputs + n_inputs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariableRole {
    Input,
    Output,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableStats {
    pub name: String,
    pub role: VariableRole,
    pub mean: f64,
    /// Sample standard deviation (divisor `count - 1`); zero for a single DMU.
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    pub group: String,
    pub count: usize,
    /// Set when `count == 1`, where the sample deviation is undefined.
    pub degenerate: bool,
    pub variables: Vec<VariableStats>,
}

/// Label used for pooled statistics.
pub const POOLED_GROUP: &str = "all";

/// Per-variable mean, sample std, min and max, either per group (in order of
/// first appearance) or pooled over the whole dataset.
pub fn summarize(dataset: &Dataset, by_group: bool) -> Vec<GroupStats> {
    if by_group {
        dataset
            .groups()
            .into_iter()
            .map(|g| {
                let idx = dataset.group_indices(&g);
                group_stats(dataset, g, &idx)
            })
            .collect()
    } else {
        let idx: Vec<usize> = (0..dataset.len()).collect();
        vec![group_stats(dataset, POOLED_GROUP.to_string(), &idx)]
    }
}

fn group_stats(dataset: &Dataset, group: String, idx: &[usize]) -> GroupStats {
    let dmus = dataset.dmus();
    let mut variables = Vec::new();
    for (i, name) in dataset.input_names().iter().enumerate() {
        let values: Vec<f64> = idx.iter().map(|&k| dmus[k].inputs[i]).collect();
        variables.push(describe(name, VariableRole::Input, &values));
    }
    for (j, name) in dataset.output_names().iter().enumerate() {
        let values: Vec<f64> = idx.iter().map(|&k| dmus[k].outputs[j]).collect();
        variables.push(describe(name, VariableRole::Output, &values));
    }
    GroupStats { group, count: idx.len(), degenerate: idx.len() < 2, variables }
}

fn describe(name: &str, role: VariableRole, values: &[f64]) -> VariableStats {
    let (mean, std) = mean_and_sample_std(values);
    VariableStats {
        name: name.to_string(),
        role,
        mean,
        std,
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Mean and sample standard deviation; the deviation is 0 for fewer than two values.
pub(crate) fn mean_and_sample_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub seed: u64,
    pub virtual_count_per_group: usize,
    pub id_prefix: String,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { seed: 0, virtual_count_per_group: 20, id_prefix: "virtual-".to_string() }
    }
}

/// Appends `virtual_count_per_group` synthetic DMUs to every group.
///
/// Each variable is drawn independently from a normal distribution with the
/// group's mean and sample std, truncated to the group's observed
/// `[min, max]` by rejection (clamped after [`MAX_REJECTIONS`] misses).
/// Groups are processed in order of first appearance from a single seeded
/// stream, so output is a pure function of the dataset and `config`.
/// Virtual ids are `<id_prefix><group>-<n>` with `n` starting at 1.
pub fn expand_monte_carlo(dataset: &Dataset, config: &McConfig) -> Result<Dataset, DatasetError> {
    if config.virtual_count_per_group == 0 {
        return Ok(dataset.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = dataset.clone();
    for stats in summarize(dataset, true) {
        if stats.count < 2 {
            return Err(DatasetError::GroupTooSmall { group: stats.group, size: stats.count, required: 2 });
        }
        for n in 1..=config.virtual_count_per_group {
            let mut values = stats.variables.iter().map(|v| truncated_normal(&mut rng, v));
            let inputs: Vec<f64> = values.by_ref().take(dataset.n_inputs()).collect();
            let outputs: Vec<f64> = values.collect();
            let id = format!("{}{}-{}", config.id_prefix, stats.group, n);
            if out.dmus.iter().any(|d| d.id == id) {
                return Err(DatasetError::IdCollision(id));
            }
            out.push(Dmu { id, group: stats.group.clone(), inputs, outputs })?;
        }
    }
    Ok(out)
}

fn truncated_normal(rng: &mut ChaCha8Rng, stats: &VariableStats) -> f64 {
    if stats.std <= 0.0 || stats.min >= stats.max {
        return stats.mean.clamp(stats.min, stats.max);
    }
    // std > 0 and finite, so construction cannot fail.
    let normal = Normal::new(stats.mean, stats.std).expect("positive finite std");
    let mut last = stats.mean;
    for _ in 0..MAX_REJECTIONS {
        last = normal.sample(rng);
        if (stats.min..=stats.max).contains(&last) {
            return last;
        }
    }
    last.clamp(stats.min, stats.max)
}

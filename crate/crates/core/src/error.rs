use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    Dimension { what: String, expected: usize, found: usize },
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("column {column}: lower bound {lower} exceeds upper bound {upper}")]
    InvalidBounds { column: usize, lower: f64, upper: f64 },
    #[error("numerical failure at iteration {iteration}: {detail}")]
    NumericalFailure { iteration: usize, detail: String },
    #[error("iteration limit of {0} reached")]
    IterationLimit(usize),
}

impl LpError {
    pub(crate) fn dimension(what: &str, expected: usize, found: usize) -> Self {
        LpError::Dimension { what: what.to_string(), expected, found }
    }
}

/// A located problem in dataset input. `line` is 1-based and counts the header.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DatasetError {
    #[error("line {line}: malformed CSV: {message}")]
    Csv { line: u64, message: String },
    #[error("empty input: no header row")]
    MissingHeader,
    #[error("header is missing required column `{0}`")]
    MissingColumn(&'static str),
    #[error("header column {column}: `{name}` is not `id`, `group`, `input:<name>` or `output:<name>`")]
    UnknownColumn { column: usize, name: String },
    #[error("header column {column}: duplicate column `{name}`")]
    DuplicateColumn { column: usize, name: String },
    #[error("header declares no `{0}:` columns")]
    NoVariables(&'static str),
    #[error("line {line}: expected {expected} fields, found {found}")]
    Ragged { line: u64, expected: usize, found: usize },
    #[error("line {line}: missing id")]
    MissingId { line: u64 },
    #[error("line {line}: duplicate id `{id}`")]
    DuplicateId { line: u64, id: String },
    #[error("line {line}, column `{column}`: `{value}` is not a number")]
    NonNumeric { line: u64, column: String, value: String },
    #[error("DMU `{dmu}`: {variable} = {value} is not finite")]
    NonFinite { dmu: String, variable: String, value: f64 },
    #[error("DMU `{dmu}`: input {variable} = {value} must be strictly positive")]
    NonPositiveInput { dmu: String, variable: String, value: f64 },
    #[error("DMU `{dmu}`: output {variable} = {value} must be non-negative")]
    NegativeOutput { dmu: String, variable: String, value: f64 },
    #[error("DMU `{dmu}`: expected {expected} {kind}, found {found}")]
    Arity { dmu: String, kind: &'static str, expected: usize, found: usize },
    #[error("dataset has no DMUs")]
    Empty,
    #[error("group `{group}` has {size} DMUs; at least {required} are needed")]
    GroupTooSmall { group: String, size: usize, required: usize },
    #[error("generated id `{0}` collides with an existing DMU")]
    IdCollision(String),
}

/// One group that fails the minimum sample size rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateFailure {
    pub group: String,
    pub size: usize,
    pub required: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeaError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("target index {index} out of range for {len} DMUs")]
    TargetOutOfRange { index: usize, len: usize },
    #[error("solver: {0}")]
    Solver(#[from] LpError),
    #[error("internal consistency: {0}")]
    Inconsistent(String),
    #[error("sample size gate failed: {}", describe_gate(.0))]
    SampleSize(Vec<GateFailure>),
}

fn describe_gate(failures: &[GateFailure]) -> String {
    failures
        .iter()
        .map(|f| format!("group `{}` has {} DMUs, needs at least {}", f.group, f.size, f.required))
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScaleError {
    #[error("theta_crs {crs} exceeds theta_vrs {vrs}")]
    CrsAboveVrs { crs: f64, vrs: f64 },
    #[error("efficiency scores must lie in (0, 1]: crs {crs}, vrs {vrs}")]
    OutOfRange { crs: f64, vrs: f64 },
    #[error("sum of lambdas {0} is negative")]
    NegativeSumLambda(f64),
    #[error("excess-input summary needs a single-input dataset, found {0} inputs; report per-input slacks instead")]
    UnsupportedInputs(usize),
    #[error("mean input use must be positive, found {0}")]
    NonPositiveInputUse(f64),
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("score {0} is outside (0, 1]")]
    ScoreOutOfRange(f64),
    #[error("group `{0}` has no scores to tabulate")]
    NoScores(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("unsupported report schema version {found} (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },
    #[error(transparent)]
    Dea(#[from] DeaError),
    #[error(transparent)]
    Scale(#[from] ScaleError),
}

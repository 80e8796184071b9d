//! Input-oriented data envelopment analysis.
//!
//! Evaluates decision-making units (DMUs) with the CCR (constant returns to
//! scale) and BCC (variable returns to scale) envelopment models, derives
//! scale efficiency and returns-to-scale classes, and assembles benchmark
//! reports, either within groups or against one merged frontier.
//!
//! ```
//! use frontier::dataset::Dataset;
//! use frontier::envelopment::{radial_efficiency, RtsAssumption};
//! use frontier::lp::SolverTolerances;
//!
//! let ds = Dataset::from_csv_str(
//!     "id,group,input:x,output:y\na,g,2,2\nb,g,4,2\nc,g,3,3\n",
//! )?;
//! let score = radial_efficiency(&ds, 1, RtsAssumption::Crs, &SolverTolerances::default())?;
//! assert!((score.theta - 0.5).abs() < 1e-9);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod analysis;
pub mod cli;
pub mod dataset;
pub mod envelopment;
pub mod error;
pub mod lp;
pub mod render;
pub mod report;
pub mod scale;

pub use analysis::{analyze, AnalysisConfig, AnalysisReport, ModelChoice};
pub use dataset::{Dataset, Dmu, McConfig};
pub use envelopment::{evaluate_all, EfficiencyRecord, EvaluationOptions, GroupScenario, RtsAssumption};
pub use error::{DatasetError, DeaError, LpError, ReportError, ScaleError};
pub use lp::{solve, LinearProgram, LpSolution, LpStatus, Sense, SolverTolerances};
pub use render::{parse_json, render, Format};
pub use scale::{classify_rts, scale_efficiency, RtsStatus, ScaleClass, ScaleRecord};

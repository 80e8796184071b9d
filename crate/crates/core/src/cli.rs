//! Command-line front end: load, optionally expand, evaluate, report.
//!
//! Exit codes: 0 success, 1 validation or analysis failure, 2 usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{analyze, digest, scenario_name, AnalysisConfig, ModelChoice};
use crate::dataset::{expand_monte_carlo, sample_size_threshold, summarize, Dataset, GroupStats, McConfig};
use crate::envelopment::{sample_size_failures, EvaluationOptions, GroupScenario};
use crate::error::{DeaError, ReportError};
use crate::lp::SolverTolerances;
use crate::render::{parse_json, render, Format};
use crate::report::fmt2;
use crate::scale::RTS_TOLERANCE;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable supplying the default `--format`.
pub const FORMAT_ENV: &str = "FRONTIER_FORMAT";

#[derive(Debug, Parser)]
#[command(name = "frontier", version, about = "Input-oriented DEA efficiency analysis (CCR/BCC)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every DMU and emit a full analysis report
    Analyze(AnalyzeArgs),
    /// Per-group summary statistics of every variable
    Summarize(SummarizeArgs),
    /// Expand each group with Monte Carlo virtual DMUs and write the new CSV
    Gen(GenArgs),
    /// Check the CSV schema and the minimum sample size
    Validate(ValidateArgs),
    /// Re-render a stored JSON report
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScenarioArg {
    PerGroup,
    Merged,
    Both,
}

impl ScenarioArg {
    fn scenarios(self) -> Vec<GroupScenario> {
        match self {
            ScenarioArg::PerGroup => vec![GroupScenario::PerGroup],
            ScenarioArg::Merged => vec![GroupScenario::Merged],
            ScenarioArg::Both => vec![GroupScenario::PerGroup, GroupScenario::Merged],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Ccr,
    Bcc,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Markdown,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Markdown => Format::Markdown,
        }
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, env = FORMAT_ENV, default_value = "json")]
    format: FormatArg,
    /// Write to this file instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ToleranceArgs {
    /// Solver primal feasibility tolerance
    #[arg(long, default_value_t = 1e-9)]
    feasibility_tol: f64,
    /// Solver reduced-cost tolerance
    #[arg(long, default_value_t = 1e-9)]
    optimality_tol: f64,
    /// Smallest accepted pivot element
    #[arg(long, default_value_t = 1e-10)]
    pivot_tol: f64,
    /// Minimum lambda for a peer to be listed
    #[arg(long, default_value_t = 1e-6)]
    peer_tol: f64,
    /// theta >= 1 - tol counts as efficient
    #[arg(long, default_value_t = 1e-6)]
    efficiency_tol: f64,
    /// |sum(lambda) - 1| <= tol counts as constant returns to scale
    #[arg(long, default_value_t = RTS_TOLERANCE)]
    rts_tol: f64,
}

impl ToleranceArgs {
    fn check(&self) -> Result<(), String> {
        for (name, v) in [
            ("--feasibility-tol", self.feasibility_tol),
            ("--optimality-tol", self.optimality_tol),
            ("--pivot-tol", self.pivot_tol),
            ("--peer-tol", self.peer_tol),
            ("--efficiency-tol", self.efficiency_tol),
            ("--rts-tol", self.rts_tol),
        ] {
            if !(v.is_finite() && v > 0.0 && v < 1.0) {
                return Err(format!("{name} must be in (0, 1), got {v}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Dataset CSV
    input: PathBuf,
    #[arg(long, value_enum, default_value = "per-group")]
    scenario: ScenarioArg,
    #[arg(long, value_enum, default_value = "both")]
    model: ModelArg,
    /// Expand every group with this many virtual DMUs before analysis
    #[arg(long, default_value_t = 0)]
    virtual_count: usize,
    /// Seed for --virtual-count
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "virtual-")]
    id_prefix: String,
    /// Run even when a group is below the minimum sample size
    #[arg(long)]
    force: bool,
    /// Also bound sum(lambda) over the CCR optimal face
    #[arg(long)]
    robust_rts: bool,
    /// Record the wall-clock time in the report (breaks byte-identical reruns)
    #[arg(long)]
    timestamp: bool,
    #[command(flatten)]
    tolerances: ToleranceArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SummarizeArgs {
    input: PathBuf,
    /// One pooled row instead of one per group
    #[arg(long)]
    pooled: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct GenArgs {
    input: PathBuf,
    #[arg(long)]
    seed: u64,
    /// Virtual DMUs per group
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value = "virtual-")]
    id_prefix: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "per-group")]
    scenario: ScenarioArg,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// JSON report produced by `analyze`
    report: PathBuf,
    #[command(flatten)]
    out: OutputArgs,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// Runs the CLI with process stdout/stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI, writing data to `out` and diagnostics to `err`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    if let Command::Analyze(args) = &cli.command {
        if let Err(msg) = args.tolerances.check() {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    }
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(args, out, err),
        Command::Summarize(args) => cmd_summarize(args, out),
        Command::Gen(args) => cmd_gen(args, out),
        Command::Validate(args) => cmd_validate(args, out, err),
        Command::Report(args) => cmd_report(args, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn cmd_analyze(args: AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let bytes = read(&args.input)?;
    let mut dataset = Dataset::load(bytes.as_slice())?;
    let monte_carlo = (args.virtual_count > 0).then(|| McConfig {
        seed: args.seed,
        virtual_count_per_group: args.virtual_count,
        id_prefix: args.id_prefix.clone(),
    });
    if let Some(mc) = &monte_carlo {
        dataset = expand_monte_carlo(&dataset, mc)?;
    }
    let t = &args.tolerances;
    let config = AnalysisConfig {
        scenarios: args.scenario.scenarios(),
        model: match args.model {
            ModelArg::Ccr => ModelChoice::Ccr,
            ModelArg::Bcc => ModelChoice::Bcc,
            ModelArg::Both => ModelChoice::Both,
        },
        options: EvaluationOptions {
            solver: SolverTolerances {
                feasibility: t.feasibility_tol,
                optimality: t.optimality_tol,
                pivot: t.pivot_tol,
                ..SolverTolerances::default()
            },
            peer_tolerance: t.peer_tol,
            efficiency_tolerance: t.efficiency_tol,
            robust_rts: args.robust_rts,
            force: args.force,
            ..EvaluationOptions::default()
        },
        rts_tolerance: t.rts_tol,
        input_digest: digest(&bytes),
        monte_carlo,
        timestamp: args
            .timestamp
            .then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
    };
    let report = match analyze(&dataset, &config) {
        Ok(r) => r,
        Err(ReportError::Dea(DeaError::SampleSize(failures))) => {
            for f in &failures {
                let _ = writeln!(
                    err,
                    "error: group `{}` has {} DMUs; the minimum sample size is {} (use --force to override)",
                    f.group, f.size, f.required
                );
            }
            return Ok(EXIT_FAILURE);
        }
        Err(e) => return Err(e.into()),
    };
    for w in &report.metadata.gate_warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    emit(args.out.output.as_deref(), &render(&report, args.out.format.into()), out)?;
    Ok(EXIT_OK)
}

fn cmd_summarize(args: SummarizeArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let dataset = Dataset::load(read(&args.input)?.as_slice())?;
    let stats = summarize(&dataset, !args.pooled);
    let text = match Format::from(args.out.format) {
        Format::Json => serde_json::to_string_pretty(&stats)? + "\n",
        Format::Csv => summary_csv(&stats),
        Format::Markdown => summary_markdown(&stats),
    };
    emit(args.out.output.as_deref(), &text, out)?;
    Ok(EXIT_OK)
}

fn summary_csv(stats: &[GroupStats]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let _ = w.write_record(["group", "count", "variable", "role", "mean", "std", "min", "max"]);
    for g in stats {
        for v in &g.variables {
            let _ = w.write_record([
                g.group.clone(),
                g.count.to_string(),
                v.name.clone(),
                format!("{:?}", v.role).to_lowercase(),
                fmt2(v.mean),
                fmt2(v.std),
                fmt2(v.min),
                fmt2(v.max),
            ]);
        }
    }
    String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
}

fn summary_markdown(stats: &[GroupStats]) -> String {
    let mut s = String::from("# Summary statistics\n\n");
    let Some(first) = stats.first() else { return s };
    let names: Vec<&str> = first.variables.iter().map(|v| v.name.as_str()).collect();
    s.push_str(&format!("| Group | Statistic | {} |\n", names.join(" | ")));
    s.push_str(&format!("|{}\n", " --- |".repeat(names.len() + 2)));
    for g in stats {
        let label = format!("{} ({})", g.group, g.count);
        for (stat, pick) in [
            ("Mean", (|v: &crate::dataset::VariableStats| v.mean) as fn(&crate::dataset::VariableStats) -> f64),
            ("STD", |v| v.std),
            ("Min", |v| v.min),
            ("Max", |v| v.max),
        ] {
            let cells: Vec<String> = g.variables.iter().map(|v| fmt2(pick(v))).collect();
            s.push_str(&format!("| {label} | {stat} | {} |\n", cells.join(" | ")));
        }
    }
    s
}

fn cmd_gen(args: GenArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let dataset = Dataset::load(read(&args.input)?.as_slice())?;
    let config = McConfig { seed: args.seed, virtual_count_per_group: args.count, id_prefix: args.id_prefix };
    let expanded = expand_monte_carlo(&dataset, &config)?;
    emit(args.output.as_deref(), &expanded.to_csv(), out)?;
    Ok(EXIT_OK)
}

fn cmd_validate(args: ValidateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let dataset = Dataset::load(read(&args.input)?.as_slice())?;
    let required = sample_size_threshold(dataset.n_inputs(), dataset.n_outputs());
    let mut failed = false;
    for scenario in args.scenario.scenarios() {
        for f in sample_size_failures(&dataset, scenario) {
            failed = true;
            let _ = writeln!(
                err,
                "{}: group `{}` has {} DMUs; required gamma = {} (max(mn, 3(m+n)) with n={}, m={})",
                scenario_name(scenario),
                f.group,
                f.size,
                f.required,
                dataset.n_inputs(),
                dataset.n_outputs()
            );
        }
    }
    if failed {
        return Ok(EXIT_FAILURE);
    }
    writeln!(
        out,
        "ok: {} DMUs in {} group(s), {} input(s), {} output(s); minimum group size {}",
        dataset.len(),
        dataset.groups().len(),
        dataset.n_inputs(),
        dataset.n_outputs(),
        required
    )?;
    Ok(EXIT_OK)
}

fn cmd_report(args: ReportArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let bytes = read(&args.report)?;
    let text = String::from_utf8(bytes).map_err(|e| Failure(format!("{}: {e}", args.report.display())))?;
    let report = parse_json(&text)?;
    emit(args.out.output.as_deref(), &render(&report, args.out.format.into()), out)?;
    Ok(EXIT_OK)
}

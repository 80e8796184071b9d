//! Report serialization: JSON (full precision, round-trippable), sectioned CSV
//! and Markdown tables (two-decimal display rounding).

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::{scenario_name, AnalysisReport, ScenarioSection, ScoreBasis, SCHEMA_VERSION};
use crate::error::ReportError;
use crate::report::{fmt2, FrequencyTable, BUCKET_LABELS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(format!("unknown format `{other}` (expected json, csv or markdown)")),
        }
    }
}

pub fn render(report: &AnalysisReport, format: Format) -> String {
    match format {
        Format::Json => render_json(report),
        Format::Csv => render_csv(report),
        Format::Markdown => render_markdown(report),
    }
}

pub fn render_json(report: &AnalysisReport) -> String {
    // Reports hold no NaN or infinite values, so serialization cannot fail.
    let mut out = serde_json::to_string_pretty(report).expect("report serializes");
    out.push('\n');
    out
}

/// Parses a JSON report, rejecting other schema versions.
pub fn parse_json(text: &str) -> Result<AnalysisReport, ReportError> {
    #[derive(Deserialize)]
    struct Probe {
        schema_version: u32,
    }
    let probe: Probe = serde_json::from_str(text)?;
    if probe.schema_version != SCHEMA_VERSION {
        return Err(ReportError::SchemaVersion { found: probe.schema_version, expected: SCHEMA_VERSION });
    }
    Ok(serde_json::from_str(text)?)
}

fn opt2(v: Option<f64>) -> String {
    v.map(fmt2).unwrap_or_default()
}

struct CsvOut {
    text: String,
}

impl CsvOut {
    fn section(&mut self, name: &str, rows: Vec<Vec<String>>) {
        if !self.text.is_empty() {
            self.text.push('\n');
        }
        let _ = writeln!(self.text, "# section: {name}");
        let mut w = csv::WriterBuilder::new()
            .flexible(true)
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        for row in rows {
            w.write_record(&row).expect("in-memory write");
        }
        let bytes = w.into_inner().expect("in-memory flush");
        self.text.push_str(&String::from_utf8(bytes).expect("utf-8 fields"));
    }
}

fn render_csv(report: &AnalysisReport) -> String {
    let meta = &report.metadata;
    let mut out = CsvOut { text: String::new() };

    let mut rows = vec![
        vec!["key".to_string(), "value".to_string()],
        vec!["schema_version".into(), report.schema_version.to_string()],
        vec!["tool_version".into(), meta.tool_version.clone()],
        vec!["model".into(), format!("{:?}", meta.model).to_lowercase()],
        vec!["input_digest".into(), meta.input_digest.clone()],
        vec!["forced".into(), meta.forced.to_string()],
        vec!["rts_tolerance".into(), meta.tolerances.rts.to_string()],
        vec!["peer_tolerance".into(), meta.tolerances.peer.to_string()],
        vec!["efficiency_tolerance".into(), meta.tolerances.efficiency.to_string()],
    ];
    if let Some(mc) = &meta.monte_carlo {
        rows.push(vec!["seed".into(), mc.seed.to_string()]);
        rows.push(vec!["virtual_count_per_group".into(), mc.virtual_count_per_group.to_string()]);
        rows.push(vec!["rng_algorithm".into(), mc.rng_algorithm.clone()]);
    }
    if let Some(ts) = &meta.timestamp {
        rows.push(vec!["timestamp".into(), ts.clone()]);
    }
    for w in &meta.gate_warnings {
        rows.push(vec!["gate_warning".into(), w.clone()]);
    }
    out.section("metadata", rows);

    for section in &report.sections {
        let tag = scenario_name(section.scenario);
        out.section(&format!("dmu_results; scenario={tag}"), dmu_rows(report, section));
        out.section(&format!("frequency; scenario={tag}"), frequency_rows(&section.frequency));
        if let Some(table) = &section.rts_salary {
            let mut rows = vec![vec![
                "group".to_string(),
                "mean_se".into(),
                "super_optimal_count".into(),
                "super_optimal_mean_input".into(),
                "optimal_count".into(),
                "optimal_mean_input".into(),
                "sub_optimal_count".into(),
                "sub_optimal_mean_input".into(),
            ]];
            for row in &table.rows {
                let mut r = vec![row.group.clone(), fmt2(row.mean_se)];
                for cell in &row.classes {
                    r.push(cell.count.to_string());
                    r.push(opt2(cell.mean_input));
                }
                rows.push(r);
            }
            out.section(&format!("returns_to_scale; scenario={tag}"), rows);
        }
        if !section.slack_summaries.is_empty() {
            let mut rows = vec![vec![
                "group".to_string(),
                "mean_slack".into(),
                "mean_input_use".into(),
                "excess_input_pct".into(),
                "member_count".into(),
            ]];
            for s in &section.slack_summaries {
                rows.push(vec![
                    s.group.clone(),
                    fmt2(s.mean_slack),
                    fmt2(s.mean_input_use),
                    fmt2(s.excess_input_pct),
                    s.member_count.to_string(),
                ]);
            }
            out.section(&format!("excess_input; scenario={tag}"), rows);
        }
        if !section.benchmarks.is_empty() {
            let mut rows = vec![vec![
                "group".to_string(),
                "member_count".into(),
                "variable".into(),
                "role".into(),
                "mean".into(),
                "max".into(),
                "min".into(),
            ]];
            for b in &section.benchmarks {
                for v in &b.variables {
                    rows.push(vec![
                        b.group.clone(),
                        b.member_count.to_string(),
                        v.name.clone(),
                        format!("{:?}", v.role).to_lowercase(),
                        fmt2(v.mean),
                        fmt2(v.max),
                        fmt2(v.min),
                    ]);
                }
                if b.variables.is_empty() {
                    rows.push(vec![b.group.clone(), "0".into()]);
                }
            }
            out.section(&format!("benchmark_profile; scenario={tag}"), rows);
        }
        let mut rows = vec![vec!["direction".to_string(), "dmu".into()]];
        rows.extend(section.reallocation.from.iter().map(|d| vec!["from".to_string(), d.clone()]));
        rows.extend(section.reallocation.to.iter().map(|d| vec!["to".to_string(), d.clone()]));
        out.section(&format!("reallocation; scenario={tag}"), rows);
    }

    if let Some(deltas) = &report.comparison {
        let mut rows = vec![vec![
            "dmu".to_string(),
            "group".into(),
            "per_group_theta_crs".into(),
            "merged_theta_crs".into(),
            "delta".into(),
        ]];
        for d in deltas {
            rows.push(vec![
                d.dmu_id.clone(),
                d.group.clone(),
                fmt2(d.per_group_theta_crs),
                fmt2(d.merged_theta_crs),
                fmt2(d.delta),
            ]);
        }
        out.section("comparison", rows);
    }
    out.text
}

fn dmu_rows(report: &AnalysisReport, section: &ScenarioSection) -> Vec<Vec<String>> {
    let meta = &report.metadata;
    let mut header = vec![
        "dmu".to_string(),
        "group".into(),
        "theta_crs".into(),
        "theta_vrs".into(),
        "se".into(),
        "sum_lambda".into(),
        "rts".into(),
        "scale_class".into(),
        "degenerate".into(),
    ];
    header.extend(meta.input_names.iter().map(|n| format!("input_slack:{n}")));
    header.extend(meta.output_names.iter().map(|n| format!("output_slack:{n}")));
    header.extend(meta.input_names.iter().map(|n| format!("input_excess:{n}")));
    header.push("peers".into());
    let mut rows = vec![header];
    for d in &section.dmus {
        let e = &d.efficiency;
        let mut r = vec![
            e.dmu_id.clone(),
            e.group.clone(),
            fmt2(e.theta_crs),
            opt2(e.theta_vrs),
            opt2(d.scale.as_ref().map(|s| s.se)),
            fmt2(e.sum_lambda_crs),
            d.scale.as_ref().map(|s| format!("{:?}", s.rts).to_lowercase()).unwrap_or_default(),
            d.scale.as_ref().map(|s| s.scale_class.label().to_string()).unwrap_or_default(),
            e.degenerate.to_string(),
        ];
        r.extend(e.input_slacks.iter().chain(&e.output_slacks).chain(&e.input_excess).map(|v| fmt2(*v)));
        r.push(e.peers.iter().map(|p| format!("{}:{}", p.id, fmt2(p.weight))).collect::<Vec<_>>().join(";"));
        rows.push(r);
    }
    rows
}

fn frequency_rows(tables: &[FrequencyTable]) -> Vec<Vec<String>> {
    let mut header = vec!["bucket".to_string()];
    header.extend(tables.iter().map(|t| t.group.clone()));
    let mut rows = vec![header];
    for (b, label) in BUCKET_LABELS.iter().enumerate() {
        let mut r = vec![label.to_string()];
        r.extend(tables.iter().map(|t| t.counts[b].to_string()));
        rows.push(r);
    }
    for (label, f) in [
        ("Mean", (|t: &FrequencyTable| t.mean) as fn(&FrequencyTable) -> f64),
        ("STD", |t| t.std),
        ("Min", |t| t.min),
    ] {
        let mut r = vec![label.to_string()];
        r.extend(tables.iter().map(|t| fmt2(f(t))));
        rows.push(r);
    }
    rows
}

fn md_table(out: &mut String, rows: &[Vec<String>]) {
    let Some((header, body)) = rows.split_first() else { return };
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let _ = writeln!(out, "|{}", " --- |".repeat(header.len()));
    for row in body {
        let _ = writeln!(out, "| {} |", row.join(" | "));
    }
    out.push('\n');
}

fn render_markdown(report: &AnalysisReport) -> String {
    let meta = &report.metadata;
    let mut out = String::new();
    out.push_str("# Efficiency analysis\n\n");
    let _ = writeln!(out, "- schema version: {}", report.schema_version);
    let _ = writeln!(out, "- model: {}", format!("{:?}", meta.model).to_lowercase());
    let _ = writeln!(out, "- inputs: {}", meta.input_names.join(", "));
    let _ = writeln!(out, "- outputs: {}", meta.output_names.join(", "));
    let _ = writeln!(out, "- input digest: `{}`", meta.input_digest);
    if let Some(mc) = &meta.monte_carlo {
        let _ = writeln!(
            out,
            "- Monte Carlo: seed {}, {} virtual DMUs per group ({})",
            mc.seed, mc.virtual_count_per_group, mc.rng_algorithm
        );
    }
    if let Some(ts) = &meta.timestamp {
        let _ = writeln!(out, "- generated: {ts}");
    }
    for w in &meta.gate_warnings {
        let _ = writeln!(out, "- warning: {w}");
    }
    out.push('\n');

    for section in &report.sections {
        let _ = writeln!(out, "## Scenario: {}\n", scenario_name(section.scenario));

        out.push_str("### Efficiency scores\n\n");
        let mut rows = vec![["DMU", "Group", "θ*CRS", "θ*VRS", "SE", "Σλ*", "Status"]
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()];
        for d in &section.dmus {
            let e = &d.efficiency;
            rows.push(vec![
                e.dmu_id.clone(),
                e.group.clone(),
                fmt2(e.theta_crs),
                opt2(e.theta_vrs),
                opt2(d.scale.as_ref().map(|s| s.se)),
                fmt2(e.sum_lambda_crs),
                d.scale.as_ref().map(|s| s.rts.abbreviation().to_string()).unwrap_or_default(),
            ]);
        }
        md_table(&mut out, &rows);

        let score = match section.score_basis {
            ScoreBasis::ThetaCrs => "θ*CRS",
            ScoreBasis::ThetaVrs => "θ*VRS",
        };
        let _ = writeln!(out, "### Frequency distribution of {score}\n");
        let mut rows = frequency_rows(&section.frequency);
        rows[0][0] = "Efficiency scores".into();
        md_table(&mut out, &rows);

        if let Some(table) = &section.rts_salary {
            out.push_str("### Returns to scale\n\n");
            let mut rows = vec![vec!["Category".to_string(), "SE".into()]];
            for class in crate::scale::ScaleClass::ALL {
                rows[0].push(format!("{} #", class.label()));
                rows[0].push(format!("{} mean input", class.label()));
            }
            for row in &table.rows {
                let mut r = vec![row.group.clone(), fmt2(row.mean_se)];
                for cell in &row.classes {
                    r.push(cell.count.to_string());
                    r.push(opt2(cell.mean_input));
                }
                rows.push(r);
            }
            md_table(&mut out, &rows);
        }

        if !section.slack_summaries.is_empty() {
            out.push_str("### Input slacks and excess inputs\n\n");
            let mut rows = vec![vec![
                "Category".to_string(),
                "Mean slack".into(),
                "Mean input use".into(),
                "Excess input (%)".into(),
                "DMUs".into(),
            ]];
            for s in &section.slack_summaries {
                rows.push(vec![
                    s.group.clone(),
                    fmt2(s.mean_slack),
                    fmt2(s.mean_input_use),
                    fmt2(s.excess_input_pct),
                    s.member_count.to_string(),
                ]);
            }
            md_table(&mut out, &rows);
        }

        if !section.benchmarks.is_empty() {
            out.push_str("### Optimal-class profiles\n\n");
            let mut header = vec!["Group".to_string(), "Statistic".into()];
            header.extend(meta.output_names.iter().cloned());
            header.extend(meta.input_names.iter().cloned());
            let mut rows = vec![header];
            for b in &section.benchmarks {
                if b.variables.is_empty() {
                    rows.push(vec![b.group.clone(), "(no optimal DMUs)".into()]);
                    continue;
                }
                // Outputs first, then inputs.
                let ordered: Vec<_> = b
                    .variables
                    .iter()
                    .filter(|v| v.role == crate::dataset::VariableRole::Output)
                    .chain(b.variables.iter().filter(|v| v.role == crate::dataset::VariableRole::Input))
                    .collect();
                for (label, pick) in [
                    ("Mean", (|v: &crate::report::ProfileStat| v.mean) as fn(&crate::report::ProfileStat) -> f64),
                    ("Max", |v| v.max),
                    ("Min", |v| v.min),
                ] {
                    let mut r = vec![format!("{} ({})", b.group, b.member_count), label.to_string()];
                    r.extend(ordered.iter().map(|v| fmt2(pick(v))));
                    rows.push(r);
                }
            }
            md_table(&mut out, &rows);
        }

        let r = &section.reallocation;
        if !r.from.is_empty() || !r.to.is_empty() {
            out.push_str("### Reallocation candidates\n\n");
            let _ = writeln!(out, "- from (decreasing RTS): {}", r.from.join(", "));
            let _ = writeln!(out, "- to (increasing RTS): {}\n", r.to.join(", "));
        }
    }

    if let Some(deltas) = &report.comparison {
        out.push_str("## Scenario comparison\n\n");
        let mut rows = vec![vec![
            "DMU".to_string(),
            "Group".into(),
            "Per-group θ*CRS".into(),
            "Merged θ*CRS".into(),
            "Δ".into(),
        ]];
        for d in deltas {
            rows.push(vec![
                d.dmu_id.clone(),
                d.group.clone(),
                fmt2(d.per_group_theta_crs),
                fmt2(d.merged_theta_crs),
                fmt2(d.delta),
            ]);
        }
        md_table(&mut out, &rows);
    }
    out
}

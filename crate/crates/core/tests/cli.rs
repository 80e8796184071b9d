mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::{random_dataset, rng};
use frontier::render::parse_json;
use frontier::envelopment::GroupScenario;

fn frontier(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frontier"))
        .args(args)
        .env_remove("FRONTIER_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// One input, five outputs, `sizes[g]` DMUs in group `g`.
fn write_dataset(dir: &Path, name: &str, sizes: &[usize]) -> PathBuf {
    let mut text = String::from("id,group,input:salary,output:papers,output:proceedings,output:funding,output:teaching,output:citizenship\n");
    let mut r = rng(sizes.iter().sum::<usize>() as u64);
    for (g, &size) in sizes.iter().enumerate() {
        let part = random_dataset(&mut r, 1, 5, size, 1);
        for (k, d) in part.dmus().iter().enumerate() {
            let cells: Vec<String> = d.inputs.iter().chain(&d.outputs).map(|v| format!("{v:.3}")).collect();
            text.push_str(&format!("p{g}-{k},rank{g},{}\n", cells.join(",")));
        }
    }
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_applies_the_sample_size_rule() {
    let dir = tempfile::tempdir().unwrap();
    let small = write_dataset(dir.path(), "small.csv", &[17]);
    let ok = write_dataset(dir.path(), "ok.csv", &[18]);
    let ten = write_dataset(dir.path(), "ten.csv", &[10]);

    let out = frontier(&["validate", s(&small)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("18"), "{}", stderr(&out));

    let out = frontier(&["validate", s(&ten)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("required gamma = 18"), "{}", stderr(&out));

    let out = frontier(&["validate", s(&ok)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn analyze_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_dataset(dir.path(), "data.csv", &[20, 19]);
    let args = ["analyze", s(&data), "--scenario", "both"];
    let a = frontier(&args);
    let b = frontier(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);

    let file_a = dir.path().join("a.json");
    let file_b = dir.path().join("b.json");
    for f in [&file_a, &file_b] {
        let out = frontier(&["analyze", s(&data), "--scenario", "both", "-o", s(f)]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&file_a).unwrap(), std::fs::read(&file_b).unwrap());
    assert_eq!(std::fs::read(&file_a).unwrap(), a.stdout);
}

#[test]
fn both_scenarios_pair_up_and_merging_never_helps() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_dataset(dir.path(), "data.csv", &[20, 18, 21]);
    let out = frontier(&["analyze", s(&data), "--scenario", "both"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = parse_json(&stdout(&out)).unwrap();
    let pg = report.section(GroupScenario::PerGroup).unwrap();
    let mg = report.section(GroupScenario::Merged).unwrap();
    for (p, m) in pg.dmus.iter().zip(&mg.dmus) {
        assert_eq!(p.efficiency.dmu_id, m.efficiency.dmu_id);
        assert!(m.efficiency.theta_crs <= p.efficiency.theta_crs + 1e-9);
        assert!(m.efficiency.theta_vrs.unwrap() <= p.efficiency.theta_vrs.unwrap() + 1e-9);
    }
    let deltas = report.comparison.unwrap();
    assert_eq!(deltas.len(), 59);
    assert!(deltas.iter().all(|d| d.delta <= 1e-9));
}

#[test]
fn gen_is_deterministic_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_dataset(dir.path(), "data.csv", &[6, 5]);
    let (a, b, c) = (dir.path().join("a.csv"), dir.path().join("b.csv"), dir.path().join("c.csv"));
    for (seed, f) in [("7", &a), ("7", &b), ("8", &c)] {
        let out = frontier(&["gen", s(&data), "--seed", seed, "--count", "20", "-o", s(f)]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert_ne!(bytes, std::fs::read(&c).unwrap());
    let expanded = frontier::dataset::Dataset::load(bytes.as_slice()).unwrap();
    assert_eq!(expanded.len(), 11 + 40);
}

#[test]
fn usage_errors_exit_two_before_touching_files() {
    let missing = "/definitely/not/here.csv";
    assert_eq!(frontier(&["analyze", missing, "--rts-tol", "1.5"]).status.code(), Some(2));
    assert_eq!(frontier(&["analyze", missing, "--peer-tol", "0"]).status.code(), Some(2));
    assert_eq!(frontier(&["analyze", missing, "--bogus"]).status.code(), Some(2));
    assert_eq!(frontier(&["analyze", missing, "--scenario", "sideways"]).status.code(), Some(2));
    assert_eq!(frontier(&[]).status.code(), Some(2));

    let out = frontier(&["analyze", missing]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!stderr(&out).contains("panicked"));
}

#[test]
fn bad_input_is_a_located_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "id,group,input:x,output:y\na,g,1,1\nb,g,zero,1\n").unwrap();
    let out = frontier(&["validate", s(&path)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn gate_blocks_analysis_unless_forced() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_dataset(dir.path(), "data.csv", &[10]);
    let out = frontier(&["analyze", s(&data)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());

    let out = frontier(&["analyze", s(&data), "--force"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("warning"), "{}", stderr(&out));
    let report = parse_json(&stdout(&out)).unwrap();
    assert!(report.metadata.forced);
    assert_eq!(report.metadata.gate_warnings.len(), 1);
}

#[test]
fn force_leaves_numbers_alone() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_dataset(dir.path(), "data.csv", &[20]);
    let plain = parse_json(&stdout(&frontier(&["analyze", s(&data)]))).unwrap();
    let forced = parse_json(&stdout(&frontier(&["analyze", s(&data), "--force"]))).unwrap();
    assert_eq!(plain.sections, forced.sections);
}

#[test]
fn report_rerenders_stored_json() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_dataset(dir.path(), "data.csv", &[18]);
    let json = dir.path().join("r.json");
    assert_eq!(frontier(&["analyze", s(&data), "-o", s(&json)]).status.code(), Some(0));

    let again = frontier(&["report", s(&json), "--format", "json"]);
    assert_eq!(again.stdout, std::fs::read(&json).unwrap());

    let md = frontier(&["report", s(&json), "--format", "markdown"]);
    assert_eq!(md.status.code(), Some(0));
    assert!(stdout(&md).contains("### Frequency distribution"));

    let csv = frontier(&["report", s(&json), "--format", "csv"]);
    assert!(stdout(&csv).starts_with("# section:"));

    let garbage = dir.path().join("g.json");
    std::fs::write(&garbage, "{\"schema_version\": 42}").unwrap();
    assert_eq!(frontier(&["report", s(&garbage)]).status.code(), Some(1));
}

#[test]
fn format_defaults_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_dataset(dir.path(), "data.csv", &[18]);
    let out = Command::new(env!("CARGO_BIN_EXE_frontier"))
        .args(["analyze", s(&data)])
        .env("FRONTIER_FORMAT", "markdown")
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("# Efficiency analysis"));
}

#[test]
fn summarize_and_inline_expansion() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_dataset(dir.path(), "data.csv", &[6, 7]);
    let out = frontier(&["summarize", s(&data), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("rank0") && stdout(&out).contains("rank1"));

    let args = ["analyze", s(&data), "--virtual-count", "20", "--seed", "9"];
    let a = frontier(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, frontier(&args).stdout);
    let report = parse_json(&stdout(&a)).unwrap();
    assert_eq!(report.metadata.monte_carlo.as_ref().unwrap().seed, 9);
    assert_eq!(report.sections[0].dmus.len(), 13 + 40);
}

#[test]
fn library_entry_point_matches_binary() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_dataset(dir.path(), "data.csv", &[18]);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = frontier::cli::run_with(["frontier", "analyze", s(&data), "--format", "json"], &mut out, &mut err);
    assert_eq!(code, frontier::cli::EXIT_OK);
    assert_eq!(out, frontier(&["analyze", s(&data)]).stdout);
}

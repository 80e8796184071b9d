#[path = "../../../fuzz/src/lib.rs"]
mod checks;

use std::path::PathBuf;

fn seeds(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| {
            let bytes = std::fs::read(&p).unwrap();
            (p, bytes)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn load_csv_seeds() {
    let seeds = seeds("load_csv");
    let loaded = seeds.iter().filter(|(_, b)| frontier::dataset::Dataset::load(b.as_slice()).is_ok()).count();
    assert!(loaded >= 2 && loaded < seeds.len());
    for (_, bytes) in &seeds {
        checks::load_csv(bytes);
    }
}

#[test]
fn parse_report_seeds() {
    let seeds = seeds("parse_report");
    let parsed =
        seeds.iter().filter(|(_, b)| frontier::render::parse_json(std::str::from_utf8(b).unwrap_or("")).is_ok()).count();
    assert!(parsed >= 1 && parsed < seeds.len());
    for (_, bytes) in &seeds {
        checks::parse_report(bytes);
    }
}

#[test]
fn solve_lp_seeds() {
    let seeds = seeds("solve_lp");
    assert!(seeds.iter().filter(|(_, b)| checks::decode_lp(b).is_some()).count() >= 4);
    for (_, bytes) in &seeds {
        checks::solve_lp(bytes);
    }
}

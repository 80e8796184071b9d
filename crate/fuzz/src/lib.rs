//! Fuzz entry points. Each function panics only when an invariant breaks;
//! malformed input must come back as an error.

use frontier::dataset::Dataset;
use frontier::lp::{solve, LinearProgram, LpStatus, Sense, SolverTolerances};
use frontier::render::{parse_json, render_json};

/// Anything that loads must survive a CSV round trip unchanged.
pub fn load_csv(data: &[u8]) {
    if let Ok(ds) = Dataset::load(data) {
        let text = ds.to_csv();
        let again = Dataset::from_csv_str(&text).expect("rendered dataset reloads");
        assert_eq!(again, ds);
    }
}

/// Anything that parses must re-render to a document that parses back equal.
pub fn parse_report(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(report) = parse_json(text) {
        let rendered = render_json(&report);
        assert_eq!(parse_json(&rendered).expect("rendered report parses"), report);
    }
}

/// Byte layout: `[n, m, sense bits, then (1 + m) * n + m signed bytes]`,
/// coefficients as `i8 / 4`. At most 6 variables and 6 rows.
pub fn decode_lp(data: &[u8]) -> Option<LinearProgram> {
    let (&n, rest) = data.split_first()?;
    let (&m, rest) = rest.split_first()?;
    let (&senses, rest) = rest.split_first()?;
    let n = usize::from(n % 6) + 1;
    let m = usize::from(m % 7);
    let mut values = rest.iter().map(|&b| f64::from(b as i8) / 4.0);
    let mut take = |k: usize| -> Option<Vec<f64>> { (0..k).map(|_| values.next()).collect() };
    let objective = take(n)?;
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for _ in 0..m {
        rows.push(take(n)?);
        rhs.push(take(1)?[0]);
    }
    let senses = (0..m)
        .map(|i| match (senses >> i) & 1 {
            0 => Sense::Le,
            _ if i % 3 == 2 => Sense::Eq,
            _ => Sense::Ge,
        })
        .collect();
    LinearProgram::new(objective, rows, senses, rhs).ok()
}

/// The solver must terminate without panicking; optimal points must be feasible.
pub fn solve_lp(data: &[u8]) {
    let Some(lp) = decode_lp(data) else { return };
    let Ok(sol) = solve(&lp, &SolverTolerances::default()) else { return };
    if sol.status == LpStatus::Optimal {
        assert_eq!(sol.variable_values.len(), lp.num_vars());
        assert!(lp.max_violation(&sol.variable_values) <= 1e-6, "{lp:?} -> {sol:?}");
    }
}

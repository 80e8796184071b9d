#![allow(dead_code)]

pub mod properties;

use frontier::dataset::{Dataset, Dmu};
use frontier::lp::{LinearProgram, Sense};
use frontier::scale::RtsStatus;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Outcome of the brute-force oracle on a bounded LP with `x >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleResult {
    Optimal(f64),
    Infeasible,
}

/// Enumerates every choice of `n` constraint hyperplanes (rows and `x_j = 0`),
/// solves the square system, keeps the feasible points and returns the best
/// objective. Valid for LPs whose feasible region is bounded; `x >= 0` makes
/// the region pointed, so a non-empty region has a vertex.
pub fn vertex_oracle(lp: &LinearProgram) -> OracleResult {
    let n = lp.num_vars();
    let mut planes: Vec<(Vec<f64>, f64)> = lp
        .rows()
        .iter()
        .zip(lp.rhs())
        .map(|(row, &b)| (row.clone(), b))
        .collect();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        planes.push((e, 0.0));
    }
    let mut best: Option<f64> = None;
    for subset in combinations(planes.len(), n) {
        let a: Vec<Vec<f64>> = subset.iter().map(|&i| planes[i].0.clone()).collect();
        let b: Vec<f64> = subset.iter().map(|&i| planes[i].1).collect();
        let Some(x) = gauss_solve(a, b) else { continue };
        if feasible(lp, &x, 1e-7) {
            let obj: f64 = lp.objective().iter().zip(&x).map(|(c, v)| c * v).sum();
            best = Some(best.map_or(obj, |o: f64| o.min(obj)));
        }
    }
    best.map_or(OracleResult::Infeasible, OracleResult::Optimal)
}

fn feasible(lp: &LinearProgram, x: &[f64], tol: f64) -> bool {
    if x.iter().any(|&v| v < -tol) {
        return false;
    }
    lp.rows().iter().zip(lp.senses()).zip(lp.rhs()).all(|((row, sense), &b)| {
        let lhs: f64 = row.iter().zip(x).map(|(a, v)| a * v).sum();
        let scale = 1.0 + b.abs();
        match sense {
            Sense::Le => lhs <= b + tol * scale,
            Sense::Ge => lhs >= b - tol * scale,
            Sense::Eq => (lhs - b).abs() <= tol * scale,
        }
    })
}

pub fn combinations(total: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, total: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..total {
            cur.push(i);
            rec(i + 1, total, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, total, k, &mut Vec::new(), &mut out);
    out
}

/// Gaussian elimination with partial pivoting; `None` when singular.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                let (top, rest) = a.split_at_mut(r);
                for (v, p) in rest[0][col..n].iter_mut().zip(&top[col][col..n]) {
                    *v -= f * p;
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// A random LP with at most 6 variables and 6 constraints. The last row is
/// `sum(x) <= bound`, so the LP is never unbounded. Small integer data makes
/// degenerate vertices common.
pub fn random_bounded_lp(rng: &mut ChaCha8Rng) -> LinearProgram {
    let n = rng.random_range(1..=6);
    let m = rng.random_range(0..=5);
    let integer = rng.random_bool(0.7);
    let coef = |rng: &mut ChaCha8Rng, lo: i32, hi: i32| -> f64 {
        if integer {
            rng.random_range(lo..=hi) as f64
        } else {
            rng.random_range(lo as f64..hi as f64)
        }
    };
    let objective: Vec<f64> = (0..n).map(|_| coef(rng, -5, 5)).collect();
    let mut rows = Vec::new();
    let mut senses = Vec::new();
    let mut rhs = Vec::new();
    for _ in 0..m {
        rows.push((0..n).map(|_| coef(rng, -5, 5)).collect::<Vec<_>>());
        senses.push(match rng.random_range(0..10) {
            0..=4 => Sense::Le,
            5..=8 => Sense::Ge,
            _ => Sense::Eq,
        });
        rhs.push(coef(rng, -4, 10));
    }
    rows.push(vec![1.0; n]);
    senses.push(Sense::Le);
    rhs.push(coef(rng, 1, 12));
    LinearProgram::new(objective, rows, senses, rhs).unwrap()
}

/// CCR score of every DMU in a single-input, single-output dataset:
/// `(y_k / x_k) / max_j (y_j / x_j)`.
pub fn ratio_oracle(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let ratios: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y / x).collect();
    let best = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    ratios.iter().map(|r| r / best).collect()
}

pub fn siso_dataset(xs: &[f64], ys: &[f64]) -> Dataset {
    Dataset::new(
        vec!["x".into()],
        vec!["y".into()],
        xs.iter()
            .zip(ys)
            .enumerate()
            .map(|(k, (&x, &y))| Dmu { id: format!("d{k}"), group: "g".into(), inputs: vec![x], outputs: vec![y] })
            .collect(),
    )
    .unwrap()
}

/// Random dataset with `n` inputs, `m` outputs, `k` DMUs spread over `groups`
/// labels. Inputs in [1, 100), outputs in [0.5, 50).
pub fn random_dataset(rng: &mut ChaCha8Rng, n: usize, m: usize, k: usize, groups: usize) -> Dataset {
    let dmus = (0..k)
        .map(|i| Dmu {
            id: format!("u{i}"),
            group: format!("g{}", i % groups),
            inputs: (0..n).map(|_| rng.random_range(1.0..100.0)).collect(),
            outputs: (0..m).map(|_| rng.random_range(0.5..50.0)).collect(),
        })
        .collect();
    Dataset::new(
        (0..n).map(|i| format!("x{i}")).collect(),
        (0..m).map(|j| format!("y{j}")).collect(),
        dmus,
    )
    .unwrap()
}

pub fn random_dmu(rng: &mut ChaCha8Rng, id: &str, group: &str, n: usize, m: usize) -> Dmu {
    Dmu {
        id: id.into(),
        group: group.into(),
        inputs: (0..n).map(|_| rng.random_range(1.0..100.0)).collect(),
        outputs: (0..m).map(|_| rng.random_range(0.5..50.0)).collect(),
    }
}

/// One row of a published appendix table.
#[derive(Debug, Clone, PartialEq)]
pub struct FixtureRow {
    pub dmu: u32,
    pub theta_crs: f64,
    pub theta_vrs: f64,
    pub se: f64,
    pub sum_lambda: f64,
    pub status: RtsStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Appendix {
    FullSeparate,
    AssociateSeparate,
    AssistantSeparate,
    FullMerged,
    AssociateMerged,
    AssistantMerged,
}

impl Appendix {
    pub const ALL: [Appendix; 6] = [
        Appendix::FullSeparate,
        Appendix::AssociateSeparate,
        Appendix::AssistantSeparate,
        Appendix::FullMerged,
        Appendix::AssociateMerged,
        Appendix::AssistantMerged,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Appendix::FullSeparate => "1A",
            Appendix::AssociateSeparate => "2A",
            Appendix::AssistantSeparate => "3A",
            Appendix::FullMerged => "1B",
            Appendix::AssociateMerged => "2B",
            Appendix::AssistantMerged => "3B",
        }
    }

    fn text(self) -> &'static str {
        match self {
            Appendix::FullSeparate => include_str!("../../fixtures/appendix/table_1a.csv"),
            Appendix::AssociateSeparate => include_str!("../../fixtures/appendix/table_2a.csv"),
            Appendix::AssistantSeparate => include_str!("../../fixtures/appendix/table_3a.csv"),
            Appendix::FullMerged => include_str!("../../fixtures/appendix/table_1b.csv"),
            Appendix::AssociateMerged => include_str!("../../fixtures/appendix/table_2b.csv"),
            Appendix::AssistantMerged => include_str!("../../fixtures/appendix/table_3b.csv"),
        }
    }

    /// Printed column averages: theta_crs, theta_vrs, SE.
    pub fn printed_means(self) -> [f64; 3] {
        match self {
            Appendix::FullSeparate => [0.85, 0.91, 0.93],
            Appendix::AssociateSeparate => [0.93, 0.97, 0.96],
            Appendix::AssistantSeparate => [0.87, 0.92, 0.94],
            Appendix::FullMerged => [0.72, 0.80, 0.91],
            Appendix::AssociateMerged => [0.88, 0.92, 0.96],
            Appendix::AssistantMerged => [0.85, 0.91, 0.94],
        }
    }

    /// Rows whose printed status contradicts the sum-lambda rule
    /// (theta = SE = sum-lambda = 1.00 but status "incr.").
    pub fn anomalous_rows(self) -> &'static [u32] {
        match self {
            Appendix::AssistantSeparate | Appendix::AssistantMerged => &[23],
            _ => &[],
        }
    }

    pub fn rows(self) -> Vec<FixtureRow> {
        let mut reader = csv::Reader::from_reader(self.text().as_bytes());
        reader
            .records()
            .map(|r| {
                let r = r.unwrap();
                let f = |i: usize| r[i].parse::<f64>().unwrap();
                FixtureRow {
                    dmu: r[0].parse().unwrap(),
                    theta_crs: f(1),
                    theta_vrs: f(2),
                    se: f(3),
                    sum_lambda: f(4),
                    status: match &r[5] {
                        "increasing" => RtsStatus::Increasing,
                        "constant" => RtsStatus::Constant,
                        "decreasing" => RtsStatus::Decreasing,
                        other => panic!("bad status {other}"),
                    },
                }
            })
            .collect()
    }
}

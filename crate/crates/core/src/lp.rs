//! Dense two-phase primal simplex for the small linear programs built by the
//! envelopment models.
//!
//! Problems are stated as
//!
//! ```text
//! minimize    c'x
//! subject to  a_i'x (<= | = | >=) b_i
//!             l <= x <= u
//! ```
//!
//! and converted to a standard-form tableau with non-negative right-hand
//! sides. Rows that need it get artificial columns, which phase one drives to
//! zero. Pricing is Dantzig (most negative reduced cost, lowest column on
//! ties); after a run of degenerate pivots the solver falls back to Bland's
//! rule until the objective moves again.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::LpError;

/// Row sense of a linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        })
    }
}

/// A minimization LP with dense constraint rows.
///
/// Immutable once built; every constructor validates dimensions and finiteness.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    rows: Vec<Vec<f64>>,
    senses: Vec<Sense>,
    rhs: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<Option<f64>>,
    names: Option<Vec<String>>,
}

impl LinearProgram {
    /// Builds an LP with default bounds `0 <= x` (no upper bounds).
    pub fn new(
        objective: Vec<f64>,
        rows: Vec<Vec<f64>>,
        senses: Vec<Sense>,
        rhs: Vec<f64>,
    ) -> Result<Self, LpError> {
        let n = objective.len();
        Self::with_bounds(objective, rows, senses, rhs, vec![0.0; n], vec![None; n])
    }

    /// Builds an LP with explicit variable bounds. A lower bound of
    /// `f64::NEG_INFINITY` marks a free variable.
    pub fn with_bounds(
        objective: Vec<f64>,
        rows: Vec<Vec<f64>>,
        senses: Vec<Sense>,
        rhs: Vec<f64>,
        lower: Vec<f64>,
        upper: Vec<Option<f64>>,
    ) -> Result<Self, LpError> {
        let n = objective.len();
        if senses.len() != rows.len() {
            return Err(LpError::dimension("constraint senses", rows.len(), senses.len()));
        }
        if rhs.len() != rows.len() {
            return Err(LpError::dimension("right-hand side", rows.len(), rhs.len()));
        }
        if lower.len() != n {
            return Err(LpError::dimension("lower bounds", n, lower.len()));
        }
        if upper.len() != n {
            return Err(LpError::dimension("upper bounds", n, upper.len()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(LpError::dimension(&format!("constraint row {i}"), n, row.len()));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(LpError::NonFinite(format!("constraint row {i}, column {j}")));
            }
        }
        if let Some(j) = objective.iter().position(|v| !v.is_finite()) {
            return Err(LpError::NonFinite(format!("objective coefficient {j}")));
        }
        if let Some(i) = rhs.iter().position(|v| !v.is_finite()) {
            return Err(LpError::NonFinite(format!("right-hand side {i}")));
        }
        for j in 0..n {
            let lo = lower[j];
            if lo.is_nan() || lo == f64::INFINITY {
                return Err(LpError::NonFinite(format!("lower bound {j}")));
            }
            if let Some(up) = upper[j] {
                if !up.is_finite() {
                    return Err(LpError::NonFinite(format!("upper bound {j}")));
                }
                if up < lo {
                    return Err(LpError::InvalidBounds { column: j, lower: lo, upper: up });
                }
            }
        }
        Ok(Self { objective, rows, senses, rhs, lower, upper, names: None })
    }

    /// Attaches per-variable labels (used only in trace output).
    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, LpError> {
        if names.len() != self.objective.len() {
            return Err(LpError::dimension("variable names", self.objective.len(), names.len()));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn senses(&self) -> &[Sense] {
        &self.senses
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn lower_bounds(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper_bounds(&self) -> &[Option<f64>] {
        &self.upper
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Largest violation of any constraint or bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for ((row, sense), b) in self.rows.iter().zip(&self.senses).zip(&self.rhs) {
            let lhs: f64 = row.iter().zip(x).map(|(a, v)| a * v).sum();
            let v = match sense {
                Sense::Le => lhs - b,
                Sense::Ge => b - lhs,
                Sense::Eq => (lhs - b).abs(),
            };
            worst = worst.max(v);
        }
        for (j, v) in x.iter().enumerate() {
            worst = worst.max(self.lower[j] - v);
            if let Some(u) = self.upper[j] {
                worst = worst.max(v - u);
            }
        }
        worst
    }

    /// `c'x`.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

/// Numerical thresholds for [`solve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverTolerances {
    /// Primal feasibility tolerance on right-hand sides.
    pub feasibility: f64,
    /// A reduced cost must be below `-optimality` to enter the basis.
    pub optimality: f64,
    /// Smallest pivot element accepted by the ratio test.
    pub pivot: f64,
    /// Phase-one objective above this declares the LP infeasible.
    pub infeasibility: f64,
    /// Degenerate pivots tolerated before switching to Bland's rule.
    pub stall_limit: usize,
    pub max_iterations: usize,
}

impl Default for SolverTolerances {
    fn default() -> Self {
        Self {
            feasibility: 1e-9,
            optimality: 1e-9,
            pivot: 1e-10,
            infeasibility: 1e-7,
            stall_limit: 50,
            max_iterations: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// `c'x` at the optimum; `+inf` when infeasible, `-inf` when unbounded.
    pub objective_value: f64,
    /// Empty unless `status == Optimal`.
    pub variable_values: Vec<f64>,
    pub iteration_count: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Solves `lp` with the given tolerances.
pub fn solve(lp: &LinearProgram, tol: &SolverTolerances) -> Result<LpSolution, LpError> {
    Simplex::new(lp, tol, None).run()
}

/// Like [`solve`], writing the tableau to `trace` at each phase boundary and
/// after every pivot.
pub fn solve_traced(
    lp: &LinearProgram,
    tol: &SolverTolerances,
    trace: &mut dyn Write,
) -> Result<LpSolution, LpError> {
    Simplex::new(lp, tol, Some(trace)).run()
}

/// How an original variable maps onto standard-form columns.
#[derive(Debug, Clone, Copy)]
enum ColumnMap {
    /// `x = shift + col`
    Shifted { col: usize, shift: f64 },
    /// `x = pos - neg`
    Split { pos: usize, neg: usize },
}

/// Scales rows, then structural columns, so the largest magnitude in each is
/// near one. Factors are powers of two, so scaling itself is exact. Returns
/// the column factors.
fn equilibrate(rows: &mut [(Vec<f64>, Sense, f64)], n_structural: usize) -> Vec<f64> {
    fn pow2_inverse(max: f64) -> f64 {
        if max > 0.0 {
            2f64.powi(-(max.log2().round() as i32))
        } else {
            1.0
        }
    }
    for (coeffs, _, rhs) in rows.iter_mut() {
        let f = pow2_inverse(coeffs.iter().fold(0.0, |m: f64, a| m.max(a.abs())));
        coeffs.iter_mut().for_each(|a| *a *= f);
        *rhs *= f;
    }
    let mut col_scale = vec![1.0; n_structural];
    for (j, scale) in col_scale.iter_mut().enumerate() {
        *scale = pow2_inverse(rows.iter().fold(0.0, |m: f64, r| m.max(r.0[j].abs())));
        for r in rows.iter_mut() {
            r.0[j] *= *scale;
        }
    }
    col_scale
}

/// Pivots smaller than this fraction of their column trigger a refactor.
const SMALL_PIVOT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pricing {
    Dantzig,
    Bland,
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
}

struct Simplex<'a> {
    lp: &'a LinearProgram,
    tol: SolverTolerances,
    trace: Option<&'a mut dyn Write>,
    map: Vec<ColumnMap>,
    /// m rows of `ncols + 1` entries; the last entry is the right-hand side.
    tableau: Vec<Vec<f64>>,
    /// The initial tableau, kept for refactoring.
    original: Vec<Vec<f64>>,
    /// Reduced costs, last entry holds `-z`.
    costs: Vec<f64>,
    /// Cost vector of the current phase.
    phase_costs: Vec<f64>,
    basis: Vec<usize>,
    /// Artificials of rows dropped as redundant; they stay basic at zero.
    dropped: Vec<usize>,
    ncols: usize,
    n_structural: usize,
    /// Structural column `j` of the tableau holds `x_j / col_scale[j]`.
    col_scale: Vec<f64>,
    first_artificial: usize,
    iterations: usize,
}

impl<'a> Simplex<'a> {
    fn new(lp: &'a LinearProgram, tol: &SolverTolerances, trace: Option<&'a mut dyn Write>) -> Self {
        let n = lp.num_vars();

        let mut map = Vec::with_capacity(n);
        let mut n_structural = 0;
        for j in 0..n {
            if lp.lower[j].is_finite() {
                map.push(ColumnMap::Shifted { col: n_structural, shift: lp.lower[j] });
                n_structural += 1;
            } else {
                map.push(ColumnMap::Split { pos: n_structural, neg: n_structural + 1 });
                n_structural += 2;
            }
        }

        // Standard-form rows over structural columns: (coefficients, sense, rhs).
        let mut std_rows: Vec<(Vec<f64>, Sense, f64)> = Vec::new();
        for ((row, &sense), &b) in lp.rows.iter().zip(&lp.senses).zip(&lp.rhs) {
            let mut coeffs = vec![0.0; n_structural];
            let mut rhs = b;
            for (j, &a) in row.iter().enumerate() {
                match map[j] {
                    ColumnMap::Shifted { col, shift } => {
                        coeffs[col] = a;
                        rhs -= a * shift;
                    }
                    ColumnMap::Split { pos, neg } => {
                        coeffs[pos] = a;
                        coeffs[neg] = -a;
                    }
                }
            }
            std_rows.push((coeffs, sense, rhs));
        }
        for (&upper, &column) in lp.upper.iter().zip(&map) {
            if let Some(u) = upper {
                let mut coeffs = vec![0.0; n_structural];
                let rhs = match column {
                    ColumnMap::Shifted { col, shift } => {
                        coeffs[col] = 1.0;
                        u - shift
                    }
                    ColumnMap::Split { pos, neg } => {
                        coeffs[pos] = 1.0;
                        coeffs[neg] = -1.0;
                        u
                    }
                };
                std_rows.push((coeffs, Sense::Le, rhs));
            }
        }
        let col_scale = equilibrate(&mut std_rows, n_structural);
        for (coeffs, sense, rhs) in std_rows.iter_mut() {
            if *rhs < 0.0 {
                coeffs.iter_mut().for_each(|a| *a = -*a);
                *rhs = -*rhs;
                *sense = match *sense {
                    Sense::Le => Sense::Ge,
                    Sense::Ge => Sense::Le,
                    Sense::Eq => Sense::Eq,
                };
            }
        }

        let m = std_rows.len();
        let n_slack = std_rows.iter().filter(|r| r.1 != Sense::Eq).count();
        let n_art = std_rows.iter().filter(|r| r.1 != Sense::Le).count();
        let first_slack = n_structural;
        let first_artificial = first_slack + n_slack;
        let ncols = first_artificial + n_art;

        let mut tableau = vec![vec![0.0; ncols + 1]; m];
        let mut basis = vec![0; m];
        let (mut next_slack, mut next_art) = (first_slack, first_artificial);
        for (i, (coeffs, sense, rhs)) in std_rows.into_iter().enumerate() {
            let row = &mut tableau[i];
            row[..n_structural].copy_from_slice(&coeffs);
            row[ncols] = rhs;
            match sense {
                Sense::Le => {
                    row[next_slack] = 1.0;
                    basis[i] = next_slack;
                    next_slack += 1;
                }
                Sense::Ge => {
                    row[next_slack] = -1.0;
                    next_slack += 1;
                    row[next_art] = 1.0;
                    basis[i] = next_art;
                    next_art += 1;
                }
                Sense::Eq => {
                    row[next_art] = 1.0;
                    basis[i] = next_art;
                    next_art += 1;
                }
            }
        }

        Self {
            lp,
            tol: *tol,
            trace,
            map,
            original: tableau.clone(),
            tableau,
            costs: vec![0.0; ncols + 1],
            phase_costs: vec![0.0; ncols],
            basis,
            dropped: Vec::new(),
            ncols,
            n_structural,
            col_scale,
            first_artificial,
            iterations: 0,
        }
    }

    fn run(mut self) -> Result<LpSolution, LpError> {
        // Phase one: minimize the sum of artificials.
        if self.first_artificial < self.ncols {
            let mut phase1 = vec![0.0; self.ncols];
            phase1[self.first_artificial..].iter_mut().for_each(|c| *c = 1.0);
            self.set_costs(&phase1);
            self.dump("phase 1 start");
            self.optimize(self.ncols)?;
            let infeasibility = -self.costs[self.ncols];
            if infeasibility > self.tol.infeasibility {
                self.dump("phase 1 infeasible");
                return Ok(LpSolution {
                    status: LpStatus::Infeasible,
                    objective_value: f64::INFINITY,
                    variable_values: Vec::new(),
                    iteration_count: self.iterations,
                });
            }
            self.evict_artificials()?;
        }

        // Phase two on the original costs; artificial columns may not re-enter.
        let mut phase2 = vec![0.0; self.ncols];
        for (j, &c) in self.lp.objective.iter().enumerate() {
            match self.map[j] {
                ColumnMap::Shifted { col, .. } => phase2[col] = c * self.col_scale[col],
                ColumnMap::Split { pos, neg } => {
                    phase2[pos] = c * self.col_scale[pos];
                    phase2[neg] = -c * self.col_scale[neg];
                }
            }
        }
        self.set_costs(&phase2);
        self.dump("phase 2 start");
        match self.optimize(self.first_artificial)? {
            PhaseOutcome::Unbounded => Ok(LpSolution {
                status: LpStatus::Unbounded,
                objective_value: f64::NEG_INFINITY,
                variable_values: Vec::new(),
                iteration_count: self.iterations,
            }),
            PhaseOutcome::Optimal => {
                let values = self.primal_values();
                self.dump("optimal");
                Ok(LpSolution {
                    status: LpStatus::Optimal,
                    objective_value: self.lp.evaluate(&values),
                    variable_values: values,
                    iteration_count: self.iterations,
                })
            }
        }
    }

    fn set_costs(&mut self, c: &[f64]) {
        self.phase_costs.copy_from_slice(c);
        self.costs[..self.ncols].copy_from_slice(c);
        self.costs[self.ncols] = 0.0;
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = c[b];
            if cb != 0.0 {
                for (d, a) in self.costs.iter_mut().zip(&self.tableau[i]) {
                    *d -= cb * a;
                }
            }
        }
    }

    /// Runs simplex iterations, considering only columns `< col_limit` for entry.
    fn optimize(&mut self, col_limit: usize) -> Result<PhaseOutcome, LpError> {
        let rhs = self.ncols;
        let mut pricing = Pricing::Dantzig;
        let mut stalled = 0usize;
        let mut last_obj = self.costs[rhs];

        let mut fresh = false;

        loop {
            let Some(enter) = self.entering(col_limit, pricing) else {
                if !fresh && self.refactor() {
                    fresh = true;
                    continue;
                }
                return Ok(PhaseOutcome::Optimal);
            };
            let Some(leave) = self.leaving(enter) else {
                if !fresh && self.refactor() {
                    fresh = true;
                    continue;
                }
                return Ok(PhaseOutcome::Unbounded);
            };
            if self.iterations >= self.tol.max_iterations {
                return Err(LpError::IterationLimit(self.iterations));
            }
            let column_max = self.tableau.iter().fold(0.0, |m: f64, row| m.max(row[enter].abs()));
            let small = self.tableau[leave][enter] < SMALL_PIVOT * column_max;
            self.pivot(leave, enter)?;
            fresh = small && self.refactor();

            // costs[rhs] is -z, so an improving pivot increases it.
            let obj = self.costs[rhs];
            if obj > last_obj + self.tol.optimality * last_obj.abs().max(1.0) * 1e-3 {
                last_obj = obj;
                stalled = 0;
                pricing = Pricing::Dantzig;
            } else {
                stalled += 1;
                if stalled >= self.tol.stall_limit {
                    pricing = Pricing::Bland;
                }
            }
        }
    }

    fn entering(&self, col_limit: usize, pricing: Pricing) -> Option<usize> {
        let threshold = -self.tol.optimality;
        match pricing {
            Pricing::Bland => (0..col_limit).find(|&j| self.costs[j] < threshold),
            Pricing::Dantzig => {
                let mut best: Option<(usize, f64)> = None;
                for j in 0..col_limit {
                    let d = self.costs[j];
                    if d < threshold && best.is_none_or(|(_, bd)| d < bd) {
                        best = Some((j, d));
                    }
                }
                best.map(|(j, _)| j)
            }
        }
    }

    /// Minimum-ratio test; ties go to the row whose basic column index is lowest.
    fn leaving(&self, enter: usize) -> Option<usize> {
        let rhs = self.ncols;
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in self.tableau.iter().enumerate() {
            let a = row[enter];
            if a <= self.tol.pivot {
                continue;
            }
            let ratio = row[rhs].max(0.0) / a;
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    let tie = (ratio - br).abs() <= 1e-12 * br.abs().max(1.0);
                    if (tie && self.basis[i] < self.basis[bi]) || (!tie && ratio < br) {
                        Some((i, ratio))
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<(), LpError> {
        self.iterations += 1;
        let rhs = self.ncols;
        let p = self.tableau[r][c];
        let pivot_row: Vec<f64> = self.tableau[r].iter().map(|v| v / p).collect();
        for (i, row) in self.tableau.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
                if row[rhs] < 0.0 && row[rhs] > -self.tol.feasibility {
                    row[rhs] = 0.0;
                }
            }
        }
        let f = self.costs[c];
        if f != 0.0 {
            for (v, pv) in self.costs.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.costs[c] = 0.0;
        }
        self.tableau[r] = pivot_row;
        self.tableau[r][c] = 1.0;
        self.basis[r] = c;

        let finite = self.costs.iter().all(|v| v.is_finite())
            && self.tableau.iter().all(|row| row.iter().all(|v| v.is_finite()));
        if !finite {
            return Err(LpError::NumericalFailure {
                iteration: self.iterations,
                detail: format!("non-finite tableau entry after pivot on row {r}, column {c}"),
            });
        }
        if let Some(t) = self.trace.as_deref_mut() {
            let _ = writeln!(t, "pivot {}: row {r} column {c}", self.iterations);
        }
        self.dump_tableau();
        Ok(())
    }

    /// Pivots basic artificials (all at zero level) out of the basis, dropping
    /// rows that turn out to be linearly dependent.
    fn evict_artificials(&mut self) -> Result<(), LpError> {
        let mut i = 0;
        while i < self.tableau.len() {
            if self.basis[i] < self.first_artificial {
                i += 1;
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.first_artificial {
                let a = self.tableau[i][j].abs();
                if a > self.tol.pivot && best.is_none_or(|(_, ba)| a > ba) {
                    best = Some((j, a));
                }
            }
            match best {
                Some((j, _)) => {
                    self.pivot(i, j)?;
                    i += 1;
                }
                None => {
                    self.tableau.remove(i);
                    self.dropped.push(self.basis.remove(i));
                }
            }
        }
        Ok(())
    }

    /// Rebuilds the tableau and reduced costs for the current basis from the
    /// original rows. Returns false, leaving everything as it was, when the
    /// basis matrix looks singular.
    fn refactor(&mut self) -> bool {
        let m = self.original.len();
        let columns: Vec<usize> = self.basis.iter().chain(&self.dropped).copied().collect();
        let mut b: Vec<Vec<f64>> = self.original.iter().map(|row| columns.iter().map(|&c| row[c]).collect()).collect();
        let mut rhs = self.original.clone();
        for k in 0..m {
            let p = (k..m).max_by(|&x, &y| b[x][k].abs().total_cmp(&b[y][k].abs())).unwrap_or(k);
            if b[p][k].abs() <= self.tol.pivot {
                return false;
            }
            b.swap(k, p);
            rhs.swap(k, p);
            for i in 0..m {
                if i == k || b[i][k] == 0.0 {
                    continue;
                }
                let f = b[i][k] / b[k][k];
                let (pivot_b, pivot_r) = (b[k].clone(), rhs[k].clone());
                for (v, pv) in b[i].iter_mut().zip(&pivot_b) {
                    *v -= f * pv;
                }
                for (v, pv) in rhs[i].iter_mut().zip(&pivot_r) {
                    *v -= f * pv;
                }
            }
        }
        let width = self.ncols + 1;
        for (i, &col) in self.basis.iter().enumerate() {
            let d = b[i][i];
            let mut row: Vec<f64> = rhs[i].iter().map(|v| v / d).collect();
            for &other in &columns {
                row[other] = 0.0;
            }
            row[col] = 1.0;
            if row[width - 1] < 0.0 && row[width - 1] > -self.tol.feasibility {
                row[width - 1] = 0.0;
            }
            self.tableau[i] = row;
        }
        let c = self.phase_costs.clone();
        self.set_costs(&c);
        self.dump("refactor");
        true
    }

    fn primal_values(&self) -> Vec<f64> {
        let rhs = self.ncols;
        let mut std = vec![0.0; self.n_structural];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_structural {
                std[b] = self.tableau[i][rhs].max(0.0) * self.col_scale[b];
            }
        }
        self.map
            .iter()
            .map(|m| match *m {
                ColumnMap::Shifted { col, shift } => shift + std[col],
                ColumnMap::Split { pos, neg } => std[pos] - std[neg],
            })
            .collect()
    }

    fn dump(&mut self, label: &str) {
        if let Some(t) = self.trace.as_deref_mut() {
            let _ = writeln!(t, "== {label} (iteration {})", self.iterations);
        }
        self.dump_tableau();
    }

    fn dump_tableau(&mut self) {
        let Some(t) = self.trace.as_deref_mut() else { return };
        let label = |j: usize| -> String {
            if j < self.n_structural {
                let original = self.map.iter().position(|m| match *m {
                    ColumnMap::Shifted { col, .. } => col == j,
                    ColumnMap::Split { pos, neg } => pos == j || neg == j,
                });
                match (original, self.lp.names.as_ref()) {
                    (Some(o), Some(names)) => names[o].clone(),
                    (Some(o), None) => format!("x{o}"),
                    (None, _) => format!("c{j}"),
                }
            } else if j < self.first_artificial {
                format!("s{}", j - self.n_structural)
            } else {
                format!("a{}", j - self.first_artificial)
            }
        };
        for (i, row) in self.tableau.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>10.4}")).collect();
            let _ = writeln!(t, "{:>8} | {}", label(self.basis[i]), cells.join(" "));
        }
        let cells: Vec<String> = self.costs.iter().map(|v| format!("{v:>10.4}")).collect();
        let _ = writeln!(t, "{:>8} | {}", "d", cells.join(" "));
    }
}

//! Dense two-phase primal simplex with Bland's rule.
//!
//! Problems are stated as: maximize `c . x` subject to rows `a . x {<=,=,>=} b`
//! with `x >= 0`. The solver is deliberately self-contained and fully
//! deterministic: identical inputs produce bit-identical outputs.
//!
//! Dual convention for `maximize`: the reported `y` satisfies
//! `c . x* = b . y` with `y_i >= 0` for `<=` rows, `y_i <= 0` for `>=` rows,
//! and free for `=` rows, all in terms of the caller's original row
//! orientation.

use crate::{Error, Result};

/// Feasibility and optimality tolerance.
pub const EPS_LP: f64 = 1e-7;

/// Pivot magnitude below which an entry is treated as zero.
const EPS_PIVOT: f64 = 1e-9;

/// Hard iteration cap; Bland's rule cannot cycle, so hitting this indicates
/// numerical breakdown.
const MAX_ITERS: usize = 200_000;

/// Row relation in a constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// A linear program in the crate's canonical orientation (maximize, `x >= 0`).
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<(Vec<f64>, Relation, f64)>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> LinearProgram {
        LinearProgram {
            objective,
            rows: Vec::new(),
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.objective.len());
        self.rows.push((coeffs, relation, rhs));
    }
}

/// Optimal primal/dual pair.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Solver verdict.
#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

/// Which auxiliary column belongs to a row, for dual recovery.
#[derive(Clone, Copy)]
enum RowAux {
    Slack(usize),
    Surplus(usize),
    Artificial(usize),
}

struct Tableau {
    /// Constraint rows, canonical w.r.t. `basis`; last entry is the rhs.
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    n_cols: usize,
    n_vars: usize,
    artificial_start: usize,
    aux: Vec<RowAux>,
    flipped: Vec<bool>,
    /// Original row index for each live tableau row (rows can be dropped as
    /// redundant after phase 1).
    origin: Vec<usize>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n_vars = lp.objective.len();
        let m = lp.rows.len();
        let n_slack = lp
            .rows
            .iter()
            .filter(|r| relation_after_flip(r) == Relation::Le)
            .count();
        let n_surplus = lp
            .rows
            .iter()
            .filter(|r| relation_after_flip(r) == Relation::Ge)
            .count();
        let n_artificial = lp
            .rows
            .iter()
            .filter(|r| relation_after_flip(r) != Relation::Le)
            .count();
        let slack_start = n_vars;
        let surplus_start = slack_start + n_slack;
        let artificial_start = surplus_start + n_surplus;
        let n_cols = artificial_start + n_artificial;

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut aux = Vec::with_capacity(m);
        let mut flipped = Vec::with_capacity(m);
        let mut next_slack = slack_start;
        let mut next_surplus = surplus_start;
        let mut next_artificial = artificial_start;

        for (coeffs, relation, rhs) in &lp.rows {
            let flip = *rhs < 0.0;
            let sign = if flip { -1.0 } else { 1.0 };
            let mut row = vec![0.0; n_cols + 1];
            for (j, &a) in coeffs.iter().enumerate() {
                row[j] = sign * a;
            }
            row[n_cols] = sign * rhs;
            let rel = flip_relation(*relation, flip);
            match rel {
                Relation::Le => {
                    row[next_slack] = 1.0;
                    basis.push(next_slack);
                    aux.push(RowAux::Slack(next_slack));
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_surplus] = -1.0;
                    row[next_artificial] = 1.0;
                    basis.push(next_artificial);
                    aux.push(RowAux::Surplus(next_surplus));
                    next_surplus += 1;
                    next_artificial += 1;
                }
                Relation::Eq => {
                    row[next_artificial] = 1.0;
                    basis.push(next_artificial);
                    aux.push(RowAux::Artificial(next_artificial));
                    next_artificial += 1;
                }
            }
            rows.push(row);
            flipped.push(flip);
        }

        Tableau {
            rows,
            basis,
            n_cols,
            n_vars,
            artificial_start,
            aux,
            flipped,
            origin: (0..m).collect(),
        }
    }

    fn m(&self) -> usize {
        self.rows.len()
    }

    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.n_cols]
    }

    /// Reduced cost `c_B . col_j - c_j` for the cost vector `cost`.
    fn reduced_cost(&self, cost: &[f64], j: usize) -> f64 {
        let mut z = 0.0;
        for i in 0..self.m() {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                z += cb * self.rows[i][j];
            }
        }
        z - cost[j]
    }

    fn pivot(&mut self, r: usize, j: usize) -> Result<()> {
        let piv = self.rows[r][j];
        if piv.abs() < EPS_PIVOT {
            return Err(Error::LpBreakdown(format!(
                "pivot magnitude {piv:.3e} below tolerance with no alternative"
            )));
        }
        let inv = 1.0 / piv;
        for v in self.rows[r].iter_mut() {
            *v *= inv;
        }
        for i in 0..self.m() {
            if i == r {
                continue;
            }
            let factor = self.rows[i][j];
            if factor != 0.0 {
                for k in 0..=self.n_cols {
                    let delta = factor * self.rows[r][k];
                    self.rows[i][k] -= delta;
                }
                self.rows[i][j] = 0.0;
            }
        }
        self.basis[r] = j;
        if self.rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::LpBreakdown(
                "non-finite tableau entry after pivot".into(),
            ));
        }
        Ok(())
    }

    /// Bland's rule iteration for the cost vector `cost`, maximizing. Columns
    /// with index >= `col_limit` are excluded from entering.
    /// Returns Ok(true) at optimality, Ok(false) if unbounded.
    fn run_simplex(&mut self, cost: &[f64], col_limit: usize) -> Result<bool> {
        for _ in 0..MAX_ITERS {
            // Entering: smallest-index column with negative reduced cost.
            let mut entering = None;
            for j in 0..col_limit {
                if self.basis.contains(&j) {
                    continue;
                }
                if self.reduced_cost(cost, j) < -EPS_LP {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Ok(true);
            };
            // Leaving: minimum ratio, ties broken by smallest basis index.
            let mut best: Option<(f64, usize, usize)> = None;
            for i in 0..self.m() {
                let a = self.rows[i][j];
                if a > EPS_PIVOT {
                    let ratio = self.rhs(i) / a;
                    let key = (ratio, self.basis[i]);
                    match best {
                        Some((r, b, _)) if (r, b) <= key => {}
                        _ => best = Some((key.0, key.1, i)),
                    }
                }
            }
            let Some((_, _, r)) = best else {
                return Ok(false);
            };
            self.pivot(r, j)?;
        }
        Err(Error::LpBreakdown(format!(
            "no convergence after {MAX_ITERS} iterations"
        )))
    }
}

fn relation_after_flip(row: &(Vec<f64>, Relation, f64)) -> Relation {
    flip_relation(row.1, row.2 < 0.0)
}

fn flip_relation(rel: Relation, flip: bool) -> Relation {
    if !flip {
        return rel;
    }
    match rel {
        Relation::Le => Relation::Ge,
        Relation::Ge => Relation::Le,
        Relation::Eq => Relation::Eq,
    }
}

/// Solves the program. `Err` is reserved for numerical breakdown; infeasible
/// and unbounded are ordinary outcomes.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    for (coeffs, _, _) in &lp.rows {
        if coeffs.len() != lp.objective.len() {
            return Err(Error::BadInput(format!(
                "constraint has {} coefficients, objective has {}",
                coeffs.len(),
                lp.objective.len()
            )));
        }
    }
    let mut t = Tableau::build(lp);

    // Phase 1: maximize minus the sum of artificials.
    if t.artificial_start < t.n_cols {
        let mut cost1 = vec![0.0; t.n_cols + 1];
        for c in cost1ize(&t) {
            cost1[c] = -1.0;
        }
        if !t.run_simplex(&cost1, t.n_cols)? {
            return Err(Error::LpBreakdown(
                "phase 1 reported an unbounded auxiliary objective".into(),
            ));
        }
        let infeas: f64 = (0..t.m())
            .filter(|&i| t.basis[i] >= t.artificial_start)
            .map(|i| t.rhs(i))
            .sum();
        if infeas > EPS_LP {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive basic artificials out or drop redundant rows.
        let mut i = 0;
        while i < t.m() {
            if t.basis[i] >= t.artificial_start {
                let mut pivoted = false;
                for j in 0..t.artificial_start {
                    if t.rows[i][j].abs() > EPS_PIVOT {
                        t.pivot(i, j)?;
                        pivoted = true;
                        break;
                    }
                }
                if !pivoted {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    t.aux.remove(i);
                    t.flipped.remove(i);
                    t.origin.remove(i);
                    continue;
                }
            }
            i += 1;
        }
    }

    // Phase 2: original objective; artificial columns may not re-enter.
    let mut cost2 = vec![0.0; t.n_cols + 1];
    cost2[..t.n_vars].copy_from_slice(&lp.objective);
    if !t.run_simplex(&cost2, t.artificial_start)? {
        return Ok(LpOutcome::Unbounded);
    }

    let mut x = vec![0.0; t.n_vars];
    for i in 0..t.m() {
        if t.basis[i] < t.n_vars {
            x[t.basis[i]] = t.rhs(i);
        }
    }
    let value: f64 = lp
        .objective
        .iter()
        .zip(&x)
        .map(|(c, xi)| c * xi)
        .sum();

    // Duals read off the auxiliary columns' reduced costs, then unflipped
    // back into the caller's row orientation. Dropped redundant rows keep
    // dual value 0.
    let mut y = vec![0.0; lp.rows.len()];
    for i in 0..t.m() {
        let yi = match t.aux[i] {
            RowAux::Slack(j) => t.reduced_cost(&cost2, j),
            RowAux::Surplus(j) => -t.reduced_cost(&cost2, j),
            RowAux::Artificial(j) => t.reduced_cost(&cost2, j),
        };
        let orig = t.origin[i];
        y[orig] = if t.flipped[i] { -yi } else { yi };
    }
    // aux columns belong to rows, but after redundant-row drops the reduced
    // costs must be recomputed against surviving rows only, which
    // `reduced_cost` already does.

    Ok(LpOutcome::Optimal(LpSolution { value, x, y }))
}

/// Indices of all artificial columns.
fn cost1ize(t: &Tableau) -> Vec<usize> {
    (t.artificial_start..t.n_cols).collect()
}

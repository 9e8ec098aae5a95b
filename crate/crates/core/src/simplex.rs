//! Small dense-tableau simplex solver.
//!
//! Solves `min cᵀx` subject to linear rows `aᵢᵀx {≤,=,≥} bᵢ` and `x ≥ 0` with the
//! two-phase method. Pivoting follows Bland's rule, so the method terminates on
//! degenerate problems. Meant for the tiny programs that arise from transport
//! plans and Lipschitz extensions on desk-sized graphs.

use crate::error::{Result, RicciError};

/// Optimality / feasibility tolerance.
pub const LP_TOL: f64 = 1e-10;
const PIVOT_TOL: f64 = 1e-12;
const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<f64>,
    rel: Relation,
    rhs: f64,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    objective: Vec<f64>,
    rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub objective: f64,
    pub x: Vec<f64>,
}

impl LinearProgram {
    /// Minimisation of `objective · x` over `x ≥ 0`.
    pub fn minimize(objective: Vec<f64>) -> Self {
        LinearProgram {
            objective,
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<f64>, rel: Relation, rhs: f64) {
        assert_eq!(coeffs.len(), self.num_vars(), "constraint width mismatch");
        self.rows.push(Row { coeffs, rel, rhs });
    }

    /// Sparse form of [`add_constraint`](Self::add_constraint).
    pub fn add_sparse(&mut self, terms: &[(usize, f64)], rel: Relation, rhs: f64) {
        let mut coeffs = vec![0.0; self.num_vars()];
        for &(j, a) in terms {
            coeffs[j] += a;
        }
        self.add_constraint(coeffs, rel, rhs);
    }

    pub fn solve(&self) -> Result<LpSolution> {
        Tableau::build(self).run(self)
    }
}

/// Column layout: structural vars | slack/surplus | artificials | rhs.
struct Tableau {
    m: usize,
    n_struct: usize,
    n_art_start: usize,
    n_cols: usize,
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let m = lp.rows.len();
        let n_struct = lp.num_vars();
        // normalise so that rhs >= 0
        let rows: Vec<Row> = lp
            .rows
            .iter()
            .map(|r| {
                if r.rhs < 0.0 {
                    Row {
                        coeffs: r.coeffs.iter().map(|a| -a).collect(),
                        rel: match r.rel {
                            Relation::Le => Relation::Ge,
                            Relation::Ge => Relation::Le,
                            Relation::Eq => Relation::Eq,
                        },
                        rhs: -r.rhs,
                    }
                } else {
                    r.clone()
                }
            })
            .collect();
        let n_slack = rows.iter().filter(|r| r.rel != Relation::Eq).count();
        let n_art = rows.iter().filter(|r| r.rel != Relation::Le).count();
        let n_art_start = n_struct + n_slack;
        let n_cols = n_art_start + n_art;

        let mut t = vec![vec![0.0; n_cols + 1]; m];
        let mut basis = vec![0; m];
        let (mut s, mut a) = (n_struct, n_art_start);
        for (i, r) in rows.iter().enumerate() {
            t[i][..n_struct].copy_from_slice(&r.coeffs);
            t[i][n_cols] = r.rhs;
            match r.rel {
                Relation::Le => {
                    t[i][s] = 1.0;
                    basis[i] = s;
                    s += 1;
                }
                Relation::Ge => {
                    t[i][s] = -1.0;
                    s += 1;
                    t[i][a] = 1.0;
                    basis[i] = a;
                    a += 1;
                }
                Relation::Eq => {
                    t[i][a] = 1.0;
                    basis[i] = a;
                    a += 1;
                }
            }
        }
        Tableau {
            m,
            n_struct,
            n_art_start,
            n_cols,
            t,
            basis,
            pivots: 0,
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[row][col];
        for v in self.t[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f != 0.0 {
                for (v, pv) in r.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                r[col] = 0.0;
            }
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Reduced costs for `cost` (length n_cols) under the current basis.
    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                for (dj, tij) in d.iter_mut().zip(&self.t[i][..self.n_cols]) {
                    *dj -= cb * tij;
                }
            }
        }
        d
    }

    /// Runs simplex iterations with Bland's rule over columns `< allowed`.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Result<()> {
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(RicciError::LpIterationLimit(MAX_PIVOTS));
            }
            let d = self.reduced_costs(cost);
            let Some(col) = (0..allowed).find(|&j| d[j] < -LP_TOL) else {
                return Ok(());
            };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.t[i][col];
                if a > PIVOT_TOL {
                    let ratio = self.t[i][self.n_cols] / a;
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - PIVOT_TOL || (ratio <= br + PIVOT_TOL && self.basis[i] < self.basis[bi]) {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            let Some((row, _)) = best else {
                return Err(RicciError::LpUnbounded);
            };
            self.pivot(row, col);
        }
    }

    fn run(mut self, lp: &LinearProgram) -> Result<LpSolution> {
        if self.n_art_start < self.n_cols {
            let mut phase1 = vec![0.0; self.n_cols];
            for c in phase1[self.n_art_start..].iter_mut() {
                *c = 1.0;
            }
            self.optimize(&phase1, self.n_cols)?;
            let infeasibility: f64 = self
                .basis
                .iter()
                .enumerate()
                .filter(|(_, &b)| b >= self.n_art_start)
                .map(|(i, _)| self.t[i][self.n_cols])
                .sum();
            let scale = 1.0 + self.t.iter().map(|r| r[self.n_cols].abs()).fold(0.0, f64::max);
            if infeasibility > 1e-9 * scale {
                return Err(RicciError::LpInfeasible);
            }
            // drive remaining (zero-level) artificials out of the basis
            let mut i = 0;
            while i < self.m {
                if self.basis[i] >= self.n_art_start {
                    if let Some(col) = (0..self.n_art_start).find(|&j| self.t[i][j].abs() > 1e-9) {
                        self.pivot(i, col);
                        i += 1;
                    } else {
                        // redundant row
                        self.t.remove(i);
                        self.basis.remove(i);
                        self.m -= 1;
                    }
                } else {
                    i += 1;
                }
            }
        }
        let mut cost = vec![0.0; self.n_cols];
        cost[..self.n_struct].copy_from_slice(&lp.objective);
        self.optimize(&cost, self.n_art_start)?;

        let mut x = vec![0.0; self.n_struct];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_struct {
                x[b] = self.t[i][self.n_cols];
            }
        }
        let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpSolution { objective, x })
    }
}

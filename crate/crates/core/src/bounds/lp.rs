//! The bound linear program over asymptotic per-list play rates.
//!
//! Variables `y_pi >= 0`, one per list. For every (relevant `i`, irrelevant
//! `j`) pair there is a row
//! `sum_{pi containing j} y_pi * I_{pi^-1(j)}(j, i) >= 1`, and the objective is
//! `minimize sum_pi y_pi Reg(pi)`. At an optimum, each row is tight or has a
//! zero multiplier, and each list has zero reduced cost or `y_pi = 0`.

use alloc::vec;
use alloc::vec::Vec;

use super::BoundError;
use crate::divergence::{regret_table, slot_divergence, RegretTable};
use crate::model::{Arm, ArmList, ProblemInstance};
use crate::simplex::{self, LinearProgram, LpStatus, Row, Sense};

/// The bound program of an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundLp {
    /// Lists, lexicographic; column `c` is `lists[c]`.
    pub lists: Vec<ArmList>,
    /// `(relevant, irrelevant)` pair of each row.
    pub pairs: Vec<(Arm, Arm)>,
    /// Row-major coefficients, `pairs.len() x lists.len()`.
    pub coeffs: Vec<Vec<f64>>,
    /// `Reg(pi)` per column.
    pub costs: Vec<f64>,
}

impl BoundLp {
    /// Number of rows.
    pub fn num_rows(&self) -> usize {
        self.pairs.len()
    }

    /// Number of columns.
    pub fn num_cols(&self) -> usize {
        self.lists.len()
    }

    /// Number of strictly positive coefficients in row `r`.
    pub fn row_support(&self, r: usize) -> usize {
        self.coeffs[r].iter().filter(|&&a| a > 0.0).count()
    }

    /// Scales every list regret by `factor`.
    pub fn scale_costs(&mut self, factor: f64) {
        for c in &mut self.costs {
            *c *= factor;
        }
    }
}

/// Primal/dual optimum of a [`BoundLp`].
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    /// `y_pi` per column.
    pub y: Vec<f64>,
    /// `sum_pi y_pi Reg(pi)`.
    pub objective: f64,
    /// Row multipliers `lambda_{i,j}`, aligned with [`BoundLp::pairs`].
    pub duals: Vec<f64>,
    /// Solver verdict; always optimal for programs returned by [`solve_lp`].
    pub status: LpStatus,
}

/// Worst violations of the optimality system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktResiduals {
    /// `max(0, 1 - row activity)` and `max(0, -y)`.
    pub primal: f64,
    /// `max(0, -lambda)` and `max(0, -reduced cost)`.
    pub dual: f64,
    /// `max |row slack * lambda|`.
    pub row_slackness: f64,
    /// `max |y * reduced cost|`.
    pub column_slackness: f64,
}

/// Builds the program; [`BoundError::EmptyProgram`] when every arm is relevant.
pub fn build_lp(instance: &ProblemInstance) -> Result<BoundLp, BoundError> {
    build_lp_from_table(instance, &regret_table(instance))
}

pub(crate) fn build_lp_from_table(
    instance: &ProblemInstance,
    table: &RegretTable,
) -> Result<BoundLp, BoundError> {
    let s = table.structure();
    if s.irrelevant_arms.is_empty() {
        return Err(BoundError::EmptyProgram);
    }
    let lists = table.lists().to_vec();
    let mut pairs = Vec::new();
    let mut coeffs = Vec::new();
    for &i in &s.relevant_arms {
        for &j in &s.irrelevant_arms {
            let mut row = vec![0.0; lists.len()];
            for (c, list) in lists.iter().enumerate() {
                if let Some(k) = list.slot_of(j) {
                    row[c] = slot_divergence(instance, k, j, i)?;
                }
            }
            if !row.iter().any(|&a| a > 0.0) {
                return Err(BoundError::EmptyRow {
                    relevant: i,
                    irrelevant: j,
                });
            }
            pairs.push((i, j));
            coeffs.push(row);
        }
    }
    Ok(BoundLp {
        lists,
        pairs,
        coeffs,
        costs: table.per_list().to_vec(),
    })
}

/// Solves the program with the dense two-phase simplex.
pub fn solve_lp(lp: &BoundLp) -> Result<LpSolution, BoundError> {
    let program = LinearProgram {
        objective: lp.costs.clone(),
        rows: lp
            .coeffs
            .iter()
            .map(|coeffs| Row {
                coeffs: coeffs.clone(),
                sense: Sense::Ge,
                rhs: 1.0,
            })
            .collect(),
    };
    let out = simplex::solve(&program);
    match out.status {
        LpStatus::Optimal => Ok(LpSolution {
            y: out.x,
            objective: out.objective,
            duals: out.duals,
            status: out.status,
        }),
        LpStatus::Infeasible => Err(BoundError::Solver("infeasible")),
        LpStatus::Unbounded => Err(BoundError::Solver("unbounded")),
    }
}

/// Residuals of the optimality system at `solution`.
pub fn kkt_residuals(lp: &BoundLp, solution: &LpSolution) -> KktResiduals {
    let mut primal: f64 = 0.0;
    let mut dual: f64 = 0.0;
    let mut row_slackness: f64 = 0.0;
    let mut column_slackness: f64 = 0.0;
    for (r, row) in lp.coeffs.iter().enumerate() {
        let activity: f64 = row.iter().zip(&solution.y).map(|(a, y)| a * y).sum();
        let slack = activity - 1.0;
        primal = primal.max(-slack);
        dual = dual.max(-solution.duals[r]);
        row_slackness = row_slackness.max((slack * solution.duals[r]).abs());
    }
    for c in 0..lp.num_cols() {
        let priced: f64 = (0..lp.num_rows())
            .map(|r| solution.duals[r] * lp.coeffs[r][c])
            .sum();
        let reduced = lp.costs[c] - priced;
        primal = primal.max(-solution.y[c]);
        dual = dual.max(-reduced);
        column_slackness = column_slackness.max((solution.y[c] * reduced).abs());
    }
    KktResiduals {
        primal,
        dual,
        row_slackness,
        column_slackness,
    }
}

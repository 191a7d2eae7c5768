//! Dense two-phase primal simplex with Bland's rule.
//!
//! Sized for the bound programs in this crate: a handful of rows and at most a
//! few hundred columns. Solves `minimize c.x` subject to row constraints and
//! `x >= 0`, and reports row duals in the sign convention of the original rows
//! (a `>=` row of a minimization has a non-negative dual).

use alloc::vec;
use alloc::vec::Vec;

/// Row sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    /// `a.x <= b`
    Le,
    /// `a.x >= b`
    Ge,
    /// `a.x == b`
    Eq,
}

/// One constraint row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    /// Dense coefficients, one per variable.
    pub coeffs: Vec<f64>,
    /// Row sense.
    pub sense: Sense,
    /// Right-hand side.
    pub rhs: f64,
}

/// `minimize objective.x` over `x >= 0` and `rows`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    /// Cost vector.
    pub objective: Vec<f64>,
    /// Constraints.
    pub rows: Vec<Row>,
}

/// Solver verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    /// An optimal basis was found.
    Optimal,
    /// Phase one could not drive the artificials to zero.
    Infeasible,
    /// Phase two found an improving ray.
    Unbounded,
}

/// Primal and dual values at termination.
#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome {
    /// Verdict.
    pub status: LpStatus,
    /// Primal values (meaningful when optimal).
    pub x: Vec<f64>,
    /// Objective value.
    pub objective: f64,
    /// Row duals.
    pub duals: Vec<f64>,
}

const PIVOT_EPS: f64 = 1e-11;
const FEAS_EPS: f64 = 1e-9;

struct Tableau {
    rows: usize,
    cols: usize,
    // rows x (cols + 1); last column is the rhs
    data: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * (self.cols + 1) + c]
    }

    #[inline]
    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let inv = 1.0 / self.data[pr * w + pc];
        for c in 0..w {
            self.data[pr * w + c] *= inv;
        }
        self.data[pr * w + pc] = 1.0;
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let factor = self.data[r * w + pc];
            if factor == 0.0 {
                continue;
            }
            for c in 0..w {
                self.data[r * w + c] -= factor * self.data[pr * w + c];
            }
            self.data[r * w + pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    fn reduced_costs(&self, costs: &[f64]) -> Vec<f64> {
        (0..self.cols)
            .map(|c| {
                costs[c]
                    - (0..self.rows)
                        .map(|r| costs[self.basis[r]] * self.at(r, c))
                        .sum::<f64>()
            })
            .collect()
    }

    /// Runs Bland-rule iterations for `costs`. Columns with `allowed[c] ==
    /// false` never enter. Returns false on an unbounded ray.
    fn optimize(&mut self, costs: &[f64], allowed: &[bool]) -> bool {
        loop {
            let d = self.reduced_costs(costs);
            let Some(enter) = (0..self.cols).find(|&c| allowed[c] && d[c] < -PIVOT_EPS) else {
                return true;
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, enter);
                if a <= PIVOT_EPS {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((br, bratio)) => {
                        if ratio < bratio - PIVOT_EPS
                            || (ratio <= bratio + PIVOT_EPS && self.basis[r] < self.basis[br])
                        {
                            Some((r, ratio))
                        } else {
                            Some((br, bratio))
                        }
                    }
                };
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

/// Solves `lp` with the two-phase method.
pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let n = lp.objective.len();
    let m = lp.rows.len();
    // column layout: structural | one slack/surplus per inequality | one artificial per row
    let slack_count = lp.rows.iter().filter(|r| r.sense != Sense::Eq).count();
    let art_start = n + slack_count;
    let cols = art_start + m;
    let mut data = vec![0.0; m * (cols + 1)];
    let mut flipped = vec![false; m];
    let mut next_slack = n;
    for (r, row) in lp.rows.iter().enumerate() {
        let sign = if row.rhs < 0.0 { -1.0 } else { 1.0 };
        flipped[r] = sign < 0.0;
        let base = r * (cols + 1);
        for (c, &a) in row.coeffs.iter().enumerate() {
            data[base + c] = sign * a;
        }
        if row.sense != Sense::Eq {
            let s = match row.sense {
                Sense::Le => 1.0,
                _ => -1.0,
            };
            data[base + next_slack] = sign * s;
            next_slack += 1;
        }
        data[base + art_start + r] = 1.0;
        data[base + cols] = sign * row.rhs;
    }
    let mut tab = Tableau {
        rows: m,
        cols,
        data,
        basis: (art_start..cols).collect(),
    };

    let mut phase1 = vec![0.0; cols];
    for c in phase1.iter_mut().skip(art_start) {
        *c = 1.0;
    }
    let all = vec![true; cols];
    tab.optimize(&phase1, &all);
    let infeasibility: f64 = (0..m)
        .filter(|&r| tab.basis[r] >= art_start)
        .map(|r| tab.rhs(r))
        .sum();
    if infeasibility > FEAS_EPS {
        return LpOutcome {
            status: LpStatus::Infeasible,
            x: vec![0.0; n],
            objective: f64::NAN,
            duals: vec![0.0; m],
        };
    }
    // drive zero-level artificials out where a real column can replace them
    for r in 0..m {
        if tab.basis[r] >= art_start {
            if let Some(c) = (0..art_start).find(|&c| tab.at(r, c).abs() > PIVOT_EPS) {
                tab.pivot(r, c);
            }
        }
    }

    let mut costs = vec![0.0; cols];
    costs[..n].copy_from_slice(&lp.objective);
    let allowed: Vec<bool> = (0..cols).map(|c| c < art_start).collect();
    let bounded = tab.optimize(&costs, &allowed);

    let mut x = vec![0.0; n];
    for r in 0..m {
        if tab.basis[r] < n {
            x[tab.basis[r]] = tab.rhs(r);
        }
    }
    let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    // the artificial of row r has original column e_r and zero phase-two cost,
    // so its reduced cost is -(c_B B^-1)_r
    let d = tab.reduced_costs(&costs);
    let duals = (0..m)
        .map(|r| {
            let dual = -d[art_start + r];
            if flipped[r] {
                -dual
            } else {
                dual
            }
        })
        .collect();
    LpOutcome {
        status: if bounded {
            LpStatus::Optimal
        } else {
            LpStatus::Unbounded
        },
        x,
        objective,
        duals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn row(coeffs: &[f64], sense: Sense, rhs: f64) -> Row {
        Row {
            coeffs: coeffs.to_vec(),
            sense,
            rhs,
        }
    }

    #[test]
    fn one_by_one() {
        let lp = LinearProgram {
            objective: vec![1.0],
            rows: vec![row(&[1.0], Sense::Ge, 1.0)],
        };
        let out = solve(&lp);
        assert_eq!(out.status, LpStatus::Optimal);
        assert_abs_diff_eq!(out.objective, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.duals[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn textbook_max_as_min() {
        // max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18  -> (2, 6), 36
        let lp = LinearProgram {
            objective: vec![-3.0, -5.0],
            rows: vec![
                row(&[1.0, 0.0], Sense::Le, 4.0),
                row(&[0.0, 2.0], Sense::Le, 12.0),
                row(&[3.0, 2.0], Sense::Le, 18.0),
            ],
        };
        let out = solve(&lp);
        assert_eq!(out.status, LpStatus::Optimal);
        assert_abs_diff_eq!(out.x[0], 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(out.x[1], 6.0, epsilon = 1e-9);
        assert_abs_diff_eq!(out.objective, -36.0, epsilon = 1e-9);
        // duals of <= rows in a minimization are non-positive: (0, -1.5, -1)
        assert_abs_diff_eq!(out.duals[0], 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(out.duals[1], -1.5, epsilon = 1e-9);
        assert_abs_diff_eq!(out.duals[2], -1.0, epsilon = 1e-9);
    }

    #[test]
    fn equality_and_negative_rhs() {
        // min x + 2y st x + y = 3, -x <= -1  -> x = 3
        let lp = LinearProgram {
            objective: vec![1.0, 2.0],
            rows: vec![
                row(&[1.0, 1.0], Sense::Eq, 3.0),
                row(&[-1.0, 0.0], Sense::Le, -1.0),
            ],
        };
        let out = solve(&lp);
        assert_eq!(out.status, LpStatus::Optimal);
        assert_abs_diff_eq!(out.objective, 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(out.duals[0], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(out.duals[1], 0.0, epsilon = 1e-9);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LinearProgram {
            objective: vec![1.0],
            rows: vec![row(&[1.0], Sense::Le, 1.0), row(&[1.0], Sense::Ge, 2.0)],
        };
        assert_eq!(solve(&lp).status, LpStatus::Infeasible);
        let lp = LinearProgram {
            objective: vec![-1.0, 0.0],
            rows: vec![row(&[1.0, -1.0], Sense::Le, 1.0)],
        };
        assert_eq!(solve(&lp).status, LpStatus::Unbounded);
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, cycles under the textbook largest-coefficient rule
        let lp = LinearProgram {
            objective: vec![-0.75, 150.0, -0.02, 6.0],
            rows: vec![
                row(&[0.25, -60.0, -0.04, 9.0], Sense::Le, 0.0),
                row(&[0.5, -90.0, -0.02, 3.0], Sense::Le, 0.0),
                row(&[0.0, 0.0, 1.0, 0.0], Sense::Le, 1.0),
            ],
        };
        let out = solve(&lp);
        assert_eq!(out.status, LpStatus::Optimal);
        assert_abs_diff_eq!(out.objective, -0.05, epsilon = 1e-9);
    }
}

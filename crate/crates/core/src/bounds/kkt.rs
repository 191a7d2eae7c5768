//! Exhaustive active-set enumeration for small bound programs.
//!
//! Every vertex of `{y >= 0 : A y >= 1}` is obtained by choosing a set `S` of
//! tight rows and an equally sized set `B` of positive columns and solving
//! `A[S, B] y_B = 1`. The cheapest feasible vertex is the optimum. A vertex is
//! certified when the multipliers from `A[S, B]^T lambda = c_B` are
//! non-negative and leave every reduced cost non-negative. This route shares
//! nothing with the simplex solver.

use alloc::vec;
use alloc::vec::Vec;

use super::lp::BoundLp;

/// Largest column count the enumerator accepts.
pub const MAX_COLUMNS: usize = 12;

const TOL: f64 = 1e-10;

/// Best vertex found by enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveSetOptimum {
    /// Objective at the cheapest feasible vertex.
    pub objective: f64,
    /// That vertex.
    pub y: Vec<f64>,
    /// Whether some vertex with this objective has valid multipliers.
    pub certified: bool,
}

/// Enumerates all active sets; `None` if the program is too large or has no
/// feasible vertex.
pub fn enumerate_active_sets(lp: &BoundLp) -> Option<ActiveSetOptimum> {
    let (rows, cols) = (lp.num_rows(), lp.num_cols());
    if cols > MAX_COLUMNS {
        return None;
    }
    let mut best: Option<ActiveSetOptimum> = None;
    let mut certified_values: Vec<f64> = Vec::new();
    for size in 1..=rows.min(cols) {
        for row_set in subsets(rows, size) {
            for col_set in subsets(cols, size) {
                let a: Vec<Vec<f64>> = row_set
                    .iter()
                    .map(|&r| col_set.iter().map(|&c| lp.coeffs[r][c]).collect())
                    .collect();
                let Some(y_b) = solve_square(a.clone(), vec![1.0; size]) else {
                    continue;
                };
                if y_b.iter().any(|&v| v < -TOL) {
                    continue;
                }
                let mut y = vec![0.0; cols];
                for (&c, &v) in col_set.iter().zip(&y_b) {
                    y[c] = v.max(0.0);
                }
                let feasible = lp
                    .coeffs
                    .iter()
                    .all(|row| row.iter().zip(&y).map(|(a, v)| a * v).sum::<f64>() >= 1.0 - 1e-9);
                if !feasible {
                    continue;
                }
                let objective: f64 = lp.costs.iter().zip(&y).map(|(c, v)| c * v).sum();
                if certify(lp, &row_set, &col_set, &a) {
                    certified_values.push(objective);
                }
                if best.as_ref().is_none_or(|b| objective < b.objective) {
                    best = Some(ActiveSetOptimum {
                        objective,
                        y,
                        certified: false,
                    });
                }
            }
        }
    }
    best.map(|mut b| {
        b.certified = certified_values
            .iter()
            .any(|v| (v - b.objective).abs() <= 1e-9 * b.objective.abs().max(1.0));
        b
    })
}

fn certify(lp: &BoundLp, row_set: &[usize], col_set: &[usize], a: &[Vec<f64>]) -> bool {
    let n = row_set.len();
    let transposed: Vec<Vec<f64>> = (0..n).map(|c| (0..n).map(|r| a[r][c]).collect()).collect();
    let rhs: Vec<f64> = col_set.iter().map(|&c| lp.costs[c]).collect();
    let Some(lambda_s) = solve_square(transposed, rhs) else {
        return false;
    };
    if lambda_s.iter().any(|&l| l < -TOL) {
        return false;
    }
    (0..lp.num_cols()).all(|c| {
        let priced: f64 = row_set
            .iter()
            .zip(&lambda_s)
            .map(|(&r, l)| l * lp.coeffs[r][c])
            .sum();
        lp.costs[c] - priced >= -1e-9
    })
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn go(start: usize, n: usize, size: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            go(i + 1, n, size, current, out);
            current.pop();
        }
    }
    go(0, n, size, &mut current, &mut out);
    out
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let pivot_row = a[col].clone();
        for r in col + 1..n {
            let f = a[r][col] / pivot_row[col];
            if f == 0.0 {
                continue;
            }
            for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let tail: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - tail) / a[r][r];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_systems() {
        let x = solve_square(vec![vec![2.0, 1.0], vec![1.0, 3.0]], vec![3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-12 && (x[1] - 1.4).abs() < 1e-12);
        assert!(solve_square(vec![vec![1.0, 2.0], vec![2.0, 4.0]], vec![1.0, 1.0]).is_none());
        assert_eq!(subsets(4, 2).len(), 6);
    }

    #[test]
    fn tiny_program() {
        // min 2 y0 + y1 st y0 + y1 >= 1, y0 >= 1 ... as two rows
        let lp = BoundLp {
            lists: Vec::new(),
            pairs: vec![(0, 0), (0, 1)],
            coeffs: vec![vec![1.0, 1.0], vec![1.0, 0.0]],
            costs: vec![2.0, 1.0],
        };
        let lp = BoundLp {
            lists: (0..2)
                .map(|a| crate::model::ArmList::from_vec_unchecked(vec![a]))
                .collect(),
            ..lp
        };
        let best = enumerate_active_sets(&lp).unwrap();
        assert!((best.objective - 2.0).abs() < 1e-12);
        assert!(best.certified);
    }
}

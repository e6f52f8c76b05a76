//! Minimum-cost rectangular linear assignment.
//!
//! The solver is the shortest-augmenting-path form of the Hungarian method
//! (O(n² m) for an n×m matrix with n ≤ m). Among all optimal assignments the
//! lexicographically smallest pair list is returned, so results do not
//! depend on the order in which the potentials happen to settle.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// `(row, column)` pairs sorted by row.
    pub pairs: Vec<(usize, usize)>,
    pub total_cost: f64,
}

/// Solves the assignment problem for a dense `rows × cols` cost matrix,
/// returning `min(rows, cols)` pairs with minimal total cost.
///
/// An empty matrix (no rows or no columns) yields an empty assignment.
pub fn solve_assignment(cost: &[Vec<f64>]) -> Result<Assignment> {
    let rows = cost.len();
    let cols = cost.first().map_or(0, Vec::len);
    for (r, row) in cost.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::InvalidCost(format!(
                "row {r} has {} entries, expected {cols}",
                row.len()
            )));
        }
        if let Some(c) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidCost(format!("entry ({r}, {c}) is not finite")));
        }
    }
    if rows == 0 || cols == 0 {
        return Ok(Assignment {
            pairs: Vec::new(),
            total_cost: 0.0,
        });
    }

    let all_rows: Vec<usize> = (0..rows).collect();
    let all_cols: Vec<usize> = (0..cols).collect();
    let optimum = min_cost(cost, &all_rows, &all_cols);
    let target = rows.min(cols);
    let tol = 1e-9 * optimum.abs().max(1.0);

    // Fix rows in ascending order, each to the smallest column (or, when
    // rows outnumber columns, to "unassigned" as a last resort) that still
    // admits an optimal completion.
    let mut pairs = Vec::with_capacity(target);
    let mut fixed_cost = 0.0;
    let mut free_cols = all_cols;
    for r in 0..rows {
        let rest: Vec<usize> = ((r + 1)..rows).collect();
        let mut chosen = None;
        if pairs.len() < target {
            let need = target - pairs.len() - 1;
            for (k, &c) in free_cols.iter().enumerate() {
                let remaining: Vec<usize> = free_cols
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != k)
                    .map(|(_, &c)| c)
                    .collect();
                if rest.len().min(remaining.len()) != need {
                    continue;
                }
                let completion = fixed_cost + cost[r][c] + min_cost(cost, &rest, &remaining);
                if completion <= optimum + tol {
                    chosen = Some(k);
                    break;
                }
            }
        }
        if let Some(k) = chosen {
            let c = free_cols.remove(k);
            fixed_cost += cost[r][c];
            pairs.push((r, c));
        }
        if pairs.len() == target {
            break;
        }
    }

    let total_cost = pairs.iter().map(|&(r, c)| cost[r][c]).sum();
    Ok(Assignment { pairs, total_cost })
}

/// Optimal cost of assigning `min(|rows|, |cols|)` pairs within the given
/// sub-matrix.
fn min_cost(cost: &[Vec<f64>], rows: &[usize], cols: &[usize]) -> f64 {
    if rows.is_empty() || cols.is_empty() {
        return 0.0;
    }
    let matched = if rows.len() <= cols.len() {
        hungarian(rows.len(), cols.len(), |i, j| cost[rows[i]][cols[j]])
    } else {
        hungarian(cols.len(), rows.len(), |i, j| cost[rows[j]][cols[i]])
    };
    matched.1
}

/// Hungarian method for `n ≤ m`. Returns the column matched to each row and
/// the total cost.
fn hungarian(n: usize, m: usize, a: impl Fn(usize, usize) -> f64) -> (Vec<usize>, f64) {
    debug_assert!(n <= m);
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    // p[j]: row (1-based) matched to column j; 0 = free.
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = a(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![0usize; n];
    for j in 1..=m {
        if p[j] > 0 {
            row_to_col[p[j] - 1] = j - 1;
        }
    }
    let total = row_to_col
        .iter()
        .enumerate()
        .map(|(i, &j)| a(i, j))
        .sum();
    (row_to_col, total)
}

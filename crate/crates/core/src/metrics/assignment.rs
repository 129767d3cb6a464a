//! Minimum-cost one-to-one assignment (Hungarian algorithm with
//! potentials, O(n³)).

use crate::error::Error;
use crate::Result;

/// Solve the rectangular assignment problem on a row-major cost matrix.
///
/// Returns `min(rows, cols)` pairs `(row, col)` minimizing the total cost,
/// sorted by row. Rectangular inputs are padded internally with zero-cost
/// dummies, which leaves the optimal choice over the real entries intact.
pub fn hungarian(cost: &[Vec<f64>]) -> Result<Vec<(usize, usize)>> {
    let rows = cost.len();
    if rows == 0 {
        return Ok(Vec::new());
    }
    let cols = cost[0].len();
    if cost.iter().any(|r| r.len() != cols) {
        return Err(Error::invalid("cost matrix rows have unequal lengths"));
    }
    if cols == 0 {
        return Ok(Vec::new());
    }
    if cost.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::invalid("assignment costs must be finite"));
    }

    let n = rows.max(cols);
    let at = |i: usize, j: usize| -> f64 {
        if i < rows && j < cols {
            cost[i][j]
        } else {
            0.0
        }
    };

    // shortest-augmenting-path formulation over 1-based potentials
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut matched_row = vec![0usize; n + 1]; // matched_row[col] = row
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        matched_row[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = at(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut pairs: Vec<(usize, usize)> = (1..=n)
        .filter_map(|j| {
            let i = matched_row[j];
            if i >= 1 && i - 1 < rows && j - 1 < cols {
                Some((i - 1, j - 1))
            } else {
                None
            }
        })
        .collect();
    pairs.sort_unstable();
    Ok(pairs)
}

/// Total cost of an assignment on a cost matrix, summed in row order.
pub fn assignment_cost(cost: &[Vec<f64>], pairs: &[(usize, usize)]) -> f64 {
    pairs.iter().map(|&(i, j)| cost[i][j]).sum()
}

//! Exact balanced transportation problem via the transportation simplex
//! (northwest-corner start, MODI potentials).

use crate::error::{Error, Result};

const EPS: f64 = 1e-12;

/// Minimum of `Σ cost[i][j]·x[i][j]` over plans with row sums `supply` and
/// column sums `demand`. Both sides must carry the same total mass.
pub fn transport_cost(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> Result<f64> {
    let (m, n) = (supply.len(), demand.len());
    if m == 0 || n == 0 {
        return Err(Error::Transport("empty support".into()));
    }
    if cost.len() != m || cost.iter().any(|r| r.len() != n) {
        return Err(Error::Transport(format!("cost matrix is not {m}x{n}")));
    }
    if supply
        .iter()
        .chain(demand)
        .any(|&x| !x.is_finite() || x < 0.0)
    {
        return Err(Error::Transport(
            "masses must be finite and non-negative".into(),
        ));
    }
    let (ts, td): (f64, f64) = (supply.iter().sum(), demand.iter().sum());
    if (ts - td).abs() > 1e-9 * ts.max(td).max(1.0) {
        return Err(Error::Transport(format!("unbalanced masses {ts} vs {td}")));
    }

    // northwest corner: exactly m + n - 1 basic cells forming a spanning tree
    let mut flow = vec![vec![0.0; n]; m];
    let mut basic = vec![vec![false; n]; m];
    let (mut a, mut b) = (supply.to_vec(), demand.to_vec());
    let (mut i, mut j) = (0, 0);
    loop {
        basic[i][j] = true;
        if i == m - 1 && j == n - 1 {
            flow[i][j] = a[i].max(b[j]).max(0.0);
            break;
        }
        let x = a[i].min(b[j]);
        flow[i][j] = x;
        a[i] -= x;
        b[j] -= x;
        if (a[i] <= b[j] && i < m - 1) || j == n - 1 {
            i += 1;
        } else {
            j += 1;
        }
    }

    let max_iter = 1000 * (m + n);
    for _ in 0..max_iter {
        let (pu, pv) = potentials(&basic, cost);
        let mut entering = None;
        let mut best = -EPS;
        for (r, row) in cost.iter().enumerate() {
            for (c, &cij) in row.iter().enumerate() {
                if basic[r][c] {
                    continue;
                }
                let d = cij - pu[r] - pv[c];
                if d < best {
                    best = d;
                    entering = Some((r, c));
                }
            }
        }
        let Some((er, ec)) = entering else {
            return Ok(total(&flow, cost));
        };
        let cycle = tree_path(&basic, ec, er)
            .ok_or_else(|| Error::Transport("basis is not a spanning tree".into()))?;
        // cycle[0] is adjacent to column ec and takes the minus sign
        let (mut theta, mut leave) = (f64::INFINITY, cycle[0]);
        for &(r, c) in cycle.iter().step_by(2) {
            if flow[r][c] < theta {
                theta = flow[r][c];
                leave = (r, c);
            }
        }
        for (k, &(r, c)) in cycle.iter().enumerate() {
            if k % 2 == 0 {
                flow[r][c] -= theta;
            } else {
                flow[r][c] += theta;
            }
        }
        flow[er][ec] = theta;
        basic[er][ec] = true;
        basic[leave.0][leave.1] = false;
        flow[leave.0][leave.1] = 0.0;
    }
    Err(Error::Transport(format!(
        "no optimum after {max_iter} pivots"
    )))
}

fn total(flow: &[Vec<f64>], cost: &[Vec<f64>]) -> f64 {
    flow.iter()
        .zip(cost)
        .flat_map(|(f, c)| f.iter().zip(c).map(|(x, y)| x * y))
        .sum()
}

/// Row and column potentials with `u[i] + v[j] = cost[i][j]` on basic cells.
fn potentials(basic: &[Vec<bool>], cost: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let (m, n) = (basic.len(), basic[0].len());
    let mut pu = vec![f64::NAN; m];
    let mut pv = vec![f64::NAN; n];
    pu[0] = 0.0;
    // node ids: rows 0..m, columns m..m+n
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        if x < m {
            for c in 0..n {
                if basic[x][c] && pv[c].is_nan() {
                    pv[c] = cost[x][c] - pu[x];
                    stack.push(m + c);
                }
            }
        } else {
            let c = x - m;
            for r in 0..m {
                if basic[r][c] && pu[r].is_nan() {
                    pu[r] = cost[r][c] - pv[c];
                    stack.push(r);
                }
            }
        }
    }
    (pu, pv)
}

/// Basic cells on the tree path from column `col` to row `row`.
fn tree_path(basic: &[Vec<bool>], col: usize, row: usize) -> Option<Vec<(usize, usize)>> {
    let (m, n) = (basic.len(), basic[0].len());
    let start = m + col;
    let mut parent = vec![usize::MAX; m + n];
    parent[start] = start;
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        if x == row {
            break;
        }
        let next: Vec<usize> = if x < m {
            (0..n).filter(|&c| basic[x][c]).map(|c| m + c).collect()
        } else {
            (0..m).filter(|&r| basic[r][x - m]).collect()
        };
        for y in next {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    if parent[row] == usize::MAX {
        return None;
    }
    let mut cells = Vec::new();
    let mut x = row;
    while x != start {
        let p = parent[x];
        let cell = if x < m { (x, p - m) } else { (p, x - m) };
        cells.push(cell);
        x = p;
    }
    cells.reverse();
    Some(cells)
}

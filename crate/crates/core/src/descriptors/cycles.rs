use crate::error::{Error, Result};
use crate::graph::Graph;

/// Number of simple cycles of length `k` in `g`, for `3 <= k <= 8`.
///
/// Each cycle is enumerated once from its smallest vertex, in the direction
/// where the second vertex is smaller than the last.
pub fn cycle_count(g: &Graph, k: usize) -> Result<u64> {
    if !(3..=8).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "cycle length {k} outside 3..=8"
        )));
    }
    fn extend(g: &Graph, k: usize, path: &mut Vec<usize>, on_path: &mut [bool]) -> u64 {
        let start = path[0];
        let last = *path.last().unwrap();
        if path.len() == k {
            return u64::from(g.has_edge(last, start) && path[1] < last);
        }
        let mut found = 0;
        for &y in g.neighbors(last) {
            if y <= start || on_path[y] {
                continue;
            }
            on_path[y] = true;
            path.push(y);
            found += extend(g, k, path, on_path);
            path.pop();
            on_path[y] = false;
        }
        found
    }
    let mut on_path = vec![false; g.num_nodes()];
    let mut path = Vec::with_capacity(k);
    let mut total = 0;
    for s in 0..g.num_nodes() {
        on_path[s] = true;
        path.push(s);
        total += extend(g, k, &mut path, &mut on_path);
        path.pop();
        on_path[s] = false;
    }
    Ok(total)
}

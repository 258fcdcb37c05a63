use super::Graph;
use crate::error::{Error, Result};

/// Largest graph the brute-force isomorphism search accepts.
pub const ISO_NODE_LIMIT: usize = 12;

/// Decides ordinary graph isomorphism for graphs of at most
/// [`ISO_NODE_LIMIT`] nodes.
///
/// Rejects early on node/edge counts and sorted degree sequences, then runs a
/// backtracking search over degree-compatible candidates, checking adjacency
/// against every already-mapped node.
pub fn is_isomorphic_small(a: &Graph, b: &Graph) -> Result<bool> {
    for g in [a, b] {
        if g.num_nodes() > ISO_NODE_LIMIT {
            return Err(Error::SizeLimit {
                nodes: g.num_nodes(),
                limit: ISO_NODE_LIMIT,
            });
        }
    }
    if a.num_nodes() != b.num_nodes() || a.num_edges() != b.num_edges() {
        return Ok(false);
    }
    if a.degree_sequence() != b.degree_sequence() {
        return Ok(false);
    }
    let n = a.num_nodes();
    if n == 0 {
        return Ok(true);
    }

    // Second-order signature: own degree plus sorted neighbor degrees.
    let signature = |g: &Graph, v: usize| {
        let mut nd: Vec<usize> = g.neighbors(v).iter().map(|&u| g.degree(u)).collect();
        nd.sort_unstable();
        (g.degree(v), nd)
    };
    let sig_a: Vec<_> = (0..n).map(|v| signature(a, v)).collect();
    let sig_b: Vec<_> = (0..n).map(|v| signature(b, v)).collect();
    {
        let mut sa = sig_a.clone();
        let mut sb = sig_b.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return Ok(false);
        }
    }

    // Visit `a` in BFS order from high-degree roots so each new node is
    // usually adjacent to an already-mapped one.
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let mut roots: Vec<usize> = (0..n).collect();
    roots.sort_by_key(|&v| std::cmp::Reverse(a.degree(v)));
    for r in roots {
        if placed[r] {
            continue;
        }
        placed[r] = true;
        let mut head = order.len();
        order.push(r);
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &y in a.neighbors(x) {
                if !placed[y] {
                    placed[y] = true;
                    order.push(y);
                }
            }
        }
    }

    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| sig_a[x] == sig_b[y]).collect())
        .collect();

    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(extend(
        a,
        b,
        &order,
        &candidates,
        0,
        &mut mapping,
        &mut used,
    ))
}

fn extend(
    a: &Graph,
    b: &Graph,
    order: &[usize],
    candidates: &[Vec<usize>],
    depth: usize,
    mapping: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let x = order[depth];
    'cand: for &y in &candidates[x] {
        if used[y] {
            continue;
        }
        for &prev in &order[..depth] {
            if a.has_edge(x, prev) != b.has_edge(y, mapping[prev]) {
                continue 'cand;
            }
        }
        mapping[x] = y;
        used[y] = true;
        if extend(a, b, order, candidates, depth + 1, mapping, used) {
            return true;
        }
        used[y] = false;
        mapping[x] = usize::MAX;
    }
    false
}

//! Named graphs and seeded random graphs with planted or forbidden cycles.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{edge_key, Graph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedGraphSpec {
    Cycle(usize),
    Complete(usize),
    Path(usize),
    /// Star with the given number of leaves; the center is node 0.
    Star(usize),
    /// 4x4 rook's graph, srg(16, 6, 2, 2).
    Rook4x4,
    /// Cayley graph of Z4 x Z4 with connection set {±(1,0), ±(0,1), ±(1,1)}.
    Shrikhande,
    /// `[2·C3, C6]`.
    TwoTrianglesVsC6Pair,
    /// `[positive, negative]`: random graphs of equal size, the first with
    /// exactly one planted `cycle_len`-cycle and the second with none.
    FourCyclePair {
        cycle_len: usize,
        seed: u64,
    },
}

pub fn generate_named(spec: NamedGraphSpec) -> Result<Vec<Graph>> {
    use NamedGraphSpec::*;
    let single = |g: Graph| Ok(vec![g]);
    match spec {
        Cycle(n) => {
            if n < 3 {
                return Err(Error::InvalidParameter(format!(
                    "cycle needs n >= 3, got {n}"
                )));
            }
            single(cycle(n))
        }
        Complete(n) => {
            if n == 0 {
                return Err(Error::InvalidParameter(
                    "complete graph needs n >= 1".into(),
                ));
            }
            let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            single(Graph::new(n, edges)?)
        }
        Path(n) => {
            if n == 0 {
                return Err(Error::InvalidParameter("path needs n >= 1".into()));
            }
            single(Graph::new(n, (1..n).map(|i| (i - 1, i)))?)
        }
        Star(leaves) => {
            if leaves == 0 {
                return Err(Error::InvalidParameter(
                    "star needs at least one leaf".into(),
                ));
            }
            single(Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i)))?)
        }
        Rook4x4 => single(rook_4x4()),
        Shrikhande => single(shrikhande()),
        TwoTrianglesVsC6Pair => Ok(vec![cycle(3).disjoint_union(&cycle(3)), cycle(6)]),
        FourCyclePair { cycle_len, seed } => {
            check_cycle_len(cycle_len)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (n, m) = (20, 30);
            Ok(vec![
                planted_cycle_graph(cycle_len, true, n, m, &mut rng)?,
                planted_cycle_graph(cycle_len, false, n, m, &mut rng)?,
            ])
        }
    }
}

fn check_cycle_len(k: usize) -> Result<()> {
    if !(3..=8).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "cycle length {k} outside 3..=8"
        )));
    }
    Ok(())
}

fn cycle(n: usize) -> Graph {
    let set = (0..n).map(|i| edge_key(i, (i + 1) % n)).collect();
    Graph::from_edge_set(n, set)
}

fn rook_4x4() -> Graph {
    let mut set = BTreeSet::new();
    for a in 0..16 {
        for b in a + 1..16 {
            if a / 4 == b / 4 || a % 4 == b % 4 {
                set.insert((a, b));
            }
        }
    }
    Graph::from_edge_set(16, set)
}

fn shrikhande() -> Graph {
    const STEPS: [(i32, i32); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)];
    let id = |x: i32, y: i32| (x.rem_euclid(4) * 4 + y.rem_euclid(4)) as usize;
    let mut set = BTreeSet::new();
    for x in 0..4 {
        for y in 0..4 {
            for (dx, dy) in STEPS {
                set.insert(edge_key(id(x, y), id(x + dx, y + dy)));
            }
        }
    }
    Graph::from_edge_set(16, set)
}

/// True when `adj` holds a simple path with exactly `len` edges from `from` to `to`.
fn has_path_of_length(adj: &[Vec<usize>], from: usize, to: usize, len: usize) -> bool {
    fn dfs(adj: &[Vec<usize>], x: usize, to: usize, left: usize, on_path: &mut [bool]) -> bool {
        if left == 0 {
            return x == to;
        }
        for &y in &adj[x] {
            if on_path[y] || (y == to && left != 1) {
                continue;
            }
            on_path[y] = true;
            let hit = dfs(adj, y, to, left - 1, on_path);
            on_path[y] = false;
            if hit {
                return true;
            }
        }
        false
    }
    let mut on_path = vec![false; adj.len()];
    on_path[from] = true;
    dfs(adj, from, to, len, &mut on_path)
}

/// Random graph on `num_nodes` nodes grown edge by edge up to `num_edges`
/// edges, never closing a `cycle_len`-cycle. With `plant` set, one
/// `cycle_len`-cycle on random nodes is laid down first, so the result holds
/// exactly one such cycle; otherwise it holds none.
pub fn planted_cycle_graph<R: Rng>(
    cycle_len: usize,
    plant: bool,
    num_nodes: usize,
    num_edges: usize,
    rng: &mut R,
) -> Result<Graph> {
    check_cycle_len(cycle_len)?;
    if num_nodes < cycle_len {
        return Err(Error::InvalidParameter(format!(
            "{num_nodes} nodes cannot hold a {cycle_len}-cycle"
        )));
    }
    let mut adj = vec![Vec::new(); num_nodes];
    let mut set = BTreeSet::new();
    if plant {
        let mut nodes: Vec<usize> = (0..num_nodes).collect();
        nodes.shuffle(rng);
        let ring = &nodes[..cycle_len];
        for i in 0..cycle_len {
            let (u, v) = (ring[i], ring[(i + 1) % cycle_len]);
            set.insert(edge_key(u, v));
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let max_attempts = 200 * num_edges.max(1);
    let mut attempts = 0;
    while set.len() < num_edges && attempts < max_attempts {
        attempts += 1;
        let u = rng.gen_range(0..num_nodes);
        let v = rng.gen_range(0..num_nodes);
        if u == v || set.contains(&edge_key(u, v)) {
            continue;
        }
        if has_path_of_length(&adj, u, v, cycle_len - 1) {
            continue;
        }
        set.insert(edge_key(u, v));
        adj[u].push(v);
        adj[v].push(u);
    }
    Ok(Graph::from_edge_set(num_nodes, set))
}

/// Erdős–Rényi G(n, p) graph.
pub fn erdos_renyi<R: Rng>(num_nodes: usize, p: f64, rng: &mut R) -> Graph {
    let mut set = BTreeSet::new();
    for u in 0..num_nodes {
        for v in u + 1..num_nodes {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                set.insert((u, v));
            }
        }
    }
    Graph::from_edge_set(num_nodes, set)
}

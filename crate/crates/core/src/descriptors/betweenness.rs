use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Graph, Subgraph};

/// BFS distances and shortest-path counts from every source.
fn all_pairs_sigma(g: &Graph) -> (Vec<Vec<u32>>, Vec<Vec<f64>>) {
    let n = g.num_nodes();
    let mut dist = vec![vec![u32::MAX; n]; n];
    let mut sigma = vec![vec![0.0; n]; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        let (d, sg) = (&mut dist[s], &mut sigma[s]);
        d[s] = 0;
        sg[s] = 1.0;
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if d[y] == u32::MAX {
                    d[y] = d[x] + 1;
                    queue.push_back(y);
                }
                if d[y] == d[x] + 1 {
                    sg[y] += sg[x];
                }
            }
        }
    }
    (dist, sigma)
}

/// Sum over unordered node pairs `{x, y}` of the fraction of shortest
/// `x`–`y` paths in `s` that use the edge `(v, u)`. The pair `{v, u}` itself
/// counts. `v` and `u` are parent ids.
pub fn edge_betweenness_descriptor(s: &Subgraph, v: usize, u: usize) -> Result<f64> {
    let missing = || Error::NotAnEdge { u: v, v: u };
    let a = s.local_index(v).ok_or_else(missing)?;
    let b = s.local_index(u).ok_or_else(missing)?;
    let g = s.local();
    if !g.has_edge(a, b) {
        return Err(missing());
    }
    let n = g.num_nodes();
    let (dist, sigma) = all_pairs_sigma(g);
    if dist.iter().flatten().any(|&d| d == u32::MAX) {
        return Err(Error::Disconnected);
    }
    let through = |x: usize, p: usize, q: usize, y: usize| {
        if dist[x][p] + 1 + dist[q][y] == dist[x][y] {
            sigma[x][p] * sigma[q][y]
        } else {
            0.0
        }
    };
    let mut total = 0.0;
    for x in 0..n {
        for y in x + 1..n {
            total += (through(x, a, b, y) + through(x, b, a, y)) / sigma[x][y];
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_named, NamedGraphSpec};

    fn whole(g: &Graph) -> Subgraph {
        let all: Vec<usize> = (0..g.num_nodes()).collect();
        g.induced_subgraph(&all).unwrap()
    }

    #[test]
    fn small_union_graphs() {
        let p3 = whole(&generate_named(NamedGraphSpec::Path(3)).unwrap()[0]);
        assert!((edge_betweenness_descriptor(&p3, 0, 1).unwrap() - 2.0).abs() < 1e-12);
        let k3 = whole(&generate_named(NamedGraphSpec::Complete(3)).unwrap()[0]);
        assert!((edge_betweenness_descriptor(&k3, 1, 2).unwrap() - 1.0).abs() < 1e-12);
        let star = whole(&generate_named(NamedGraphSpec::Star(3)).unwrap()[0]);
        assert!((edge_betweenness_descriptor(&star, 0, 2).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn c4_splits_opposite_pairs() {
        // own pair 1, two adjacent-to-one-endpoint pairs at 1/2 each
        let c4 = whole(&generate_named(NamedGraphSpec::Cycle(4)).unwrap()[0]);
        assert!((edge_betweenness_descriptor(&c4, 0, 1).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn absent_edge() {
        let p3 = whole(&generate_named(NamedGraphSpec::Path(3)).unwrap()[0]);
        assert!(edge_betweenness_descriptor(&p3, 0, 2).is_err());
        assert!(edge_betweenness_descriptor(&p3, 0, 7).is_err());
    }
}

use super::transport::transport_cost;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_RICCI_ALPHA: f64 = 0.5;

/// Lazy random-walk measure: `alpha` on `x`, the rest spread evenly over
/// its neighbors.
fn lazy_walk(g: &Graph, x: usize, alpha: f64) -> (Vec<usize>, Vec<f64>) {
    let nb = g.neighbors(x);
    let mut support = Vec::with_capacity(nb.len() + 1);
    let mut mass = Vec::with_capacity(nb.len() + 1);
    support.push(x);
    mass.push(alpha);
    let share = (1.0 - alpha) / nb.len() as f64;
    for &y in nb {
        support.push(y);
        mass.push(share);
    }
    (support, mass)
}

/// Ollivier–Ricci curvature `1 − W(μ_v, μ_u)` of the edge `(v, u)`, with
/// ground distances taken in the whole graph.
pub fn ricci_curvature(g: &Graph, v: usize, u: usize, alpha: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} outside [0, 1)"
        )));
    }
    g.check_edge(v, u)?;
    let (sv, mv) = lazy_walk(g, v, alpha);
    let (su, mu) = lazy_walk(g, u, alpha);
    let cost: Vec<Vec<f64>> = sv
        .iter()
        .map(|&x| {
            let d = g.bfs_distances(x);
            su.iter()
                .map(|&y| d[y].map_or(f64::INFINITY, |k| k as f64))
                .collect()
        })
        .collect();
    Ok(1.0 - transport_cost(&mv, &mu, &cost)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_named, NamedGraphSpec};

    #[test]
    fn k3_edge() {
        let k3 = generate_named(NamedGraphSpec::Complete(3))
            .unwrap()
            .remove(0);
        assert!((ricci_curvature(&k3, 0, 1, 0.5).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn k2_edge_needs_no_transport() {
        let k2 = Graph::new(2, [(0, 1)]).unwrap();
        assert!((ricci_curvature(&k2, 0, 1, 0.5).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn c6_edge() {
        // optimal cost 1, e.g. v→u .5, (v−1)→v .25, u→(u+1) .25
        let c6 = generate_named(NamedGraphSpec::Cycle(6)).unwrap().remove(0);
        let k = ricci_curvature(&c6, 0, 1, 0.5).unwrap();
        assert!(k.abs() < 1e-12, "{k}");
    }

    #[test]
    fn rejects_bad_input() {
        let k3 = generate_named(NamedGraphSpec::Complete(3))
            .unwrap()
            .remove(0);
        assert!(ricci_curvature(&k3, 0, 1, 1.0).is_err());
        assert!(ricci_curvature(&Graph::new(3, [(0, 1)]).unwrap(), 0, 2, 0.5).is_err());
    }
}

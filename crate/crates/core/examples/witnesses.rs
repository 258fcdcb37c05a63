//! Searches small random graphs for the witness pairs used by the acceptance
//! run and writes them as JSON fixtures.
//!
//! ```text
//! cargo run --release --example witnesses -- crates/core/tests/fixtures
//! ```

use std::fs;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use union_subgraph::descriptors::{
    count_ne_descriptor, edge_betweenness_descriptor, edge_descriptor, DescriptorKind,
    EncodingKind, DEFAULT_COUNT_NE_LAMBDA,
};
use union_subgraph::graph::{erdos_renyi, is_isomorphic_small, Graph};
use union_subgraph::substructure::{
    classify_edge_types, overlap_isomorphic, union_isomorphic, union_subgraph,
};
use union_subgraph::Result;

const SEARCH_SEED: u64 = 7;

fn graph_value(g: &Graph) -> Value {
    serde_json::from_str(&g.to_json()).expect("graph json")
}

fn svd(g: &Graph, v: usize, u: usize) -> Result<f64> {
    edge_descriptor(g, v, u, DescriptorKind::UnionPathSvd, EncodingKind::SvdSum)
}

/// A graph on `n` nodes in which every node touches 0 or 1, so the union
/// subgraph of (0, 1) is the whole graph.
fn anchored<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = vec![(0, 1)];
    for x in 2..n {
        match rng.gen_range(0..3) {
            0 => edges.push((0, x)),
            1 => edges.push((1, x)),
            _ => edges.extend([(0, x), (1, x)]),
        }
    }
    for x in 2..n {
        for y in x + 1..n {
            if rng.gen_bool(p) {
                edges.push((x, y));
            }
        }
    }
    Graph::new(n, edges).expect("valid edges")
}

/// Two anchored graphs one E4 edge apart: betweenness of (0, 1) agrees,
/// the path-matrix coefficient does not.
fn size_awareness(rng: &mut ChaCha8Rng) -> Result<Value> {
    loop {
        let g = anchored(rng.gen_range(4..=6), 0.3, rng);
        let types = classify_edge_types(&g, 0, 1)?;
        let Some(&(x, y)) = types.e4.iter().next() else {
            continue;
        };
        let h = g.without_edge(x, y)?;
        let b1 = edge_betweenness_descriptor(&union_subgraph(&g, 0, 1)?, 0, 1)?;
        let b2 = edge_betweenness_descriptor(&union_subgraph(&h, 0, 1)?, 0, 1)?;
        if b1 == b2 && (svd(&g, 0, 1)? - svd(&h, 0, 1)?).abs() > 1e-6 {
            return Ok(json!({
                "first": graph_value(&h),
                "second": graph_value(&g),
                "edge": [0, 1],
                "added": [x, y],
            }));
        }
    }
}

/// Two non-isomorphic union subgraphs with equal node and edge counts.
fn connectivity_awareness(rng: &mut ChaCha8Rng) -> Result<Value> {
    loop {
        let n = rng.gen_range(5..=6);
        let g = anchored(n, 0.4, rng);
        let h = anchored(n, 0.4, rng);
        if g.num_edges() != h.num_edges() || is_isomorphic_small(&g, &h)? {
            continue;
        }
        let c1 = count_ne_descriptor(&union_subgraph(&g, 0, 1)?, DEFAULT_COUNT_NE_LAMBDA)?;
        let c2 = count_ne_descriptor(&union_subgraph(&h, 0, 1)?, DEFAULT_COUNT_NE_LAMBDA)?;
        if c1 == c2 && (svd(&g, 0, 1)? - svd(&h, 0, 1)?).abs() > 1e-6 {
            return Ok(json!({
                "first": graph_value(&g),
                "second": graph_value(&h),
                "edge": [0, 1],
            }));
        }
    }
}

/// Nodes whose overlap neighborhoods match but union neighborhoods do not.
fn overlap_not_union(rng: &mut ChaCha8Rng) -> Result<Value> {
    loop {
        let n1 = rng.gen_range(4..=7);
        let n2 = rng.gen_range(4..=7);
        let g1 = erdos_renyi(n1, 0.45, rng);
        let g2 = erdos_renyi(n2, 0.45, rng);
        for i in 0..n1 {
            for j in 0..n2 {
                if g1.degree(i) == 0 || g1.degree(i) != g2.degree(j) {
                    continue;
                }
                if overlap_isomorphic(&g1, i, &g2, j)? && !union_isomorphic(&g1, i, &g2, j)? {
                    return Ok(json!({
                        "first": graph_value(&g1),
                        "second": graph_value(&g2),
                        "nodes": [i, j],
                    }));
                }
            }
        }
    }
}

/// An 8-node anchored graph where removing any typed edge raises a(0, 1),
/// removing any other node lowers it, and one edge of each type gives
/// increasing raises from E1 to E4.
fn case_study(rng: &mut ChaCha8Rng) -> Result<Value> {
    loop {
        let g = anchored(8, 0.35, rng);
        let types = classify_edge_types(&g, 0, 1)?;
        let buckets = [&types.e1, &types.e2, &types.e3, &types.e4];
        if buckets.iter().any(|b| b.is_empty()) {
            continue;
        }
        let base = svd(&g, 0, 1)?;
        let mut rises = Vec::new();
        let mut ok = true;
        for bucket in buckets {
            let mut r = Vec::new();
            for &(x, y) in bucket.iter() {
                let d = svd(&g.without_edge(x, y)?, 0, 1)? - base;
                ok &= d > 1e-9;
                r.push(((x, y), d));
            }
            rises.push(r);
        }
        for x in 2..8 {
            ok &= svd(&g.without_node(x)?, 0, 1)? < base - 1e-9;
        }
        if !ok {
            continue;
        }
        // Smallest rise in E1, then the next edge of each type that beats it.
        let mut picks = Vec::new();
        let mut floor = f64::NEG_INFINITY;
        for r in &rises {
            let best = r
                .iter()
                .filter(|(_, d)| *d > floor + 1e-9)
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some(&(e, d)) => {
                    picks.push(e);
                    floor = d;
                }
                None => break,
            }
        }
        if picks.len() == 4 {
            return Ok(json!({
                "graph": graph_value(&g),
                "edge": [0, 1],
                "deletions": picks.iter().map(|&(x, y)| [x, y]).collect::<Vec<_>>(),
            }));
        }
    }
}

fn main() -> Result<()> {
    let dir: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "crates/core/tests/fixtures".into())
        .into();
    fs::create_dir_all(&dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
    let fixtures = [
        ("size_awareness.json", size_awareness(&mut rng)?),
        (
            "connectivity_awareness.json",
            connectivity_awareness(&mut rng)?,
        ),
        ("overlap_not_union.json", overlap_not_union(&mut rng)?),
        ("case_study.json", case_study(&mut rng)?),
    ];
    for (name, value) in fixtures {
        let path = dir.join(name);
        fs::write(&path, serde_json::to_string_pretty(&value)? + "\n")?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use union_subgraph::descriptors::{coefficient_table, DescriptorKind, EncodingKind};
use union_subgraph::graph::{erdos_renyi, parse_graph, Graph};
use union_subgraph::neural::{
    grad_check, grad_check_input, grad_check_layer, AttentionBias, DenseTensor, GraphContext,
    Layer, MpLayer, Parameters, SoftmaxAxis, Trans,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) with `n` drawn from `nodes`.
pub fn random_graph(rng: &mut ChaCha8Rng, nodes: (usize, usize), p: f64) -> Graph {
    let n = rng.gen_range(nodes.0..=nodes.1);
    erdos_renyi(n, p, rng)
}

pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn fixture(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).expect("fixture json")
}

pub fn fixture_graph(v: &Value) -> Graph {
    parse_graph(&v.to_string()).expect("fixture graph")
}

pub fn pair(v: &Value) -> (usize, usize) {
    (
        v[0].as_u64().unwrap() as usize,
        v[1].as_u64().unwrap() as usize,
    )
}

/// Nuclear norm of a square matrix from nalgebra's SVD.
pub fn nuclear_norm_oracle(m: &[f64], n: usize) -> f64 {
    nalgebra::DMatrix::from_row_slice(n, n, m)
        .singular_values()
        .iter()
        .sum()
}

/// Exact `W1` between integer masses by successive shortest paths on the
/// complete bipartite network.
pub fn min_cost_flow(supply: &[i64], demand: &[i64], cost: &[Vec<i64>]) -> i64 {
    assert_eq!(supply.iter().sum::<i64>(), demand.iter().sum::<i64>());
    let (a, b) = (supply.len(), demand.len());
    // flow[i][j] on arc i -> j
    let mut flow = vec![vec![0i64; b]; a];
    let mut left: Vec<i64> = supply.to_vec();
    let mut need: Vec<i64> = demand.to_vec();
    let nodes = a + b;
    loop {
        // Bellman-Ford from all sources with remaining supply.
        let mut dist = vec![i64::MAX; nodes];
        let mut prev = vec![usize::MAX; nodes];
        for i in 0..a {
            if left[i] > 0 {
                dist[i] = 0;
            }
        }
        if dist.iter().all(|&d| d == i64::MAX) {
            break;
        }
        for _ in 0..nodes {
            let mut changed = false;
            for i in 0..a {
                for j in 0..b {
                    if dist[i] != i64::MAX && dist[i] + cost[i][j] < dist[a + j] {
                        dist[a + j] = dist[i] + cost[i][j];
                        prev[a + j] = i;
                        changed = true;
                    }
                    if flow[i][j] > 0
                        && dist[a + j] != i64::MAX
                        && dist[a + j] - cost[i][j] < dist[i]
                    {
                        dist[i] = dist[a + j] - cost[i][j];
                        prev[i] = a + j;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let sink = (0..b)
            .filter(|&j| need[j] > 0 && dist[a + j] != i64::MAX)
            .min_by_key(|&j| dist[a + j])
            .expect("balanced problem stays feasible");
        let mut path = vec![a + sink];
        let mut x = a + sink;
        while prev[x] != usize::MAX {
            x = prev[x];
            path.push(x);
        }
        let src = *path.last().unwrap();
        let mut push = left[src].min(need[sink]);
        for w in path.windows(2) {
            let (to, from) = (w[0], w[1]);
            if from >= a {
                // backward arc: cancels flow on to -> from
                push = push.min(flow[to][from - a]);
            }
        }
        for w in path.windows(2) {
            let (to, from) = (w[0], w[1]);
            if from < a {
                flow[from][to - a] += push;
            } else {
                flow[to][from - a] -= push;
            }
        }
        left[src] -= push;
        need[sink] -= push;
    }
    (0..a)
        .flat_map(|i| (0..b).map(move |j| (i, j)))
        .map(|(i, j)| flow[i][j] * cost[i][j])
        .sum()
}

/// Ricci curvature of `(v, u)` for `alpha` in {0, 1/2} via integer masses.
pub fn ricci_oracle(g: &Graph, v: usize, u: usize, alpha_halves: i64) -> f64 {
    let (dv, du) = (g.degree(v) as i64, g.degree(u) as i64);
    let scale = 2 * dv * du;
    let measure = |x: usize, dx: i64| {
        let mut support = vec![x];
        let mut mass = vec![alpha_halves * dv * du];
        let rest = scale - alpha_halves * dv * du;
        for &y in g.neighbors(x) {
            support.push(y);
            mass.push(rest / dx);
        }
        (support, mass)
    };
    let (sv, mv) = measure(v, dv);
    let (su, mu) = measure(u, du);
    let cost: Vec<Vec<i64>> = sv
        .iter()
        .map(|&x| {
            let d = g.bfs_distances(x);
            su.iter()
                .map(|&y| d[y].expect("connected") as i64)
                .collect()
        })
        .collect();
    1.0 - min_cost_flow(&mv, &mu, &cost) as f64 / scale as f64
}

/// A connected random graph with coefficients and random features.
pub fn grad_fixture(seed: u64, width: usize) -> (GraphContext, DenseTensor, Vec<f64>) {
    let mut r = rng(seed);
    let g = loop {
        let g = random_graph(&mut r, (5, 8), 0.45);
        if g.is_connected() && g.num_edges() > 0 {
            break g;
        }
    };
    let table = coefficient_table(&g, DescriptorKind::UnionPathSvd, EncodingKind::SvdSum).unwrap();
    let ctx = GraphContext::new(&g, Some(&table)).unwrap();
    let data = (0..g.num_nodes() * width)
        .map(|_| r.gen_range(-1.0..1.0))
        .collect();
    let h = DenseTensor::new(g.num_nodes(), width, data).unwrap();
    let target = (0..width).map(|_| r.gen_range(-1.0..1.0)).collect();
    (ctx, h, target)
}

fn axis_of(seed: u64) -> SoftmaxAxis {
    if seed.is_multiple_of(2) {
        SoftmaxAxis::Receiver
    } else {
        SoftmaxAxis::Sender
    }
}

/// Worst parameter and input check of a layer.
fn layer_error<L: Layer>(layer: &L, ctx: &GraphContext, h: &DenseTensor, target: &[f64]) -> f64 {
    let p = grad_check_layer(layer, ctx, h, target).unwrap();
    let x = grad_check_input(layer, ctx, h, target).unwrap();
    p.max(x)
}

pub fn trans_error(seed: u64) -> f64 {
    let width = 4;
    let (ctx, _, _) = grad_fixture(seed, width);
    let mut r = rng(seed ^ 0x5eed);
    let trans = Trans::new(width, axis_of(seed), &mut r);
    let probe: Vec<f64> = (0..ctx.num_pairs() * width)
        .map(|_| r.gen_range(-1.0..1.0))
        .collect();
    let probe = DenseTensor::new(ctx.num_pairs(), width, probe).unwrap();
    grad_check(&trans.flatten(), |theta| {
        let mut t = trans.clone();
        t.assign(theta);
        let (w, cache) = t.forward(&ctx)?;
        let loss = w.data().iter().zip(probe.data()).map(|(a, b)| a * b).sum();
        Ok((loss, t.backward(&ctx, &cache, &probe).flatten()))
    })
    .unwrap()
}

pub fn union_layer_error(seed: u64) -> f64 {
    let width = 4;
    let (ctx, h, target) = grad_fixture(seed, width);
    let mut r = rng(seed ^ 0x1a7e);
    let mlp = union_subgraph::neural::Mlp::new(&[width, 6, width], &mut r).unwrap();
    let trans = Trans::new(width, axis_of(seed), &mut r);
    let layer = MpLayer::union(0.1, mlp, trans).unwrap();
    layer_error(&layer, &ctx, &h, &target)
}

pub fn plugin_error(seed: u64) -> f64 {
    let width = 4;
    let (ctx, h, target) = grad_fixture(seed, width);
    let mut r = rng(seed ^ 0x9c);
    let gcn = MpLayer::gcn(width, width, Some(axis_of(seed)), &mut r);
    let gin = MpLayer::gin(width, width, Some(axis_of(seed + 1)), &mut r);
    layer_error(&gcn, &ctx, &h, &target).max(layer_error(&gin, &ctx, &h, &target))
}

pub fn attention_error(seed: u64) -> f64 {
    let width = 4;
    let (ctx, h, _) = grad_fixture(seed, width);
    let mut r = rng(seed ^ 0xa7);
    let layer = AttentionBias::new(width, axis_of(seed), &mut r);
    let target: Vec<f64> = (0..ctx.num_nodes())
        .map(|_| r.gen_range(-1.0..1.0))
        .collect();
    layer_error(&layer, &ctx, &h, &target)
}

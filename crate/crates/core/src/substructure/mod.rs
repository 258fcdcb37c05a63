//! Per-edge local substructures and neighborhood isomorphism notions.
//!
//! For an edge `(v, u)` the closed neighborhoods `Ñ(v)` and `Ñ(u)` split
//! into the common set `C = Ñ(v) ∩ Ñ(u)` (which always holds `v` and `u`)
//! and the exclusive sets `X_v = Ñ(v) \ C`, `X_u = Ñ(u) \ C`.
//!
//! * union subgraph: induced on `Ñ(v) ∪ Ñ(u)`;
//! * union-minus subgraph: `S_v ∪ S_u`, i.e. the union subgraph without the
//!   `X_v × X_u` edges;
//! * overlap subgraph: `S_v ∩ S_u`, i.e. induced on `C`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_isomorphic_small, Edge, Graph, Subgraph};

/// Bound on `|Ñ(i)|` for the neighborhood isomorphism checks.
pub const NEIGHBORHOOD_LIMIT: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubstructureKind {
    Union,
    UnionMinus,
    Overlap,
}

impl SubstructureKind {
    pub fn extract(self, g: &Graph, v: usize, u: usize) -> Result<Subgraph> {
        match self {
            SubstructureKind::Union => union_subgraph(g, v, u),
            SubstructureKind::UnionMinus => union_minus_subgraph(g, v, u),
            SubstructureKind::Overlap => overlap_subgraph(g, v, u),
        }
    }
}

/// Common and exclusive closed neighbor sets of an edge.
struct Split {
    common: Vec<usize>,
    only_v: Vec<usize>,
    only_u: Vec<usize>,
}

impl Split {
    fn new(g: &Graph, v: usize, u: usize) -> Result<Self> {
        g.check_edge(v, u)?;
        let nv = g.closed_neighborhood(v)?;
        let nu = g.closed_neighborhood(u)?;
        let common: Vec<usize> = nv
            .iter()
            .copied()
            .filter(|x| nu.binary_search(x).is_ok())
            .collect();
        let only_v = nv
            .iter()
            .copied()
            .filter(|x| common.binary_search(x).is_err())
            .collect();
        let only_u = nu
            .iter()
            .copied()
            .filter(|x| common.binary_search(x).is_err())
            .collect();
        Ok(Split {
            common,
            only_v,
            only_u,
        })
    }

    fn all(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .common
            .iter()
            .chain(&self.only_v)
            .chain(&self.only_u)
            .copied()
            .collect();
        out.sort_unstable();
        out
    }
}

/// Induced subgraph on `Ñ(v) ∪ Ñ(u)` for an edge `(v, u)`.
pub fn union_subgraph(g: &Graph, v: usize, u: usize) -> Result<Subgraph> {
    let split = Split::new(g, v, u)?;
    g.induced_subgraph(&split.all())
}

/// `S_v ∩ S_u`: the subgraph induced on the common closed neighbors.
pub fn overlap_subgraph(g: &Graph, v: usize, u: usize) -> Result<Subgraph> {
    let split = Split::new(g, v, u)?;
    g.induced_subgraph(&split.common)
}

/// `S_v ∪ S_u`: the union subgraph minus edges between `X_v` and `X_u`.
pub fn union_minus_subgraph(g: &Graph, v: usize, u: usize) -> Result<Subgraph> {
    let split = Split::new(g, v, u)?;
    let union = g.induced_subgraph(&split.all())?;
    let ids = union.parent_ids();
    let cross = |a: usize, b: usize| {
        (split.only_v.binary_search(&a).is_ok() && split.only_u.binary_search(&b).is_ok())
            || (split.only_u.binary_search(&a).is_ok() && split.only_v.binary_search(&b).is_ok())
    };
    let kept: BTreeSet<Edge> = union
        .local()
        .edges()
        .iter()
        .copied()
        .filter(|&(i, j)| !cross(ids[i], ids[j]))
        .collect();
    let local = Graph::from_edge_set(ids.len(), kept);
    let local = match union.local().features() {
        Some(f) => local.with_features(f.to_vec())?,
        None => local,
    };
    Subgraph::new(local, ids.to_vec())
}

/// Union-subgraph edges grouped by the four neighbor-set products, in parent ids.
///
/// Edges touching `v` or `u` (including `(v, u)` itself) are reported as
/// `spokes` and never enter `e1..e4`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeTypePartition {
    /// common × common
    pub e1: BTreeSet<Edge>,
    /// common × exclusive
    pub e2: BTreeSet<Edge>,
    /// exclusive of `v` × exclusive of `u`
    pub e3: BTreeSet<Edge>,
    /// exclusive × exclusive, same side
    pub e4: BTreeSet<Edge>,
    pub spokes: BTreeSet<Edge>,
}

impl EdgeTypePartition {
    pub fn len(&self) -> usize {
        self.e1.len() + self.e2.len() + self.e3.len() + self.e4.len() + self.spokes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Common,
    OnlyV,
    OnlyU,
}

pub fn classify_edge_types(g: &Graph, v: usize, u: usize) -> Result<EdgeTypePartition> {
    let split = Split::new(g, v, u)?;
    let side = |x: usize| {
        if split.common.binary_search(&x).is_ok() {
            Side::Common
        } else if split.only_v.binary_search(&x).is_ok() {
            Side::OnlyV
        } else {
            Side::OnlyU
        }
    };
    let union = g.induced_subgraph(&split.all())?;
    let mut out = EdgeTypePartition::default();
    for e in union.parent_edges() {
        let (a, b) = e;
        if a == v || a == u || b == v || b == u {
            out.spokes.insert(e);
            continue;
        }
        let bucket = match (side(a), side(b)) {
            (Side::Common, Side::Common) => &mut out.e1,
            (Side::Common, _) | (_, Side::Common) => &mut out.e2,
            (Side::OnlyV, Side::OnlyU) | (Side::OnlyU, Side::OnlyV) => &mut out.e3,
            _ => &mut out.e4,
        };
        bucket.insert(e);
    }
    Ok(out)
}

/// Union isomorphism of the neighborhoods of `i` in `g1` and `j` in `g2`.
pub fn union_isomorphic(g1: &Graph, i: usize, g2: &Graph, j: usize) -> Result<bool> {
    neighborhood_isomorphic(g1, i, g2, j, SubstructureKind::Union)
}

/// Overlap isomorphism of the neighborhoods of `i` in `g1` and `j` in `g2`.
pub fn overlap_isomorphic(g1: &Graph, i: usize, g2: &Graph, j: usize) -> Result<bool> {
    neighborhood_isomorphic(g1, i, g2, j, SubstructureKind::Overlap)
}

/// Searches for a bijection `Ñ(i) → Ñ(j)` with `i ↦ j` such that every
/// neighbor `x ↦ y` has isomorphic `kind` substructures on `(i, x)` and
/// `(j, y)`.
///
/// The per-neighbor condition depends only on the image of that neighbor, so
/// the search enumerates injective assignments over a precomputed
/// compatibility table, pruning on degree profile.
pub fn neighborhood_isomorphic(
    g1: &Graph,
    i: usize,
    g2: &Graph,
    j: usize,
    kind: SubstructureKind,
) -> Result<bool> {
    g1.check_node(i)?;
    g2.check_node(j)?;
    for (g, x) in [(g1, i), (g2, j)] {
        if g.degree(x) + 1 > NEIGHBORHOOD_LIMIT {
            return Err(Error::SizeLimit {
                nodes: g.degree(x) + 1,
                limit: NEIGHBORHOOD_LIMIT,
            });
        }
    }
    if g1.degree(i) != g2.degree(j) {
        return Ok(false);
    }
    let left = g1.neighbors(i);
    let right = g2.neighbors(j);
    let left_sub: Vec<Subgraph> = left
        .iter()
        .map(|&x| kind.extract(g1, i, x))
        .collect::<Result<_>>()?;
    let right_sub: Vec<Subgraph> = right
        .iter()
        .map(|&y| kind.extract(g2, j, y))
        .collect::<Result<_>>()?;

    let mut compatible = vec![vec![false; right.len()]; left.len()];
    for (a, sa) in left_sub.iter().enumerate() {
        for (b, sb) in right_sub.iter().enumerate() {
            if sa.num_nodes() == sb.num_nodes() && sa.num_edges() == sb.num_edges() {
                compatible[a][b] = is_isomorphic_small(sa.local(), sb.local())?;
            }
        }
    }
    // Most constrained neighbor first.
    let mut order: Vec<usize> = (0..left.len()).collect();
    order.sort_by_key(|&a| compatible[a].iter().filter(|&&c| c).count());
    let mut used = vec![false; right.len()];
    Ok(assign(&compatible, &order, 0, &mut used))
}

fn assign(compatible: &[Vec<bool>], order: &[usize], depth: usize, used: &mut [bool]) -> bool {
    let Some(&a) = order.get(depth) else {
        return true;
    };
    for b in 0..used.len() {
        if compatible[a][b] && !used[b] {
            used[b] = true;
            if assign(compatible, order, depth + 1, used) {
                return true;
            }
            used[b] = false;
        }
    }
    false
}

/// Maximum hop distance inside `s` from any node to the nearer of two
/// anchors given in parent ids; `None` if an anchor is missing or a node is
/// unreachable.
pub fn max_anchor_distance(s: &Subgraph, v: usize, u: usize) -> Option<usize> {
    let lv = s.local_index(v)?;
    let lu = s.local_index(u)?;
    let dv = s.local().bfs_distances(lv);
    let du = s.local().bfs_distances(lu);
    dv.iter()
        .zip(&du)
        .map(|(a, b)| match (a, b) {
            (Some(a), Some(b)) => Some(*a.min(b)),
            (Some(a), None) => Some(*a),
            (None, Some(b)) => Some(*b),
            (None, None) => None,
        })
        .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
}

//! Simple undirected graphs, induced subgraphs and small-graph utilities.
//!
//! A [`Graph`] is immutable once built. Node ids are `0..num_nodes`, edges
//! are stored once as `(lo, hi)` pairs in ascending order and every
//! adjacency list is sorted, so iteration order is deterministic everywhere
//! downstream.

mod generators;
mod iso;
mod parse;

pub use generators::{erdos_renyi, generate_named, planted_cycle_graph, NamedGraphSpec};
pub use iso::{is_isomorphic_small, ISO_NODE_LIMIT};
pub use parse::{parse_graph, read_graph_file};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unordered edge key with `0 <= lo < hi`.
pub type Edge = (usize, usize);

/// Orders an endpoint pair as an [`Edge`] key.
#[inline]
pub fn edge_key(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    num_nodes: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
    features: Option<Vec<Vec<f64>>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicates and out-of-range ids.
    pub fn new<I>(num_nodes: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (i, (u, v)) in edges.into_iter().enumerate() {
            let at = crate::error::Location::EdgeEntry(i + 1);
            for node in [u, v] {
                if node >= num_nodes {
                    return Err(Error::NodeIdOutOfRange {
                        at,
                        node,
                        num_nodes,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { at, node: u });
            }
            if !set.insert(edge_key(u, v)) {
                return Err(Error::DuplicateEdge { at, u, v });
            }
        }
        Ok(Self::from_edge_set(num_nodes, set))
    }

    pub(crate) fn from_edge_set(num_nodes: usize, set: BTreeSet<Edge>) -> Self {
        Self::from_sorted_edges(num_nodes, set.into_iter().collect())
    }

    /// `edges` must be normalized, sorted and distinct.
    fn from_sorted_edges(num_nodes: usize, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); num_nodes];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph {
            num_nodes,
            edges,
            adjacency,
            features: None,
        }
    }

    pub fn empty(num_nodes: usize) -> Self {
        Self::from_edge_set(num_nodes, BTreeSet::new())
    }

    /// Attaches per-node features; every row must have the same length >= 1.
    pub fn with_features(mut self, features: Vec<Vec<f64>>) -> Result<Self> {
        if features.len() != self.num_nodes {
            return Err(Error::InvalidFeatures(format!(
                "{} feature rows for {} nodes",
                features.len(),
                self.num_nodes
            )));
        }
        if let Some(first) = features.first() {
            let dim = first.len();
            if dim == 0 {
                return Err(Error::InvalidFeatures("feature dimension 0".into()));
            }
            if features.iter().any(|row| row.len() != dim) {
                return Err(Error::InvalidFeatures("ragged feature rows".into()));
            }
            if features.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::InvalidFeatures("non-finite feature value".into()));
            }
        }
        self.features = Some(features);
        Ok(self)
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(lo, hi)` pairs in ascending order.
    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.num_nodes && v < self.num_nodes && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn features(&self) -> Option<&[Vec<f64>]> {
        self.features.as_deref()
    }

    /// Feature dimension; featureless graphs report 1 (the constant feature).
    pub fn feature_dim(&self) -> usize {
        match &self.features {
            Some(f) => f.first().map_or(1, Vec::len),
            None => 1,
        }
    }

    /// Node feature rows, substituting the constant `[1.0]` when absent.
    pub fn node_features(&self) -> Vec<Vec<f64>> {
        match &self.features {
            Some(f) => f.clone(),
            None => vec![vec![1.0]; self.num_nodes],
        }
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.num_nodes).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    pub(crate) fn check_node(&self, v: usize) -> Result<()> {
        if v >= self.num_nodes {
            return Err(Error::InvalidNode {
                node: v,
                num_nodes: self.num_nodes,
            });
        }
        Ok(())
    }

    pub(crate) fn check_edge(&self, u: usize, v: usize) -> Result<()> {
        self.check_node(u)?;
        self.check_node(v)?;
        if !self.has_edge(u, v) {
            return Err(Error::NotAnEdge { u, v });
        }
        Ok(())
    }

    /// `N(v) ∪ {v}`, sorted ascending.
    pub fn closed_neighborhood(&self, v: usize) -> Result<Vec<usize>> {
        self.check_node(v)?;
        let mut out = self.adjacency[v].clone();
        let pos = out.binary_search(&v).unwrap_err();
        out.insert(pos, v);
        Ok(out)
    }

    /// Subgraph induced on `nodes`; local indices follow ascending parent ids.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<Subgraph> {
        let mut parent_ids = nodes.to_vec();
        parent_ids.sort_unstable();
        parent_ids.dedup();
        for &v in &parent_ids {
            self.check_node(v)?;
        }
        let mut edges = Vec::new();
        for (i, &p) in parent_ids.iter().enumerate() {
            for &q in &self.adjacency[p] {
                if q > p {
                    if let Ok(j) = parent_ids.binary_search(&q) {
                        edges.push((i, j));
                    }
                }
            }
        }
        let mut local = Graph::from_sorted_edges(parent_ids.len(), edges);
        if let Some(f) = &self.features {
            local.features = Some(parent_ids.iter().map(|&p| f[p].clone()).collect());
        }
        Ok(Subgraph { local, parent_ids })
    }

    /// Relabels node `v` as `perm[v]`. `perm` must be a permutation of `0..n`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.num_nodes {
            return Err(Error::InvalidParameter(format!(
                "permutation of length {} for {} nodes",
                perm.len(),
                self.num_nodes
            )));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
        }
        let set = self
            .edges
            .iter()
            .map(|&(u, v)| edge_key(perm[u], perm[v]))
            .collect();
        let mut g = Graph::from_edge_set(self.num_nodes, set);
        if let Some(f) = &self.features {
            let mut nf = vec![Vec::new(); self.num_nodes];
            for (v, row) in f.iter().enumerate() {
                nf[perm[v]] = row.clone();
            }
            g.features = Some(nf);
        }
        Ok(g)
    }

    /// Disjoint union; nodes of `other` are shifted by `self.num_nodes()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.num_nodes;
        let set = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)))
            .collect();
        Graph::from_edge_set(self.num_nodes + other.num_nodes, set)
    }

    /// Copy of this graph without edge `(u, v)`.
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Graph> {
        self.check_edge(u, v)?;
        let key = edge_key(u, v);
        let set = self.edges.iter().copied().filter(|&e| e != key).collect();
        let mut g = Graph::from_edge_set(self.num_nodes, set);
        g.features = self.features.clone();
        Ok(g)
    }

    /// Copy of this graph with an extra edge `(u, v)`.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(Error::SelfLoop {
                at: crate::error::Location::EdgeEntry(self.num_edges() + 1),
                node: u,
            });
        }
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge {
                at: crate::error::Location::EdgeEntry(self.num_edges() + 1),
                u,
                v,
            });
        }
        let mut set: BTreeSet<Edge> = self.edges.iter().copied().collect();
        set.insert(edge_key(u, v));
        let mut g = Graph::from_edge_set(self.num_nodes, set);
        g.features = self.features.clone();
        Ok(g)
    }

    /// Copy of this graph with node `v` (and its edges) removed; later ids shift down.
    pub fn without_node(&self, v: usize) -> Result<Graph> {
        self.check_node(v)?;
        let keep: Vec<usize> = (0..self.num_nodes).filter(|&x| x != v).collect();
        Ok(self.induced_subgraph(&keep)?.local)
    }

    /// Connected-component label per node, labels in order of first appearance.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.num_nodes];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..self.num_nodes {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for &y in &self.adjacency[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// BFS hop distances from `source`; `None` for unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_nodes];
        let mut queue = std::collections::VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].unwrap();
            for &y in &self.adjacency[x] {
                if dist[y].is_none() {
                    dist[y] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Edge-list text: header `n m`, then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.num_nodes, self.num_edges());
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let file = GraphFile {
            num_nodes: self.num_nodes,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
            features: self.features.clone(),
        };
        serde_json::to_string(&file).expect("graph serializes")
    }
}

/// JSON graph file layout.
#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct GraphFile {
    pub num_nodes: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub features: Option<Vec<Vec<f64>>>,
}

/// An induced local graph together with the parent ids of its nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgraph {
    local: Graph,
    parent_ids: Vec<usize>,
}

impl Subgraph {
    /// Pairs a local graph with its parent ids, which must be distinct.
    pub fn new(local: Graph, parent_ids: Vec<usize>) -> Result<Self> {
        if parent_ids.len() != local.num_nodes() {
            return Err(Error::InvalidParameter(format!(
                "{} parent ids for {} local nodes",
                parent_ids.len(),
                local.num_nodes()
            )));
        }
        let distinct: BTreeSet<_> = parent_ids.iter().collect();
        if distinct.len() != parent_ids.len() {
            return Err(Error::InvalidParameter("duplicate parent ids".into()));
        }
        Ok(Subgraph { local, parent_ids })
    }

    #[inline]
    pub fn local(&self) -> &Graph {
        &self.local
    }

    #[inline]
    pub fn parent_ids(&self) -> &[usize] {
        &self.parent_ids
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.local.num_nodes()
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.local.num_edges()
    }

    pub fn local_index(&self, parent: usize) -> Option<usize> {
        self.parent_ids.iter().position(|&p| p == parent)
    }

    /// Edges translated back to parent ids, as ordered keys.
    pub fn parent_edges(&self) -> BTreeSet<Edge> {
        self.local
            .edges()
            .iter()
            .map(|&(i, j)| edge_key(self.parent_ids[i], self.parent_ids[j]))
            .collect()
    }

    pub fn into_local(self) -> Graph {
        self.local
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn closed_neighborhood_examples() {
        let k3 = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3.closed_neighborhood(0).unwrap(), vec![0, 1, 2]);
        let p3 = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(p3.closed_neighborhood(0).unwrap(), vec![0, 1]);
        let lone = Graph::empty(4);
        assert_eq!(lone.closed_neighborhood(2).unwrap(), vec![2]);
        assert!(matches!(
            lone.closed_neighborhood(4),
            Err(Error::InvalidNode { node: 4, .. })
        ));
    }

    #[test]
    fn induced_subgraph_examples() {
        let c6 = cycle(6);
        let s = c6.induced_subgraph(&[2, 0, 1]).unwrap();
        assert_eq!(s.parent_ids(), &[0, 1, 2]);
        assert_eq!(s.local().edges(), &[(0, 1), (1, 2)]);

        let k4 = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let s = k4.induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(s.num_edges(), 3);

        let s = k4.induced_subgraph(&[]).unwrap();
        assert_eq!(s.num_nodes(), 0);
        assert!(k4.induced_subgraph(&[0, 9]).is_err());
    }

    #[test]
    fn induced_subgraph_is_idempotent() {
        let g = cycle(7).with_edge(0, 3).unwrap();
        let s = g.induced_subgraph(&[0, 1, 2, 3, 5]).unwrap();
        let all: Vec<usize> = (0..s.num_nodes()).collect();
        let again = s.local().induced_subgraph(&all).unwrap();
        assert_eq!(again.local(), s.local());
    }

    #[test]
    fn features_are_validated() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        assert!(g.clone().with_features(vec![vec![1.0], vec![]]).is_err());
        assert!(g.clone().with_features(vec![vec![]; 2]).is_err());
        assert!(g.clone().with_features(vec![vec![1.0]]).is_err());
        let g = g
            .with_features(vec![vec![1.0, 2.0], vec![3.0, 4.0]])
            .unwrap();
        assert_eq!(g.feature_dim(), 2);
    }

    #[test]
    fn permuted_preserves_structure() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let p = g.permuted(&[3, 2, 1, 0]).unwrap();
        assert!(p.has_edge(3, 2) && p.has_edge(2, 1) && p.has_edge(1, 0));
        assert!(g.permuted(&[0, 0, 1, 2]).is_err());
    }
}

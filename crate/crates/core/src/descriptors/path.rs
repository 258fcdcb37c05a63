use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Graph, Subgraph};

/// Pairwise shortest-path lengths inside one subgraph.
///
/// Rows and columns follow `order`, the subgraph's parent ids in ascending
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathMatrix {
    dim: usize,
    entries: Vec<u32>,
    order: Vec<usize>,
}

impl PathMatrix {
    /// Builds a matrix from explicit rows, validating shape, symmetry, sign
    /// and the zero diagonal.
    pub fn from_rows(rows: &[Vec<i64>], order: Vec<usize>) -> Result<Self> {
        let dim = rows.len();
        if order.len() != dim {
            return Err(Error::InvalidPathMatrix(format!(
                "{} order ids for dimension {dim}",
                order.len()
            )));
        }
        if BTreeSet::from_iter(&order).len() != dim {
            return Err(Error::InvalidPathMatrix("duplicate ids in order".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidPathMatrix(format!(
                    "row {i} has length {}",
                    row.len()
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                if x < 0 {
                    return Err(Error::InvalidPathMatrix(format!(
                        "negative entry at ({i}, {j})"
                    )));
                }
                if x != rows[j][i] {
                    return Err(Error::InvalidPathMatrix(format!(
                        "asymmetric at ({i}, {j})"
                    )));
                }
                if i == j && x != 0 {
                    return Err(Error::InvalidPathMatrix(format!(
                        "non-zero diagonal at {i}"
                    )));
                }
                if i != j && x == 0 {
                    return Err(Error::InvalidPathMatrix(format!(
                        "zero distance at ({i}, {j})"
                    )));
                }
                entries.push(u32::try_from(x).map_err(|_| {
                    Error::InvalidPathMatrix(format!("entry at ({i}, {j}) too large"))
                })?);
            }
        }
        Ok(PathMatrix {
            dim,
            entries,
            order,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.dim + j]
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries
            .chunks(self.dim.max(1))
            .map(<[u32]>::to_vec)
            .take(self.dim)
            .collect()
    }

    /// Entries as a row-major `f64` buffer.
    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|&x| f64::from(x)).collect()
    }

    pub fn max_entry(&self) -> u32 {
        self.entries.iter().copied().max().unwrap_or(0)
    }
}

/// All-pairs BFS distances over a connected subgraph.
pub fn path_matrix(s: &Subgraph) -> Result<PathMatrix> {
    let g = s.local();
    let n = g.num_nodes();
    // local index for each row, by ascending parent id
    let mut rows: Vec<usize> = (0..n).collect();
    rows.sort_by_key(|&i| s.parent_ids()[i]);
    let mut pos = vec![0; n];
    for (r, &i) in rows.iter().enumerate() {
        pos[i] = r;
    }

    let mut entries = vec![0u32; n * n];
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::with_capacity(n);
    for src in 0..n {
        dist.fill(u32::MAX);
        dist[src] = 0;
        queue.push_back(src);
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if dist[y] == u32::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        let r = pos[src];
        for (dst, &d) in dist.iter().enumerate() {
            if d == u32::MAX {
                return Err(Error::Disconnected);
            }
            entries[r * n + pos[dst]] = d;
        }
    }
    let order = rows.iter().map(|&i| s.parent_ids()[i]).collect();
    Ok(PathMatrix {
        dim: n,
        entries,
        order,
    })
}

/// Recovers the subgraph whose edges are exactly the unit entries.
pub fn reconstruct_subgraph(p: &PathMatrix) -> Result<Subgraph> {
    let mut edges = Vec::new();
    for i in 0..p.dim {
        for j in i + 1..p.dim {
            if p.get(i, j) == 1 {
                edges.push((i, j));
            }
        }
    }
    Subgraph::new(Graph::new(p.dim, edges)?, p.order.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_named, NamedGraphSpec};
    use crate::substructure::union_subgraph;

    fn whole(g: &Graph) -> Subgraph {
        let all: Vec<usize> = (0..g.num_nodes()).collect();
        g.induced_subgraph(&all).unwrap()
    }

    #[test]
    fn small_path_matrices() {
        let k3 = generate_named(NamedGraphSpec::Complete(3))
            .unwrap()
            .remove(0);
        assert_eq!(
            path_matrix(&whole(&k3)).unwrap().rows(),
            vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]
        );
        let p3 = generate_named(NamedGraphSpec::Path(3)).unwrap().remove(0);
        assert_eq!(
            path_matrix(&whole(&p3)).unwrap().rows(),
            vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]]
        );
    }

    #[test]
    fn c6_edge_gives_p4_distances_in_parent_order() {
        let c6 = generate_named(NamedGraphSpec::Cycle(6)).unwrap().remove(0);
        // relabel so the path 5-0-1-2 reads 0-1-2-3 in ascending parent ids
        let g = c6.permuted(&[1, 2, 3, 4, 5, 0]).unwrap();
        let s = union_subgraph(&g, 1, 2).unwrap();
        let p = path_matrix(&s).unwrap();
        assert_eq!(p.order(), &[0, 1, 2, 3]);
        assert_eq!(
            p.rows(),
            vec![
                vec![0, 1, 2, 3],
                vec![1, 0, 1, 2],
                vec![2, 1, 0, 1],
                vec![3, 2, 1, 0]
            ]
        );
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = Graph::new(3, [(0, 1)]).unwrap();
        assert!(matches!(path_matrix(&whole(&g)), Err(Error::Disconnected)));
    }

    #[test]
    fn reconstruct_examples() {
        let k3 = PathMatrix::from_rows(
            &[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]],
            vec![0, 1, 2],
        )
        .unwrap();
        assert_eq!(reconstruct_subgraph(&k3).unwrap().num_edges(), 3);
        let p3 = PathMatrix::from_rows(
            &[vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]],
            vec![4, 7, 9],
        )
        .unwrap();
        let s = reconstruct_subgraph(&p3).unwrap();
        assert_eq!(s.local().edges(), &[(0, 1), (1, 2)]);
        assert_eq!(s.parent_ids(), &[4, 7, 9]);
    }

    #[test]
    fn invalid_matrices_rejected() {
        assert!(PathMatrix::from_rows(&[vec![0, 1], vec![2, 0]], vec![0, 1]).is_err());
        assert!(PathMatrix::from_rows(&[vec![0, -1], vec![-1, 0]], vec![0, 1]).is_err());
        assert!(PathMatrix::from_rows(&[vec![1, 1], vec![1, 0]], vec![0, 1]).is_err());
        assert!(PathMatrix::from_rows(&[vec![0, 1], vec![1, 0]], vec![0, 0]).is_err());
    }
}

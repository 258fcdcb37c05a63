//! Per-edge structural descriptors and the coefficient tables built from them.

mod betweenness;
mod cycles;
mod eigen;
mod path;
mod ricci;
mod transport;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use betweenness::edge_betweenness_descriptor;
pub use cycles::cycle_count;
pub use eigen::{
    encode_matrix, encode_rows, singular_values, symmetric_eigenvalues, EncodingKind,
    JACOBI_MAX_SWEEPS, JACOBI_TOLERANCE,
};
pub use path::{path_matrix, reconstruct_subgraph, PathMatrix};
pub use ricci::{ricci_curvature, DEFAULT_RICCI_ALPHA};
pub use transport::transport_cost;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Subgraph};
use crate::substructure::{overlap_subgraph, union_minus_subgraph, union_subgraph};

pub const DEFAULT_COUNT_NE_LAMBDA: u32 = 2;

/// Which quantity is attached to each edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DescriptorKind {
    UnionPathSvd,
    OverlapPathSvd,
    MinusPathSvd,
    Betweenness,
    CountNe(u32),
    RicciCurvature(f64),
    LaplacianSvd,
    /// Graph-level count of `k`-cycles; only meaningful for timing.
    CycleCount(usize),
}

impl DescriptorKind {
    pub fn validate(self) -> Result<Self> {
        match self {
            DescriptorKind::CountNe(l) if !(1..=2).contains(&l) => Err(Error::InvalidParameter(
                format!("count-ne exponent {l} not in {{1, 2}}"),
            )),
            DescriptorKind::RicciCurvature(a) if !(0.0..1.0).contains(&a) => Err(
                Error::InvalidParameter(format!("ricci alpha {a} outside [0, 1)")),
            ),
            DescriptorKind::CycleCount(k) if !(3..=8).contains(&k) => Err(Error::InvalidParameter(
                format!("cycle length {k} outside 3..=8"),
            )),
            other => Ok(other),
        }
    }

    /// Whether the encoding argument changes the result.
    pub fn uses_encoding(self) -> bool {
        matches!(
            self,
            DescriptorKind::UnionPathSvd
                | DescriptorKind::OverlapPathSvd
                | DescriptorKind::MinusPathSvd
                | DescriptorKind::LaplacianSvd
        )
    }

    /// Every per-edge kind with default parameters.
    pub fn per_edge_kinds() -> [DescriptorKind; 7] {
        [
            DescriptorKind::UnionPathSvd,
            DescriptorKind::OverlapPathSvd,
            DescriptorKind::MinusPathSvd,
            DescriptorKind::Betweenness,
            DescriptorKind::CountNe(DEFAULT_COUNT_NE_LAMBDA),
            DescriptorKind::RicciCurvature(DEFAULT_RICCI_ALPHA),
            DescriptorKind::LaplacianSvd,
        ]
    }
}

impl fmt::Display for DescriptorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DescriptorKind::UnionPathSvd => f.write_str("union-path-svd"),
            DescriptorKind::OverlapPathSvd => f.write_str("overlap-path-svd"),
            DescriptorKind::MinusPathSvd => f.write_str("minus-path-svd"),
            DescriptorKind::Betweenness => f.write_str("betweenness"),
            DescriptorKind::CountNe(l) => write!(f, "count-ne:{l}"),
            DescriptorKind::RicciCurvature(a) => write!(f, "ricci:{a}"),
            DescriptorKind::LaplacianSvd => f.write_str("laplacian-svd"),
            DescriptorKind::CycleCount(k) => write!(f, "cycle-count:{k}"),
        }
    }
}

impl FromStr for DescriptorKind {
    type Err = Error;

    /// Accepts names like `union-path-svd`, `count-ne:1`, `ricci:0.5`,
    /// `cycle-count:6`; parameters default when omitted.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let bad_arg = |a: &str| Error::InvalidParameter(format!("bad argument {a:?} for {name}"));
        let kind = match (name, arg) {
            ("union-path-svd", None) => DescriptorKind::UnionPathSvd,
            ("overlap-path-svd", None) => DescriptorKind::OverlapPathSvd,
            ("minus-path-svd", None) => DescriptorKind::MinusPathSvd,
            ("betweenness", None) => DescriptorKind::Betweenness,
            ("laplacian-svd", None) => DescriptorKind::LaplacianSvd,
            ("count-ne", None) => DescriptorKind::CountNe(DEFAULT_COUNT_NE_LAMBDA),
            ("count-ne", Some(a)) => DescriptorKind::CountNe(a.parse().map_err(|_| bad_arg(a))?),
            ("ricci", None) => DescriptorKind::RicciCurvature(DEFAULT_RICCI_ALPHA),
            ("ricci", Some(a)) => {
                DescriptorKind::RicciCurvature(a.parse().map_err(|_| bad_arg(a))?)
            }
            ("cycle-count", None) => DescriptorKind::CycleCount(6),
            ("cycle-count", Some(a)) => {
                DescriptorKind::CycleCount(a.parse().map_err(|_| bad_arg(a))?)
            }
            _ => return Err(Error::InvalidParameter(format!("unknown descriptor {s:?}"))),
        };
        kind.validate()
    }
}

impl Serialize for DescriptorKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DescriptorKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `|E| / (|V|(|V|−1)) · |V|^λ` of a subgraph.
pub fn count_ne_descriptor(s: &Subgraph, lambda: u32) -> Result<f64> {
    DescriptorKind::CountNe(lambda).validate()?;
    let n = s.num_nodes();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "count-ne needs at least 2 nodes, got {n}"
        )));
    }
    let nf = n as f64;
    Ok(s.num_edges() as f64 / (nf * (nf - 1.0)) * nf.powi(lambda as i32))
}

/// Encoding of the combinatorial Laplacian `D − A` of a subgraph.
pub fn laplacian_descriptor(s: &Subgraph, enc: EncodingKind) -> Result<f64> {
    let g = s.local();
    let n = g.num_nodes();
    let mut m = vec![0.0; n * n];
    for x in 0..n {
        m[x * n + x] = g.degree(x) as f64;
        for &y in g.neighbors(x) {
            m[x * n + y] = -1.0;
        }
    }
    encode_matrix(&m, n, enc)
}

fn path_descriptor(s: &Subgraph, enc: EncodingKind) -> Result<f64> {
    let p = path_matrix(s)?;
    encode_matrix(&p.to_f64(), p.dim(), enc)
}

/// Raw coefficient of one edge.
pub fn edge_descriptor(
    g: &Graph,
    v: usize,
    u: usize,
    kind: DescriptorKind,
    enc: EncodingKind,
) -> Result<f64> {
    g.check_edge(v, u)?;
    match kind.validate()? {
        DescriptorKind::UnionPathSvd => path_descriptor(&union_subgraph(g, v, u)?, enc),
        DescriptorKind::OverlapPathSvd => path_descriptor(&overlap_subgraph(g, v, u)?, enc),
        DescriptorKind::MinusPathSvd => path_descriptor(&union_minus_subgraph(g, v, u)?, enc),
        DescriptorKind::Betweenness => edge_betweenness_descriptor(&union_subgraph(g, v, u)?, v, u),
        DescriptorKind::CountNe(l) => count_ne_descriptor(&union_subgraph(g, v, u)?, l),
        DescriptorKind::RicciCurvature(a) => ricci_curvature(g, v, u, a),
        DescriptorKind::LaplacianSvd => laplacian_descriptor(&union_subgraph(g, v, u)?, enc),
        DescriptorKind::CycleCount(_) => Err(Error::InvalidParameter(
            "cycle-count is graph-level and has no per-edge value".into(),
        )),
    }
}

/// Raw per-edge coefficients with their per-node normalization.
///
/// `raw` is aligned with the graph's sorted edge list; `normalized` with
/// its directed adjacency, node by node in ascending neighbor order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    edges: Vec<Edge>,
    raw: Vec<f64>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    normalized: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct EdgeValue {
    v: usize,
    u: usize,
    value: f64,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    raw: Vec<EdgeValue>,
    normalized: Vec<EdgeValue>,
}

impl CoefficientTable {
    /// Builds a table from raw values aligned with `g.edges()`.
    pub fn from_raw(g: &Graph, raw: Vec<f64>) -> Result<Self> {
        if raw.len() != g.num_edges() {
            return Err(Error::DimensionMismatch(format!(
                "{} raw values for {} edges",
                raw.len(),
                g.num_edges()
            )));
        }
        if let Some(i) = raw.iter().position(|x| !x.is_finite()) {
            let (u, v) = g.edges()[i];
            return Err(Error::NonFinite(format!("raw coefficient of ({u}, {v})")));
        }
        let edges = g.edges().to_vec();
        let n = g.num_nodes();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * edges.len());
        let mut normalized = Vec::with_capacity(2 * edges.len());
        let mut zero_sum = Vec::new();
        offsets.push(0);
        for v in 0..n {
            let nb = g.neighbors(v);
            let vals: Vec<f64> = nb
                .iter()
                .map(|&u| {
                    let key = crate::graph::edge_key(v, u);
                    raw[edges
                        .binary_search(&key)
                        .expect("adjacency matches edge list")]
                })
                .collect();
            let sum: f64 = vals.iter().sum();
            if !nb.is_empty() && sum.abs() < 1e-12 {
                zero_sum.push(v);
                normalized.extend(std::iter::repeat_n(1.0 / nb.len() as f64, nb.len()));
            } else {
                normalized.extend(vals.iter().map(|x| x / sum));
            }
            targets.extend_from_slice(nb);
            offsets.push(targets.len());
        }
        if let Some(first) = zero_sum.first() {
            log::warn!(
                "coefficients sum to zero around {} node(s), first {first}; using uniform weights there",
                zero_sum.len()
            );
        }
        Ok(CoefficientTable {
            edges,
            raw,
            offsets,
            targets,
            normalized,
        })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn raw_values(&self) -> &[f64] {
        &self.raw
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn raw(&self, v: usize, u: usize) -> Option<f64> {
        let key = crate::graph::edge_key(v, u);
        self.edges.binary_search(&key).ok().map(|i| self.raw[i])
    }

    /// `ã^{vu}`, normalized over the neighbors of `v`.
    pub fn normalized(&self, v: usize, u: usize) -> Option<f64> {
        let range = self.offsets[v]..*self.offsets.get(v + 1)?;
        let i = self.targets[range.clone()].binary_search(&u).ok()?;
        Some(self.normalized[range.start + i])
    }

    /// Normalized values for the neighbors of `v`, in ascending neighbor order.
    pub fn normalized_row(&self, v: usize) -> &[f64] {
        &self.normalized[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Normalized values over all directed pairs, node by node.
    pub fn normalized_values(&self) -> &[f64] {
        &self.normalized
    }

    /// Whether this table was built for a graph with the same edge set as `g`.
    pub fn matches(&self, g: &Graph) -> bool {
        self.edges == g.edges() && self.num_nodes() == g.num_nodes()
    }

    /// Sorted multiset of raw values.
    pub fn sorted_raw(&self) -> Vec<f64> {
        let mut out = self.raw.clone();
        out.sort_by(f64::total_cmp);
        out
    }

    /// `v,u,raw,norm_vu,norm_uv` rows sorted by `(v, u)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("v,u,raw,norm_vu,norm_uv\n");
        for (&(v, u), &r) in self.edges.iter().zip(&self.raw) {
            let nvu = self.normalized(v, u).unwrap_or(f64::NAN);
            let nuv = self.normalized(u, v).unwrap_or(f64::NAN);
            out.push_str(&format!("{v},{u},{r},{nvu},{nuv}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let raw = self
            .edges
            .iter()
            .zip(&self.raw)
            .map(|(&(v, u), &value)| EdgeValue { v, u, value })
            .collect();
        let mut normalized = Vec::with_capacity(self.targets.len());
        for v in 0..self.num_nodes() {
            for i in self.offsets[v]..self.offsets[v + 1] {
                normalized.push(EdgeValue {
                    v,
                    u: self.targets[i],
                    value: self.normalized[i],
                });
            }
        }
        serde_json::to_string_pretty(&TableFile { raw, normalized }).expect("plain data serializes")
    }

    /// Reads the JSON form back against its graph; normalized values are
    /// recomputed from the raw ones.
    pub fn from_json(g: &Graph, text: &str) -> Result<Self> {
        let file: TableFile = serde_json::from_str(text)?;
        let mut raw = vec![f64::NAN; g.num_edges()];
        for e in &file.raw {
            let key = crate::graph::edge_key(e.v, e.u);
            let i = g
                .edges()
                .binary_search(&key)
                .map_err(|_| Error::NotAnEdge { u: e.v, v: e.u })?;
            raw[i] = e.value;
        }
        if let Some(i) = raw.iter().position(|x| x.is_nan()) {
            let (u, v) = g.edges()[i];
            return Err(Error::MissingCoefficient { u, v });
        }
        Self::from_raw(g, raw)
    }
}

/// Coefficients for every edge of `g`, computed in parallel.
pub fn coefficient_table(
    g: &Graph,
    kind: DescriptorKind,
    enc: EncodingKind,
) -> Result<CoefficientTable> {
    let kind = kind.validate()?;
    let raw = g
        .edges()
        .par_iter()
        .map(|&(v, u)| {
            edge_descriptor(g, v, u, kind, enc).map_err(|e| Error::Descriptor {
                u: v,
                v: u,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    CoefficientTable::from_raw(g, raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_named, NamedGraphSpec};

    fn named(spec: NamedGraphSpec) -> Graph {
        generate_named(spec).unwrap().remove(0)
    }

    #[test]
    fn two_triangles_table() {
        let g = named(NamedGraphSpec::TwoTrianglesVsC6Pair);
        let t = coefficient_table(&g, DescriptorKind::UnionPathSvd, EncodingKind::SvdSum).unwrap();
        assert_eq!(t.raw_values().len(), 6);
        for &r in t.raw_values() {
            assert!((r - 4.0).abs() < 1e-9);
        }
        for &x in t.normalized_values() {
            assert!((x - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn c6_table_is_uniform() {
        let g = named(NamedGraphSpec::Cycle(6));
        let t = coefficient_table(&g, DescriptorKind::UnionPathSvd, EncodingKind::SvdSum).unwrap();
        let first = t.raw_values()[0];
        assert!(t.raw_values().iter().all(|r| (r - first).abs() < 1e-9));
        assert!(t
            .normalized_values()
            .iter()
            .all(|x| (x - 0.5).abs() < 1e-12));
    }

    #[test]
    fn k2_table() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let t = coefficient_table(&g, DescriptorKind::UnionPathSvd, EncodingKind::SvdSum).unwrap();
        assert!((t.raw(0, 1).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(t.normalized(0, 1), Some(1.0));
        assert_eq!(t.normalized(1, 0), Some(1.0));
    }

    #[test]
    fn count_ne_examples() {
        let k3 = named(NamedGraphSpec::Complete(3));
        let all = k3.induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(count_ne_descriptor(&all, 2).unwrap(), 4.5);
        assert_eq!(count_ne_descriptor(&all, 1).unwrap(), 1.5);
        let p3 = named(NamedGraphSpec::Path(3));
        assert_eq!(
            count_ne_descriptor(&p3.induced_subgraph(&[0, 1, 2]).unwrap(), 2).unwrap(),
            3.0
        );
        assert!(count_ne_descriptor(&all, 3).is_err());
    }

    #[test]
    fn laplacian_of_k2() {
        // D − A = [[1, −1], [−1, 1]], eigenvalues 0 and 2
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let t = coefficient_table(&g, DescriptorKind::LaplacianSvd, EncodingKind::SvdSum).unwrap();
        assert!((t.raw(0, 1).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_sum_falls_back_to_uniform() {
        let g = named(NamedGraphSpec::Path(3));
        let t = CoefficientTable::from_raw(&g, vec![1.0, -1.0]).unwrap();
        assert_eq!(t.normalized(1, 0), Some(0.5));
        assert_eq!(t.normalized(1, 2), Some(0.5));
        assert_eq!(t.normalized(0, 1), Some(1.0));
    }

    #[test]
    fn every_kind_runs_on_rook_graph() {
        let g = named(NamedGraphSpec::Rook4x4);
        for kind in DescriptorKind::per_edge_kinds() {
            let t = coefficient_table(&g, kind, EncodingKind::SvdSum).unwrap();
            assert_eq!(t.raw_values().len(), g.num_edges());
        }
        assert!(
            coefficient_table(&g, DescriptorKind::CycleCount(4), EncodingKind::SvdSum).is_err()
        );
    }

    #[test]
    fn kind_strings_round_trip() {
        for kind in DescriptorKind::per_edge_kinds() {
            assert_eq!(kind.to_string().parse::<DescriptorKind>().unwrap(), kind);
        }
        assert_eq!(
            "count-ne:1".parse::<DescriptorKind>().unwrap(),
            DescriptorKind::CountNe(1)
        );
        assert_eq!(
            "cycle-count".parse::<DescriptorKind>().unwrap(),
            DescriptorKind::CycleCount(6)
        );
        assert!("ricci:1.5".parse::<DescriptorKind>().is_err());
        assert!("cycle-count:9".parse::<DescriptorKind>().is_err());
        assert!("svd".parse::<DescriptorKind>().is_err());
    }

    #[test]
    fn csv_and_json_round_trip() {
        let g = named(NamedGraphSpec::Path(4));
        let t = coefficient_table(&g, DescriptorKind::UnionPathSvd, EncodingKind::SvdSum).unwrap();
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "v,u,raw,norm_vu,norm_uv");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,1,"));
        let back = CoefficientTable::from_json(&g, &t.to_json()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn errors_carry_edge_identity() {
        let g = named(NamedGraphSpec::Cycle(4));
        let err =
            coefficient_table(&g, DescriptorKind::CountNe(5), EncodingKind::SvdSum).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }
}

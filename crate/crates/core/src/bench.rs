//! Preprocessing-time benchmark of descriptor kinds over a shared corpus.

use std::hint::black_box;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dataset::random_corpus;
use crate::descriptors::{
    coefficient_table, cycle_count, DescriptorKind, EncodingKind, DEFAULT_COUNT_NE_LAMBDA,
    DEFAULT_RICCI_ALPHA,
};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Node-count range of the synthetic corpus.
pub const BENCH_NODES: (usize, usize) = (20, 50);
/// Mean degree of the synthetic corpus, close to that of protein graphs.
pub const BENCH_MEAN_DEGREE: f64 = 3.7;

pub const DEFAULT_BENCH_KINDS: [DescriptorKind; 5] = [
    DescriptorKind::CountNe(DEFAULT_COUNT_NE_LAMBDA),
    DescriptorKind::UnionPathSvd,
    DescriptorKind::Betweenness,
    DescriptorKind::RicciCurvature(DEFAULT_RICCI_ALPHA),
    DescriptorKind::CycleCount(6),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindTiming {
    pub kind: DescriptorKind,
    /// Median over repeats.
    pub seconds: f64,
    pub samples: Vec<f64>,
    pub edges: usize,
    pub per_edge_us: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub encoding: EncodingKind,
    pub graphs: usize,
    /// Corpus positions skipped for every kind because some kind failed on them.
    pub excluded: Vec<usize>,
    pub repeats: usize,
    pub parallel: bool,
    pub threads: usize,
    pub kinds: Vec<KindTiming>,
}

impl BenchReport {
    pub fn timing(&self, kind: DescriptorKind) -> Option<&KindTiming> {
        self.kinds.iter().find(|t| t.kind == kind)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// The seeded Erdős–Rényi corpus used for timing.
pub fn bench_corpus(count: usize, seed: u64) -> Vec<Graph> {
    random_corpus(count, BENCH_NODES, BENCH_MEAN_DEGREE, seed)
}

/// All work one kind does for one graph.
pub fn compute_kind(g: &Graph, kind: DescriptorKind, enc: EncodingKind) -> Result<()> {
    match kind {
        DescriptorKind::CycleCount(k) => {
            black_box(cycle_count(g, k)?);
        }
        _ => {
            black_box(coefficient_table(g, kind, enc)?);
        }
    }
    Ok(())
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

/// Times every kind over the same graphs, `repeats` times each.
///
/// Without `parallel` all work runs on one thread; with it, edges are
/// spread over the global rayon pool (sized by `RAYON_NUM_THREADS`).
pub fn run_bench(
    graphs: &[Graph],
    kinds: &[DescriptorKind],
    enc: EncodingKind,
    repeats: usize,
    parallel: bool,
) -> Result<BenchReport> {
    if repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be at least 1".into()));
    }
    if kinds.is_empty() {
        return Err(Error::InvalidParameter(
            "no descriptor kinds to time".into(),
        ));
    }
    for kind in kinds {
        kind.validate()?;
    }
    time_kinds(graphs, kinds, enc, repeats, parallel, |g, k| {
        compute_kind(g, k, enc)
    })
}

fn time_kinds<F>(
    graphs: &[Graph],
    kinds: &[DescriptorKind],
    enc: EncodingKind,
    repeats: usize,
    parallel: bool,
    work: F,
) -> Result<BenchReport>
where
    F: Fn(&Graph, DescriptorKind) -> Result<()> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(if parallel {
            rayon::current_num_threads()
        } else {
            1
        })
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;

    pool.install(|| {
        let mut excluded = Vec::new();
        for (i, g) in graphs.iter().enumerate() {
            if let Some(err) = kinds.iter().find_map(|&k| work(g, k).err()) {
                log::warn!("excluding graph {i} from the benchmark: {err}");
                excluded.push(i);
            }
        }
        let kept: Vec<&Graph> = graphs
            .iter()
            .enumerate()
            .filter(|(i, _)| excluded.binary_search(i).is_err())
            .map(|(_, g)| g)
            .collect();
        let edges: usize = kept.iter().map(|g| g.num_edges()).sum();

        let mut samples = vec![Vec::with_capacity(repeats); kinds.len()];
        for _ in 0..repeats {
            for (slot, &kind) in samples.iter_mut().zip(kinds) {
                let start = Instant::now();
                for g in &kept {
                    work(g, kind)?;
                }
                slot.push(start.elapsed().as_secs_f64());
            }
        }
        let kinds = kinds
            .iter()
            .zip(samples)
            .map(|(&kind, samples)| {
                let seconds = median(&samples);
                KindTiming {
                    kind,
                    seconds,
                    samples,
                    edges,
                    per_edge_us: if edges == 0 {
                        0.0
                    } else {
                        seconds * 1e6 / edges as f64
                    },
                }
            })
            .collect();
        Ok(BenchReport {
            encoding: enc,
            graphs: kept.len(),
            excluded,
            repeats,
            parallel,
            threads: rayon::current_num_threads(),
            kinds,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn report_covers_every_kind() {
        let corpus = bench_corpus(4, 1);
        let r = run_bench(
            &corpus,
            &DEFAULT_BENCH_KINDS,
            EncodingKind::SvdSum,
            3,
            false,
        )
        .unwrap();
        assert_eq!(r.kinds.len(), 5);
        assert_eq!(r.threads, 1);
        assert_eq!(r.graphs, 4);
        let edges: usize = corpus.iter().map(|g| g.num_edges()).sum();
        for t in &r.kinds {
            assert_eq!(t.samples.len(), 3);
            assert_eq!(t.edges, edges);
            assert!(t.seconds >= 0.0);
        }
        assert!(r.timing(DescriptorKind::UnionPathSvd).is_some());
        let back: BenchReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn failing_graphs_are_dropped_for_all_kinds() {
        let corpus = bench_corpus(4, 2);
        let bad = corpus[1].clone();
        let kinds = [DescriptorKind::CountNe(1), DescriptorKind::Betweenness];
        let r = time_kinds(&corpus, &kinds, EncodingKind::SvdSum, 2, false, |g, k| {
            if *g == bad && k == DescriptorKind::Betweenness {
                Err(Error::InvalidParameter("boom".into()))
            } else {
                Ok(())
            }
        })
        .unwrap();
        assert_eq!(r.excluded, vec![1]);
        assert_eq!(r.graphs, 3);
        let edges = corpus.iter().map(|g| g.num_edges()).sum::<usize>() - bad.num_edges();
        assert!(r.kinds.iter().all(|t| t.edges == edges));
    }

    #[test]
    fn bad_arguments() {
        let corpus = bench_corpus(2, 2);
        assert!(run_bench(
            &corpus,
            &[DescriptorKind::CycleCount(2)],
            EncodingKind::SvdSum,
            1,
            false
        )
        .is_err());
        assert!(run_bench(&corpus, &[], EncodingKind::SvdSum, 1, false).is_err());
        assert!(run_bench(
            &corpus,
            &DEFAULT_BENCH_KINDS,
            EncodingKind::SvdSum,
            0,
            false
        )
        .is_err());
    }
}

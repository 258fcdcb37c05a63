//! Times every descriptor kind on a seeded random corpus.
//!
//! ```text
//! cargo run --release --example bench [GRAPHS]
//! ```

use union_subgraph::bench::{bench_corpus, run_bench, DEFAULT_BENCH_KINDS};
use union_subgraph::descriptors::EncodingKind;
use union_subgraph::Result;

fn main() -> Result<()> {
    let count = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(50);
    let corpus = bench_corpus(count, 0);
    let report = run_bench(
        &corpus,
        &DEFAULT_BENCH_KINDS,
        EncodingKind::SvdSum,
        3,
        false,
    )?;
    println!("{} graphs, {} edges", report.graphs, report.kinds[0].edges);
    for t in &report.kinds {
        println!(
            "{:<18} {:>8.4} s  {:>7.2} us/edge",
            t.kind.to_string(),
            t.seconds,
            t.per_edge_us
        );
    }
    Ok(())
}

//! Writes the named graphs and a small 4-cycle task to a directory.
//!
//! ```text
//! cargo run --example generate -- /tmp/graphs
//! ```

use std::path::PathBuf;

use union_subgraph::dataset::{cycle_dataset, write_corpus, write_dataset};
use union_subgraph::graph::{generate_named, NamedGraphSpec};
use union_subgraph::Result;

fn main() -> Result<()> {
    let dir: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "generated".into())
        .into();
    for (name, spec) in [
        ("rook4x4", NamedGraphSpec::Rook4x4),
        ("shrikhande", NamedGraphSpec::Shrikhande),
        ("two_triangles_vs_c6", NamedGraphSpec::TwoTrianglesVsC6Pair),
        (
            "four_cycle_pair",
            NamedGraphSpec::FourCyclePair {
                cycle_len: 4,
                seed: 1,
            },
        ),
    ] {
        let graphs = generate_named(spec)?;
        write_corpus(dir.join(name), &graphs)?;
        println!("{name}: {} graph(s)", graphs.len());
    }
    let task = cycle_dataset(4, 40, 0)?;
    write_dataset(dir.join("cycle_task"), &task)?;
    println!("cycle_task: {} graphs in {}", task.len(), dir.display());
    Ok(())
}

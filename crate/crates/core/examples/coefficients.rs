//! Per-edge coefficients of a small graph under every descriptor kind.
//!
//! ```text
//! cargo run --example coefficients [GRAPH_FILE]
//! ```

use union_subgraph::descriptors::{coefficient_table, DescriptorKind, EncodingKind};
use union_subgraph::graph::{read_graph_file, Graph};
use union_subgraph::Result;

fn main() -> Result<()> {
    // a triangle with a pendant path
    let g = match std::env::args().nth(1) {
        Some(path) => read_graph_file(path)?,
        None => Graph::new(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)])?,
    };
    for kind in DescriptorKind::per_edge_kinds() {
        let table = coefficient_table(&g, kind, EncodingKind::SvdSum)?;
        println!("{kind}");
        for (&(v, u), raw) in table.edges().iter().zip(table.raw_values()) {
            println!(
                "  ({v}, {u})  raw {raw:>9.4}  norm {:.4} / {:.4}",
                table.normalized(v, u).unwrap(),
                table.normalized(u, v).unwrap()
            );
        }
    }
    Ok(())
}

//! Union, overlap and union-minus subgraphs of one edge, its edge types and
//! the path matrix that encodes the union subgraph.

use union_subgraph::descriptors::{path_matrix, reconstruct_subgraph};
use union_subgraph::graph::Graph;
use union_subgraph::substructure::{classify_edge_types, SubstructureKind};
use union_subgraph::Result;

fn main() -> Result<()> {
    let g = Graph::new(
        8,
        [
            (0, 1),
            (0, 4),
            (0, 5),
            (0, 6),
            (0, 7),
            (1, 2),
            (1, 3),
            (1, 5),
            (1, 6),
            (1, 7),
            (2, 3),
            (3, 4),
            (3, 7),
            (4, 7),
            (5, 6),
            (5, 7),
            (6, 7),
        ],
    )?;
    let (v, u) = (0, 1);
    for kind in [
        SubstructureKind::Union,
        SubstructureKind::Overlap,
        SubstructureKind::UnionMinus,
    ] {
        let s = kind.extract(&g, v, u)?;
        println!(
            "{kind:?}: nodes {:?}, edges {:?}",
            s.parent_ids(),
            s.parent_edges()
        );
    }

    let types = classify_edge_types(&g, v, u)?;
    println!(
        "E1 {:?}\nE2 {:?}\nE3 {:?}\nE4 {:?}",
        types.e1, types.e2, types.e3, types.e4
    );

    let s = SubstructureKind::Union.extract(&g, v, u)?;
    let p = path_matrix(&s)?;
    println!("path matrix over {:?}:", p.order());
    for row in p.rows() {
        println!("  {row:?}");
    }
    assert_eq!(reconstruct_subgraph(&p)?, s);
    Ok(())
}

//! Pairs that 1-WL cannot tell apart, with and without coefficient tags.

use union_subgraph::descriptors::{DescriptorKind, EncodingKind};
use union_subgraph::graph::{generate_named, NamedGraphSpec};
use union_subgraph::wl::distinguish_pair;
use union_subgraph::Result;

fn main() -> Result<()> {
    let pairs = [
        (
            "2C3 vs C6",
            generate_named(NamedGraphSpec::TwoTrianglesVsC6Pair)?,
        ),
        (
            "rook 4x4 vs Shrikhande",
            vec![
                generate_named(NamedGraphSpec::Rook4x4)?.remove(0),
                generate_named(NamedGraphSpec::Shrikhande)?.remove(0),
            ],
        ),
    ];
    for (name, gs) in pairs {
        for kind in [
            DescriptorKind::UnionPathSvd,
            DescriptorKind::Betweenness,
            DescriptorKind::CountNe(2),
        ] {
            let v = distinguish_pair(&gs[0], &gs[1], kind, EncodingKind::SvdSum)?;
            println!(
                "{name:<24} {kind:<16} wl {:<5} augmented {}",
                v.wl_distinguishes, v.augmented_distinguishes
            );
        }
    }
    Ok(())
}

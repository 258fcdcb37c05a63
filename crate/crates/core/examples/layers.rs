//! One forward pass through each coefficient-aware layer on a small graph,
//! plus a finite-difference check of its gradients.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use union_subgraph::descriptors::{coefficient_table, DescriptorKind, EncodingKind};
use union_subgraph::graph::Graph;
use union_subgraph::neural::{
    grad_check_layer, AttentionBias, DenseTensor, GraphContext, Layer, Mlp, MpLayer, SoftmaxAxis,
    Trans,
};
use union_subgraph::Result;

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
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
    let table = coefficient_table(&g, DescriptorKind::UnionPathSvd, EncodingKind::SvdSum)?;
    let ctx = GraphContext::new(&g, Some(&table))?;
    let d = 4;
    let h = DenseTensor::glorot(g.num_nodes(), d, &mut rng);

    let trans = Trans::new(d, SoftmaxAxis::Receiver, &mut rng);
    println!(
        "weights on node 0:\n{:?}",
        trans.weights_at(&ctx, 0)?.to_rows()
    );

    let union = MpLayer::union(0.0, Mlp::new(&[d, 8, d], &mut rng)?, trans)?;
    let gcn = MpLayer::gcn(d, d, Some(SoftmaxAxis::Receiver), &mut rng);
    let attention = AttentionBias::new(d, SoftmaxAxis::Receiver, &mut rng);

    let (out, _) = union.forward(&ctx, &h)?;
    println!("union layer row 0: {:?}", out.row(0));
    let (out, _) = gcn.forward(&ctx, &h)?;
    println!("gcn plugin row 0: {:?}", out.row(0));
    let (logits, _) = attention.forward(&ctx, &h)?;
    println!("attention logits row 0: {:?}", &logits.row(0)[..6]);

    let target = vec![0.1; d];
    println!(
        "union grad error {:.1e}",
        grad_check_layer(&union, &ctx, &h, &target)?
    );
    println!(
        "gcn grad error {:.1e}",
        grad_check_layer(&gcn, &ctx, &h, &target)?
    );
    Ok(())
}

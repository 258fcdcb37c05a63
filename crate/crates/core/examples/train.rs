//! Plain and coefficient-weighted GCN on a small 4-cycle detection task.
//!
//! ```text
//! cargo run --release --example train [EPOCHS]
//! ```

use union_subgraph::dataset::cycle_splits;
use union_subgraph::neural::{prepare_samples, train_classifier, ModelKind, TrainConfig};
use union_subgraph::Result;

fn main() -> Result<()> {
    let epochs = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(30);
    let (train, val, test) = cycle_splits(4, (400, 100, 400), 0)?;
    for model in [
        ModelKind::Gcn,
        ModelKind::UnionGcn,
        ModelKind::Gin,
        ModelKind::UnionGin,
    ] {
        let c = model.uses_coefficients();
        let (tr, va, te) = (
            prepare_samples(&train, c)?,
            prepare_samples(&val, c)?,
            prepare_samples(&test, c)?,
        );
        let mut cfg = TrainConfig::new(model);
        cfg.epochs = epochs;
        let (_, r) = train_classifier(&tr, &va, &te, &cfg)?;
        println!(
            "{:<10} best epoch {:>3}  train {:.3}  val {:.3}  test {:.3}",
            model.name(),
            r.best_epoch,
            r.train_acc,
            r.val_acc,
            r.test_acc
        );
    }
    Ok(())
}

mod common;

use common::{attention_error, plugin_error, trans_error, union_layer_error};

const SEEDS: std::ops::Range<u64> = 0..5;
const LIMIT: f64 = 1e-4;

fn worst(f: fn(u64) -> f64) -> f64 {
    SEEDS.map(f).fold(0.0, f64::max)
}

#[test]
fn trans_gradients() {
    let e = worst(trans_error);
    assert!(e < LIMIT, "{e}");
}

#[test]
fn union_layer_gradients() {
    let e = worst(union_layer_error);
    assert!(e < LIMIT, "{e}");
}

#[test]
fn plugin_gradients() {
    let e = worst(plugin_error);
    assert!(e < LIMIT, "{e}");
}

#[test]
fn attention_gradients() {
    let e = worst(attention_error);
    assert!(e < LIMIT, "{e}");
}

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::layers::{GraphContext, Layer, MpLayer, SoftmaxAxis};
use super::mlp::{Linear, Parameters};
use super::tensor::DenseTensor;
use crate::error::{Error, Result};

pub const NUM_CLASSES: usize = 2;
pub const NUM_LAYERS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Gcn,
    UnionGcn,
    Gin,
    /// GIN-like aggregation with coefficient weights (the union layer).
    UnionGin,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::Gcn,
        ModelKind::UnionGcn,
        ModelKind::Gin,
        ModelKind::UnionGin,
    ];

    pub fn uses_coefficients(self) -> bool {
        matches!(self, ModelKind::UnionGcn | ModelKind::UnionGin)
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Gcn => "gcn",
            ModelKind::UnionGcn => "union-gcn",
            ModelKind::Gin => "gin",
            ModelKind::UnionGin => "union-gin",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown model {s:?}")))
    }
}

/// Two message-passing layers, mean pooling and a linear head.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classifier {
    pub kind: ModelKind,
    pub layers: Vec<MpLayer>,
    pub head: Linear,
}

/// Log-softmax cross-entropy of `logits` against `label`, with its gradient.
pub fn cross_entropy(logits: &[f64], label: usize) -> (f64, Vec<f64>) {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let z: f64 = logits.iter().map(|x| (x - max).exp()).sum();
    let probs: Vec<f64> = logits.iter().map(|x| (x - max).exp() / z).collect();
    let loss = -(probs[label].max(f64::MIN_POSITIVE)).ln();
    let grad = probs
        .iter()
        .enumerate()
        .map(|(i, p)| p - if i == label { 1.0 } else { 0.0 })
        .collect();
    (loss, grad)
}

fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in xs.iter().enumerate() {
        if *x > xs[best] {
            best = i;
        }
    }
    best
}

impl Classifier {
    pub fn new<R: Rng>(
        kind: ModelKind,
        input: usize,
        hidden: usize,
        axis: SoftmaxAxis,
        rng: &mut R,
    ) -> Self {
        let plugin = kind.uses_coefficients().then_some(axis);
        let layer = |i: usize, o: usize, rng: &mut R| match kind {
            ModelKind::Gcn | ModelKind::UnionGcn => MpLayer::gcn(i, o, plugin, rng),
            ModelKind::Gin | ModelKind::UnionGin => MpLayer::gin(i, o, plugin, rng),
        };
        let mut layers = Vec::with_capacity(NUM_LAYERS);
        let mut width = input;
        for _ in 0..NUM_LAYERS {
            layers.push(layer(width, hidden, rng));
            width = hidden;
        }
        Classifier {
            kind,
            layers,
            head: Linear::new(hidden, NUM_CLASSES, rng),
        }
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].input_dim()
    }

    /// Mean-pooled node embedding after the last layer.
    pub fn embed(&self, ctx: &GraphContext, x: &DenseTensor) -> Result<DenseTensor> {
        let mut h = x.clone();
        for layer in &self.layers {
            h = layer.forward(ctx, &h)?.0;
        }
        Ok(h.mean_rows())
    }

    pub fn logits(&self, ctx: &GraphContext, x: &DenseTensor) -> Result<Vec<f64>> {
        Ok(self.head.forward(&self.embed(ctx, x)?)?.data().to_vec())
    }

    pub fn predict(&self, ctx: &GraphContext, x: &DenseTensor) -> Result<usize> {
        Ok(argmax(&self.logits(ctx, x)?))
    }

    /// Cross-entropy loss on one graph and the gradient of every parameter.
    pub fn loss_and_grad(
        &self,
        ctx: &GraphContext,
        x: &DenseTensor,
        label: usize,
    ) -> Result<(f64, Classifier)> {
        let mut caches = Vec::with_capacity(self.layers.len());
        let mut h = x.clone();
        for layer in &self.layers {
            let (out, cache) = layer.forward(ctx, &h)?;
            caches.push(cache);
            h = out;
        }
        let pooled = h.mean_rows();
        let logits = self.head.forward(&pooled)?;
        let (loss, dlogits) = cross_entropy(logits.data(), label);
        let dlogits = DenseTensor::new(1, NUM_CLASSES, dlogits)?;
        let (dpooled, head) = self.head.backward(&pooled, &dlogits);
        let n = h.rows().max(1) as f64;
        let mut dh = DenseTensor::zeros(h.rows(), h.cols());
        for r in 0..h.rows() {
            for (g, d) in dh.row_mut(r).iter_mut().zip(dpooled.data()) {
                *g = d / n;
            }
        }
        let mut layer_grads = Vec::with_capacity(self.layers.len());
        for (layer, cache) in self.layers.iter().zip(&caches).rev() {
            let (dx, g) = layer.backward(ctx, cache, &dh);
            layer_grads.push(g);
            dh = dx;
        }
        layer_grads.reverse();
        Ok((
            loss,
            Classifier {
                kind: self.kind,
                layers: layer_grads,
                head,
            },
        ))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Parameters for Classifier {
    fn visit(&self, f: &mut dyn FnMut(&[f64])) {
        self.layers.iter().for_each(|l| l.visit(f));
        self.head.visit(f);
    }

    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut [f64])) {
        self.layers.iter_mut().for_each(|l| l.visit_mut(f));
        self.head.visit_mut(f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_entropy_gradient_sums_to_zero() {
        let (loss, g) = cross_entropy(&[1.0, 3.0], 0);
        assert!((loss - (1.0 + (-2f64).exp()).ln() - 2.0).abs() < 1e-12);
        assert!((g.iter().sum::<f64>()).abs() < 1e-12);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in ModelKind::ALL {
            assert_eq!(k.name().parse::<ModelKind>().unwrap(), k);
        }
        assert!("transformer".parse::<ModelKind>().is_err());
    }
}

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::tensor::DenseTensor;
use crate::error::{Error, Result};

/// Anything holding trainable `f64` slices in a fixed order.
pub trait Parameters {
    fn visit(&self, f: &mut dyn FnMut(&[f64]));
    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut [f64]));

    fn num_params(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |s| n += s.len());
        n
    }

    fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.num_params());
        self.visit(&mut |s| out.extend_from_slice(s));
        out
    }

    fn assign(&mut self, flat: &[f64]) {
        let mut at = 0;
        self.visit_mut(&mut |s| {
            s.copy_from_slice(&flat[at..at + s.len()]);
            at += s.len();
        });
        debug_assert_eq!(at, flat.len());
    }

    fn fill(&mut self, x: f64) {
        self.visit_mut(&mut |s| s.fill(x));
    }
}

/// `y = x W + b`, with `W` of shape `in x out`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Linear {
    pub weight: DenseTensor,
    pub bias: Vec<f64>,
}

impl Linear {
    pub fn new<R: Rng>(input: usize, output: usize, rng: &mut R) -> Self {
        Linear {
            weight: DenseTensor::glorot(input, output, rng),
            bias: vec![0.0; output],
        }
    }

    /// Identity map of width `n` with zero bias.
    pub fn identity(n: usize) -> Self {
        Linear {
            weight: DenseTensor::identity(n),
            bias: vec![0.0; n],
        }
    }

    pub fn input_dim(&self) -> usize {
        self.weight.rows()
    }

    pub fn output_dim(&self) -> usize {
        self.weight.cols()
    }

    pub fn forward(&self, x: &DenseTensor) -> Result<DenseTensor> {
        let mut y = x.matmul(&self.weight)?;
        for r in 0..y.rows() {
            for (o, b) in y.row_mut(r).iter_mut().zip(&self.bias) {
                *o += b;
            }
        }
        Ok(y)
    }

    /// Returns `(dx, grads)` for input `x` and upstream `dy`.
    pub fn backward(&self, x: &DenseTensor, dy: &DenseTensor) -> (DenseTensor, Linear) {
        let dw = x.t_matmul(dy).expect("shapes follow forward");
        let mut db = vec![0.0; self.output_dim()];
        for r in 0..dy.rows() {
            for (g, d) in db.iter_mut().zip(dy.row(r)) {
                *g += d;
            }
        }
        let dx = dy.matmul_t(&self.weight).expect("shapes follow forward");
        (
            dx,
            Linear {
                weight: dw,
                bias: db,
            },
        )
    }
}

impl Parameters for Linear {
    fn visit(&self, f: &mut dyn FnMut(&[f64])) {
        f(self.weight.data());
        f(&self.bias);
    }

    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut [f64])) {
        f(self.weight.data_mut());
        f(&mut self.bias);
    }
}

/// Linear layers with ReLU between them (not after the last).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    pub layers: Vec<Linear>,
}

/// Inputs seen by each layer during a forward pass.
#[derive(Debug, Clone)]
pub struct MlpCache {
    inputs: Vec<DenseTensor>,
}

impl Mlp {
    /// MLP through the given widths, e.g. `[1, 16, 8]`.
    pub fn new<R: Rng>(dims: &[usize], rng: &mut R) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::InvalidParameter(
                "an MLP needs at least one layer".into(),
            ));
        }
        Ok(Mlp {
            layers: dims
                .windows(2)
                .map(|w| Linear::new(w[0], w[1], rng))
                .collect(),
        })
    }

    pub fn from_layers(layers: Vec<Linear>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidParameter(
                "an MLP needs at least one layer".into(),
            ));
        }
        if let Some(w) = layers
            .windows(2)
            .find(|w| w[0].output_dim() != w[1].input_dim())
        {
            return Err(Error::DimensionMismatch(format!(
                "layer widths {} and {} do not chain",
                w[0].output_dim(),
                w[1].input_dim()
            )));
        }
        Ok(Mlp { layers })
    }

    pub fn identity(n: usize) -> Self {
        Mlp {
            layers: vec![Linear::identity(n)],
        }
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].input_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().output_dim()
    }

    pub fn forward(&self, x: &DenseTensor) -> Result<DenseTensor> {
        Ok(self.forward_cached(x)?.0)
    }

    pub fn forward_cached(&self, x: &DenseTensor) -> Result<(DenseTensor, MlpCache)> {
        if x.cols() != self.input_dim() {
            return Err(Error::DimensionMismatch(format!(
                "MLP expects width {}, got {}",
                self.input_dim(),
                x.cols()
            )));
        }
        let mut inputs = Vec::with_capacity(self.layers.len());
        let mut cur = x.clone();
        for (i, layer) in self.layers.iter().enumerate() {
            let mut y = layer.forward(&cur)?;
            if i + 1 < self.layers.len() {
                y.data_mut().iter_mut().for_each(|v| *v = v.max(0.0));
            }
            inputs.push(cur);
            cur = y;
        }
        Ok((cur, MlpCache { inputs }))
    }

    pub fn backward(&self, cache: &MlpCache, dy: &DenseTensor) -> (DenseTensor, Mlp) {
        let mut grads = Vec::with_capacity(self.layers.len());
        let mut d = dy.clone();
        for (i, layer) in self.layers.iter().enumerate().rev() {
            let (dx, g) = layer.backward(&cache.inputs[i], &d);
            grads.push(g);
            d = dx;
            if i > 0 {
                // the input of layer i is relu(pre-activation); mask by its sign
                for (dv, &a) in d.data_mut().iter_mut().zip(cache.inputs[i].data()) {
                    if a <= 0.0 {
                        *dv = 0.0;
                    }
                }
            }
        }
        grads.reverse();
        (d, Mlp { layers: grads })
    }
}

impl Parameters for Mlp {
    fn visit(&self, f: &mut dyn FnMut(&[f64])) {
        self.layers.iter().for_each(|l| l.visit(f));
    }

    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut [f64])) {
        self.layers.iter_mut().for_each(|l| l.visit_mut(f));
    }
}

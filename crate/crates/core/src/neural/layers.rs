use rand::Rng;
use serde::{Deserialize, Serialize};

use super::mlp::{Mlp, MlpCache, Parameters};
use super::tensor::DenseTensor;
use crate::descriptors::CoefficientTable;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Hidden width of the coefficient transform.
pub const TRANS_HIDDEN: usize = 16;

/// Directed adjacency of one graph plus its normalized coefficients.
///
/// Directed pairs `(v, u)` are numbered node by node in ascending neighbor
/// order, matching [`CoefficientTable::normalized_values`].
#[derive(Debug, Clone)]
pub struct GraphContext {
    num_nodes: usize,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    reverse: Vec<usize>,
    coeffs: Option<Vec<f64>>,
}

impl GraphContext {
    pub fn new(g: &Graph, coeffs: Option<&CoefficientTable>) -> Result<Self> {
        let n = g.num_nodes();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * g.num_edges());
        offsets.push(0);
        for v in 0..n {
            targets.extend_from_slice(g.neighbors(v));
            offsets.push(targets.len());
        }
        let mut reverse = vec![0; targets.len()];
        for v in 0..n {
            for p in offsets[v]..offsets[v + 1] {
                let u = targets[p];
                let q = offsets[u]
                    + targets[offsets[u]..offsets[u + 1]]
                        .binary_search(&v)
                        .expect("symmetric");
                reverse[p] = q;
            }
        }
        let coeffs = match coeffs {
            None => None,
            Some(t) => {
                if !t.matches(g) {
                    let (u, v) = g.edges().first().copied().unwrap_or((0, 0));
                    return Err(Error::MissingCoefficient { u, v });
                }
                Some(t.normalized_values().to_vec())
            }
        };
        Ok(GraphContext {
            num_nodes: n,
            offsets,
            targets,
            reverse,
            coeffs,
        })
    }

    /// Replaces the per-pair coefficient inputs, given in pair order.
    pub fn with_pair_values(mut self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.num_pairs() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} directed pairs",
                values.len(),
                self.num_pairs()
            )));
        }
        self.coeffs = Some(values);
        Ok(self)
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_pairs(&self) -> usize {
        self.targets.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Pair indices `(v, ·)`.
    pub fn pairs_of(&self, v: usize) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    pub fn target(&self, p: usize) -> usize {
        self.targets[p]
    }

    /// Index of `(u, v)` for the pair `p = (v, u)`.
    pub fn reverse(&self, p: usize) -> usize {
        self.reverse[p]
    }

    pub fn coefficients(&self) -> Result<&[f64]> {
        self.coeffs
            .as_deref()
            .ok_or_else(|| Error::InvalidParameter("layer needs a coefficient table".into()))
    }

    fn check_rows(&self, h: &DenseTensor) -> Result<()> {
        if h.rows() != self.num_nodes {
            return Err(Error::DimensionMismatch(format!(
                "{} feature rows for {} nodes",
                h.rows(),
                self.num_nodes
            )));
        }
        Ok(())
    }
}

/// A differentiable layer over one graph.
pub trait Layer: Parameters + Clone {
    type Cache;

    fn forward(&self, ctx: &GraphContext, h: &DenseTensor) -> Result<(DenseTensor, Self::Cache)>;

    /// Gradient with respect to the input rows and to every parameter.
    fn backward(
        &self,
        ctx: &GraphContext,
        cache: &Self::Cache,
        dout: &DenseTensor,
    ) -> (DenseTensor, Self);
}

/// Over which pairs the channel-wise softmax of [`Trans`] is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SoftmaxAxis {
    /// Pairs `(v, ·)` sharing the receiving node `v`.
    Receiver,
    /// Pairs `(·, u)` sharing the sending node `u`.
    Sender,
}

/// Scalar coefficient to `d` channel weights: `softmax(MLP(ã))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trans {
    pub mlp: Mlp,
    pub axis: SoftmaxAxis,
}

#[derive(Debug, Clone)]
pub struct TransCache {
    mlp: MlpCache,
    pub weights: DenseTensor,
}

impl Trans {
    pub fn new<R: Rng>(channels: usize, axis: SoftmaxAxis, rng: &mut R) -> Self {
        Trans {
            mlp: Mlp::new(&[1, TRANS_HIDDEN, channels], rng).expect("fixed widths"),
            axis,
        }
    }

    pub fn channels(&self) -> usize {
        self.mlp.output_dim()
    }

    /// Pairs normalized together in the group keyed by `node`.
    fn group(&self, ctx: &GraphContext, node: usize) -> Vec<usize> {
        match self.axis {
            SoftmaxAxis::Receiver => ctx.pairs_of(node).collect(),
            SoftmaxAxis::Sender => ctx.pairs_of(node).map(|p| ctx.reverse(p)).collect(),
        }
    }

    /// Per-pair channel weights, `num_pairs x channels`.
    pub fn forward(&self, ctx: &GraphContext) -> Result<(DenseTensor, TransCache)> {
        let a = DenseTensor::new(ctx.num_pairs(), 1, ctx.coefficients()?.to_vec())?;
        let (s, mlp) = self.mlp.forward_cached(&a)?;
        let d = self.channels();
        let mut t = DenseTensor::zeros(ctx.num_pairs(), d);
        for node in 0..ctx.num_nodes() {
            let group = self.group(ctx, node);
            for c in 0..d {
                let max = group
                    .iter()
                    .map(|&p| s.get(p, c))
                    .fold(f64::NEG_INFINITY, f64::max);
                let z: f64 = group.iter().map(|&p| (s.get(p, c) - max).exp()).sum();
                for &p in &group {
                    t.set(p, c, (s.get(p, c) - max).exp() / z);
                }
            }
        }
        Ok((t.clone(), TransCache { mlp, weights: t }))
    }

    /// Parameter gradients for upstream `dt` on the weights.
    pub fn backward(&self, ctx: &GraphContext, cache: &TransCache, dt: &DenseTensor) -> Trans {
        let t = &cache.weights;
        let d = self.channels();
        let mut ds = DenseTensor::zeros(t.rows(), d);
        for node in 0..ctx.num_nodes() {
            let group = self.group(ctx, node);
            for c in 0..d {
                let dot: f64 = group.iter().map(|&p| t.get(p, c) * dt.get(p, c)).sum();
                for &p in &group {
                    ds.set(p, c, t.get(p, c) * (dt.get(p, c) - dot));
                }
            }
        }
        let (_, mlp) = self.mlp.backward(&cache.mlp, &ds);
        Trans {
            mlp,
            axis: self.axis,
        }
    }

    /// Weights of the pairs `(v, ·)`; fails for an isolated `v`.
    pub fn weights_at(&self, ctx: &GraphContext, v: usize) -> Result<DenseTensor> {
        if ctx.degree(v) == 0 {
            return Err(Error::IsolatedNode(v));
        }
        let (t, _) = self.forward(ctx)?;
        let rows: Vec<Vec<f64>> = ctx.pairs_of(v).map(|p| t.row(p).to_vec()).collect();
        DenseTensor::from_rows(&rows)
    }
}

impl Parameters for Trans {
    fn visit(&self, f: &mut dyn FnMut(&[f64])) {
        self.mlp.visit(f);
    }

    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut [f64])) {
        self.mlp.visit_mut(f);
    }
}

impl Layer for Trans {
    type Cache = TransCache;

    /// Ignores `h`; the output is the pair weight matrix.
    fn forward(&self, ctx: &GraphContext, _h: &DenseTensor) -> Result<(DenseTensor, TransCache)> {
        Trans::forward(self, ctx)
    }

    fn backward(
        &self,
        ctx: &GraphContext,
        cache: &TransCache,
        dout: &DenseTensor,
    ) -> (DenseTensor, Self) {
        (
            DenseTensor::zeros(ctx.num_nodes(), 0),
            Trans::backward(self, ctx, cache, dout),
        )
    }
}

/// Aggregation scheme of a message-passing layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseKind {
    /// `ReLU((Σ_{u ∈ N(v) ∪ {v}} w·h_u / sqrt((d_v+1)(d_u+1))) W + b)`.
    GcnLike,
    /// `MLP((1+ε) h_v + Σ_{u ∈ N(v)} w·h_u)`.
    GinLike,
}

/// Per-message multiplier `w(v, u)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MessageWeights {
    Ones,
    /// `1 / deg(v)`.
    Mean,
    Trans(Trans),
}

/// One message-passing layer; with [`MessageWeights::Trans`] it carries
/// the structural-coefficient plugin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpLayer {
    pub base: BaseKind,
    pub epsilon: f64,
    pub mlp: Mlp,
    pub weights: MessageWeights,
}

#[derive(Debug, Clone)]
pub struct MpCache {
    input: DenseTensor,
    trans: Option<TransCache>,
    mlp: MlpCache,
    output: DenseTensor,
}

impl MpLayer {
    /// GCN-like layer `input -> output`.
    pub fn gcn<R: Rng>(
        input: usize,
        output: usize,
        plugin: Option<SoftmaxAxis>,
        rng: &mut R,
    ) -> Self {
        MpLayer {
            base: BaseKind::GcnLike,
            epsilon: 0.0,
            mlp: Mlp::new(&[input, output], rng).expect("fixed widths"),
            weights: plugin.map_or(MessageWeights::Ones, |axis| {
                MessageWeights::Trans(Trans::new(input, axis, rng))
            }),
        }
    }

    /// GIN-like layer with a two-layer MLP `input -> output -> output`.
    pub fn gin<R: Rng>(
        input: usize,
        output: usize,
        plugin: Option<SoftmaxAxis>,
        rng: &mut R,
    ) -> Self {
        MpLayer {
            base: BaseKind::GinLike,
            epsilon: 0.0,
            mlp: Mlp::new(&[input, output, output], rng).expect("fixed widths"),
            weights: plugin.map_or(MessageWeights::Ones, |axis| {
                MessageWeights::Trans(Trans::new(input, axis, rng))
            }),
        }
    }

    /// The union layer: GIN-like aggregation with coefficient weights.
    pub fn union(epsilon: f64, mlp: Mlp, trans: Trans) -> Result<Self> {
        if trans.channels() != mlp.input_dim() {
            return Err(Error::DimensionMismatch(format!(
                "transform gives {} channels, MLP expects {}",
                trans.channels(),
                mlp.input_dim()
            )));
        }
        Ok(MpLayer {
            base: BaseKind::GinLike,
            epsilon,
            mlp,
            weights: MessageWeights::Trans(trans),
        })
    }

    pub fn input_dim(&self) -> usize {
        self.mlp.input_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.mlp.output_dim()
    }

    fn self_weight(&self, ctx: &GraphContext, v: usize) -> f64 {
        match self.base {
            BaseKind::GcnLike => 1.0 / (ctx.degree(v) + 1) as f64,
            BaseKind::GinLike => 1.0 + self.epsilon,
        }
    }

    fn pair_scale(&self, ctx: &GraphContext, v: usize, u: usize) -> f64 {
        let w = match self.weights {
            MessageWeights::Mean => 1.0 / ctx.degree(v) as f64,
            _ => 1.0,
        };
        match self.base {
            BaseKind::GcnLike => w / (((ctx.degree(v) + 1) * (ctx.degree(u) + 1)) as f64).sqrt(),
            BaseKind::GinLike => w,
        }
    }
}

impl Parameters for MpLayer {
    fn visit(&self, f: &mut dyn FnMut(&[f64])) {
        if self.base == BaseKind::GinLike {
            f(std::slice::from_ref(&self.epsilon));
        }
        self.mlp.visit(f);
        if let MessageWeights::Trans(t) = &self.weights {
            t.visit(f);
        }
    }

    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut [f64])) {
        if self.base == BaseKind::GinLike {
            f(std::slice::from_mut(&mut self.epsilon));
        }
        self.mlp.visit_mut(f);
        if let MessageWeights::Trans(t) = &mut self.weights {
            t.visit_mut(f);
        }
    }
}

impl Layer for MpLayer {
    type Cache = MpCache;

    fn forward(&self, ctx: &GraphContext, h: &DenseTensor) -> Result<(DenseTensor, MpCache)> {
        ctx.check_rows(h)?;
        let d = self.input_dim();
        if h.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "layer expects width {d}, got {}",
                h.cols()
            )));
        }
        let trans = match &self.weights {
            MessageWeights::Trans(t) => Some(t.forward(ctx)?.1),
            _ => None,
        };
        let mut z = DenseTensor::zeros(ctx.num_nodes(), d);
        for v in 0..ctx.num_nodes() {
            let sw = self.self_weight(ctx, v);
            let zr = z.row_mut(v);
            for (o, x) in zr.iter_mut().zip(h.row(v)) {
                *o = sw * x;
            }
            for p in ctx.pairs_of(v) {
                let u = ctx.target(p);
                let k = self.pair_scale(ctx, v, u);
                match &trans {
                    Some(tc) => {
                        for ((o, x), w) in zr.iter_mut().zip(h.row(u)).zip(tc.weights.row(p)) {
                            *o += k * w * x;
                        }
                    }
                    None => {
                        for (o, x) in zr.iter_mut().zip(h.row(u)) {
                            *o += k * x;
                        }
                    }
                }
            }
        }
        let (mut out, mlp) = self.mlp.forward_cached(&z)?;
        if self.base == BaseKind::GcnLike {
            out.data_mut().iter_mut().for_each(|x| *x = x.max(0.0));
        }
        Ok((
            out.clone(),
            MpCache {
                input: h.clone(),
                trans,
                mlp,
                output: out,
            },
        ))
    }

    fn backward(
        &self,
        ctx: &GraphContext,
        cache: &MpCache,
        dout: &DenseTensor,
    ) -> (DenseTensor, Self) {
        let mut dy = dout.clone();
        if self.base == BaseKind::GcnLike {
            for (g, &y) in dy.data_mut().iter_mut().zip(cache.output.data()) {
                if y <= 0.0 {
                    *g = 0.0;
                }
            }
        }
        let (dz, mlp_grad) = self.mlp.backward(&cache.mlp, &dy);
        let h = &cache.input;
        let d = self.input_dim();
        let mut dh = DenseTensor::zeros(h.rows(), d);
        let mut deps = 0.0;
        let mut dt = cache
            .trans
            .as_ref()
            .map(|tc| DenseTensor::zeros(tc.weights.rows(), d));
        for v in 0..ctx.num_nodes() {
            let sw = self.self_weight(ctx, v);
            let dzv = dz.row(v);
            if self.base == BaseKind::GinLike {
                deps += dzv.iter().zip(h.row(v)).map(|(a, b)| a * b).sum::<f64>();
            }
            for (o, g) in dh.row_mut(v).iter_mut().zip(dzv) {
                *o += sw * g;
            }
            for p in ctx.pairs_of(v) {
                let u = ctx.target(p);
                let k = self.pair_scale(ctx, v, u);
                match (&cache.trans, &mut dt) {
                    (Some(tc), Some(dt)) => {
                        let w = tc.weights.row(p);
                        for c in 0..d {
                            dh.row_mut(u)[c] += k * w[c] * dzv[c];
                        }
                        for c in 0..d {
                            dt.row_mut(p)[c] = k * dzv[c] * h.get(u, c);
                        }
                    }
                    _ => {
                        for c in 0..d {
                            dh.row_mut(u)[c] += k * dzv[c];
                        }
                    }
                }
            }
        }
        let weights = match (&self.weights, &cache.trans, &dt) {
            (MessageWeights::Trans(t), Some(tc), Some(dt)) => {
                MessageWeights::Trans(t.backward(ctx, tc, dt))
            }
            (w, _, _) => w.clone(),
        };
        let grads = MpLayer {
            base: self.base,
            epsilon: deps,
            mlp: mlp_grad,
            weights,
        };
        (dh, grads)
    }
}

/// Dot-product attention logits with a coefficient bias on adjacent pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttentionBias {
    pub wq: DenseTensor,
    pub wk: DenseTensor,
    pub trans: Trans,
}

#[derive(Debug, Clone)]
pub struct AttentionCache {
    h: DenseTensor,
    q: DenseTensor,
    k: DenseTensor,
    trans: TransCache,
}

impl AttentionBias {
    pub fn new<R: Rng>(d: usize, axis: SoftmaxAxis, rng: &mut R) -> Self {
        AttentionBias {
            wq: DenseTensor::glorot(d, d, rng),
            wk: DenseTensor::glorot(d, d, rng),
            trans: Trans::new(d, axis, rng),
        }
    }

    pub fn from_parts(wq: DenseTensor, wk: DenseTensor, trans: Trans) -> Result<Self> {
        let d = wq.rows();
        if wq.cols() != d || wk.rows() != d || wk.cols() != d {
            return Err(Error::DimensionMismatch(
                "attention weights must be d x d".into(),
            ));
        }
        Ok(AttentionBias { wq, wk, trans })
    }
}

impl Parameters for AttentionBias {
    fn visit(&self, f: &mut dyn FnMut(&[f64])) {
        f(self.wq.data());
        f(self.wk.data());
        self.trans.visit(f);
    }

    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut [f64])) {
        f(self.wq.data_mut());
        f(self.wk.data_mut());
        self.trans.visit_mut(f);
    }
}

impl Layer for AttentionBias {
    type Cache = AttentionCache;

    /// `n x n` logits.
    fn forward(
        &self,
        ctx: &GraphContext,
        h: &DenseTensor,
    ) -> Result<(DenseTensor, AttentionCache)> {
        ctx.check_rows(h)?;
        let d = self.wq.rows();
        if h.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "attention expects width {d}, got {}",
                h.cols()
            )));
        }
        let q = h.matmul(&self.wq)?;
        let k = h.matmul(&self.wk)?;
        let mut a = q.matmul_t(&k)?;
        a.scale(1.0 / (d as f64).sqrt());
        let (t, trans) = self.trans.forward(ctx)?;
        let channels = t.cols() as f64;
        for v in 0..ctx.num_nodes() {
            for p in ctx.pairs_of(v) {
                let u = ctx.target(p);
                let bias = t.row(p).iter().sum::<f64>() / channels;
                a.set(v, u, a.get(v, u) + bias);
            }
        }
        Ok((
            a,
            AttentionCache {
                h: h.clone(),
                q,
                k,
                trans,
            },
        ))
    }

    fn backward(
        &self,
        ctx: &GraphContext,
        cache: &AttentionCache,
        dout: &DenseTensor,
    ) -> (DenseTensor, Self) {
        let d = self.wq.rows();
        let scale = 1.0 / (d as f64).sqrt();
        let mut dq = dout.matmul(&cache.k).expect("n x n times n x d");
        dq.scale(scale);
        let mut dk = dout.t_matmul(&cache.q).expect("n x n times n x d");
        dk.scale(scale);
        let dwq = cache.h.t_matmul(&dq).expect("shapes follow forward");
        let dwk = cache.h.t_matmul(&dk).expect("shapes follow forward");
        let mut dh = dq.matmul_t(&self.wq).expect("shapes follow forward");
        dh.add_assign(&dk.matmul_t(&self.wk).expect("shapes follow forward"));
        let channels = self.trans.channels();
        let mut dt = DenseTensor::zeros(ctx.num_pairs(), channels);
        for v in 0..ctx.num_nodes() {
            for p in ctx.pairs_of(v) {
                let g = dout.get(v, ctx.target(p)) / channels as f64;
                dt.row_mut(p).fill(g);
            }
        }
        let trans = self.trans.backward(ctx, &cache.trans, &dt);
        (
            dh,
            AttentionBias {
                wq: dwq,
                wk: dwk,
                trans,
            },
        )
    }
}

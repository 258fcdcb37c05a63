use super::layers::{GraphContext, Layer};
use super::tensor::DenseTensor;
use crate::error::{Error, Result};

pub const FD_STEP: f64 = 1e-5;

/// Largest relative error `|g_a − g_fd| / max(1, |g_a|, |g_fd|)` between
/// the analytic gradient returned by `f` and central finite differences of
/// its loss.
pub fn grad_check<F>(theta: &[f64], f: F) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    let (_, analytic) = f(theta)?;
    if analytic.len() != theta.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} gradient entries for {} parameters",
            analytic.len(),
            theta.len()
        )));
    }
    let mut probe = theta.to_vec();
    let mut worst: f64 = 0.0;
    for i in 0..theta.len() {
        probe[i] = theta[i] + FD_STEP;
        let up = f(&probe)?.0;
        probe[i] = theta[i] - FD_STEP;
        let down = f(&probe)?.0;
        probe[i] = theta[i];
        let fd = (up - down) / (2.0 * FD_STEP);
        let ga = analytic[i];
        if !ga.is_finite() || !fd.is_finite() {
            return Err(Error::NonFinite(format!("gradient of parameter {i}")));
        }
        worst = worst.max((ga - fd).abs() / 1f64.max(ga.abs()).max(fd.abs()));
    }
    Ok(worst)
}

/// Mean-squared error between the row mean of `out` and `target`, with the
/// gradient on `out`.
pub fn pooled_mse(out: &DenseTensor, target: &[f64]) -> Result<(f64, DenseTensor)> {
    if target.len() != out.cols() {
        return Err(Error::DimensionMismatch(format!(
            "target width {} for output width {}",
            target.len(),
            out.cols()
        )));
    }
    let pooled = out.mean_rows();
    let c = out.cols().max(1) as f64;
    let diff: Vec<f64> = pooled
        .data()
        .iter()
        .zip(target)
        .map(|(p, t)| p - t)
        .collect();
    let loss = diff.iter().map(|d| d * d).sum::<f64>() / c;
    let mut dout = DenseTensor::zeros(out.rows(), out.cols());
    let n = out.rows().max(1) as f64;
    for r in 0..out.rows() {
        for (g, d) in dout.row_mut(r).iter_mut().zip(&diff) {
            *g = 2.0 * d / (c * n);
        }
    }
    Ok((loss, dout))
}

/// Gradient check of a layer's parameters under [`pooled_mse`].
pub fn grad_check_layer<L: Layer>(
    layer: &L,
    ctx: &GraphContext,
    h: &DenseTensor,
    target: &[f64],
) -> Result<f64> {
    grad_check(&layer.flatten(), |theta| {
        let mut l = layer.clone();
        l.assign(theta);
        let (out, cache) = l.forward(ctx, h)?;
        let (loss, dout) = pooled_mse(&out, target)?;
        let (_, grads) = l.backward(ctx, &cache, &dout);
        Ok((loss, grads.flatten()))
    })
}

/// Gradient check of a layer's input features under [`pooled_mse`].
pub fn grad_check_input<L: Layer>(
    layer: &L,
    ctx: &GraphContext,
    h: &DenseTensor,
    target: &[f64],
) -> Result<f64> {
    grad_check(h.data(), |x| {
        let hx = DenseTensor::new(h.rows(), h.cols(), x.to_vec())?;
        let (out, cache) = layer.forward(ctx, &hx)?;
        let (loss, dout) = pooled_mse(&out, target)?;
        let (dh, _) = layer.backward(ctx, &cache, &dout);
        Ok((loss, dh.data().to_vec()))
    })
}

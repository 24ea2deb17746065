//! Training objective and its analytic gradient.
//!
//! For a batch B of size b:
//!
//! ```text
//! L = (1/b) Σ_i ‖x_i − x̃_i‖²
//!   + (α/b) Σ_{layers before reconstruction} Σ_i ‖h_i‖₂
//!   + β (‖Y_B‖_F + Σ_{hidden} ‖W‖_F)
//! ```
//!
//! `Y_B` is the block of latent rows touched by the batch, so rows outside
//! the batch never receive gradient. The reconstruction weights are not
//! regularized. Norm subgradients at zero are taken as zero.

use serde::{Deserialize, Serialize};

use super::network::{forward, ForwardTrace, Model, Params};
use crate::error::{Error, Result};
use crate::numerics::{norm, Matrix};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LossTerms {
    pub total: f64,
    pub reconstruction: f64,
    pub activity: f64,
    pub weight: f64,
}

impl LossTerms {
    fn new(reconstruction: f64, activity: f64, weight: f64) -> Self {
        Self {
            total: reconstruction + activity + weight,
            reconstruction,
            activity,
            weight,
        }
    }
}

fn distinct(indices: &[usize]) -> Vec<usize> {
    let mut v = indices.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn latent_block_norm(model: &Model, indices: &[usize]) -> f64 {
    distinct(indices)
        .iter()
        .map(|&i| model.params.latent.row(i).iter().map(|x| x * x).sum::<f64>())
        .sum::<f64>()
        .sqrt()
}

pub fn loss(trace: &ForwardTrace, x_batch: &Matrix, model: &Model) -> Result<LossTerms> {
    let recon = trace.reconstruction();
    if recon.shape() != x_batch.shape() {
        return Err(Error::invalid(format!(
            "batch shape {:?} does not match reconstruction {:?}",
            x_batch.shape(),
            recon.shape()
        )));
    }
    let b = trace.batch_len().max(1) as f64;
    let cfg = &model.config;

    let reconstruction = recon
        .as_slice()
        .iter()
        .zip(x_batch.as_slice())
        .map(|(r, x)| (x - r) * (x - r))
        .sum::<f64>()
        / b;

    let n_act = trace.activations.len() - 1;
    let activity = if cfg.alpha == 0.0 {
        0.0
    } else {
        let s: f64 = trace.activations[..n_act]
            .iter()
            .flat_map(|h| h.iter_rows().map(norm))
            .sum();
        cfg.alpha * s / b
    };

    let weight = if cfg.beta == 0.0 {
        0.0
    } else {
        let hidden: f64 = model
            .params
            .hidden()
            .iter()
            .map(|l| l.weights.frobenius_norm())
            .sum();
        cfg.beta * (latent_block_norm(model, &trace.indices) + hidden)
    };

    Ok(LossTerms::new(reconstruction, activity, weight))
}

/// Gradient of the batch objective with respect to every parameter.
pub fn gradients(model: &Model, indices: &[usize], x_batch: &Matrix) -> Result<Params> {
    loss_and_gradients(model, indices, x_batch).map(|(_, g)| g)
}

pub fn loss_and_gradients(
    model: &Model,
    indices: &[usize],
    x_batch: &Matrix,
) -> Result<(LossTerms, Params)> {
    let trace = forward(model, indices)?;
    let terms = loss(&trace, x_batch, model)?;
    let grads = backward(model, &trace, x_batch);
    Ok((terms, grads))
}

fn add_norm_subgradient(target: &mut [f64], v: &[f64], scale: f64) {
    let nv = norm(v);
    if nv > 0.0 {
        let s = scale / nv;
        target.iter_mut().zip(v).for_each(|(t, x)| *t += s * x);
    }
}

fn backward(model: &Model, trace: &ForwardTrace, x_batch: &Matrix) -> Params {
    let cfg = &model.config;
    let params = &model.params;
    let mut grads = params.zeros_like();
    let b = trace.batch_len().max(1) as f64;
    let n_layers = params.layers.len();

    // dL/dx̃
    let recon = trace.reconstruction();
    let mut delta = Matrix::from_fn(recon.rows(), recon.cols(), |i, j| {
        2.0 * (recon[(i, j)] - x_batch[(i, j)]) / b
    });

    for j in (0..n_layers).rev() {
        let layer = &params.layers[j];
        let input = &trace.activations[j];
        let g = &mut grads.layers[j];

        for r in 0..input.rows() {
            let h = input.row(r);
            let d = delta.row(r);
            for (p, &hp) in h.iter().enumerate() {
                if hp == 0.0 {
                    continue;
                }
                for (gw, &dq) in g.weights.row_mut(p).iter_mut().zip(d) {
                    *gw += hp * dq;
                }
            }
            for (gb, &dq) in g.bias.iter_mut().zip(d) {
                *gb += dq;
            }
        }
        if j + 1 < n_layers && cfg.beta > 0.0 {
            add_norm_subgradient(g.weights.as_mut_slice(), layer.weights.as_slice(), cfg.beta);
        }

        // dL/d(input activations)
        let mut dh = Matrix::zeros(input.rows(), input.cols());
        for r in 0..input.rows() {
            let d = delta.row(r);
            let out = dh.row_mut(r);
            for (p, o) in out.iter_mut().enumerate() {
                *o = layer.weights.row(p).iter().zip(d).map(|(w, x)| w * x).sum();
            }
        }
        if cfg.alpha > 0.0 {
            for r in 0..input.rows() {
                add_norm_subgradient(dh.row_mut(r), input.row(r), cfg.alpha / b);
            }
        }

        if j > 0 {
            let pre = &trace.pre_activations[j];
            for (x, &a) in dh.as_mut_slice().iter_mut().zip(pre.as_slice()) {
                if a <= 0.0 {
                    *x = 0.0;
                }
            }
            delta = dh;
        } else {
            for (r, &i) in trace.indices.iter().enumerate() {
                grads
                    .latent
                    .row_mut(i)
                    .iter_mut()
                    .zip(dh.row(r))
                    .for_each(|(g, x)| *g += x);
            }
            if cfg.beta > 0.0 {
                let block = latent_block_norm(model, &trace.indices);
                if block > 0.0 {
                    for i in distinct(&trace.indices) {
                        let y = params.latent.row(i);
                        grads
                            .latent
                            .row_mut(i)
                            .iter_mut()
                            .zip(y)
                            .for_each(|(g, v)| *g += cfg.beta * v / block);
                    }
                }
            }
        }
    }
    grads
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{init_model, ModelConfig};

    fn linear_model(alpha: f64, beta: f64) -> Model {
        let config = ModelConfig {
            latent_dim: 1,
            hidden_widths: Some(vec![]),
            alpha,
            beta,
            ..ModelConfig::default()
        };
        init_model(&config, 1, 1).unwrap()
    }

    #[test]
    fn three_minus_one_squared() {
        let mut m = linear_model(0.0, 0.0);
        m.params.latent[(0, 0)] = 1.0;
        m.params.layers[0].weights[(0, 0)] = 1.0;
        let t = forward(&m, &[0]).unwrap();
        let x = Matrix::from_rows(&[[3.0]]).unwrap();
        let l = loss(&t, &x, &m).unwrap();
        assert_eq!(l.total, 4.0);
        assert_eq!(l.reconstruction, 4.0);
    }

    #[test]
    fn perfect_fit_zero_loss_and_gradient() {
        let mut m = linear_model(0.0, 0.0);
        m.params.latent[(0, 0)] = 2.0;
        m.params.layers[0].weights[(0, 0)] = 3.0;
        m.params.layers[0].bias[0] = 1.0;
        let x = Matrix::from_rows(&[[7.0]]).unwrap();
        let (l, g) = loss_and_gradients(&m, &[0], &x).unwrap();
        assert_eq!(l.total, 0.0);
        assert!(g.buffers().iter().all(|b| b.iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn decomposition_sums() {
        let config = ModelConfig {
            hidden_widths: Some(vec![3, 4]),
            alpha: 0.1,
            beta: 0.2,
            seed: 8,
            ..ModelConfig::default()
        };
        let m = init_model(&config, 5, 3).unwrap();
        let x = Matrix::from_fn(2, 3, |i, j| (i + j) as f64);
        let t = forward(&m, &[1, 4]).unwrap();
        let l = loss(&t, &x, &m).unwrap();
        assert!(l.reconstruction >= 0.0 && l.activity >= 0.0 && l.weight > 0.0);
        assert!((l.total - (l.reconstruction + l.activity + l.weight)).abs() < 1e-12);
    }

    #[test]
    fn shape_mismatch_rejected() {
        let m = linear_model(0.0, 0.0);
        let t = forward(&m, &[0]).unwrap();
        assert!(loss(&t, &Matrix::zeros(1, 2), &m).is_err());
    }
}

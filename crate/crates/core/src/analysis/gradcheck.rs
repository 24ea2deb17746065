use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{forward, gradients, init_model, loss, Model, ModelConfig};
use crate::numerics::{Matrix, Rng};

pub const FD_STEP: f64 = 1e-6;
/// Denominator floor for the relative error, so that entries whose true value
/// is near zero are judged against finite-difference round-off instead.
pub const REL_ERROR_FLOOR: f64 = 1e-4;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GradCheckReport {
    pub models: usize,
    pub parameters_checked: usize,
    pub max_relative_error: f64,
}

fn batch_loss(model: &Model, indices: &[usize], x_batch: &Matrix) -> Result<f64> {
    let trace = forward(model, indices)?;
    Ok(loss(&trace, x_batch, model)?.total)
}

pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(REL_ERROR_FLOOR)
}

/// Compares the analytic gradient of one batch against central differences
/// over every parameter. Returns the largest relative error and the count.
pub fn check_model(model: &Model, indices: &[usize], x_batch: &Matrix) -> Result<(f64, usize)> {
    let analytic = gradients(model, indices, x_batch)?;
    let mut probe = model.clone();
    let n_buffers = probe.params.buffers().len();
    let mut worst = 0.0f64;
    let mut count = 0;
    for b in 0..n_buffers {
        let len = probe.params.buffers()[b].len();
        for e in 0..len {
            let orig = probe.params.buffers()[b][e];
            probe.params.buffers_mut()[b][e] = orig + FD_STEP;
            let up = batch_loss(&probe, indices, x_batch)?;
            probe.params.buffers_mut()[b][e] = orig - FD_STEP;
            let down = batch_loss(&probe, indices, x_batch)?;
            probe.params.buffers_mut()[b][e] = orig;
            let numeric = (up - down) / (2.0 * FD_STEP);
            worst = worst.max(relative_error(analytic.buffers()[b][e], numeric));
            count += 1;
        }
    }
    Ok((worst, count))
}

/// A random small network and batch: n, d, k ≤ 6, up to two hidden layers,
/// α and β each either 0 or 1e-3.
pub fn random_case(rng: &mut Rng) -> Result<(Model, Vec<usize>, Matrix)> {
    let n = 1 + rng.below(6);
    let d = 1 + rng.below(6);
    let k = 1 + rng.below(6);
    let l = rng.below(3);
    let hidden: Vec<usize> = (0..l).map(|_| 1 + rng.below(6)).collect();
    let pick = |r: &mut Rng| if r.below(2) == 0 { 0.0 } else { 1e-3 };
    let config = ModelConfig {
        latent_dim: k,
        hidden_widths: Some(hidden),
        alpha: pick(rng),
        beta: pick(rng),
        seed: rng.next_u64(),
        ..ModelConfig::default()
    };
    let mut model = init_model(&config, n, d)?;
    // Spread latent codes and biases so ReLUs see both signs.
    for x in model.params.latent.as_mut_slice() {
        *x = rng.normal();
    }
    for layer in &mut model.params.layers {
        for b in &mut layer.bias {
            *b = 0.5 * rng.normal();
        }
    }
    let mut indices: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut indices);
    indices.truncate(1 + rng.below(n));
    let x_batch = Matrix::from_fn(indices.len(), d, |_, _| rng.normal());
    Ok((model, indices, x_batch))
}

pub fn check_gradients(models: usize, rng: &mut Rng) -> Result<GradCheckReport> {
    let mut worst = 0.0f64;
    let mut total = 0;
    for _ in 0..models {
        let (model, idx, xb) = random_case(rng)?;
        let (w, c) = check_model(&model, &idx, &xb)?;
        worst = worst.max(w);
        total += c;
    }
    Ok(GradCheckReport {
        models,
        parameters_checked: total,
        max_relative_error: worst,
    })
}

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::adam::adam_step;
use super::config::ModelConfig;
use super::network::{init_model, Model};
use super::objective::{gradients, LossTerms};
use crate::error::{Error, Result};
use crate::numerics::{norm, Matrix, Rng};

const SHUFFLE_STREAM: u64 = 1;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    /// Full-data loss before the first update.
    pub initial_loss: LossTerms,
    /// Full-data loss after each epoch.
    pub epoch_losses: Vec<LossTerms>,
    pub epochs_run: usize,
    pub converged: bool,
    pub wall_time_secs: f64,
}

impl TrainReport {
    pub fn final_loss(&self) -> LossTerms {
        self.epoch_losses.last().copied().unwrap_or(self.initial_loss)
    }
}

/// Objective over all samples at once.
pub fn full_loss(model: &Model, x: &Matrix) -> LossTerms {
    const CHUNK: usize = 4096;
    let cfg = &model.config;
    let n = x.rows();
    let mut sq = 0.0;
    let mut act = 0.0;
    let mut start = 0;
    while start < n {
        let end = (start + CHUNK).min(n);
        let idx: Vec<usize> = (start..end).collect();
        let latent = model.params.latent.select_rows(&idx);
        if cfg.alpha > 0.0 {
            act += latent.iter_rows().map(norm).sum::<f64>();
        }
        let n_layers = model.params.layers.len();
        let mut h = latent;
        for (j, layer) in model.params.layers.iter().enumerate() {
            let mut a = layer.apply(&h);
            if j + 1 < n_layers {
                a.as_mut_slice().iter_mut().for_each(|v| *v = v.max(0.0));
                if cfg.alpha > 0.0 {
                    act += a.iter_rows().map(norm).sum::<f64>();
                }
            }
            h = a;
        }
        for (i, r) in idx.iter().zip(h.iter_rows()) {
            sq += x
                .row(*i)
                .iter()
                .zip(r)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>();
        }
        start = end;
    }
    let nf = n.max(1) as f64;
    let weight = if cfg.beta > 0.0 {
        cfg.beta
            * (model.params.latent.frobenius_norm()
                + model
                    .params
                    .hidden()
                    .iter()
                    .map(|l| l.weights.frobenius_norm())
                    .sum::<f64>())
    } else {
        0.0
    };
    let activity = cfg.alpha * act / nf;
    let reconstruction = sq / nf;
    LossTerms {
        total: reconstruction + activity + weight,
        reconstruction,
        activity,
        weight,
    }
}

/// Trains a fresh model on the rows of `x`.
///
/// Each epoch visits the samples in a seeded random order, in mini-batches of
/// the configured size, with one Adam step per batch.
pub fn fit(x: &Matrix, config: &ModelConfig) -> Result<(Model, TrainReport)> {
    if x.rows() == 0 || x.cols() == 0 {
        return Err(Error::invalid("cannot fit an empty matrix"));
    }
    if !x.is_finite() {
        return Err(Error::invalid("input contains non-finite values"));
    }
    let mut model = init_model(config, x.rows(), x.cols())?;
    let report = train(&mut model, x)?;
    Ok((model, report))
}

/// Runs the configured number of epochs on an existing model.
pub fn train(model: &mut Model, x: &Matrix) -> Result<TrainReport> {
    let n = x.rows();
    if model.n_samples() != n || model.output_dim() != x.cols() {
        return Err(Error::invalid(format!(
            "model expects {}x{} data, got {}x{}",
            model.n_samples(),
            model.output_dim(),
            n,
            x.cols()
        )));
    }
    let started = Instant::now();
    let cfg = model.config.clone();
    let batch = cfg.batch_for(n);
    let mut rng = Rng::stream(cfg.seed, SHUFFLE_STREAM);
    let mut order: Vec<usize> = (0..n).collect();

    let mut report = TrainReport {
        initial_loss: full_loss(model, x),
        ..TrainReport::default()
    };

    for epoch in 0..cfg.epochs {
        rng.shuffle(&mut order);
        for idx in order.chunks(batch) {
            let xb = x.select_rows(idx);
            let g = gradients(model, idx, &xb)?;
            adam_step(model, &g);
        }
        let terms = full_loss(model, x);
        report.epoch_losses.push(terms);
        report.epochs_run = epoch + 1;
        if !terms.total.is_finite() {
            report.wall_time_secs = started.elapsed().as_secs_f64();
            return Err(Error::Diverged {
                epoch,
                report: Box::new(report),
            });
        }
        if let Some(c) = cfg.convergence {
            if window_stalled(&report.epoch_losses, c.window, c.rel_tol) {
                report.converged = true;
                break;
            }
        }
    }
    report.wall_time_secs = started.elapsed().as_secs_f64();
    Ok(report)
}

/// True when the best loss of the last `window` epochs improves on the best
/// loss before them by less than `rel_tol`, relative.
fn window_stalled(losses: &[LossTerms], window: usize, rel_tol: f64) -> bool {
    if losses.len() <= window {
        return false;
    }
    let split = losses.len() - window;
    let best = |s: &[LossTerms]| s.iter().map(|t| t.total).fold(f64::INFINITY, f64::min);
    let before = best(&losses[..split]);
    let recent = best(&losses[split..]);
    (before - recent) / before.abs().max(f64::MIN_POSITIVE) < rel_tol
}

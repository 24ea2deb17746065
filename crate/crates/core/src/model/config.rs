use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Early-stopping rule: stop when the loss improved by less than `rel_tol`
/// (relative) over the last `window` epochs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    pub window: usize,
    pub rel_tol: f64,
}

impl Default for Convergence {
    fn default() -> Self {
        Self {
            window: 20,
            rel_tol: 1e-5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub latent_dim: usize,
    /// `None` selects two layers of `clamp(ceil(d / 2), 16, 256)` units.
    pub hidden_widths: Option<Vec<usize>>,
    /// Activity regularization weight.
    pub alpha: f64,
    /// Weight regularization weight.
    pub beta: f64,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub epochs: usize,
    /// `None` selects `min(n, 64)`.
    pub batch_size: Option<usize>,
    pub seed: u64,
    pub convergence: Option<Convergence>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            latent_dim: 2,
            hidden_widths: None,
            alpha: 1e-6,
            beta: 1e-4,
            learning_rate: 1e-3,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            epochs: 1000,
            batch_size: None,
            seed: 0,
            convergence: Some(Convergence::default()),
        }
    }
}

impl ModelConfig {
    pub fn default_hidden_widths(d: usize) -> Vec<usize> {
        let w = d.div_ceil(2).clamp(16, 256);
        vec![w, w]
    }

    pub fn hidden_for(&self, d: usize) -> Vec<usize> {
        self.hidden_widths
            .clone()
            .unwrap_or_else(|| Self::default_hidden_widths(d))
    }

    pub fn batch_for(&self, n: usize) -> usize {
        self.batch_size.unwrap_or_else(|| n.min(64))
    }

    /// Copy with the data-dependent defaults filled in.
    pub fn resolved(&self, n: usize, d: usize) -> ModelConfig {
        ModelConfig {
            hidden_widths: Some(self.hidden_for(d)),
            batch_size: Some(self.batch_for(n)),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.latent_dim == 0 {
            return bad("latent_dim must be at least 1".into());
        }
        if let Some(h) = &self.hidden_widths {
            if let Some(pos) = h.iter().position(|&w| w == 0) {
                return bad(format!("hidden layer {pos} has width 0"));
            }
        }
        if self.batch_size == Some(0) {
            return bad("batch_size must be at least 1".into());
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be >= 0, got {}", self.alpha));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return bad(format!("beta must be >= 0, got {}", self.beta));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning_rate must be > 0, got {}", self.learning_rate));
        }
        if !(0.0..1.0).contains(&self.adam_beta1) || !(0.0..1.0).contains(&self.adam_beta2) {
            return bad("Adam betas must lie in [0, 1)".into());
        }
        if !(self.adam_eps >= 0.0) {
            return bad("adam_eps must be >= 0".into());
        }
        if let Some(c) = self.convergence {
            if c.window < 2 {
                return bad(format!("convergence window must be >= 2, got {}", c.window));
            }
            if !(c.rel_tol >= 0.0) {
                return bad("convergence rel_tol must be >= 0".into());
            }
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the config's JSON encoding.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&json);
        hex::encode(&digest[..8])
    }
}

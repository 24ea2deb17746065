//! Model checkpoints as versioned JSON. The layout is documented in
//! `docs/formats.md`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::network::{AdamState, Model, Params};
use super::config::ModelConfig;
use crate::error::{Error, Result};

pub const CHECKPOINT_FORMAT: &str = "neurodavis-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Checkpoint {
    format: String,
    version: u32,
    seed: u64,
    n_samples: usize,
    input_dim: usize,
    latent_dim: usize,
    config: ModelConfig,
    params: Params,
    adam: AdamState,
}

pub fn to_json(model: &Model) -> Result<String> {
    let ck = Checkpoint {
        format: CHECKPOINT_FORMAT.into(),
        version: CHECKPOINT_VERSION,
        seed: model.config.seed,
        n_samples: model.n_samples(),
        input_dim: model.output_dim(),
        latent_dim: model.latent_dim(),
        config: model.config.clone(),
        params: model.params.clone(),
        adam: model.adam.clone(),
    };
    Ok(serde_json::to_string(&ck)?)
}

pub fn from_json(text: &str) -> Result<Model> {
    let ck: Checkpoint = serde_json::from_str(text)?;
    if ck.format != CHECKPOINT_FORMAT {
        return Err(Error::invalid(format!("not a checkpoint: format {:?}", ck.format)));
    }
    if ck.version != CHECKPOINT_VERSION {
        return Err(Error::invalid(format!(
            "unsupported checkpoint version {} (expected {CHECKPOINT_VERSION})",
            ck.version
        )));
    }
    let model = Model {
        config: ck.config,
        params: ck.params,
        adam: ck.adam,
    };
    validate(&model, ck.n_samples, ck.input_dim, ck.latent_dim)?;
    Ok(model)
}

fn validate(model: &Model, n: usize, d: usize, k: usize) -> Result<()> {
    let p = &model.params;
    if p.layers.is_empty() {
        return Err(Error::invalid("checkpoint has no reconstruction layer"));
    }
    if p.latent.shape() != (n, k) || p.recon().fan_out() != d {
        return Err(Error::invalid("checkpoint header disagrees with parameter shapes"));
    }
    let mut width = k;
    for (j, l) in p.layers.iter().enumerate() {
        if l.fan_in() != width || l.bias.len() != l.fan_out() {
            return Err(Error::invalid(format!("layer {j} has inconsistent shape")));
        }
        width = l.fan_out();
    }
    let shapes = |q: &Params| q.buffers().iter().map(|b| b.len()).collect::<Vec<_>>();
    if shapes(&model.adam.first_moment) != shapes(p) || shapes(&model.adam.second_moment) != shapes(p)
    {
        return Err(Error::invalid("optimizer state does not mirror parameters"));
    }
    if !p.is_finite() {
        return Err(Error::invalid("checkpoint contains non-finite parameters"));
    }
    Ok(())
}

pub fn save(model: &Model, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_json(model)?).map_err(|e| Error::io(path, e))
}

pub fn load(path: impl AsRef<Path>) -> Result<Model> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_json(&text)
}

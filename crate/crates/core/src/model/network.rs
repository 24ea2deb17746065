use serde::{Deserialize, Serialize};

use super::config::ModelConfig;
use crate::error::{Error, Result};
use crate::numerics::{Matrix, Rng};

/// Half-width of the uniform latent initialization.
pub const LATENT_INIT: f64 = 0.01;

const INIT_STREAM: u64 = 0;

/// Affine map `h ↦ h·W + b` with `W` stored `fan_in × fan_out`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub weights: Matrix,
    pub bias: Vec<f64>,
}

impl Layer {
    pub fn zeros(fan_in: usize, fan_out: usize) -> Self {
        Self {
            weights: Matrix::zeros(fan_in, fan_out),
            bias: vec![0.0; fan_out],
        }
    }

    pub fn fan_in(&self) -> usize {
        self.weights.rows()
    }

    pub fn fan_out(&self) -> usize {
        self.weights.cols()
    }

    pub fn apply(&self, h: &Matrix) -> Matrix {
        let mut a = h.matmul(&self.weights);
        for i in 0..a.rows() {
            for (x, b) in a.row_mut(i).iter_mut().zip(&self.bias) {
                *x += b;
            }
        }
        a
    }
}

/// Every trainable tensor of the network. Gradients and Adam moments reuse
/// this shape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    /// n × k; row i is the latent code of sample i (input weights and latent
    /// bias fused).
    pub latent: Matrix,
    /// Hidden layers followed by the reconstruction layer.
    pub layers: Vec<Layer>,
}

impl Params {
    pub fn zeros_like(&self) -> Params {
        Params {
            latent: Matrix::zeros(self.latent.rows(), self.latent.cols()),
            layers: self
                .layers
                .iter()
                .map(|l| Layer::zeros(l.fan_in(), l.fan_out()))
                .collect(),
        }
    }

    pub fn hidden(&self) -> &[Layer] {
        &self.layers[..self.layers.len() - 1]
    }

    pub fn recon(&self) -> &Layer {
        self.layers.last().expect("reconstruction layer")
    }

    pub fn recon_mut(&mut self) -> &mut Layer {
        self.layers.last_mut().expect("reconstruction layer")
    }

    /// Flat views of every tensor in a fixed order.
    pub fn buffers(&self) -> Vec<&[f64]> {
        let mut out = vec![self.latent.as_slice()];
        for l in &self.layers {
            out.push(l.weights.as_slice());
            out.push(&l.bias);
        }
        out
    }

    pub fn buffers_mut(&mut self) -> Vec<&mut [f64]> {
        let mut out = vec![self.latent.as_mut_slice()];
        for l in &mut self.layers {
            out.push(l.weights.as_mut_slice());
            out.push(&mut l.bias);
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.buffers().iter().all(|b| b.iter().all(|x| x.is_finite()))
    }

    pub fn parameter_count(&self) -> usize {
        self.buffers().iter().map(|b| b.len()).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub step: u64,
    pub first_moment: Params,
    pub second_moment: Params,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Model {
    /// Config with hidden widths and batch size resolved for this data.
    pub config: ModelConfig,
    pub params: Params,
    pub adam: AdamState,
}

impl Model {
    pub fn n_samples(&self) -> usize {
        self.params.latent.rows()
    }

    pub fn latent_dim(&self) -> usize {
        self.params.latent.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.params.recon().fan_out()
    }

    pub fn hidden_layers(&self) -> usize {
        self.params.layers.len() - 1
    }
}

/// Builds a freshly initialized model for `n` samples of dimension `d`.
///
/// Latent codes are drawn from `U(-0.01, 0.01)`, layer weights are
/// Glorot-uniform, biases and optimizer state start at zero.
pub fn init_model(config: &ModelConfig, n: usize, d: usize) -> Result<Model> {
    config.validate()?;
    if n == 0 || d == 0 {
        return Err(Error::invalid(format!("need n >= 1 and d >= 1, got n={n}, d={d}")));
    }
    let config = config.resolved(n, d);
    let hidden = config.hidden_for(d);
    let k = config.latent_dim;
    let mut rng = Rng::stream(config.seed, INIT_STREAM);

    let latent = Matrix::from_fn(n, k, |_, _| rng.uniform(-LATENT_INIT, LATENT_INIT));

    let mut widths = Vec::with_capacity(hidden.len() + 2);
    widths.push(k);
    widths.extend(&hidden);
    widths.push(d);
    let layers = widths
        .windows(2)
        .map(|w| {
            let (fan_in, fan_out) = (w[0], w[1]);
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            Layer {
                weights: Matrix::from_fn(fan_in, fan_out, |_, _| rng.uniform(-limit, limit)),
                bias: vec![0.0; fan_out],
            }
        })
        .collect();

    let params = Params { latent, layers };
    let zeros = params.zeros_like();
    Ok(Model {
        config,
        params,
        adam: AdamState {
            step: 0,
            first_moment: zeros.clone(),
            second_moment: zeros,
        },
    })
}

/// Per-layer values for one batch. Index 0 is the latent layer, the last
/// index the reconstruction layer.
#[derive(Clone, Debug)]
pub struct ForwardTrace {
    pub indices: Vec<usize>,
    pub pre_activations: Vec<Matrix>,
    pub activations: Vec<Matrix>,
}

impl ForwardTrace {
    pub fn reconstruction(&self) -> &Matrix {
        self.activations.last().expect("non-empty trace")
    }

    pub fn batch_len(&self) -> usize {
        self.indices.len()
    }
}

pub fn check_indices(model: &Model, indices: &[usize]) -> Result<()> {
    let n = model.n_samples();
    if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
        return Err(Error::invalid(format!("sample index {bad} out of range for n={n}")));
    }
    Ok(())
}

pub fn forward(model: &Model, indices: &[usize]) -> Result<ForwardTrace> {
    check_indices(model, indices)?;
    let latent = model.params.latent.select_rows(indices);
    let n_layers = model.params.layers.len();
    let mut pre = Vec::with_capacity(n_layers + 1);
    let mut post = Vec::with_capacity(n_layers + 1);
    pre.push(latent.clone());
    post.push(latent);
    for (j, layer) in model.params.layers.iter().enumerate() {
        let a = layer.apply(post.last().unwrap());
        let h = if j + 1 < n_layers { relu(&a) } else { a.clone() };
        pre.push(a);
        post.push(h);
    }
    Ok(ForwardTrace {
        indices: indices.to_vec(),
        pre_activations: pre,
        activations: post,
    })
}

pub(crate) fn relu(a: &Matrix) -> Matrix {
    let mut h = a.clone();
    h.as_mut_slice().iter_mut().for_each(|x| *x = x.max(0.0));
    h
}

/// Decodes arbitrary latent rows through the hidden and reconstruction layers.
pub fn decode(params: &Params, latent_rows: &Matrix) -> Matrix {
    let n_layers = params.layers.len();
    let mut h = latent_rows.clone();
    for (j, layer) in params.layers.iter().enumerate() {
        let a = layer.apply(&h);
        h = if j + 1 < n_layers { relu(&a) } else { a };
    }
    h
}

/// The n × k embedding: a copy of the latent table.
pub fn embed(model: &Model) -> Matrix {
    model.params.latent.clone()
}

/// Reconstruction of every training sample.
pub fn reconstruct(model: &Model) -> Matrix {
    const CHUNK: usize = 4096;
    let n = model.n_samples();
    let d = model.output_dim();
    let mut out = Vec::with_capacity(n * d);
    let mut start = 0;
    while start < n {
        let end = (start + CHUNK).min(n);
        let idx: Vec<usize> = (start..end).collect();
        let rows = model.params.latent.select_rows(&idx);
        out.extend_from_slice(decode(&model.params, &rows).as_slice());
        start = end;
    }
    Matrix::new(n, d, out).expect("shape")
}

//! The embedding network: a trainable latent code per sample, decoded through
//! ReLU hidden layers into a linear reconstruction of the input.

mod adam;
pub mod checkpoint;
mod config;
mod network;
mod objective;
mod train;

pub use adam::{adam_step, sgd_step};
pub use config::{Convergence, ModelConfig};
pub use network::{
    decode, embed, forward, init_model, reconstruct, AdamState, ForwardTrace, Layer, Model,
    Params, LATENT_INIT,
};
pub use objective::{gradients, loss, loss_and_gradients, LossTerms};
pub use train::{fit, full_loss, train, TrainReport};

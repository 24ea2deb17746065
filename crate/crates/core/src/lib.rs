//! Unsupervised low-dimensional embedding by per-sample latent regression,
//! plus the metrics used to judge how much structure an embedding keeps.

pub mod analysis;
pub mod cli;
pub mod datasets;
pub mod error;
pub mod metrics;
pub mod model;
pub mod numerics;
pub mod plot;

pub use error::{Error, Result};

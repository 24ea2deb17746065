//! Dense linear algebra, seeded randomness, distances, spectral norm and PCA.

mod distance;
mod linalg;
mod matrix;
mod pca;
mod rng;

pub use distance::{
    diameter, distances_for_pairs, pair_count, pairwise_euclidean, sample_pairs, PairDistance,
    DEFAULT_PAIR_BUDGET,
};
pub use linalg::{spectral_norm, symmetric_eigen, SPECTRAL_MAX_ITER, SPECTRAL_TOL};
pub use matrix::{dot, euclidean, norm, Matrix};
pub use pca::{pca, Pca};
pub use rng::Rng;

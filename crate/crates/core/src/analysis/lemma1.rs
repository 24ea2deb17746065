use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{spectral_norm, Matrix, Rng, SPECTRAL_TOL};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub trials: usize,
    pub max_norm: f64,
    /// Shape, Frobenius norm and step of the worst trial.
    pub worst_shape: (usize, usize),
    pub worst_frobenius: f64,
    pub worst_eta: f64,
}

/// Spectral norm of `I − η W Wᵀ`.
pub fn contraction_norm(w: &Matrix, eta: f64) -> Result<f64> {
    let wwt = w.matmul(&w.transpose());
    let r = w.rows();
    let m = Matrix::from_fn(r, r, |i, j| f64::from(u8::from(i == j)) - eta * wwt[(i, j)]);
    spectral_norm(&m, SPECTRAL_TOL)
}

/// Samples random `W` with `‖W‖_F ≤ 1` (a quarter of trials exactly on the
/// boundary) and `η ∈ (0, 1]`, and reports the largest `‖I − η W Wᵀ‖₂`.
pub fn check_lemma1(trials: usize, max_dim: usize, rng: &mut Rng) -> Result<Lemma1Report> {
    if trials == 0 || max_dim == 0 {
        return Err(Error::invalid("lemma check needs trials ≥ 1 and max_dim ≥ 1"));
    }
    let mut report = Lemma1Report {
        trials,
        max_norm: 0.0,
        worst_shape: (0, 0),
        worst_frobenius: 0.0,
        worst_eta: 0.0,
    };
    for t in 0..trials {
        let r = 1 + rng.below(max_dim);
        let c = 1 + rng.below(max_dim);
        let mut w = Matrix::from_fn(r, c, |_, _| rng.normal());
        let f = w.frobenius_norm();
        let target = if t % 4 == 0 { 1.0 } else { 1.0 - rng.unit() };
        if f > 0.0 {
            w.scale(target / f);
        }
        let eta = 1.0 - rng.unit();
        let s = contraction_norm(&w, eta)?;
        if s > report.max_norm {
            report.max_norm = s;
            report.worst_shape = (r, c);
            report.worst_frobenius = w.frobenius_norm();
            report.worst_eta = eta;
        }
    }
    Ok(report)
}

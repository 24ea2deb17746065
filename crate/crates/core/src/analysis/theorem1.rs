use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{gradients, init_model, sgd_step, Model, ModelConfig};
use crate::numerics::{diameter, euclidean, Matrix, Rng};

/// δ as a fraction of the data diameter.
pub const DELTA_FRACTION: f64 = 1e-3;
/// Allowed relative growth of the gap per step.
pub const GAP_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContractionTrace {
    pub pair: (usize, usize),
    pub eta: f64,
    pub delta: f64,
    pub pair_distance: f64,
    /// `‖y_i − y_j‖` before the first step and after each step.
    pub gaps: Vec<f64>,
    /// `‖W_recon‖_F` at the same points, after projection.
    pub frobenius: Vec<f64>,
}

impl ContractionTrace {
    /// Largest `gap_{t+1} / gap_t − 1` over the trace (0 for an empty trace;
    /// steps from a zero gap count only if the gap becomes positive).
    pub fn max_relative_increase(&self) -> f64 {
        self.gaps
            .windows(2)
            .map(|w| {
                if w[0] > 0.0 {
                    w[1] / w[0] - 1.0
                } else if w[1] > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            })
            .fold(f64::NEG_INFINITY, f64::max)
            .max(0.0)
    }

    pub fn is_non_increasing(&self, tol: f64) -> bool {
        self.gaps.windows(2).all(|w| w[1] <= w[0] * (1.0 + tol))
    }
}

fn project_recon(model: &mut Model) -> f64 {
    let w = &mut model.params.recon_mut().weights;
    let f = w.frobenius_norm();
    if f > 1.0 {
        w.scale(1.0 / f);
        w.frobenius_norm()
    } else {
        f
    }
}

fn latent_gap(model: &Model, (i, j): (usize, usize)) -> f64 {
    euclidean(model.params.latent.row(i), model.params.latent.row(j))
}

/// Trains the linear model (no hidden layer, α = β = 0) by full-batch gradient
/// descent, keeping `‖W_recon‖_F ≤ 1` by rescaling before and after every
/// step, and records the latent gap of `pair` at every step.
pub fn check_theorem1(
    x: &Matrix,
    pair: (usize, usize),
    latent_dim: usize,
    eta: f64,
    steps: usize,
    rng: &mut Rng,
) -> Result<ContractionTrace> {
    let n = x.rows();
    let (i, j) = pair;
    if i >= n || j >= n || i == j {
        return Err(Error::invalid(format!("pair ({i}, {j}) invalid for {n} rows")));
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::invalid(format!("eta = {eta} must lie in [0, 1]")));
    }
    let delta = DELTA_FRACTION * diameter(x);
    let pair_distance = euclidean(x.row(i), x.row(j));
    if pair_distance != 0.0 && pair_distance >= delta {
        return Err(Error::invalid(format!(
            "pair distance {pair_distance:e} is not below delta {delta:e}"
        )));
    }
    let config = ModelConfig {
        latent_dim,
        hidden_widths: Some(Vec::new()),
        alpha: 0.0,
        beta: 0.0,
        seed: rng.next_u64(),
        ..ModelConfig::default()
    };
    let mut model = init_model(&config, n, x.cols())?;
    let all: Vec<usize> = (0..n).collect();
    let mut gaps = Vec::with_capacity(steps + 1);
    let mut frobenius = Vec::with_capacity(steps + 1);
    frobenius.push(project_recon(&mut model));
    gaps.push(latent_gap(&model, pair));
    for _ in 0..steps {
        let g = gradients(&model, &all, x)?;
        sgd_step(&mut model.params, &g, eta);
        frobenius.push(project_recon(&mut model));
        gaps.push(latent_gap(&model, pair));
    }
    Ok(ContractionTrace {
        pair,
        eta,
        delta,
        pair_distance,
        gaps,
        frobenius,
    })
}

/// A seeded `n × d` standard-normal dataset whose row 1 is row 0 displaced by
/// `closeness · diameter` in a random direction.
pub fn close_pair_dataset(n: usize, d: usize, closeness: f64, rng: &mut Rng) -> Matrix {
    let mut x = Matrix::from_fn(n, d, |_, _| rng.normal());
    let base = x.row(0).to_vec();
    x.row_mut(1).copy_from_slice(&base);
    let diam = diameter(&x);
    let dir: Vec<f64> = (0..d).map(|_| rng.normal()).collect();
    let dn = crate::numerics::norm(&dir);
    for (k, v) in x.row_mut(1).iter_mut().enumerate() {
        *v = base[k] + closeness * diam * dir[k] / dn;
    }
    x
}

/// One seeded run of the contraction check.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Theorem1Case {
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub latent_dim: usize,
    /// Pair distance as a fraction of the data diameter.
    pub closeness: f64,
    pub eta: f64,
    pub steps: usize,
}

impl Theorem1Case {
    pub fn run(&self) -> Result<ContractionTrace> {
        let mut rng = Rng::new(self.seed);
        let x = close_pair_dataset(self.n, self.d, self.closeness, &mut rng);
        check_theorem1(&x, (0, 1), self.latent_dim, self.eta, self.steps, &mut rng)
    }
}

/// Twenty 20-point configurations over d ∈ 2..=5 and k ∈ {2, 3}, with the
/// pair at 1e-6 of the diameter, η = 0.5 and 200 steps.
pub fn default_theorem1_cases() -> Vec<Theorem1Case> {
    (0..20u64)
        .map(|seed| {
            let d = 2 + (seed % 4) as usize;
            Theorem1Case {
                seed,
                n: 20,
                d,
                latent_dim: if d >= 3 && seed % 3 == 0 { 3 } else { 2 },
                closeness: 1e-6,
                eta: 0.5,
                steps: 200,
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub cases: usize,
    pub failures: usize,
    pub max_relative_increase: f64,
    pub max_frobenius: f64,
}

pub fn check_theorem1_suite(cases: &[Theorem1Case]) -> Result<Theorem1Report> {
    let mut report = Theorem1Report {
        cases: cases.len(),
        failures: 0,
        max_relative_increase: 0.0,
        max_frobenius: 0.0,
    };
    for case in cases {
        let t = case.run()?;
        if !t.is_non_increasing(GAP_TOLERANCE) {
            report.failures += 1;
        }
        report.max_relative_increase = report.max_relative_increase.max(t.max_relative_increase());
        report.max_frobenius = t.frobenius.iter().fold(report.max_frobenius, |a, &f| a.max(f));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_pair_contracts() {
        let mut rng = Rng::new(1);
        let mut x = Matrix::from_fn(20, 3, |_, _| rng.normal());
        let r0 = x.row(0).to_vec();
        x.row_mut(5).copy_from_slice(&r0);
        let t = check_theorem1(&x, (0, 5), 2, 1.0, 200, &mut rng).unwrap();
        assert!(t.is_non_increasing(GAP_TOLERANCE));
        assert!(t.gaps.last().unwrap() < &t.gaps[0]);
        assert!(t.frobenius.iter().all(|&f| f <= 1.0 + 1e-12));
    }

    #[test]
    fn zero_eta_constant_gap() {
        let mut rng = Rng::new(2);
        let x = close_pair_dataset(20, 3, 1e-6, &mut rng);
        let t = check_theorem1(&x, (0, 1), 2, 0.0, 50, &mut rng).unwrap();
        assert!(t.gaps.iter().all(|&g| g == t.gaps[0]));
    }

    #[test]
    fn default_suite_contracts() {
        let r = check_theorem1_suite(&default_theorem1_cases()).unwrap();
        assert_eq!(r.cases, 20);
        assert_eq!(r.failures, 0, "{r:?}");
        assert!(r.max_frobenius <= 1.0 + 1e-12);
    }

    #[test]
    fn precondition_enforced() {
        let mut rng = Rng::new(3);
        let x = Matrix::from_fn(20, 3, |_, _| rng.normal());
        let err = check_theorem1(&x, (0, 1), 2, 0.5, 10, &mut rng).unwrap_err();
        assert!(err.to_string().contains("delta"));
        assert!(check_theorem1(&x, (0, 1), 2, 1.5, 10, &mut rng).is_err());
    }
}

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datasets::Dataset;
use crate::error::Result;
use crate::metrics::{
    centroid_distance_preservation, cluster_area_preservation, distance_preservation, keys,
    EvalReport,
};
use crate::model::{embed, fit, ModelConfig};
use crate::numerics::{Matrix, Rng, DEFAULT_PAIR_BUDGET};

pub const DEFAULT_RUNS: usize = 10;
/// ChaCha stream used for pair sampling, apart from init (0) and shuffling (1).
const PAIR_STREAM: u64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub runs: Vec<EvalReport>,
    pub summary: BTreeMap<String, Summary>,
}

impl SuiteReport {
    pub fn median(&self, metric: &str) -> Option<f64> {
        self.summary.get(metric).map(|s| s.median)
    }

    pub fn values(&self, metric: &str) -> Vec<f64> {
        self.runs.iter().filter_map(|r| r.get(metric)).collect()
    }
}

/// Median of a non-empty slice; the mean of the middle two for even lengths.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 { v[m] } else { (v[m - 1] + v[m]) / 2.0 }
}

/// Structure-preservation scores of one embedding: distance ρ always,
/// centroid ρ with at least 3 classes, and area r when both spaces are 2D.
pub fn score_embedding(ds: &Dataset, low: &Matrix, seed: u64, config_hash: Option<String>) -> Result<EvalReport> {
    let mut report = EvalReport::new(ds.name.clone(), seed, config_hash);
    let mut rng = Rng::stream(seed, PAIR_STREAM);
    report.insert(
        keys::DISTANCE_RHO,
        distance_preservation(&ds.x, low, Some(DEFAULT_PAIR_BUDGET), &mut rng)?,
    )?;
    if let Some(labels) = &ds.labels {
        if ds.n_classes() >= 3 {
            report.insert(keys::CENTROID_RHO, centroid_distance_preservation(&ds.x, low, labels)?)?;
            if ds.d() == 2 && low.cols() == 2 {
                report.insert(keys::AREA_R, cluster_area_preservation(&ds.x, low, labels)?)?;
            }
        }
    }
    Ok(report)
}

/// Runs `embedder` once per seed `base_seed..base_seed + n_runs` (in
/// parallel), scores every embedding and summarizes each metric. Runs are
/// reported in seed order.
pub fn run_suite_with<F>(ds: &Dataset, n_runs: usize, base_seed: u64, config_hash: Option<String>, embedder: F) -> Result<SuiteReport>
where
    F: Fn(u64) -> Result<Matrix> + Sync,
{
    let seeds: Vec<u64> = (0..n_runs as u64).map(|r| base_seed.wrapping_add(r)).collect();
    let mut runs: Vec<EvalReport> = seeds
        .par_iter()
        .map(|&seed| score_embedding(ds, &embedder(seed)?, seed, config_hash.clone()))
        .collect::<Result<_>>()?;
    runs.sort_by_key(|r| r.seed);
    let mut collected: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for r in &runs {
        for (k, &v) in &r.metrics {
            collected.entry(k.clone()).or_default().push(v);
        }
    }
    let summary = collected
        .into_iter()
        .map(|(k, v)| {
            let s = Summary {
                median: median(&v),
                min: v.iter().copied().fold(f64::INFINITY, f64::min),
                max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            };
            (k, s)
        })
        .collect();
    Ok(SuiteReport { runs, summary })
}

/// `fit → embed → score` for each seed, the run seed replacing `config.seed`.
pub fn run_preservation_suite(ds: &Dataset, config: &ModelConfig, n_runs: usize, base_seed: u64) -> Result<SuiteReport> {
    let hash = config.resolved(ds.n(), ds.d()).hash();
    run_suite_with(ds, n_runs, base_seed, Some(hash), |seed| {
        let cfg = ModelConfig { seed, ..config.clone() };
        let (model, _) = fit(&ds.x, &cfg)?;
        Ok(embed(&model))
    })
}

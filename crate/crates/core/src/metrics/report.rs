use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Metric names written by the CLI and the preservation suite.
pub mod keys {
    pub const DISTANCE_RHO: &str = "distance_spearman";
    pub const CENTROID_RHO: &str = "centroid_spearman";
    pub const AREA_R: &str = "area_pearson";
    pub const KNN_ACCURACY: &str = "knn_accuracy";
    pub const KNN_F1: &str = "knn_f1_macro";
    pub const KMEANS_ARI: &str = "kmeans_ari";
    pub const KMEANS_FMI: &str = "kmeans_fmi";
    pub const AGGLO_ARI: &str = "agglomerative_ari";
    pub const AGGLO_FMI: &str = "agglomerative_fmi";
    pub const MWU_U: &str = "mann_whitney_u";
    pub const MWU_P: &str = "mann_whitney_p";
    /// Prefix for per-class distance preservation, followed by the class id.
    pub const CLASS_RHO_PREFIX: &str = "class_distance_spearman_";
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub schema_version: u32,
    pub dataset: String,
    pub seed: u64,
    pub config_hash: Option<String>,
    pub metrics: BTreeMap<String, f64>,
}

impl EvalReport {
    pub fn new(dataset: impl Into<String>, seed: u64, config_hash: Option<String>) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            dataset: dataset.into(),
            seed,
            config_hash,
            metrics: BTreeMap::new(),
        }
    }

    /// Records a metric; non-finite values are rejected.
    pub fn insert(&mut self, name: impl Into<String>, value: f64) -> Result<()> {
        let name = name.into();
        if !value.is_finite() {
            return Err(Error::Numeric {
                message: format!("metric {name} is not finite"),
                last: value,
            });
        }
        self.metrics.insert(name, value);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.metrics.get(name).copied()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut r = EvalReport::new("ring", 3, Some("abc".into()));
        r.insert(keys::DISTANCE_RHO, 0.97).unwrap();
        r.insert(keys::KNN_ACCURACY, 1.0).unwrap();
        let back: EvalReport = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_json().unwrap().contains("\"schema_version\": 1"));
    }

    #[test]
    fn rejects_nan() {
        let mut r = EvalReport::new("x", 0, None);
        assert!(r.insert("bad", f64::NAN).is_err());
        assert!(r.metrics.is_empty());
    }
}

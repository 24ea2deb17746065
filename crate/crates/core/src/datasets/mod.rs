//! Datasets: synthetic generators, the 9D polynomial lift, CSV I/O and
//! min-max scaling.

mod csvio;
mod polygon;
mod synthetic;
mod transform;

pub use csvio::{format_f64, load_csv, read_csv, read_header, save_csv, write_csv, LabelColumn};
pub use polygon::{area as polygon_area, contains as polygon_contains};
pub use synthetic::{
    apportion, gen_synthetic, olympic_template, shape_template, world_map_template,
    OlympicTemplate, PolygonTemplate, SyntheticKind, NOISE_FRACTION,
};
pub use transform::{lift9, minmax_scale};

use crate::error::{Error, Result};
use crate::numerics::Matrix;

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub x: Matrix,
    /// Dense class ids `0..n_classes`, one per row.
    pub labels: Option<Vec<usize>>,
    pub feature_names: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, x: Matrix) -> Self {
        Self {
            name: name.into(),
            x,
            labels: None,
            feature_names: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != self.x.rows() {
            return Err(Error::invalid(format!(
                "{} labels for {} rows",
                labels.len(),
                self.x.rows()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn d(&self) -> usize {
        self.x.cols()
    }

    pub fn n_classes(&self) -> usize {
        self.labels
            .as_ref()
            .and_then(|l| l.iter().max())
            .map_or(0, |m| m + 1)
    }
}

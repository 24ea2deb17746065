use super::Dataset;
use crate::error::{Error, Result};
use crate::numerics::Matrix;

pub const LIFT9_FEATURES: [&str; 9] = ["x+y", "x-y", "xy", "x2", "y2", "x2y", "xy2", "x3", "y3"];

/// Maps each 2D row `(x, y)` to `(x+y, x−y, xy, x², y², x²y, xy², x³, y³)`.
pub fn lift9(ds: &Dataset) -> Result<Dataset> {
    if ds.d() != 2 {
        return Err(Error::invalid(format!("lift9 needs 2D data, got d={}", ds.d())));
    }
    let x = Matrix::from_fn(ds.n(), 9, |i, j| {
        let (x, y) = (ds.x[(i, 0)], ds.x[(i, 1)]);
        match j {
            0 => x + y,
            1 => x - y,
            2 => x * y,
            3 => x * x,
            4 => y * y,
            5 => x * x * y,
            6 => x * y * y,
            7 => x * x * x,
            _ => y * y * y,
        }
    });
    Ok(Dataset {
        name: format!("{}_lift9", ds.name),
        x,
        labels: ds.labels.clone(),
        feature_names: Some(LIFT9_FEATURES.iter().map(|s| s.to_string()).collect()),
    })
}

/// Affinely maps every column onto `[0, 1]`; constant columns become zero.
pub fn minmax_scale(ds: &Dataset) -> Dataset {
    let (n, d) = ds.x.shape();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for r in ds.x.iter_rows() {
        for j in 0..d {
            lo[j] = lo[j].min(r[j]);
            hi[j] = hi[j].max(r[j]);
        }
    }
    let x = Matrix::from_fn(n, d, |i, j| {
        let span = hi[j] - lo[j];
        if span > 0.0 {
            ((ds.x[(i, j)] - lo[j]) / span).clamp(0.0, 1.0)
        } else {
            0.0
        }
    });
    Dataset { x, ..ds.clone() }
}

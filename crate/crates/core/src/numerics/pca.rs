use super::linalg::symmetric_eigen;
use super::matrix::{dot, norm, Matrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Pca {
    /// d × m, orthonormal principal directions as columns.
    pub components: Matrix,
    /// n × m, centered data projected onto `components`.
    pub projected: Matrix,
    /// Sample variance (denominator n − 1) along each component.
    pub explained_variance: Vec<f64>,
    pub total_variance: f64,
    pub means: Vec<f64>,
}

impl Pca {
    pub fn explained_variance_ratio(&self) -> Vec<f64> {
        self.explained_variance
            .iter()
            .map(|v| v / self.total_variance)
            .collect()
    }
}

/// Principal component analysis of the rows of `x`.
///
/// Uses the d × d covariance when `d <= n`, otherwise the n × n Gram matrix of
/// the centered rows. Each component is signed so that its largest-magnitude
/// entry is positive.
pub fn pca(x: &Matrix, n_components: usize) -> Result<Pca> {
    let (n, d) = x.shape();
    if n < 2 {
        return Err(Error::invalid("PCA needs at least 2 rows"));
    }
    let max = (n - 1).min(d);
    if n_components == 0 || n_components > max {
        return Err(Error::invalid(format!(
            "n_components must be in 1..={max}, got {n_components}"
        )));
    }
    let centered = x.centered();
    let means = x.column_means();
    let ss = centered.frobenius_norm().powi(2);
    if ss == 0.0 {
        return Err(Error::Degenerate("PCA of constant data".into()));
    }
    let denom = (n - 1) as f64;

    let (values, mut comps) = if d <= n {
        let cov = centered.gram_cols();
        let (vals, vecs) = symmetric_eigen(&cov)?;
        let comps = Matrix::from_fn(d, n_components, |r, c| vecs[(r, c)]);
        (vals[..n_components].to_vec(), comps)
    } else {
        let gram = centered.transpose().gram_cols();
        let (vals, vecs) = symmetric_eigen(&gram)?;
        let ct = centered.transpose();
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n_components);
        let cutoff = vals[0].abs() * 1e-12;
        for c in 0..n_components {
            if vals[c] > cutoff {
                let u = vecs.column(c);
                let mut v = ct.mul_vec(&u);
                let s = norm(&v);
                v.iter_mut().for_each(|x| *x /= s);
                cols.push(v);
            } else {
                cols.push(complete_basis(&cols, d));
            }
        }
        let comps = Matrix::from_fn(d, n_components, |r, c| cols[c][r]);
        (vals[..n_components].to_vec(), comps)
    };

    for c in 0..n_components {
        let col = comps.column(c);
        let mut best = 0;
        for (i, v) in col.iter().enumerate() {
            if v.abs() > col[best].abs() {
                best = i;
            }
        }
        if col[best] < 0.0 {
            for r in 0..d {
                comps[(r, c)] = -comps[(r, c)];
            }
        }
    }

    let projected = centered.matmul(&comps);
    Ok(Pca {
        components: comps,
        projected,
        explained_variance: values.iter().map(|v| v.max(0.0) / denom).collect(),
        total_variance: ss / denom,
        means,
    })
}

/// A unit vector orthogonal to every vector in `basis`.
fn complete_basis(basis: &[Vec<f64>], d: usize) -> Vec<f64> {
    for e in 0..d {
        let mut v = vec![0.0; d];
        v[e] = 1.0;
        for _ in 0..2 {
            for b in basis {
                let p = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
            }
        }
        let nv = norm(&v);
        if nv > 1e-8 {
            v.iter_mut().for_each(|x| *x /= nv);
            return v;
        }
    }
    unreachable!("basis of size < d always has an orthogonal complement")
}

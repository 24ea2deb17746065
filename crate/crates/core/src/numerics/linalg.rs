use super::matrix::{dot, norm, Matrix};
use crate::error::{Error, Result};

/// Cap on squarings of the Gram matrix; `2^k` plain power steps each.
pub const SPECTRAL_MAX_ITER: usize = 64;
pub const SPECTRAL_TOL: f64 = 1e-10;

/// Largest singular value of `w`, by power iteration on the Gram matrix.
///
/// The Gram operator `G` (the smaller of `wᵀw` and `wwᵀ`) is repeatedly
/// squared, so step `t` applies `G^(2^t)` to the normalized all-ones start
/// vector. For a relative gap `ε` between the two largest eigenvalues the
/// Rayleigh quotient error after `t` squarings is at most
/// `ε (1 − ε)^(2^(t+1)) ≤ 1 / (e · 2^(t+1))` relative, whatever `ε` is, so
/// iteration continues until that bound is below `tol` and the quotient has
/// settled to within `tol`.
pub fn spectral_norm(w: &Matrix, tol: f64) -> Result<f64> {
    if w.is_empty() {
        return Err(Error::invalid("spectral norm of an empty matrix"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let g = if w.cols() <= w.rows() { w.gram_cols() } else { w.transpose().gram_cols() };
    let scale = g.frobenius_norm();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let m = g.rows();
    let ones = vec![1.0 / (m as f64).sqrt(); m];
    let min_squarings = (1.0 / (std::f64::consts::E * tol)).log2().ceil().max(0.0) as usize;
    let mut b = g.scaled(1.0 / scale);
    let mut prev = f64::NAN;
    for t in 0..SPECTRAL_MAX_ITER {
        let v = start_image(&b, &ones);
        let lambda = rayleigh(&g, &v);
        if t >= min_squarings && (lambda - prev).abs() <= tol * lambda {
            return Ok(lambda.sqrt());
        }
        prev = lambda;
        let sq = b.matmul(&b);
        let f = sq.frobenius_norm();
        if f == 0.0 || !f.is_finite() {
            return Ok(lambda.sqrt());
        }
        b = sq.scaled(1.0 / f);
    }
    Err(Error::Numeric {
        message: format!("power iteration did not converge in {SPECTRAL_MAX_ITER} squarings"),
        last: prev.sqrt(),
    })
}

/// `b · start`, normalized. When the start vector is (numerically) orthogonal
/// to the dominant eigenspace, the heaviest column of `b` is used instead.
fn start_image(b: &Matrix, start: &[f64]) -> Vec<f64> {
    let v = b.mul_vec(start);
    let heaviest = (0..b.cols())
        .map(|c| (norm(&b.column(c)), c))
        .max_by(|x, y| x.0.total_cmp(&y.0).then(y.1.cmp(&x.1)))
        .unwrap();
    let nv = norm(&v);
    let v = if nv < 1e-6 * heaviest.0 { b.column(heaviest.1) } else { v };
    let nv = norm(&v);
    v.into_iter().map(|x| x / nv).collect()
}

fn rayleigh(g: &Matrix, v: &[f64]) -> f64 {
    dot(v, &g.mul_vec(v))
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in decreasing order and the matching unit eigenvectors
/// as the columns of the second matrix.
pub fn symmetric_eigen(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = a.rows();
    if n != a.cols() {
        return Err(Error::invalid("eigendecomposition needs a square matrix"));
    }
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m[(p, q)] * m[(p, q)];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            return Ok(sorted_eigen(m, v));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::Numeric {
        message: "Jacobi eigensolver did not converge in 100 sweeps".into(),
        last: m[(0, 0)],
    })
}

fn sorted_eigen(m: Matrix, v: Matrix) -> (Vec<f64>, Matrix) {
    let n = m.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| m[(b, b)].partial_cmp(&m[(a, a)]).unwrap().then(a.cmp(&b)));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (values, vectors)
}

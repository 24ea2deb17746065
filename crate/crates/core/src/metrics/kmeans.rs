use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{Matrix, Rng};

pub const KMEANS_MAX_ITER: usize = 300;
pub const DEFAULT_RESTARTS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KMeans {
    pub labels: Vec<usize>,
    pub centroids: Matrix,
    pub inertia: f64,
    /// Inertia after each assignment step of the winning restart.
    pub inertia_trace: Vec<f64>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(c: &Matrix, p: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for j in 0..c.rows() {
        let d = sq_dist(c.row(j), p);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

fn plus_plus(x: &Matrix, k: usize, rng: &mut Rng) -> Matrix {
    let n = x.rows();
    let mut chosen = vec![rng.below(n)];
    let mut d2: Vec<f64> = (0..n).map(|i| sq_dist(x.row(i), x.row(chosen[0]))).collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut u = rng.unit() * total;
            let mut pick = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                if u < w {
                    pick = i;
                    break;
                }
                u -= w;
            }
            pick
        } else {
            rng.below(n)
        };
        chosen.push(next);
        for i in 0..n {
            d2[i] = d2[i].min(sq_dist(x.row(i), x.row(next)));
        }
    }
    x.select_rows(&chosen)
}

/// Lloyd iterations from the given centroids. An empty cluster is re-seeded
/// at the point farthest from its current centroid.
fn lloyd(x: &Matrix, mut c: Matrix) -> KMeans {
    let (n, d, k) = (x.rows(), x.cols(), c.rows());
    let mut labels = vec![usize::MAX; n];
    let mut trace = Vec::new();
    for _ in 0..KMEANS_MAX_ITER {
        let mut changed = false;
        let mut dist = vec![0.0; n];
        for i in 0..n {
            let (j, dd) = nearest(&c, x.row(i));
            dist[i] = dd;
            if labels[i] != j {
                labels[i] = j;
                changed = true;
            }
        }
        trace.push(dist.iter().sum());
        if !changed {
            break;
        }
        let mut sums = Matrix::zeros(k, d);
        let mut counts = vec![0usize; k];
        for i in 0..n {
            counts[labels[i]] += 1;
            sums.row_mut(labels[i]).iter_mut().zip(x.row(i)).for_each(|(s, v)| *s += v);
        }
        for j in 0..k {
            if counts[j] > 0 {
                let inv = 1.0 / counts[j] as f64;
                c.row_mut(j).iter_mut().zip(sums.row(j)).for_each(|(cv, s)| *cv = s * inv);
            }
        }
        for j in 0..k {
            if counts[j] == 0 {
                let far = (0..n)
                    .max_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(b.cmp(&a)))
                    .unwrap_or(0);
                c.row_mut(j).copy_from_slice(x.row(far));
                dist[far] = 0.0;
            }
        }
    }
    let inertia = *trace.last().unwrap_or(&0.0);
    KMeans { labels, centroids: c, inertia, inertia_trace: trace }
}

/// k-means++ seeding and Lloyd iterations; the restart with the lowest
/// inertia wins, ties going to the earlier restart.
pub fn kmeans(x: &Matrix, k: usize, restarts: usize, rng: &mut Rng) -> Result<KMeans> {
    if k == 0 || k > x.rows() {
        return Err(Error::invalid(format!("k = {k} must be in 1..={}", x.rows())));
    }
    if restarts == 0 {
        return Err(Error::invalid("restarts must be at least 1"));
    }
    let seeds: Vec<u64> = (0..restarts).map(|_| rng.next_u64()).collect();
    let runs: Vec<KMeans> = seeds
        .par_iter()
        .map(|&s| lloyd(x, plus_plus(x, k, &mut Rng::new(s))))
        .collect();
    let best = (0..runs.len())
        .min_by(|&a, &b| runs[a].inertia.total_cmp(&runs[b].inertia).then(a.cmp(&b)))
        .unwrap();
    Ok(runs.into_iter().nth(best).unwrap())
}

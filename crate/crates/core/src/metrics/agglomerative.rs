use crate::error::{Error, Result};
use crate::numerics::{euclidean, Matrix};

/// Average-linkage agglomerative clustering down to `k` clusters.
///
/// Cluster distances follow the Lance–Williams update. Each cluster is named
/// by its smallest member index, and among equally close pairs the one with
/// the smallest `(a, b)` names merges first. Output labels number clusters
/// by first appearance.
pub fn agglomerative(x: &Matrix, k: usize) -> Result<Vec<usize>> {
    let n = x.rows();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("k = {k} must be in 1..={n}")));
    }
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = euclidean(x.row(i), x.row(j));
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    let mut active = vec![true; n];
    let mut size = vec![1usize; n];
    let mut owner: Vec<usize> = (0..n).collect();

    // nn[i]: closest active j ≠ i, ties to the smaller j.
    let find_nn = |i: usize, dist: &[f64], active: &[bool]| -> (f64, usize) {
        let mut best = (f64::INFINITY, usize::MAX);
        for j in (0..n).filter(|&j| j != i && active[j]) {
            let d = dist[i * n + j];
            if d < best.0 {
                best = (d, j);
            }
        }
        best
    };
    let mut nn: Vec<(f64, usize)> = (0..n).map(|i| find_nn(i, &dist, &active)).collect();

    for _ in 0..n - k {
        let mut best = (f64::INFINITY, usize::MAX, usize::MAX);
        for i in (0..n).filter(|&i| active[i]) {
            let (d, j) = nn[i];
            let cand = (d, i.min(j), i.max(j));
            if cand.0 < best.0 || (cand.0 == best.0 && (cand.1, cand.2) < (best.1, best.2)) {
                best = cand;
            }
        }
        let (_, a, b) = best;
        let (na, nb) = (size[a] as f64, size[b] as f64);
        for m in (0..n).filter(|&m| active[m] && m != a && m != b) {
            let d = (na * dist[a * n + m] + nb * dist[b * n + m]) / (na + nb);
            dist[a * n + m] = d;
            dist[m * n + a] = d;
        }
        active[b] = false;
        size[a] += size[b];
        owner.iter_mut().filter(|o| **o == b).for_each(|o| *o = a);
        for m in (0..n).filter(|&m| active[m]) {
            if m == a || nn[m].1 == a || nn[m].1 == b {
                nn[m] = find_nn(m, &dist, &active);
            } else {
                let d = dist[m * n + a];
                if d < nn[m].0 || (d == nn[m].0 && a < nn[m].1) {
                    nn[m] = (d, a);
                }
            }
        }
    }

    let mut relabel = vec![usize::MAX; n];
    let mut next = 0;
    Ok(owner
        .iter()
        .map(|&o| {
            if relabel[o] == usize::MAX {
                relabel[o] = next;
                next += 1;
            }
            relabel[o]
        })
        .collect())
}

use serde::{Deserialize, Serialize};

use super::matrix::{euclidean, Matrix};
use super::rng::Rng;
use crate::error::{Error, Result};

/// Default cap on the number of point pairs used for distance correlations.
pub const DEFAULT_PAIR_BUDGET: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairDistance {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
}

/// Number of unordered pairs among `n` points.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Unordered index pairs `(i, j)`, `i < j`, in lexicographic order.
///
/// With no budget (or a budget covering every pair) all pairs are returned;
/// otherwise a uniform sample without replacement of `budget` pairs.
pub fn sample_pairs(n: usize, budget: Option<usize>, rng: &mut Rng) -> Result<Vec<(usize, usize)>> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "pairwise distances need at least 2 rows, got {n}"
        )));
    }
    let total = pair_count(n);
    match budget {
        Some(b) if b < total => {
            let linear = rng.sample_indices(total, b);
            Ok(unrank_sorted(n, &linear))
        }
        _ => {
            let mut out = Vec::with_capacity(total);
            for i in 0..n {
                for j in i + 1..n {
                    out.push((i, j));
                }
            }
            Ok(out)
        }
    }
}

/// Maps sorted lexicographic pair ranks back to `(i, j)`.
fn unrank_sorted(n: usize, ranks: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(ranks.len());
    let mut i = 0usize;
    let mut row_start = 0usize;
    for &r in ranks {
        while r >= row_start + (n - 1 - i) {
            row_start += n - 1 - i;
            i += 1;
        }
        out.push((i, i + 1 + (r - row_start)));
    }
    out
}

pub fn distances_for_pairs(x: &Matrix, pairs: &[(usize, usize)]) -> Vec<f64> {
    pairs
        .iter()
        .map(|&(i, j)| euclidean(x.row(i), x.row(j)))
        .collect()
}

pub fn pairwise_euclidean(
    x: &Matrix,
    pair_budget: Option<usize>,
    rng: &mut Rng,
) -> Result<Vec<PairDistance>> {
    let pairs = sample_pairs(x.rows(), pair_budget, rng)?;
    Ok(pairs
        .into_iter()
        .map(|(i, j)| PairDistance {
            i,
            j,
            distance: euclidean(x.row(i), x.row(j)),
        })
        .collect())
}

/// Largest pairwise Euclidean distance (exact, quadratic).
pub fn diameter(x: &Matrix) -> f64 {
    let mut best = 0.0f64;
    for i in 0..x.rows() {
        for j in i + 1..x.rows() {
            best = best.max(euclidean(x.row(i), x.row(j)));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[[f64; 2]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn three_four_five() {
        let d = pairwise_euclidean(&m(&[[0.0, 0.0], [3.0, 4.0]]), None, &mut Rng::new(0)).unwrap();
        assert_eq!(d, vec![PairDistance { i: 0, j: 1, distance: 5.0 }]);
    }

    #[test]
    fn identical_points() {
        let d = pairwise_euclidean(&m(&[[1.0, 1.0], [1.0, 1.0]]), None, &mut Rng::new(0)).unwrap();
        assert_eq!(d[0].distance, 0.0);
    }

    #[test]
    fn triangle_against_loop() {
        let x = m(&[[0.0, 0.0], [1.0, 0.0], [0.0, 2.0]]);
        let d = pairwise_euclidean(&x, None, &mut Rng::new(0)).unwrap();
        let mut brute = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                if i < j {
                    let dx = x[(i, 0)] - x[(j, 0)];
                    let dy = x[(i, 1)] - x[(j, 1)];
                    brute.push((i, j, (dx * dx + dy * dy).sqrt()));
                }
            }
        }
        let got: Vec<_> = d.iter().map(|p| (p.i, p.j, p.distance)).collect();
        assert_eq!(got, brute);
        assert_eq!(got[0].2, 1.0);
        assert_eq!(got[1].2, 2.0);
        assert!((got[2].2 - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn single_row_rejected() {
        assert!(pairwise_euclidean(&m(&[[0.0, 0.0]]), None, &mut Rng::new(0)).is_err());
    }

    #[test]
    fn unranking_covers_all_pairs() {
        let n = 7;
        let all: Vec<usize> = (0..pair_count(n)).collect();
        let pairs = unrank_sorted(n, &all);
        let expected = sample_pairs(n, None, &mut Rng::new(0)).unwrap();
        assert_eq!(pairs, expected);
    }

    #[test]
    fn budgeted_sample_is_seeded_and_sorted() {
        let a = sample_pairs(50, Some(100), &mut Rng::new(9)).unwrap();
        let b = sample_pairs(50, Some(100), &mut Rng::new(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 100);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert!(a.iter().all(|&(i, j)| i < j && j < 50));
    }
}

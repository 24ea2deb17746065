use super::correlation::{pearson_r, spearman_rho};
use crate::error::{Error, Result};
use crate::numerics::{distances_for_pairs, euclidean, sample_pairs, Matrix, Rng};

fn check_rows(high: &Matrix, low: &Matrix) -> Result<()> {
    if high.rows() != low.rows() {
        return Err(Error::invalid(format!(
            "row count mismatch: {} vs {}",
            high.rows(),
            low.rows()
        )));
    }
    Ok(())
}

fn check_labels(x: &Matrix, labels: &[usize]) -> Result<usize> {
    if labels.len() != x.rows() {
        return Err(Error::invalid(format!("{} labels for {} rows", labels.len(), x.rows())));
    }
    Ok(labels.iter().max().map_or(0, |m| m + 1))
}

/// Spearman ρ between the distances of the same index pairs in both spaces.
pub fn distance_preservation_on_pairs(high: &Matrix, low: &Matrix, pairs: &[(usize, usize)]) -> Result<f64> {
    check_rows(high, low)?;
    spearman_rho(&distances_for_pairs(high, pairs), &distances_for_pairs(low, pairs))
}

/// Spearman ρ between pairwise distances in the two spaces, over all pairs or
/// a seeded sample of `pair_budget` pairs shared by both spaces.
pub fn distance_preservation(high: &Matrix, low: &Matrix, pair_budget: Option<usize>, rng: &mut Rng) -> Result<f64> {
    check_rows(high, low)?;
    let pairs = sample_pairs(high.rows(), pair_budget, rng)?;
    distance_preservation_on_pairs(high, low, &pairs)
}

/// Per-class mean vectors, one row per class id.
pub fn class_centroids(x: &Matrix, labels: &[usize]) -> Result<Matrix> {
    let m = check_labels(x, labels)?;
    let mut sums = Matrix::zeros(m, x.cols());
    let mut counts = vec![0usize; m];
    for (row, &l) in x.iter_rows().zip(labels) {
        counts[l] += 1;
        for (s, v) in sums.row_mut(l).iter_mut().zip(row) {
            *s += v;
        }
    }
    if let Some(c) = counts.iter().position(|&c| c == 0) {
        return Err(Error::invalid(format!("class {c} has no members")));
    }
    for (c, &cnt) in counts.iter().enumerate() {
        sums.row_mut(c).iter_mut().for_each(|s| *s /= cnt as f64);
    }
    Ok(sums)
}

fn pairwise_all(x: &Matrix) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..x.rows() {
        for j in i + 1..x.rows() {
            out.push(euclidean(x.row(i), x.row(j)));
        }
    }
    out
}

/// Spearman ρ between pairwise class-centroid distances in the two spaces.
pub fn centroid_distance_preservation(high: &Matrix, low: &Matrix, labels: &[usize]) -> Result<f64> {
    check_rows(high, low)?;
    let ch = class_centroids(high, labels)?;
    if ch.rows() < 3 {
        return Err(Error::invalid(format!("centroid preservation needs at least 3 classes, got {}", ch.rows())));
    }
    let cl = class_centroids(low, labels)?;
    spearman_rho(&pairwise_all(&ch), &pairwise_all(&cl))
}

/// Axis-aligned bounding-rectangle area of each class in a 2D point set.
pub fn bounding_box_areas(x: &Matrix, labels: &[usize]) -> Result<Vec<f64>> {
    let m = check_labels(x, labels)?;
    if x.cols() != 2 {
        return Err(Error::invalid(format!("bounding-box areas need 2D points, got d={}", x.cols())));
    }
    let mut lo = vec![[f64::INFINITY; 2]; m];
    let mut hi = vec![[f64::NEG_INFINITY; 2]; m];
    for (row, &l) in x.iter_rows().zip(labels) {
        for a in 0..2 {
            lo[l][a] = lo[l][a].min(row[a]);
            hi[l][a] = hi[l][a].max(row[a]);
        }
    }
    (0..m)
        .map(|c| {
            if lo[c][0].is_infinite() {
                Err(Error::invalid(format!("class {c} has no members")))
            } else {
                Ok((hi[c][0] - lo[c][0]) * (hi[c][1] - lo[c][1]))
            }
        })
        .collect()
}

/// Pearson r between per-class bounding-rectangle areas in two 2D spaces.
pub fn cluster_area_preservation(high: &Matrix, low: &Matrix, labels: &[usize]) -> Result<f64> {
    check_rows(high, low)?;
    let ah = bounding_box_areas(high, labels)?;
    if ah.len() < 3 {
        return Err(Error::invalid(format!("area preservation needs at least 3 classes, got {}", ah.len())));
    }
    pearson_r(&ah, &bounding_box_areas(low, labels)?)
}

/// Distance preservation restricted to pairs inside each class, one value
/// per class id. Each class needs at least 3 members.
pub fn per_class_distance_preservation(
    high: &Matrix,
    low: &Matrix,
    labels: &[usize],
    pair_budget: Option<usize>,
    rng: &mut Rng,
) -> Result<Vec<f64>> {
    check_rows(high, low)?;
    let m = check_labels(high, labels)?;
    (0..m)
        .map(|c| {
            let idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == c).collect();
            if idx.len() < 3 {
                return Err(Error::invalid(format!("class {c} has {} members; need at least 3", idx.len())));
            }
            distance_preservation(&high.select_rows(&idx), &low.select_rows(&idx), pair_budget, rng)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rng;
    use proptest::prelude::*;

    fn blobs(rng: &mut Rng, n: usize, d: usize) -> Matrix {
        Matrix::from_fn(n, d, |i, _| rng.normal() + (i % 3) as f64 * 4.0)
    }

    fn rotate(x: &Matrix, t: f64) -> Matrix {
        let (c, s) = (t.cos(), t.sin());
        Matrix::from_fn(x.rows(), 2, |i, j| {
            let (a, b) = (x[(i, 0)], x[(i, 1)]);
            if j == 0 { c * a - s * b } else { s * a + c * b }
        })
    }

    #[test]
    fn identity_and_scaling() {
        let mut rng = Rng::new(1);
        let x = blobs(&mut rng, 60, 4);
        assert_eq!(distance_preservation(&x, &x, None, &mut rng).unwrap(), 1.0);
        assert_eq!(distance_preservation(&x, &x.scaled(2.0), None, &mut rng).unwrap(), 1.0);
        assert_eq!(distance_preservation(&x, &x, Some(100), &mut rng).unwrap(), 1.0);
    }

    #[test]
    fn permuted_rows_uncorrelated() {
        let mut rng = Rng::new(2);
        let x = Matrix::from_fn(200, 3, |_, _| rng.normal());
        let mut perm: Vec<usize> = (0..200).collect();
        rng.shuffle(&mut perm);
        let rho = distance_preservation(&x, &x.select_rows(&perm), None, &mut rng).unwrap();
        assert!(rho.abs() < 0.2, "{rho}");
    }

    #[test]
    fn row_mismatch() {
        let mut rng = Rng::new(0);
        assert!(distance_preservation(&Matrix::zeros(3, 2), &Matrix::zeros(4, 2), None, &mut rng).is_err());
    }

    #[test]
    fn centroid_cases() {
        let labels = vec![0, 0, 1, 1, 2, 2];
        let x = Matrix::from_rows(&[[0.0, 0.0], [0.0, 1.0], [5.0, 0.0], [5.0, 1.0], [7.0, 0.0], [7.0, 1.0]]).unwrap();
        assert_eq!(centroid_distance_preservation(&x, &x, &labels).unwrap(), 1.0);
        assert_eq!(centroid_distance_preservation(&x, &rotate(&x, 0.7), &labels).unwrap(), 1.0);
        // Collinear centroids at 0, 5, 7: distances (01, 02, 12) = (5, 7, 2).
        // Swap the order to 0, 7, 5 in the embedding: distances (7, 5, 2).
        // Ranks (2, 3, 1) vs (3, 2, 1) → ρ = 0.5.
        let y = Matrix::from_rows(&[[0.0, 0.0], [0.0, 1.0], [7.0, 0.0], [7.0, 1.0], [5.0, 0.0], [5.0, 1.0]]).unwrap();
        let rho = centroid_distance_preservation(&x, &y, &labels).unwrap();
        assert!((rho - 0.5).abs() < 1e-12);
        assert!(centroid_distance_preservation(&x, &x, &[0, 0, 1, 1, 1, 1]).is_err());
        assert!(centroid_distance_preservation(&x, &x, &[0, 0, 1, 1, 3, 3]).is_err());
    }

    #[test]
    fn area_cases() {
        let labels = vec![0, 0, 1, 1, 2, 2, 2];
        let x = Matrix::from_rows(&[
            [0.0, 0.0], [1.0, 1.0],
            [5.0, 5.0], [7.0, 8.0],
            [10.0, 0.0], [14.0, 1.0], [11.0, 0.5],
        ]).unwrap();
        let areas = bounding_box_areas(&x, &labels).unwrap();
        assert_eq!(areas, vec![1.0, 6.0, 4.0]);
        assert!((cluster_area_preservation(&x, &x, &labels).unwrap() - 1.0).abs() < 1e-15);
        assert!((cluster_area_preservation(&x, &x.scaled(2.0), &labels).unwrap() - 1.0).abs() < 1e-15);
        // Embedding areas (1, 1, 4) by hand: r = pearson((1,6,4), (1,1,4)).
        let y = Matrix::from_rows(&[
            [0.0, 0.0], [1.0, 1.0],
            [5.0, 5.0], [6.0, 6.0],
            [10.0, 0.0], [12.0, 2.0], [11.0, 0.5],
        ]).unwrap();
        let (a, b) = ([1.0, 6.0, 4.0], [1.0, 1.0, 4.0]);
        let (ma, mb) = (11.0 / 3.0, 2.0);
        let num: f64 = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let den = (a.iter().map(|x| (x - ma).powi(2)).sum::<f64>() * b.iter().map(|y| (y - mb).powi(2)).sum::<f64>()).sqrt();
        assert!((cluster_area_preservation(&x, &y, &labels).unwrap() - num / den).abs() < 1e-12);
    }

    #[test]
    fn singleton_class_area_zero() {
        let x = Matrix::from_rows(&[[0.0, 0.0], [1.0, 2.0], [3.0, 3.0]]).unwrap();
        assert_eq!(bounding_box_areas(&x, &[0, 0, 1]).unwrap(), vec![2.0, 0.0]);
    }

    #[test]
    fn per_class_identity() {
        let mut rng = Rng::new(3);
        let x = blobs(&mut rng, 30, 2);
        let labels: Vec<usize> = (0..30).map(|i| i % 3).collect();
        let v = per_class_distance_preservation(&x, &x, &labels, None, &mut rng).unwrap();
        assert_eq!(v, vec![1.0; 3]);
    }

    proptest! {
        #[test]
        fn rigid_motion_invariance(seed in any::<u64>(), t in 0.0f64..std::f64::consts::TAU, s in 0.1f64..10.0, dx in -5.0f64..5.0) {
            let mut rng = Rng::new(seed);
            let x = Matrix::from_fn(25, 2, |_, _| rng.normal());
            let mut y = rotate(&x, t).scaled(s);
            y.as_mut_slice().iter_mut().for_each(|v| *v += dx);
            let rho = distance_preservation(&x, &y, None, &mut rng).unwrap();
            prop_assert!(rho > 1.0 - 1e-9, "{}", rho);
        }
    }
}

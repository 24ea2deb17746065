use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{euclidean, Matrix, Rng};

pub const DEFAULT_KNN_K: usize = 5;
pub const DEFAULT_TEST_FRACTION: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnnScore {
    pub accuracy: f64,
    pub f1_macro: f64,
}

/// Seeded stratified split: each class contributes `round(size · test_fraction)`
/// test rows. Returns `(train, test)` index lists, each sorted.
pub fn stratified_split(labels: &[usize], test_fraction: f64, rng: &mut Rng) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(0.0..1.0).contains(&test_fraction) {
        return Err(Error::invalid(format!("test fraction {test_fraction} outside [0, 1)")));
    }
    let m = labels.iter().max().map_or(0, |v| v + 1);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for c in 0..m {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == c).collect();
        if members.is_empty() {
            continue;
        }
        rng.shuffle(&mut members);
        let n_test = (members.len() as f64 * test_fraction).round() as usize;
        if n_test >= members.len() {
            return Err(Error::invalid(format!("class {c} would be absent from the training split")));
        }
        test.extend_from_slice(&members[..n_test]);
        train.extend_from_slice(&members[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Majority vote among the `k` nearest training rows. Neighbours are ordered
/// by distance then index; a tied vote goes to the smallest class id.
pub fn knn_predict(x: &Matrix, labels: &[usize], train: &[usize], query: &[f64], k: usize) -> usize {
    let mut near: Vec<(f64, usize)> = train.iter().map(|&i| (euclidean(x.row(i), query), i)).collect();
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < near.len() {
        near.select_nth_unstable_by(k - 1, cmp);
        near.truncate(k);
    }
    let m = labels.iter().max().map_or(0, |v| v + 1);
    let mut votes = vec![0usize; m];
    for &(_, i) in &near {
        votes[labels[i]] += 1;
    }
    let best = *votes.iter().max().unwrap_or(&0);
    votes.iter().position(|&v| v == best).unwrap_or(0)
}

/// Accuracy and macro F1 over the classes present in truth or predictions.
/// A single class scores 1 on both.
pub fn classification_scores(truth: &[usize], pred: &[usize]) -> KnnScore {
    let m = truth.iter().chain(pred).max().map_or(0, |v| v + 1);
    let mut tp = vec![0usize; m];
    let mut fp = vec![0usize; m];
    let mut fn_ = vec![0usize; m];
    for (&t, &p) in truth.iter().zip(pred) {
        if t == p {
            tp[t] += 1;
        } else {
            fp[p] += 1;
            fn_[t] += 1;
        }
    }
    let correct: usize = tp.iter().sum();
    let present: Vec<usize> = (0..m).filter(|&c| tp[c] + fp[c] + fn_[c] > 0).collect();
    let f1_sum: f64 = present
        .iter()
        .map(|&c| 2.0 * tp[c] as f64 / (2 * tp[c] + fp[c] + fn_[c]) as f64)
        .sum();
    KnnScore {
        accuracy: correct as f64 / truth.len().max(1) as f64,
        f1_macro: if present.is_empty() { 1.0 } else { f1_sum / present.len() as f64 },
    }
}

/// Stratified train/test split, then k-NN classification of the test rows.
pub fn knn_evaluate(x: &Matrix, labels: &[usize], k: usize, test_fraction: f64, rng: &mut Rng) -> Result<KnnScore> {
    if labels.len() != x.rows() {
        return Err(Error::invalid(format!("{} labels for {} rows", labels.len(), x.rows())));
    }
    let (train, test) = stratified_split(labels, test_fraction, rng)?;
    if test.is_empty() {
        return Err(Error::invalid("test split is empty"));
    }
    if k == 0 || k > train.len() {
        return Err(Error::invalid(format!("k = {k} must be in 1..={}", train.len())));
    }
    let pred: Vec<usize> = test.iter().map(|&i| knn_predict(x, labels, &train, x.row(i), k)).collect();
    let truth: Vec<usize> = test.iter().map(|&i| labels[i]).collect();
    Ok(classification_scores(&truth, &pred))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_blobs(rng: &mut Rng, per: usize, gap: f64) -> (Matrix, Vec<usize>) {
        let x = Matrix::from_fn(2 * per, 2, |i, _| rng.normal() + if i < per { 0.0 } else { gap });
        let labels = (0..2 * per).map(|i| usize::from(i >= per)).collect();
        (x, labels)
    }

    #[test]
    fn separable_blobs() {
        let mut rng = Rng::new(4);
        let (x, y) = two_blobs(&mut rng, 50, 50.0);
        let s = knn_evaluate(&x, &y, 5, 0.2, &mut rng).unwrap();
        assert_eq!(s, KnnScore { accuracy: 1.0, f1_macro: 1.0 });
    }

    #[test]
    fn k_equals_train_is_majority() {
        let mut rng = Rng::new(5);
        let (x, y) = two_blobs(&mut rng, 50, 50.0);
        let s = knn_evaluate(&x, &y, 80, 0.2, &mut rng).unwrap();
        assert!((s.accuracy - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_class() {
        let mut rng = Rng::new(6);
        let x = Matrix::from_fn(20, 2, |_, _| rng.normal());
        let s = knn_evaluate(&x, &[0; 20], 5, 0.2, &mut rng).unwrap();
        assert_eq!(s, KnnScore { accuracy: 1.0, f1_macro: 1.0 });
    }

    #[test]
    fn stratified_counts() {
        let labels: Vec<usize> = (0..50).map(|i| usize::from(i >= 40)).collect();
        let (train, test) = stratified_split(&labels, 0.2, &mut Rng::new(0)).unwrap();
        assert_eq!(test.iter().filter(|&&i| labels[i] == 0).count(), 8);
        assert_eq!(test.iter().filter(|&&i| labels[i] == 1).count(), 2);
        assert_eq!(train.len() + test.len(), 50);
        assert!(stratified_split(&[0, 0, 1], 0.6, &mut Rng::new(0)).is_err());
    }

    #[test]
    fn f1_by_hand() {
        // class 0: tp 1, fp 1, fn 1 → 0.5; class 1: tp 1, fp 1, fn 1 → 0.5
        let s = classification_scores(&[0, 0, 1, 1], &[0, 1, 1, 0]);
        assert_eq!(s.accuracy, 0.5);
        assert_eq!(s.f1_macro, 0.5);
    }

    #[test]
    fn bad_k() {
        let mut rng = Rng::new(7);
        let (x, y) = two_blobs(&mut rng, 10, 5.0);
        assert!(knn_evaluate(&x, &y, 0, 0.2, &mut rng).is_err());
        assert!(knn_evaluate(&x, &y, 17, 0.2, &mut rng).is_err());
    }
}

use std::collections::HashMap;

use crate::error::{Error, Result};

struct PairCounts {
    /// Pairs together in both labelings.
    both: f64,
    /// Pairs together in the true labeling.
    truth: f64,
    /// Pairs together in the predicted labeling.
    pred: f64,
    total: f64,
}

fn choose2(n: usize) -> f64 {
    (n as f64) * (n as f64 - 1.0) / 2.0
}

fn pair_counts(labels_true: &[usize], labels_pred: &[usize]) -> Result<PairCounts> {
    if labels_true.len() != labels_pred.len() {
        return Err(Error::invalid(format!(
            "labeling lengths differ: {} vs {}",
            labels_true.len(),
            labels_pred.len()
        )));
    }
    let mut cells: HashMap<(usize, usize), usize> = HashMap::new();
    let mut rows: HashMap<usize, usize> = HashMap::new();
    let mut cols: HashMap<usize, usize> = HashMap::new();
    for (&t, &p) in labels_true.iter().zip(labels_pred) {
        *cells.entry((t, p)).or_default() += 1;
        *rows.entry(t).or_default() += 1;
        *cols.entry(p).or_default() += 1;
    }
    Ok(PairCounts {
        both: cells.values().map(|&c| choose2(c)).sum(),
        truth: rows.values().map(|&c| choose2(c)).sum(),
        pred: cols.values().map(|&c| choose2(c)).sum(),
        total: choose2(labels_true.len()),
    })
}

/// Adjusted Rand index. When the expected index equals its maximum (both
/// labelings trivial) the result is 1 for identical partitions and 0 otherwise.
pub fn ari(labels_true: &[usize], labels_pred: &[usize]) -> Result<f64> {
    let c = pair_counts(labels_true, labels_pred)?;
    if c.total == 0.0 {
        return Ok(1.0);
    }
    let expected = c.truth * c.pred / c.total;
    let max = (c.truth + c.pred) / 2.0;
    if max == expected {
        return Ok(if c.both == c.truth && c.both == c.pred { 1.0 } else { 0.0 });
    }
    Ok((c.both - expected) / (max - expected))
}

/// Fowlkes–Mallows index. Two all-singleton labelings score 1.
pub fn fmi(labels_true: &[usize], labels_pred: &[usize]) -> Result<f64> {
    let c = pair_counts(labels_true, labels_pred)?;
    if c.truth == 0.0 && c.pred == 0.0 {
        return Ok(1.0);
    }
    if c.both == 0.0 {
        return Ok(0.0);
    }
    Ok(c.both / (c.truth * c.pred).sqrt())
}

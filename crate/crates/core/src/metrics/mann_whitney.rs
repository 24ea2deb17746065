use serde::{Deserialize, Serialize};

use super::correlation::average_ranks;
use crate::error::{Error, Result};

/// Worst absolute gap between the normal-approximation p-value and the exact
/// permutation p-value over all tie-free samples with sizes 1..=8. The
/// measured worst case is 0.129, at the smallest sample sizes. Heavily tied
/// small samples can be off by more (0.44 observed with sizes up to 8 drawn
/// from six distinct values).
pub const NORMAL_APPROX_MAX_ERROR: f64 = 0.13;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MannWhitney {
    /// U for the first sample: pairs (a, b) with a > b, ties counting one half.
    pub u: f64,
    pub z: f64,
    pub p_two_sided: f64,
}

/// Two-sided Mann–Whitney U test, normal approximation with tie-corrected
/// variance and continuity correction.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<MannWhitney> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("Mann-Whitney needs two nonempty samples"));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::invalid("Mann-Whitney input contains non-finite values"));
    }
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = average_ranks(&pooled);
    let r1: f64 = ranks[..a.len()].iter().sum();
    let u = r1 - n1 * (n1 + 1.0) / 2.0;

    let n = n1 + n2;
    let mut sorted = pooled;
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut s = 0;
    while s < sorted.len() {
        let mut e = s + 1;
        while e < sorted.len() && sorted[e] == sorted[s] {
            e += 1;
        }
        let t = (e - s) as f64;
        tie_term += t * t * t - t;
        s = e;
    }
    let mean = n1 * n2 / 2.0;
    let var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)).max(1.0));
    if var <= 0.0 {
        return Ok(MannWhitney { u, z: 0.0, p_two_sided: 1.0 });
    }
    let diff = u - mean;
    let corrected = (diff.abs() - 0.5).max(0.0).copysign(diff);
    let z = corrected / var.sqrt();
    let p = libm::erfc(z.abs() / std::f64::consts::SQRT_2).min(1.0);
    Ok(MannWhitney { u, z, p_two_sided: p })
}

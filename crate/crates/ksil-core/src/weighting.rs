//! Per-cluster instance weights derived from silhouette scores: the power
//! scheme amplifies median-scaled deviations from the cluster minimum, the
//! exponential scheme decays with the descending dense rank around the
//! median rank.

use serde::{Deserialize, Serialize};

use crate::config::WeightScheme;
use crate::error::{Error, Result};

/// Exponent clamp keeping weights finite for extreme sensitivity values.
const MAX_EXPONENT: f64 = 700.0;

/// Sensitivity and stability parameters shared by both schemes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    /// Weight-sensitivity p >= 0; p = 0 yields unit weights.
    pub p: f64,
    /// Stability constant in (0, 1e-3].
    pub epsilon: f64,
}

impl SchemeParams {
    pub fn new(p: f64, epsilon: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "sensitivity p = {p} must be finite and >= 0"
            )));
        }
        if !(epsilon > 0.0 && epsilon <= 1e-3) {
            return Err(Error::InvalidConfig(format!(
                "epsilon = {epsilon} must lie in (0, 1e-3]"
            )));
        }
        Ok(SchemeParams { p, epsilon })
    }
}

/// Nonnegative per-point weights for the evaluated points of one cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    pub weights: Vec<f64>,
    pub scheme: WeightScheme,
    pub sensitivity: f64,
}

/// Power weighting: w_i = ((s_i - s_min + eps) / median(shifted))^p.
pub fn power_weights(scores: &[f64], params: SchemeParams) -> WeightVector {
    let weights = if scores.is_empty() {
        Vec::new()
    } else {
        let s_min = scores.iter().cloned().fold(f64::INFINITY, f64::min);
        let shifted: Vec<f64> = scores.iter().map(|s| s - s_min + params.epsilon).collect();
        let med = median(&shifted);
        if med <= 0.0 {
            // Unreachable with epsilon > 0, guarded anyway.
            vec![1.0; scores.len()]
        } else {
            shifted
                .iter()
                .map(|&s| clamped_exp(params.p * (s / med).ln()))
                .collect()
        }
    };
    WeightVector {
        weights,
        scheme: WeightScheme::Power,
        sensitivity: params.p,
    }
}

/// Exponential weighting: w_i = exp(-p * (rank_i - median(ranks)) / (rank_max / 2)),
/// with descending dense ranks (highest score gets rank 1, ties share).
pub fn exponential_weights(scores: &[f64], params: SchemeParams) -> WeightVector {
    let weights = if scores.is_empty() {
        Vec::new()
    } else {
        let ranks = dense_rank_desc(scores);
        let rank_max = *ranks.iter().max().expect("non-empty") as f64;
        let rank_f: Vec<f64> = ranks.iter().map(|&r| r as f64).collect();
        let med = median(&rank_f);
        let denom = rank_max / 2.0;
        rank_f
            .iter()
            .map(|&r| clamped_exp(-params.p * (r - med) / denom))
            .collect()
    };
    WeightVector {
        weights,
        scheme: WeightScheme::Exponential,
        sensitivity: params.p,
    }
}

pub fn weights_for(scheme: WeightScheme, scores: &[f64], params: SchemeParams) -> WeightVector {
    match scheme {
        WeightScheme::Power => power_weights(scores, params),
        WeightScheme::Exponential => exponential_weights(scores, params),
    }
}

/// Descending dense ranks: distinct values get consecutive ranks 1..=u in
/// decreasing value order, equal values share a rank.
pub fn dense_rank_desc(scores: &[f64]) -> Vec<usize> {
    assert!(!scores.is_empty(), "dense rank of an empty sequence");
    let mut distinct: Vec<f64> = scores.to_vec();
    distinct.sort_by(|a, b| b.partial_cmp(a).expect("finite scores"));
    distinct.dedup();
    scores
        .iter()
        .map(|s| {
            distinct
                .iter()
                .position(|d| d == s)
                .expect("score present in distinct list")
                + 1
        })
        .collect()
}

/// Median with the even-count convention: mean of the two middle values.
pub(crate) fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

fn clamped_exp(exponent: f64) -> f64 {
    // p = 0 must yield exactly 1.0 regardless of the base term.
    if exponent == 0.0 {
        1.0
    } else {
        exponent.min(MAX_EXPONENT).exp()
    }
}

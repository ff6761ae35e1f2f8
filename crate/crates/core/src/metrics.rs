//! Distribution-comparison metrics used by the benchmarks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs further than this from unit sum are rejected instead of
/// renormalized.
pub const SUM_TOL: f64 = 1e-6;

/// Per-step similarity between a measured and a reference distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepSimilarity {
    pub n: u64,
    #[serde(rename = "S")]
    pub s: f64,
}

/// Similarity trace for one scenario run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    pub scenario: String,
    pub seed: Option<u64>,
    pub steps: Vec<StepSimilarity>,
    pub mean_similarity: f64,
}

impl SimilarityReport {
    pub fn new(scenario: String, seed: Option<u64>, steps: Vec<StepSimilarity>) -> Result<Self> {
        let values: Vec<f64> = steps.iter().map(|s| s.s).collect();
        let mean_similarity = mean_similarity(&values)?;
        Ok(Self {
            scenario,
            seed,
            steps,
            mean_similarity,
        })
    }
}

fn validated(p: &[f64], q: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            actual: q.len(),
        });
    }
    if p.is_empty() {
        return Err(Error::EmptyInput { context: "distribution" });
    }
    let clean = |xs: &[f64]| -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(xs.len());
        for (index, &x) in xs.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFinite { context: "distribution entry" });
            }
            if x < -1e-12 {
                return Err(Error::NegativeProbability { index, value: x });
            }
            out.push(x.max(0.0));
        }
        let sum: f64 = out.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::NotADistribution { sum, tolerance: SUM_TOL });
        }
        Ok(out.into_iter().map(|x| x / sum).collect())
    };
    Ok((clean(p)?, clean(q)?))
}

/// Bhattacharyya coefficient S = Σ√(P_i Q_i) ∈ [0, 1]; 1 for a perfect
/// match, 0 for disjoint supports.
pub fn bhattacharyya(p: &[f64], q: &[f64]) -> Result<f64> {
    let (p, q) = validated(p, q)?;
    let s: f64 = p.iter().zip(&q).map(|(a, b)| (a * b).sqrt()).sum();
    Ok(s.min(1.0))
}

/// Arithmetic mean of per-step similarities.
pub fn mean_similarity(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput { context: "similarity list" });
    }
    for &v in values {
        if !v.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&v) {
            return Err(Error::invalid(
                "similarity",
                format!("value {v} outside [0, 1]"),
            ));
        }
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Total-variation distance (1/2)Σ|P_i − Q_i|; secondary diagnostic.
pub fn total_variation(p: &[f64], q: &[f64]) -> Result<f64> {
    let (p, q) = validated(p, q)?;
    Ok(p.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0)
}

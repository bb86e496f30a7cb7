//! Report and sampling-plan types shared by the sweep drivers and the CLI.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Argmin witness of a sampled extremum, reported in f64 regardless of the
/// working scalar.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub t: f64,
    pub c: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Sampled minima with witnesses plus derived estimates. Serializes with the
/// exact field names of the JSON report contract.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CurvatureReport {
    pub example: String,
    pub seed: u64,
    #[serde(rename = "nSamples")]
    pub n_samples: usize,
    pub min_sec: f64,
    pub min_sec_witness: Option<Witness>,
    pub min_ricci_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diam_est: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sec_lower_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis_violations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_discriminant_residual: Option<f64>,
    pub slack_histogram_csv_path: Option<String>,
    /// Log-binned slack counts (bin upper edge, count); written to CSV by the
    /// CLI, not serialized into the report itself.
    #[serde(skip)]
    pub slack_histogram: Vec<(f64, usize)>,
}

/// Fixed logarithmic bin edges for slack histograms: deterministic and
/// order-independent regardless of how a sweep is chunked.
pub fn slack_bin_edges() -> Vec<f64> {
    let mut edges: Vec<f64> = (-16..=2).map(|e| 10f64.powi(e)).collect();
    edges.push(f64::INFINITY);
    edges
}

/// Index of the histogram bin for a slack value (clamped below at zero).
pub fn slack_bin_index(edges: &[f64], slack: f64) -> usize {
    let s = slack.max(0.0);
    edges.iter().position(|&e| s <= e).unwrap_or(edges.len() - 1)
}

/// Sampling plan defaults: 64-point interior t-grid, 256 unit-vector pairs
/// per t, c in {0, +-1, +-5}, seed 42.
#[derive(Clone, Debug)]
pub struct SamplingPlan<S> {
    pub t_points: usize,
    pub pairs_per_t: usize,
    pub c_values: Vec<S>,
    pub seed: u64,
}

impl<S: Real> Default for SamplingPlan<S> {
    fn default() -> Self {
        SamplingPlan {
            t_points: 64,
            pairs_per_t: 256,
            c_values: vec![S::zero(), S::one(), -S::one(), S::of(5.0), S::of(-5.0)],
            seed: 42,
        }
    }
}

impl<S: Real> SamplingPlan<S> {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_budget(mut self, t_points: usize, pairs_per_t: usize) -> Self {
        self.t_points = t_points;
        self.pairs_per_t = pairs_per_t;
        self
    }

    pub fn total_pairs(&self) -> usize {
        self.t_points * self.pairs_per_t
    }
}

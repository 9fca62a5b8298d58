use serde::{Deserialize, Serialize};

use super::prob_spanner::{prob_spanner, Forest, SpannerConfig};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg::{LeverageEstimates, Provenance};
use crate::rng::{RngSeed, TAG_SPANNER_ROUND};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateConfig {
    /// Peeling rounds `k = ceil(c_k · α_est · ln n)`.
    pub c_k: f64,
    pub spanner: SpannerConfig,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        EstimateConfig { c_k: 3.0, spanner: SpannerConfig::default() }
    }
}

impl EstimateConfig {
    pub fn rounds(&self, n: usize, alpha_est: f64) -> usize {
        (self.c_k * alpha_est * (n.max(2) as f64).ln()).ceil().max(1.0) as usize
    }
}

#[derive(Debug, Clone)]
pub struct SpannerEstimate {
    pub estimates: LeverageEstimates,
    /// Whether each edge is in the peeled bundle `H`.
    pub in_bundle: Vec<bool>,
    /// Rounds that found a nonempty residual graph.
    pub rounds_run: usize,
    pub rounds_planned: usize,
    /// Forests of every round, as edge ids of the input graph.
    pub forests: Vec<Forest>,
    pub t: usize,
}

impl SpannerEstimate {
    pub fn bundle_size(&self) -> usize {
        self.in_bundle.iter().filter(|&&b| b).count()
    }
}

/// Leverage upper bounds by spanner peeling.
///
/// Each round builds a probabilistic spanner of the edges not yet in the
/// bundle `H` with lengths `1/w` and adds it to `H`. Edges of `H` get `τ̂ = 1`,
/// all others `τ̂ = 1/α_est`.
pub fn spanner_estimate(g: &WeightedGraph, alpha_est: f64, cfg: &EstimateConfig, seed: RngSeed) -> Result<SpannerEstimate> {
    if !(alpha_est >= 1.0 && alpha_est.is_finite()) {
        return Err(Error::Precondition(format!("alpha_est must be at least 1, got {alpha_est}")));
    }
    let k = cfg.rounds(g.n(), alpha_est);
    let mut in_bundle = vec![false; g.m()];
    let mut forests = Vec::new();
    let mut rounds_run = 0;
    let mut t = cfg.spanner.groups(g.n());
    for round in 0..k {
        let residual: Vec<usize> = (0..g.m()).filter(|&e| !in_bundle[e]).collect();
        if residual.is_empty() {
            break;
        }
        let sub = g.subgraph(&residual);
        let lengths: Vec<f64> = sub.edges().iter().map(|e| 1.0 / e.w).collect();
        let sp = prob_spanner(&sub, &lengths, &cfg.spanner, seed.derive(TAG_SPANNER_ROUND, round as u64))?;
        t = sp.t;
        for mut f in sp.forests {
            for e in f.edges.iter_mut() {
                *e = residual[*e];
                in_bundle[*e] = true;
            }
            forests.push(f);
        }
        rounds_run += 1;
    }
    let low = 1.0 / alpha_est;
    let values = in_bundle.iter().map(|&b| if b { 1.0 } else { low }).collect();
    Ok(SpannerEstimate {
        estimates: LeverageEstimates::new(values, Provenance::Spanner)?,
        in_bundle,
        rounds_run,
        rounds_planned: k,
        forests,
        t,
    })
}

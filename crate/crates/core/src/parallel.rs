//! Spanner-based sparsification by repeated sampling.
//!
//! Each round bounds leverage scores with [`spanner_estimate`], keeps every
//! edge with probability `p_e = min(1, α τ̂_e)` and reweights kept edges by
//! `1/p_e`, until the edge count falls below
//! `stop_coeff · α · n ln n · ln ln n`.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, WeightedGraph};
use crate::linalg::{spectral_epsilon_graphs, SpectralError, DEFAULT_DENSE_CAP};
use crate::rng::{RngSeed, TAG_PARALLEL_ROUND, TAG_PARALLEL_SAMPLE};
use crate::spanner::{spanner_estimate, EstimateConfig, SpannerConfig};
use crate::unionfind::UnionFind;

const SAMPLE_CHUNK: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelConfig {
    pub epsilon: f64,
    /// `α = alpha_coeff · ln n / ε²`.
    pub alpha_coeff: f64,
    pub stop_coeff: f64,
    /// The estimator runs with `α_est = estimate_ratio · α`.
    pub estimate_ratio: f64,
    pub estimate: EstimateConfig,
    pub seed: RngSeed,
    /// Defaults to `ceil(2 log₂ n)`.
    pub max_rounds: Option<usize>,
    pub dense_cap: usize,
    /// Measure `ε*` against the input after every round.
    pub measure_epsilon: bool,
    /// Keep the spanner forests of every round.
    pub track_forests: bool,
    /// Keep every sampling decision.
    pub record_decisions: bool,
}

impl ParallelConfig {
    pub fn new(epsilon: f64) -> Self {
        ParallelConfig {
            epsilon,
            alpha_coeff: 100.0,
            stop_coeff: 100.0,
            estimate_ratio: 10.0,
            estimate: EstimateConfig::default(),
            seed: RngSeed(0),
            max_rounds: None,
            dense_cap: DEFAULT_DENSE_CAP,
            measure_epsilon: true,
            track_forests: false,
            record_decisions: false,
        }
    }

    /// Constants under which the loop iterates on graphs with a few hundred
    /// vertices.
    pub fn desk(epsilon: f64) -> Self {
        ParallelConfig {
            alpha_coeff: 2.0,
            stop_coeff: 0.05,
            estimate_ratio: 1.5,
            estimate: EstimateConfig { c_k: 0.02, spanner: SpannerConfig::default() },
            ..Self::new(epsilon)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = RngSeed(seed);
        self
    }

    pub fn alpha(&self, n: usize) -> f64 {
        self.alpha_coeff * ln(n) / (self.epsilon * self.epsilon)
    }

    pub fn alpha_est(&self, n: usize) -> f64 {
        (self.estimate_ratio * self.alpha(n)).max(1.0)
    }

    /// Edge count at or below which sampling stops. `ln ln n` is floored at 1.
    pub fn threshold(&self, n: usize) -> f64 {
        self.stop_coeff * self.alpha(n) * n as f64 * ln(n) * ln(n).ln().max(1.0)
    }

    pub fn round_cap(&self, n: usize) -> usize {
        self.max_rounds.unwrap_or_else(|| (2.0 * (n.max(2) as f64).log2()).ceil() as usize)
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 0.5) {
            return Err(Error::Precondition(format!("epsilon must lie in (0, 1/2], got {}", self.epsilon)));
        }
        for (name, v) in [
            ("alpha_coeff", self.alpha_coeff),
            ("stop_coeff", self.stop_coeff),
            ("estimate_ratio", self.estimate_ratio),
            ("c_k", self.estimate.c_k),
            ("c0", self.estimate.spanner.c0),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Precondition(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

fn ln(n: usize) -> f64 {
    (n.max(2) as f64).ln()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub edges_in: usize,
    pub edges_out: usize,
    /// Edges in the peeled bundle (`τ̂ = 1`).
    pub spanner_edges: usize,
    pub peel_rounds: usize,
    pub forest_groups: usize,
    pub epsilon_star: Option<SpectralError>,
    /// Forests of this round's bundle as edge ids of the input graph.
    #[serde(skip)]
    pub forests: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleDecision {
    pub round: usize,
    /// Edge id in the input graph.
    pub edge: usize,
    pub p: f64,
    pub kept: bool,
}

#[derive(Debug, Clone)]
pub struct ParallelRun {
    pub output: WeightedGraph,
    /// Input edge id of every output edge.
    pub origin: Vec<usize>,
    pub rounds: Vec<RoundRecord>,
    pub decisions: Vec<SampleDecision>,
    pub threshold: f64,
    pub alpha: f64,
    pub alpha_est: f64,
}

impl ParallelRun {
    pub fn round_log_csv(&self) -> String {
        let mut s = String::from("round,edges_in,edges_out,spanner_edges,epsilon_star\n");
        for r in &self.rounds {
            let eps = r.epsilon_star.map(|e| e.to_string()).unwrap_or_default();
            writeln!(s, "{},{},{},{},{}", r.round, r.edges_in, r.edges_out, r.spanner_edges, eps).unwrap();
        }
        s
    }
}

/// Runs rounds until the edge count is at most the threshold.
pub fn parallel_sparsify(g: &WeightedGraph, cfg: &ParallelConfig) -> Result<ParallelRun> {
    cfg.validate()?;
    let n = g.n();
    let alpha = cfg.alpha(n);
    let alpha_est = cfg.alpha_est(n);
    let threshold = cfg.threshold(n);
    let cap = cfg.round_cap(n);
    let mut current = g.clone();
    let mut origin: Vec<usize> = (0..g.m()).collect();
    let mut rounds = Vec::new();
    let mut decisions = Vec::new();

    while current.m() as f64 > threshold {
        let round = rounds.len();
        if round >= cap {
            return Err(Error::Contract(format!(
                "{cap} rounds left {} edges, threshold is {threshold:.0}; constants are misconfigured",
                current.m()
            )));
        }
        let est = spanner_estimate(&current, alpha_est, &cfg.estimate, cfg.seed.derive(TAG_PARALLEL_ROUND, round as u64))?;
        let probs: Vec<f64> = est.estimates.values().iter().map(|t| (alpha * t).min(1.0)).collect();
        let (next, kept) = sample_round(&current, &probs, cfg.seed.derive(TAG_PARALLEL_SAMPLE, round as u64))?;
        let mut next_origin = Vec::with_capacity(next.m());
        for (i, &k) in kept.iter().enumerate() {
            if cfg.record_decisions && probs[i] < 1.0 {
                decisions.push(SampleDecision { round, edge: origin[i], p: probs[i], kept: k });
            }
            if k {
                next_origin.push(origin[i]);
            }
        }
        let epsilon_star = if cfg.measure_epsilon { Some(spectral_epsilon_graphs(g, &next, cfg.dense_cap)?) } else { None };
        let forests = cfg
            .track_forests
            .then(|| est.forests.iter().map(|f| f.edges.iter().map(|&e| origin[e]).collect()).collect());
        rounds.push(RoundRecord {
            round,
            edges_in: current.m(),
            edges_out: next.m(),
            spanner_edges: est.bundle_size(),
            peel_rounds: est.rounds_run,
            forest_groups: est.t,
            epsilon_star,
            forests,
        });
        current = next;
        origin = next_origin;
    }
    Ok(ParallelRun { output: current, origin, rounds, decisions, threshold, alpha, alpha_est })
}

/// One sampling round: edge `i` is kept with probability `probs[i]` and its
/// weight divided by it. Returns the sampled graph and the keep flags.
pub fn sample_round(g: &WeightedGraph, probs: &[f64], seed: RngSeed) -> Result<(WeightedGraph, Vec<bool>)> {
    if probs.len() != g.m() {
        return Err(Error::InvalidInput(format!("{} probabilities for {} edges", probs.len(), g.m())));
    }
    if let Some(p) = probs.iter().find(|p| !(**p > 0.0 && **p <= 1.0)) {
        return Err(Error::Precondition(format!("sampling probability {p} outside (0, 1]")));
    }
    let kept = sample_edges(probs, seed);
    let edges = g
        .edges()
        .iter()
        .zip(probs)
        .zip(&kept)
        .filter(|(_, &k)| k)
        .map(|((e, &p), _)| if p < 1.0 { Edge::new(e.u, e.v, e.w / p) } else { *e })
        .collect();
    Ok((WeightedGraph::new(g.n(), edges)?, kept))
}

/// Independent keep decisions. Randomness is drawn per fixed-size chunk so the
/// result does not depend on the thread count.
fn sample_edges(probs: &[f64], seed: RngSeed) -> Vec<bool> {
    probs
        .par_chunks(SAMPLE_CHUNK)
        .enumerate()
        .flat_map_iter(|(c, chunk)| {
            let mut rng = seed.substream(0, c as u64);
            chunk.iter().map(move |&p| p >= 1.0 || rng.random::<f64>() < p).collect::<Vec<_>>()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForestDecomposition {
    /// Each forest as indices into the output edge list.
    pub forests: Vec<Vec<usize>>,
    /// Forests taken from recorded spanner bundles.
    pub from_spanners: usize,
    /// Forests packed from output edges that were never in a bundle.
    pub packed: usize,
}

impl ForestDecomposition {
    pub fn count(&self) -> usize {
        self.forests.len()
    }
}

/// Splits the output into forests: the recorded spanner forests restricted to
/// output edges not yet covered, then first-fit packing of the rest. Every
/// forest is checked for cycles.
pub fn forest_decomposition(run: &ParallelRun) -> Result<ForestDecomposition> {
    if run.rounds.is_empty() {
        return Err(Error::Precondition("no rounds".into()));
    }
    let n = run.output.n();
    let mut position = std::collections::HashMap::with_capacity(run.origin.len());
    for (i, &o) in run.origin.iter().enumerate() {
        position.insert(o, i);
    }
    let mut covered = vec![false; run.output.m()];
    let mut forests = Vec::new();
    for r in &run.rounds {
        let recorded = r
            .forests
            .as_ref()
            .ok_or_else(|| Error::Precondition("forest tracking was disabled for this run".into()))?;
        for f in recorded {
            let part: Vec<usize> = f
                .iter()
                .filter_map(|o| position.get(o).copied())
                .filter(|&i| !std::mem::replace(&mut covered[i], true))
                .collect();
            if !part.is_empty() {
                forests.push(part);
            }
        }
    }
    let from_spanners = forests.len();
    let mut packs: Vec<(UnionFind, Vec<usize>)> = Vec::new();
    for i in (0..run.output.m()).filter(|&i| !covered[i]) {
        let e = run.output.edges()[i];
        match packs.iter_mut().position(|(uf, _)| uf.find(e.u) != uf.find(e.v)) {
            Some(k) => {
                packs[k].0.union(e.u, e.v);
                packs[k].1.push(i);
            }
            None => {
                let mut uf = UnionFind::new(n);
                uf.union(e.u, e.v);
                packs.push((uf, vec![i]));
            }
        }
    }
    let packed = packs.len();
    forests.extend(packs.into_iter().map(|(_, l)| l));
    for f in &forests {
        let mut uf = UnionFind::new(n);
        for &i in f {
            let e = run.output.edges()[i];
            if !uf.union(e.u, e.v) {
                return Err(Error::Contract(format!("decomposition forest has a cycle through output edge {i}")));
            }
        }
    }
    Ok(ForestDecomposition { forests, from_spanners, packed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::replay_decisions;
    use crate::graph::{generate, GraphFamily};
    use crate::linalg::{laplacian, DenseMatrix};

    #[test]
    fn below_threshold_is_unchanged() {
        let g = generate(GraphFamily::Gnp(0.3), 40, RngSeed(0)).unwrap();
        let run = parallel_sparsify(&g, &ParallelConfig::new(0.4)).unwrap();
        assert!(run.rounds.is_empty());
        assert_eq!(run.output, g);
        assert!(matches!(forest_decomposition(&run), Err(Error::Precondition(m)) if m == "no rounds"));
    }

    #[test]
    fn one_round_structure() {
        let g = generate(GraphFamily::Complete, 40, RngSeed(0)).unwrap();
        let mut cfg = ParallelConfig::desk(0.5);
        cfg.track_forests = true;
        cfg.record_decisions = true;
        // threshold just below m: exactly one round
        cfg.stop_coeff = (g.m() as f64 - 1.0) / ParallelConfig { stop_coeff: 1.0, ..cfg.clone() }.threshold(40);
        let run = parallel_sparsify(&g, &cfg).unwrap();
        assert_eq!(run.rounds.len(), 1);
        let bundle: std::collections::HashSet<usize> =
            run.rounds[0].forests.as_ref().unwrap().iter().flatten().copied().collect();
        assert_eq!(bundle.len(), run.rounds[0].spanner_edges);
        for (e, &o) in run.output.edges().iter().zip(&run.origin) {
            let w0 = g.edges()[o].w;
            if bundle.contains(&o) {
                assert_eq!(e.w, w0);
            } else {
                assert!((e.w - w0 * run.alpha_est / run.alpha).abs() < 1e-9);
            }
        }
        assert!(run.decisions.iter().all(|d| !bundle.contains(&d.edge)));
        let dec = forest_decomposition(&run).unwrap();
        assert_eq!(dec.forests.iter().map(Vec::len).sum::<usize>(), run.output.m());
        let r = &run.rounds[0];
        assert!(dec.from_spanners <= r.peel_rounds * r.forest_groups);
    }

    #[test]
    fn support_is_a_subset_and_log_is_consistent() {
        let g = generate(GraphFamily::Gnp(0.3), 120, RngSeed(1)).unwrap();
        let cfg = ParallelConfig::desk(0.5).with_seed(4);
        let run = parallel_sparsify(&g, &cfg).unwrap();
        assert!(!run.rounds.is_empty());
        assert!(run.output.m() as f64 <= run.threshold);
        for (e, &o) in run.output.edges().iter().zip(&run.origin) {
            let src = g.edges()[o];
            assert_eq!((e.u, e.v), (src.u, src.v));
            assert!(e.w >= src.w);
        }
        for w in run.rounds.windows(2) {
            assert_eq!(w[0].edges_out, w[1].edges_in);
        }
        let csv = run.round_log_csv();
        assert!(csv.starts_with("round,edges_in,edges_out,spanner_edges,epsilon_star\n"));
        assert_eq!(csv.lines().count(), run.rounds.len() + 1);
    }

    #[test]
    fn tracking_disabled_is_an_error() {
        let g = generate(GraphFamily::Gnp(0.3), 80, RngSeed(1)).unwrap();
        let run = parallel_sparsify(&g, &ParallelConfig::desk(0.5)).unwrap();
        assert!(!run.rounds.is_empty());
        assert!(forest_decomposition(&run).is_err());
    }

    #[test]
    fn round_cap_is_enforced() {
        let g = generate(GraphFamily::Complete, 30, RngSeed(0)).unwrap();
        let mut cfg = ParallelConfig::desk(0.5);
        cfg.stop_coeff = 1e-6;
        cfg.max_rounds = Some(2);
        assert!(matches!(parallel_sparsify(&g, &cfg), Err(Error::Contract(_))));
    }

    #[test]
    fn deterministic_under_seed() {
        let g = generate(GraphFamily::Gnp(0.3), 100, RngSeed(1)).unwrap();
        let cfg = ParallelConfig::desk(0.5).with_seed(9);
        let a = parallel_sparsify(&g, &cfg).unwrap();
        let b = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| parallel_sparsify(&g, &cfg).unwrap());
        assert_eq!(a.output, b.output);
    }

    #[test]
    fn frozen_round_is_unbiased() {
        let g = generate(GraphFamily::Complete, 12, RngSeed(0)).unwrap();
        let probs: Vec<f64> = (0..g.m()).map(|i| if i % 3 == 0 { 1.0 } else { 0.3 + 0.05 * (i % 7) as f64 }).collect();
        let trials = 10_000;
        let target = laplacian(&g);
        let mut sum = DenseMatrix::zeros(12, 12);
        let mut sq = DenseMatrix::zeros(12, 12);
        for t in 0..trials {
            let kept = sample_edges(&probs, RngSeed(t));
            let edges = g
                .edges()
                .iter()
                .zip(&kept)
                .zip(&probs)
                .filter(|((_, k), _)| **k)
                .map(|((e, _), p)| Edge::new(e.u, e.v, e.w / p))
                .collect();
            let l = laplacian(&WeightedGraph::new(12, edges).unwrap());
            sq += l.component_mul(&l);
            sum += l;
        }
        let mean = &sum / trials as f64;
        for i in 0..12 {
            for j in 0..12 {
                let var = sq[(i, j)] / trials as f64 - mean[(i, j)].powi(2);
                let se = (var / trials as f64).sqrt();
                assert!((mean[(i, j)] - target[(i, j)]).abs() <= 3.0 * se + 1e-12, "{i},{j}");
            }
        }
    }

    #[test]
    fn multigraph_run_replays_as_a_legal_game() {
        // many parallel copies make every leverage score small enough that
        // the peeled estimates dominate and each sample is a legal move
        let base = generate(GraphFamily::Complete, 16, RngSeed(0)).unwrap();
        let edges: Vec<Edge> = (0..40).flat_map(|_| base.edges().iter().copied()).collect();
        let g = WeightedGraph::new(16, edges).unwrap();
        let mut cfg = ParallelConfig::desk(0.5).with_seed(2);
        cfg.alpha_coeff = 0.5;
        cfg.estimate_ratio = 2.0;
        cfg.estimate.c_k = 0.5;
        cfg.stop_coeff = 5.0;
        cfg.record_decisions = true;
        let run = parallel_sparsify(&g, &cfg).unwrap();
        assert!(!run.rounds.is_empty());
        let alpha = run.alpha / (1.0 + cfg.epsilon);
        let report = replay_decisions(
            16,
            g.rows(),
            alpha,
            cfg.epsilon,
            run.decisions.iter().map(|d| (d.edge, d.p, d.kept)),
        )
        .unwrap();
        assert!(report.moves > 0);
        assert_eq!(report.stopped_at, None);
    }
}

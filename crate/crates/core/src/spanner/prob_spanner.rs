use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cluster::est_cluster;
use crate::error::{Error, Result};
use crate::graph::{format_weight, WeightedGraph};
use crate::rng::{RngSeed, TAG_CLUSTER};
use crate::unionfind::UnionFind;

/// Clustering parameter used for every length scale.
pub const CLUSTER_BETA: f64 = 1.0 / 3.0;

/// Stretch multiplier `C_str`: an edge counts as well served when its stretch
/// is at most `C_STR · log₂ n`. Calibrated on unit-length K_20 and `G(200, 0.1)`,
/// 200 seeds: the per-edge success rate stops improving at 1.0.
pub const C_STR: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpannerConfig {
    /// Cluster diameter constant.
    pub c0: f64,
    /// Replaces the computed number of groups.
    pub t_override: Option<usize>,
    /// Check the per-group diameter bound after every composition step.
    pub strict: bool,
}

impl Default for SpannerConfig {
    fn default() -> Self {
        SpannerConfig { c0: 4.0, t_override: None, strict: false }
    }
}

impl SpannerConfig {
    /// `max(1, ceil(log₂(8 c0 log₂ n)))`, the smallest `t` with
    /// `2^t ≥ 8 c0 log₂ n`.
    pub fn groups(&self, n: usize) -> usize {
        if let Some(t) = self.t_override {
            return t.max(1);
        }
        let log_n = (n.max(2) as f64).log2();
        ((8.0 * self.c0 * log_n).log2().ceil() as usize).max(1)
    }
}

/// Length scale of an edge: `floor(log₂ l)`.
pub fn scale_of(length: f64) -> i32 {
    length.log2().floor() as i32
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    /// `j`: this forest composes all scales `i ≡ j (mod t)`.
    pub group: usize,
    /// Edge ids of the input graph.
    pub edges: Vec<usize>,
    /// Origin scale of each edge.
    pub scales: Vec<i32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpannerForest {
    pub t: usize,
    pub forests: Vec<Forest>,
}

impl SpannerForest {
    pub fn edge_count(&self) -> usize {
        self.forests.iter().map(|f| f.edges.len()).sum()
    }

    /// Every edge id appearing in some forest, sorted and deduplicated.
    pub fn edge_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.forests.iter().flat_map(|f| f.edges.iter().copied()).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Edge-list text: `n m`, then each forest as blocks of edges headed by
    /// `# forest j scale i` comments.
    pub fn to_edge_list(&self, g: &WeightedGraph) -> String {
        let mut s = format!("{} {}\n", g.n(), self.edge_count());
        for f in &self.forests {
            let mut current = None;
            for (&e, &scale) in f.edges.iter().zip(&f.scales) {
                if current != Some(scale) {
                    writeln!(s, "# forest {} scale {}", f.group, scale).unwrap();
                    current = Some(scale);
                }
                let edge = g.edges()[e];
                writeln!(s, "{} {} {}", edge.u, edge.v, format_weight(edge.w)).unwrap();
            }
        }
        s
    }
}

fn check_lengths(g: &WeightedGraph, lengths: &[f64]) -> Result<()> {
    if lengths.len() != g.m() {
        return Err(Error::InvalidInput(format!("{} lengths for {} edges", lengths.len(), g.m())));
    }
    if let Some(i) = lengths.iter().position(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(Error::InvalidInput(format!("length of edge {i} must be finite and positive")));
    }
    Ok(())
}

fn scale_seed(seed: RngSeed, scale: i32) -> RngSeed {
    seed.derive(TAG_CLUSTER, scale as i64 as u64)
}

/// Probabilistic `O(log n)`-spanner as a union of at most `t` forests.
///
/// Edges are bucketed by length scale; each bucket is clustered as an
/// unweighted graph and contributes its cluster trees. For each group `j` the
/// trees of scales `i ≡ j (mod t)` are merged into a minimum spanning forest
/// under `lengths`.
pub fn prob_spanner(g: &WeightedGraph, lengths: &[f64], cfg: &SpannerConfig, seed: RngSeed) -> Result<SpannerForest> {
    check_lengths(g, lengths)?;
    let n = g.n();
    let t = cfg.groups(n);
    let mut buckets: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (e, &l) in lengths.iter().enumerate() {
        buckets.entry(scale_of(l)).or_default().push(e);
    }
    let buckets: Vec<(i32, Vec<usize>)> = buckets.into_iter().collect();
    let trees: Vec<(i32, Vec<usize>)> = buckets
        .par_iter()
        .map(|(scale, ids)| {
            let mut adj = vec![Vec::new(); n];
            for &e in ids {
                let edge = g.edges()[e];
                adj[edge.u].push((edge.v, e));
                adj[edge.v].push((edge.u, e));
            }
            let part = est_cluster(&adj, CLUSTER_BETA, cfg.c0, scale_seed(seed, *scale));
            (*scale, part.trees.into_iter().flatten().collect())
        })
        .collect();

    let mut forests = Vec::new();
    for j in 0..t {
        let group: Vec<&(i32, Vec<usize>)> =
            trees.iter().filter(|(scale, _)| scale.rem_euclid(t as i32) as usize == j).collect();
        if group.is_empty() {
            continue;
        }
        let mut candidates: Vec<(usize, i32)> =
            group.iter().flat_map(|(scale, ids)| ids.iter().map(move |&e| (e, *scale))).collect();
        if cfg.strict && n <= 200 {
            check_diameter_induction(g, lengths, &group, cfg.c0)?;
        }
        candidates.sort_by(|a, b| lengths[a.0].total_cmp(&lengths[b.0]).then(a.0.cmp(&b.0)));
        let mut uf = UnionFind::new(n);
        let mut edges = Vec::new();
        let mut scales = Vec::new();
        for (e, scale) in candidates {
            let edge = g.edges()[e];
            if uf.union(edge.u, edge.v) {
                edges.push(e);
                scales.push(scale);
            }
        }
        forests.push(Forest { group: j, edges, scales });
    }
    let out = SpannerForest { t, forests };
    check_forests(g, &out)?;
    Ok(out)
}

/// Acyclicity of every forest and the `t (n − 1)` edge bound.
pub fn check_forests(g: &WeightedGraph, s: &SpannerForest) -> Result<()> {
    for f in &s.forests {
        let mut uf = UnionFind::new(g.n());
        for &e in &f.edges {
            let edge = g.edges()[e];
            if !uf.union(edge.u, edge.v) {
                return Err(Error::Contract(format!("forest {} contains a cycle through edge {e}", f.group)));
            }
        }
    }
    if s.forests.len() > s.t || s.edge_count() > s.t * (g.n() - 1) {
        return Err(Error::Contract(format!(
            "{} forests with {} edges exceed t = {}",
            s.forests.len(),
            s.edge_count(),
            s.t
        )));
    }
    Ok(())
}

/// After each scale `i_q` of a group is merged in, every component of the
/// minimum spanning forest must have weighted diameter at most
/// `4 c0 2^{i_q} log₂ n`.
fn check_diameter_induction(g: &WeightedGraph, lengths: &[f64], group: &[&(i32, Vec<usize>)], c0: f64) -> Result<()> {
    let n = g.n();
    let log_n = (n.max(2) as f64).log2();
    let mut pool: Vec<usize> = Vec::new();
    for (scale, ids) in group {
        pool.extend(ids.iter().copied());
        pool.sort_by(|&a, &b| lengths[a].total_cmp(&lengths[b]).then(a.cmp(&b)));
        let mut uf = UnionFind::new(n);
        let forest: Vec<usize> = pool
            .iter()
            .copied()
            .filter(|&e| {
                let edge = g.edges()[e];
                uf.union(edge.u, edge.v)
            })
            .collect();
        pool = forest.clone();
        let bound = 4.0 * c0 * 2f64.powi(*scale) * log_n;
        let diam = forest_diameter(g, lengths, &forest);
        if diam > bound {
            return Err(Error::Contract(format!(
                "component diameter {diam} exceeds {bound} after merging scale {scale}"
            )));
        }
    }
    Ok(())
}

/// Largest weighted distance between two vertices of the same tree.
fn forest_diameter(g: &WeightedGraph, lengths: &[f64], forest: &[usize]) -> f64 {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for &e in forest {
        let edge = g.edges()[e];
        adj[edge.u].push((edge.v, lengths[e]));
        adj[edge.v].push((edge.u, lengths[e]));
    }
    let farthest = |start: usize| {
        let mut dist = vec![f64::INFINITY; n];
        dist[start] = 0.0;
        let mut stack = vec![start];
        let mut best = (start, 0.0);
        while let Some(v) = stack.pop() {
            if dist[v] > best.1 {
                best = (v, dist[v]);
            }
            for &(w, l) in &adj[v] {
                if dist[w].is_infinite() {
                    dist[w] = dist[v] + l;
                    stack.push(w);
                }
            }
        }
        best
    };
    let mut seen = vec![false; n];
    let mut diam: f64 = 0.0;
    let mut uf = UnionFind::new(n);
    for &e in forest {
        let edge = g.edges()[e];
        uf.union(edge.u, edge.v);
    }
    for (v, nbrs) in adj.iter().enumerate() {
        let root = uf.find(v);
        if seen[root] || nbrs.is_empty() {
            continue;
        }
        seen[root] = true;
        let (a, _) = farthest(v);
        diam = diam.max(farthest(a).1);
    }
    diam
}

/// Shortest-path distance between `u` and `v` using only the `edges` of `g`.
pub fn subgraph_distance(g: &WeightedGraph, lengths: &[f64], edges: &[usize], u: usize, v: usize) -> f64 {
    let mut adj = vec![Vec::new(); g.n()];
    for &e in edges {
        let edge = g.edges()[e];
        adj[edge.u].push((edge.v, lengths[e]));
        adj[edge.v].push((edge.u, lengths[e]));
    }
    dijkstra(&adj, u)[v]
}

fn dijkstra(adj: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    dist[source] = 0.0;
    let mut heap = BinaryHeap::from([(Reverse(OrdF64(0.0)), source)]);
    while let Some((Reverse(OrdF64(d)), v)) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &(w, l) in &adj[v] {
            let nd = d + l;
            if nd < dist[w] {
                dist[w] = nd;
                heap.push((Reverse(OrdF64(nd)), w));
            }
        }
    }
    dist
}

#[derive(Clone, Copy)]
struct OrdF64(f64);
impl PartialEq for OrdF64 {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}
impl Eq for OrdF64 {}
impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Stretch `dist_H(u, v) / l_e` of every edge of `g` in the spanner `s`
/// (infinite when the endpoints are disconnected in `H`).
pub fn stretches(g: &WeightedGraph, lengths: &[f64], s: &SpannerForest) -> Vec<f64> {
    let mut adj = vec![Vec::new(); g.n()];
    for e in s.edge_ids() {
        let edge = g.edges()[e];
        adj[edge.u].push((edge.v, lengths[e]));
        adj[edge.v].push((edge.u, lengths[e]));
    }
    let mut by_source: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, e) in g.edges().iter().enumerate() {
        by_source.entry(e.u).or_default().push(i);
    }
    let mut out = vec![f64::INFINITY; g.m()];
    let results: Vec<(usize, f64)> = by_source
        .par_iter()
        .flat_map_iter(|(&u, ids)| {
            let dist = dijkstra(&adj, u);
            ids.iter().map(move |&i| (i, dist[g.edges()[i].v] / lengths[i])).collect::<Vec<_>>()
        })
        .collect();
    for (i, s) in results {
        out[i] = s;
    }
    out
}

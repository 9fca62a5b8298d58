//! Acceptance suite. Each test prints one `[PASS]` / `[FAIL]` line to stderr
//! (outside the harness capture) and then asserts. Every tolerance is pinned
//! in the constants below; every measured quantity comes from the oracles in
//! `common`, not from the code under test.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use resparse::game::{monte_carlo, play_trial, split_rows, GameConfig, GameEnd, GameState, StrategyKind};
use resparse::graph::{generate, GraphFamily, Row};
use resparse::linalg::{exact_leverage, DEFAULT_DENSE_CAP};
use resparse::parallel::{forest_decomposition, parallel_sparsify, sample_round, ParallelConfig};
use resparse::spanner::{
    est_cluster, prob_spanner, spanner_estimate, EstimateConfig, SpannerConfig, CLUSTER_BETA, C_STR,
};
use resparse::streaming::{resparsify_once, BufferedRow, StreamConfig, StreamSparsifier};
use resparse::{Edge, RngSeed, WeightedGraph};

use common::*;

const LEVERAGE_TOL: f64 = 1e-9;
const STREAM_SEEDS: u64 = 50;
const STREAM_EPS: f64 = 0.5;
const STREAM_MIN_OK: usize = 47;
const ACCUMULATION_RATIO: f64 = 2.0;
const GAME_TRIALS: usize = 1000;
const GAME_EPS: f64 = 0.4;
const GAME_C_ALPHA: f64 = 8.0;
const GAME_MAX_WIN_RATE: f64 = 0.02;
const VARIATION_MIN_FRACTION: f64 = 0.95;
const UNBIASED_REPLAYS: u64 = 10_000;
const UNBIASED_SE: f64 = 3.0;
const CLUSTER_SEEDS: u64 = 500;
const SEPARATION_SLACK: f64 = 0.06;
const CLUSTER_C0: f64 = 4.0;
const SPANNER_SEEDS: u64 = 200;
const STRETCH_MIN_RATE: f64 = 0.42;
const DOMINATION_SEEDS: u64 = 100;
const DOMINATION_MIN_OK: usize = 95;
const PARALLEL_SEEDS: u64 = 30;
const PARALLEL_MIN_OK: usize = 27;
const DETERMINISM_CHECKS: usize = 10;

fn verdict(id: usize, name: &str, ok: bool, detail: String, start: Instant) -> bool {
    let tag = if ok { "PASS" } else { "FAIL" };
    report(&format!("[{tag}] criterion {id:>2} {name}: {detail} ({:.1}s)", start.elapsed().as_secs_f64()));
    ok
}

/// `b_eᵀ L⁺ b_e` with `L⁺` from an SVD pseudo-inverse.
fn oracle_leverage(g: &WeightedGraph) -> Vec<f64> {
    let l = dense_laplacian(g.n(), g.edges());
    let pinv = l.pseudo_inverse(1e-10).unwrap();
    g.edges()
        .iter()
        .map(|e| e.w * (pinv[(e.u, e.u)] + pinv[(e.v, e.v)] - 2.0 * pinv[(e.u, e.v)]))
        .collect()
}

#[test]
fn c01_exact_leverage_oracle() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in [8, 25, 60] {
        let families = [
            GraphFamily::Path,
            GraphFamily::Cycle,
            GraphFamily::Star,
            GraphFamily::Complete,
            GraphFamily::Grid,
            GraphFamily::Gnp(0.3),
        ];
        for family in families {
            let g = generate(family, n, RngSeed(n as u64)).unwrap();
            let tau = exact_leverage(&g, DEFAULT_DENSE_CAP).unwrap();
            let expected = (n - component_count(n, g.edges())) as f64;
            if (tau.sum() - expected).abs() > LEVERAGE_TOL {
                failures.push(format!("{family} n={n}: sum {} vs {expected}", tau.sum()));
            }
            for (i, is_bridge) in bridges_by_deletion(&g).into_iter().enumerate() {
                if is_bridge && tau.values()[i] != 1.0 {
                    failures.push(format!("{family} n={n}: bridge {i} has {}", tau.values()[i]));
                }
            }
            if family == GraphFamily::Complete {
                if let Some(t) = tau.values().iter().find(|t| (**t - 2.0 / n as f64).abs() > LEVERAGE_TOL) {
                    failures.push(format!("K_{n}: {t} vs {}", 2.0 / n as f64));
                }
            }
            let oracle = oracle_leverage(&g);
            let worst = tau.values().iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if worst > 1e-8 {
                failures.push(format!("{family} n={n}: differs from pseudo-inverse by {worst:e}"));
            }
            checked += 1;
        }
    }
    let ok = failures.is_empty() && start.elapsed().as_secs_f64() < 5.0;
    verdict(1, "exact leverage", ok, format!("{checked} graphs, failures {failures:?}"), start);
    assert!(ok);
}

#[test]
fn c02_streaming_correctness() {
    let start = Instant::now();
    let n = 60;
    let g = generate(GraphFamily::Complete, n, RngSeed(0)).unwrap();
    let cfg = StreamConfig::desk(STREAM_EPS);
    let bound = cfg.buffer_coeff * n as f64 * cfg.beta_coeff * (n as f64).ln() / (STREAM_EPS * STREAM_EPS) + 1.0;
    let mut within_eps = 0;
    let mut within_space = 0;
    let mut worst: f64 = 0.0;
    for seed in 0..STREAM_SEEDS {
        let mut s = StreamSparsifier::new(n, cfg.clone().with_seed(seed)).unwrap();
        for e in g.edges() {
            s.push_edge(*e).unwrap();
        }
        let out = s.finish();
        let h = out.to_graph().unwrap();
        let eps = graph_epsilon(&g, &h);
        worst = worst.max(eps);
        within_eps += usize::from(eps <= STREAM_EPS);
        within_space += usize::from(out.stats.peak_rows as f64 <= bound);
    }
    let ok = within_eps >= STREAM_MIN_OK && within_space == STREAM_SEEDS as usize && start.elapsed().as_secs() < 120;
    let detail = format!(
        "eps* <= {STREAM_EPS} in {within_eps}/{STREAM_SEEDS} (need {STREAM_MIN_OK}), worst {worst:.3e}; \
         peak <= {bound:.0} in {within_space}/{STREAM_SEEDS}"
    );
    verdict(2, "streaming correctness", ok, detail, start);
    assert!(ok);
}

fn snapshot(n: usize, buffer: &[BufferedRow]) -> WeightedGraph {
    let edges = buffer.iter().map(|b| {
        let e = b.edge.unwrap();
        Edge::new(e.u, e.v, e.w * b.factor)
    });
    WeightedGraph::new(n, edges.collect()).unwrap()
}

#[test]
fn c03_no_error_accumulation() {
    let start = Instant::now();
    let n = 60;
    let block = generate(GraphFamily::Complete, n, RngSeed(0)).unwrap();
    let targets = [1usize, 3, 10];
    let mut eps: Vec<Vec<f64>> = vec![Vec::new(); targets.len()];
    for seed in 0..STREAM_SEEDS {
        // r = 1 and r = 3 are prefixes of the r = 10 stream, so one pass
        // yields all three outputs
        let mut s = StreamSparsifier::new(n, StreamConfig::desk(STREAM_EPS).with_seed(seed)).unwrap();
        let mut delivered = DMatrix::<f64>::zeros(n, n);
        let mut next = 0;
        'stream: loop {
            for e in block.edges() {
                s.push_edge(*e).unwrap();
                delivered[(e.u, e.u)] += e.w;
                delivered[(e.v, e.v)] += e.w;
                delivered[(e.u, e.v)] -= e.w;
                delivered[(e.v, e.u)] -= e.w;
                if s.stats().resparsifications == targets[next] {
                    let h = snapshot(n, s.buffer());
                    eps[next].push(relative_epsilon(&delivered, &dense_laplacian(n, h.edges())));
                    next += 1;
                    if next == targets.len() {
                        break 'stream;
                    }
                }
            }
        }
    }
    let medians: Vec<f64> = eps.iter().map(|v| median(v.clone())).collect();
    let ok = medians[2] <= ACCUMULATION_RATIO * medians[0] && start.elapsed().as_secs() < 600;
    let detail = format!(
        "median eps* r=1 {:.4}, r=3 {:.4}, r=10 {:.4}; ratio r10/r1 {:.3} (limit {ACCUMULATION_RATIO})",
        medians[0],
        medians[1],
        medians[2],
        medians[2] / medians[0]
    );
    verdict(3, "no error accumulation", ok, detail, start);
    assert!(ok);
}

/// Whitening map onto the range of `m = Σ a aᵀ`.
fn whitener(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let top = eig.eigenvalues.max();
    let keep: Vec<usize> = (0..m.nrows()).filter(|&i| eig.eigenvalues[i] > 1e-9 * top).collect();
    let mut w = DMatrix::zeros(keep.len(), m.nrows());
    for (r, &i) in keep.iter().enumerate() {
        let s = 1.0 / eig.eigenvalues[i].sqrt();
        for c in 0..m.ncols() {
            w[(r, c)] = eig.eigenvectors[(c, i)] * s;
        }
    }
    w
}

#[test]
fn c04_c05_game_monte_carlo_and_variation() {
    let start = Instant::now();
    let g = generate(GraphFamily::Complete, 8, RngSeed(0)).unwrap();
    let mut cfg = GameConfig::new(GAME_EPS);
    cfg.c_alpha = GAME_C_ALPHA;
    cfg.strict = true;
    let alpha = cfg.alpha(8);
    let rows = split_rows(8, &g.rows(), alpha, 2, DEFAULT_DENSE_CAP).unwrap();
    let prototype = GameState::new(8, rows.clone(), &cfg, RngSeed(0)).unwrap();
    let seed = RngSeed(2024);
    let runs = monte_carlo(&prototype, StrategyKind::Halving, GAME_TRIALS, seed, usize::MAX).unwrap();
    let wins = runs.iter().filter(|r| matches!(r.end, GameEnd::AdversaryWon { .. })).count();
    let win_rate = wins as f64 / GAME_TRIALS as f64;

    // recompute W_k and the final ε* from the move log of a sample of trials
    let dense: Vec<DVector<f64>> = rows.iter().map(|r| DVector::from_vec(r.to_dense())).collect();
    let m = dense.iter().fold(DMatrix::zeros(8, 8), |acc, a| acc + a * a.transpose());
    let wh = whitener(&m);
    let mut worst_mismatch: f64 = 0.0;
    for (t, run) in runs.iter().enumerate().take(20) {
        let (summary, state) = play_trial(&prototype, StrategyKind::Halving, seed, t, usize::MAX).unwrap();
        assert_eq!(&summary, run);
        let mut var = DMatrix::<f64>::zeros(wh.nrows(), wh.nrows());
        for rec in state.trace().records() {
            let a = &wh * &dense[rec.index];
            let tau = a.norm_squared();
            var += &a * a.transpose() * ((1.0 - rec.p) / rec.p * rec.weight_before.powi(2) * tau);
        }
        let norm_w = SymmetricEigen::new(var).eigenvalues.max();
        worst_mismatch = worst_mismatch.max((norm_w - summary.variation_norm).abs() / norm_w.max(1e-300));
        let current = dense.iter().zip(state.weights()).fold(DMatrix::zeros(8, 8), |acc, (a, w)| acc + a * a.transpose() * *w);
        worst_mismatch = worst_mismatch.max((relative_epsilon(&m, &current) - summary.final_epsilon_star).abs());
    }
    let oracle_ok = worst_mismatch < 1e-8;
    let ok4 = win_rate <= GAME_MAX_WIN_RATE && oracle_ok && start.elapsed().as_secs() < 300;
    verdict(
        4,
        "game Monte Carlo",
        ok4,
        format!(
            "adversary won {wins}/{GAME_TRIALS} = {win_rate:.4} (limit {GAME_MAX_WIN_RATE}); alpha {alpha:.2}, {} rows; \
             oracle mismatch {worst_mismatch:.1e}",
            rows.len()
        ),
        start,
    );

    let bound = 16.0 / alpha;
    let within = runs.iter().filter(|r| r.variation_norm <= bound).count();
    let worst = runs.iter().map(|r| r.variation_norm).fold(0.0, f64::max);
    let fraction = within as f64 / GAME_TRIALS as f64;
    let ok5 = fraction >= VARIATION_MIN_FRACTION && oracle_ok;
    verdict(
        5,
        "quadratic variation",
        ok5,
        format!("max ||W_k|| <= 16/alpha = {bound:.4} in {within}/{GAME_TRIALS} (need {VARIATION_MIN_FRACTION}); worst {worst:.4}"),
        start,
    );
    assert!(ok4 && ok5);
}

/// Running entrywise mean and variance of symmetric matrices.
struct Moments {
    sum: DMatrix<f64>,
    sq: DMatrix<f64>,
    count: f64,
}

impl Moments {
    fn new(n: usize) -> Self {
        Moments { sum: DMatrix::zeros(n, n), sq: DMatrix::zeros(n, n), count: 0.0 }
    }

    fn add(&mut self, m: &DMatrix<f64>) {
        self.sum += m;
        self.sq += m.component_mul(m);
        self.count += 1.0;
    }

    /// Largest `|mean − target| / SE` over entries with variance, and whether
    /// every zero-variance entry equals its target.
    fn worst_z(&self, target: &DMatrix<f64>) -> (f64, bool) {
        let mut worst: f64 = 0.0;
        let mut exact = true;
        for i in 0..target.nrows() {
            for j in i..target.ncols() {
                let mean = self.sum[(i, j)] / self.count;
                let var = (self.sq[(i, j)] / self.count - mean * mean).max(0.0) * self.count / (self.count - 1.0);
                let se = (var / self.count).sqrt();
                if se < 1e-12 * (1.0 + mean.abs()) {
                    exact &= (mean - target[(i, j)]).abs() < 1e-9 * (1.0 + target[(i, j)].abs());
                } else {
                    worst = worst.max((mean - target[(i, j)]).abs() / se);
                }
            }
        }
        (worst, exact)
    }
}

#[test]
fn c06_unbiasedness() {
    let start = Instant::now();

    // streaming: five copies of a barbell, every row resampled with p < 1
    let base = generate(GraphFamily::Barbell, 8, RngSeed(0)).unwrap();
    let n = base.n();
    let edges: Vec<Edge> = (0..5).flat_map(|_| base.edges().iter().copied()).collect();
    let multi = WeightedGraph::new(n, edges.clone()).unwrap();
    let buffer: Vec<BufferedRow> = edges
        .iter()
        .enumerate()
        .map(|(i, e)| BufferedRow { source: i, factor: 1.0, row: Row::from_edge(n, e), edge: Some(*e) })
        .collect();
    let tau = exact_leverage(&multi, DEFAULT_DENSE_CAP).unwrap();
    let beta = 3.0;
    let stream_sampled = tau.values().iter().filter(|t| beta * **t < 1.0).count();
    let target = dense_laplacian(n, &edges);
    let mut stream_moments = Moments::new(n);
    for t in 0..UNBIASED_REPLAYS {
        let mut rng = RngSeed(t).rng();
        let out = resparsify_once(n, buffer.clone(), &tau, beta, &mut rng, |_, _, _| {}).unwrap();
        stream_moments.add(&dense_laplacian(n, snapshot(n, &out).edges()));
    }
    let (z_stream, exact_stream) = stream_moments.worst_z(&target);

    // parallel: frozen spanner estimate on a multigraph of K_8
    let k8 = generate(GraphFamily::Complete, 8, RngSeed(0)).unwrap();
    let g = WeightedGraph::new(8, (0..5).flat_map(|_| k8.edges().iter().copied()).collect()).unwrap();
    let est_cfg = EstimateConfig { c_k: 0.05, ..Default::default() };
    let est = spanner_estimate(&g, 4.0, &est_cfg, RngSeed(1)).unwrap();
    let alpha = 2.0;
    let probs: Vec<f64> = est.estimates.values().iter().map(|t| (alpha * t).min(1.0)).collect();
    let sampled = probs.iter().filter(|&&p| p < 1.0).count();
    let target = dense_laplacian(8, g.edges());
    let mut par_moments = Moments::new(8);
    for t in 0..UNBIASED_REPLAYS {
        let (h, _) = sample_round(&g, &probs, RngSeed(t)).unwrap();
        par_moments.add(&dense_laplacian(8, h.edges()));
    }
    let (z_par, exact_par) = par_moments.worst_z(&target);

    let ok = z_stream <= UNBIASED_SE
        && z_par <= UNBIASED_SE
        && exact_stream
        && exact_par
        && sampled > 0
        && stream_sampled > 0
        && start.elapsed().as_secs() < 120;
    let detail = format!(
        "{UNBIASED_REPLAYS} replays each; worst entry |mean - input|/SE: streaming {z_stream:.2}, \
         parallel {z_par:.2} (limit {UNBIASED_SE}); sampled rows: streaming {stream_sampled}/{}, parallel {sampled}/{}",
        edges.len(),
        g.m()
    );
    verdict(6, "unbiasedness", ok, detail, start);
    assert!(ok);
}

#[test]
fn c07_clustering_contract() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for (family, seed) in [(GraphFamily::Path, 0), (GraphFamily::Gnp(0.05), 7)] {
        let g = generate(family, 200, RngSeed(seed)).unwrap();
        let n = g.n();
        let adj = g.adjacency();
        let bound = CLUSTER_C0 / CLUSTER_BETA * (n as f64).ln();
        let mut cut = vec![0usize; g.m()];
        let mut certified = 0;
        let mut worst_diameter = 0;
        for s in 0..CLUSTER_SEEDS {
            let p = est_cluster(&adj, CLUSTER_BETA, CLUSTER_C0, RngSeed(s));
            for (i, e) in g.edges().iter().enumerate() {
                cut[i] += usize::from(p.cluster_of[e.u] != p.cluster_of[e.v]);
            }
            // every tree spans its cluster without cycles; diameter by double BFS
            let mut good = true;
            let mut diameter = 0;
            for (c, tree) in p.trees.iter().enumerate() {
                let pairs: Vec<(usize, usize)> = tree.iter().map(|&e| (g.edges()[e].u, g.edges()[e].v)).collect();
                let members = (0..n).filter(|&v| p.cluster_of[v] == c).count();
                good &= pairs.iter().all(|&(u, v)| p.cluster_of[u] == c && p.cluster_of[v] == c);
                good &= is_forest(n, pairs.iter().copied()) && pairs.len() + 1 == members;
                let d0 = bfs(n, &pairs, p.centers[c]);
                let far = (0..n).filter(|&v| d0[v] != usize::MAX).max_by_key(|&v| d0[v]).unwrap();
                let d1 = bfs(n, &pairs, far);
                diameter = diameter.max(d1.iter().filter(|&&d| d != usize::MAX).copied().max().unwrap());
            }
            worst_diameter = worst_diameter.max(diameter);
            certified += usize::from(good && diameter as f64 <= bound);
        }
        let max_rate = cut.iter().map(|&c| c as f64 / CLUSTER_SEEDS as f64).fold(0.0, f64::max);
        let pass = max_rate <= CLUSTER_BETA + SEPARATION_SLACK && certified == CLUSTER_SEEDS as usize;
        ok &= pass;
        lines.push(format!(
            "{family}: max separation {max_rate:.3} (limit {:.3}), diameter <= {bound:.1} in {certified}/{CLUSTER_SEEDS}, worst {worst_diameter}",
            CLUSTER_BETA + SEPARATION_SLACK
        ));
    }
    ok &= start.elapsed().as_secs() < 120;
    verdict(7, "clustering contract", ok, lines.join("; "), start);
    assert!(ok);
}

#[test]
fn c08_probabilistic_spanner() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for (family, n) in [(GraphFamily::Complete, 20), (GraphFamily::Gnp(0.1), 200)] {
        let g = generate(family, n, RngSeed(0)).unwrap();
        let lengths = vec![1.0; g.m()];
        let limit = C_STR * (n as f64).log2();
        let mut good = vec![0usize; g.m()];
        let mut structural = 0;
        for s in 0..SPANNER_SEEDS {
            let sp = prob_spanner(&g, &lengths, &SpannerConfig::default(), RngSeed(s)).unwrap();
            let forests_ok = sp.forests.len() <= sp.t
                && sp.edge_count() <= sp.t * (n - 1)
                && sp.forests.iter().all(|f| is_forest(n, f.edges.iter().map(|&e| (g.edges()[e].u, g.edges()[e].v))));
            structural += usize::from(forests_ok);
            let pairs: Vec<(usize, usize)> = sp.edge_ids().into_iter().map(|e| (g.edges()[e].u, g.edges()[e].v)).collect();
            let mut dist: Vec<Option<Vec<usize>>> = vec![None; n];
            for (i, e) in g.edges().iter().enumerate() {
                let d = dist[e.u].get_or_insert_with(|| bfs(n, &pairs, e.u));
                if d[e.v] != usize::MAX && d[e.v] as f64 <= limit {
                    good[i] += 1;
                }
            }
        }
        let min_rate = good.iter().map(|&c| c as f64 / SPANNER_SEEDS as f64).fold(1.0, f64::min);
        let pass = min_rate >= STRETCH_MIN_RATE && structural == SPANNER_SEEDS as usize;
        ok &= pass;
        lines.push(format!(
            "{family} n={n}: min per-edge Pr[stretch <= {limit:.2}] {min_rate:.3} (need {STRETCH_MIN_RATE}), forests ok {structural}/{SPANNER_SEEDS}"
        ));
    }
    ok &= start.elapsed().as_secs() < 180;
    verdict(8, "probabilistic spanner", ok, format!("C_str {C_STR}; {}", lines.join("; ")), start);
    assert!(ok);
}

#[test]
fn c09_spanner_estimate_domination() {
    let start = Instant::now();
    let alpha_est = 4.0;
    let graphs: Vec<WeightedGraph> = vec![
        generate(GraphFamily::Complete, 30, RngSeed(0)).unwrap(),
        generate(GraphFamily::Gnp(0.3), 60, RngSeed(1)).unwrap(),
        generate(GraphFamily::Grid, 49, RngSeed(0)).unwrap(),
        generate(GraphFamily::Barbell, 40, RngSeed(0)).unwrap(),
        generate(GraphFamily::Cycle, 50, RngSeed(0)).unwrap(),
    ];
    let exact: Vec<Vec<f64>> = graphs.iter().map(oracle_leverage).collect();
    let mut dominated_seeds = 0;
    let mut identity_ok = true;
    for s in 0..DOMINATION_SEEDS {
        let mut all = true;
        for (g, tau) in graphs.iter().zip(&exact) {
            let est = spanner_estimate(g, alpha_est, &EstimateConfig::default(), RngSeed(s)).unwrap();
            let hat = est.estimates.values();
            all &= hat.iter().zip(tau).all(|(h, t)| *h >= t - 1e-12);
            let bundle = est.in_bundle.iter().filter(|&&b| b).count() as f64;
            for alpha in [alpha_est / 10.0, 2.0] {
                let lhs: f64 = hat.iter().map(|t| (alpha * t).min(1.0)).sum();
                identity_ok &= lhs <= bundle + g.m() as f64 * alpha / alpha_est + 1e-9;
            }
        }
        dominated_seeds += usize::from(all);
    }
    let ok = dominated_seeds >= DOMINATION_MIN_OK && identity_ok;
    let detail = format!(
        "tau_hat >= tau on all {} graphs in {dominated_seeds}/{DOMINATION_SEEDS} seeds (need {DOMINATION_MIN_OK}); count identity held in every run: {identity_ok}",
        graphs.len()
    );
    verdict(9, "spanner estimate domination", ok, detail, start);
    assert!(ok);
}

#[test]
fn c10_parallel_end_to_end() {
    let start = Instant::now();
    let n = 400;
    let round_limit = 2.0 * (n as f64).log2();
    let mut within_eps = 0;
    let mut rounds_ok = 0;
    let mut subset_ok = 0;
    let mut forests_ok = 0;
    let mut eps_seen = Vec::new();
    for seed in 0..PARALLEL_SEEDS {
        let g = generate(GraphFamily::Gnp(0.2), n, RngSeed(seed)).unwrap();
        let mut cfg = ParallelConfig::desk(0.5).with_seed(seed);
        cfg.measure_epsilon = false;
        cfg.track_forests = true;
        let run = match parallel_sparsify(&g, &cfg) {
            Ok(r) => r,
            Err(e) => {
                report(&format!("  seed {seed}: {e}"));
                continue;
            }
        };
        let eps = graph_epsilon(&g, &run.output);
        eps_seen.push(eps);
        within_eps += usize::from(eps <= 0.5);
        rounds_ok += usize::from(run.rounds.len() as f64 <= round_limit);
        subset_ok += usize::from(edges_within(&g, &run.output));
        let fd = forest_decomposition(&run).unwrap();
        let mut seen = vec![0usize; run.output.m()];
        let acyclic = fd.forests.iter().all(|f| {
            f.iter().for_each(|&i| seen[i] += 1);
            is_forest(n, f.iter().map(|&i| (run.output.edges()[i].u, run.output.edges()[i].v)))
        });
        forests_ok += usize::from(acyclic && seen.iter().all(|&c| c == 1));
    }
    let all = PARALLEL_SEEDS as usize;
    let ok = within_eps >= PARALLEL_MIN_OK
        && rounds_ok == all
        && subset_ok == all
        && forests_ok == all
        && start.elapsed().as_secs() < 600;
    let worst = eps_seen.iter().copied().fold(0.0, f64::max);
    let detail = format!(
        "eps* <= 0.5 in {within_eps}/{all} (need {PARALLEL_MIN_OK}), median {:.3}, worst {worst:.3}; rounds <= {round_limit:.1} in {rounds_ok}/{all}; \
         E' in E in {subset_ok}/{all}; acyclic forest cover in {forests_ok}/{all}",
        median(eps_seen.clone())
    );
    verdict(10, "parallel end to end", ok, detail, start);
    assert!(ok);
}

fn run_cli(dir: &Path, args: &[&str]) -> bool {
    let out = Command::new(env!("CARGO_BIN_EXE_resparse")).current_dir(dir).args(args).output().unwrap();
    if !out.status.success() {
        report(&format!("  resparse {args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    out.status.success()
}

#[test]
fn c11_determinism() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(run_cli(d, &["gen", "complete", "40", "--out", "k40.txt"]));
    assert!(run_cli(d, &["--seed", "21", "gen", "gnp:0.2", "300", "--out", "g300.txt"]));
    let checks: [&[&str]; DETERMINISM_CHECKS] = [
        &["--seed", "1", "gen", "gnp:0.1", "200", "--out", "o1.txt"],
        &["--seed", "2", "gen", "gnp:0.5", "50", "--out", "o2.txt"],
        &["--seed", "3", "stream", "k40.txt", "--beta-coeff", "0.3", "--buffer-coeff", "4", "--out", "o3.txt"],
        &["--seed", "4", "stream", "k40.txt", "--beta-coeff", "0.3", "--buffer-coeff", "4", "--leverage", "sketched", "--out", "o4.txt"],
        &["--seed", "5", "stream", "g300.txt", "--beta-coeff", "0.05", "--buffer-coeff", "4", "--out", "o5.txt"],
        &["--seed", "6", "parallel", "g300.txt", "--desk-scale", "--out", "o6.txt", "--round-log", "o6.csv", "--forests", "o6.f"],
        &["--seed", "7", "--threads", "1", "parallel", "g300.txt", "--desk-scale", "--no-measure", "--out", "o7.txt"],
        &["--seed", "8", "game", "--trials", "20", "--histogram", "o8.csv", "--trace", "o8.trace"],
        &["--seed", "9", "game", "--trials", "10", "--mode", "fresh", "--strategy", "random", "--budget", "3000", "--trace", "o9.trace"],
        &["--seed", "10", "game", "--family", "gnp:0.6", "--n", "10", "--trials", "10", "--strict", "--histogram", "o10.csv"],
    ];
    let mut identical = 0;
    for (k, args) in checks.iter().enumerate() {
        let manifest = format!("m{k}.json");
        let mut full: Vec<&str> = vec!["--manifest", &manifest];
        full.extend_from_slice(args);
        if !run_cli(d, &full) {
            continue;
        }
        let m = resparse::cli::RunManifest::read(&d.join(&manifest)).unwrap();
        let before: Vec<String> = m.outputs.iter().map(|p| sha256_file(&d.join(p))).collect();
        m.outputs.iter().for_each(|p| std::fs::remove_file(d.join(p)).unwrap());
        let threads = if k % 2 == 0 { "2" } else { "1" };
        if !run_cli(d, &["--threads", threads, "--manifest", "again.json", "rerun", &manifest]) {
            continue;
        }
        let after: Vec<String> = m.outputs.iter().map(|p| sha256_file(&d.join(p))).collect();
        identical += usize::from(!before.is_empty() && before == after);
    }
    let ok = identical == DETERMINISM_CHECKS;
    verdict(11, "determinism", ok, format!("{identical}/{DETERMINISM_CHECKS} reruns byte-identical"), start);
    assert!(ok);
}

//! Exponential start time clusters, a probabilistic spanner and the leverage
//! upper bounds obtained by peeling spanners off a grid.

use resparse::graph::{generate, GraphFamily};
use resparse::linalg::{exact_leverage, DEFAULT_DENSE_CAP};
use resparse::spanner::{
    diameter_bound, est_cluster, prob_spanner, spanner_estimate, stretches, EstimateConfig, SpannerConfig,
    CLUSTER_BETA, C_STR,
};
use resparse::{Result, RngSeed};

fn main() -> Result<()> {
    let g = generate(GraphFamily::Grid, 900, RngSeed(0))?;
    let n = g.n();
    println!("30 x 30 grid: {} edges", g.m());

    let clusters = est_cluster(&g.adjacency(), CLUSTER_BETA, 4.0, RngSeed(1));
    let cut = g.edges().iter().filter(|e| clusters.separates(e.u, e.v)).count();
    println!(
        "clusters: {}, max tree diameter {} (bound {:.1}), cut edges {:.3}",
        clusters.len(),
        clusters.max_diameter(),
        diameter_bound(n, CLUSTER_BETA, 4.0),
        cut as f64 / g.m() as f64
    );

    let lengths = vec![1.0; g.m()];
    let cfg = SpannerConfig::default();
    let sp = prob_spanner(&g, &lengths, &cfg, RngSeed(2))?;
    let st = stretches(&g, &lengths, &sp);
    let target = C_STR * (n as f64).log2();
    let good = st.iter().filter(|&&s| s <= target).count();
    println!(
        "spanner: {} forests (t = {}), {} edges, stretch <= {target:.1} on {good}/{} edges",
        sp.forests.len(),
        sp.t,
        sp.edge_count(),
        g.m()
    );

    let alpha_est = 4.0;
    let est_cfg = EstimateConfig { c_k: 0.1, ..Default::default() };
    let est = spanner_estimate(&g, alpha_est, &est_cfg, RngSeed(3))?;
    let exact = exact_leverage(&g, DEFAULT_DENSE_CAP)?;
    let dominated = est.estimates.values().iter().zip(exact.values()).filter(|(a, b)| a >= b).count();
    println!(
        "estimate: {} peel rounds, bundle {} edges, tau_hat >= tau on {dominated}/{} edges",
        est.rounds_run,
        est.bundle_size(),
        g.m()
    );
    Ok(())
}

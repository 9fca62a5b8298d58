//! Measures ε* = max |λ − 1| of a reweighted subgraph against the original.
//! Uniform sampling is compared with leverage-score sampling at equal budget.

use rand::Rng;
use resparse::graph::{generate, Edge, GraphFamily, WeightedGraph};
use resparse::linalg::{exact_leverage, spectral_epsilon_graphs, DEFAULT_DENSE_CAP};
use resparse::{Result, RngSeed};

fn sample(g: &WeightedGraph, probs: &[f64], seed: u64) -> Result<WeightedGraph> {
    let mut rng = RngSeed(seed).rng();
    let edges: Vec<Edge> = g
        .edges()
        .iter()
        .zip(probs)
        .filter(|(_, &p)| rng.random::<f64>() < p)
        .map(|(e, &p)| Edge::new(e.u, e.v, e.w / p))
        .collect();
    WeightedGraph::new(g.n(), edges)
}

fn main() -> Result<()> {
    let g = generate(GraphFamily::Barbell, 60, RngSeed(0))?;
    let tau = exact_leverage(&g, DEFAULT_DENSE_CAP)?;
    let budget = 0.35 * g.m() as f64;
    let scale = budget / tau.sum();
    let by_leverage: Vec<f64> = tau.values().iter().map(|t| (t * scale).min(1.0)).collect();
    let uniform = vec![budget / g.m() as f64; g.m()];

    for (name, probs) in [("uniform", &uniform), ("leverage", &by_leverage)] {
        let mut worst: f64 = 0.0;
        for seed in 0..5 {
            let h = sample(&g, probs, seed)?;
            // dropping the bridge disconnects H, which no reweighting can repair
            if h.components().0 > 1 {
                worst = f64::INFINITY;
                println!("{name:<9} seed {seed}: {} edges, disconnected", h.m());
                continue;
            }
            let eps = spectral_epsilon_graphs(&g, &h, DEFAULT_DENSE_CAP)?;
            worst = worst.max(eps.value);
            println!("{name:<9} seed {seed}: {} edges, epsilon* = {eps}", h.m());
        }
        println!("{name:<9} worst epsilon* = {worst:.4}\n");
    }
    Ok(())
}

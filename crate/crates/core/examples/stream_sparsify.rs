//! Streams 40 copies of K_24 through the buffered sparsifier, then replays its
//! sampling decisions as moves of the game to check that each one was legal.

use resparse::game::replay_decisions;
use resparse::graph::{generate, Edge, GraphFamily, WeightedGraph};
use resparse::linalg::{spectral_epsilon_graphs, DEFAULT_DENSE_CAP};
use resparse::streaming::{stream_sparsify_graph, StreamConfig};
use resparse::{Result, RngSeed};

fn main() -> Result<()> {
    let n = 24;
    let block = generate(GraphFamily::Complete, n, RngSeed(0))?;
    let stream: Vec<Edge> = (0..40).flat_map(|_| block.edges().iter().copied()).collect();
    let full = WeightedGraph::new(n, stream.clone())?;

    let mut cfg = StreamConfig::desk(0.45).with_seed(3);
    cfg.beta_coeff = 2.0;
    cfg.assert_space = true;
    cfg.record_decisions = true;
    let (h, out) = stream_sparsify_graph(n, stream.iter().map(|&e| Ok(e)), &cfg)?;
    let s = out.stats;
    println!("streamed {} edges, kept {}", s.delivered, h.m());
    println!("threshold {} rows, peak {} rows, {} resparsifications", s.threshold, s.peak_rows, s.resparsifications);
    println!("epsilon* = {}", spectral_epsilon_graphs(&full, &h, DEFAULT_DENSE_CAP)?);

    let alpha = s.beta / (1.0 + cfg.epsilon);
    let decisions = out.decisions.iter().map(|d| (d.source, d.p, d.kept));
    let report = replay_decisions(n, full.rows(), alpha, cfg.epsilon, decisions)?;
    println!(
        "replayed {} decisions as game moves: final epsilon* {:.4}, left the band: {}",
        report.moves,
        report.final_epsilon_star,
        report.stopped_at.is_some()
    );
    Ok(())
}

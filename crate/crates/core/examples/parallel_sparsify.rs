//! Spanner-based sparsification of G(400, 0.2) with the desk constants,
//! followed by a forest decomposition of the output.

use resparse::graph::{generate, GraphFamily};
use resparse::parallel::{forest_decomposition, parallel_sparsify, ParallelConfig};
use resparse::{Result, RngSeed};

fn main() -> Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0);
    let g = generate(GraphFamily::Gnp(0.2), 400, RngSeed(seed))?;
    let mut cfg = ParallelConfig::desk(0.5).with_seed(seed);
    cfg.track_forests = true;
    println!("G(400, 0.2): {} edges, stop at {:.0}", g.m(), cfg.threshold(g.n()));

    let run = parallel_sparsify(&g, &cfg)?;
    print!("{}", run.round_log_csv());
    let fd = forest_decomposition(&run)?;
    println!(
        "output {} edges in {} forests ({} from spanner bundles, {} packed)",
        run.output.m(),
        fd.count(),
        fd.from_spanners,
        fd.packed
    );
    Ok(())
}

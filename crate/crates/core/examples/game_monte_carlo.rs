//! Plays the resampling game on split K_8 rows against the halving adversary
//! and reports how often the adversary pushes ε* past ε.

use resparse::game::{monte_carlo, split_rows, GameConfig, GameEnd, GameState, StrategyKind};
use resparse::graph::{generate, GraphFamily};
use resparse::linalg::DEFAULT_DENSE_CAP;
use resparse::{Result, RngSeed};

fn main() -> Result<()> {
    let trials: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(200);
    let g = generate(GraphFamily::Complete, 8, RngSeed(0))?;
    let mut cfg = GameConfig::new(0.4);
    cfg.strict = true;
    let alpha = cfg.alpha(g.n());
    // copies of each edge row with leverage ≤ 1/(4α), so every row can be halved twice
    let rows = split_rows(g.n(), &g.rows(), alpha, 2, DEFAULT_DENSE_CAP)?;
    let prototype = GameState::new(g.n(), rows, &cfg, RngSeed(0))?;
    println!("alpha = {alpha:.2}, rows = {}", prototype.row_count());

    let runs = monte_carlo(&prototype, StrategyKind::Halving, trials, RngSeed(42), usize::MAX)?;
    let wins = runs.iter().filter(|r| matches!(r.end, GameEnd::AdversaryWon { .. })).count();
    let bound = 16.0 / alpha;
    let within = runs.iter().filter(|r| r.variation_norm <= bound).count();
    let worst = runs.iter().map(|r| r.max_epsilon_star).fold(0.0, f64::max);
    println!("adversary won {wins}/{trials}");
    println!("max epsilon* over all moves {worst:.4} (epsilon = {})", cfg.epsilon);
    println!("||W_k|| <= 16/alpha = {bound:.4} in {within}/{trials} trials");
    Ok(())
}

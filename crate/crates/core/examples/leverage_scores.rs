//! Exact leverage scores next to JL-sketched upper bounds.

use resparse::graph::{generate, GraphFamily};
use resparse::linalg::{exact_leverage, sketch_dimension, sketched_leverage_upper, DEFAULT_DENSE_CAP};
use resparse::{Result, RngSeed};

fn main() -> Result<()> {
    let g = generate(GraphFamily::Barbell, 24, RngSeed(0))?;
    let exact = exact_leverage(&g, DEFAULT_DENSE_CAP)?;
    let delta = 0.25;
    let sketched = sketched_leverage_upper(&g, delta, RngSeed(7))?;
    println!("barbell n={} m={}, sketch dimension {}", g.n(), g.m(), sketch_dimension(g.n(), delta));
    println!("sum exact = {:.6} (n - 1 = {})", exact.sum(), g.n() - 1);
    println!("sum upper = {:.6}", sketched.sum());

    let bridges = g.bridges();
    println!("\n{:>4} {:>9} {:>9} {:>9}  bridge", "edge", "u-v", "exact", "upper");
    for (i, e) in g.edges().iter().enumerate().filter(|(i, _)| i % 8 == 0 || bridges[*i]) {
        println!(
            "{i:>4} {:>9} {:>9.5} {:>9.5}  {}",
            format!("{}-{}", e.u, e.v),
            exact.values()[i],
            sketched.values()[i],
            if bridges[i] { "yes" } else { "" }
        );
    }
    let dominated = exact.values().iter().zip(sketched.values()).filter(|(e, s)| s >= e).count();
    println!("\nupper bound holds on {dominated}/{} edges", g.m());
    Ok(())
}

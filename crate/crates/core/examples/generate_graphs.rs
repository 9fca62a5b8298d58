//! Generates each built-in family, writes it in edge-list format and reads it back.
//!
//! cargo run --example generate_graphs -- 12

use resparse::graph::{generate, read_edge_list, write_edge_list, GraphFamily};
use resparse::{Result, RngSeed};

fn main() -> Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(12);
    let families = ["path", "cycle", "star", "grid", "complete", "barbell", "gnp:0.3"];
    for name in families {
        let family: GraphFamily = name.parse()?;
        let g = generate(family, n, RngSeed(1))?;
        let text = write_edge_list(&g);
        let back = read_edge_list(&text)?;
        assert_eq!(back.edges(), g.edges());
        let (components, _) = g.components();
        println!("{:<10} n={:<4} m={:<5} components={components}", family.to_string(), g.n(), g.m());
    }

    let path = generate(GraphFamily::Path, 4, RngSeed(0))?;
    print!("\npath on 4 vertices:\n{}", write_edge_list(&path));
    Ok(())
}

//! Spectral graph sparsification built around resparsification.
//!
//! * [`streaming`]: a single-pass sparsifier over row streams that keeps a
//!   buffer of `O(n log n / ε²)` rows and resamples it by leverage scores
//!   whenever it overflows.
//! * [`parallel`]: a combinatorial sparsifier that bounds leverage scores with
//!   bundles of probabilistic spanners ([`spanner`]) and samples repeatedly.
//! * [`game`]: an executable model of the adversarial resampling process both
//!   algorithms reduce to, tracking the martingale and its quadratic variation.
//! * [`linalg`]: Laplacians, CG solves, exact and sketched leverage scores and
//!   the spectral error meter used to check everything else.

pub mod cli;
pub mod error;
pub mod game;
pub mod graph;
pub mod linalg;
pub mod parallel;
pub mod rng;
pub mod spanner;
pub mod streaming;
pub mod unionfind;

pub use error::{Error, Result};
pub use graph::{Edge, GraphFamily, Row, RowStream, WeightedGraph};
pub use rng::RngSeed;

//! Laplacian algebra: assembly, pseudoinverse solves, leverage scores and the
//! spectral approximation meter used to check every sparsifier.

mod cg;
mod factor;
mod leverage;
mod spectral;

pub use cg::{conjugate_gradient, pinv_apply, CgOptions, GramOperator, KernelProjector, SparseLaplacian, SymmetricOperator};
pub use factor::{Kernel, RangeFactor};
pub use leverage::{
    exact_leverage, exact_row_leverage, sketch_dimension, sketched_leverage_upper, sketched_row_leverage_upper,
    LeverageEstimates, Provenance,
};
pub use spectral::{
    generalized_extremes, spectral_epsilon, spectral_epsilon_graphs, EpsilonKind, SpectralError, RAYLEIGH_PROBES,
};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{Row, WeightedGraph};
use crate::unionfind::UnionFind;

/// Dense symmetric matrix.
pub type DenseMatrix = DMatrix<f64>;

/// Default ceiling on the dimension for dense eigensolves.
pub const DEFAULT_DENSE_CAP: usize = 1024;

/// Environment variable overriding [`DEFAULT_DENSE_CAP`].
pub const DENSE_CAP_ENV: &str = "RESPARSE_DENSE_CAP";

pub fn dense_cap_from_env() -> usize {
    std::env::var(DENSE_CAP_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_DENSE_CAP)
}

pub fn laplacian(g: &WeightedGraph) -> DenseMatrix {
    let mut l = DMatrix::zeros(g.n(), g.n());
    for e in g.edges() {
        l[(e.u, e.u)] += e.w;
        l[(e.v, e.v)] += e.w;
        l[(e.u, e.v)] -= e.w;
        l[(e.v, e.u)] -= e.w;
    }
    l
}

/// `Σ a aᵀ` over rows, each scaled by its weight.
pub fn gram<'a, I>(dim: usize, rows: I) -> DenseMatrix
where
    I: IntoIterator<Item = (&'a Row, f64)>,
{
    let mut m = DMatrix::zeros(dim, dim);
    for (row, w) in rows {
        add_outer(&mut m, row, w);
    }
    m
}

/// `m += w · a aᵀ`.
pub fn add_outer(m: &mut DenseMatrix, row: &Row, w: f64) {
    let e = row.entries();
    for &(i, x) in e {
        for &(j, y) in e {
            m[(i, j)] += w * x * y;
        }
    }
}

pub fn quadratic_form(l: &DenseMatrix, x: &[f64]) -> Result<f64> {
    if l.nrows() != x.len() || l.ncols() != x.len() {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch: matrix {}x{}, vector {}",
            l.nrows(),
            l.ncols(),
            x.len()
        )));
    }
    let mut total = 0.0;
    for i in 0..x.len() {
        let mut acc = 0.0;
        for j in 0..x.len() {
            acc += l[(i, j)] * x[j];
        }
        total += x[i] * acc;
    }
    Ok(total)
}

/// `Σ_e w_e (x_u − x_v)²` without forming the matrix.
pub fn graph_quadratic_form(g: &WeightedGraph, x: &[f64]) -> f64 {
    g.edges().iter().map(|e| e.w * (x[e.u] - x[e.v]).powi(2)).sum()
}

/// Connected components of the support graph of a Laplacian-structured
/// matrix (vertices joined by nonzero off-diagonal entries).
pub fn laplacian_components(l: &DenseMatrix) -> (usize, Vec<usize>) {
    let n = l.nrows();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if l[(i, j)] != 0.0 || l[(j, i)] != 0.0 {
                uf.union(i, j);
            }
        }
    }
    (uf.set_count(), uf.labels())
}

/// Kernel of `Σ a aᵀ`: component count of the support graph when every row
/// has the graph shape `s(e_u − e_v)`, numerical rank otherwise.
pub fn infer_kernel(dim: usize, rows: &[Row]) -> Kernel {
    let mut uf = UnionFind::new(dim);
    for r in rows {
        match r.as_edge() {
            Some(e) => {
                uf.union(e.u, e.v);
            }
            None if r.entries().is_empty() => {}
            None => return Kernel::Numerical,
        }
    }
    Kernel::Dim(uf.set_count())
}

pub(crate) fn max_asymmetry(m: &DenseMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..i {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

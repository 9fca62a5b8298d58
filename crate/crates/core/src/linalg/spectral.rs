use serde::{Deserialize, Serialize};

use super::factor::{Kernel, RangeFactor};
use super::{graph_quadratic_form, laplacian, laplacian_components, max_asymmetry, DenseMatrix};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::rng::{gaussian, RngSeed, TAG_RAYLEIGH};

/// Number of random probes used above the dense cap.
pub const RAYLEIGH_PROBES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EpsilonKind {
    /// Dense generalized eigensolve: the exact smallest ε.
    Exact,
    /// Best Rayleigh quotient over random probes: a lower bound only.
    LowerBound,
}

/// Measured spectral approximation error `ε*` of `H` relative to `G`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralError {
    pub value: f64,
    pub kind: EpsilonKind,
}

impl std::fmt::Display for SpectralError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            EpsilonKind::Exact => write!(f, "{:.6e}", self.value),
            EpsilonKind::LowerBound => write!(f, ">={:.6e}", self.value),
        }
    }
}

fn same_partition(a: &[usize], b: &[usize]) -> bool {
    // dense labels are assigned in order of first appearance
    a == b
}

fn check_dims(lg: &DenseMatrix, lh: &DenseMatrix) -> Result<()> {
    if lg.shape() != lh.shape() || lg.nrows() != lg.ncols() {
        return Err(Error::InvalidInput(format!("shape mismatch {:?} vs {:?}", lg.shape(), lh.shape())));
    }
    Ok(())
}

/// Extreme generalized eigenvalues `(λ_min, λ_max)` of `(L_H, L_G)` on the
/// range of `L_G`. Both matrices must have the same component structure.
pub fn generalized_extremes(lg: &DenseMatrix, lh: &DenseMatrix) -> Result<(f64, f64)> {
    check_dims(lg, lh)?;
    let (cg, labels_g) = laplacian_components(lg);
    let (_, labels_h) = laplacian_components(lh);
    if !same_partition(&labels_g, &labels_h) {
        return Err(Error::KernelMismatch("the two graphs have different connected components".into()));
    }
    Ok(RangeFactor::new(lg, Kernel::Dim(cg))?.relative_extremes(lh))
}

/// `ε* = max |λ − 1|` over the generalized eigenvalues of `(L_H, L_G)`
/// restricted to the range of `L_G`. Above `cap` the value is a Rayleigh
/// quotient lower bound and is labeled as such.
pub fn spectral_epsilon(lg: &DenseMatrix, lh: &DenseMatrix, cap: usize) -> Result<SpectralError> {
    check_dims(lg, lh)?;
    if max_asymmetry(lg) > 1e-12 || max_asymmetry(lh) > 1e-12 {
        return Err(Error::InvalidInput("Laplacians must be symmetric".into()));
    }
    let n = lg.nrows();
    if n <= cap {
        let (lo, hi) = generalized_extremes(lg, lh)?;
        return Ok(SpectralError { value: (1.0 - lo).max(hi - 1.0), kind: EpsilonKind::Exact });
    }
    let (c, labels) = laplacian_components(lg);
    let (_, labels_h) = laplacian_components(lh);
    if !same_partition(&labels, &labels_h) {
        return Err(Error::KernelMismatch("the two graphs have different connected components".into()));
    }
    let form = |m: &DenseMatrix, x: &[f64]| super::quadratic_form(m, x).unwrap_or(0.0);
    Ok(rayleigh_lower_bound(n, c, &labels, |x| (form(lg, x), form(lh, x))))
}

/// Graph-level [`spectral_epsilon`]; above the cap it never forms dense matrices.
pub fn spectral_epsilon_graphs(g: &WeightedGraph, h: &WeightedGraph, cap: usize) -> Result<SpectralError> {
    if g.n() != h.n() {
        return Err(Error::InvalidInput(format!("vertex counts differ: {} vs {}", g.n(), h.n())));
    }
    if g.n() <= cap {
        return spectral_epsilon(&laplacian(g), &laplacian(h), cap);
    }
    let (c, labels) = g.components();
    if labels != h.components().1 {
        return Err(Error::KernelMismatch("the two graphs have different connected components".into()));
    }
    Ok(rayleigh_lower_bound(g.n(), c, &labels, |x| (graph_quadratic_form(g, x), graph_quadratic_form(h, x))))
}

fn rayleigh_lower_bound<F>(n: usize, components: usize, labels: &[usize], forms: F) -> SpectralError
where
    F: Fn(&[f64]) -> (f64, f64),
{
    let mut rng = RngSeed(0).substream(TAG_RAYLEIGH, n as u64);
    let projector = super::KernelProjector::from_labels(components, labels.to_vec());
    let mut best: f64 = 0.0;
    let mut x = vec![0.0; n];
    for _ in 0..RAYLEIGH_PROBES {
        x.iter_mut().for_each(|v| *v = gaussian(&mut rng));
        projector.project(&mut x);
        let (qg, qh) = forms(&x);
        if qg > 0.0 {
            best = best.max((qh / qg - 1.0).abs());
        }
    }
    SpectralError { value: best, kind: EpsilonKind::LowerBound }
}

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cg::{conjugate_gradient, CgOptions, GramOperator, KernelProjector, SparseLaplacian, SymmetricOperator};
use super::factor::{Kernel, RangeFactor};
use super::{gram, infer_kernel, DenseMatrix};
use crate::error::{Error, Result};
use crate::graph::{Row, WeightedGraph};
use crate::rng::{RngSeed, TAG_SKETCH};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Exact,
    Sketched,
    Spanner,
}

/// Per-row leverage values or upper bounds, each in `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeverageEstimates {
    values: Vec<f64>,
    provenance: Provenance,
    sum: f64,
}

impl LeverageEstimates {
    pub fn new(values: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(**v > 0.0 && **v <= 1.0)) {
            return Err(Error::Contract(format!("leverage value {v} at index {i} outside (0, 1]")));
        }
        let sum = values.iter().sum();
        Ok(LeverageEstimates { values, provenance, sum })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn sum(&self) -> f64 {
        self.sum
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// `aᵀ P a` for a sparse row.
fn sandwich(p: &DenseMatrix, row: &Row) -> f64 {
    let e = row.entries();
    let mut total = 0.0;
    for &(i, x) in e {
        for &(j, y) in e {
            total += x * y * p[(i, j)];
        }
    }
    total
}

/// Exact leverage `a_iᵀ (AᵀA)† a_i` of every row (may be 0 for zero rows).
pub fn exact_row_leverage(dim: usize, rows: &[Row], kernel: Kernel, cap: usize) -> Result<Vec<f64>> {
    if dim > cap {
        return Err(Error::SizeCap { n: dim, cap });
    }
    let m = gram(dim, rows.iter().map(|r| (r, 1.0)));
    let pinv = RangeFactor::new(&m, kernel)?.pinv();
    Ok(rows.par_iter().map(|r| sandwich(&pinv, r).max(0.0)).collect())
}

/// Exact edge leverage `w_e b_eᵀ L† b_e` via a dense pseudoinverse. Bridges
/// are detected combinatorially and reported as exactly 1.
pub fn exact_leverage(g: &WeightedGraph, cap: usize) -> Result<LeverageEstimates> {
    if g.n() > cap {
        return Err(Error::SizeCap { n: g.n(), cap });
    }
    let (components, _) = g.components();
    let l = super::laplacian(g);
    let pinv = RangeFactor::new(&l, Kernel::Dim(components))?.pinv();
    let bridges = g.bridges();
    let values = g
        .edges()
        .iter()
        .zip(bridges)
        .map(|(e, bridge)| {
            if bridge {
                1.0
            } else {
                let r = pinv[(e.u, e.u)] + pinv[(e.v, e.v)] - 2.0 * pinv[(e.u, e.v)];
                (e.w * r).clamp(f64::MIN_POSITIVE, 1.0)
            }
        })
        .collect();
    LeverageEstimates::new(values, Provenance::Exact)
}

/// Number of sketch rows: `ceil(24 ln n / δ²)`.
pub fn sketch_dimension(n: usize, delta: f64) -> usize {
    let n = n.max(2) as f64;
    (24.0 * n.ln() / (delta * delta)).ceil() as usize
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 1.0 / 3.0) {
        return Err(Error::Precondition(format!("sketch accuracy delta must lie in (0, 1/3], got {delta}")));
    }
    Ok(())
}

const SKETCH_CHUNK: usize = 16;

/// JL estimates `‖Q A M† a_i‖²` with `Q` a random ±1/√k sign matrix.
fn sketch_core<A: SymmetricOperator>(
    op: &A,
    projector: Option<&KernelProjector>,
    jacobi: bool,
    rows: &[Row],
    delta: f64,
    seed: RngSeed,
) -> Result<Vec<f64>> {
    let dim = op.dim();
    let k = sketch_dimension(dim, delta);
    let scale = 1.0 / (k as f64).sqrt();
    let opts = CgOptions { jacobi, ..CgOptions::default() };
    let chunks: Vec<Result<Vec<f64>>> = (0..k.div_ceil(SKETCH_CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; rows.len()];
            let mut rhs = vec![0.0; dim];
            for j in c * SKETCH_CHUNK..((c + 1) * SKETCH_CHUNK).min(k) {
                let mut rng = seed.substream(TAG_SKETCH, j as u64);
                rhs.iter_mut().for_each(|v| *v = 0.0);
                for r in rows {
                    let s = if rng.random::<bool>() { scale } else { -scale };
                    for &(i, a) in r.entries() {
                        rhs[i] += s * a;
                    }
                }
                let z = conjugate_gradient(op, &rhs, projector, opts)?;
                for (slot, r) in acc.iter_mut().zip(rows) {
                    let d = r.dot(&z);
                    *slot += d * d;
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = vec![0.0; rows.len()];
    for chunk in chunks {
        for (t, v) in total.iter_mut().zip(chunk?) {
            *t += v;
        }
    }
    Ok(total)
}

fn upper_bounds(raw: Vec<f64>, delta: f64) -> Vec<f64> {
    raw.into_iter().map(|v| (v / (1.0 - delta)).clamp(f64::MIN_POSITIVE, 1.0)).collect()
}

/// Leverage upper bounds from a Johnson-Lindenstrauss sketch, solving with
/// Jacobi-preconditioned CG. With high probability every value dominates the
/// true leverage and the total is at most `(1+δ)/(1−δ)·n`.
pub fn sketched_leverage_upper(g: &WeightedGraph, delta: f64, seed: RngSeed) -> Result<LeverageEstimates> {
    check_delta(delta)?;
    let op = SparseLaplacian::new(g);
    let projector = KernelProjector::for_graph(g);
    let rows = g.rows();
    let raw = sketch_core(&op, Some(&projector), true, &rows, delta, seed)?;
    let mut values = upper_bounds(raw, delta);
    for (v, bridge) in values.iter_mut().zip(g.bridges()) {
        if bridge {
            *v = 1.0;
        }
    }
    LeverageEstimates::new(values, Provenance::Sketched)
}

/// Sketched upper bounds for arbitrary rows of `AᵀA`. Rows with the graph
/// shape are solved through the Laplacian path; others use plain CG on
/// `Aᵀ(A x)`. Zero rows get the smallest positive value.
pub fn sketched_row_leverage_upper(dim: usize, rows: &[Row], delta: f64, seed: RngSeed) -> Result<LeverageEstimates> {
    check_delta(delta)?;
    let raw = match infer_kernel(dim, rows) {
        Kernel::Dim(_) => {
            let edges = rows.iter().filter_map(|r| r.as_edge()).collect();
            let g = WeightedGraph::new(dim, edges)?;
            let op = SparseLaplacian::new(&g);
            let projector = KernelProjector::for_graph(&g);
            sketch_core(&op, Some(&projector), true, rows, delta, seed)?
        }
        Kernel::Numerical => {
            let op = GramOperator::new(dim, rows);
            sketch_core(&op, None, false, rows, delta, seed)?
        }
    };
    LeverageEstimates::new(upper_bounds(raw, delta), Provenance::Sketched)
}

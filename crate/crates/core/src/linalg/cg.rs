use nalgebra::DVector;

use super::{laplacian_components, DenseMatrix};
use crate::error::{Error, Result};
use crate::graph::{Row, WeightedGraph};

/// Symmetric positive semidefinite linear operator.
pub trait SymmetricOperator: Sync {
    fn dim(&self) -> usize;
    /// `y ← A x`
    fn apply(&self, x: &[f64], y: &mut [f64]);
    fn diagonal(&self) -> Vec<f64>;
}

impl SymmetricOperator for DenseMatrix {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows()).map(|i| self[(i, i)]).collect()
    }
}

/// Graph Laplacian in compressed adjacency form.
#[derive(Debug, Clone)]
pub struct SparseLaplacian {
    offsets: Vec<usize>,
    neighbors: Vec<(usize, f64)>,
    degree: Vec<f64>,
}

impl SparseLaplacian {
    pub fn new(g: &WeightedGraph) -> Self {
        let n = g.n();
        let mut count = vec![0usize; n + 1];
        for e in g.edges() {
            count[e.u + 1] += 1;
            count[e.v + 1] += 1;
        }
        for i in 0..n {
            count[i + 1] += count[i];
        }
        let offsets = count.clone();
        let mut fill = count;
        let mut neighbors = vec![(0, 0.0); 2 * g.m()];
        let mut degree = vec![0.0; n];
        for e in g.edges() {
            neighbors[fill[e.u]] = (e.v, e.w);
            fill[e.u] += 1;
            neighbors[fill[e.v]] = (e.u, e.w);
            fill[e.v] += 1;
            degree[e.u] += e.w;
            degree[e.v] += e.w;
        }
        SparseLaplacian { offsets, neighbors, degree }
    }
}

impl SymmetricOperator for SparseLaplacian {
    fn dim(&self) -> usize {
        self.degree.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (v, yv) in y.iter_mut().enumerate() {
            let mut acc = self.degree[v] * x[v];
            for &(u, w) in &self.neighbors[self.offsets[v]..self.offsets[v + 1]] {
                acc -= w * x[u];
            }
            *yv = acc;
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        self.degree.clone()
    }
}

/// `AᵀA` applied as `Aᵀ(A x)` for a list of rows.
pub struct GramOperator<'a> {
    dim: usize,
    rows: &'a [Row],
}

impl<'a> GramOperator<'a> {
    pub fn new(dim: usize, rows: &'a [Row]) -> Self {
        GramOperator { dim, rows }
    }
}

impl SymmetricOperator for GramOperator<'_> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for r in self.rows {
            let s = r.dot(x);
            for &(i, a) in r.entries() {
                y[i] += s * a;
            }
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.dim];
        for r in self.rows {
            for &(i, a) in r.entries() {
                d[i] += a * a;
            }
        }
        d
    }
}

/// Orthogonal projection that removes the per-component mean, i.e. the
/// component of a vector in the kernel of a Laplacian.
#[derive(Debug, Clone)]
pub struct KernelProjector {
    labels: Vec<usize>,
    sizes: Vec<f64>,
}

impl KernelProjector {
    pub fn from_labels(count: usize, labels: Vec<usize>) -> Self {
        let mut sizes = vec![0.0; count];
        for &l in &labels {
            sizes[l] += 1.0;
        }
        KernelProjector { labels, sizes }
    }

    pub fn for_graph(g: &WeightedGraph) -> Self {
        let (c, labels) = g.components();
        Self::from_labels(c, labels)
    }

    pub fn for_laplacian(l: &DenseMatrix) -> Self {
        let (c, labels) = laplacian_components(l);
        Self::from_labels(c, labels)
    }

    pub fn components(&self) -> usize {
        self.sizes.len()
    }

    pub fn project(&self, x: &mut [f64]) {
        let mut sums = vec![0.0; self.sizes.len()];
        for (v, &l) in x.iter().zip(&self.labels) {
            sums[l] += v;
        }
        for (v, &l) in x.iter_mut().zip(&self.labels) {
            *v -= sums[l] / self.sizes[l];
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CgOptions {
    /// Relative residual target `‖A x − Π b‖ ≤ tol · ‖Π b‖`.
    pub tol: f64,
    /// Iteration cap; `None` means `10 · n`.
    pub max_iter: Option<usize>,
    /// Diagonal (Jacobi) preconditioning.
    pub jacobi: bool,
}

impl Default for CgOptions {
    fn default() -> Self {
        CgOptions { tol: 1e-10, max_iter: None, jacobi: true }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Preconditioned conjugate gradient for a consistent PSD system. With a
/// projector, the right-hand side and every iterate are kept orthogonal to
/// the kernel so the result is the minimum-norm solution.
pub fn conjugate_gradient<A: SymmetricOperator + ?Sized>(
    op: &A,
    b: &[f64],
    projector: Option<&KernelProjector>,
    opts: CgOptions,
) -> Result<Vec<f64>> {
    let n = op.dim();
    if b.len() != n {
        return Err(Error::InvalidInput(format!("right-hand side has length {}, expected {n}", b.len())));
    }
    let project = |v: &mut [f64]| {
        if let Some(p) = projector {
            p.project(v);
        }
    };
    let max_iter = opts.max_iter.unwrap_or(10 * n.max(1));
    let inv_diag: Vec<f64> = op
        .diagonal()
        .into_iter()
        .map(|d| if opts.jacobi && d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let precondition = |r: &[f64], z: &mut [f64]| {
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        project(z);
    };

    let mut rhs = b.to_vec();
    project(&mut rhs);
    let bnorm = dot(&rhs, &rhs).sqrt();
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok(x);
    }
    let target = opts.tol * bnorm;
    let mut r = rhs.clone();
    let mut z = vec![0.0; n];
    let mut q = vec![0.0; n];
    precondition(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut last = f64::INFINITY;
    for _ in 0..max_iter {
        op.apply(&p, &mut q);
        let pq = dot(&p, &q);
        if pq <= 0.0 {
            break;
        }
        let step = rz / pq;
        for i in 0..n {
            x[i] += step * p[i];
            r[i] -= step * q[i];
        }
        project(&mut r);
        if dot(&r, &r).sqrt() <= target {
            // confirm against the true residual; restart from it otherwise
            op.apply(&x, &mut q);
            for i in 0..n {
                r[i] = rhs[i] - q[i];
            }
            project(&mut r);
            last = dot(&r, &r).sqrt();
            if last <= target {
                project(&mut x);
                return Ok(x);
            }
            precondition(&r, &mut z);
            p.copy_from_slice(&z);
            rz = dot(&r, &z);
            continue;
        }
        precondition(&r, &mut z);
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    if !last.is_finite() {
        op.apply(&x, &mut q);
        for i in 0..n {
            r[i] = rhs[i] - q[i];
        }
        project(&mut r);
        last = dot(&r, &r).sqrt();
    }
    Err(Error::NonConvergence { iterations: max_iter, residual: last / bnorm })
}

/// `L† b` for a Laplacian-structured dense matrix. The kernel is read off the
/// matrix's support graph; the result is orthogonal to it.
pub fn pinv_apply(l: &DenseMatrix, b: &[f64], tol: f64) -> Result<DVector<f64>> {
    let projector = KernelProjector::for_laplacian(l);
    let x = conjugate_gradient(l, b, Some(&projector), CgOptions { tol, ..CgOptions::default() })?;
    Ok(DVector::from_vec(x))
}

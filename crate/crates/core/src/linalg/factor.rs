use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::DenseMatrix;
use crate::error::{Error, Result};

/// How to determine the kernel of a PSD matrix before inverting it on its range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// Known kernel dimension (connected components for Laplacians).
    Dim(usize),
    /// Drop eigenvalues below `1e-9 · λ_max`.
    Numerical,
}

const NUMERICAL_RANK_TOL: f64 = 1e-9;

/// Eigenbasis of a PSD matrix restricted to its range: `M = U Λ Uᵀ` with
/// `U` of size `n × r` and every `λ > 0`.
#[derive(Debug, Clone)]
pub struct RangeFactor {
    basis: DMatrix<f64>,
    values: DVector<f64>,
}

impl RangeFactor {
    pub fn new(m: &DenseMatrix, kernel: Kernel) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::InvalidInput("matrix must be square".into()));
        }
        let eig = SymmetricEigen::new(m.clone());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let keep: Vec<usize> = match kernel {
            Kernel::Dim(k) => {
                if k > n {
                    return Err(Error::InvalidInput(format!("kernel dimension {k} exceeds {n}")));
                }
                order[k..].to_vec()
            }
            Kernel::Numerical => {
                let top = order.last().map(|&i| eig.eigenvalues[i]).unwrap_or(0.0);
                let cut = NUMERICAL_RANK_TOL * top.max(f64::MIN_POSITIVE);
                order.into_iter().filter(|&i| eig.eigenvalues[i] > cut).collect()
            }
        };
        let basis = DMatrix::from_fn(n, keep.len(), |r, c| eig.eigenvectors[(r, keep[c])]);
        let values = DVector::from_fn(keep.len(), |i, _| eig.eigenvalues[keep[i]]);
        if values.iter().any(|&v| v <= 0.0) {
            return Err(Error::KernelMismatch(
                "matrix has nonpositive eigenvalues outside the declared kernel".into(),
            ));
        }
        Ok(RangeFactor { basis, values })
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.values
    }

    /// Moore-Penrose pseudoinverse `U Λ⁻¹ Uᵀ`.
    pub fn pinv(&self) -> DenseMatrix {
        let scaled = DMatrix::from_fn(self.dim(), self.rank(), |r, c| self.basis[(r, c)] / self.values[c]);
        &scaled * self.basis.transpose()
    }

    /// `Λ^{-1/2} Uᵀ` (`r × n`): maps the range isometrically onto a frame in
    /// which the factored matrix becomes the identity.
    pub fn whitener(&self) -> DenseMatrix {
        DMatrix::from_fn(self.rank(), self.dim(), |r, c| self.basis[(c, r)] / self.values[r].sqrt())
    }

    /// Extreme eigenvalues of `W A Wᵀ` for the whitener `W`: the tightest
    /// `(lo, hi)` with `lo·M ⪯ A ⪯ hi·M` on the range of `M`.
    pub fn relative_extremes(&self, a: &DenseMatrix) -> (f64, f64) {
        if self.rank() == 0 {
            return (1.0, 1.0);
        }
        let w = self.whitener();
        let s = &w * a * w.transpose();
        let s = (&s + s.transpose()) * 0.5;
        let vals = s.symmetric_eigenvalues();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// `max |λ − 1|` over the relative spectrum.
    pub fn relative_error(&self, a: &DenseMatrix) -> f64 {
        let (lo, hi) = self.relative_extremes(a);
        (1.0 - lo).max(hi - 1.0)
    }
}

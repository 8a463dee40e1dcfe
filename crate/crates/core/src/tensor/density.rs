use num_complex::Complex64;

use super::decomp::{self, HermitianEigen};
use super::matrix::ComplexMatrix;
use super::vector::MultiVector;
use super::{partial_trace_matrix, Side};
use crate::error::{Error, Result};
use crate::tol;

/// Positive trace-class operator, optionally unnormalized.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    normalized: bool,
}

impl DensityOperator {
    /// Validate Hermitian, positive semidefinite and positive trace. The
    /// `normalized` flag is set when the trace is one within tolerance.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        decomp::check_hermitian(&matrix)?;
        let eig = decomp::hermitian_eigen(&matrix)?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -tol::EIGEN_CLAMP {
            return Err(Error::NotPositive(min));
        }
        let tr = matrix.trace().re;
        if tr <= 0.0 {
            return Err(Error::InvalidTrace(tr));
        }
        let normalized = (tr - 1.0).abs() < tol::CONSTRUCTION;
        Ok(Self { matrix, normalized })
    }

    /// Like [`DensityOperator::new`] but the trace must be one.
    pub fn normalized(matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::new(matrix)?;
        if !rho.normalized {
            return Err(Error::InvalidTrace(rho.trace()));
        }
        Ok(rho)
    }

    /// `|psi><psi|`; normalized iff `psi` is.
    pub fn pure(psi: &MultiVector) -> Result<Self> {
        Self::new(psi.projector())
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d).scale_real(1.0 / d as f64),
            normalized: true,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Divide by the trace.
    pub fn to_normalized(&self) -> Self {
        let tr = self.trace();
        Self {
            matrix: self.matrix.scale(Complex64::new(1.0 / tr, 0.0)),
            normalized: true,
        }
    }

    pub fn eigen(&self) -> Result<HermitianEigen> {
        decomp::hermitian_eigen(&self.matrix)
    }

    /// Reduced operator on the kept factor of a bipartite space.
    pub fn partial_trace(&self, dims: [usize; 2], keep: Side) -> Result<Self> {
        let m = partial_trace_matrix(&self.matrix, dims, keep)?;
        Ok(Self {
            matrix: m,
            normalized: self.normalized,
        })
    }

    pub fn von_neumann_entropy(&self) -> Result<f64> {
        super::von_neumann_entropy(self)
    }
}

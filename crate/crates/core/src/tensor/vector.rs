use num_complex::Complex64;

use super::matrix::{self, ComplexMatrix};
use crate::error::{Error, Result};
use crate::tol;

/// A vector in a tensor product of finite-dimensional factors.
///
/// Amplitudes use lexicographic multi-index order: the index of
/// `(i1, i2, ..., in)` is `((i1*d2 + i2)*d3 + i3)...`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiVector {
    dims: Vec<usize>,
    amplitudes: Vec<Complex64>,
}

impl MultiVector {
    pub fn new(dims: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::EmptyFactor);
        }
        let total: usize = dims.iter().product();
        if amplitudes.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dims {:?} (expected {total})",
                amplitudes.len(),
                dims
            )));
        }
        if let Some(i) = amplitudes
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { dims, amplitudes })
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        let total = dims.iter().product();
        Self::new(dims, vec![Complex64::new(0.0, 0.0); total])
    }

    /// Computational basis vector `|i1 i2 ... in>`.
    pub fn basis(dims: Vec<usize>, indices: &[usize]) -> Result<Self> {
        if indices.len() != dims.len() {
            return Err(Error::FactorCount {
                expected: dims.len(),
                found: indices.len(),
            });
        }
        let mut v = Self::zeros(dims)?;
        let flat = v.flat_index(indices)?;
        v.amplitudes[flat] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    /// Single-factor vector.
    pub fn single(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::new(vec![amplitudes.len()], amplitudes)
    }

    /// Bipartite vector from its coefficient matrix `a[j,k]` in
    /// `psi = sum a_jk e_j (x) f_k`.
    pub fn from_coefficients(a: &ComplexMatrix) -> Result<Self> {
        Self::new(vec![a.rows(), a.cols()], a.entries().to_vec())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn factor_count(&self) -> usize {
        self.dims.len()
    }

    pub fn flat_index(&self, indices: &[usize]) -> Result<usize> {
        let mut flat = 0;
        for (&i, &d) in indices.iter().zip(&self.dims) {
            if i >= d {
                return Err(Error::DimensionMismatch(format!("index {i} out of range {d}")));
            }
            flat = flat * d + i;
        }
        Ok(flat)
    }

    pub fn norm(&self) -> f64 {
        matrix::norm(&self.amplitudes)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() < tol::CONSTRUCTION
    }

    /// Fail unless `|norm - 1| < 1e-10`.
    pub fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized(self.norm()))
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dims: self.dims.clone(),
            amplitudes: matrix::scale_vec(&self.amplitudes, s),
        }
    }

    /// Entrywise sum; dims must agree.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dims(other)?;
        Ok(Self {
            dims: self.dims.clone(),
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// `<self, other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.same_dims(other)?;
        Ok(matrix::inner(&self.amplitudes, &other.amplitudes))
    }

    /// Tensor product; factor lists concatenate.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            dims,
            amplitudes: matrix::kron_vec(&self.amplitudes, &other.amplitudes),
        }
    }

    /// Tensor product of a non-empty list.
    pub fn tensor_all<'a>(parts: impl IntoIterator<Item = &'a MultiVector>) -> Result<Self> {
        let mut iter = parts.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty tensor product".into()))?
            .clone();
        Ok(iter.fold(first, |acc, v| acc.tensor(v)))
    }

    /// Coefficient matrix `a` (d_a x d_b) of a bipartite vector.
    pub fn coefficient_matrix(&self) -> Result<ComplexMatrix> {
        self.require_factors(2)?;
        Ok(ComplexMatrix::from_raw(
            self.dims[0],
            self.dims[1],
            self.amplitudes.clone(),
        ))
    }

    /// Regroup the factors into two blocks `[d_1..d_k] | [d_{k+1}..]`.
    pub fn as_bipartite(&self, split: usize) -> Result<Self> {
        if split == 0 || split >= self.dims.len() {
            return Err(Error::InvalidArgument(format!(
                "split {split} for {} factors",
                self.dims.len()
            )));
        }
        let da = self.dims[..split].iter().product();
        let db = self.dims[split..].iter().product();
        Ok(Self {
            dims: vec![da, db],
            amplitudes: self.amplitudes.clone(),
        })
    }

    /// Projector `|self><self|` as a matrix.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dims != other.dims {
            return f64::INFINITY;
        }
        matrix::max_abs_diff(&self.amplitudes, &other.amplitudes)
    }

    pub fn require_factors(&self, n: usize) -> Result<()> {
        if self.dims.len() != n {
            return Err(Error::FactorCount {
                expected: n,
                found: self.dims.len(),
            });
        }
        Ok(())
    }

    fn same_dims(&self, other: &Self) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "dims {:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(())
    }
}

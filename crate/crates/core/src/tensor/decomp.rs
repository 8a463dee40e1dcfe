//! Dense decompositions: Hermitian eigensystems, SVD, and the functional
//! calculus built on them. The heavy lifting is nalgebra's; this module pins
//! ordering and tolerance conventions so results are deterministic.

use nalgebra::{SymmetricEigen, SVD};
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tol;

/// Eigenvalues (descending) and matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }
}

/// Thin SVD `M = U diag(s) V*` with singular values in descending order.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    /// Number of singular values above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.singular_values.iter().filter(|&&s| s > threshold).count()
    }
}

fn hermitian_scale(m: &ComplexMatrix) -> f64 {
    m.max_abs().max(1.0)
}

/// Reject non-square or non-Hermitian input at the construction tolerance.
pub fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    let defect = m.hermiticity_defect();
    if defect > tol::CONSTRUCTION * hermitian_scale(m) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian matrix. The input is symmetrized before
/// the solver sees it.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    let n = m.rows();
    let sym = (&(m + &m.dagger())).scale_real(0.5);
    let eig = SymmetricEigen::try_new(sym.to_nalgebra(), f64::EPSILON, 0)
        .ok_or_else(|| Error::Decomposition("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep solver order
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    let out = HermitianEigen { values, vectors };
    let err = spectral_sum(&out, out.values.iter().copied()).max_abs_diff(&sym);
    if err > 1e-10 * sym.max_abs().max(1.0) {
        return Err(Error::Decomposition(format!("eigen reconstruction error {err:e}")));
    }
    Ok(out)
}

/// Singular value decomposition, descending, ties broken by original column.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    let k = m.rows().min(m.cols());
    if k == 0 {
        return Ok(Svd {
            u: ComplexMatrix::zeros(m.rows(), 0),
            singular_values: vec![],
            v: ComplexMatrix::zeros(m.cols(), 0),
        });
    }
    // nalgebra's own default; eps = f64::EPSILON can stall on rank-deficient
    // input and return a wrong factorization
    let dec = SVD::try_new(m.to_nalgebra(), true, true, 5.0 * f64::EPSILON, 0)
        .ok_or_else(|| Error::Decomposition("SVD did not converge".into()))?;
    let u = dec.u.as_ref().expect("u requested");
    let v_t = dec.v_t.as_ref().expect("v_t requested");
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| dec.singular_values[b].total_cmp(&dec.singular_values[a]));
    let out = Svd {
        u: ComplexMatrix::from_fn(m.rows(), k, |i, j| u[(i, order[j])]),
        singular_values: order.iter().map(|&j| dec.singular_values[j]).collect(),
        v: ComplexMatrix::from_fn(m.cols(), k, |i, j| v_t[(order[j], i)].conj()),
    };
    let rebuilt = ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        (0..k)
            .map(|c| out.u[(i, c)] * out.singular_values[c] * out.v[(j, c)].conj())
            .sum()
    });
    let err = rebuilt.max_abs_diff(m);
    if err > 1e-10 * m.max_abs().max(1.0) {
        return Err(Error::Decomposition(format!("SVD reconstruction error {err:e}")));
    }
    Ok(out)
}

pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(m)?.singular_values)
}

/// `V f(D) V*` for a Hermitian matrix with eigen-decomposition `V D V*`.
pub fn hermitian_fn(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m)?;
    Ok(spectral_sum(&eig, eig.values.iter().map(|&x| f(x))))
}

fn spectral_sum(eig: &HermitianEigen, weights: impl Iterator<Item = f64>) -> ComplexMatrix {
    let n = eig.vectors.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, w) in weights.enumerate() {
        if w == 0.0 {
            continue;
        }
        let v = eig.vector(k);
        for i in 0..n {
            let vi = v[i] * w;
            for j in 0..n {
                out[(i, j)] += vi * v[j].conj();
            }
        }
    }
    out
}

/// Positive square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues in `(-1e-10, 0)` are clamped to zero; anything more negative
/// is rejected.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m)?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    if min < -tol::EIGEN_CLAMP * hermitian_scale(m) {
        return Err(Error::NotPositive(min));
    }
    Ok(spectral_sum(&eig, eig.values.iter().map(|&x| x.max(0.0).sqrt())))
}

/// Inverse of a Hermitian positive definite matrix via its spectrum.
pub fn hermitian_inverse(m: &ComplexMatrix, threshold: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m)?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    if min <= threshold {
        return Err(Error::NotPositive(min));
    }
    Ok(spectral_sum(&eig, eig.values.iter().map(|&x| 1.0 / x)))
}

/// Orthogonal projector onto the span of eigenvectors with eigenvalue above
/// `threshold`.
pub fn support_projector(m: &ComplexMatrix, threshold: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m)?;
    Ok(spectral_sum(
        &eig,
        eig.values.iter().map(|&x| if x > threshold { 1.0 } else { 0.0 }),
    ))
}

/// Inverse of a square matrix; fails when the smallest singular value is at
/// or below `threshold`.
pub fn inverse(m: &ComplexMatrix, threshold: f64) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    let s = svd(m)?;
    let smin = s.singular_values.last().copied().unwrap_or(0.0);
    if smin <= threshold {
        return Err(Error::NotCompletelyEntangled(smin));
    }
    // M^-1 = V diag(1/s) U*
    let n = m.rows();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| s.v[(i, k)] * s.u[(j, k)].conj() / s.singular_values[k])
            .sum()
    }))
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(d)
    }

    #[test]
    fn psd_sqrt_diagonal_and_scalar() {
        let r = psd_sqrt(&diag(&[4.0, 9.0])).unwrap();
        assert!(r.max_abs_diff(&diag(&[2.0, 3.0])) < 1e-14);
        let r = psd_sqrt(&diag(&[0.5, 0.5])).unwrap();
        let s = 0.5f64.sqrt();
        assert!(r.max_abs_diff(&diag(&[s, s])) < 1e-14);
    }

    #[test]
    fn psd_sqrt_clamps_tiny_negatives_and_rejects_real_ones() {
        let r = psd_sqrt(&diag(&[1.0, -1e-12])).unwrap();
        assert_eq!(r[(1, 1)], Complex64::new(0.0, 0.0));
        assert!(matches!(psd_sqrt(&diag(&[1.0, -1e-6])), Err(Error::NotPositive(_))));
    }

    #[test]
    fn psd_sqrt_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(psd_sqrt(&m), Err(Error::NotHermitian(_))));
        assert!(matches!(psd_sqrt(&ComplexMatrix::zeros(2, 3)), Err(Error::NotSquare(2, 3))));
    }

    #[test]
    fn svd_orders_descending() {
        let m = diag(&[0.2, 3.0, 1.0]);
        let s = svd(&m).unwrap();
        assert_eq!(s.singular_values.len(), 3);
        assert!((s.singular_values[0] - 3.0).abs() < 1e-14);
        assert!((s.singular_values[2] - 0.2).abs() < 1e-14);
        let rebuilt = ComplexMatrix::from_fn(3, 3, |i, j| {
            (0..3)
                .map(|k| s.u[(i, k)] * s.singular_values[k] * s.v[(j, k)].conj())
                .sum()
        });
        assert!(rebuilt.max_abs_diff(&m) < 1e-13);
    }

    #[test]
    fn inverse_refuses_singular() {
        assert!(inverse(&diag(&[1.0, 0.0]), 1e-8).is_err());
        let inv = inverse(&diag(&[2.0, 4.0]), 1e-8).unwrap();
        assert!(inv.max_abs_diff(&diag(&[0.5, 0.25])) < 1e-14);
    }
}

//! s-maps of bipartite vectors and the EPR identities built on them.
//!
//! For `psi = sum a_jk e_j (x) f_k` with coefficient matrix `a`, the map
//! `s^{ba}: H_a -> H_b` sends `phi` to `sum a_jk <phi, e_j> f_k`; its matrix
//! (in the `M conj(v)` representation) is `a^T`. The reverse map `s^{ab}` is
//! the adjoint, with matrix `a`.

use num_complex::Complex64;

use crate::antilinear::AntilinearMap;
use crate::error::{Error, Result};
use crate::tensor::{self, kron, ComplexMatrix, DensityOperator, MultiVector, Side};
use crate::tol;

/// Direction of an s-map: `BA` maps `H_a -> H_b`, `AB` maps `H_b -> H_a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    BA,
    AB,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::BA => Direction::AB,
            Direction::AB => Direction::BA,
        }
    }
}

/// The s-map of a bipartite vector.
pub fn smap(psi: &MultiVector, direction: Direction) -> Result<AntilinearMap> {
    let a = psi.coefficient_matrix()?;
    Ok(match direction {
        Direction::BA => AntilinearMap::new(a.transpose()),
        Direction::AB => AntilinearMap::new(a),
    })
}

/// Inverse of [`smap`]: the bipartite vector whose s-map is `s`.
pub fn vector_from_smap(s: &AntilinearMap, direction: Direction) -> Result<MultiVector> {
    let a = match direction {
        Direction::BA => s.matrix().transpose(),
        Direction::AB => s.matrix().clone(),
    };
    MultiVector::from_coefficients(&a)
}

/// Outcome of an affirmative test of `|phi_a><phi_a|` on Alice's side.
#[derive(Clone, Debug, PartialEq)]
pub struct Collapse {
    pub probability: f64,
    /// Unnormalized conditional vector `s^{ba} phi_a`; its squared norm is
    /// the probability.
    pub bob: Vec<Complex64>,
}

pub fn epr_collapse(psi: &MultiVector, phi_a: &[Complex64]) -> Result<Collapse> {
    psi.require_factors(2)?;
    psi.require_normalized()?;
    let n = tensor::norm(phi_a);
    if (n - 1.0).abs() >= tol::CONSTRUCTION {
        return Err(Error::NotNormalized(n));
    }
    let bob = smap(psi, Direction::BA)?.apply(phi_a)?;
    Ok(Collapse {
        probability: tensor::norm(&bob).powi(2),
        bob,
    })
}

/// Reduced density operator via `rho_a = s^{ab} s^{ba}`, `rho_b = s^{ba} s^{ab}`.
pub fn reduced_density(psi: &MultiVector, side: Side) -> Result<DensityOperator> {
    let ba = smap(psi, Direction::BA)?;
    let ab = ba.adjoint();
    let m = match side {
        Side::A => ab.compose_anti(&ba)?,
        Side::B => ba.compose_anti(&ab)?,
    };
    DensityOperator::new(m)
}

/// `(A (x) B) psi`.
pub fn local_transform(psi: &MultiVector, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<MultiVector> {
    psi.require_factors(2)?;
    let (da, db) = (psi.dims()[0], psi.dims()[1]);
    if a.cols() != da || b.cols() != db {
        return Err(Error::DimensionMismatch(format!(
            "local operators {}x{} and {}x{} on a {da}x{db} vector",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let amps = kron(a, b).apply(psi.amplitudes())?;
    MultiVector::new(vec![a.rows(), b.rows()], amps)
}

/// Transformed vector together with the max-entry residual of
/// `s^{ab}_phi = A s^{ab}_psi B*`.
pub fn local_transform_checked(
    psi: &MultiVector,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
) -> Result<(MultiVector, f64)> {
    let phi = local_transform(psi, a, b)?;
    let lhs = smap(&phi, Direction::AB)?;
    let rhs = smap(psi, Direction::AB)?
        .compose_linear(&b.dagger())?
        .then_linear(a)?;
    let residual = lhs.matrix().max_abs_diff(rhs.matrix());
    Ok((phi, residual))
}

/// Max deviation of the Gram matrix of `basis` from the identity.
pub fn orthonormality_defect(basis: &[Vec<Complex64>]) -> f64 {
    let mut worst = 0.0f64;
    for (j, u) in basis.iter().enumerate() {
        for (k, v) in basis.iter().enumerate() {
            let expect = if j == k { 1.0 } else { 0.0 };
            let g = if u.len() == v.len() {
                tensor::inner(u, v)
            } else {
                Complex64::new(f64::INFINITY, 0.0)
            };
            worst = worst.max((g - expect).norm());
        }
    }
    worst
}

fn check_basis(basis: &[Vec<Complex64>], d: usize) -> Result<()> {
    if basis.iter().any(|v| v.len() != d) {
        return Err(Error::DimensionMismatch(format!("basis vectors must have length {d}")));
    }
    let defect = orthonormality_defect(basis);
    if defect > tol::CONSTRUCTION {
        return Err(Error::NotOrthonormal(defect));
    }
    Ok(())
}

/// `G[j,k] = <s^{ba} phi_j, s^{ba} phi_k>` for an orthonormal list on `H_a`.
pub fn gram_matrix(psi: &MultiVector, basis_a: &[Vec<Complex64>]) -> Result<ComplexMatrix> {
    psi.require_factors(2)?;
    check_basis(basis_a, psi.dims()[0])?;
    let s = smap(psi, Direction::BA)?;
    let images = basis_a
        .iter()
        .map(|v| s.apply(v))
        .collect::<Result<Vec<_>>>()?;
    let n = images.len();
    Ok(ComplexMatrix::from_fn(n, n, |j, k| tensor::inner(&images[j], &images[k])))
}

/// Singular values of `s^{ab}`, descending.
pub fn schmidt_coefficients(psi: &MultiVector) -> Result<Vec<f64>> {
    tensor::singular_values(&psi.coefficient_matrix()?)
}

/// `<phi, psi>` computed as the linear-map trace `Tr(s^{ab}_psi s^{ba}_phi)`.
pub fn overlap_via_smaps(phi: &MultiVector, psi: &MultiVector) -> Result<Complex64> {
    if phi.dims() != psi.dims() {
        return Err(Error::DimensionMismatch(format!(
            "dims {:?} vs {:?}",
            phi.dims(),
            psi.dims()
        )));
    }
    let t = smap(psi, Direction::AB)?.compose_anti(&smap(phi, Direction::BA)?)?;
    Ok(t.trace())
}

/// Outcome probabilities of a basis measurement on Alice's side compared
/// with the spectrum of her reduced state.
#[derive(Clone, Debug, PartialEq)]
pub struct Majorization {
    /// `<phi_j, rho_a phi_j>` in basis order.
    pub probs: Vec<f64>,
    /// Spectrum of `rho_a`, descending.
    pub eigs: Vec<f64>,
    /// Partial sums of sorted `probs` never exceed those of `eigs`, and the
    /// totals agree.
    pub majorized: bool,
}

pub fn outcome_majorization(psi: &MultiVector, basis_a: &[Vec<Complex64>]) -> Result<Majorization> {
    psi.require_factors(2)?;
    let da = psi.dims()[0];
    check_basis(basis_a, da)?;
    if basis_a.len() != da {
        return Err(Error::InvalidArgument(format!(
            "basis has {} vectors, need {da}",
            basis_a.len()
        )));
    }
    let rho = reduced_density(psi, Side::A)?;
    let probs: Vec<f64> = basis_a
        .iter()
        .map(|v| Ok(tensor::inner(v, &rho.matrix().apply(v)?).re))
        .collect::<Result<_>>()?;
    let eigs = rho.eigen()?.values;
    let mut sorted = probs.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut ok = true;
    let (mut sp, mut se) = (0.0, 0.0);
    for (p, e) in sorted.iter().zip(&eigs) {
        sp += p;
        se += e;
        ok &= sp <= se + tol::CONSTRUCTION;
    }
    ok &= (sp - se).abs() <= tol::CONSTRUCTION;
    Ok(Majorization {
        probs,
        eigs,
        majorized: ok,
    })
}

/// Max-entry distance of `rho_a` from the tracial state `1/d_a`.
pub fn tightness_deficit(psi: &MultiVector) -> Result<f64> {
    let rho = reduced_density(psi, Side::A)?;
    let d = rho.dim();
    let tracial = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
    Ok(rho.matrix().max_abs_diff(&tracial))
}

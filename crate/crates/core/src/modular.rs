//! Polar decomposition of s-maps and the finite-dimensional modular objects.
//!
//! `s^{ba} = (rho_b)^{1/2} j^{ba} = j^{ba} (rho_a)^{1/2}` with `j^{ba}` an
//! anti-linear partial isometry. On `H_a (x) H_b` the crossed tensor product
//! of the two j-maps is the modular conjugation `J`, the crossed product of
//! `(s^{ba})^{-1}` and `s^{ba}` is the Tomita operator `S`, and
//! `S = J Delta^{1/2}` with `Delta = rho_a (x) rho_b^{-1}`.

use crate::antilinear::{crossed_tensor, invert_anti, polar_anti, AntilinearMap};
use crate::epr::{reduced_density, schmidt_coefficients, smap, vector_from_smap, Direction};
use crate::error::{Error, Result};
use crate::tensor::{self, kron, ComplexMatrix, DensityOperator, MultiVector, Side};
use crate::tol;

#[derive(Clone, Debug, PartialEq)]
pub struct JMaps {
    /// `H_a -> H_b`.
    pub j_ba: AntilinearMap,
    /// `H_b -> H_a`, the adjoint of `j_ba`.
    pub j_ab: AntilinearMap,
}

pub fn jmaps(psi: &MultiVector) -> Result<JMaps> {
    let j_ba = polar_anti(&smap(psi, Direction::BA)?)?.isometry;
    Ok(JMaps {
        j_ab: j_ba.adjoint(),
        j_ba,
    })
}

/// Max-entry residual over the polar identities of a bipartite vector:
/// `s^{ba} = rho_b^{1/2} j^{ba}`, `s^{ba} = j^{ba} rho_a^{1/2}`,
/// `(j^{ba})* = j^{ab}` and `rho_b = j^{ba} rho_a j^{ab}`.
pub fn polar_residual(psi: &MultiVector) -> Result<f64> {
    let s = smap(psi, Direction::BA)?;
    let j = jmaps(psi)?;
    let rho_a = reduced_density(psi, Side::A)?;
    let rho_b = reduced_density(psi, Side::B)?;
    let left = j.j_ba.then_linear(&tensor::psd_sqrt(rho_b.matrix())?)?;
    let right = j.j_ba.compose_linear(&tensor::psd_sqrt(rho_a.matrix())?)?;
    let sandwich = j.j_ba.compose_anti(&j.j_ab.then_linear(rho_a.matrix())?)?;
    Ok([
        left.matrix().max_abs_diff(s.matrix()),
        right.matrix().max_abs_diff(s.matrix()),
        j.j_ba.adjoint().matrix().max_abs_diff(j.j_ab.matrix()),
        sandwich.max_abs_diff(rho_b.matrix()),
    ]
    .into_iter()
    .fold(0.0, f64::max))
}

/// The vector `psi` with `s^{ba}_psi = j_ba rho_a^{1/2}`.
///
/// `j_ba` must be a partial isometry whose initial projection `j* j` is the
/// support projector of `rho_a`.
pub fn purify(rho_a: &DensityOperator, j_ba: &AntilinearMap) -> Result<MultiVector> {
    if !rho_a.is_normalized() {
        return Err(Error::InvalidTrace(rho_a.trace()));
    }
    if j_ba.source_dim() != rho_a.dim() {
        return Err(Error::DimensionMismatch(format!(
            "j-map on C^{} for a state on C^{}",
            j_ba.source_dim(),
            rho_a.dim()
        )));
    }
    let initial = j_ba.adjoint().compose_anti(j_ba)?;
    let support = tensor::support_projector(rho_a.matrix(), tol::EIGEN_CLAMP)?;
    let mismatch = initial.max_abs_diff(&support);
    if mismatch > tol::SUPPORT {
        return Err(Error::SupportMismatch(mismatch));
    }
    let s = j_ba.compose_linear(&tensor::psd_sqrt(rho_a.matrix())?)?;
    vector_from_smap(&s, Direction::BA)
}

/// Smallest Schmidt coefficient, or an error if `psi` is not completely
/// entangled (square with an invertible s-map).
pub fn require_complete_entanglement(psi: &MultiVector) -> Result<f64> {
    psi.require_factors(2)?;
    if psi.dims()[0] != psi.dims()[1] {
        return Err(Error::DimensionMismatch(format!(
            "s-map C^{} -> C^{} cannot be invertible",
            psi.dims()[0],
            psi.dims()[1]
        )));
    }
    let smin = schmidt_coefficients(psi)?.last().copied().unwrap_or(0.0);
    if smin <= tol::COMPLETE_ENTANGLEMENT {
        return Err(Error::NotCompletelyEntangled(smin));
    }
    Ok(smin)
}

/// `J = j^{ab} (x)~ j^{ba}` (crossed tensor product).
pub fn modular_conjugation(psi: &MultiVector) -> Result<AntilinearMap> {
    let j = jmaps(psi)?;
    crossed_tensor(&j.j_ab, &j.j_ba)
}

/// `S = (s^{ba})^{-1} (x)~ s^{ba}`.
pub fn s_operator(psi: &MultiVector) -> Result<AntilinearMap> {
    require_complete_entanglement(psi)?;
    let s = smap(psi, Direction::BA)?;
    crossed_tensor(&invert_anti(&s)?, &s)
}

/// `Delta = rho_a (x) rho_b^{-1}`.
pub fn modular_operator(psi: &MultiVector) -> Result<ComplexMatrix> {
    require_complete_entanglement(psi)?;
    let rho_a = reduced_density(psi, Side::A)?;
    let rho_b = reduced_density(psi, Side::B)?;
    let inv_b = tensor::hermitian_inverse(rho_b.matrix(), 0.0)?;
    Ok(kron(rho_a.matrix(), &inv_b))
}

/// `||S - J Delta^{1/2}||`, max entry.
pub fn polar_s_residual(psi: &MultiVector) -> Result<f64> {
    let s = s_operator(psi)?;
    let j = modular_conjugation(psi)?;
    let root = tensor::psd_sqrt(&modular_operator(psi)?)?;
    Ok(j.compose_linear(&root)?.matrix().max_abs_diff(s.matrix()))
}

/// Residual of `(A (x) 1) psi = S (A* (x) 1) psi`.
pub fn s_identity_residual(psi: &MultiVector, a: &ComplexMatrix) -> Result<f64> {
    let s = s_operator(psi)?;
    let one = ComplexMatrix::identity(psi.dims()[1]);
    let lhs = kron(a, &one).apply(psi.amplitudes())?;
    let rhs = s.apply(&kron(&a.dagger(), &one).apply(psi.amplitudes())?)?;
    Ok(tensor::max_abs_diff(&lhs, &rhs))
}

/// `B = (j^{ba} A (j^{ba})^{-1})*`, the unique operator on `H_b` with
/// `B* j^{ba} = j^{ba} A`.
pub fn expectation_transfer(psi: &MultiVector, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_complete_entanglement(psi)?;
    let d = psi.dims()[0];
    if a.shape() != (d, d) {
        return Err(Error::ShapeMismatch {
            rows: d,
            cols: d,
            found: a.rows() * a.cols(),
        });
    }
    let j = jmaps(psi)?;
    // j^{ab} inverts j^{ba} once the latter is anti-unitary
    Ok(j.j_ba.compose_anti(&j.j_ab.then_linear(a)?)?.dagger())
}

/// Residuals of a transferred pair: `|Tr(rho_a A) - Tr(rho_b B)|`,
/// `||B* j - j A||`, and `||J (A (x) B) - (A (x) B)* J||`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferResiduals {
    pub expectation: f64,
    pub intertwining: f64,
    pub commutation: f64,
}

pub fn transfer_residuals(
    psi: &MultiVector,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
) -> Result<TransferResiduals> {
    let rho_a = reduced_density(psi, Side::A)?;
    let rho_b = reduced_density(psi, Side::B)?;
    let ea = rho_a.matrix().matmul(a)?.trace();
    let eb = rho_b.matrix().matmul(b)?.trace();
    let j = jmaps(psi)?;
    let lhs = j.j_ba.then_linear(&b.dagger())?;
    let rhs = j.j_ba.compose_linear(a)?;
    let big_j = modular_conjugation(psi)?;
    let ab = kron(a, b);
    let jl = big_j.compose_linear(&ab)?;
    let jr = big_j.then_linear(&ab.dagger())?;
    Ok(TransferResiduals {
        expectation: (ea - eb).norm(),
        intertwining: lhs.matrix().max_abs_diff(rhs.matrix()),
        commutation: jl.matrix().max_abs_diff(jr.matrix()),
    })
}

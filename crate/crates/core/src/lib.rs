//! Anti-linear s-map calculus for EPR and teleportation at finite dimension.
//!
//! A bipartite vector `psi` in `H_a (x) H_b` determines two anti-linear maps,
//! `s^{ba}: H_a -> H_b` and `s^{ab}: H_b -> H_a`, characterised by
//! `<phi_a (x) phi_b, psi> = <phi_b, s^{ba} phi_a> = <phi_a, s^{ab} phi_b>`.
//! Teleportation maps are compositions of s-maps, their polar factors give
//! the modular conjugation, and mixed states lift to anti-linear Phi-maps.
//!
//! Conventions used throughout:
//! - matrices are row-major, tensor indices lexicographic;
//! - scalar products are linear in the second argument;
//! - an anti-linear map is stored as the matrix `M` with `S v = M conj(v)`.

pub mod antilinear;
pub mod epr;
pub mod error;
pub mod measure;
pub mod modular;
pub mod phi;
pub mod random;
pub mod teleport;
pub mod tensor;

pub use antilinear::{AntilinearMap, Map};
pub use error::{Error, Result};
pub use tensor::{ComplexMatrix, DensityOperator, MultiVector, Side};

pub use num_complex::Complex64;

/// Numerical tolerance hierarchy.
pub mod tol {
    /// Construction-time checks (Hermiticity, normalization, projectors).
    pub const CONSTRUCTION: f64 = 1e-10;
    /// Max-entry difference allowed between an identity and its oracle.
    pub const ORACLE: f64 = 1e-10;
    /// Eigenvalues above `-EIGEN_CLAMP` are clamped to zero.
    pub const EIGEN_CLAMP: f64 = 1e-10;
    /// Smallest singular value below which an s-map counts as singular.
    pub const COMPLETE_ENTANGLEMENT: f64 = 1e-8;
    /// Singular values at or below this are treated as zero in polar factors.
    pub const RANK: f64 = 1e-12;
    /// Residual above which a projected vector is declared non-factorizable.
    pub const FACTORIZATION: f64 = 1e-8;
    /// Max-entry mismatch allowed between a map's support and a state's.
    pub const SUPPORT: f64 = 1e-8;
}

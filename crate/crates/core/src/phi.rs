//! Φ-maps of operators on `H_a (x) H_b`.
//!
//! For `rho = sum_j c_j |u_j><v_j|` the anti-linear map
//! `Phi^{ba}(X) = sum_j c_j s^{ba}_{u_j} X s^{ab}_{v_j}` sends operators on
//! `H_a` to operators on `H_b` and is fixed by the duality
//! `Tr(Y Phi^{ba}(X*)) = Tr(rho (X (x) Y))`. In coefficient matrices,
//! `Phi^{ba}(X) = sum c_j a_u^T conj(X) conj(a_v)` and
//! `Phi^{ab}(Y) = sum c_j a_u conj(Y) a_v*`.

use crate::epr::{schmidt_coefficients, smap, Direction};
use crate::error::{Error, Result};
use crate::tensor::{self, kron, ComplexMatrix, DensityOperator, MultiVector, Side};
use crate::tol;

#[derive(Clone, Debug)]
struct Term {
    weight: f64,
    left: ComplexMatrix,
    right: ComplexMatrix,
}

#[derive(Clone, Debug)]
pub struct PhiMap {
    dims: [usize; 2],
    terms: Vec<Term>,
}

fn coefficients(v: &[num_complex::Complex64], dims: [usize; 2]) -> ComplexMatrix {
    ComplexMatrix::from_raw(dims[0], dims[1], v.to_vec())
}

fn check_dims(n: usize, dims: [usize; 2]) -> Result<()> {
    if dims[0] == 0 || dims[1] == 0 || dims[0] * dims[1] != n {
        return Err(Error::DimensionMismatch(format!(
            "operator on C^{n} split as {}x{}",
            dims[0], dims[1]
        )));
    }
    Ok(())
}

impl PhiMap {
    /// Φ-map of a density operator through its eigen-decomposition.
    pub fn new(rho: &DensityOperator, dims: [usize; 2]) -> Result<Self> {
        check_dims(rho.dim(), dims)?;
        let eig = rho.eigen()?;
        let terms = eig
            .values
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0.0)
            .map(|(k, &c)| {
                let a = coefficients(&eig.vector(k), dims);
                Term {
                    weight: c,
                    left: a.clone(),
                    right: a,
                }
            })
            .collect();
        Ok(PhiMap { dims, terms })
    }

    /// Φ-map of an arbitrary operator, through its singular value
    /// decomposition `sum s_j |u_j><v_j|`.
    pub fn from_operator(m: &ComplexMatrix, dims: [usize; 2]) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare(m.rows(), m.cols()));
        }
        check_dims(m.rows(), dims)?;
        let dec = tensor::svd(m)?;
        let terms = dec
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > 0.0)
            .map(|(k, &s)| Term {
                weight: s,
                left: coefficients(&dec.u.column(k), dims),
                right: coefficients(&dec.v.column(k), dims),
            })
            .collect();
        Ok(PhiMap { dims, terms })
    }

    pub fn pure(psi: &MultiVector) -> Result<Self> {
        psi.require_factors(2)?;
        PhiMap::new(
            &DensityOperator::pure(psi)?,
            [psi.dims()[0], psi.dims()[1]],
        )
    }

    pub fn dims(&self) -> [usize; 2] {
        self.dims
    }

    /// `sum_j c_j |u_j><v_j|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dims[0] * self.dims[1];
        self.terms.iter().fold(ComplexMatrix::zeros(n, n), |acc, t| {
            let u = t.left.entries();
            let v = t.right.entries();
            &acc + &ComplexMatrix::outer(u, v).scale_real(t.weight)
        })
    }

    /// `Phi^{ba}(X)` for `X` on `H_a`, or `Phi^{ab}(X)` for `X` on `H_b`.
    pub fn apply(&self, x: &ComplexMatrix, direction: Direction) -> Result<ComplexMatrix> {
        let (src, dst) = match direction {
            Direction::BA => (self.dims[0], self.dims[1]),
            Direction::AB => (self.dims[1], self.dims[0]),
        };
        if x.shape() != (src, src) {
            return Err(Error::ShapeMismatch {
                rows: src,
                cols: src,
                found: x.rows() * x.cols(),
            });
        }
        let xc = x.conj();
        let mut out = ComplexMatrix::zeros(dst, dst);
        for t in &self.terms {
            let term = match direction {
                Direction::BA => t.left.transpose().matmul_unchecked(&xc).matmul_unchecked(&t.right.conj()),
                Direction::AB => t.left.matmul_unchecked(&xc).matmul_unchecked(&t.right.dagger()),
            };
            out = &out + &term.scale_real(t.weight);
        }
        Ok(out)
    }
}

pub fn phi_apply(phi: &PhiMap, x: &ComplexMatrix, direction: Direction) -> Result<ComplexMatrix> {
    phi.apply(x, direction)
}

/// Index-level evaluation straight from the duality:
/// `Phi^{ba}(X)_{kl} = sum rho_{(ik),(i'l)} conj(X_{ii'})` and
/// `Phi^{ab}(Y)_{ii'} = sum rho_{(ik),(i'l)} conj(Y_{kl})`.
pub fn phi_oracle(
    rho: &ComplexMatrix,
    dims: [usize; 2],
    x: &ComplexMatrix,
    direction: Direction,
) -> Result<ComplexMatrix> {
    check_dims(rho.rows(), dims)?;
    let [da, db] = dims;
    let r = |i: usize, k: usize, ip: usize, l: usize| rho[(i * db + k, ip * db + l)];
    Ok(match direction {
        Direction::BA => ComplexMatrix::from_fn(db, db, |k, l| {
            let mut s = num_complex::Complex64::new(0.0, 0.0);
            for i in 0..da {
                for ip in 0..da {
                    s += r(i, k, ip, l) * x[(i, ip)].conj();
                }
            }
            s
        }),
        Direction::AB => ComplexMatrix::from_fn(da, da, |i, ip| {
            let mut s = num_complex::Complex64::new(0.0, 0.0);
            for k in 0..db {
                for l in 0..db {
                    s += r(i, k, ip, l) * x[(k, l)].conj();
                }
            }
            s
        }),
    })
}

/// Max of `|Tr(X Phi^{ab}(Y*)) - Tr(rho (X (x) Y))|` and
/// `|Tr(Y Phi^{ba}(X*)) - Tr(rho (X (x) Y))|`.
pub fn duality_residual(
    rho: &DensityOperator,
    dims: [usize; 2],
    x: &ComplexMatrix,
    y: &ComplexMatrix,
) -> Result<f64> {
    let phi = PhiMap::new(rho, dims)?;
    let direct = rho.matrix().matmul(&kron(x, y))?.trace();
    let via_ab = x.matmul(&phi.apply(&y.dagger(), Direction::AB)?)?.trace();
    let via_ba = y.matmul(&phi.apply(&x.dagger(), Direction::BA)?)?.trace();
    Ok((via_ab - direct).norm().max((via_ba - direct).norm()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceNormBound {
    /// `||Phi^{ba}(X*)||_1`.
    pub lhs: f64,
    /// `||X||_inf ||rho||_1`.
    pub rhs: f64,
    pub holds: bool,
}

pub fn trace_norm_bound_check(
    rho: &DensityOperator,
    dims: [usize; 2],
    x: &ComplexMatrix,
) -> Result<TraceNormBound> {
    let phi = PhiMap::new(rho, dims)?;
    let lhs = tensor::trace_norm(&phi.apply(&x.dagger(), Direction::BA)?)?;
    let rhs = tensor::operator_norm(x)? * tensor::trace_norm(rho.matrix())?;
    Ok(TraceNormBound {
        lhs,
        rhs,
        holds: lhs <= rhs + tol::CONSTRUCTION,
    })
}

fn require_projector(p: &ComplexMatrix) -> Result<()> {
    if !p.is_square() {
        return Err(Error::NotSquare(p.rows(), p.cols()));
    }
    let defect = p
        .hermiticity_defect()
        .max(p.matmul_unchecked(p).max_abs_diff(p));
    if defect > tol::CONSTRUCTION {
        return Err(Error::NotProjector(defect));
    }
    Ok(())
}

/// Bob's unnormalized state after an affirmative local test on Alice's side.
#[derive(Clone, Debug, PartialEq)]
pub struct RemoteUpdate {
    pub probability: f64,
    pub omega_b: ComplexMatrix,
}

/// `omega_b = Phi^{ba}_rho(P_a)`, `prob = Tr omega_b`.
pub fn lueders_remote(rho: &DensityOperator, dims: [usize; 2], p_a: &ComplexMatrix) -> Result<RemoteUpdate> {
    require_projector(p_a)?;
    let omega_b = PhiMap::new(rho, dims)?.apply(p_a, Direction::BA)?;
    Ok(RemoteUpdate {
        probability: omega_b.trace().re,
        omega_b,
    })
}

/// `Tr_a[(P (x) 1) rho (P (x) 1)]` computed in the full space.
pub fn lueders_oracle(rho: &DensityOperator, dims: [usize; 2], p_a: &ComplexMatrix) -> Result<RemoteUpdate> {
    require_projector(p_a)?;
    check_dims(rho.dim(), dims)?;
    if p_a.rows() != dims[0] {
        return Err(Error::DimensionMismatch(format!(
            "projector on C^{} for factor C^{}",
            p_a.rows(),
            dims[0]
        )));
    }
    let big = kron(p_a, &ComplexMatrix::identity(dims[1]));
    let post = big.matmul(rho.matrix())?.matmul(&big)?;
    let omega_b = tensor::partial_trace_matrix(&post, dims, Side::B)?;
    Ok(RemoteUpdate {
        probability: omega_b.trace().re,
        omega_b,
    })
}

fn require_maximally_entangled(psi: &MultiVector) -> Result<usize> {
    psi.require_factors(2)?;
    psi.require_normalized()?;
    let d = psi.dims()[0];
    if psi.dims()[1] != d {
        return Err(Error::NotMaximallyEntangled(f64::INFINITY));
    }
    let target = 1.0 / (d as f64).sqrt();
    let dev = schmidt_coefficients(psi)?
        .iter()
        .map(|s| (s - target).abs())
        .fold(0.0, f64::max);
    if dev > tol::CONSTRUCTION {
        return Err(Error::NotMaximallyEntangled(dev));
    }
    Ok(d)
}

/// Image of `X` under a super-operator stored as a `d^2 x d^2` matrix acting
/// on the row-major vectorization.
pub fn apply_superoperator(t: &ComplexMatrix, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = x.rows();
    if !x.is_square() || t.shape() != (d * d, d * d) {
        return Err(Error::DimensionMismatch(format!(
            "super-operator {}x{} on a {}x{} matrix",
            t.rows(),
            t.cols(),
            x.rows(),
            x.cols()
        )));
    }
    ComplexMatrix::new(d, d, t.apply(x.entries())?)
}

/// Matrix of a linear super-operator: column `k d + l` is `vec f(E_kl)`.
pub fn superoperator_matrix(
    d: usize,
    f: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
) -> Result<ComplexMatrix> {
    let mut cols = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in 0..d {
            let mut e = ComplexMatrix::zeros(d, d);
            e[(k, l)] = num_complex::Complex64::new(1.0, 0.0);
            cols.push(f(&e)?.entries().to_vec());
        }
    }
    ComplexMatrix::from_columns(d * d, &cols)
}

/// `(T (x) id)(|psi><psi|)`.
pub fn jamiolkowski_rho(t: &ComplexMatrix, psi_ref: &MultiVector) -> Result<ComplexMatrix> {
    let d = require_maximally_entangled(psi_ref)?;
    let proj = psi_ref.projector();
    let n = d * d;
    let mut out = ComplexMatrix::zeros(n, n);
    // sum over i, i' of T(E_ii') (x) B_ii', with B_ii' the (i, i') block of |psi><psi|
    for i in 0..d {
        for ip in 0..d {
            let mut e = ComplexMatrix::zeros(d, d);
            e[(i, ip)] = num_complex::Complex64::new(1.0, 0.0);
            let te = apply_superoperator(t, &e)?;
            let block = ComplexMatrix::from_fn(d, d, |k, l| proj[(i * d + k, ip * d + l)]);
            out = &out + &kron(&te, &block);
        }
    }
    Ok(out)
}

/// Recovers `T` from `rho = (T (x) id)(|psi><psi|)` as
/// `T(X) = d^2 Phi^{ab}_rho(s^{ba}_psi X s^{ab}_psi)`.
///
/// The factor `d^2` compensates the `1/d` of each of the two normalized
/// s-maps and of the reference projector's blocks.
pub fn jamiolkowski_t(rho: &ComplexMatrix, psi_ref: &MultiVector) -> Result<ComplexMatrix> {
    let d = require_maximally_entangled(psi_ref)?;
    let phi = PhiMap::from_operator(rho, [d, d])?;
    let s_ba = smap(psi_ref, Direction::BA)?;
    let s_ab = s_ba.adjoint();
    let scale = (d * d) as f64;
    superoperator_matrix(d, |x| {
        let inner = s_ba.compose_anti(&s_ab.then_linear(x)?)?;
        Ok(phi.apply(&inner, Direction::AB)?.scale_real(scale))
    })
}

/// The super-operator `X -> d^2 s^{ab}_psi Phi^{ba}_rho(X) s^{ba}_psi`.
///
/// This sandwich recovers the Hilbert-Schmidt adjoint of `T`, not `T`
/// itself; see [`jamiolkowski_t`] for the inverse of [`jamiolkowski_rho`].
pub fn jamiolkowski_t_adjoint(rho: &ComplexMatrix, psi_ref: &MultiVector) -> Result<ComplexMatrix> {
    let d = require_maximally_entangled(psi_ref)?;
    let phi = PhiMap::from_operator(rho, [d, d])?;
    let s_ba = smap(psi_ref, Direction::BA)?;
    let s_ab = s_ba.adjoint();
    let scale = (d * d) as f64;
    superoperator_matrix(d, |x| {
        let y = phi.apply(x, Direction::BA)?;
        Ok(s_ab.compose_anti(&s_ba.then_linear(&y)?)?.scale_real(scale))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2 as H;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell() -> MultiVector {
        MultiVector::new(vec![2, 2], vec![c(H), c(0.0), c(0.0), c(H)]).unwrap()
    }

    fn e00() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, 0.0])
    }

    #[test]
    fn pure_bell_projector() {
        let phi = PhiMap::pure(&bell()).unwrap();
        let out = phi.apply(&e00(), Direction::BA).unwrap();
        assert!(out.max_abs_diff(&e00().scale_real(0.5)) < 1e-15);
        let zero = ComplexMatrix::zeros(2, 2);
        assert_eq!(phi.apply(&zero, Direction::BA).unwrap().max_abs(), 0.0);
        assert!(phi.apply(&ComplexMatrix::identity(3), Direction::BA).is_err());
    }

    #[test]
    fn eigen_terms_reconstruct() {
        let rho = random::density(&mut random::rng(4), 6);
        let phi = PhiMap::new(&rho, [2, 3]).unwrap();
        assert!(phi.reconstruct().max_abs_diff(rho.matrix()) < 1e-10);
        let m = random::ginibre(&mut random::rng(5), 6, 6);
        assert!(PhiMap::from_operator(&m, [3, 2]).unwrap().reconstruct().max_abs_diff(&m) < 1e-10);
    }

    #[test]
    fn pure_state_single_term() {
        let mut rng = random::rng(6);
        let psi = random::haar_state(&mut rng, &[3, 2]);
        let x = random::ginibre(&mut rng, 3, 3);
        let s_ba = smap(&psi, Direction::BA).unwrap();
        let direct = s_ba.compose_anti(&s_ba.adjoint().then_linear(&x).unwrap()).unwrap();
        let via = PhiMap::pure(&psi).unwrap().apply(&x, Direction::BA).unwrap();
        assert!(via.max_abs_diff(&direct) < 1e-12);
    }

    #[test]
    fn product_state_is_proportional() {
        let mut rng = random::rng(7);
        let ra = random::density(&mut rng, 2);
        let rb = random::density(&mut rng, 3);
        let rho = DensityOperator::new(kron(ra.matrix(), rb.matrix())).unwrap();
        let v = random::unit_vector(&mut rng, 2);
        let x = ComplexMatrix::outer(&v, &v);
        let out = PhiMap::new(&rho, [2, 3]).unwrap().apply(&x, Direction::BA).unwrap();
        let weight = tensor::inner(&v, &ra.matrix().apply(&v).unwrap());
        assert!(out.max_abs_diff(&rb.matrix().scale(weight)) < 1e-12);
    }

    #[test]
    fn matches_index_oracle() {
        let mut rng = random::rng(9);
        let rho = random::density(&mut rng, 12);
        let phi = PhiMap::new(&rho, [3, 4]).unwrap();
        for dir in [Direction::BA, Direction::AB] {
            let n = if dir == Direction::BA { 3 } else { 4 };
            let x = random::ginibre(&mut rng, n, n);
            let o = phi_oracle(rho.matrix(), [3, 4], &x, dir).unwrap();
            assert!(phi.apply(&x, dir).unwrap().max_abs_diff(&o) < 1e-12);
        }
    }

    #[test]
    fn duality_and_identity() {
        let mut rng = random::rng(10);
        let rho = random::density(&mut rng, 6);
        let x = random::ginibre(&mut rng, 2, 2);
        let y = random::ginibre(&mut rng, 3, 3);
        assert!(duality_residual(&rho, [2, 3], &x, &y).unwrap() < 1e-10);
        let i2 = ComplexMatrix::identity(2);
        let phi = PhiMap::new(&rho, [2, 3]).unwrap();
        let rho_b = tensor::partial_trace_matrix(rho.matrix(), [2, 3], Side::B).unwrap();
        assert!(phi.apply(&i2, Direction::BA).unwrap().max_abs_diff(&rho_b) < 1e-12);
    }

    #[test]
    fn trace_norm_bound_examples() {
        let rho = random::density(&mut random::rng(11), 4);
        let b = trace_norm_bound_check(&rho, [2, 2], &ComplexMatrix::identity(2)).unwrap();
        assert!((b.lhs - 1.0).abs() < 1e-10 && b.holds);
        let b = trace_norm_bound_check(&rho, [2, 2], &ComplexMatrix::zeros(2, 2)).unwrap();
        assert_eq!((b.lhs, b.rhs, b.holds), (0.0, 0.0, true));
    }

    #[test]
    fn lueders_bell_and_identity() {
        let rho = DensityOperator::pure(&bell()).unwrap();
        let u = lueders_remote(&rho, [2, 2], &e00()).unwrap();
        assert!((u.probability - 0.5).abs() < 1e-15);
        assert!(u.omega_b.max_abs_diff(&e00().scale_real(0.5)) < 1e-15);
        let u = lueders_remote(&rho, [2, 2], &ComplexMatrix::identity(2)).unwrap();
        assert!((u.probability - 1.0).abs() < 1e-15);
        let bad = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(lueders_remote(&rho, [2, 2], &bad), Err(Error::NotProjector(_))));
    }

    #[test]
    fn lueders_rank_two_matches_oracle() {
        let mut rng = random::rng(13);
        let rho = random::density(&mut rng, 9);
        let p = random::projector(&mut rng, 3, 2);
        let a = lueders_remote(&rho, [3, 3], &p).unwrap();
        let b = lueders_oracle(&rho, [3, 3], &p).unwrap();
        assert!(a.omega_b.max_abs_diff(&b.omega_b) < 1e-10);
        assert!((a.probability - b.probability).abs() < 1e-10);
    }

    fn conj_by_x() -> ComplexMatrix {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        superoperator_matrix(2, |m| Ok(&(&x * m) * &x)).unwrap()
    }

    #[test]
    fn jamiolkowski_examples() {
        let id = ComplexMatrix::identity(4);
        let rho = jamiolkowski_rho(&id, &bell()).unwrap();
        assert!(rho.max_abs_diff(&bell().projector()) < 1e-15);

        // full depolarization X -> Tr(X) I/2
        let dep = superoperator_matrix(2, |m| Ok(ComplexMatrix::identity(2).scale(m.trace() * 0.5))).unwrap();
        let rho = jamiolkowski_rho(&dep, &bell()).unwrap();
        assert!(rho.max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25)) < 1e-15);

        let rho = jamiolkowski_rho(&conj_by_x(), &bell()).unwrap();
        let psi_plus = MultiVector::new(vec![2, 2], vec![c(0.0), c(H), c(H), c(0.0)]).unwrap();
        assert!(rho.max_abs_diff(&psi_plus.projector()) < 1e-15);
    }

    #[test]
    fn jamiolkowski_identity_round_trip() {
        let rho = bell().projector();
        let t = jamiolkowski_t(&rho, &bell()).unwrap();
        assert!(t.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-14, "{t:?}");
    }

    #[test]
    fn jamiolkowski_random_round_trip() {
        let mut rng = random::rng(14);
        for d in [2, 3] {
            let t = random::ginibre(&mut rng, d * d, d * d);
            // maximally entangled reference rotated by a random local unitary
            let u = random::unitary(&mut rng, d);
            let a = u.scale_real(1.0 / (d as f64).sqrt());
            let psi = MultiVector::from_coefficients(&a).unwrap();
            let rho = jamiolkowski_rho(&t, &psi).unwrap();
            assert!(jamiolkowski_t(&rho, &psi).unwrap().max_abs_diff(&t) < 1e-9);
            // the literal sandwich gives the Hilbert-Schmidt adjoint
            let adj = jamiolkowski_t_adjoint(&rho, &psi).unwrap();
            assert!(adj.max_abs_diff(&t.dagger()) < 1e-9);
        }
    }

    #[test]
    fn jamiolkowski_rejects_partial_entanglement() {
        let psi = MultiVector::new(vec![2, 2], vec![c(0.8f64.sqrt()), c(0.0), c(0.0), c(0.2f64.sqrt())]).unwrap();
        assert!(matches!(
            jamiolkowski_rho(&ComplexMatrix::identity(4), &psi),
            Err(Error::NotMaximallyEntangled(_))
        ));
    }
}

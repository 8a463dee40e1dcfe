//! Anti-linear operators between finite-dimensional factor spaces.
//!
//! An [`AntilinearMap`] is stored as the matrix `M` for which
//! `S v = M conj(v)` in the fixed computational bases. With that choice the
//! adjoint, defined by `<w, S v> = <v, S* w>`, is the plain transpose of `M`,
//! and every composition rule has a closed form:
//!
//! | outer  | inner  | result | matrix          |
//! |--------|--------|--------|-----------------|
//! | anti M | anti N | linear | `M conj(N)`     |
//! | anti M | lin  N | anti   | `M conj(N)`     |
//! | lin  N | anti M | anti   | `N M`           |
//! | lin  A | lin  B | linear | `A B`           |

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{self, kron, ComplexMatrix};
use crate::tol;

#[derive(Clone, Debug, PartialEq)]
pub struct AntilinearMap {
    matrix: ComplexMatrix,
}

impl AntilinearMap {
    /// Anti-linear map `v -> matrix * conj(v)`; `matrix` is target x source.
    pub fn new(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    /// Componentwise complex conjugation on `C^d`.
    pub fn conjugation(d: usize) -> Self {
        Self::new(ComplexMatrix::identity(d))
    }

    pub fn zero(target_dim: usize, source_dim: usize) -> Self {
        Self::new(ComplexMatrix::zeros(target_dim, source_dim))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.source_dim() {
            return Err(Error::DimensionMismatch(format!(
                "anti-linear map from C^{} applied to a vector of length {}",
                self.source_dim(),
                v.len()
            )));
        }
        self.matrix.apply(&tensor::conj_vec(v))
    }

    /// Hermitian adjoint: `<w, S v> = <v, S* w>` for all `v`, `w`.
    pub fn adjoint(&self) -> Self {
        Self::new(self.matrix.transpose())
    }

    /// Multiply by a scalar on the output side: `(c S) v = c (S v)`.
    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.matrix.scale(c))
    }

    /// `self ∘ inner` for anti-linear `inner`; the result is linear.
    pub fn compose_anti(&self, inner: &AntilinearMap) -> Result<ComplexMatrix> {
        check_chain(self.source_dim(), inner.target_dim())?;
        Ok(&self.matrix * &inner.matrix.conj())
    }

    /// `self ∘ inner` for linear `inner`; the result is anti-linear.
    pub fn compose_linear(&self, inner: &ComplexMatrix) -> Result<AntilinearMap> {
        check_chain(self.source_dim(), inner.rows())?;
        Ok(Self::new(&self.matrix * &inner.conj()))
    }

    /// `outer ∘ self` for linear `outer`; the result is anti-linear.
    pub fn then_linear(&self, outer: &ComplexMatrix) -> Result<AntilinearMap> {
        check_chain(outer.cols(), self.target_dim())?;
        Ok(Self::new(outer * &self.matrix))
    }

    /// `J J* J = J` within tolerance.
    pub fn is_partial_isometry(&self, tolerance: f64) -> bool {
        let jjs = self.compose_anti(&self.adjoint()).expect("shapes agree");
        let back = self.then_linear(&jjs).expect("shapes agree");
        back.matrix.max_abs_diff(&self.matrix) < tolerance
    }
}

fn check_chain(outer_source: usize, inner_target: usize) -> Result<()> {
    if outer_source != inner_target {
        return Err(Error::DimensionMismatch(format!(
            "composition of a map from C^{outer_source} after a map into C^{inner_target}"
        )));
    }
    Ok(())
}

/// A linear or anti-linear map, as produced by chains of compositions.
#[derive(Clone, Debug, PartialEq)]
pub enum Map {
    Linear(ComplexMatrix),
    Anti(AntilinearMap),
}

impl Map {
    pub fn matrix(&self) -> &ComplexMatrix {
        match self {
            Map::Linear(m) => m,
            Map::Anti(s) => s.matrix(),
        }
    }

    pub fn is_antilinear(&self) -> bool {
        matches!(self, Map::Anti(_))
    }

    pub fn source_dim(&self) -> usize {
        self.matrix().cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix().rows()
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        match self {
            Map::Linear(m) => m.apply(v),
            Map::Anti(s) => s.apply(v),
        }
    }

    /// Conjugate transpose for linear maps, transpose for anti-linear ones.
    pub fn adjoint(&self) -> Map {
        match self {
            Map::Linear(m) => Map::Linear(m.dagger()),
            Map::Anti(s) => Map::Anti(s.adjoint()),
        }
    }

    pub fn into_linear(self) -> Option<ComplexMatrix> {
        match self {
            Map::Linear(m) => Some(m),
            Map::Anti(_) => None,
        }
    }

    pub fn into_anti(self) -> Option<AntilinearMap> {
        match self {
            Map::Anti(s) => Some(s),
            Map::Linear(_) => None,
        }
    }
}

impl From<AntilinearMap> for Map {
    fn from(s: AntilinearMap) -> Self {
        Map::Anti(s)
    }
}

impl From<ComplexMatrix> for Map {
    fn from(m: ComplexMatrix) -> Self {
        Map::Linear(m)
    }
}

/// `outer ∘ inner` for any combination of linear and anti-linear maps.
pub fn compose(outer: &Map, inner: &Map) -> Result<Map> {
    check_chain(outer.source_dim(), inner.target_dim())?;
    Ok(match (outer, inner) {
        (Map::Anti(s), Map::Anti(t)) => Map::Linear(s.compose_anti(t)?),
        (Map::Anti(s), Map::Linear(n)) => Map::Anti(s.compose_linear(n)?),
        (Map::Linear(n), Map::Anti(s)) => Map::Anti(s.then_linear(n)?),
        (Map::Linear(a), Map::Linear(b)) => Map::Linear(a.matmul(b)?),
    })
}

/// Tensor product of two anti-linear maps: `(S1 (x) S2)(v (x) w) = S1 v (x) S2 w`,
/// extended anti-linearly.
pub fn tensor_anti(s1: &AntilinearMap, s2: &AntilinearMap) -> AntilinearMap {
    AntilinearMap::new(kron(s1.matrix(), s2.matrix()))
}

/// Crossed tensor product on `H_a (x) H_b` of `s_ab: H_b -> H_a` and
/// `s_ba: H_a -> H_b`: the anti-linear extension of
/// `phi_a (x) phi_b -> s_ab phi_b (x) s_ba phi_a`.
pub fn crossed_tensor(s_ab: &AntilinearMap, s_ba: &AntilinearMap) -> Result<AntilinearMap> {
    let da = s_ab.target_dim();
    let db = s_ab.source_dim();
    if s_ba.source_dim() != da || s_ba.target_dim() != db {
        return Err(Error::DimensionMismatch(format!(
            "crossed tensor of maps C^{db}->C^{da} and C^{}->C^{}",
            s_ba.source_dim(),
            s_ba.target_dim()
        )));
    }
    let (m1, m2) = (s_ab.matrix(), s_ba.matrix());
    // column (i, j) is the image of e_i (x) f_j, i.e. m1[:, j] (x) m2[:, i]
    Ok(AntilinearMap::new(ComplexMatrix::from_fn(da * db, da * db, |row, col| {
        let (k, l) = (row / db, row % db);
        let (i, j) = (col / db, col % db);
        m1[(k, j)] * m2[(l, i)]
    })))
}

/// Polar factors of an anti-linear map: `S = P ∘ J = J ∘ Q`.
#[derive(Clone, Debug)]
pub struct PolarAnti {
    /// `(S S*)^{1/2}`, positive on the target space.
    pub left: ComplexMatrix,
    /// Anti-linear partial isometry; vanishes on the kernel of `S`.
    pub isometry: AntilinearMap,
    /// `(S* S)^{1/2}`, positive on the source space.
    pub right: ComplexMatrix,
    /// Singular values of `S`, descending.
    pub singular_values: Vec<f64>,
}

/// Polar decomposition via the SVD `M = U Σ V*` of the map's matrix:
/// `P = U Σ U*`, `J = U_r V_r*` (nonzero singular values only), and
/// `Q = conj(V Σ V*)`.
pub fn polar_anti(s: &AntilinearMap) -> Result<PolarAnti> {
    let m = s.matrix();
    let dec = tensor::svd(m)?;
    let r = dec.rank(tol::RANK);
    let (rows, cols) = m.shape();
    let u = &dec.u;
    let v = &dec.v;
    let sv = &dec.singular_values;
    let left = ComplexMatrix::from_fn(rows, rows, |i, j| {
        (0..r).map(|k| u[(i, k)] * sv[k] * u[(j, k)].conj()).sum()
    });
    let right = ComplexMatrix::from_fn(cols, cols, |i, j| {
        (0..r).map(|k| (v[(i, k)] * sv[k] * v[(j, k)].conj()).conj()).sum()
    });
    let isometry = AntilinearMap::new(ComplexMatrix::from_fn(rows, cols, |i, j| {
        (0..r).map(|k| u[(i, k)] * v[(j, k)].conj()).sum()
    }));
    Ok(PolarAnti {
        left,
        isometry,
        right,
        singular_values: sv.clone(),
    })
}

/// Inverse of a square anti-linear map: `invert_anti(S) ∘ S = 1`.
///
/// Fails with [`Error::NotCompletelyEntangled`] when the smallest singular
/// value is at or below `1e-8`.
pub fn invert_anti(s: &AntilinearMap) -> Result<AntilinearMap> {
    let inv = tensor::inverse(s.matrix(), tol::COMPLETE_ENTANGLEMENT)?;
    Ok(AntilinearMap::new(inv.conj()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::tensor::{inner, max_abs_diff};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn apply_conjugates() {
        let s = AntilinearMap::conjugation(2);
        assert_eq!(s.apply(&[c(0.0, 1.0), c(0.0, 0.0)]).unwrap(), vec![c(0.0, -1.0), c(0.0, 0.0)]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(s.apply(&[c(h, 0.0), c(h, 0.0)]).unwrap(), vec![c(h, 0.0), c(h, 0.0)]);
        assert!(s.apply(&[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn antilinearity_on_random_inputs() {
        let mut rng = random::rng(11);
        let s = AntilinearMap::new(random::ginibre(&mut rng, 3, 4));
        for _ in 0..20 {
            let v = random::gaussian_vector(&mut rng, 4);
            let w = random::gaussian_vector(&mut rng, 4);
            let a = random::scalar(&mut rng);
            let lhs = s.apply(&tensor::scale_vec(&v, a)).unwrap();
            let rhs = tensor::scale_vec(&s.apply(&v).unwrap(), a.conj());
            assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
            let sum: Vec<_> = v.iter().zip(&w).map(|(x, y)| x + y).collect();
            let lhs = s.apply(&sum).unwrap();
            let rhs: Vec<_> = s
                .apply(&v)
                .unwrap()
                .iter()
                .zip(s.apply(&w).unwrap())
                .map(|(x, y)| x + y)
                .collect();
            assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
        }
    }

    #[test]
    fn adjoint_is_transpose() {
        let sym = AntilinearMap::new(ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 3.0]]));
        assert_eq!(sym.adjoint(), sym);
        let n = AntilinearMap::new(ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]));
        assert_eq!(
            n.adjoint().matrix(),
            &ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]])
        );
        assert_eq!(n.adjoint().adjoint(), n);
    }

    #[test]
    fn adjoint_relation_on_random_3x4() {
        let mut rng = random::rng(2);
        let s = AntilinearMap::new(random::ginibre(&mut rng, 3, 4));
        let sa = s.adjoint();
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let v = random::unit_vector(&mut rng, 4);
            let w = random::unit_vector(&mut rng, 3);
            let lhs = inner(&w, &s.apply(&v).unwrap());
            let rhs = inner(&v, &sa.apply(&w).unwrap());
            worst = worst.max((lhs - rhs).norm());
        }
        assert!(worst < 1e-12, "{worst}");
    }

    #[test]
    fn conj_twice_is_identity() {
        let c2 = Map::Anti(AntilinearMap::conjugation(2));
        assert_eq!(compose(&c2, &c2).unwrap(), Map::Linear(ComplexMatrix::identity(2)));
    }

    #[test]
    fn bell_smaps_compose_to_half_identity() {
        let s = AntilinearMap::conjugation(2).scale(c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        let t = s.compose_anti(&s).unwrap();
        assert!(t.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn anti_after_linear_pointwise() {
        let mut rng = random::rng(5);
        let m = AntilinearMap::new(random::ginibre(&mut rng, 3, 2));
        let n = random::ginibre(&mut rng, 2, 4);
        let comp = compose(&Map::Anti(m.clone()), &Map::Linear(n.clone())).unwrap();
        assert!(comp.is_antilinear());
        for _ in 0..100 {
            let v = random::gaussian_vector(&mut rng, 4);
            let direct = m.apply(&n.apply(&v).unwrap()).unwrap();
            assert!(max_abs_diff(&comp.apply(&v).unwrap(), &direct) < 1e-12);
        }
    }

    #[test]
    fn composition_dimension_mismatch() {
        let a = Map::Anti(AntilinearMap::zero(2, 3));
        let b = Map::Linear(ComplexMatrix::zeros(2, 2));
        assert!(matches!(compose(&a, &b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn adjoint_reverses_composition_for_all_kinds() {
        let mut rng = random::rng(8);
        let mk = |rng: &mut random::SeededRng, anti: bool, r: usize, c: usize| {
            let m = random::ginibre(rng, r, c);
            if anti {
                Map::Anti(AntilinearMap::new(m))
            } else {
                Map::Linear(m)
            }
        };
        for outer_anti in [false, true] {
            for inner_anti in [false, true] {
                let s1 = mk(&mut rng, outer_anti, 2, 3);
                let s2 = mk(&mut rng, inner_anti, 3, 4);
                let lhs = compose(&s1, &s2).unwrap().adjoint();
                let rhs = compose(&s2.adjoint(), &s1.adjoint()).unwrap();
                assert_eq!(lhs.is_antilinear(), rhs.is_antilinear());
                assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-12);
            }
        }
    }

    #[test]
    fn tensor_anti_on_products() {
        let mut rng = random::rng(4);
        let s1 = AntilinearMap::new(random::ginibre(&mut rng, 2, 3));
        let s2 = AntilinearMap::new(random::ginibre(&mut rng, 4, 2));
        let t = tensor_anti(&s1, &s2);
        let v = random::gaussian_vector(&mut rng, 3);
        let w = random::gaussian_vector(&mut rng, 2);
        let lhs = t.apply(&tensor::kron_vec(&v, &w)).unwrap();
        let rhs = tensor::kron_vec(&s1.apply(&v).unwrap(), &s2.apply(&w).unwrap());
        assert!(max_abs_diff(&lhs, &rhs) < 1e-12);

        let i = c(0.0, 1.0);
        let lhs = t.apply(&tensor::scale_vec(&tensor::kron_vec(&v, &w), i)).unwrap();
        assert!(max_abs_diff(&lhs, &tensor::scale_vec(&rhs, -i)) < 1e-12);

        let cc = tensor_anti(&AntilinearMap::conjugation(2), &AntilinearMap::conjugation(2));
        let real = [c(0.1, 0.0), c(0.2, 0.0), c(0.3, 0.0), c(0.4, 0.0)];
        assert_eq!(cc.apply(&real).unwrap(), real.to_vec());
    }

    #[test]
    fn crossed_tensor_swaps_and_conjugates() {
        let conj = AntilinearMap::conjugation(2);
        let x = crossed_tensor(&conj, &conj).unwrap();
        let ket01 = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let ket10 = [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        assert_eq!(x.apply(&ket01).unwrap(), ket10.to_vec());
        let i00 = [c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert_eq!(x.apply(&i00).unwrap()[0], c(0.0, -1.0));
        let sq = x.compose_anti(&x).unwrap();
        assert_eq!(sq, ComplexMatrix::identity(4));
    }

    #[test]
    fn crossed_tensor_checks_roles() {
        let s_ab = AntilinearMap::zero(2, 3);
        assert!(crossed_tensor(&s_ab, &AntilinearMap::zero(2, 3)).is_err());
        assert!(crossed_tensor(&s_ab, &AntilinearMap::zero(3, 2)).is_ok());
    }

    #[test]
    fn polar_of_diagonal() {
        let (a, b) = (0.8f64.sqrt(), 0.2f64.sqrt());
        let s = AntilinearMap::new(ComplexMatrix::from_real_diagonal(&[a, b]));
        let p = polar_anti(&s).unwrap();
        assert!(p.left.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[a, b])) < 1e-14);
        assert!(p.isometry.matrix().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn polar_of_zero() {
        let p = polar_anti(&AntilinearMap::zero(2, 3)).unwrap();
        assert_eq!(p.left, ComplexMatrix::zeros(2, 2));
        assert_eq!(p.isometry, AntilinearMap::zero(2, 3));
        assert_eq!(p.right, ComplexMatrix::zeros(3, 3));
    }

    #[test]
    fn polar_of_random_full_rank() {
        let mut rng = random::rng(21);
        let s = AntilinearMap::new(random::ginibre(&mut rng, 3, 3));
        let p = polar_anti(&s).unwrap();
        let pj = p.isometry.then_linear(&p.left).unwrap();
        assert!(pj.matrix().max_abs_diff(s.matrix()) < 1e-10);
        let jq = p.isometry.compose_linear(&p.right).unwrap();
        assert!(jq.matrix().max_abs_diff(s.matrix()) < 1e-10);
        let jsj = p.isometry.adjoint().compose_anti(&p.isometry).unwrap();
        assert!(jsj.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-10);
        // eigenvalues of P are the singular values of S
        let eig = tensor::hermitian_eigen(&p.left).unwrap();
        for (e, s) in eig.values.iter().zip(&p.singular_values) {
            assert!((e - s).abs() < 1e-10);
        }
        // P agrees with the functional-calculus square root of S S*
        let sss = s.compose_anti(&s.adjoint()).unwrap();
        assert!(tensor::psd_sqrt(&sss).unwrap().max_abs_diff(&p.left) < 1e-10);
    }

    #[test]
    fn polar_rank_deficient_is_partial_isometry() {
        let u = [c(0.6, 0.0), c(0.0, 0.8)];
        let w = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let s = AntilinearMap::new(ComplexMatrix::outer(&u, &w).scale_real(0.5));
        let p = polar_anti(&s).unwrap();
        assert!(p.isometry.is_partial_isometry(1e-12));
        let pj = p.isometry.then_linear(&p.left).unwrap();
        assert!(pj.matrix().max_abs_diff(s.matrix()) < 1e-12);
        // J annihilates the kernel of S
        let ker = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        assert!(tensor::norm(&p.isometry.apply(&ker).unwrap()) < 1e-12);
    }

    #[test]
    fn invert_fixtures() {
        let conj = AntilinearMap::conjugation(3);
        assert!(invert_anti(&conj).unwrap().matrix().max_abs_diff(conj.matrix()) < 1e-15);
        let two = AntilinearMap::new(ComplexMatrix::identity(2).scale_real(2.0));
        let inv = invert_anti(&two).unwrap();
        assert!(inv.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
        let sing = AntilinearMap::new(ComplexMatrix::from_real_diagonal(&[1.0, 0.0]));
        assert!(matches!(invert_anti(&sing), Err(Error::NotCompletelyEntangled(_))));
    }

    #[test]
    fn invert_random_well_conditioned() {
        let mut rng = random::rng(13);
        let u = random::unitary(&mut rng, 4);
        let d = ComplexMatrix::from_real_diagonal(&[1.0, 0.7, 0.5, 0.3]);
        let s = AntilinearMap::new(&u * &d);
        let id = invert_anti(&s).unwrap().compose_anti(&s).unwrap();
        assert!(id.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-9);
    }
}

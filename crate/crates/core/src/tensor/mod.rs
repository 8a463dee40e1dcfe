//! Dense complex linear algebra and tensor-product bookkeeping.
//!
//! Every other module inherits the conventions fixed here: row-major
//! matrices, lexicographic multi-indices, and scalar products linear in the
//! second argument.

mod decomp;
mod density;
mod matrix;
mod vector;

pub use decomp::{
    check_hermitian, hermitian_eigen, hermitian_fn, hermitian_inverse, inverse, operator_norm,
    psd_sqrt, singular_values, support_projector, svd, trace_norm, HermitianEigen, Svd,
};
pub use density::DensityOperator;
pub use matrix::{conj_vec, inner, kron_vec, max_abs_diff, norm, scale_vec, ComplexMatrix};
pub use vector::MultiVector;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Which factor of a bipartite space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

/// Kronecker product: `(A (x) B)[i*rB + k, j*cB + l] = A[i,j] B[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    ComplexMatrix::from_fn(ra * rb, ca * cb, |r, c| {
        a[(r / rb, c / cb)] * b[(r % rb, c % cb)]
    })
}

/// Left fold of [`kron`] over a non-empty list.
pub fn kron_all<'a>(parts: impl IntoIterator<Item = &'a ComplexMatrix>) -> Result<ComplexMatrix> {
    let mut iter = parts.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::InvalidArgument("empty Kronecker product".into()))?
        .clone();
    Ok(iter.fold(first, |acc, m| kron(&acc, m)))
}

/// Partial trace of an arbitrary operator on `H_a (x) H_b`.
pub fn partial_trace_matrix(
    m: &ComplexMatrix,
    [da, db]: [usize; 2],
    keep: Side,
) -> Result<ComplexMatrix> {
    if m.rows() != da * db || m.cols() != da * db {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator on a {da}x{db} bipartite space",
            m.rows(),
            m.cols()
        )));
    }
    Ok(match keep {
        Side::A => ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
        Side::B => ComplexMatrix::from_fn(db, db, |k, l| {
            (0..da).map(|i| m[(i * db + k, i * db + l)]).sum()
        }),
    })
}

/// Partial trace of a density operator; see [`DensityOperator::partial_trace`].
pub fn partial_trace(rho: &DensityOperator, dims: [usize; 2], keep: Side) -> Result<DensityOperator> {
    rho.partial_trace(dims, keep)
}

/// Maps the interleaved factor order `a1 b1 a2 b2 ... am bm` to the grouped
/// order `a1 ... am b1 ... bm`. Returns the 0/1 unitary `V` with
/// `V[grouped, interleaved] = 1`.
pub fn permutation_unitary(pair_dims: &[(usize, usize)]) -> Result<ComplexMatrix> {
    if pair_dims.iter().any(|&(a, b)| a == 0 || b == 0) {
        return Err(Error::EmptyFactor);
    }
    let total: usize = pair_dims.iter().map(|&(a, b)| a * b).product();
    let mut v = ComplexMatrix::zeros(total, total);
    for interleaved in 0..total {
        v[(grouped_index(pair_dims, interleaved), interleaved)] = Complex64::new(1.0, 0.0);
    }
    Ok(v)
}

/// Flat index in the grouped order of the basis vector with the given flat
/// index in the interleaved order.
pub fn grouped_index(pair_dims: &[(usize, usize)], interleaved: usize) -> usize {
    // decode (i1, j1, ..., im, jm), least significant last
    let m = pair_dims.len();
    let mut a_idx = vec![0; m];
    let mut b_idx = vec![0; m];
    let mut rest = interleaved;
    for p in (0..m).rev() {
        let (da, db) = pair_dims[p];
        b_idx[p] = rest % db;
        rest /= db;
        a_idx[p] = rest % da;
        rest /= da;
    }
    let mut flat = 0;
    for p in 0..m {
        flat = flat * pair_dims[p].0 + a_idx[p];
    }
    for p in 0..m {
        flat = flat * pair_dims[p].1 + b_idx[p];
    }
    flat
}

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if let Some(&bad) = p.iter().find(|&&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::NegativeProbability(bad));
    }
    let total: f64 = p.iter().sum();
    if total > 1.0 + tol::CONSTRUCTION {
        return Err(Error::ProbabilityOutOfRange(total));
    }
    Ok(-p
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.log2())
        .sum::<f64>())
}

/// Von Neumann entropy in bits: Shannon entropy of the spectrum.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    let eig = rho.eigen()?;
    let spectrum: Vec<f64> = eig.values.iter().map(|&x| x.max(0.0)).collect();
    shannon_entropy(&spectrum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell() -> MultiVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        MultiVector::new(vec![2, 2], vec![c(s), c(0.0), c(0.0), c(s)]).unwrap()
    }

    #[test]
    fn kron_identity_and_diagonal() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        let d = kron(
            &ComplexMatrix::from_real_diagonal(&[1.0, 2.0]),
            &ComplexMatrix::from_real_diagonal(&[3.0, 4.0]),
        );
        assert_eq!(d, ComplexMatrix::from_real_diagonal(&[3.0, 4.0, 6.0, 8.0]));
    }

    #[test]
    fn kron_xx_fixes_bell() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let out = kron(&x, &x).apply(bell().amplitudes()).unwrap();
        assert!(max_abs_diff(&out, bell().amplitudes()) < 1e-15);
    }

    #[test]
    fn partial_trace_fixtures() {
        let rho = DensityOperator::pure(&bell()).unwrap();
        let ra = rho.partial_trace([2, 2], Side::A).unwrap();
        assert!(ra.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);

        let ket10 = MultiVector::basis(vec![2, 2], &[1, 0]).unwrap();
        let rb = DensityOperator::pure(&ket10)
            .unwrap()
            .partial_trace([2, 2], Side::B)
            .unwrap();
        assert_eq!(rb.matrix(), &ComplexMatrix::from_real_diagonal(&[1.0, 0.0]));

        assert!(partial_trace_matrix(&ComplexMatrix::identity(4), [2, 3], Side::A).is_err());
    }

    #[test]
    fn partial_trace_of_product_state() {
        let ra = ComplexMatrix::from_real_rows(&[&[0.7, 0.1], &[0.1, 0.3]]);
        let rb = ComplexMatrix::from_real_diagonal(&[0.2, 0.5, 0.3]);
        let rho = DensityOperator::normalized(kron(&ra, &rb)).unwrap();
        let back = rho.partial_trace([2, 3], Side::A).unwrap();
        assert!(back.matrix().max_abs_diff(&ra) < 1e-12);
        let back = rho.partial_trace([2, 3], Side::B).unwrap();
        assert!(back.matrix().max_abs_diff(&rb) < 1e-12);
    }

    #[test]
    fn permutation_single_pair_is_identity() {
        assert_eq!(permutation_unitary(&[(2, 3)]).unwrap(), ComplexMatrix::identity(6));
        assert_eq!(permutation_unitary(&[(2, 0)]), Err(Error::EmptyFactor));
    }

    #[test]
    fn permutation_two_qubit_pairs() {
        let v = permutation_unitary(&[(2, 2), (2, 2)]).unwrap();
        let dims = vec![2, 2, 2, 2];
        // (i1,j1,i2,j2) -> (i1,i2,j1,j2)
        let cases = [([0, 1, 1, 0], [0, 1, 1, 0]), ([0, 1, 0, 0], [0, 0, 1, 0]), ([1, 1, 0, 1], [1, 0, 1, 1])];
        for (from, to) in cases {
            let x = MultiVector::basis(dims.clone(), &from).unwrap();
            let y = MultiVector::basis(dims.clone(), &to).unwrap();
            assert_eq!(v.apply(x.amplitudes()).unwrap(), y.amplitudes(), "{from:?}");
        }
        let vv = &v * &v.dagger();
        assert_eq!(vv, ComplexMatrix::identity(16));
    }

    #[test]
    fn permutation_one_per_row_and_column() {
        let v = permutation_unitary(&[(2, 3), (1, 2), (3, 1)]).unwrap();
        let n = v.rows();
        for i in 0..n {
            let row: f64 = v.row(i).iter().map(|z| z.re).sum();
            let col: f64 = v.column(i).iter().map(|z| z.re).sum();
            assert_eq!((row, col), (1.0, 1.0));
        }
    }

    #[test]
    fn shannon_fixtures() {
        assert!((shannon_entropy(&[0.5, 0.5]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        // -0.8 log2 0.8 - 0.2 log2 0.2
        let h = shannon_entropy(&[0.8, 0.2]).unwrap();
        assert!((h - 0.721_928_094_887_362_3).abs() < 1e-12);
        assert!(matches!(shannon_entropy(&[1.1, -0.1]), Err(Error::NegativeProbability(_))));
    }

    #[test]
    fn von_neumann_fixtures() {
        let mixed = DensityOperator::maximally_mixed(2);
        assert!((von_neumann_entropy(&mixed).unwrap() - 1.0).abs() < 1e-12);
        let pure = DensityOperator::pure(&bell()).unwrap();
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-12);
        let d = DensityOperator::new(ComplexMatrix::from_real_diagonal(&[0.9, 0.1])).unwrap();
        assert!((von_neumann_entropy(&d).unwrap() - 0.468_995_593_589_281_2).abs() < 1e-12);
    }
}

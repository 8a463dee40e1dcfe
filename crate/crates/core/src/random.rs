//! Seeded sampling of Haar-random vectors, unitaries and density operators.
//!
//! The generator is ChaCha20 (`rand_chacha::ChaCha20Rng::seed_from_u64`),
//! which is portable across platforms. Complex Gaussians use independent
//! standard normal real and imaginary parts; normalizing a Gaussian vector
//! gives the Haar measure on the unit sphere.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::tensor::{ComplexMatrix, DensityOperator, MultiVector};

pub type SeededRng = ChaCha20Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniform complex scalar in the unit square, for linearity checks.
pub fn scalar<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Haar-random unit vector in `C^d`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
        let n = crate::tensor::norm(&v);
        if n > 1e-12 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Unnormalized Gaussian vector.
pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<Complex64> {
    (0..d).map(|_| gaussian(rng)).collect()
}

/// Haar-random normalized vector on the given tensor factors.
pub fn haar_state<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> MultiVector {
    let d = dims.iter().product();
    MultiVector::new(dims.to_vec(), unit_vector(rng, d)).expect("dims are positive")
}

/// Product of independent Haar-random factors.
pub fn product_state<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> MultiVector {
    let parts: Vec<MultiVector> = dims
        .iter()
        .map(|&d| MultiVector::single(unit_vector(rng, d)).expect("d >= 1"))
        .collect();
    MultiVector::tensor_all(&parts).expect("non-empty")
}

/// Ginibre matrix with i.i.d. complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random unitary via QR of a Ginibre matrix with the phase fix
/// `Q diag(r_ii / |r_ii|)`.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    let qr = DMatrix::from_row_slice(n, n, g.entries()).qr();
    let q = qr.q();
    let r = qr.r();
    ComplexMatrix::from_fn(n, n, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        q[(i, j)] * phase
    })
}

/// Random Hermitian matrix `(G + G*)/2`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    (&g + &g.dagger()).scale_real(0.5)
}

/// Random full-rank density operator `G G* / Tr(G G*)`.
pub fn density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityOperator {
    let g = ginibre(rng, n, n);
    let m = &g * &g.dagger();
    let tr = m.trace().re;
    DensityOperator::new(m.scale_real(1.0 / tr)).expect("Gram matrix is PSD")
}

/// Random orthogonal projector of the given rank.
pub fn projector<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> ComplexMatrix {
    let u = unitary(rng, n);
    let mut p = ComplexMatrix::zeros(n, n);
    for k in 0..rank.min(n) {
        let col = u.column(k);
        p = &p + &ComplexMatrix::outer(&col, &col);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_repeat() {
        let a = haar_state(&mut rng(7), &[2, 3]);
        let b = haar_state(&mut rng(7), &[2, 3]);
        assert_eq!(a, b);
        assert!(a.is_normalized());
    }

    #[test]
    fn unitary_is_unitary() {
        let u = unitary(&mut rng(3), 4);
        assert!((&u * &u.dagger()).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn projector_is_idempotent() {
        let p = projector(&mut rng(5), 3, 2);
        assert!((&p * &p).max_abs_diff(&p) < 1e-12);
        assert!((p.trace().re - 2.0).abs() < 1e-12);
    }
}

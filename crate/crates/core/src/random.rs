//! Seeded random matrices and states.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matcore::{ComplexHermitian, DensityMatrix};
use crate::measures::BlochVector;

/// The generator used everywhere a seed is accepted.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Hilbert-Schmidt random density matrix `G G† / tr(G G†)`.
pub fn random_density_hs<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    let m = &g * g.adjoint();
    DensityMatrix::normalized(ComplexHermitian::new(m).expect("G G† is Hermitian"))
        .expect("G G† is PSD with positive trace")
}

/// Random Hermitian matrix with Gaussian entries (not necessarily PSD).
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexHermitian {
    let g = gaussian_matrix(dim, dim, rng);
    ComplexHermitian::new((&g + g.adjoint()) * Complex64::new(0.5, 0.0)).expect("Hermitian")
}

/// Random `rows x cols` isometry (`V†V = I`) from the QR factor of a
/// Gaussian matrix, with the phase ambiguity of the factorization removed.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let g = gaussian_matrix(rows, cols, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..rows {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

pub fn random_phases<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    (0..dim)
        .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect()
}

/// Uniform point in the Bloch ball.
pub fn random_bloch<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    loop {
        let v: [f64; 3] = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        if r2 <= 1.0 {
            return BlochVector::new(v[0], v[1], v[2]).expect("inside the ball");
        }
    }
}

/// A random permutation of `0..n`.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

#![allow(dead_code)]

use coherence_roof::DensityMatrix;
use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The one-parameter qutrit family with |ρ13| free.
pub fn reference_qutrit(rho13: f64) -> DensityMatrix {
    DensityMatrix::from_row_major(
        3,
        &[
            c(0.1, 0.0), c(0.01, 0.0), c(rho13, 0.0),
            c(0.01, 0.0), c(0.1, 0.0), c(0.0, 0.2),
            c(rho13, 0.0), c(0.0, -0.2), c(0.8, 0.0),
        ],
    )
    .unwrap()
}

/// All principal minors of a 3x3 Hermitian matrix given as row-major
/// entries, written out by hand.
pub fn minors3(a: &[Complex64]) -> [f64; 7] {
    let (a11, a22, a33) = (a[0].re, a[4].re, a[8].re);
    let (a12, a13, a23) = (a[1], a[2], a[5]);
    let det = a11 * a22 * a33 + 2.0 * (a12 * a23 * a13.conj()).re
        - a11 * a23.norm_sqr()
        - a22 * a13.norm_sqr()
        - a33 * a12.norm_sqr();
    [
        a11,
        a22,
        a33,
        a11 * a22 - a12.norm_sqr(),
        a11 * a33 - a13.norm_sqr(),
        a22 * a33 - a23.norm_sqr(),
        det,
    ]
}

/// `ρ - |w⟩⟨w|` with `w = (√x, ρ21/√x, 0)`, which clears the (1, 2) entry.
pub fn reduced_original_frame(rho: &DensityMatrix, x: f64) -> Vec<Complex64> {
    let mut a = rho.to_row_major();
    let r12 = a[1];
    a[0] -= x;
    a[1] = c(0.0, 0.0);
    a[3] = c(0.0, 0.0);
    a[4] -= r12.norm_sqr() / x;
    a
}

/// Symmetric-group action `ρ -> P ρ Pᵀ` with `(PρPᵀ)[j][k] = ρ[p[j]][p[k]]`.
pub fn permute(rho: &DensityMatrix, p: &[usize]) -> DensityMatrix {
    DensityMatrix::new(rho.permuted(p)).unwrap()
}

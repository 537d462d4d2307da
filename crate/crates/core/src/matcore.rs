//! Dense complex Hermitian matrix primitives for small dimensions.
//!
//! Everything here is sized for `d <= 8`: eigendecomposition, the
//! principal-minor PSD test, Perron pairs of entrywise-positive matrices and
//! conjugation by diagonal phase unitaries `diag(e^{iθ_1}, ..., e^{iθ_d})`.

use std::f64::consts::PI;
use std::ops::Deref;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest allowed `|m_jk - conj(m_kj)|` when accepting a Hermitian matrix.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Trace and eigenvalue slack when certifying a density matrix.
pub const DENSITY_TOL: f64 = 1e-10;
/// Sign threshold for principal minors.
pub const MINOR_TOL: f64 = 1e-12;
/// Entries with modulus below this are treated as exact zeros.
pub const ZERO_TOL: f64 = 1e-14;
/// Tolerance on `θ23 - (θ13 - θ12)` for the phase alignment test.
pub const PHASE_ALIGN_TOL: f64 = 1e-10;

/// Wraps an angle into `(-π, π]`.
pub fn wrap_phase(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Phase of a complex number in `(-π, π]`, with tiny moduli mapped to 0.
pub fn phase_of(z: Complex64) -> f64 {
    if z.norm() < ZERO_TOL {
        0.0
    } else {
        wrap_phase(z.arg())
    }
}

/// A `d x d` complex Hermitian matrix.
///
/// Construction symmetrizes the input after validation, so the stored entries
/// satisfy `m[j][k] == conj(m[k][j])` exactly and the diagonal is real.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexHermitian {
    mat: DMatrix<Complex64>,
}

impl ComplexHermitian {
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self> {
        let (rows, cols) = mat.shape();
        if rows != cols || rows == 0 {
            return Err(Error::NotSquare { rows, cols });
        }
        for j in 0..rows {
            for k in j..rows {
                let residual = (mat[(j, k)] - mat[(k, j)].conj()).norm();
                if !residual.is_finite() || residual > HERMITIAN_TOL {
                    return Err(Error::NotHermitian {
                        row: j,
                        col: k,
                        residual,
                    });
                }
            }
        }
        let mut sym = (&mat + mat.adjoint()) * Complex64::new(0.5, 0.0);
        for j in 0..rows {
            sym[(j, j)].im = 0.0;
        }
        Ok(Self { mat: sym })
    }

    /// Builds from `dim * dim` row-major entries.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::EntryCount {
                dim,
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Builds from the diagonal and upper triangle, listed row-major
    /// (`d(d+1)/2` entries), completing the lower triangle by conjugation.
    pub fn from_upper(dim: usize, upper: &[Complex64]) -> Result<Self> {
        let expected = dim * (dim + 1) / 2;
        if upper.len() != expected {
            return Err(Error::EntryCount {
                dim,
                expected,
                found: upper.len(),
            });
        }
        let mut mat = DMatrix::zeros(dim, dim);
        let mut it = upper.iter();
        for j in 0..dim {
            for k in j..dim {
                let z = *it.next().expect("length checked");
                mat[(j, k)] = z;
                mat[(k, j)] = z.conj();
            }
        }
        Self::new(mat)
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_row_major(dim, &c)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    /// Outer product `Σ_l w_l |v_l⟩⟨v_l|`.
    pub fn from_weighted_states<'a, I>(dim: usize, states: I) -> Self
    where
        I: IntoIterator<Item = (f64, &'a [Complex64])>,
    {
        let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
        for (w, v) in states {
            for j in 0..dim {
                for k in 0..dim {
                    mat[(j, k)] += v[j] * v[k].conj() * w;
                }
            }
        }
        for j in 0..dim {
            mat[(j, j)].im = 0.0;
        }
        Self { mat }
    }

    pub(crate) fn from_matrix_unchecked(mat: DMatrix<Complex64>) -> Self {
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.mat[(j, k)]
    }

    pub fn modulus(&self, j: usize, k: usize) -> f64 {
        self.mat[(j, k)].norm()
    }

    /// Polar phase `θ_jk` in `(-π, π]`; zero entries get phase 0.
    pub fn phase(&self, j: usize, k: usize) -> f64 {
        phase_of(self.mat[(j, k)])
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|j| self.mat[(j, j)].re).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|j| self.mat[(j, j)].re).collect()
    }

    /// Row-major entries.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let d = self.dim();
        let mut out = Vec::with_capacity(d * d);
        for j in 0..d {
            for k in 0..d {
                out.push(self.mat[(j, k)]);
            }
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            mat: &self.mat * Complex64::new(factor, 0.0),
        }
    }

    /// Principal submatrix on `indices`, in the given order.
    pub fn submatrix(&self, indices: &[usize]) -> Self {
        let n = indices.len();
        Self {
            mat: DMatrix::from_fn(n, n, |a, b| self.mat[(indices[a], indices[b])]),
        }
    }

    /// `P m P^T` where `perm[new] = old`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        self.submatrix(perm)
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &ComplexHermitian) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn determinant(&self) -> f64 {
        self.mat.clone().determinant().re
    }
}

/// A Hermitian matrix with unit trace and no negative eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexHermitian,
}

impl DensityMatrix {
    pub fn new(mat: ComplexHermitian) -> Result<Self> {
        let trace = mat.trace();
        if (trace - 1.0).abs() > DENSITY_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        let spec = eigh(&mat);
        let min_eigenvalue = *spec.eigenvalues.last().expect("dim >= 1");
        if min_eigenvalue < -DENSITY_TOL {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(Self { mat })
    }

    /// Rescales a nonzero PSD Hermitian matrix to unit trace.
    pub fn normalized(mat: ComplexHermitian) -> Result<Self> {
        let trace = mat.trace();
        if !(trace > 0.0) {
            return Err(Error::TraceNotOne { trace });
        }
        Self::new(mat.scaled(1.0 / trace))
    }

    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        Self::new(ComplexHermitian::from_row_major(dim, entries)?)
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(ComplexHermitian::from_real(dim, entries)?)
    }

    /// `|ψ⟩⟨ψ|` for a normalized state.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > DENSITY_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            mat: ComplexHermitian::from_weighted_states(psi.len(), [(1.0, psi)]),
        })
    }

    /// `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexHermitian::identity(dim).scaled(1.0 / dim as f64),
        }
    }

    pub(crate) fn from_hermitian_unchecked(mat: ComplexHermitian) -> Self {
        Self { mat }
    }

    pub fn hermitian(&self) -> &ComplexHermitian {
        &self.mat
    }

    pub fn into_hermitian(self) -> ComplexHermitian {
        self.mat
    }
}

impl Deref for DensityMatrix {
    type Target = ComplexHermitian;

    fn deref(&self) -> &ComplexHermitian {
        &self.mat
    }
}

/// Eigenvalues in descending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<Complex64>>,
}

impl Spectrum {
    /// `Σ λ_j v_j v_j†`.
    pub fn reconstruct(&self) -> ComplexHermitian {
        let d = self.eigenvalues.len();
        ComplexHermitian::from_weighted_states(
            d,
            self.eigenvalues
                .iter()
                .zip(&self.eigenvectors)
                .map(|(&l, v)| (l, v.as_slice())),
        )
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn min(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| l > tol).count()
    }
}

pub fn eigh(m: &ComplexHermitian) -> Spectrum {
    let eig = m.matrix().clone().symmetric_eigen();
    let d = m.dim();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}

/// A principal minor that came out negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinorCertificate {
    pub indices: Vec<usize>,
    pub value: f64,
}

/// Outcome of the principal-minor PSD test.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdReport {
    pub psd: bool,
    pub failing: Option<MinorCertificate>,
}

/// Principal minors of `m` in order of increasing size, then lexicographic.
pub fn principal_minors(m: &ComplexHermitian) -> Vec<MinorCertificate> {
    let d = m.dim();
    let mut subsets: Vec<Vec<usize>> = (1u32..(1 << d))
        .map(|mask| (0..d).filter(|&i| mask & (1 << i) != 0).collect())
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    subsets
        .into_iter()
        .map(|indices| {
            let value = m.submatrix(&indices).determinant();
            MinorCertificate { indices, value }
        })
        .collect()
}

/// PSD test by principal minors: every minor must be at least `-1e-12`.
pub fn is_psd_minors(m: &ComplexHermitian) -> PsdReport {
    let failing = principal_minors(m)
        .into_iter()
        .find(|c| c.value < -MINOR_TOL);
    PsdReport {
        psd: failing.is_none(),
        failing,
    }
}

/// Largest eigenvalue and its entrywise-positive unit eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct PerronPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Perron pair of a matrix whose entries are all real and strictly positive.
pub fn perron_vector(m: &ComplexHermitian) -> Result<PerronPair> {
    let d = m.dim();
    for j in 0..d {
        for k in 0..d {
            let z = m.get(j, k);
            if z.im.abs() > ZERO_TOL || z.re <= ZERO_TOL {
                return Err(Error::NotPositive { row: j, col: k });
            }
        }
    }
    let spec = eigh(m);
    let v = &spec.eigenvectors[0];
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("dim >= 1");
    let rot = pivot.conj() / pivot.norm();
    let vector: Vec<f64> = v.iter().map(|z| (z * rot).re).collect();
    let norm = vector.iter().map(|x| x * x).sum::<f64>().sqrt();
    let vector: Vec<f64> = vector.into_iter().map(|x| x / norm).collect();
    // Perron-Frobenius: strictly positive for positive matrices.
    debug_assert!(vector.iter().all(|&x| x > 0.0), "Perron vector {vector:?}");
    Ok(PerronPair {
        value: spec.eigenvalues[0],
        vector,
    })
}

/// `U m U†` with `U = diag(e^{iθ_1}, ..., e^{iθ_d})`.
pub fn phase_conjugate_hermitian(m: &ComplexHermitian, theta: &[f64]) -> ComplexHermitian {
    assert_eq!(theta.len(), m.dim(), "one phase per basis index");
    let d = m.dim();
    let mat = DMatrix::from_fn(d, d, |j, k| {
        if j == k {
            m.get(j, j)
        } else {
            m.get(j, k) * Complex64::from_polar(1.0, theta[j] - theta[k])
        }
    });
    ComplexHermitian::from_matrix_unchecked(mat)
}

pub fn phase_conjugate(rho: &DensityMatrix, theta: &[f64]) -> DensityMatrix {
    DensityMatrix::from_hermitian_unchecked(phase_conjugate_hermitian(rho, theta))
}

/// Applies `diag(e^{iθ_j})` to a state vector.
pub fn phase_rotate_state(psi: &[Complex64], theta: &[f64]) -> Vec<Complex64> {
    psi.iter()
        .zip(theta)
        .map(|(z, &t)| z * Complex64::from_polar(1.0, t))
        .collect()
}

/// For a 3x3 state, the phases `(0, θ12, θ13)` that make every entry real and
/// nonnegative, or `None` when `θ23 ≠ θ13 - θ12`.
pub fn phase_align_unitary(rho: &ComplexHermitian) -> Option<[f64; 3]> {
    assert_eq!(rho.dim(), 3, "phase alignment is defined for d = 3");
    let t12 = rho.phase(0, 1);
    let t13 = rho.phase(0, 2);
    if rho.modulus(1, 2) < ZERO_TOL || phase_mismatch(rho).abs() <= PHASE_ALIGN_TOL {
        Some([0.0, t12, t13])
    } else {
        None
    }
}

/// `θ = θ12 + θ23 - θ13` wrapped into `(-π, π]`: the gauge-invariant phase
/// of a 3x3 state.
pub fn phase_mismatch(rho: &ComplexHermitian) -> f64 {
    wrap_phase(rho.phase(0, 1) + rho.phase(1, 2) - rho.phase(0, 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reference_qutrit(rho13: f64) -> DensityMatrix {
        DensityMatrix::from_row_major(
            3,
            &[
                c(0.1, 0.0),
                c(0.01, 0.0),
                c(rho13, 0.0),
                c(0.01, 0.0),
                c(0.1, 0.0),
                c(0.0, 0.2),
                c(rho13, 0.0),
                c(0.0, -0.2),
                c(0.8, 0.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_spectrum() {
        let s = eigh(&ComplexHermitian::identity(3));
        for l in &s.eigenvalues {
            assert_abs_diff_eq!(*l, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn reference_qutrit_eigenvalues() {
        let s = eigh(&reference_qutrit(0.17));
        for (got, want) in s.eigenvalues.iter().zip([0.887506, 0.101004, 0.0114902]) {
            assert_abs_diff_eq!(*got, want, epsilon = 5e-6);
        }
        let s = eigh(&reference_qutrit(0.19));
        for (got, want) in s.eigenvalues.iter().zip([0.895659, 0.100911, 0.00342989]) {
            assert_abs_diff_eq!(*got, want, epsilon = 5e-6);
        }
    }

    #[test]
    fn spectrum_reconstructs_and_is_orthonormal() {
        let rho = reference_qutrit(0.17);
        let s = eigh(&rho);
        assert!(s.reconstruct().max_abs_diff(&rho) < 1e-9);
        for a in 0..3 {
            for b in 0..3 {
                let ip: Complex64 = s.eigenvectors[a]
                    .iter()
                    .zip(&s.eigenvectors[b])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((ip - c(want, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let err = ComplexHermitian::from_real(2, &[1.0, 0.5, 0.4, 1.0]).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { row: 0, col: 1, .. }));
        let err = ComplexHermitian::from_row_major(1, &[c(1.0, 0.1)]).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn density_validation() {
        assert!(matches!(
            DensityMatrix::from_real(2, &[0.6, 0.0, 0.0, 0.6]),
            Err(Error::TraceNotOne { .. })
        ));
        assert!(matches!(
            DensityMatrix::from_real(2, &[0.5, 0.9, 0.9, 0.5]),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn psd_minors_examples() {
        assert!(is_psd_minors(&ComplexHermitian::identity(2)).psd);

        let r = is_psd_minors(&ComplexHermitian::from_real(2, &[1.0, 2.0, 2.0, 1.0]).unwrap());
        assert!(!r.psd);
        let cert = r.failing.unwrap();
        assert_eq!(cert.indices, vec![0, 1]);
        assert_abs_diff_eq!(cert.value, -3.0, epsilon = 1e-12);

        // ρ̄(|ρ13| = 0.19) at x1 = 0.05
        let x1 = 0.05;
        let bar = ComplexHermitian::from_row_major(
            3,
            &[
                c(0.1 - x1, 0.0),
                c(0.0, 0.0),
                c(0.19, 0.0),
                c(0.0, 0.0),
                c(0.1 - 0.0001 / x1, 0.0),
                c(0.0, 0.2),
                c(0.19, 0.0),
                c(0.0, -0.2),
                c(0.8, 0.0),
            ],
        )
        .unwrap();
        let r = is_psd_minors(&bar);
        assert!(!r.psd);
        let cert = r.failing.unwrap();
        assert_eq!(cert.indices, vec![0, 1, 2]);
        assert!(cert.value < 0.0);
    }

    #[test]
    fn perron_examples() {
        let ones = ComplexHermitian::from_real(3, &[1.0; 9]).unwrap();
        let p = perron_vector(&ones).unwrap();
        assert_abs_diff_eq!(p.value, 3.0, epsilon = 1e-12);
        for x in &p.vector {
            assert_abs_diff_eq!(*x, 1.0 / 3f64.sqrt(), epsilon = 1e-12);
        }

        let m = ComplexHermitian::from_real(2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let p = perron_vector(&m).unwrap();
        assert_abs_diff_eq!(p.value, 3.0, epsilon = 1e-12);
        for x in &p.vector {
            assert_abs_diff_eq!(*x, 1.0 / 2f64.sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn perron_after_gauge_fix_of_reference_qutrit() {
        // The reference qutrit has θ12 = θ13 = 0, so U = I and the (2,3) entry stays
        // imaginary; the Perron precondition rejects it.
        let rho = reference_qutrit(0.17);
        let theta = [0.0, rho.phase(0, 1), rho.phase(0, 2)];
        let conj = phase_conjugate(&rho, &theta);
        assert_eq!(
            perron_vector(&conj),
            Err(Error::NotPositive { row: 1, col: 2 })
        );
        assert_abs_diff_eq!(eigh(&conj).max(), 0.887506, epsilon = 5e-6);
    }

    #[test]
    fn perron_rejects_nonpositive() {
        let m = ComplexHermitian::from_real(2, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(perron_vector(&m), Err(Error::NotPositive { row: 0, col: 1 }));
    }

    #[test]
    fn phase_conjugation_examples() {
        let rho = reference_qutrit(0.17);
        assert_eq!(phase_conjugate(&rho, &[0.0; 3]), rho);

        // General S4 layout: (2,3) entry picks up θ12 + θ23 - θ13.
        let (t12, t13, t23) = (0.4, -1.1, 2.0);
        let m = ComplexHermitian::from_upper(
            3,
            &[
                c(0.4, 0.0),
                Complex64::from_polar(0.1, t12),
                Complex64::from_polar(0.05, t13),
                c(0.3, 0.0),
                Complex64::from_polar(0.08, t23),
                c(0.3, 0.0),
            ],
        )
        .unwrap();
        let out = phase_conjugate_hermitian(&m, &[0.0, t12, t13]);
        assert_abs_diff_eq!(out.get(0, 1).re, 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(out.get(0, 2).re, 0.05, epsilon = 1e-15);
        assert!((out.get(1, 2) - Complex64::from_polar(0.08, t12 + t23 - t13)).norm() < 1e-15);
        assert_abs_diff_eq!(phase_mismatch(&m), wrap_phase(t12 + t23 - t13), epsilon = 1e-14);
    }

    #[test]
    fn phase_alignment() {
        let real = DensityMatrix::from_real(3, &[0.4, 0.1, 0.1, 0.1, 0.3, 0.1, 0.1, 0.1, 0.3]).unwrap();
        assert_eq!(phase_align_unitary(&real), Some([0.0, 0.0, 0.0]));

        let (t12, t13) = (0.7, -2.5);
        let aligned = ComplexHermitian::from_upper(
            3,
            &[
                c(0.4, 0.0),
                Complex64::from_polar(0.1, t12),
                Complex64::from_polar(0.1, t13),
                c(0.3, 0.0),
                Complex64::from_polar(0.1, t13 - t12),
                c(0.3, 0.0),
            ],
        )
        .unwrap();
        let theta = phase_align_unitary(&aligned).unwrap();
        let out = phase_conjugate_hermitian(&aligned, &theta);
        for z in out.matrix().iter() {
            assert!(z.im.abs() < 1e-15 && z.re >= 0.0);
        }

        assert_eq!(phase_align_unitary(&reference_qutrit(0.17)), None);
    }

    #[test]
    fn wrap_phase_range() {
        assert_abs_diff_eq!(wrap_phase(-PI), PI, epsilon = 1e-15);
        assert_abs_diff_eq!(wrap_phase(3.0 * PI), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_phase(0.5), 0.5);
    }
}

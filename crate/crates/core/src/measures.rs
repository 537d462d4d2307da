//! Coherence measures: l1-norm and relative entropy, the qubit closed forms,
//! and pure-state functionals that the convex-roof optimizer averages.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{eigh, ComplexHermitian, DensityMatrix, DENSITY_TOL};

/// Probabilities below this contribute nothing to an entropy.
const ENTROPY_CUTOFF: f64 = 1e-15;

/// `-x log2 x - (1-x) log2 (1-x)`, with the argument clamped to `[0, 1]`.
pub fn binary_entropy(x: f64) -> f64 {
    debug_assert!((-1e-12..=1.0 + 1e-12).contains(&x), "h({x})");
    let x = x.clamp(0.0, 1.0);
    shannon_entropy(&[x, 1.0 - x])
}

/// Base-2 Shannon entropy of a probability vector.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > ENTROPY_CUTOFF)
        .fold(0.0, |acc, &x| acc - x * x.log2())
}

/// Base-2 von Neumann entropy.
pub fn von_neumann_entropy(m: &ComplexHermitian) -> f64 {
    shannon_entropy(&eigh(m).eigenvalues)
}

/// `Σ_{j≠k} |ρ_jk|`.
pub fn c_l1(rho: &ComplexHermitian) -> f64 {
    let d = rho.dim();
    let mut total = 0.0;
    for j in 0..d {
        for k in 0..d {
            if j != k {
                total += rho.modulus(j, k);
            }
        }
    }
    total
}

/// `S(ρ_diag) - S(ρ)`.
pub fn c_r(rho: &DensityMatrix) -> f64 {
    (shannon_entropy(&rho.diagonal()) - von_neumann_entropy(rho)).max(0.0)
}

/// l1 coherence of a normalized pure state, `(Σ_j |ψ_j|)^2 - 1`.
pub fn pure_c_l1(psi: &[Complex64]) -> Result<f64> {
    check_normalized(psi)?;
    Ok(L1Coherence.value(psi))
}

/// Relative entropy coherence of a normalized pure state, `S(|ψ_j|^2)`.
pub fn pure_c_r(psi: &[Complex64]) -> Result<f64> {
    check_normalized(psi)?;
    Ok(RelativeEntropyCoherence.value(psi))
}

pub(crate) fn check_normalized(psi: &[Complex64]) -> Result<()> {
    let norm = norm(psi);
    if (norm - 1.0).abs() > DENSITY_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Qubit state `½(I + r⃗·σ⃗)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let b = Self { x, y, z };
        let r = b.r();
        if !(r <= 1.0 + DENSITY_TOL) {
            return Err(Error::OutsideBlochBall { r });
        }
        Ok(b)
    }

    /// Reads the Bloch vector of a 2x2 density matrix.
    pub fn from_density(rho: &ComplexHermitian) -> Result<Self> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: rho.dim(),
            });
        }
        let off = rho.get(0, 1);
        Self::new(2.0 * off.re, -2.0 * off.im, rho.get(0, 0).re - rho.get(1, 1).re)
    }

    pub fn r(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Length of the transverse part, `√(x² + y²)`.
    pub fn transverse(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn to_density(&self) -> DensityMatrix {
        let m = ComplexHermitian::from_row_major(
            2,
            &[
                Complex64::new((1.0 + self.z) / 2.0, 0.0),
                Complex64::new(self.x / 2.0, -self.y / 2.0),
                Complex64::new(self.x / 2.0, self.y / 2.0),
                Complex64::new((1.0 - self.z) / 2.0, 0.0),
            ],
        )
        .expect("Hermitian by construction");
        DensityMatrix::new(m).expect("Bloch ball states are valid")
    }

    /// Pure qubit state whose Bloch vector is this unit vector.
    pub fn to_pure_state(&self) -> [Complex64; 2] {
        let r = self.r();
        let (x, y, z) = (self.x / r, self.y / r, self.z / r);
        if z >= 0.0 {
            let a = ((1.0 + z) / 2.0).sqrt();
            [
                Complex64::new(a, 0.0),
                Complex64::new(x, y) / (2.0 * (1.0 + z)).sqrt(),
            ]
        } else {
            let b = ((1.0 - z) / 2.0).sqrt();
            [
                Complex64::new(x, -y) / (2.0 * (1.0 - z)).sqrt(),
                Complex64::new(b, 0.0),
            ]
        }
    }
}

/// Relative entropy of coherence of a qubit, `h((1+z)/2) - h((1+r)/2)`.
pub fn qubit_cr(b: &BlochVector) -> Result<f64> {
    let b = BlochVector::new(b.x, b.y, b.z)?;
    let r = b.r().min(1.0);
    Ok(binary_entropy((1.0 + b.z) / 2.0) - binary_entropy((1.0 + r) / 2.0))
}

/// Convex roof of the qubit relative entropy coherence,
/// `h((1 + √(1 - r² + z²))/2)`.
pub fn qubit_cr_roof(b: &BlochVector) -> Result<f64> {
    let b = BlochVector::new(b.x, b.y, b.z)?;
    let s = (1.0 - b.x * b.x - b.y * b.y).max(0.0).sqrt();
    Ok(binary_entropy((1.0 + s) / 2.0))
}

/// A coherence functional on pure states, extended to mixed states by the
/// convex roof.
///
/// `value` takes a normalized state. The weighted form takes an unnormalized
/// vector `w = √p ψ` and returns `p f(ψ)`; its gradient with respect to
/// `conj(w)` drives the roof optimizer. The default gradient uses central
/// differences; the built-in functionals override it analytically.
pub trait PureStateFunctional: Send + Sync {
    fn name(&self) -> &str;

    fn value(&self, psi: &[Complex64]) -> f64;

    fn weighted_value(&self, w: &[Complex64]) -> f64 {
        let p: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        if p <= 0.0 {
            return 0.0;
        }
        let s = p.sqrt();
        let psi: Vec<Complex64> = w.iter().map(|z| z / s).collect();
        p * self.value(&psi)
    }

    fn weighted_value_grad(&self, w: &[Complex64], grad: &mut [Complex64]) -> f64 {
        const H: f64 = 1e-7;
        let mut probe = w.to_vec();
        for j in 0..w.len() {
            let mut partial = [0.0; 2];
            for (axis, unit) in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]
                .into_iter()
                .enumerate()
            {
                probe[j] = w[j] + unit * H;
                let up = self.weighted_value(&probe);
                probe[j] = w[j] - unit * H;
                let down = self.weighted_value(&probe);
                probe[j] = w[j];
                partial[axis] = (up - down) / (2.0 * H);
            }
            grad[j] = Complex64::new(partial[0], partial[1]) * 0.5;
        }
        self.weighted_value(w)
    }
}

/// l1-norm coherence on pure states.
#[derive(Debug, Clone, Copy, Default)]
pub struct L1Coherence;

impl PureStateFunctional for L1Coherence {
    fn name(&self) -> &str {
        "l1"
    }

    fn value(&self, psi: &[Complex64]) -> f64 {
        let s: f64 = psi.iter().map(|z| z.norm()).sum();
        let q: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        (s * s - q).max(0.0)
    }

    fn weighted_value(&self, w: &[Complex64]) -> f64 {
        // homogeneous of degree 2
        self.value(w)
    }

    fn weighted_value_grad(&self, w: &[Complex64], grad: &mut [Complex64]) -> f64 {
        let s: f64 = w.iter().map(|z| z.norm()).sum();
        for (g, z) in grad.iter_mut().zip(w) {
            let a = z.norm();
            *g = if a > 0.0 { z * (s / a) - z } else { Complex64::new(0.0, 0.0) };
        }
        self.value(w)
    }
}

/// Relative entropy coherence on pure states: the entropy of `|ψ_j|²`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RelativeEntropyCoherence;

impl PureStateFunctional for RelativeEntropyCoherence {
    fn name(&self) -> &str {
        "rel-entropy"
    }

    fn value(&self, psi: &[Complex64]) -> f64 {
        let p: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
        shannon_entropy(&p)
    }

    fn weighted_value_grad(&self, w: &[Complex64], grad: &mut [Complex64]) -> f64 {
        let p: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        if p <= 0.0 {
            grad.iter_mut().for_each(|g| *g = Complex64::new(0.0, 0.0));
            return 0.0;
        }
        let mut value = 0.0;
        for (g, z) in grad.iter_mut().zip(w) {
            let q = z.norm_sqr() / p;
            if q > ENTROPY_CUTOFF {
                let l = q.log2();
                value -= z.norm_sqr() * l;
                *g = -z * l;
            } else {
                *g = Complex64::new(0.0, 0.0);
            }
        }
        value
    }
}

/// A functional of the basis populations `|⟨j|ψ⟩|²` alone.
///
/// For a concave, permutation-symmetric `f` vanishing on basis states the
/// convex roof of this functional is itself a coherence measure.
pub struct PopulationFunctional<F> {
    name: String,
    f: F,
}

impl<F> PopulationFunctional<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        Self {
            name: name.into(),
            f,
        }
    }
}

impl<F> PureStateFunctional for PopulationFunctional<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn value(&self, psi: &[Complex64]) -> f64 {
        let p: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
        (self.f)(&p)
    }
}

/// Built-in functional selector used by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionalKind {
    L1,
    RelEntropy,
}

impl FunctionalKind {
    pub fn functional(self) -> &'static dyn PureStateFunctional {
        match self {
            FunctionalKind::L1 => &L1Coherence,
            FunctionalKind::RelEntropy => &RelativeEntropyCoherence,
        }
    }

    /// The measure whose pure-state values this functional reproduces.
    pub fn measure(self, rho: &DensityMatrix) -> f64 {
        match self {
            FunctionalKind::L1 => c_l1(rho),
            FunctionalKind::RelEntropy => c_r(rho),
        }
    }
}

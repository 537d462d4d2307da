//! The qutrit decision procedure.
//!
//! Routing, by the first case that applies:
//!
//! 1. a vanishing diagonal entry: its row and column vanish too, so the
//!    state is a qubit in disguise;
//! 2. a vanishing off-diagonal entry: [`split_situation2`](super::split_situation2);
//! 3. all entries nonzero and `θ12 + θ23 - θ13 = 0`: conjugate to an
//!    entrywise-positive matrix and peel;
//! 4. otherwise, after conjugating by `diag(1, e^{iθ12}, e^{iθ13})`, any
//!    optimal decomposition must consist of states supported on two basis
//!    vectors. That happens exactly when some `0 < x1 < ρ11` makes
//!
//!    ```text
//!    ρ̄(x1) = [ ρ11 - x1        0          |ρ13|     ]
//!            [ 0          ρ22 - |ρ12|²/x1  |ρ23|e^{iθ} ]
//!            [ |ρ13|      |ρ23|e^{-iθ}     ρ33       ]
//!    ```
//!
//!    positive semidefinite. Its determinant is `A - B x1 - C/x1` with
//!    `B, C >= 0`, so the best `x1` is `√(C/B)` clamped to the interval where
//!    the 2x2 minors are nonnegative.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::peel::peel_vectors;
use super::qubit::{decompose_block, qubit_decomposition};
use super::split::{first_zero_pair, split_zero_pair};
use super::{
    theorem1_check, Certificate, DecideTolerances, DecisionReport, Situation, Verdict,
    WitnessChecks, RECONSTRUCTION_TOL,
};
use crate::error::{Error, Result};
use crate::matcore::{
    phase_conjugate_hermitian, phase_mismatch, phase_rotate_state, ComplexHermitian, DensityMatrix,
    MinorCertificate,
};
use crate::measures::{c_l1, BlochVector, L1Coherence};
use crate::roof::{ensemble_average, PureEnsemble};

/// Tolerance on `|average l1 - C_l1|` for witnesses.
const WITNESS_VALUE_TOL: f64 = 1e-9;

/// Phase-aligned decomposition of an unnormalized PSD matrix (`d <= 3`) in
/// situations 1-3, as vectors `√p ψ`.
pub(crate) fn decompose_equal(
    m: &ComplexHermitian,
    tol: &DecideTolerances,
    trace: &mut Vec<String>,
) -> Result<Vec<Vec<Complex64>>> {
    match m.dim() {
        1 => {
            let p = m.get(0, 0).re;
            Ok(if p > 0.0 {
                vec![vec![Complex64::new(p.sqrt(), 0.0)]]
            } else {
                vec![]
            })
        }
        2 => decompose_block(m),
        3 => {
            if let Some(j) = (0..3).find(|&j| m.get(j, j).re < tol.zero) {
                let keep: Vec<usize> = (0..3).filter(|&i| i != j).collect();
                trace.push(format!(
                    "S1: diagonal entry {} vanishes; reduce to indices {:?}",
                    j + 1,
                    keep.iter().map(|i| i + 1).collect::<Vec<_>>()
                ));
                let sub = m.submatrix(&keep);
                return Ok(decompose_block(&sub)?
                    .into_iter()
                    .map(|v| {
                        let mut w = vec![Complex64::new(0.0, 0.0); 3];
                        w[keep[0]] = v[0];
                        w[keep[1]] = v[1];
                        w
                    })
                    .collect());
            }
            if let Some((a, b)) = first_zero_pair(m, tol.zero) {
                trace.push(format!(
                    "S2: entry ({}, {}) vanishes; split into blocks through index {}",
                    a + 1,
                    b + 1,
                    3 - a - b + 1
                ));
                return split_zero_pair(m, a, b);
            }
            if phase_mismatch(m).abs() <= tol.phase_align {
                let theta = [0.0, m.phase(0, 1), m.phase(0, 2)];
                trace.push(format!(
                    "S3: phases aligned; conjugate by diag(1, e^i{:.6}, e^i{:.6}) and peel",
                    theta[1], theta[2]
                ));
                let positive = phase_conjugate_hermitian(m, &theta);
                let (vectors, _) = peel_vectors(&positive, tol, trace)?;
                let back = [0.0, -theta[1], -theta[2]];
                return Ok(vectors
                    .into_iter()
                    .map(|v| phase_rotate_state(&v, &back))
                    .collect());
            }
            Err(Error::NotPhaseAligned)
        }
        dim => Err(Error::UnsupportedDimension {
            dim,
            hint: "exact decomposition is available for d <= 3".into(),
        }),
    }
}

/// The x1 feasibility analysis of situation 4.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct S4Analysis {
    /// Phases `(0, θ12, θ13)` of the conjugating unitary.
    pub theta: [f64; 3],
    /// `θ12 + θ23 - θ13`.
    pub gauge_phase: f64,
    /// `det ρ̄(x1) = a - b x1 - c / x1`.
    pub det_a: f64,
    pub det_b: f64,
    pub det_c: f64,
    /// Interval on which the 2x2 minors of `ρ̄` are nonnegative; empty when
    /// `lo > hi`.
    pub lo: f64,
    pub hi: f64,
    pub x1_star: f64,
    pub max_det: f64,
    /// Negative minor at `x1_star`, if any.
    pub failing_minor: Option<MinorCertificate>,
}

impl S4Analysis {
    pub fn interval_nonempty(&self) -> bool {
        self.lo <= self.hi
    }

    /// Signed distance from feasibility: `max_det` on a nonempty interval,
    /// the negative minor otherwise.
    pub fn margin(&self) -> f64 {
        if self.interval_nonempty() {
            self.max_det
        } else {
            self.failing_minor.as_ref().map_or(f64::NEG_INFINITY, |m| m.value)
        }
    }

    pub fn det_at(&self, x1: f64) -> f64 {
        self.det_a - self.det_b * x1 - self.det_c / x1
    }
}

/// Runs the x1 analysis on any 3x3 state with nonzero entries.
pub fn s4_analysis(rho: &ComplexHermitian) -> S4Analysis {
    let theta = [0.0, rho.phase(0, 1), rho.phase(0, 2)];
    let (r11, r22, r33) = (rho.get(0, 0).re, rho.get(1, 1).re, rho.get(2, 2).re);
    let b2 = rho.modulus(0, 1).powi(2);
    let c2 = rho.modulus(0, 2).powi(2);
    let d2 = rho.modulus(1, 2).powi(2);

    let det_a = r11 * r22 * r33 + b2 * r33 - r11 * d2 - r22 * c2;
    let det_b = r22 * r33 - d2;
    let det_c = b2 * (r11 * r33 - c2);
    let hi = (r11 * r33 - c2) / r33;
    let lo = if det_b > 0.0 { b2 * r33 / det_b } else { f64::INFINITY };

    let mut out = S4Analysis {
        theta,
        gauge_phase: phase_mismatch(rho),
        det_a,
        det_b,
        det_c,
        lo,
        hi,
        x1_star: 0.0,
        max_det: f64::NEG_INFINITY,
        failing_minor: None,
    };
    if lo <= hi {
        let x = (det_c / det_b).sqrt().clamp(lo, hi);
        out.x1_star = x;
        out.max_det = out.det_at(x);
        if out.max_det < 0.0 {
            out.failing_minor = Some(MinorCertificate {
                indices: vec![0, 1, 2],
                value: out.max_det,
            });
        }
    } else {
        // For x1 <= hi the {2,3} minor is at most its value at hi; for
        // x1 > hi the {1,3} minor is negative.
        let x = hi.max(f64::MIN_POSITIVE);
        out.x1_star = x;
        out.max_det = out.det_at(x);
        out.failing_minor = Some(MinorCertificate {
            indices: vec![1, 2],
            value: (r22 - b2 / x) * r33 - d2,
        });
    }
    out
}

/// `ρ̄(x1)` in the conjugated frame.
pub(crate) fn reduced_matrix(m: &ComplexHermitian, x1: f64) -> ComplexHermitian {
    let b2 = m.modulus(0, 1).powi(2);
    let entries = [
        Complex64::new(m.get(0, 0).re - x1, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(m.modulus(0, 2), 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(m.get(1, 1).re - b2 / x1, 0.0),
        m.get(1, 2),
        Complex64::new(m.modulus(0, 2), 0.0),
        m.get(1, 2).conj(),
        Complex64::new(m.get(2, 2).re, 0.0),
    ];
    ComplexHermitian::from_matrix_unchecked(nalgebra::DMatrix::from_row_slice(3, 3, &entries))
}

fn witness_report(
    rho: &ComplexHermitian,
    situation: Situation,
    vectors: Vec<Vec<Complex64>>,
    trace: Vec<String>,
) -> Result<DecisionReport> {
    let witness = PureEnsemble::from_unnormalized(vectors)?;
    let checks = WitnessChecks {
        reconstruction_error: witness.reconstruction_error(rho),
        theorem1: theorem1_check(rho, &witness)?.holds,
        average_c_l1: ensemble_average(&witness, &L1Coherence),
        c_l1: c_l1(rho),
    };
    if checks.reconstruction_error > RECONSTRUCTION_TOL
        || !checks.theorem1
        || (checks.average_c_l1 - checks.c_l1).abs() > WITNESS_VALUE_TOL
    {
        return Err(Error::InvalidEnsemble(format!(
            "witness failed verification: {checks:?}"
        )));
    }
    Ok(DecisionReport {
        verdict: Verdict::Equal,
        situation,
        witness: Some(witness),
        witness_checks: Some(checks),
        certificate: None,
        trace,
    })
}

/// Decides `C̄_l1(ρ) = C_l1(ρ)` for a qutrit state with default tolerances.
pub fn decide_equality_d3(rho: &DensityMatrix) -> Result<DecisionReport> {
    decide_equality_d3_with(rho, &DecideTolerances::default())
}

pub fn decide_equality_d3_with(rho: &DensityMatrix, tol: &DecideTolerances) -> Result<DecisionReport> {
    if rho.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: rho.dim(),
        });
    }
    let m: &ComplexHermitian = rho;
    let mut trace = Vec::new();

    let has_zero_diag = (0..3).any(|j| m.get(j, j).re < tol.zero);
    let has_zero_off = first_zero_pair(m, tol.zero).is_some();
    if has_zero_diag || has_zero_off || phase_mismatch(m).abs() <= tol.phase_align {
        let situation = if has_zero_diag {
            Situation::S1
        } else if has_zero_off {
            Situation::S2
        } else {
            Situation::S3
        };
        let vectors = decompose_equal(m, tol, &mut trace)?;
        return witness_report(m, situation, vectors, trace);
    }

    let a = s4_analysis(m);
    trace.push(format!(
        "S4: θ12 + θ23 - θ13 = {:.6}; conjugate by diag(1, e^i{:.6}, e^i{:.6})",
        a.gauge_phase, a.theta[1], a.theta[2]
    ));
    trace.push(format!(
        "det ρ̄(x1) = {:.6e} - {:.6e}·x1 - {:.6e}/x1 on [{:.6e}, {:.6e}]",
        a.det_a, a.det_b, a.det_c, a.lo, a.hi
    ));
    let margin = a.margin();
    trace.push(format!(
        "x1* = {:.6e}, det ρ̄(x1*) = {:.6e}, margin = {:.6e}",
        a.x1_star, a.max_det, margin
    ));

    if margin > tol.boundary {
        let conj = phase_conjugate_hermitian(m, &a.theta);
        let x1 = a.x1_star;
        let b = conj.modulus(0, 1);
        let first = vec![
            Complex64::new(x1.sqrt(), 0.0),
            Complex64::new(b / x1.sqrt(), 0.0),
            Complex64::new(0.0, 0.0),
        ];
        trace.push(format!("rank-one block on (1, 2) with x1 = {x1:.6e}"));
        let bar = reduced_matrix(&conj, x1);
        let mut vectors = vec![first];
        vectors.extend(decompose_equal(&bar, tol, &mut trace)?);
        let back = [0.0, -a.theta[1], -a.theta[2]];
        let vectors = vectors
            .into_iter()
            .map(|v| phase_rotate_state(&v, &back))
            .collect();
        return witness_report(m, Situation::S4Equal, vectors, trace);
    }

    let (verdict, situation) = if margin < -tol.boundary {
        (Verdict::Strict, Situation::S4Strict)
    } else {
        (Verdict::Boundary, Situation::S4Boundary)
    };
    Ok(DecisionReport {
        verdict,
        situation,
        witness: None,
        witness_checks: None,
        certificate: Some(Certificate {
            x1_star: a.x1_star,
            max_det: a.max_det,
            failing_minor: a.failing_minor,
        }),
        trace,
    })
}

/// Dispatches on dimension: qubits (and `d = 1`) are always EQUAL, qutrits go
/// through [`decide_equality_d3_with`].
pub fn decide_equality(rho: &DensityMatrix, tol: &DecideTolerances) -> Result<DecisionReport> {
    match rho.dim() {
        1 => witness_report(
            rho,
            Situation::Qubit,
            vec![vec![Complex64::new(1.0, 0.0)]],
            vec!["d = 1: pure".into()],
        ),
        2 => {
            let b = BlochVector::from_density(rho)?;
            let e = qubit_decomposition(&b)?;
            let vectors = e
                .pieces()
                .iter()
                .map(|p| p.amplitudes.iter().map(|a| a * p.weight.sqrt()).collect())
                .collect();
            witness_report(
                rho,
                Situation::Qubit,
                vectors,
                vec![format!("d = 2: Bloch decomposition at ({:.6}, {:.6}, {:.6})", b.x, b.y, b.z)],
            )
        }
        3 => decide_equality_d3_with(rho, tol),
        dim => Err(Error::UnsupportedDimension {
            dim,
            hint: "only d <= 3 is decided exactly; use the roof estimator for an upper bound".into(),
        }),
    }
}

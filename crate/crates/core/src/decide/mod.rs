//! Exact decision of `C̄_l1(ρ) = C_l1(ρ)`.
//!
//! The l1 roof equals the l1 coherence exactly when some decomposition of
//! `ρ` has every cross term `⟨j|ψ_l⟩⟨ψ_l|k⟩` in phase with `ρ_jk`
//! ([`theorem1_check`]). For qubits such a decomposition always exists
//! ([`qubit_decomposition`]). For qutrits the answer depends on which
//! entries vanish and on the gauge-invariant phase `θ12 + θ23 - θ13`; see
//! [`decide_equality_d3`].

mod d3;
mod peel;
mod qubit;
mod split;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matcore::{wrap_phase, ComplexHermitian, MinorCertificate, ZERO_TOL};
use crate::roof::PureEnsemble;

pub use d3::{decide_equality, decide_equality_d3, decide_equality_d3_with, s4_analysis, S4Analysis};
pub use peel::{peel_positive, peel_positive_traced, PeelOutcome, MAX_PEELS};
pub use qubit::{qubit_decomposition, qubit_pieces, QubitBranch, QubitConstruction, QubitPiece};
pub use split::split_situation2;

/// Cross terms smaller than this impose no phase constraint.
pub const CROSS_TERM_TOL: f64 = 1e-12;
/// Allowed phase error of a cross term.
pub const THEOREM1_PHASE_TOL: f64 = 1e-9;
/// Reconstruction tolerance for witness ensembles.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    /// `C̄_l1(ρ) = C_l1(ρ)`, with a witness decomposition.
    Equal,
    /// `C̄_l1(ρ) > C_l1(ρ)`, with an infeasibility certificate.
    Strict,
    /// The x1 analysis lands within tolerance of the feasibility boundary.
    Boundary,
}

impl Verdict {
    /// Process exit code used by the CLI.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Equal => 0,
            Verdict::Strict => 3,
            Verdict::Boundary => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Equal => "EQUAL",
            Verdict::Strict => "STRICT",
            Verdict::Boundary => "BOUNDARY",
        }
    }
}

/// Case taxonomy for qutrit states (plus the qubit route).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Situation {
    /// `d <= 2`.
    #[serde(rename = "qubit")]
    Qubit,
    /// Some diagonal entry vanishes.
    S1,
    /// All diagonal entries positive, some off-diagonal entry vanishes.
    S2,
    /// All entries nonzero and `θ23 = θ13 - θ12`.
    S3,
    #[serde(rename = "S4-equal")]
    S4Equal,
    #[serde(rename = "S4-strict")]
    S4Strict,
    #[serde(rename = "S4-boundary")]
    S4Boundary,
}

impl Situation {
    pub fn as_str(self) -> &'static str {
        match self {
            Situation::Qubit => "qubit",
            Situation::S1 => "S1",
            Situation::S2 => "S2",
            Situation::S3 => "S3",
            Situation::S4Equal => "S4-equal",
            Situation::S4Strict => "S4-strict",
            Situation::S4Boundary => "S4-boundary",
        }
    }
}

/// Why no phase-aligned decomposition exists (or where the analysis sat on
/// the boundary).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// The `x1` at which `det ρ̄` was maximized (or the interval endpoint
    /// used for an empty interval).
    pub x1_star: f64,
    /// `det ρ̄(x1_star)`.
    pub max_det: f64,
    /// A principal minor of `ρ̄` that stays negative.
    pub failing_minor: Option<MinorCertificate>,
}

/// Numbers backing an EQUAL verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessChecks {
    pub reconstruction_error: f64,
    pub theorem1: bool,
    pub average_c_l1: f64,
    pub c_l1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub verdict: Verdict,
    pub situation: Situation,
    pub witness: Option<PureEnsemble>,
    pub witness_checks: Option<WitnessChecks>,
    pub certificate: Option<Certificate>,
    /// Reduction steps, in order.
    pub trace: Vec<String>,
}

/// Thresholds used by the decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecideTolerances {
    /// Entries with smaller modulus are zero for routing.
    pub zero: f64,
    /// `|max det ρ̄|` at or below this is BOUNDARY.
    pub boundary: f64,
    /// Tolerance on `θ23 - (θ13 - θ12)`.
    pub phase_align: f64,
}

impl Default for DecideTolerances {
    fn default() -> Self {
        Self {
            zero: ZERO_TOL,
            boundary: 1e-12,
            phase_align: crate::matcore::PHASE_ALIGN_TOL,
        }
    }
}

/// The first cross term whose phase disagrees with `ρ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseViolation {
    pub member: usize,
    pub row: usize,
    pub col: usize,
    pub phase_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub holds: bool,
    pub violation: Option<PhaseViolation>,
}

/// Checks that every cross term `⟨j|ψ_l⟩⟨ψ_l|k⟩` of the ensemble has the
/// phase `θ_jk` of `ρ_jk`.
pub fn theorem1_check(rho: &ComplexHermitian, e: &PureEnsemble) -> Result<Theorem1Report> {
    e.check_reconstructs(rho, RECONSTRUCTION_TOL)?;
    let d = rho.dim();
    for (l, piece) in e.pieces().iter().enumerate() {
        let psi = &piece.amplitudes;
        for j in 0..d {
            for k in 0..d {
                if j == k || rho.modulus(j, k) < ZERO_TOL {
                    continue;
                }
                let cross: Complex64 = psi[j] * psi[k].conj();
                if cross.norm() <= CROSS_TERM_TOL {
                    continue;
                }
                let err = wrap_phase(cross.arg() - rho.phase(j, k));
                if err.abs() > THEOREM1_PHASE_TOL {
                    return Ok(Theorem1Report {
                        holds: false,
                        violation: Some(PhaseViolation {
                            member: l,
                            row: j,
                            col: k,
                            phase_error: err,
                        }),
                    });
                }
            }
        }
    }
    Ok(Theorem1Report {
        holds: true,
        violation: None,
    })
}

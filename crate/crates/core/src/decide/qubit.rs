//! Explicit optimal decompositions for qubits.
//!
//! A qubit state with Bloch vector `(x, y, z)` is split into pure states whose
//! Bloch vectors keep the transverse direction of `(x, y)`. Every cross term
//! then carries the phase of `ρ_12`, so the l1 coherence is attained.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matcore::{ComplexHermitian, DENSITY_TOL};
use crate::measures::BlochVector;
use crate::roof::PureEnsemble;

/// Transverse lengths below this count as an axis state.
const AXIS_TOL: f64 = 1e-15;

/// One pure state of a qubit construction: weight, unit Bloch direction and
/// the factor `μ` with `(n_x, n_y) = μ (x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitPiece {
    pub weight: f64,
    pub direction: BlochVector,
    pub scale: f64,
}

impl QubitPiece {
    /// `p n⃗` as a plain triple.
    pub fn weighted_direction(&self) -> [f64; 3] {
        [
            self.weight * self.direction.x,
            self.weight * self.direction.y,
            self.weight * self.direction.z,
        ]
    }

    pub fn state(&self) -> [Complex64; 2] {
        self.direction.to_pure_state()
    }
}

/// Which construction produced the pieces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QubitBranch {
    Pure,
    Axis,
    /// `√(x²+y²) + |z| ≤ 1`: one transverse piece and two on the z axis.
    Inner { s: f64 },
    /// `√(x²+y²) + |z| > 1`: two pieces in the plane through `ẑ` and `(x, y)`.
    Outer { s: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitConstruction {
    pub branch: QubitBranch,
    pub pieces: Vec<QubitPiece>,
}

fn unit(x: f64, y: f64, z: f64) -> BlochVector {
    let r = (x * x + y * y + z * z).sqrt();
    BlochVector {
        x: x / r,
        y: y / r,
        z: z / r,
    }
}

/// The phase-aligned pieces for Bloch vector `b`.
pub fn qubit_pieces(b: &BlochVector) -> Result<QubitConstruction> {
    let b = BlochVector::new(b.x, b.y, b.z)?;
    let r = b.r();
    let perp = b.transverse();
    let z = b.z;

    if r >= 1.0 - DENSITY_TOL {
        let scale = if perp > AXIS_TOL { 1.0 / r } else { 0.0 };
        return Ok(QubitConstruction {
            branch: QubitBranch::Pure,
            pieces: vec![QubitPiece {
                weight: 1.0,
                direction: unit(b.x, b.y, b.z),
                scale,
            }],
        });
    }

    let up = BlochVector { x: 0.0, y: 0.0, z: 1.0 };
    let down = BlochVector { x: 0.0, y: 0.0, z: -1.0 };
    let axis_piece = |weight: f64, dir: BlochVector| QubitPiece {
        weight,
        direction: dir,
        scale: 0.0,
    };

    let construction = if perp <= AXIS_TOL {
        QubitConstruction {
            branch: QubitBranch::Axis,
            pieces: vec![axis_piece((1.0 + z) / 2.0, up), axis_piece((1.0 - z) / 2.0, down)],
        }
    } else if perp + z.abs() <= 1.0 {
        let (along, against) = if z >= 0.0 { (up, down) } else { (down, up) };
        // s = ½((1-√(x²+y²))/|z| - 1); the weights below avoid dividing by |z|.
        let s = if z != 0.0 {
            0.5 * ((1.0 - perp) / z.abs() - 1.0)
        } else {
            f64::INFINITY
        };
        QubitConstruction {
            branch: QubitBranch::Inner { s },
            pieces: vec![
                QubitPiece {
                    weight: perp,
                    direction: unit(b.x, b.y, 0.0),
                    scale: 1.0 / perp,
                },
                axis_piece((1.0 - perp - z.abs()) / 2.0, against),
                axis_piece((1.0 - perp + z.abs()) / 2.0, along),
            ],
        }
    } else {
        let s = (1.0 - r * r) / (2.0 * perp * (1.0 - perp));
        let (vx, vy) = ((1.0 - s) * b.x, (1.0 - s) * b.y);
        let p2 = (vx * vx + vy * vy + z * z).sqrt();
        QubitConstruction {
            branch: QubitBranch::Outer { s },
            pieces: vec![
                QubitPiece {
                    weight: s * perp,
                    direction: unit(b.x, b.y, 0.0),
                    scale: 1.0 / perp,
                },
                QubitPiece {
                    weight: p2,
                    direction: unit(vx, vy, z),
                    scale: (1.0 - s) / p2,
                },
            ],
        }
    };

    Ok(QubitConstruction {
        branch: construction.branch,
        pieces: construction
            .pieces
            .into_iter()
            .filter(|p| p.weight > 0.0)
            .collect(),
    })
}

/// Optimal l1 decomposition of the qubit state with Bloch vector `b`.
pub fn qubit_decomposition(b: &BlochVector) -> Result<PureEnsemble> {
    let construction = qubit_pieces(b)?;
    PureEnsemble::from_unnormalized(construction.pieces.iter().map(|p| {
        let s = p.weight.sqrt();
        p.state().iter().map(|a| a * s).collect::<Vec<_>>()
    }))
}

/// Decomposes an unnormalized 2x2 PSD block into vectors `√p ψ`.
pub(crate) fn decompose_block(m: &ComplexHermitian) -> Result<Vec<Vec<Complex64>>> {
    debug_assert_eq!(m.dim(), 2);
    let trace = m.trace();
    if trace <= 0.0 {
        return Ok(vec![]);
    }
    let off = m.get(0, 1) / trace;
    let mut b = BlochVector {
        x: 2.0 * off.re,
        y: -2.0 * off.im,
        z: (m.get(0, 0).re - m.get(1, 1).re) / trace,
    };
    // roundoff can push rank-1 blocks just outside the ball
    let r = b.r();
    if r > 1.0 {
        b = BlochVector {
            x: b.x / r,
            y: b.y / r,
            z: b.z / r,
        };
    }
    let construction = qubit_pieces(&b)?;
    Ok(construction
        .pieces
        .iter()
        .map(|p| {
            let s = (p.weight * trace).sqrt();
            p.state().iter().map(|a| a * s).collect()
        })
        .collect())
}

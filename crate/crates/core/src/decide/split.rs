//! Qutrit states with a vanishing off-diagonal pair.
//!
//! With `ρ_ab = 0` and `m` the remaining index, `ρ` is the sum of a rank-one
//! block on `{a, m}` that absorbs all of `ρ_aa`, and a block on `{b, m}`
//! whose determinant is `det ρ / ρ_aa >= 0`. Both blocks are qubits, so both
//! have phase-aligned decompositions.

use num_complex::Complex64;

use super::qubit::decompose_block;
use crate::error::{Error, Result};
use crate::matcore::{ComplexHermitian, DensityMatrix, ZERO_TOL};
use crate::roof::PureEnsemble;

/// Slack on the second block's determinant before the input is rejected.
const BLOCK_PSD_TOL: f64 = 1e-10;

/// Splits an unnormalized 3x3 PSD matrix with `m[a][b] = 0` (`a < b`) into
/// vectors `√p ψ`.
pub(crate) fn split_zero_pair(
    m: &ComplexHermitian,
    a: usize,
    b: usize,
) -> Result<Vec<Vec<Complex64>>> {
    debug_assert_eq!(m.dim(), 3);
    let mid = 3 - a - b;
    let m_aa = m.get(a, a).re;
    if !(m_aa > 0.0) {
        return Err(Error::InvalidOption(format!(
            "diagonal entry {a} must be positive to split"
        )));
    }
    let m_am = m.get(a, mid);

    // Rank-one block on {a, mid}.
    let mut first = vec![Complex64::new(0.0, 0.0); 3];
    first[a] = Complex64::new(m_aa.sqrt(), 0.0);
    first[mid] = m_am.conj() / m_aa.sqrt();

    // Remainder on {b, mid}, in ascending index order.
    let reduced_mid = m.get(mid, mid).re - m_am.norm_sqr() / m_aa;
    let (lo, hi) = (b.min(mid), b.max(mid));
    let diag = |i: usize| {
        if i == mid {
            reduced_mid
        } else {
            m.get(i, i).re
        }
    };
    let (d_lo, d_hi) = (diag(lo), diag(hi));
    let off = m.get(lo, hi);
    let det = d_lo * d_hi - off.norm_sqr();
    if d_lo < -BLOCK_PSD_TOL || d_hi < -BLOCK_PSD_TOL || det < -BLOCK_PSD_TOL {
        return Err(Error::NotPsd {
            min_eigenvalue: det.min(d_lo).min(d_hi),
        });
    }
    let block = ComplexHermitian::from_matrix_unchecked(nalgebra::DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(d_lo.max(0.0), 0.0),
            off,
            off.conj(),
            Complex64::new(d_hi.max(0.0), 0.0),
        ],
    ));

    let mut out = vec![first];
    for v in decompose_block(&block)? {
        let mut w = vec![Complex64::new(0.0, 0.0); 3];
        w[lo] = v[0];
        w[hi] = v[1];
        out.push(w);
    }
    Ok(out)
}

/// First off-diagonal pair `(a, b)`, `a < b`, in row-major order with
/// modulus below `zero`.
pub(crate) fn first_zero_pair(m: &ComplexHermitian, zero: f64) -> Option<(usize, usize)> {
    [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .find(|&(a, b)| m.modulus(a, b) < zero)
}

/// Phase-aligned decomposition of a qutrit state with a vanishing
/// off-diagonal entry and positive diagonal.
pub fn split_situation2(rho: &DensityMatrix) -> Result<PureEnsemble> {
    if rho.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: rho.dim(),
        });
    }
    let (a, b) = first_zero_pair(rho, ZERO_TOL)
        .ok_or_else(|| Error::InvalidOption("no vanishing off-diagonal entry".into()))?;
    if let Some(j) = (0..3).find(|&j| rho.get(j, j).re < ZERO_TOL) {
        return Err(Error::InvalidOption(format!("diagonal entry {j} vanishes")));
    }
    PureEnsemble::from_unnormalized(split_zero_pair(rho, a, b)?)
}

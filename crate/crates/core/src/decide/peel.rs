//! Perron peeling of entrywise-positive qutrit states.
//!
//! While every entry of the residual is positive, subtract `t₀ |χ⟩⟨χ|` with
//! `χ` the Perron vector and `t₀` as large as possible: either the top
//! eigenvalue (the residual loses rank) or the first `t` at which an entry of
//! the residual hits zero. A residual with a zero entry is finished by the
//! zero-entry routes. All peeled vectors are entrywise positive, so every
//! cross term is real and nonnegative.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::d3::decompose_equal;
use super::DecideTolerances;
use crate::error::{Error, Result};
use crate::matcore::{is_psd_minors, perron_vector, ComplexHermitian, DensityMatrix, ZERO_TOL};
use crate::roof::PureEnsemble;

/// Peel cap: each peel zeroes an entry or drops the rank.
pub const MAX_PEELS: usize = 12;

/// Negative entries within this of zero are clamped after a peel.
const CLAMP_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct PeelOutcome {
    pub ensemble: PureEnsemble,
    /// Number of Perron subtractions performed.
    pub peels: usize,
}

pub(crate) fn peel_vectors(
    m: &ComplexHermitian,
    tol: &DecideTolerances,
    trace: &mut Vec<String>,
) -> Result<(Vec<Vec<Complex64>>, usize)> {
    let d = m.dim();
    let scale = m.trace();
    let mut res: DMatrix<f64> = DMatrix::from_fn(d, d, |j, k| m.get(j, k).re);
    let mut out = Vec::new();
    for peel in 0..=MAX_PEELS {
        let tr: f64 = (0..d).map(|j| res[(j, j)]).sum();
        if tr <= 1e-14 * scale {
            return Ok((out, peel));
        }
        let current = ComplexHermitian::from_matrix_unchecked(res.map(|x| Complex64::new(x, 0.0)));
        if res.iter().any(|&x| x < tol.zero) {
            trace.push(format!("peel {peel}: residual has a zero entry, finishing by zero-entry routes"));
            out.extend(decompose_equal(&current, tol, trace)?);
            return Ok((out, peel));
        }
        if peel == MAX_PEELS {
            break;
        }
        let pair = perron_vector(&current)?;
        let chi = &pair.vector;
        let mut t_entry = f64::INFINITY;
        let mut hit = (0, 0);
        for j in 0..d {
            for k in j..d {
                let t = res[(j, k)] / (chi[j] * chi[k]);
                if t < t_entry {
                    t_entry = t;
                    hit = (j, k);
                }
            }
        }
        let t0 = pair.value.min(t_entry);
        for j in 0..d {
            for k in 0..d {
                res[(j, k)] -= t0 * chi[j] * chi[k];
            }
        }
        if t_entry < pair.value {
            res[(hit.0, hit.1)] = 0.0;
            res[(hit.1, hit.0)] = 0.0;
            trace.push(format!(
                "peel {peel}: t0 = {t0:.9} zeroes entry ({}, {})",
                hit.0 + 1,
                hit.1 + 1
            ));
        } else {
            trace.push(format!("peel {peel}: t0 = λ_max = {t0:.9}"));
        }
        for x in res.iter_mut() {
            if *x < 0.0 {
                if *x < -CLAMP_TOL * scale.max(1.0) {
                    return Err(Error::NegativeEntry { row: hit.0, col: hit.1 });
                }
                *x = 0.0;
            }
        }
        let check = ComplexHermitian::from_matrix_unchecked(res.map(|x| Complex64::new(x, 0.0)));
        if let Some(c) = is_psd_minors(&check).failing {
            return Err(Error::NotPsd {
                min_eigenvalue: c.value,
            });
        }
        out.push(chi.iter().map(|&x| Complex64::new(x * t0.sqrt(), 0.0)).collect());
    }
    Err(Error::PeelLimit(MAX_PEELS))
}

/// Peels an entrywise-nonnegative qutrit state, returning the decomposition
/// and the number of peels.
pub fn peel_positive_traced(rho: &DensityMatrix) -> Result<PeelOutcome> {
    let d = rho.dim();
    for j in 0..d {
        for k in 0..d {
            let z = rho.get(j, k);
            if z.im.abs() > ZERO_TOL || z.re < -ZERO_TOL {
                return Err(Error::NegativeEntry { row: j, col: k });
            }
        }
    }
    let mut trace = Vec::new();
    let (vectors, peels) = peel_vectors(rho, &DecideTolerances::default(), &mut trace)?;
    Ok(PeelOutcome {
        ensemble: PureEnsemble::from_unnormalized(vectors)?,
        peels,
    })
}

pub fn peel_positive(rho: &DensityMatrix) -> Result<PureEnsemble> {
    peel_positive_traced(rho).map(|o| o.ensemble)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::theorem1_check;
    use crate::measures::{c_l1, L1Coherence};
    use crate::random::{random_density_hs, rng_from_seed};
    use crate::roof::ensemble_average;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rank_one_positive() {
        let chi = [0.5f64, 0.5, 0.5f64.sqrt()];
        let psi: Vec<Complex64> = chi.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let rho = DensityMatrix::pure(&psi).unwrap();
        let out = peel_positive_traced(&rho).unwrap();
        assert_eq!(out.peels, 1);
        assert_eq!(out.ensemble.len(), 1);
        assert!(out.ensemble.reconstruction_error(&rho) < 1e-12);
    }

    #[test]
    fn uniform_matrix_single_peel() {
        let rho = DensityMatrix::from_real(3, &[1.0 / 3.0; 9]).unwrap();
        let out = peel_positive_traced(&rho).unwrap();
        assert_eq!(out.peels, 1);
        let p = &out.ensemble.pieces()[0];
        assert_abs_diff_eq!(p.weight, 1.0, epsilon = 1e-12);
        for a in &p.amplitudes {
            assert_abs_diff_eq!(a.re, 1.0 / 3f64.sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn aligned_variant_of_reference_qutrit() {
        let rho = DensityMatrix::from_real(3, &[0.1, 0.01, 0.17, 0.01, 0.1, 0.2, 0.17, 0.2, 0.8]).unwrap();
        let e = peel_positive(&rho).unwrap();
        assert!(e.reconstruction_error(&rho) < 1e-10);
        assert!(theorem1_check(&rho, &e).unwrap().holds);
        assert_abs_diff_eq!(ensemble_average(&e, &L1Coherence), 0.76, epsilon = 1e-9);
    }

    #[test]
    fn random_positive_inputs_terminate() {
        let mut rng = rng_from_seed(99);
        let mut done = 0;
        while done < 200 {
            let r = random_density_hs(3, &mut rng);
            let m: Vec<f64> = r.to_row_major().iter().map(|z| z.norm()).collect();
            let Ok(rho) = DensityMatrix::from_real(3, &m) else {
                continue;
            };
            let out = peel_positive_traced(&rho).unwrap();
            assert!(out.peels <= MAX_PEELS);
            assert!(out.ensemble.reconstruction_error(&rho) < 1e-8);
            assert!(theorem1_check(&rho, &out.ensemble).unwrap().holds);
            assert_abs_diff_eq!(
                ensemble_average(&out.ensemble, &L1Coherence),
                c_l1(&rho),
                epsilon = 1e-9
            );
            done += 1;
        }
    }

    #[test]
    fn rejects_negative_entries() {
        let rho = DensityMatrix::from_real(2, &[0.5, -0.1, -0.1, 0.5]).unwrap();
        assert!(matches!(peel_positive(&rho), Err(Error::NegativeEntry { .. })));
    }
}

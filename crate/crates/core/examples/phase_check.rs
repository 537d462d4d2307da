//! Phase alignment of decompositions: the eigen-decomposition of a state
//! generally misaligns cross-term phases, the zero-entry split does not.

use coherence_roof::decide::{split_situation2, theorem1_check};
use coherence_roof::matcore::{eigh, ComplexHermitian};
use coherence_roof::measures::{c_l1, L1Coherence};
use coherence_roof::roof::{ensemble_average, EnsemblePiece, PureEnsemble};
use coherence_roof::DensityMatrix;
use num_complex::Complex64;

fn main() -> coherence_roof::Result<()> {
    let m = ComplexHermitian::from_upper(
        3,
        &[
            Complex64::new(0.3, 0.0),
            Complex64::from_polar(0.1, 1.2),
            Complex64::from_polar(0.12, -2.0),
            Complex64::new(0.3, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.4, 0.0),
        ],
    )?;
    let rho = DensityMatrix::new(m)?;
    println!("C_l1 = {:.9}", c_l1(&rho));

    let s = eigh(&rho);
    let spectral = PureEnsemble::new(
        s.eigenvalues
            .iter()
            .zip(&s.eigenvectors)
            .map(|(&weight, v)| EnsemblePiece { weight, amplitudes: v.clone() })
            .collect(),
    )?;
    let report = theorem1_check(&rho, &spectral)?;
    println!(
        "eigenbasis: average {:.9}, aligned {}, first violation {:?}",
        ensemble_average(&spectral, &L1Coherence),
        report.holds,
        report.violation
    );

    let split = split_situation2(&rho)?;
    println!(
        "zero-entry split: average {:.9}, aligned {}, {} pure states",
        ensemble_average(&split, &L1Coherence),
        theorem1_check(&rho, &split)?.holds,
        split.len()
    );
    Ok(())
}

//! l1 and relative entropy coherence of a qutrit and a qubit.

use coherence_roof::measures::{c_l1, c_r, qubit_cr, qubit_cr_roof};
use coherence_roof::{BlochVector, DensityMatrix};
use num_complex::Complex64;

fn main() -> coherence_roof::Result<()> {
    let c = |re, im| Complex64::new(re, im);
    let rho = DensityMatrix::from_row_major(
        3,
        &[
            c(0.1, 0.0), c(0.01, 0.0), c(0.17, 0.0),
            c(0.01, 0.0), c(0.1, 0.0), c(0.0, 0.2),
            c(0.17, 0.0), c(0.0, -0.2), c(0.8, 0.0),
        ],
    )?;
    println!("qutrit: C_l1 = {:.6}, C_r = {:.6}", c_l1(&rho), c_r(&rho));

    let b = BlochVector::new(std::f64::consts::FRAC_1_SQRT_2, 0.0, 0.0)?;
    println!(
        "qubit {b:?}: C_r = {:.6}, roof of C_r = {:.6}, C_r via matrix = {:.6}",
        qubit_cr(&b)?,
        qubit_cr_roof(&b)?,
        c_r(&b.to_density())
    );
    Ok(())
}

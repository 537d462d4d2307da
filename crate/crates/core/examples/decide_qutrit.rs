//! The qutrit decision on a one-parameter family: equality holds for
//! |ρ13| = 0.17 and fails for |ρ13| = 0.19.

use coherence_roof::decide::{decide_equality_d3, s4_analysis};
use coherence_roof::DensityMatrix;
use num_complex::Complex64;

fn state(rho13: f64) -> coherence_roof::Result<DensityMatrix> {
    let c = |re, im| Complex64::new(re, im);
    DensityMatrix::from_row_major(
        3,
        &[
            c(0.1, 0.0), c(0.01, 0.0), c(rho13, 0.0),
            c(0.01, 0.0), c(0.1, 0.0), c(0.0, 0.2),
            c(rho13, 0.0), c(0.0, -0.2), c(0.8, 0.0),
        ],
    )
}

fn main() -> coherence_roof::Result<()> {
    for rho13 in [0.15, 0.17, 0.18, 0.19] {
        let rho = state(rho13)?;
        let a = s4_analysis(&rho);
        let r = decide_equality_d3(&rho)?;
        println!(
            "|ρ13| = {rho13}: {} ({}), x1* = {:.6}, max det = {:+.4e}",
            r.verdict.as_str(),
            r.situation.as_str(),
            a.x1_star,
            a.max_det
        );
        if let Some(w) = &r.witness {
            for p in w.pieces() {
                let amps: Vec<String> = p.amplitudes.iter().map(|z| format!("{:.4}", z)).collect();
                println!("    p = {:.6}  ψ = ({})", p.weight, amps.join(", "));
            }
        }
    }
    Ok(())
}

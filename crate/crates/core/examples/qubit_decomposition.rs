//! Phase-aligned decompositions of qubit states, one per branch.

use coherence_roof::decide::{qubit_decomposition, qubit_pieces, theorem1_check};
use coherence_roof::measures::{c_l1, L1Coherence};
use coherence_roof::roof::ensemble_average;
use coherence_roof::BlochVector;

fn main() -> coherence_roof::Result<()> {
    for (x, y, z) in [(0.0, 0.0, 0.3), (0.5, 0.0, 0.2), (0.6, 0.0, 0.5), (-0.2, 0.45, -0.3)] {
        let b = BlochVector::new(x, y, z)?;
        let c = qubit_pieces(&b)?;
        println!("({x}, {y}, {z}): {:?}", c.branch);
        for p in &c.pieces {
            println!("  p = {:.4}  n = ({:.4}, {:.4}, {:.4})", p.weight, p.direction.x, p.direction.y, p.direction.z);
        }
        let rho = b.to_density();
        let e = qubit_decomposition(&b)?;
        println!(
            "  phases aligned: {}, average C_l1 = {:.12}, C_l1 = {:.12}",
            theorem1_check(&rho, &e)?.holds,
            ensemble_average(&e, &L1Coherence),
            c_l1(&rho)
        );
    }
    Ok(())
}

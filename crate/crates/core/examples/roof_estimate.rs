//! Upper bounds on convex roofs from the isometry optimizer.

use coherence_roof::measures::{c_l1, qubit_cr_roof, L1Coherence, RelativeEntropyCoherence};
use coherence_roof::random::{random_density_hs, rng_from_seed};
use coherence_roof::roof::roof_upper;
use coherence_roof::{BlochVector, RoofOptions};

fn main() -> coherence_roof::Result<()> {
    let opts = RoofOptions { restarts: 6, seed: 11, ..RoofOptions::default() };

    let b = BlochVector::new(0.4, -0.3, 0.5)?;
    let r = roof_upper(&b.to_density(), &RelativeEntropyCoherence, &opts)?;
    println!(
        "qubit C_r roof: optimizer {:.8}, closed form {:.8}",
        r.value,
        qubit_cr_roof(&b)?
    );

    let rho = random_density_hs(3, &mut rng_from_seed(5));
    let r = roof_upper(&rho, &L1Coherence, &opts)?;
    println!(
        "qutrit l1 roof <= {:.8} (C_l1 = {:.8}), {} pure states, converged {:?}",
        r.value,
        c_l1(&rho),
        r.ensemble.len(),
        r.converged
    );
    Ok(())
}

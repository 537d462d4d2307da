mod common;

use coherence_roof::decide::{decide_equality_d3, Verdict};
use coherence_roof::measures::{c_l1, L1Coherence};
use coherence_roof::random::{random_density_hs, rng_from_seed};
use coherence_roof::roof::{roof_refine, roof_upper};
use coherence_roof::RoofOptions;

#[test]
fn refining_an_optimum_does_not_move_it() {
    let rho = random_density_hs(3, &mut rng_from_seed(8));
    let opts = RoofOptions { restarts: 4, seed: 3, ..RoofOptions::default() };
    let first = roof_upper(&rho, &L1Coherence, &opts).unwrap();
    let again = roof_refine(&rho, &L1Coherence, &first.ensemble, &opts).unwrap();
    assert!(again.value <= first.value + 1e-9, "{} -> {}", first.value, again.value);
    assert!(again.ensemble.reconstruction_error(&rho) <= 1e-8);
}

#[test]
fn strict_states_are_never_contradicted() {
    let mut rng = rng_from_seed(31);
    let opts = RoofOptions { ensemble_size: Some(9), restarts: 32, seed: 1, ..RoofOptions::default() };
    let mut seen = 0;
    while seen < 3 {
        let rho = random_density_hs(3, &mut rng);
        if decide_equality_d3(&rho).unwrap().verdict != Verdict::Strict {
            continue;
        }
        seen += 1;
        let r = roof_upper(&rho, &L1Coherence, &opts).unwrap();
        assert!(r.value - c_l1(&rho) >= -1e-8);
    }
    let rho = common::reference_qutrit(0.19);
    let r = roof_upper(&rho, &L1Coherence, &opts).unwrap();
    assert!(r.value - c_l1(&rho) >= 1e-4, "gap {}", r.value - c_l1(&rho));
}

#[test]
fn qubit_roof_meets_l1() {
    let mut rng = rng_from_seed(77);
    let opts = RoofOptions { restarts: 4, ..RoofOptions::default() };
    for _ in 0..20 {
        let rho = random_density_hs(2, &mut rng);
        let r = roof_upper(&rho, &L1Coherence, &opts).unwrap();
        let gap = r.value - c_l1(&rho);
        assert!((-1e-8..=1e-4).contains(&gap), "gap {gap}");
    }
}

#[test]
fn ensemble_smaller_than_rank_is_rejected() {
    let rho = random_density_hs(3, &mut rng_from_seed(2));
    let opts = RoofOptions { ensemble_size: Some(2), ..RoofOptions::default() };
    assert!(matches!(
        roof_upper(&rho, &L1Coherence, &opts),
        Err(coherence_roof::Error::EnsembleTooSmall { size: 2, rank: 3 })
    ));
}

//! The closed-form x1 decision against a brute-force scan of `ρ̄(x1)`.
//!
//! The scan builds `ρ - |w⟩⟨w|` in the original basis, with `w` chosen to
//! clear the (1, 2) entry, and tests positivity through hand-written
//! principal minors. Nothing from the decision module is reused.

mod common;

use coherence_roof::decide::{decide_equality_d3, s4_analysis, Verdict};
use coherence_roof::matcore::phase_mismatch;
use coherence_roof::random::{random_density_hs, rng_from_seed};
use common::{minors3, reduced_original_frame};

const GRID: usize = 100_000;
const STATES: usize = 500;

/// Largest `min(minors)` over the scan and whether any point is PSD.
fn scan(rho: &coherence_roof::DensityMatrix, lo: f64, hi: f64) -> (bool, f64) {
    let mut best = f64::NEG_INFINITY;
    for i in 0..=GRID {
        let x = lo + (hi - lo) * i as f64 / GRID as f64;
        if x <= 0.0 {
            continue;
        }
        let m = minors3(&reduced_original_frame(rho, x));
        let worst = m.iter().cloned().fold(f64::INFINITY, f64::min);
        best = best.max(worst);
    }
    (best >= 0.0, best)
}

#[test]
fn analytic_decision_matches_grid_scan() {
    let mut rng = rng_from_seed(2024);
    let (mut checked, mut equal, mut strict) = (0, 0, 0);
    while checked < STATES {
        let rho = random_density_hs(3, &mut rng);
        if phase_mismatch(&rho).abs() < 1e-6 {
            continue;
        }
        let r = decide_equality_d3(&rho).unwrap();
        if r.verdict == Verdict::Boundary {
            continue;
        }
        checked += 1;
        let r11 = rho.get(0, 0).re;
        let a = s4_analysis(&rho);
        // scan the analytic interval when it is nonempty, all of (0, ρ11) otherwise
        let (lo, hi) = if a.interval_nonempty() { (a.lo, a.hi) } else { (0.0, r11) };
        let (feasible, best) = scan(&rho, lo, hi);
        match r.verdict {
            Verdict::Equal => {
                equal += 1;
                assert!(feasible, "EQUAL but no PSD grid point (best {best:e}, margin {:e})", a.margin());
            }
            Verdict::Strict => {
                strict += 1;
                assert!(!feasible, "STRICT but grid found a PSD point (best {best:e})");
                if a.interval_nonempty() {
                    let (full, _) = scan(&rho, 0.0, r11);
                    assert!(!full, "STRICT but a PSD point exists outside the interval");
                }
            }
            Verdict::Boundary => unreachable!(),
        }
    }
    assert!(equal > 0 && strict > 0, "equal {equal}, strict {strict}");
}

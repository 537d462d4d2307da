//! How often equality holds for Hilbert-Schmidt random qutrits.

use coherence_roof::cli::commands::sample;
use coherence_roof::cli::RunConfig;

fn main() {
    let config = RunConfig::default();
    for seed in [1, 2, 3] {
        let r = sample(2000, 3, seed, &config).expect("qutrit samples always decide");
        let t = &r.tally;
        println!(
            "seed {seed}: EQUAL {:.3}, STRICT {:.3}, BOUNDARY {} ({} rows spot-checked, {} failed)",
            t.equal as f64 / 2000.0,
            t.strict as f64 / 2000.0,
            t.boundary,
            t.validated,
            t.validation_failures
        );
    }
}

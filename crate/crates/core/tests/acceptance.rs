//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the report.

mod common;

use std::time::{Duration, Instant};

use coherence_roof::cli::{figure1_rows, run, MatrixFile};
use coherence_roof::decide::{decide_equality_d3, qubit_decomposition, theorem1_check};
use coherence_roof::matcore::{eigh, is_psd_minors, phase_conjugate, ComplexHermitian};
use coherence_roof::measures::{c_l1, c_r, pure_c_l1, qubit_cr, qubit_cr_roof, L1Coherence, RelativeEntropyCoherence};
use coherence_roof::random::*;
use coherence_roof::roof::{qubit_roof_oracle, roof_upper};
use coherence_roof::{BlochVector, DensityMatrix, RoofOptions};
use common::{c, permute};
use num_complex::Complex64;
use rand::Rng;

struct Outcome {
    id: u32,
    name: &'static str,
    checks: Vec<(String, bool)>,
    elapsed: Duration,
    budget: Duration,
}

impl Outcome {
    fn new(id: u32, name: &'static str, budget: Duration) -> Self {
        Outcome { id, name, checks: Vec::new(), elapsed: Duration::ZERO, budget }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) {
        self.checks.push((what.into(), ok));
    }

    fn pass(&self) -> bool {
        self.elapsed < self.budget && self.checks.iter().all(|(_, ok)| *ok)
    }

    fn line(&self) -> String {
        let failed: Vec<&str> = self.checks.iter().filter(|(_, ok)| !ok).map(|(w, _)| w.as_str()).collect();
        let mut s = format!(
            "[{}] criterion {}: {} ({} checks, {:.3?} of {:?})",
            if self.pass() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checks.len(),
            self.elapsed,
            self.budget
        );
        if self.elapsed >= self.budget {
            s.push_str(" over time budget;");
        }
        for f in failed {
            s.push_str("\n      failed: ");
            s.push_str(f);
        }
        s
    }
}

/// Binary entropy written out directly.
fn h(x: f64) -> f64 {
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    term(x) + term(1.0 - x)
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new(1, "eigenvalue regression on the one-parameter qutrit family", Duration::from_millis(1));
    let cases = [
        (0.17, [0.887506, 0.101004, 0.0114902]),
        (0.19, [0.895659, 0.100911, 0.00342989]),
    ];
    for (rho13, want) in cases {
        let rho = common::reference_qutrit(rho13);
        let t = Instant::now();
        let s = eigh(&rho);
        o.elapsed = o.elapsed.max(t.elapsed());
        for (got, want) in s.eigenvalues.iter().zip(want) {
            o.check(format!("|ρ13| = {rho13}: {got} vs {want}"), (got - want).abs() <= 5e-6);
        }
    }
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new(2, "decide: EQUAL at 0.17, STRICT at 0.19", Duration::from_millis(10));
    let dir = tempfile::tempdir().unwrap();
    for (rho13, code, verdict) in [(0.17, 0, "EQUAL"), (0.19, 3, "STRICT")] {
        let rho = common::reference_qutrit(rho13);
        let path = dir.path().join(format!("rho{rho13}.json"));
        std::fs::write(&path, MatrixFile::from_hermitian(&rho).to_json()).unwrap();
        let t = Instant::now();
        let out = run(["coherence-roof", "decide", path.to_str().unwrap(), "--format", "json"]);
        o.elapsed = o.elapsed.max(t.elapsed());
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        let r = &v["result"];
        o.check(format!("{rho13}: exit code {}", out.code), out.code == code);
        o.check(format!("{rho13}: verdict {}", r["verdict"]), r["verdict"] == verdict);
        if verdict == "STRICT" {
            let max_det = r["certificate"]["max_det"].as_f64().unwrap_or(0.0);
            o.check(format!("max det {max_det:e} <= -3.6e-4"), max_det <= -3.6e-4);
        } else {
            let checks = &r["witness_checks"];
            let err = checks["reconstruction_error"].as_f64().unwrap_or(1.0);
            let avg = checks["average_c_l1"].as_f64().unwrap_or(0.0);
            o.check(format!("reconstruction {err:e}"), err <= 1e-8);
            o.check("phase alignment flag", checks["theorem1"] == true);
            o.check(format!("average coherence {avg}"), (avg - 0.76).abs() <= 1e-9);
            // recheck the serialized witness from scratch
            let w: coherence_roof::PureEnsemble = serde_json::from_value(r["witness"].clone()).unwrap();
            o.check("witness phases recheck", theorem1_check(&rho, &w).map(|t| t.holds).unwrap_or(false));
            o.check("witness reconstructs", w.reconstruction_error(&rho) <= 1e-8);
        }
    }
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new(3, "qubit relative entropy closed forms and surface ordering", Duration::from_secs(1));
    let t = Instant::now();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let b = BlochVector::new(s, 0.0, 0.0).unwrap();
    let want_roof = h((1.0 + s) / 2.0);
    let want_cr = 1.0 - h((1.0 + s) / 2.0);
    let roof = qubit_cr_roof(&b).unwrap();
    let cr = qubit_cr(&b).unwrap();
    o.check(format!("roof {roof} vs {want_roof}"), (roof - want_roof).abs() <= 1e-12);
    o.check(format!("C_r {cr} vs {want_cr}"), (cr - want_cr).abs() <= 1e-12);

    let out = run(["coherence-roof", "figure1"]);
    let mut rows = 0;
    let mut worst = f64::INFINITY;
    for line in out.stdout.lines().skip(1) {
        let diff: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        worst = worst.min(diff);
        rows += 1;
    }
    o.check(format!("{rows} figure rows"), rows == 101 * 102 / 2);
    o.check(format!("min diff {worst:e} >= -1e-12"), worst >= -1e-12);
    let lib_rows = figure1_rows(101);
    o.check("library grid agrees", lib_rows.iter().all(|r| r.diff >= -1e-12));
    o.elapsed = t.elapsed();
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new(4, "qubit decompositions attain the l1 coherence", Duration::from_secs(1));
    let mut rng = rng_from_seed(4);
    let t = Instant::now();
    let (mut bad_rec, mut bad_phase, mut bad_value) = (0, 0, 0);
    for _ in 0..200 {
        let b = random_bloch(&mut rng);
        let rho = b.to_density();
        let e = qubit_decomposition(&b).unwrap();
        if e.reconstruction_error(&rho) > 1e-8 {
            bad_rec += 1;
        }
        if !theorem1_check(&rho, &e).map(|t| t.holds).unwrap_or(false) {
            bad_phase += 1;
        }
        let avg: f64 = e.pieces().iter().map(|p| p.weight * pure_c_l1(&p.amplitudes).unwrap()).sum();
        if (avg - c_l1(&rho)).abs() > 1e-10 {
            bad_value += 1;
        }
    }
    o.elapsed = t.elapsed();
    o.check(format!("{bad_rec} reconstruction failures"), bad_rec == 0);
    o.check(format!("{bad_phase} phase failures"), bad_phase == 0);
    o.check(format!("{bad_value} value mismatches"), bad_value == 0);
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new(5, "roof optimizer soundness for the l1 functional", Duration::from_secs(60));
    let mut rng = rng_from_seed(5);
    let opts = RoofOptions { seed: 5, ..RoofOptions::default() };
    let t = Instant::now();
    let (mut below, mut qubit_gap, mut worst_qubit) = (0, 0, 0.0f64);
    for i in 0..100 {
        let dim = if i % 2 == 0 { 2 } else { 3 };
        let rho = random_density_hs(dim, &mut rng);
        let r = roof_upper(&rho, &L1Coherence, &opts).unwrap();
        let gap = r.value - c_l1(&rho);
        if gap < -1e-8 {
            below += 1;
        }
        if dim == 2 {
            worst_qubit = worst_qubit.max(gap);
            if gap > 1e-4 {
                qubit_gap += 1;
            }
        }
    }
    let strict = common::reference_qutrit(0.19);
    let r = roof_upper(&strict, &L1Coherence, &opts).unwrap();
    let gap = r.value - c_l1(&strict);
    o.elapsed = t.elapsed();
    o.check(format!("{below} values below C_l1 - 1e-8"), below == 0);
    o.check(format!("{qubit_gap} qubit gaps above 1e-4 (largest {worst_qubit:e})"), qubit_gap == 0);
    o.check(format!("gap at |ρ13| = 0.19 is {gap:e}"), gap >= 1e-4);
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new(6, "relative entropy roof: optimizer and brute-force oracle vs closed form", Duration::from_secs(120));
    let mut rng = rng_from_seed(6);
    let opts = RoofOptions { seed: 6, ..RoofOptions::default() };
    let t = Instant::now();
    let (mut worst_opt, mut worst_oracle) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let b = random_bloch(&mut rng);
        let exact = qubit_cr_roof(&b).unwrap();
        let r = roof_upper(&b.to_density(), &RelativeEntropyCoherence, &opts).unwrap();
        let oracle = qubit_roof_oracle(&b, &RelativeEntropyCoherence, 90).unwrap();
        worst_opt = worst_opt.max((r.value - exact).abs());
        worst_oracle = worst_oracle.max((oracle - exact).abs());
    }
    o.elapsed = t.elapsed();
    o.check(format!("optimizer max error {worst_opt:e}"), worst_opt <= 1e-3);
    o.check(format!("oracle max error {worst_oracle:e}"), worst_oracle <= 1e-3);
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new(7, "invariance, additivity, relabeling and PSD-test suites", Duration::from_secs(60));
    let mut rng = rng_from_seed(7);
    let t = Instant::now();

    let (mut phase_fail, mut verdict_fail) = (0, 0);
    for _ in 0..300 {
        let rho = random_density_hs(3, &mut rng);
        let theta = random_phases(3, &mut rng);
        let conj = phase_conjugate(&rho, &theta);
        if (c_l1(&conj) - c_l1(&rho)).abs() > 1e-12 || (c_r(&conj) - c_r(&rho)).abs() > 1e-12 {
            phase_fail += 1;
        }
        if decide_equality_d3(&conj).unwrap().verdict != decide_equality_d3(&rho).unwrap().verdict {
            verdict_fail += 1;
        }
    }
    o.check(format!("{phase_fail} measure changes under phases"), phase_fail == 0);
    o.check(format!("{verdict_fail} verdict changes under phases"), verdict_fail == 0);

    let mut add_fail = 0;
    for _ in 0..300 {
        let a = random_density_hs(2, &mut rng);
        let b = random_density_hs(3, &mut rng);
        let p: f64 = rng.random();
        let mut m = vec![c(0.0, 0.0); 25];
        for j in 0..2 {
            for k in 0..2 {
                m[j * 5 + k] = a.get(j, k) * p;
            }
        }
        for j in 0..3 {
            for k in 0..3 {
                m[(2 + j) * 5 + 2 + k] = b.get(j, k) * (1.0 - p);
            }
        }
        let sum = DensityMatrix::from_row_major(5, &m).unwrap();
        if (c_l1(&sum) - (p * c_l1(&a) + (1.0 - p) * c_l1(&b))).abs() > 1e-12 {
            add_fail += 1;
        }
    }
    o.check(format!("{add_fail} direct-sum additivity failures"), add_fail == 0);

    let mut perm_fail = 0;
    for _ in 0..300 {
        let rho = random_density_hs(3, &mut rng);
        let p = random_permutation(3, &mut rng);
        if decide_equality_d3(&permute(&rho, &p)).unwrap().verdict != decide_equality_d3(&rho).unwrap().verdict {
            perm_fail += 1;
        }
    }
    o.check(format!("{perm_fail} verdict changes under relabeling"), perm_fail == 0);

    let mut psd_fail = 0;
    let mut psd_count = 0;
    for _ in 0..1000 {
        let g = random_hermitian(3, &mut rng);
        let shift: f64 = rng.random_range(-1.0..3.0);
        let m = ComplexHermitian::new(g.matrix() + nalgebra::DMatrix::<Complex64>::identity(3, 3) * c(shift, 0.0)).unwrap();
        let by_eig = eigh(&m).min() >= -1e-10;
        psd_count += by_eig as usize;
        if is_psd_minors(&m).psd != by_eig {
            psd_fail += 1;
        }
    }
    o.check(format!("{psd_fail} minor/eigenvalue disagreements ({psd_count} PSD of 1000)"), psd_fail == 0);
    o.check("both PSD and indefinite cases drawn", psd_count > 0 && psd_count < 1000);
    o.elapsed = t.elapsed();
    o
}

#[test]
fn acceptance() {
    let outcomes = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
    ];
    let mut report = String::new();
    for o in &outcomes {
        report.push_str(&o.line());
        report.push('\n');
    }
    println!("{report}");
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.pass()).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria {failed:?}\n{report}");
}

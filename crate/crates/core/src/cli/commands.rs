//! The subcommands, each producing a serializable result plus text and CSV
//! renderings.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use super::matrix_file::{digest, MatrixFile};
use crate::decide::{decide_equality, decide_equality_d3_with, theorem1_check, DecisionReport, Verdict};
use crate::error::Error;
use crate::matcore::{eigh, phase_conjugate_hermitian, ComplexHermitian, DensityMatrix};
use crate::measures::{c_l1, c_r, qubit_cr, qubit_cr_roof, BlochVector, FunctionalKind, L1Coherence};
use crate::random::{random_density_hs, rng_from_seed};
use crate::roof::{ensemble_average, roof_upper, PureEnsemble};

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Parse(String),
    Validation(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Validation(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Io(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Where the matrix came from.
#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    pub path: String,
    pub sha256: String,
}

/// Shared JSON envelope.
#[derive(Debug, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub command: &'static str,
    pub input: Option<InputEcho>,
    pub config: &'a RunConfig,
    pub options: serde_json::Value,
    pub result: T,
}

pub fn load_matrix(path: &Path, normalize: bool) -> Result<(InputEcho, DensityMatrix), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::Parse("input is not UTF-8".into()))?;
    let file = MatrixFile::parse(&text).map_err(|e| CliError::Parse(e.0))?;
    let rho = file.to_density(normalize)?;
    Ok((
        InputEcho {
            path: path.display().to_string(),
            sha256: digest(&bytes),
        },
        rho,
    ))
}

fn fmt_complex(z: Complex64) -> String {
    if !(z.im < 0.0) {
        format!("{:.6}+{:.6}i", z.re, z.im.abs())
    } else {
        format!("{:.6}-{:.6}i", z.re, -z.im)
    }
}

fn fmt_ensemble(out: &mut String, e: &PureEnsemble) {
    for p in e.pieces() {
        let amps: Vec<String> = p.amplitudes.iter().map(|&z| fmt_complex(z)).collect();
        let _ = writeln!(out, "  p = {:.9}  ψ = ({})", p.weight, amps.join(", "));
    }
}

fn opt_f64(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

// ---------------------------------------------------------------- measure

#[derive(Debug, Clone, Serialize)]
pub struct MeasureResult {
    pub dim: usize,
    pub c_l1: f64,
    pub c_r: f64,
    /// Descending.
    pub eigenvalues: Vec<f64>,
}

pub fn measure(rho: &DensityMatrix) -> MeasureResult {
    MeasureResult {
        dim: rho.dim(),
        c_l1: c_l1(rho),
        c_r: c_r(rho),
        eigenvalues: eigh(rho).eigenvalues,
    }
}

impl MeasureResult {
    pub fn text(&self) -> String {
        let ev: Vec<String> = self.eigenvalues.iter().map(|x| format!("{x:.9}")).collect();
        format!(
            "dim: {}\nC_l1: {:.12}\nC_r: {:.12}\neigenvalues: {}\n",
            self.dim,
            self.c_l1,
            self.c_r,
            ev.join(" ")
        )
    }

    pub fn csv(&self) -> String {
        let ev: Vec<String> = self.eigenvalues.iter().map(|x| x.to_string()).collect();
        format!("dim,c_l1,c_r,eigenvalues\n{},{},{},{}\n", self.dim, self.c_l1, self.c_r, ev.join(";"))
    }
}

// ---------------------------------------------------------------- decide

pub fn decide(rho: &DensityMatrix, config: &RunConfig) -> Result<DecisionReport, CliError> {
    decide_equality(rho, &config.decide_tolerances()).map_err(|e| match e {
        Error::UnsupportedDimension { dim, .. } => CliError::Validation(format!(
            "unsupported dimension {dim}: the exact decision covers d <= 3; \
             use the `roof` subcommand for an upper bound on the convex roof"
        )),
        other => other.into(),
    })
}

pub fn decide_text(r: &DecisionReport) -> String {
    let mut out = format!("verdict: {}\nsituation: {}\n", r.verdict.as_str(), r.situation.as_str());
    if !r.trace.is_empty() {
        out.push_str("steps:\n");
        for s in &r.trace {
            let _ = writeln!(out, "  {s}");
        }
    }
    if let Some(w) = &r.witness {
        let _ = writeln!(out, "witness ({} pure states):", w.len());
        fmt_ensemble(&mut out, w);
    }
    if let Some(c) = &r.witness_checks {
        let _ = writeln!(
            out,
            "checks: reconstruction error {:.3e}, phases {}, average C_l1 {:.12}, C_l1 {:.12}",
            c.reconstruction_error,
            if c.theorem1 { "aligned" } else { "NOT aligned" },
            c.average_c_l1,
            c.c_l1
        );
    }
    if let Some(c) = &r.certificate {
        let _ = writeln!(out, "certificate: x1* = {:.9e}, max det = {:.9e}", c.x1_star, c.max_det);
        if let Some(m) = &c.failing_minor {
            let idx: Vec<String> = m.indices.iter().map(|i| (i + 1).to_string()).collect();
            let _ = writeln!(out, "  failing minor {{{}}} = {:.9e}", idx.join(","), m.value);
        }
    }
    out
}

pub fn decide_csv(r: &DecisionReport, rho: &DensityMatrix) -> String {
    let cert = r.certificate.as_ref();
    format!(
        "verdict,situation,c_l1,x1_star,max_det,failing_minor\n{},{},{},{},{},{}\n",
        r.verdict.as_str(),
        r.situation.as_str(),
        c_l1(rho),
        opt_f64(cert.map(|c| c.x1_star)),
        opt_f64(cert.map(|c| c.max_det)),
        opt_f64(cert.and_then(|c| c.failing_minor.as_ref()).map(|m| m.value)),
    )
}

// ---------------------------------------------------------------- roof

#[derive(Debug, Clone, Serialize)]
pub struct RoofReport {
    pub functional: FunctionalKind,
    pub value: f64,
    /// `C_l1` or `C_r` of the input.
    pub measure: f64,
    /// `value - measure`.
    pub gap: f64,
    pub ensemble: PureEnsemble,
    pub restarts_used: usize,
    pub converged: Vec<bool>,
}

pub fn roof(rho: &DensityMatrix, kind: FunctionalKind, config: &RunConfig) -> Result<RoofReport, CliError> {
    let r = roof_upper(rho, kind.functional(), &config.roof_options())?;
    let measure = kind.measure(rho);
    Ok(RoofReport {
        functional: kind,
        value: r.value,
        measure,
        gap: r.value - measure,
        ensemble: r.ensemble,
        restarts_used: r.restarts_used,
        converged: r.converged,
    })
}

impl RoofReport {
    pub fn text(&self) -> String {
        let name = match self.functional {
            FunctionalKind::L1 => "C_l1",
            FunctionalKind::RelEntropy => "C_r",
        };
        let conv = self.converged.iter().filter(|&&c| c).count();
        let mut out = format!(
            "roof of {name} (upper bound): {:.12}\n{name}: {:.12}\ngap: {:.6e}\nrestarts: {} ({} converged)\nensemble ({} pure states):\n",
            self.value,
            self.measure,
            self.gap,
            self.restarts_used,
            conv,
            self.ensemble.len()
        );
        fmt_ensemble(&mut out, &self.ensemble);
        out
    }

    pub fn csv(&self) -> String {
        format!(
            "functional,value,measure,gap,ensemble_size,restarts,converged\n{},{},{},{},{},{},{}\n",
            match self.functional {
                FunctionalKind::L1 => "l1",
                FunctionalKind::RelEntropy => "rel-entropy",
            },
            self.value,
            self.measure,
            self.gap,
            self.ensemble.len(),
            self.restarts_used,
            self.converged.iter().filter(|&&c| c).count()
        )
    }
}

// ---------------------------------------------------------------- figure1

/// One point of the qubit relative-entropy surfaces, at Bloch radius `r` and
/// height `z` (transverse part along x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Figure1Row {
    pub r: f64,
    pub z: f64,
    pub cr: f64,
    pub cr_roof: f64,
    pub diff: f64,
}

pub fn figure1_row(r: f64, z: f64) -> Figure1Row {
    let x = (r * r - z * z).max(0.0).sqrt();
    let b = BlochVector { x, y: 0.0, z };
    let cr = qubit_cr(&b).expect("grid stays in the Bloch ball");
    let cr_roof = qubit_cr_roof(&b).expect("grid stays in the Bloch ball");
    Figure1Row {
        r,
        z,
        cr,
        cr_roof,
        diff: cr_roof - cr,
    }
}

/// The triangle `0 <= z <= r <= 1` on an `n x n` grid. The surfaces are
/// symmetric under `z -> -z`, so the lower half is omitted.
pub fn figure1_rows(n: usize) -> Vec<Figure1Row> {
    if n < 2 {
        return vec![figure1_row(0.0, 0.0)];
    }
    let step = |i: usize| i as f64 / (n - 1) as f64;
    (0..n)
        .flat_map(|i| (0..=i).map(move |j| figure1_row(step(i), step(j))))
        .collect()
}

pub fn figure1_csv(rows: &[Figure1Row]) -> String {
    let mut out = String::from("r,z,cr,cr_roof,diff\n");
    for row in rows {
        let _ = writeln!(out, "{},{},{},{},{}", row.r, row.z, row.cr, row.cr_roof, row.diff);
    }
    out
}

// ---------------------------------------------------------------- sample

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRow {
    pub index: usize,
    pub situation: String,
    pub verdict: Verdict,
    pub c_l1: f64,
    /// The negative (or near-zero) minor for STRICT and BOUNDARY rows.
    pub certificate: Option<f64>,
    /// Set on spot-checked rows.
    pub validated: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Tally {
    pub equal: usize,
    pub strict: usize,
    pub boundary: usize,
    pub validated: usize,
    pub validation_failures: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleResult {
    pub rows: Vec<SampleRow>,
    pub tally: Tally,
}

/// Every this-many rows is re-validated.
pub const SAMPLE_VALIDATE_EVERY: usize = 100;

/// State `index` of a sample: its own ChaCha stream under `seed`.
pub fn sample_state(seed: u64, index: usize, dim: usize) -> DensityMatrix {
    let mut rng = rng_from_seed(seed);
    rng.set_stream(index as u64);
    random_density_hs(dim, &mut rng)
}

/// Rechecks a report from the raw state: the witness by reconstruction and
/// phases, the certificate by recomputing its minor of `ρ̄(x1*)`.
pub fn validate_report(rho: &DensityMatrix, r: &DecisionReport) -> bool {
    match r.verdict {
        Verdict::Equal => {
            let Some(w) = &r.witness else { return false };
            w.reconstruction_error(rho) <= 1e-8
                && theorem1_check(rho, w).map(|t| t.holds).unwrap_or(false)
                && (ensemble_average(w, &L1Coherence) - c_l1(rho)).abs() <= 1e-9
        }
        Verdict::Strict | Verdict::Boundary => {
            let Some(cert) = &r.certificate else { return false };
            let Some(minor) = &cert.failing_minor else { return false };
            if rho.dim() != 3 {
                return false;
            }
            let theta = [0.0, rho.phase(0, 1), rho.phase(0, 2)];
            let m = phase_conjugate_hermitian(rho, &theta);
            let x = cert.x1_star;
            let b2 = rho.modulus(0, 1).powi(2);
            let mut bar = m.to_row_major();
            bar[0] -= x;
            bar[1] = Complex64::new(0.0, 0.0);
            bar[3] = Complex64::new(0.0, 0.0);
            bar[4] -= b2 / x;
            let Ok(bar) = ComplexHermitian::from_row_major(3, &bar) else {
                return false;
            };
            let value = bar.submatrix(&minor.indices).determinant();
            let agree = (value - minor.value).abs() <= 1e-9 * (1.0 + value.abs());
            agree && (r.verdict == Verdict::Boundary || value < 0.0)
        }
    }
}

pub fn sample(count: usize, dim: usize, seed: u64, config: &RunConfig) -> Result<SampleResult, CliError> {
    if dim != 3 {
        return Err(CliError::Validation(format!("sample supports dim = 3 only, got {dim}")));
    }
    let tol = config.decide_tolerances();
    let rows: Vec<SampleRow> = (0..count)
        .into_par_iter()
        .map(|i| {
            let rho = sample_state(seed, i, dim);
            let r = decide_equality_d3_with(&rho, &tol)
                .map_err(|e| CliError::Validation(format!("sample {i}: {e}")))?;
            let certificate = r
                .certificate
                .as_ref()
                .map(|c| c.failing_minor.as_ref().map_or(c.max_det, |m| m.value));
            let validated = (i % SAMPLE_VALIDATE_EVERY == 0).then(|| validate_report(&rho, &r));
            Ok(SampleRow {
                index: i,
                situation: r.situation.as_str().to_string(),
                verdict: r.verdict,
                c_l1: c_l1(&rho),
                certificate,
                validated,
            })
        })
        .collect::<Result<_, CliError>>()?;
    let mut tally = Tally::default();
    for row in &rows {
        match row.verdict {
            Verdict::Equal => tally.equal += 1,
            Verdict::Strict => tally.strict += 1,
            Verdict::Boundary => tally.boundary += 1,
        }
        match row.validated {
            Some(true) => tally.validated += 1,
            Some(false) => tally.validation_failures += 1,
            None => {}
        }
    }
    Ok(SampleResult { rows, tally })
}

impl SampleResult {
    pub fn csv(&self) -> String {
        let mut out = String::from("index,situation,verdict,c_l1,certificate,validated\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.index,
                r.situation,
                r.verdict.as_str(),
                r.c_l1,
                opt_f64(r.certificate),
                r.validated.map(|v| v.to_string()).unwrap_or_default()
            );
        }
        out
    }

    pub fn tally_line(&self) -> String {
        let t = &self.tally;
        format!(
            "EQUAL={} STRICT={} BOUNDARY={} validated={} validation_failures={}",
            t.equal, t.strict, t.boundary, t.validated, t.validation_failures
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure1_grid_shape() {
        let rows = figure1_rows(101);
        assert_eq!(rows.len(), 101 * 102 / 2);
        assert!(rows.iter().all(|r| r.z <= r.r && r.diff >= -1e-12));
        let last = rows.last().unwrap();
        assert_eq!((last.r, last.z, last.diff), (1.0, 1.0, 0.0));
    }

    #[test]
    fn figure1_pure_maximally_coherent() {
        let row = figure1_row(1.0, 0.0);
        assert!((row.cr - 1.0).abs() < 1e-12 && (row.cr_roof - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sample_is_order_stable() {
        let c = RunConfig::default();
        let a = sample(40, 3, 5, &c).unwrap();
        let b = sample(40, 3, 5, &c).unwrap();
        assert_eq!(a.rows, b.rows);
        assert!(a.rows.iter().enumerate().all(|(i, r)| r.index == i));
        assert_eq!(a.tally.validation_failures, 0);
    }

    #[test]
    fn sample_states_differ_by_index() {
        assert_ne!(sample_state(1, 0, 3), sample_state(1, 1, 3));
        assert_eq!(sample_state(1, 7, 3), sample_state(1, 7, 3));
    }
}

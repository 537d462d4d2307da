//! Run configuration: defaults, an optional JSON config file, then flags.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::decide::DecideTolerances;
use crate::roof::RoofOptions;

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "COHERENCE_ROOF_CONFIG";

/// Known tolerance names and their defaults.
pub const TOLERANCES: [(&str, f64); 4] = [
    ("zero", 1e-14),
    ("boundary", 1e-12),
    ("phase_align", 1e-10),
    ("roof", 1e-10),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub restarts: usize,
    /// `None` means `d²`.
    pub ensemble_size: Option<usize>,
    pub max_iters: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub output_format: Option<OutputFormat>,
}

/// Config file contents; every field optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub ensemble_size: Option<usize>,
    pub max_iters: Option<usize>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    pub output_format: Option<OutputFormat>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let roof = RoofOptions::default();
        RunConfig {
            seed: roof.seed,
            restarts: roof.restarts,
            ensemble_size: roof.ensemble_size,
            max_iters: roof.max_iters,
            tolerances: TOLERANCES.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            output_format: None,
        }
    }
}

fn canonical_name(name: &str) -> String {
    name.trim().replace('-', "_")
}

impl RunConfig {
    pub fn load_file(path: &Path) -> Result<ConfigFile, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))
    }

    pub fn apply_file(&mut self, file: ConfigFile) -> Result<(), String> {
        if let Some(v) = file.seed {
            self.seed = v;
        }
        if let Some(v) = file.restarts {
            self.restarts = v;
        }
        if file.ensemble_size.is_some() {
            self.ensemble_size = file.ensemble_size;
        }
        if let Some(v) = file.max_iters {
            self.max_iters = v;
        }
        if file.output_format.is_some() {
            self.output_format = file.output_format;
        }
        for (k, v) in file.tolerances {
            self.set_tolerance(&k, v)?;
        }
        Ok(())
    }

    pub fn set_tolerance(&mut self, name: &str, value: f64) -> Result<(), String> {
        let name = canonical_name(name);
        if !TOLERANCES.iter().any(|(k, _)| *k == name) {
            let known: Vec<&str> = TOLERANCES.iter().map(|(k, _)| *k).collect();
            return Err(format!("unknown tolerance `{name}` (known: {})", known.join(", ")));
        }
        if !(value > 0.0 && value.is_finite()) {
            return Err(format!("tolerance `{name}` must be positive, got {value}"));
        }
        self.tolerances.insert(name, value);
        Ok(())
    }

    /// Parses `name=value`.
    pub fn set_tolerance_arg(&mut self, arg: &str) -> Result<(), String> {
        let (name, value) = arg
            .split_once('=')
            .ok_or_else(|| format!("expected NAME=VALUE for --tol, got `{arg}`"))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("tolerance `{name}`: `{value}` is not a number"))?;
        self.set_tolerance(name, value)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.restarts == 0 {
            return Err("restarts must be at least 1".into());
        }
        if self.ensemble_size == Some(0) {
            return Err("ensemble size must be positive".into());
        }
        Ok(())
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances[name]
    }

    pub fn decide_tolerances(&self) -> DecideTolerances {
        DecideTolerances {
            zero: self.tolerance("zero"),
            boundary: self.tolerance("boundary"),
            phase_align: self.tolerance("phase_align"),
        }
    }

    pub fn roof_options(&self) -> RoofOptions {
        RoofOptions {
            ensemble_size: self.ensemble_size,
            restarts: self.restarts,
            seed: self.seed,
            max_iters: self.max_iters,
            tol: self.tolerance("roof"),
        }
    }
}

/// Rewrites `--tol.name=value` and `--tol.name value` into
/// `--tol name=value`.
pub fn rewrite_tol_flags<I, T>(args: I) -> Vec<String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString>,
{
    let args: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let mut out = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        match a.strip_prefix("--tol.") {
            Some(rest) => {
                out.push("--tol".to_string());
                if rest.contains('=') {
                    out.push(rest.to_string());
                } else {
                    let value = it.next().unwrap_or_default();
                    out.push(format!("{rest}={value}"));
                }
            }
            None => out.push(a),
        }
    }
    out
}

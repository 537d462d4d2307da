//! JSON matrix files.
//!
//! Two layouts are accepted:
//!
//! ```json
//! {"dim": 2, "entries": [[0.5, 0.0], [0.1, -0.2], [0.1, 0.2], [0.5, 0.0]]}
//! {"dim": 2, "upper":   [[0.5, 0.0], [0.1, -0.2], [0.5, 0.0]]}
//! ```
//!
//! `entries` is row-major, `upper` lists the diagonal and upper triangle row by
//! row and is completed to a Hermitian matrix.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matcore::{ComplexHermitian, DensityMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<Vec<[f64; 2]>>,
}

/// Input layout problems, reported as parse errors.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "parse error: {}", self.0)
    }
}

impl std::error::Error for ParseError {}

fn to_complex(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

impl MatrixFile {
    pub fn parse(text: &str) -> std::result::Result<Self, ParseError> {
        let file: MatrixFile = serde_json::from_str(text).map_err(|e| ParseError(e.to_string()))?;
        match (&file.entries, &file.upper) {
            (Some(_), Some(_)) => Err(ParseError("give either `entries` or `upper`, not both".into())),
            (None, None) => Err(ParseError("missing `entries` or `upper`".into())),
            _ if file.dim == 0 => Err(ParseError("dim must be positive".into())),
            _ => Ok(file),
        }
    }

    /// Row-major form of `m`.
    pub fn from_hermitian(m: &ComplexHermitian) -> Self {
        MatrixFile {
            dim: m.dim(),
            entries: Some(m.to_row_major().iter().map(|z| [z.re, z.im]).collect()),
            upper: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix files always serialize")
    }

    pub fn to_hermitian(&self) -> Result<ComplexHermitian> {
        match (&self.entries, &self.upper) {
            (Some(e), _) => ComplexHermitian::from_row_major(self.dim, &to_complex(e)),
            (None, Some(u)) => ComplexHermitian::from_upper(self.dim, &to_complex(u)),
            (None, None) => Err(Error::EntryCount {
                dim: self.dim,
                expected: self.dim * self.dim,
                found: 0,
            }),
        }
    }

    /// Validated state; with `normalize` the trace is rescaled to one first.
    pub fn to_density(&self, normalize: bool) -> Result<DensityMatrix> {
        let m = self.to_hermitian()?;
        if normalize {
            DensityMatrix::normalized(m)
        } else {
            DensityMatrix::new(m)
        }
    }
}

/// Hex SHA-256 of raw input bytes.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

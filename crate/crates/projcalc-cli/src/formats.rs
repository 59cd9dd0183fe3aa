//! File formats and the report envelope.
//!
//! Matrices travel as `{"rows", "cols", "data": [[re, im], ...]}` in
//! row-major order, specs as `{"m11", ..., "points": [{"theta", "mult"}]}`.
//! Every command answers with one `Report` envelope whose `pass` flag is
//! the single source of the exit code.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use projcalc_core::rep::RepSpec;
use projcalc_core::{DenseMatrix, Error as CoreError, Scalar, ToleranceConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "projcalc/1";

/// Exit discipline: 0 pass, 1 residual failure, 2 parse error,
/// 3 validation error. `Report.pass` decides between 0 and 1; errors
/// carry 2 or 3 directly.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidWord { .. } => CliError::parse(e.to_string()),
            _ => CliError::validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::parse(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::parse(e.to_string())
    }
}

/// Dense complex matrix on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &DenseMatrix) -> Self {
        MatrixFile {
            rows: m.rows(),
            cols: m.cols(),
            data: m.entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<DenseMatrix, CliError> {
        if self.data.len() != self.rows * self.cols {
            return Err(CliError::parse(format!(
                "matrix file declares {}x{} but carries {} entries",
                self.rows,
                self.cols,
                self.data.len()
            )));
        }
        if self
            .data
            .iter()
            .any(|&[re, im]| !re.is_finite() || !im.is_finite())
        {
            return Err(CliError::parse("matrix file carries non-finite entries"));
        }
        let entries: Vec<Scalar> = self
            .data
            .iter()
            .map(|&[re, im]| Scalar::new(re, im))
            .collect();
        DenseMatrix::from_vec(self.rows, self.cols, entries).map_err(CliError::from)
    }
}

/// Sector data on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecFile {
    pub m11: usize,
    pub m00: usize,
    pub m10: usize,
    pub m01: usize,
    pub points: Vec<PointFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointFile {
    pub theta: f64,
    pub mult: usize,
}

impl SpecFile {
    pub fn from_spec(spec: &RepSpec) -> Self {
        SpecFile {
            m11: spec.m11,
            m00: spec.m00,
            m10: spec.m10,
            m01: spec.m01,
            points: spec
                .points
                .iter()
                .map(|&(theta, mult)| PointFile { theta, mult })
                .collect(),
        }
    }

    pub fn to_spec(&self) -> Result<RepSpec, CliError> {
        RepSpec::new(
            self.m11,
            self.m00,
            self.m10,
            self.m01,
            self.points.iter().map(|p| (p.theta, p.mult)).collect(),
        )
        .map_err(CliError::from)
    }
}

/// One consumed input, fingerprinted so certificates can be tied back to
/// the exact bytes they were computed from.
#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TolerancesOut {
    pub tol_validate: f64,
    pub tol_cluster: f64,
    pub tol_rank: f64,
    pub tol_report: f64,
}

impl TolerancesOut {
    pub fn of(tol: &ToleranceConfig) -> Self {
        TolerancesOut {
            tol_validate: tol.tol_validate,
            tol_cluster: tol.tol_cluster,
            tol_rank: tol.tol_rank,
            tol_report: tol.tol_report,
        }
    }
}

/// Command answer envelope; serialized as the whole stdout.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub tolerances: TolerancesOut,
    pub result: serde_json::Value,
    pub residuals: BTreeMap<String, f64>,
    pub pass: bool,
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Reads a file and fingerprints its raw bytes.
pub fn read_with_digest(role: &str, path: &Path) -> Result<(Vec<u8>, InputDigest), CliError> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    let digest = InputDigest {
        role: role.into(),
        path: path.display().to_string(),
        sha256: hex_digest(&bytes),
    };
    Ok((bytes, digest))
}

pub fn read_matrix(role: &str, path: &Path) -> Result<(DenseMatrix, InputDigest), CliError> {
    let (bytes, digest) = read_with_digest(role, path)?;
    let file: MatrixFile = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    Ok((file.to_matrix()?, digest))
}

pub fn read_spec(role: &str, path: &Path) -> Result<(RepSpec, InputDigest), CliError> {
    let (bytes, digest) = read_with_digest(role, path)?;
    let file: SpecFile = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    Ok((file.to_spec()?, digest))
}

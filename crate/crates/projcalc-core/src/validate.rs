//! Input validation and rank/range utilities.
//!
//! Everything downstream assumes its inputs are genuine projections or
//! symmetries. These checks are the single gate where that assumption is
//! earned, so the residuals are measured in operator norm, the strongest
//! of the norms we compute.

use alloc::vec::Vec;

use crate::eigen::{hermitian_eigendecompose, operator_norm};
use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, Scalar};

/// Numeric thresholds used across the crate.
///
/// `tol_validate` gates input checks, `tol_cluster` groups eigenvalues,
/// `tol_rank` cuts singular values, `tol_report` bounds reported residuals.
/// Invariant: all strictly positive and `tol_validate <= tol_report`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub tol_validate: f64,
    pub tol_cluster: f64,
    pub tol_rank: f64,
    pub tol_report: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            tol_validate: 1e-9,
            tol_cluster: 1e-7,
            tol_rank: 1e-8,
            tol_report: 1e-6,
        }
    }
}

impl ToleranceConfig {
    pub fn new(
        tol_validate: f64,
        tol_cluster: f64,
        tol_rank: f64,
        tol_report: f64,
    ) -> Result<Self> {
        let cfg = ToleranceConfig {
            tol_validate,
            tol_cluster,
            tol_rank,
            tol_report,
        };
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<()> {
        let all = [
            self.tol_validate,
            self.tol_cluster,
            self.tol_rank,
            self.tol_report,
        ];
        if all.iter().any(|t| *t <= 0.0 || !t.is_finite()) {
            return Err(Error::InvalidSpec {
                reason: "tolerances must be strictly positive and finite".into(),
            });
        }
        if self.tol_validate > self.tol_report {
            return Err(Error::InvalidSpec {
                reason: "tol_validate must not exceed tol_report".into(),
            });
        }
        Ok(())
    }
}

/// Residuals of an algebraic-identity check, in operator norm.
///
/// `equation_residual` measures the defining equation (P² = P, or U² = I);
/// `adjoint_residual` measures self-adjointness.
#[derive(Debug, Clone, Copy)]
pub struct ValidationReport {
    pub equation_residual: f64,
    pub adjoint_residual: f64,
    pub tol: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.equation_residual <= self.tol && self.adjoint_residual <= self.tol
    }

    pub fn worst_residual(&self) -> f64 {
        self.equation_residual.max(self.adjoint_residual)
    }
}

/// Checks P² = P and P = P* within `tol` (operator norm).
pub fn validate_projection(p: &DenseMatrix, tol: f64) -> Result<ValidationReport> {
    if !p.is_square() {
        return Err(Error::NotSquare {
            rows: p.rows(),
            cols: p.cols(),
        });
    }
    let squared = p.matmul(p)?;
    Ok(ValidationReport {
        equation_residual: operator_norm(&squared.sub(p)?),
        adjoint_residual: operator_norm(&p.sub(&p.adjoint())?),
        tol,
    })
}

/// Checks U² = I and U = U* within `tol` (operator norm).
pub fn validate_symmetry(u: &DenseMatrix, tol: f64) -> Result<ValidationReport> {
    if !u.is_square() {
        return Err(Error::NotSquare {
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    let squared = u.matmul(u)?;
    let identity = DenseMatrix::identity(u.rows());
    Ok(ValidationReport {
        equation_residual: operator_norm(&squared.sub(&identity)?),
        adjoint_residual: operator_norm(&u.sub(&u.adjoint())?),
        tol,
    })
}

/// Number of singular values above `tol · max(1, σ_max)`.
///
/// Singular values are read off the Hermitian dilation [[0, M], [M*, 0]],
/// whose spectrum is ±σᵢ plus padding zeros. Unlike the Gram route, the
/// dilation keeps the absolute error of a zero singular value at machine
/// scale instead of its square root, which matters because the default
/// cut sits near sqrt(eps).
pub fn rank_with_tol(m: &DenseMatrix, tol: f64) -> usize {
    let (r, c) = (m.rows(), m.cols());
    if r == 0 || c == 0 {
        return 0;
    }
    let n = r + c;
    let mut h = DenseMatrix::zeros(n, n);
    for i in 0..r {
        for j in 0..c {
            h[(i, r + j)] = m[(i, j)];
            h[(r + j, i)] = m[(i, j)].conj();
        }
    }
    let eig = hermitian_eigendecompose(&h, &ToleranceConfig::default())
        .expect("dilation is Hermitian by construction");
    let top = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &l| acc.max(l.abs()));
    let cut = tol * top.max(1.0);
    eig.eigenvalues.iter().filter(|&&l| l > cut).count()
}

/// Orthonormal columns spanning the range of a validated projection.
///
/// Columns are the eigenvectors of P with eigenvalue within `tol_cluster`
/// of 1, each phase-fixed so its largest-modulus entry is real positive.
/// The phase fix makes the basis deterministic for a given input.
pub fn orthonormal_range_basis(p: &DenseMatrix, tol: &ToleranceConfig) -> Result<DenseMatrix> {
    let report = validate_projection(p, tol.tol_validate)?;
    if !report.passed() {
        return Err(Error::ValidationFailed {
            what: "projection",
            residual: report.worst_residual(),
        });
    }
    let eig = hermitian_eigendecompose(p, tol)?;
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        if (lambda - 1.0).abs() <= tol.tol_cluster {
            cols.push(phase_fixed(eig.eigenvectors.column(j)));
        }
    }
    DenseMatrix::from_columns(p.rows(), &cols)
}

/// Rescales a vector by a unit-modulus factor so its largest-modulus entry
/// is real positive. Zero vectors pass through unchanged.
pub fn phase_fixed(mut v: Vec<Scalar>) -> Vec<Scalar> {
    let mut best = 0usize;
    let mut best_mod = 0.0f64;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mod {
            best_mod = m;
            best = i;
        }
    }
    if best_mod > 0.0 {
        let factor = v[best].conj() / best_mod;
        for z in v.iter_mut() {
            *z *= factor;
        }
    }
    v
}

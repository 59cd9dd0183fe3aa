//! Finite-dimensional representation builder and ground-truth instance
//! generator.
//!
//! A representation of the two-projection algebra is fixed, up to unitary
//! equivalence, by four atomic multiplicities (joint eigenvalue patterns
//! (1,1), (0,0), (1,0), (0,1)) and an atomic measure on the open upper
//! semicircle, discretized here as finitely many angles with
//! multiplicities. `build_representation` assembles the block model,
//! `random_pair_from_spec` scrambles it by a seeded unitary, and
//! `spec_of_decomposition` closes the loop back from decomposition output.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, Scalar};
use crate::pair::{canonical_form, HalmosDecomposition, ProjectionPair};
use crate::rng::random_unitary;
use crate::validate::{validate_projection, validate_symmetry, ToleranceConfig, ValidationReport};

/// Sector data: atomic multiplicities plus discretized semicircle points.
#[derive(Debug, Clone, PartialEq)]
pub struct RepSpec {
    pub m11: usize,
    pub m00: usize,
    pub m10: usize,
    pub m01: usize,
    /// (theta, multiplicity), theta strictly inside (0, π), strictly
    /// ascending.
    pub points: Vec<(f64, usize)>,
}

impl RepSpec {
    pub fn new(
        m11: usize,
        m00: usize,
        m10: usize,
        m01: usize,
        points: Vec<(f64, usize)>,
    ) -> Result<Self> {
        let spec = RepSpec {
            m11,
            m00,
            m10,
            m01,
            points,
        };
        spec.check()?;
        Ok(spec)
    }

    pub fn check(&self) -> Result<()> {
        let mut prev = 0.0f64;
        for &(theta, mult) in &self.points {
            if !theta.is_finite() || theta <= 0.0 || theta >= core::f64::consts::PI {
                return Err(Error::InvalidSpec {
                    reason: format!("angle {theta} outside the open interval (0, pi)"),
                });
            }
            if theta <= prev {
                return Err(Error::InvalidSpec {
                    reason: format!("angles must be strictly ascending, {theta} after {prev}"),
                });
            }
            if mult == 0 {
                return Err(Error::InvalidSpec {
                    reason: format!("angle {theta} carries multiplicity 0"),
                });
            }
            prev = theta;
        }
        if self.total_dim() == 0 {
            return Err(Error::InvalidSpec {
                reason: "total dimension must be at least 1".into(),
            });
        }
        Ok(())
    }

    pub fn total_dim(&self) -> usize {
        self.m11
            + self.m00
            + self.m10
            + self.m01
            + 2 * self.points.iter().map(|&(_, m)| m).sum::<usize>()
    }

    /// Flat angle list, one entry per 2x2 cell, ascending.
    pub fn flat_angles(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for &(theta, mult) in &self.points {
            for _ in 0..mult {
                out.push(theta);
            }
        }
        out
    }
}

/// Block role inside a built representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SectorKind {
    M11,
    M00,
    M10,
    M01,
    /// One group of 2×2 cells sharing an angle.
    Cells { theta: f64 },
}

/// Contiguous index range `offset..offset+len` carrying one sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorBlock {
    pub kind: SectorKind,
    pub offset: usize,
    pub len: usize,
}

/// Concrete matrices of a built representation, with the layout map.
#[derive(Debug, Clone)]
pub struct BuiltRepresentation {
    pub p1: DenseMatrix,
    pub p2: DenseMatrix,
    pub v: DenseMatrix,
    pub spec: RepSpec,
    pub sector_layout: Vec<SectorBlock>,
}

/// Assembles the block-diagonal model for a spec: atomic 1×1 sectors in
/// the order m11, m00, m10, m01, then one 2×2 cell per angle copy,
/// ascending. V is taken globally as 2·P1 − I, which swaps the two
/// coordinates of every cell and acts by ±1 on the atomic sectors.
pub fn build_representation(spec: &RepSpec) -> Result<BuiltRepresentation> {
    spec.check()?;
    let dec = HalmosDecomposition {
        m11: spec.m11,
        m00: spec.m00,
        m10: spec.m10,
        m01: spec.m01,
        angles: spec.flat_angles(),
        basis: DenseMatrix::identity(spec.total_dim()),
    };
    let pair = canonical_form(&dec)?;
    let n = spec.total_dim();
    let identity = DenseMatrix::identity(n);
    let v = pair.p().scale(Scalar::new(2.0, 0.0)).sub(&identity)?;

    let mut sector_layout = Vec::new();
    let mut at = 0usize;
    for (kind, len) in [
        (SectorKind::M11, spec.m11),
        (SectorKind::M00, spec.m00),
        (SectorKind::M10, spec.m10),
        (SectorKind::M01, spec.m01),
    ] {
        if len > 0 {
            sector_layout.push(SectorBlock {
                kind,
                offset: at,
                len,
            });
            at += len;
        }
    }
    for &(theta, mult) in &spec.points {
        sector_layout.push(SectorBlock {
            kind: SectorKind::Cells { theta },
            offset: at,
            len: 2 * mult,
        });
        at += 2 * mult;
    }

    let (p1, p2) = pair.into_parts();
    Ok(BuiltRepresentation {
        p1,
        p2,
        v,
        spec: spec.clone(),
        sector_layout,
    })
}

/// Residuals of the representation-level identities.
#[derive(Debug, Clone)]
pub struct BuiltVerification {
    pub p1_report: ValidationReport,
    pub p2_report: ValidationReport,
    /// max-abs distance between V and 2·P1 − I.
    pub v_residual: f64,
    /// ‖V·W·V − W*‖ for W = V·(2·P2 − I); W is unitary, so W* = W⁻¹.
    pub crossed_relation_residual: f64,
    /// Max over cells of ‖V·M_z·V − M_conj(z)‖ with M_z = diag(z, z̄).
    pub conjugation_residual: f64,
    /// Max distance of atomic-sector eigenvalues of P1 − P2 from {−1,0,1},
    /// including off-diagonal leakage.
    pub atomic_spectrum_residual: f64,
    pub passed: bool,
}

/// Checks every identity the construction promises. Failures are
/// reported, not thrown: the report is the measurement.
pub fn verify_built(rep: &BuiltRepresentation, tol: &ToleranceConfig) -> Result<BuiltVerification> {
    let p1_report = validate_projection(&rep.p1, tol.tol_validate)?;
    let p2_report = validate_projection(&rep.p2, tol.tol_validate)?;
    let n = rep.p1.rows();
    let identity = DenseMatrix::identity(n);

    let two_p1 = rep.p1.scale(Scalar::new(2.0, 0.0)).sub(&identity)?;
    let v_residual = rep.v.max_abs_diff(&two_p1)?;
    let v_report = validate_symmetry(&rep.v, tol.tol_validate)?;

    let u2 = rep.p2.scale(Scalar::new(2.0, 0.0)).sub(&identity)?;
    let w = rep.v.matmul(&u2)?;
    let vwv = rep.v.matmul(&w.matmul(&rep.v)?)?;
    let crossed_relation_residual = vwv.max_abs_diff(&w.adjoint())?;

    let mut conjugation_residual = 0.0f64;
    let mut atomic_spectrum_residual = 0.0f64;
    let d = rep.p1.sub(&rep.p2)?;
    for block in &rep.sector_layout {
        match block.kind {
            SectorKind::Cells { theta } => {
                let z = Scalar::new(libm::cos(theta), libm::sin(theta));
                for cell in 0..block.len / 2 {
                    let off = block.offset + 2 * cell;
                    let v_cell = rep.v.principal_block(off, 2)?;
                    let m_z = DenseMatrix::from_fn(2, 2, |i, j| match (i, j) {
                        (0, 0) => z,
                        (1, 1) => z.conj(),
                        _ => Scalar::new(0.0, 0.0),
                    });
                    let m_conj = m_z.adjoint();
                    let lhs = v_cell.matmul(&m_z.matmul(&v_cell)?)?;
                    conjugation_residual =
                        conjugation_residual.max(lhs.max_abs_diff(&m_conj)?);
                }
            }
            _ => {
                let sub = d.principal_block(block.offset, block.len)?;
                for i in 0..block.len {
                    for j in 0..block.len {
                        let entry = sub[(i, j)];
                        let dev = if i == j {
                            [-1.0f64, 0.0, 1.0]
                                .iter()
                                .map(|t| (entry - Scalar::new(*t, 0.0)).norm())
                                .fold(f64::INFINITY, f64::min)
                        } else {
                            entry.norm()
                        };
                        atomic_spectrum_residual = atomic_spectrum_residual.max(dev);
                    }
                }
            }
        }
    }

    let passed = p1_report.passed()
        && p2_report.passed()
        && v_report.passed()
        && v_residual <= tol.tol_validate
        && crossed_relation_residual <= 1e-12
        && conjugation_residual <= 1e-12
        && atomic_spectrum_residual <= 1e-12;
    Ok(BuiltVerification {
        p1_report,
        p2_report,
        v_residual,
        crossed_relation_residual,
        conjugation_residual,
        atomic_spectrum_residual,
        passed,
    })
}

/// Ground-truth generator: the built pair conjugated by a seeded random
/// unitary. Deterministic in (spec, seed); the decomposition of the
/// result recovers the spec.
pub fn random_pair_from_spec(spec: &RepSpec, seed: u64) -> Result<ProjectionPair> {
    let rep = build_representation(spec)?;
    let u = random_unitary(spec.total_dim(), seed);
    let p = u.adjoint().matmul(&rep.p1.matmul(&u)?)?;
    let q = u.adjoint().matmul(&rep.p2.matmul(&u)?)?;
    ProjectionPair::new(p, q, &ToleranceConfig::default())
}

/// Collapses a decomposition back to sector data, merging angles equal
/// within `tol_cluster` into multiplicities.
pub fn spec_of_decomposition(dec: &HalmosDecomposition, tol: &ToleranceConfig) -> RepSpec {
    let mut points: Vec<(f64, usize)> = Vec::new();
    for &theta in &dec.angles {
        match points.last_mut() {
            Some((t, m)) if (theta - *t).abs() <= tol.tol_cluster => {
                *t = (*t * *m as f64 + theta) / (*m as f64 + 1.0);
                *m += 1;
            }
            _ => points.push((theta, 1)),
        }
    }
    RepSpec {
        m11: dec.m11,
        m00: dec.m00,
        m10: dec.m10,
        m01: dec.m01,
        points,
    }
}

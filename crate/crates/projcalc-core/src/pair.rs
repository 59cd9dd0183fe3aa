//! Structure theory for a pair of orthogonal projections.
//!
//! The difference D = P − Q of two projections has spectrum in [−1, 1].
//! Its +1 eigenspace is ran P ∩ ker Q, its −1 eigenspace is ker P ∩ ran Q,
//! and its kernel splits under P + Q into ran P ∩ ran Q (eigenvalue 2) and
//! ker P ∩ ker Q (eigenvalue 0). Every remaining eigenvalue comes in a
//! ±λ pair with λ ∈ (0, 1), and each pair spans a two-dimensional cell on
//! which the pair is unitarily equivalent to the canonical model
//!
//! ```text
//! P_cell = ½ [[1, 1], [1, 1]],   Q_cell = ½ [[1, e^{iθ}], [e^{−iθ}, 1]]
//! ```
//!
//! with λ = sin(θ/2) and θ ∈ (0, π). `halmos_decompose` computes the
//! sector dimensions, the angle list, and an explicit unitary change of
//! basis realizing the block model; `verify_decomposition` certifies it.

use alloc::vec::Vec;

use crate::eigen::{hermitian_eigendecompose, operator_norm, HermitianEig};
use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, Scalar};
use crate::validate::{phase_fixed, validate_projection, ToleranceConfig};

/// Pair of same-sized validated projections.
#[derive(Debug, Clone)]
pub struct ProjectionPair {
    p: DenseMatrix,
    q: DenseMatrix,
    dim: usize,
}

impl ProjectionPair {
    /// Validates both matrices as projections at `tol_validate` and checks
    /// that the dimensions agree.
    pub fn new(p: DenseMatrix, q: DenseMatrix, tol: &ToleranceConfig) -> Result<Self> {
        for m in [&p, &q] {
            let report = validate_projection(m, tol.tol_validate)?;
            if !report.passed() {
                return Err(Error::ValidationFailed {
                    what: "projection",
                    residual: report.worst_residual(),
                });
            }
        }
        if p.rows() != q.rows() {
            return Err(Error::DimensionMismatch {
                left: (p.rows(), p.cols()),
                right: (q.rows(), q.cols()),
            });
        }
        let dim = p.rows();
        Ok(ProjectionPair { p, q, dim })
    }

    pub fn p(&self) -> &DenseMatrix {
        &self.p
    }

    pub fn q(&self) -> &DenseMatrix {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// D = P − Q.
    pub fn difference(&self) -> DenseMatrix {
        self.p.sub(&self.q).expect("dimensions agree by construction")
    }

    pub fn into_parts(self) -> (DenseMatrix, DenseMatrix) {
        (self.p, self.q)
    }
}

/// Sign-symmetric spectrum of P − Q, clustered and paired.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub plus_ones: usize,
    pub minus_ones: usize,
    pub zeros: usize,
    /// Interior values as (λ, number of ±λ pairs), λ ∈ (0, 1), ascending;
    /// each pair stands for two eigenvalues.
    pub paired: Vec<(f64, usize)>,
    /// Max distance from any eigenvalue to its assigned cluster or pair.
    pub residual: f64,
}

impl SpectrumReport {
    /// Number of interior eigenvalues, counting both signs of each pair.
    pub fn interior_count(&self) -> usize {
        2 * self.paired.iter().map(|&(_, m)| m).sum::<usize>()
    }
}

/// Sector dimensions, cell angles, and the unitary that realizes the
/// block-diagonal model. Basis column order:
/// `[m11 | m00 | m10 | m01 | one 2-column block per angle, ascending]`.
#[derive(Debug, Clone)]
pub struct HalmosDecomposition {
    pub m11: usize,
    pub m00: usize,
    pub m10: usize,
    pub m01: usize,
    /// One entry per generic cell, strictly inside (0, π), ascending.
    pub angles: Vec<f64>,
    pub basis: DenseMatrix,
}

impl HalmosDecomposition {
    pub fn total_dim(&self) -> usize {
        self.m11 + self.m00 + self.m10 + self.m01 + 2 * self.angles.len()
    }
}

/// P ↦ 2P − I, the bijection from projections onto symmetries.
pub fn symmetry_of(p: &DenseMatrix, tol: &ToleranceConfig) -> Result<DenseMatrix> {
    let report = validate_projection(p, tol.tol_validate)?;
    if !report.passed() {
        return Err(Error::ValidationFailed {
            what: "projection",
            residual: report.worst_residual(),
        });
    }
    let identity = DenseMatrix::identity(p.rows());
    p.scale(Scalar::new(2.0, 0.0)).sub(&identity)
}

/// U ↦ (U + I)/2, inverse of `symmetry_of`.
pub fn projection_of(u: &DenseMatrix, tol: &ToleranceConfig) -> Result<DenseMatrix> {
    let report = crate::validate::validate_symmetry(u, tol.tol_validate)?;
    if !report.passed() {
        return Err(Error::ValidationFailed {
            what: "symmetry",
            residual: report.worst_residual(),
        });
    }
    let identity = DenseMatrix::identity(u.rows());
    Ok(u.add(&identity)?.scale(Scalar::new(0.5, 0.0)))
}

/// One interior ±λ pair: eigenvalue estimate and the column of the
/// positive eigenvector it came from. The negative partner is consumed by
/// the count bookkeeping; the cell construction needs only the positive one.
struct CellSeed {
    lambda: f64,
    pos_col: usize,
}

/// Classified spectrum of D: cluster membership by eigenvector column.
struct Classified {
    plus: Vec<usize>,
    minus: Vec<usize>,
    kernel: Vec<usize>,
    cells: Vec<CellSeed>,
    residual: f64,
}

/// Clusters the eigenvalues at ±1 and 0 within `tol_cluster`, then matches
/// the remaining values into ±λ pairs by sorted absolute value. For genuine
/// projection pairs the interior spectrum is symmetric, so a failed match
/// signals invalid input.
fn classify(eig: &HermitianEig, tol: &ToleranceConfig) -> Result<Classified> {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut kernel = Vec::new();
    let mut pos: Vec<(f64, usize)> = Vec::new();
    let mut neg: Vec<(f64, usize)> = Vec::new();
    let mut residual = 0.0f64;

    for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
        if (lambda - 1.0).abs() <= tol.tol_cluster {
            residual = residual.max((lambda - 1.0).abs());
            plus.push(idx);
        } else if (lambda + 1.0).abs() <= tol.tol_cluster {
            residual = residual.max((lambda + 1.0).abs());
            minus.push(idx);
        } else if lambda.abs() <= tol.tol_cluster {
            residual = residual.max(lambda.abs());
            kernel.push(idx);
        } else if lambda > 0.0 {
            pos.push((lambda, idx));
        } else {
            neg.push((-lambda, idx));
        }
    }

    // Ascending eigenvalue order makes `pos` ascending in λ already; `neg`
    // holds |λ| of the negative values, ascending after a reverse.
    neg.reverse();
    if pos.len() != neg.len() {
        let odd_one = if pos.len() > neg.len() {
            pos.last().map(|&(l, _)| l)
        } else {
            neg.last().map(|&(l, _)| -l)
        };
        return Err(Error::PairingFailure {
            unpaired: odd_one.unwrap_or(0.0),
        });
    }
    let mut cells = Vec::with_capacity(pos.len());
    for (&(lp, ip), &(ln, _)) in pos.iter().zip(neg.iter()) {
        let gap = (lp - ln).abs();
        if gap > tol.tol_cluster {
            return Err(Error::PairingFailure { unpaired: lp });
        }
        residual = residual.max(gap / 2.0);
        cells.push(CellSeed {
            lambda: (lp + ln) / 2.0,
            pos_col: ip,
        });
    }
    Ok(Classified {
        plus,
        minus,
        kernel,
        cells,
        residual,
    })
}

/// Spectrum of P − Q with ±1/0 clusters and matched interior pairs.
pub fn difference_spectrum(pair: &ProjectionPair, tol: &ToleranceConfig) -> Result<SpectrumReport> {
    let eig = hermitian_eigendecompose(&pair.difference(), tol)?;
    let cls = classify(&eig, tol)?;
    // Merge pairs at equal λ (within tol_cluster) into multiplicities.
    let mut paired: Vec<(f64, usize)> = Vec::new();
    for seed in &cls.cells {
        match paired.last_mut() {
            Some((l, m)) if (seed.lambda - *l).abs() <= tol.tol_cluster => {
                *l = (*l * *m as f64 + seed.lambda) / (*m as f64 + 1.0);
                *m += 1;
            }
            _ => paired.push((seed.lambda, 1)),
        }
    }
    Ok(SpectrumReport {
        plus_ones: cls.plus.len(),
        minus_ones: cls.minus.len(),
        zeros: cls.kernel.len(),
        paired,
        residual: cls.residual,
    })
}

fn inner(x: &[Scalar], y: &[Scalar]) -> Scalar {
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
}

fn norm(x: &[Scalar]) -> f64 {
    libm::sqrt(x.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

type ColumnSet = Vec<Vec<Scalar>>;

/// Splits the kernel of D by the eigenvalue of P + Q: 2 means
/// ran P ∩ ran Q, 0 means ker P ∩ ker Q. Any other value contradicts the
/// projection axioms, so it is rejected.
fn split_kernel(
    pair: &ProjectionPair,
    eig: &HermitianEig,
    kernel: &[usize],
    tol: &ToleranceConfig,
) -> Result<(ColumnSet, ColumnSet)> {
    if kernel.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let cols: Vec<Vec<Scalar>> = kernel.iter().map(|&j| eig.eigenvectors.column(j)).collect();
    let k = DenseMatrix::from_columns(pair.dim, &cols)?;
    let sum = pair.p.add(&pair.q)?;
    let restricted = k.adjoint().matmul(&sum.matmul(&k)?)?;
    let sub = hermitian_eigendecompose(&restricted, tol)?;
    let rotated = k.matmul(&sub.eigenvectors)?;

    let mut ran_ran: Vec<(f64, Vec<Scalar>)> = Vec::new();
    let mut ker_ker: Vec<(f64, Vec<Scalar>)> = Vec::new();
    for (j, &mu) in sub.eigenvalues.iter().enumerate() {
        let col = phase_fixed(rotated.column(j));
        if (mu - 2.0).abs() < 0.1 {
            ran_ran.push((mu, col));
        } else if mu.abs() < 0.1 {
            ker_ker.push((mu, col));
        } else {
            return Err(Error::DegenerateAngle { value: mu });
        }
    }
    Ok((
        ran_ran.into_iter().map(|(_, c)| c).collect(),
        ker_ker.into_iter().map(|(_, c)| c).collect(),
    ))
}

/// Builds the orthonormal 2-column cell basis for one ±λ pair so that the
/// restriction of (P, Q) becomes exactly the canonical model at angle
/// θ = 2·arcsin(λ).
///
/// With w the unit +λ eigenvector of D: e = P·w and f = w − e satisfy
/// ‖e‖² = (1+λ)/2 and ‖f‖² = (1−λ)/2, and after normalization the only
/// remaining freedom is the relative phase ζ between them. The canonical
/// model demands ⟨f̂, D·ê⟩·ζ = −i·sin(θ)/2, which pins ζ = i·s/|s| for the
/// measured s.
fn build_cell(
    pair: &ProjectionPair,
    d: &DenseMatrix,
    w: &[Scalar],
    lambda: f64,
) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
    let e = pair.p.apply(w);
    let f: Vec<Scalar> = w.iter().zip(e.iter()).map(|(a, b)| a - b).collect();
    let (ne, nf) = (norm(&e), norm(&f));
    if ne == 0.0 || nf == 0.0 {
        return Err(Error::DegenerateAngle { value: lambda });
    }
    let e_hat: Vec<Scalar> = e.iter().map(|z| z / ne).collect();
    let f_hat: Vec<Scalar> = f.iter().map(|z| z / nf).collect();
    let s = inner(&f_hat, &d.apply(&e_hat));
    if s.norm() == 0.0 {
        return Err(Error::DegenerateAngle { value: lambda });
    }
    let zeta = Scalar::new(0.0, 1.0) * s / s.norm();
    let inv_sqrt2 = 1.0 / libm::sqrt(2.0);
    let b1: Vec<Scalar> = e_hat
        .iter()
        .zip(f_hat.iter())
        .map(|(a, b)| (a + zeta * b) * inv_sqrt2)
        .collect();
    let b2: Vec<Scalar> = e_hat
        .iter()
        .zip(f_hat.iter())
        .map(|(a, b)| (a - zeta * b) * inv_sqrt2)
        .collect();
    // A common phase on both columns conjugates the cell model trivially,
    // so fixing b1's phase keeps the output deterministic.
    let mut best = 0usize;
    let mut best_mod = 0.0f64;
    for (i, z) in b1.iter().enumerate() {
        if z.norm() > best_mod {
            best_mod = z.norm();
            best = i;
        }
    }
    let factor = b1[best].conj() / best_mod;
    Ok((
        b1.iter().map(|z| z * factor).collect(),
        b2.iter().map(|z| z * factor).collect(),
    ))
}

/// Full structure decomposition: sector dimensions, cell angles, and the
/// unitary basis aligning the pair with its block-diagonal model.
pub fn halmos_decompose(pair: &ProjectionPair, tol: &ToleranceConfig) -> Result<HalmosDecomposition> {
    let d = pair.difference();
    let eig = hermitian_eigendecompose(&d, tol)?;
    let cls = classify(&eig, tol)?;
    let (ran_ran, ker_ker) = split_kernel(pair, &eig, &cls.kernel, tol)?;

    let mut columns: Vec<Vec<Scalar>> = Vec::with_capacity(pair.dim);
    columns.extend(ran_ran.iter().cloned());
    columns.extend(ker_ker.iter().cloned());
    for &j in &cls.plus {
        columns.push(phase_fixed(eig.eigenvectors.column(j)));
    }
    for &j in &cls.minus {
        columns.push(phase_fixed(eig.eigenvectors.column(j)));
    }

    // `classify` returns cells ascending in λ, hence ascending in θ.
    let mut angles = Vec::with_capacity(cls.cells.len());
    for seed in &cls.cells {
        let w = eig.eigenvectors.column(seed.pos_col);
        let (b1, b2) = build_cell(pair, &d, &w, seed.lambda)?;
        columns.push(b1);
        columns.push(b2);
        angles.push(2.0 * libm::asin(seed.lambda.clamp(-1.0, 1.0)));
    }

    let basis = DenseMatrix::from_columns(pair.dim, &columns)?;
    Ok(HalmosDecomposition {
        m11: ran_ran.len(),
        m00: ker_ker.len(),
        m10: cls.plus.len(),
        m01: cls.minus.len(),
        angles,
        basis,
    })
}

/// The block-diagonal model pair described by a decomposition: corner
/// blocks (1,1)^m11 ⊕ (0,0)^m00 ⊕ (1,0)^m10 ⊕ (0,1)^m01, then one 2×2
/// canonical cell per angle.
pub fn canonical_form(dec: &HalmosDecomposition) -> Result<ProjectionPair> {
    for &theta in &dec.angles {
        if !(theta > 0.0 && theta < core::f64::consts::PI) {
            return Err(Error::InconsistentDims {
                reason: alloc::format!("cell angle {theta} outside (0, pi)"),
            });
        }
    }
    let n = dec.total_dim();
    let mut p = DenseMatrix::zeros(n, n);
    let mut q = DenseMatrix::zeros(n, n);
    let mut at = 0usize;
    for _ in 0..dec.m11 {
        p[(at, at)] = Scalar::ONE;
        q[(at, at)] = Scalar::ONE;
        at += 1;
    }
    at += dec.m00;
    for _ in 0..dec.m10 {
        p[(at, at)] = Scalar::ONE;
        at += 1;
    }
    for _ in 0..dec.m01 {
        q[(at, at)] = Scalar::ONE;
        at += 1;
    }
    let half = Scalar::new(0.5, 0.0);
    for &theta in &dec.angles {
        let z = Scalar::new(libm::cos(theta), libm::sin(theta));
        p[(at, at)] = half;
        p[(at, at + 1)] = half;
        p[(at + 1, at)] = half;
        p[(at + 1, at + 1)] = half;
        q[(at, at)] = half;
        q[(at, at + 1)] = half * z;
        q[(at + 1, at)] = half * z.conj();
        q[(at + 1, at + 1)] = half;
        at += 2;
    }
    ProjectionPair::new(p, q, &ToleranceConfig::default())
}

/// Certificate check: conjugates the pair by the decomposition basis and
/// measures the distance to the block model in operator norm.
pub fn verify_decomposition(pair: &ProjectionPair, dec: &HalmosDecomposition) -> Result<f64> {
    if dec.total_dim() != pair.dim || dec.basis.rows() != pair.dim || dec.basis.cols() != pair.dim {
        return Err(Error::InconsistentDims {
            reason: alloc::format!(
                "decomposition describes dim {} with a {}x{} basis, pair has dim {}",
                dec.total_dim(),
                dec.basis.rows(),
                dec.basis.cols(),
                pair.dim
            ),
        });
    }
    let model = canonical_form(dec)?;
    let b = &dec.basis;
    let p_rot = b.adjoint().matmul(&pair.p.matmul(b)?)?;
    let q_rot = b.adjoint().matmul(&pair.q.matmul(b)?)?;
    let rp = operator_norm(&p_rot.sub(model.p())?);
    let rq = operator_norm(&q_rot.sub(model.q())?);
    Ok(rp.max(rq))
}

/// tr D^{2k+1} for D = P − Q. The trace of an odd power of a Hermitian
/// matrix is real; the imaginary part is discarded after a debug check.
pub fn trace_odd_power(pair: &ProjectionPair, k: usize) -> f64 {
    let d = pair.difference();
    let power = d.matrix_power(2 * k + 1).expect("difference is square");
    let t = power.trace();
    debug_assert!(t.im.abs() <= 1e-6 * (1.0 + t.re.abs()));
    t.re
}

/// Outcome of comparing tr D^{2k+1} across k.
#[derive(Debug, Clone)]
pub struct TraceStabilityReport {
    /// tr D^{2k+1} for k = 0..=k_max.
    pub values: Vec<f64>,
    pub max_deviation: f64,
    pub passed: bool,
}

/// Checks that tr D^{2k+1} is independent of k, the finite-dimensional
/// shadow of the trace-class rigidity statement. Deviations are reported,
/// not thrown: the check is a measurement.
pub fn trace_stability_check(
    pair: &ProjectionPair,
    k_max: usize,
    tol: &ToleranceConfig,
) -> TraceStabilityReport {
    let values: Vec<f64> = (0..=k_max).map(|k| trace_odd_power(pair, k)).collect();
    let base = values[0];
    let max_deviation = values
        .iter()
        .map(|v| (v - base).abs())
        .fold(0.0f64, f64::max);
    TraceStabilityReport {
        values,
        max_deviation,
        passed: max_deviation <= tol.tol_report * pair.dim.max(1) as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::random_unitary;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn half_ones() -> DenseMatrix {
        DenseMatrix::from_vec(2, 2, vec![c(0.5, 0.); 4]).unwrap()
    }

    #[test]
    fn symmetry_projection_correspondence() {
        let zero1 = DenseMatrix::zeros(1, 1);
        let u = symmetry_of(&zero1, &tol()).unwrap();
        assert_eq!(u[(0, 0)], c(-1.0, 0.0));
        let id = DenseMatrix::identity(3);
        assert_eq!(symmetry_of(&id, &tol()).unwrap().entries(), id.entries());

        let u = symmetry_of(&half_ones(), &tol()).unwrap();
        assert_eq!(u[(0, 0)], c(0., 0.));
        assert_eq!(u[(0, 1)], c(1., 0.));
        assert_eq!(u[(1, 0)], c(1., 0.));
        assert_eq!(u[(1, 1)], c(0., 0.));

        let back = projection_of(&u, &tol()).unwrap();
        assert_eq!(back.entries(), half_ones().entries());

        let m1 = DenseMatrix::from_vec(1, 1, vec![c(-1., 0.)]).unwrap();
        let p = projection_of(&m1, &tol()).unwrap();
        assert_eq!(p[(0, 0)], c(0., 0.));
    }

    #[test]
    fn round_trip_recovers_random_projections() {
        // The 2P-I diagonal can round by an ulp against 1; everything else
        // is exact scaling. The round-trip error is representation noise.
        let u = random_unitary(5, 9001);
        let diag = DenseMatrix::from_diag(&[1., 1., 0., 0., 0.]);
        let p = u.matmul(&diag).unwrap().matmul(&u.adjoint()).unwrap();
        let p = p.add(&p.adjoint()).unwrap().scale(c(0.5, 0.));
        let back = projection_of(&symmetry_of(&p, &tol()).unwrap(), &tol()).unwrap();
        assert!(back.max_abs_diff(&p).unwrap() < 1e-15);
    }

    #[test]
    fn spectrum_of_orthogonal_ranges() {
        let pair = ProjectionPair::new(
            DenseMatrix::from_diag(&[1., 0.]),
            DenseMatrix::from_diag(&[0., 1.]),
            &tol(),
        )
        .unwrap();
        let report = difference_spectrum(&pair, &tol()).unwrap();
        assert_eq!(
            (report.plus_ones, report.minus_ones, report.zeros),
            (1, 1, 0)
        );
        assert!(report.paired.is_empty());
    }

    #[test]
    fn spectrum_of_equal_projections_is_kernel() {
        let p = DenseMatrix::from_diag(&[1., 1., 0.]);
        let pair = ProjectionPair::new(p.clone(), p, &tol()).unwrap();
        let report = difference_spectrum(&pair, &tol()).unwrap();
        assert_eq!(report.zeros, 3);
        assert_eq!(report.interior_count(), 0);
    }

    #[test]
    fn spectrum_of_half_turned_line() {
        let pair =
            ProjectionPair::new(DenseMatrix::from_diag(&[1., 0.]), half_ones(), &tol()).unwrap();
        let report = difference_spectrum(&pair, &tol()).unwrap();
        assert_eq!((report.plus_ones, report.minus_ones, report.zeros), (0, 0, 0));
        assert_eq!(report.paired.len(), 1);
        let (lambda, mult) = report.paired[0];
        assert_eq!(mult, 1);
        assert!((lambda - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(report.residual < 1e-12);
    }

    #[test]
    fn decompose_equal_diag_pair() {
        let p = DenseMatrix::from_diag(&[1., 0.]);
        let pair = ProjectionPair::new(p.clone(), p, &tol()).unwrap();
        let dec = halmos_decompose(&pair, &tol()).unwrap();
        assert_eq!((dec.m11, dec.m00, dec.m10, dec.m01), (1, 1, 0, 0));
        assert!(dec.angles.is_empty());
        assert!(verify_decomposition(&pair, &dec).unwrap() < 1e-10);
    }

    #[test]
    fn decompose_orthogonal_diag_pair() {
        let pair = ProjectionPair::new(
            DenseMatrix::from_diag(&[1., 0.]),
            DenseMatrix::from_diag(&[0., 1.]),
            &tol(),
        )
        .unwrap();
        let dec = halmos_decompose(&pair, &tol()).unwrap();
        assert_eq!((dec.m11, dec.m00, dec.m10, dec.m01), (0, 0, 1, 1));
        assert!(verify_decomposition(&pair, &dec).unwrap() < 1e-10);
    }

    #[test]
    fn decompose_half_turned_line_gives_right_angle() {
        let pair =
            ProjectionPair::new(DenseMatrix::from_diag(&[1., 0.]), half_ones(), &tol()).unwrap();
        let dec = halmos_decompose(&pair, &tol()).unwrap();
        assert_eq!((dec.m11, dec.m00, dec.m10, dec.m01), (0, 0, 0, 0));
        assert_eq!(dec.angles.len(), 1);
        assert!((dec.angles[0] - core::f64::consts::FRAC_PI_2).abs() < 1e-12);
        let unit = dec.basis.adjoint().matmul(&dec.basis).unwrap();
        let ures = unit
            .sub(&DenseMatrix::identity(2))
            .unwrap()
            .frobenius_norm();
        assert!(ures < 1e-12);
        assert!(verify_decomposition(&pair, &dec).unwrap() < 1e-10);
    }

    #[test]
    fn canonical_form_blocks() {
        let dec = HalmosDecomposition {
            m11: 1,
            m00: 0,
            m10: 0,
            m01: 0,
            angles: vec![],
            basis: DenseMatrix::identity(1),
        };
        let pair = canonical_form(&dec).unwrap();
        assert_eq!(pair.p()[(0, 0)], Scalar::ONE);
        assert_eq!(pair.q()[(0, 0)], Scalar::ONE);

        let dec = HalmosDecomposition {
            m11: 0,
            m00: 0,
            m10: 1,
            m01: 0,
            angles: vec![],
            basis: DenseMatrix::identity(1),
        };
        let pair = canonical_form(&dec).unwrap();
        assert_eq!(pair.p()[(0, 0)], Scalar::ONE);
        assert_eq!(pair.q()[(0, 0)], c(0., 0.));

        let dec = HalmosDecomposition {
            m11: 0,
            m00: 0,
            m10: 0,
            m01: 0,
            angles: vec![core::f64::consts::FRAC_PI_2],
            basis: DenseMatrix::identity(2),
        };
        let pair = canonical_form(&dec).unwrap();
        assert!((pair.q()[(0, 1)] - c(0., 0.5)).norm() < 1e-15);
        assert!((pair.q()[(1, 0)] - c(0., -0.5)).norm() < 1e-15);
        assert_eq!(pair.p()[(0, 1)], c(0.5, 0.));
    }

    #[test]
    fn verify_detects_mismatched_decomposition() {
        let pair = ProjectionPair::new(
            DenseMatrix::from_diag(&[1., 0.]),
            DenseMatrix::from_diag(&[1., 0.]),
            &tol(),
        )
        .unwrap();
        let other = HalmosDecomposition {
            m11: 0,
            m00: 0,
            m10: 1,
            m01: 1,
            angles: vec![],
            basis: DenseMatrix::identity(2),
        };
        let r = verify_decomposition(&pair, &other).unwrap();
        assert!(r >= 0.1, "mismatch must be visible, got {r}");
    }

    #[test]
    fn conjugated_canonical_pair_round_trips() {
        // Model with every sector populated, scrambled by a random unitary.
        let model = HalmosDecomposition {
            m11: 1,
            m00: 1,
            m10: 1,
            m01: 1,
            angles: vec![0.4, 0.4, 2.2],
            basis: DenseMatrix::identity(10),
        };
        let canon = canonical_form(&model).unwrap();
        let u = random_unitary(10, 77);
        let p = u.matmul(canon.p()).unwrap().matmul(&u.adjoint()).unwrap();
        let q = u.matmul(canon.q()).unwrap().matmul(&u.adjoint()).unwrap();
        let pair = ProjectionPair::new(p, q, &tol()).unwrap();
        let dec = halmos_decompose(&pair, &tol()).unwrap();
        assert_eq!((dec.m11, dec.m00, dec.m10, dec.m01), (1, 1, 1, 1));
        assert_eq!(dec.angles.len(), 3);
        assert!((dec.angles[0] - 0.4).abs() < 1e-7);
        assert!((dec.angles[1] - 0.4).abs() < 1e-7);
        assert!((dec.angles[2] - 2.2).abs() < 1e-7);
        let residual = verify_decomposition(&pair, &dec).unwrap();
        assert!(residual <= 1e-8, "round-trip residual {residual:e}");
    }

    #[test]
    fn trace_odd_power_examples() {
        let pair3 = ProjectionPair::new(
            DenseMatrix::from_diag(&[1., 0., 0.]),
            DenseMatrix::zeros(3, 3),
            &tol(),
        )
        .unwrap();
        for k in 0..5 {
            assert!((trace_odd_power(&pair3, k) - 1.0).abs() < 1e-14);
        }

        let pair2 =
            ProjectionPair::new(DenseMatrix::from_diag(&[1., 0.]), half_ones(), &tol()).unwrap();
        for k in 0..5 {
            assert!(trace_odd_power(&pair2, k).abs() < 1e-14);
        }

        let pair5 = ProjectionPair::new(
            DenseMatrix::block_diag(&[pair3.p(), pair2.p()]).unwrap(),
            DenseMatrix::block_diag(&[pair3.q(), pair2.q()]).unwrap(),
            &tol(),
        )
        .unwrap();
        for k in 0..5 {
            assert!((trace_odd_power(&pair5, k) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn trace_stability_reports() {
        let p = DenseMatrix::from_diag(&[1., 1., 0., 0.]);
        let pair = ProjectionPair::new(p.clone(), p, &tol()).unwrap();
        let report = trace_stability_check(&pair, 4, &tol());
        assert!(report.passed);
        assert!(report.values.iter().all(|v| v.abs() < 1e-14));
        assert_eq!(report.values.len(), 5);
    }

    #[test]
    fn pairing_failure_on_non_projection_input_is_caught_upstream() {
        // A Hermitian D that is not a projection difference, such as
        // diag(0.5), never reaches classify: pair construction rejects it.
        let half = DenseMatrix::from_vec(1, 1, vec![c(0.5, 0.)]).unwrap();
        assert!(matches!(
            ProjectionPair::new(half, DenseMatrix::zeros(1, 1), &tol()),
            Err(Error::ValidationFailed { .. })
        ));
    }
}

//! Fredholm index of QP: ran P → ran Q, computed three independent ways.
//!
//! The three routes are deliberately kept free of shared intermediate
//! results:
//!
//! * rank route: kernel/cokernel dimensions of the restricted operator,
//! * trace route: tr D^{2k+1} for D = P − Q, by explicit matrix powers,
//! * pairing route: the even Fredholm module over H ⊕ H, where the index
//!   appears as (−1)^{k+1}·tr(γ·π(P₁)·[F, π(P₁)]^{2k+2}).
//!
//! For genuine projection pairs all three land on the same integer
//! m10 − m01; the certificate records each value together with its
//! distance to that integer.

use alloc::vec::Vec;

use crate::error::Result;
use crate::matrix::{DenseMatrix, Scalar};
use crate::pair::{trace_odd_power, ProjectionPair};
use crate::validate::{orthonormal_range_basis, rank_with_tol, ToleranceConfig};

/// Rounding guard: a route value farther than this from every integer
/// signals a corrupted input rather than fp noise.
pub const INTEGER_GUARD: f64 = 0.1;

/// Even Fredholm module data over K = H ⊕ H.
///
/// `gamma = diag(I, −I)`, `f = antidiag(I, I)`, `pi_p1 = diag(P, Q)`,
/// `pi_p2 = diag(Q, P)`; all blocks are placed exactly, so the module
/// axioms hold with zero residual.
#[derive(Debug, Clone)]
pub struct FredholmModuleData {
    pub big_dim: usize,
    pub gamma: DenseMatrix,
    pub f: DenseMatrix,
    pub pi_p1: DenseMatrix,
    pub pi_p2: DenseMatrix,
}

/// One route evaluation: raw value, nearest integer, and their distance.
#[derive(Debug, Clone, Copy)]
pub struct IndexRouteValue {
    pub value: f64,
    pub rounded: i64,
    pub residual: f64,
}

impl IndexRouteValue {
    fn of(value: f64) -> Self {
        let rounded = libm::round(value) as i64;
        IndexRouteValue {
            value,
            rounded,
            residual: (value - rounded as f64).abs(),
        }
    }

    /// False flags a value too far from every integer to trust.
    pub fn is_integral(&self) -> bool {
        self.residual <= INTEGER_GUARD
    }
}

/// All three index routes side by side.
#[derive(Debug, Clone)]
pub struct IndexCertificate {
    pub index_by_rank: i64,
    /// tr D^{2k+1} for k = 0..=k_max.
    pub index_by_trace: Vec<IndexRouteValue>,
    /// Pairing at k = 0..=k_max, equal to tr D^{2k+3}.
    pub index_by_pairing: Vec<IndexRouteValue>,
    pub agree: bool,
}

/// Matrix of QP as an operator from ran P to ran Q, in orthonormal range
/// bases: B_Q* · P · B_P (rows = rank Q, cols = rank P). The Q factor of
/// QP is absorbed by the adjoint of the range basis of Q.
pub fn restricted_operator(pair: &ProjectionPair, tol: &ToleranceConfig) -> Result<DenseMatrix> {
    let b_p = orthonormal_range_basis(pair.p(), tol)?;
    let b_q = orthonormal_range_basis(pair.q(), tol)?;
    b_q.adjoint().matmul(&pair.p().matmul(&b_p)?)
}

/// dim ker M − dim ker M* for the restricted operator M, via numerical
/// rank. In finite dimensions this collapses to rank P − rank Q.
pub fn fredholm_index(pair: &ProjectionPair, tol: &ToleranceConfig) -> Result<i64> {
    let m = restricted_operator(pair, tol)?;
    let r = rank_with_tol(&m, tol.tol_rank);
    let kernel = m.cols() - r;
    let cokernel = m.rows() - r;
    Ok(kernel as i64 - cokernel as i64)
}

/// Trace route at one k: tr D^{2k+1} with its nearest integer.
pub fn index_via_trace(pair: &ProjectionPair, k: usize) -> IndexRouteValue {
    IndexRouteValue::of(trace_odd_power(pair, k))
}

/// Assembles the even Fredholm module of the pair over H ⊕ H.
pub fn build_fredholm_module(pair: &ProjectionPair) -> FredholmModuleData {
    let n = pair.dim();
    let big_dim = 2 * n;
    let mut gamma = DenseMatrix::zeros(big_dim, big_dim);
    let mut f = DenseMatrix::zeros(big_dim, big_dim);
    for i in 0..n {
        gamma[(i, i)] = Scalar::ONE;
        gamma[(n + i, n + i)] = -Scalar::ONE;
        f[(i, n + i)] = Scalar::ONE;
        f[(n + i, i)] = Scalar::ONE;
    }
    let pi_p1 = DenseMatrix::block_diag(&[pair.p(), pair.q()]).expect("square blocks");
    let pi_p2 = DenseMatrix::block_diag(&[pair.q(), pair.p()]).expect("square blocks");
    FredholmModuleData {
        big_dim,
        gamma,
        f,
        pi_p1,
        pi_p2,
    }
}

/// tr(A·B) without forming A·B.
fn trace_of_product(a: &DenseMatrix, b: &DenseMatrix) -> Scalar {
    debug_assert_eq!(a.cols(), b.rows());
    debug_assert_eq!(a.rows(), b.cols());
    let mut t = Scalar::new(0.0, 0.0);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            t += a[(i, j)] * b[(j, i)];
        }
    }
    t
}

/// Pairing of the module with the class of P₁ at parameter k:
/// (−1)^{k+1}·tr(γ·π(P₁)·[F, π(P₁)]^{2k+2}).
///
/// The commutator square is −diag(D², D²), so the value collapses to
/// tr D^{2k+3}; the computation here walks the big matrices directly and
/// leaves that collapse to the caller as a cross-check.
pub fn connes_pairing(module: &FredholmModuleData, k: usize) -> f64 {
    let comm = module
        .f
        .matmul(&module.pi_p1)
        .and_then(|fp| module.pi_p1.matmul(&module.f).and_then(|pf| fp.sub(&pf)))
        .expect("module blocks are square");
    let comm_sq = comm.matmul(&comm).expect("square");
    let mut acc = comm_sq.clone();
    for _ in 0..k {
        acc = acc.matmul(&comm_sq).expect("square");
    }
    let front = module
        .gamma
        .matmul(&module.pi_p1)
        .expect("square");
    let t = trace_of_product(&front, &acc);
    debug_assert!(t.im.abs() <= 1e-6 * (1.0 + t.re.abs()));
    let sign = if k.is_multiple_of(2) { -1.0 } else { 1.0 };
    sign * t.re
}

/// Evaluates every route for k = 0..=k_max and reports whether they all
/// land on the same integer within the rounding guard.
pub fn index_theorem_check(
    pair: &ProjectionPair,
    k_max: usize,
    tol: &ToleranceConfig,
) -> Result<IndexCertificate> {
    let index_by_rank = fredholm_index(pair, tol)?;
    let module = build_fredholm_module(pair);
    let index_by_trace: Vec<IndexRouteValue> =
        (0..=k_max).map(|k| index_via_trace(pair, k)).collect();
    let index_by_pairing: Vec<IndexRouteValue> = (0..=k_max)
        .map(|k| IndexRouteValue::of(connes_pairing(&module, k)))
        .collect();
    let agree = index_by_trace
        .iter()
        .chain(index_by_pairing.iter())
        .all(|r| r.is_integral() && r.rounded == index_by_rank);
    Ok(IndexCertificate {
        index_by_rank,
        index_by_trace,
        index_by_pairing,
        agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn pair_of(p: DenseMatrix, q: DenseMatrix) -> ProjectionPair {
        ProjectionPair::new(p, q, &tol()).unwrap()
    }

    fn half_ones() -> DenseMatrix {
        DenseMatrix::from_vec(2, 2, vec![c(0.5, 0.); 4]).unwrap()
    }

    #[test]
    fn restricted_operator_shapes_and_values() {
        let p = DenseMatrix::from_diag(&[1., 0.]);
        let m = restricted_operator(&pair_of(p.clone(), p.clone()), &tol()).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 1));
        assert!((m[(0, 0)] - Scalar::ONE).norm() < 1e-12);

        let m = restricted_operator(
            &pair_of(p.clone(), DenseMatrix::from_diag(&[0., 1.])),
            &tol(),
        )
        .unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 1));
        assert!(m[(0, 0)].norm() < 1e-12);

        let m = restricted_operator(&pair_of(p, half_ones()), &tol()).unwrap();
        assert!((m[(0, 0)].norm() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn fredholm_index_examples() {
        let pair = pair_of(
            DenseMatrix::from_diag(&[1., 1., 0.]),
            DenseMatrix::from_diag(&[1., 0., 0.]),
        );
        assert_eq!(fredholm_index(&pair, &tol()).unwrap(), 1);

        let p = DenseMatrix::from_diag(&[1., 0., 1.]);
        assert_eq!(fredholm_index(&pair_of(p.clone(), p), &tol()).unwrap(), 0);

        let pair = pair_of(DenseMatrix::from_diag(&[1., 0.]), half_ones());
        assert_eq!(fredholm_index(&pair, &tol()).unwrap(), 0);
    }

    #[test]
    fn trace_route_examples() {
        let pair = pair_of(DenseMatrix::from_diag(&[1., 0., 0.]), DenseMatrix::zeros(3, 3));
        let r = index_via_trace(&pair, 2);
        assert_eq!(r.rounded, 1);
        assert!(r.residual < 1e-12);
        assert!(r.is_integral());

        let p = DenseMatrix::from_diag(&[1., 1.]);
        let r = index_via_trace(&pair_of(p.clone(), p), 3);
        assert_eq!(r.rounded, 0);
        assert_eq!(r.residual, 0.0);

        let pair = pair_of(DenseMatrix::from_diag(&[1., 0.]), half_ones());
        let r = index_via_trace(&pair, 1);
        assert_eq!(r.rounded, 0);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn module_layout_for_tiny_pairs() {
        let one = DenseMatrix::identity(1);
        let module = build_fredholm_module(&pair_of(one.clone(), one));
        assert_eq!(module.big_dim, 2);
        assert_eq!(module.gamma[(0, 0)], Scalar::ONE);
        assert_eq!(module.gamma[(1, 1)], -Scalar::ONE);
        assert_eq!(module.f[(0, 1)], Scalar::ONE);
        assert_eq!(module.f[(1, 0)], Scalar::ONE);
        assert_eq!(module.pi_p1.entries(), DenseMatrix::identity(2).entries());
        assert_eq!(module.pi_p2.entries(), DenseMatrix::identity(2).entries());

        let module = build_fredholm_module(&pair_of(
            DenseMatrix::from_diag(&[1., 0.]),
            DenseMatrix::zeros(2, 2),
        ));
        let expect = DenseMatrix::from_diag(&[1., 0., 0., 0.]);
        assert_eq!(module.pi_p1.entries(), expect.entries());
    }

    #[test]
    fn module_axioms_hold_exactly() {
        let pair = pair_of(DenseMatrix::from_diag(&[1., 0.]), half_ones());
        let module = build_fredholm_module(&pair);
        let id = DenseMatrix::identity(module.big_dim);
        assert_eq!(
            module.gamma.matmul(&module.gamma).unwrap().entries(),
            id.entries()
        );
        assert_eq!(module.f.matmul(&module.f).unwrap().entries(), id.entries());
        let anti = module
            .gamma
            .matmul(&module.f)
            .unwrap()
            .add(&module.f.matmul(&module.gamma).unwrap())
            .unwrap();
        assert_eq!(anti.max_abs(), 0.0);
    }

    #[test]
    fn commutator_square_is_minus_d_squared() {
        let pair = pair_of(DenseMatrix::from_diag(&[1., 0.]), half_ones());
        let module = build_fredholm_module(&pair);
        let fp = module.f.matmul(&module.pi_p1).unwrap();
        let pf = module.pi_p1.matmul(&module.f).unwrap();
        let comm = fp.sub(&pf).unwrap();
        let sq = comm.matmul(&comm).unwrap();
        let d = pair.difference();
        let d2 = d.matmul(&d).unwrap();
        let expect = DenseMatrix::block_diag(&[&d2, &d2])
            .unwrap()
            .scale(c(-1.0, 0.0));
        assert!(sq.max_abs_diff(&expect).unwrap() <= 1e-12);
    }

    #[test]
    fn pairing_examples() {
        let pair = pair_of(DenseMatrix::from_diag(&[1., 0., 0.]), DenseMatrix::zeros(3, 3));
        let module = build_fredholm_module(&pair);
        assert!((connes_pairing(&module, 0) - 1.0).abs() < 1e-12);

        let p = DenseMatrix::from_diag(&[1., 0.]);
        let module = build_fredholm_module(&pair_of(p.clone(), p));
        for k in 0..3 {
            assert_eq!(connes_pairing(&module, k), 0.0);
        }

        let pair = pair_of(DenseMatrix::from_diag(&[1., 0.]), half_ones());
        let module = build_fredholm_module(&pair);
        assert!(connes_pairing(&module, 1).abs() < 1e-12);
    }

    #[test]
    fn pairing_matches_trace_identity() {
        let pair = pair_of(DenseMatrix::from_diag(&[1., 1., 0.]), half_ones_3());
        let module = build_fredholm_module(&pair);
        for k in 0..4 {
            let lhs = connes_pairing(&module, k);
            let rhs = trace_odd_power(&pair, k + 1);
            assert!((lhs - rhs).abs() < 1e-10, "k={k}: {lhs} vs {rhs}");
        }
    }

    fn half_ones_3() -> DenseMatrix {
        // Rank-1 projection onto (1,1,1)/sqrt(3), embedded in dim 3.
        DenseMatrix::from_fn(3, 3, |_, _| Scalar::new(1.0 / 3.0, 0.0))
    }

    #[test]
    fn certificate_agrees_on_nested_diagonals() {
        let pair = pair_of(
            DenseMatrix::from_diag(&[1., 1., 0., 0.]),
            DenseMatrix::from_diag(&[1., 0., 0., 0.]),
        );
        let cert = index_theorem_check(&pair, 3, &tol()).unwrap();
        assert_eq!(cert.index_by_rank, 1);
        assert!(cert.agree);
        assert_eq!(cert.index_by_trace.len(), 4);
        assert_eq!(cert.index_by_pairing.len(), 4);
        for r in cert.index_by_trace.iter().chain(cert.index_by_pairing.iter()) {
            assert_eq!(r.rounded, 1);
            assert!(r.residual < 1e-10);
        }
    }
}

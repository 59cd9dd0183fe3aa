//! Acceptance gate: every advertised guarantee of the library, exercised
//! end to end on seeded corpora with explicit wall-clock budgets. Each
//! test prints exactly one PASS or FAIL line; run with `--nocapture` to
//! see the lines on success.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use projcalc_core::index::{
    build_fredholm_module, connes_pairing, fredholm_index, index_theorem_check, index_via_trace,
};
use projcalc_core::pair::{
    difference_spectrum, halmos_decompose, trace_odd_power, verify_decomposition, ProjectionPair,
};
use projcalc_core::rep::{random_pair_from_spec, spec_of_decomposition, RepSpec};
use projcalc_core::rng::{random_unitary, Rng};
use projcalc_core::words::{
    cp_multiply, evaluate_cp, fp_multiply, iso_from_free_product, iso_to_free_product,
    CrossedElement, FreeGroupWord,
};
use projcalc_core::{DenseMatrix, Scalar, ToleranceConfig};

const PI: f64 = core::f64::consts::PI;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn ensure(cond: bool, msg: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg)
    }
}

fn within_budget(start: Instant, budget: Duration) -> Result<(), String> {
    let elapsed = start.elapsed();
    ensure(
        elapsed < budget,
        format!("runtime {elapsed:?} exceeded budget {budget:?}"),
    )
}

fn report(n: usize, what: &str, outcome: Result<(), String>) {
    match outcome {
        Ok(()) => println!("PASS criterion {n}: {what}"),
        Err(e) => {
            println!("FAIL criterion {n}: {what} ({e})");
            panic!("criterion {n} failed: {e}");
        }
    }
}

/// 200 seeded ground-truth instances: dim <= 60, corner dims <= 5, at most
/// 10 distinct angles per spec, pairwise angle separation >= 2e-3.
fn corpus() -> &'static [(RepSpec, ProjectionPair)] {
    static CORPUS: OnceLock<Vec<(RepSpec, ProjectionPair)>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut rng = Rng::new(0x5EED_2026);
        let mut out = Vec::with_capacity(200);
        for i in 0..200u64 {
            let spec = loop {
                let m11 = rng.below(6) as usize;
                let m00 = rng.below(6) as usize;
                let m10 = rng.below(6) as usize;
                let m01 = rng.below(6) as usize;
                let n_angles = rng.below(11) as usize;
                let mut angles: Vec<f64> = Vec::with_capacity(n_angles);
                while angles.len() < n_angles {
                    let theta = rng.uniform_in(0.02, PI - 0.02);
                    if angles.iter().all(|&a| (a - theta).abs() >= 2e-3) {
                        angles.push(theta);
                    }
                }
                angles.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
                let points: Vec<(f64, usize)> = angles
                    .iter()
                    .map(|&a| (a, 1 + rng.below(2) as usize))
                    .collect();
                match RepSpec::new(m11, m00, m10, m01, points) {
                    Ok(s) => break s,
                    Err(_) => continue,
                }
            };
            assert!(spec.total_dim() <= 60);
            let pair = random_pair_from_spec(&spec, 0xC0DE_0000 + i)
                .expect("spec-built pairs validate");
            out.push((spec, pair));
        }
        out
    })
}

fn random_projection(dim: usize, rank: usize, seed: u64) -> DenseMatrix {
    let u = random_unitary(dim, seed);
    let mut diag = vec![0.0f64; dim];
    for d in diag.iter_mut().take(rank) {
        *d = 1.0;
    }
    let d = DenseMatrix::from_diag(&diag);
    u.matmul(&d)
        .and_then(|ud| ud.matmul(&u.adjoint()))
        .expect("square factors")
}

fn random_crossed(m: usize, rng: &mut Rng) -> CrossedElement {
    let eps = rng.below(2) == 1;
    let budget = rng.below(21);
    let mut word = FreeGroupWord::identity(m);
    let mut used = 0u64;
    while used < budget {
        let g = 1 + rng.below(m as u64) as usize;
        let mag = 1 + rng.below((budget - used).min(3)) as i64;
        let e = if rng.below(2) == 1 { mag } else { -mag };
        word = word
            .concat(&FreeGroupWord::new(m, &[(g, e)]).expect("generator in range"))
            .expect("same rank");
        used += mag as u64;
    }
    CrossedElement::new(eps, word)
}

#[test]
fn criterion_1_index_identity() {
    let outcome = (|| {
        let start = Instant::now();
        let t = tol();
        for (i, (_, pair)) in corpus().iter().enumerate() {
            let idx = fredholm_index(pair, &t).map_err(|e| format!("pair {i}: {e}"))?;
            for k in 0..=3 {
                let route = index_via_trace(pair, k);
                ensure(
                    route.residual < 1e-6,
                    format!(
                        "pair {i}, k={k}: trace {} off integer by {}",
                        route.value, route.residual
                    ),
                )?;
                ensure(
                    route.rounded == idx,
                    format!(
                        "pair {i}, k={k}: trace route {} vs rank route {idx}",
                        route.rounded
                    ),
                )?;
            }
        }
        within_budget(start, Duration::from_secs(30))
    })();
    report(
        1,
        "rank index equals every rounded odd trace on 200 seeded pairs",
        outcome,
    );
}

#[test]
fn criterion_2_pairing_identity() {
    let outcome = (|| {
        let start = Instant::now();
        let t = tol();
        for (i, (_, pair)) in corpus().iter().enumerate() {
            let idx = fredholm_index(pair, &t).map_err(|e| format!("pair {i}: {e}"))?;
            let module = build_fredholm_module(pair);
            for k in 0..=2 {
                let pv = connes_pairing(&module, k);
                let tr = trace_odd_power(pair, k + 1);
                ensure(
                    (pv - tr).abs() <= 1e-6,
                    format!("pair {i}, k={k}: pairing {pv} vs trace {tr}"),
                )?;
                ensure(
                    pv.round() as i64 == idx,
                    format!("pair {i}, k={k}: pairing rounds to {} vs index {idx}", pv.round()),
                )?;
            }
        }
        within_budget(start, Duration::from_secs(60))
    })();
    report(
        2,
        "module pairing matches the odd-trace value and the rank index",
        outcome,
    );
}

#[test]
fn criterion_3_trace_rigidity() {
    let outcome = (|| {
        for (i, (spec, pair)) in corpus().iter().enumerate() {
            let expected = spec.m10 as f64 - spec.m01 as f64;
            let dim = pair.dim() as f64;
            for k in 0..=4 {
                let value = trace_odd_power(pair, k);
                ensure(
                    (value - expected).abs() < 1e-6 * dim,
                    format!("pair {i}, k={k}: trace {value} vs corner gap {expected}"),
                )?;
                ensure(
                    value.round() == expected,
                    format!("pair {i}, k={k}: trace {value} rounds off {expected}"),
                )?;
            }
        }
        Ok(())
    })();
    report(
        3,
        "every odd trace equals the corner-dimension gap m10 - m01",
        outcome,
    );
}

#[test]
fn criterion_4_spectrum_symmetry() {
    let outcome = (|| {
        let t = tol();
        for (i, (_, pair)) in corpus().iter().enumerate() {
            let rep = difference_spectrum(pair, &t).map_err(|e| format!("pair {i}: {e}"))?;
            ensure(
                rep.residual < 1e-7,
                format!("corpus pair {i}: pairing residual {}", rep.residual),
            )?;
        }
        let mut rng = Rng::new(0xFACE_2026);
        for i in 0..100u64 {
            let dim = 2 + rng.below(23) as usize;
            let rank_p = rng.below(dim as u64 + 1) as usize;
            let rank_q = rng.below(dim as u64 + 1) as usize;
            let p = random_projection(dim, rank_p, 0xA11C_0000 + 2 * i);
            let q = random_projection(dim, rank_q, 0xA11C_0001 + 2 * i);
            let pair =
                ProjectionPair::new(p, q, &t).map_err(|e| format!("random pair {i}: {e}"))?;
            let rep = difference_spectrum(&pair, &t)
                .map_err(|e| format!("random pair {i}: {e}"))?;
            ensure(
                rep.residual < 1e-7,
                format!("random pair {i}: pairing residual {}", rep.residual),
            )?;
            let counted =
                rep.plus_ones + rep.minus_ones + rep.zeros + rep.interior_count();
            ensure(
                counted == dim,
                format!("random pair {i}: classified {counted} of {dim} eigenvalues"),
            )?;
        }
        Ok(())
    })();
    report(
        4,
        "interior difference eigenvalues pair off sign-symmetrically",
        outcome,
    );
}

#[test]
fn criterion_5_decomposition_round_trip() {
    let outcome = (|| {
        let t = tol();
        for (i, (spec, pair)) in corpus().iter().enumerate() {
            let dec = halmos_decompose(pair, &t).map_err(|e| format!("pair {i}: {e}"))?;
            let residual =
                verify_decomposition(pair, &dec).map_err(|e| format!("pair {i}: {e}"))?;
            ensure(
                residual <= 1e-8,
                format!("pair {i}: reconstruction residual {residual}"),
            )?;
            let back = spec_of_decomposition(&dec, &t);
            ensure(
                (back.m11, back.m00, back.m10, back.m01)
                    == (spec.m11, spec.m00, spec.m10, spec.m01),
                format!(
                    "pair {i}: corners ({},{},{},{}) vs ({},{},{},{})",
                    back.m11, back.m00, back.m10, back.m01,
                    spec.m11, spec.m00, spec.m10, spec.m01
                ),
            )?;
            ensure(
                back.points.len() == spec.points.len(),
                format!(
                    "pair {i}: {} recovered angles vs {}",
                    back.points.len(),
                    spec.points.len()
                ),
            )?;
            for (j, (&(ta, ma), &(tb, mb))) in
                back.points.iter().zip(spec.points.iter()).enumerate()
            {
                ensure(
                    ma == mb,
                    format!("pair {i}, angle {j}: multiplicity {ma} vs {mb}"),
                )?;
                ensure(
                    (ta - tb).abs() <= 1e-8,
                    format!("pair {i}, angle {j}: {ta} vs {tb}"),
                )?;
            }
        }
        Ok(())
    })();
    report(
        5,
        "decompose recovers the generating spec and reconstructs the pair",
        outcome,
    );
}

#[test]
fn criterion_6_isomorphism_suite() {
    let outcome = (|| {
        let start = Instant::now();
        let t = tol();
        for &n in &[2usize, 3, 5] {
            let m = n - 1;
            let mut rng = Rng::new(0x150_0000 + n as u64);
            let elements: Vec<CrossedElement> =
                (0..1000).map(|_| random_crossed(m, &mut rng)).collect();
            for (i, x) in elements.iter().enumerate() {
                let image = iso_to_free_product(x);
                let back = iso_from_free_product(&image)
                    .map_err(|e| format!("n={n}, element {i}: {e}"))?;
                ensure(
                    &back == x,
                    format!("n={n}, element {i}: round-trip {back} vs {x}"),
                )?;
            }
            for (i, pair) in elements.windows(2).enumerate() {
                let (x, y) = (&pair[0], &pair[1]);
                let z = cp_multiply(x, y).map_err(|e| format!("n={n}, window {i}: {e}"))?;
                let transported = fp_multiply(&iso_to_free_product(x), &iso_to_free_product(y))
                    .map_err(|e| format!("n={n}, window {i}: {e}"))?;
                ensure(
                    iso_to_free_product(&z) == transported,
                    format!("n={n}, window {i}: product image mismatch"),
                )?;
            }
            let v = CrossedElement::new(true, FreeGroupWord::identity(m));
            for g in 1..=m {
                let w = CrossedElement::new(
                    false,
                    FreeGroupWord::new(m, &[(g, 1)]).expect("generator in range"),
                );
                let lhs = cp_multiply(&v, &cp_multiply(&w, &v).expect("same rank"))
                    .expect("same rank");
                let rhs = w.inverse();
                ensure(
                    lhs == rhs,
                    format!("n={n}: V W{g} V = {lhs} but W{g} inverse is {rhs}"),
                )?;
                ensure(
                    iso_to_free_product(&lhs) == iso_to_free_product(&rhs),
                    format!("n={n}: relation images differ for W{g}"),
                )?;
            }
            let dim = 8;
            let projections: Vec<DenseMatrix> = (0..n)
                .map(|j| {
                    let mut r = Rng::new(0xBEEF_0000 + (n * 100 + j) as u64);
                    let rank = 1 + r.below(dim as u64 - 1) as usize;
                    random_projection(dim, rank, 0xBEEF_1000 + (n * 100 + j) as u64)
                })
                .collect();
            for (i, pair) in elements.windows(2).step_by(10).enumerate() {
                let (x, y) = (&pair[0], &pair[1]);
                let z = cp_multiply(x, y).expect("same rank");
                let ez = evaluate_cp(&z, &projections, &t)
                    .map_err(|e| format!("n={n}, eval {i}: {e}"))?;
                let ex = evaluate_cp(x, &projections, &t)
                    .map_err(|e| format!("n={n}, eval {i}: {e}"))?;
                let ey = evaluate_cp(y, &projections, &t)
                    .map_err(|e| format!("n={n}, eval {i}: {e}"))?;
                let prod = ex.matmul(&ey).expect("square");
                let diff = ez.max_abs_diff(&prod).expect("same dims");
                ensure(
                    diff <= 1e-10 * dim as f64,
                    format!("n={n}, eval {i}: functoriality gap {diff}"),
                )?;
            }
        }
        within_budget(start, Duration::from_secs(10))
    })();
    report(
        6,
        "crossed-product words round-trip, transport, and evaluate functorially",
        outcome,
    );
}

#[test]
fn criterion_7_module_axioms() {
    let outcome = (|| {
        for (i, (_, pair)) in corpus().iter().enumerate() {
            let module = build_fredholm_module(pair);
            let big_id = DenseMatrix::identity(module.big_dim);
            let gamma_sq = module.gamma.matmul(&module.gamma).expect("square");
            let f_sq = module.f.matmul(&module.f).expect("square");
            ensure(
                gamma_sq.max_abs_diff(&big_id).expect("same dims") == 0.0,
                format!("pair {i}: grading does not square to the identity"),
            )?;
            ensure(
                f_sq.max_abs_diff(&big_id).expect("same dims") == 0.0,
                format!("pair {i}: F does not square to the identity"),
            )?;
            let gf = module.gamma.matmul(&module.f).expect("square");
            let fg = module.f.matmul(&module.gamma).expect("square");
            ensure(
                gf.add(&fg).expect("same dims").max_abs() == 0.0,
                format!("pair {i}: F fails to anticommute with the grading"),
            )?;
            let comm = module
                .f
                .matmul(&module.pi_p1)
                .and_then(|fp| {
                    module.pi_p1.matmul(&module.f).and_then(|pf| fp.sub(&pf))
                })
                .expect("square");
            let comm_sq = comm.matmul(&comm).expect("square");
            let d = pair.difference();
            let d_sq = d.matmul(&d).expect("square");
            let target = DenseMatrix::block_diag(&[&d_sq, &d_sq])
                .expect("square blocks")
                .scale(Scalar::new(-1.0, 0.0));
            let gap = comm_sq.max_abs_diff(&target).expect("same dims");
            ensure(
                gap <= 1e-12,
                format!("pair {i}: commutator square off by {gap}"),
            )?;
        }
        Ok(())
    })();
    report(
        7,
        "grading, F, and the commutator square satisfy the module axioms",
        outcome,
    );
}

#[test]
fn criterion_8_worked_micro_instances() {
    let outcome = (|| {
        let t = tol();
        let p = DenseMatrix::from_diag(&[1.0, 0.0]);
        let q = DenseMatrix::from_fn(2, 2, |_, _| Scalar::new(0.5, 0.0));
        let pair = ProjectionPair::new(p, q, &t).map_err(|e| format!("half-ones pair: {e}"))?;
        let cert = index_theorem_check(&pair, 2, &t)
            .map_err(|e| format!("half-ones pair: {e}"))?;
        ensure(
            cert.index_by_rank == 0 && cert.agree,
            format!("half-ones pair: index {} agree {}", cert.index_by_rank, cert.agree),
        )?;
        for k in 0..=4 {
            let value = trace_odd_power(&pair, k);
            ensure(
                value == 0.0,
                format!("half-ones pair, k={k}: trace {value} not exactly zero"),
            )?;
        }
        let dec = halmos_decompose(&pair, &t).map_err(|e| format!("half-ones pair: {e}"))?;
        ensure(
            dec.angles.len() == 1 && (dec.angles[0] - PI / 2.0).abs() <= 1e-12,
            format!("half-ones pair: angles {:?}", dec.angles),
        )?;
        ensure(
            dec.m11 + dec.m00 + dec.m10 + dec.m01 == 0,
            format!(
                "half-ones pair: corners ({},{},{},{})",
                dec.m11, dec.m00, dec.m10, dec.m01
            ),
        )?;

        let p = DenseMatrix::from_diag(&[1.0, 1.0, 0.0]);
        let q = DenseMatrix::from_diag(&[1.0, 0.0, 0.0]);
        let pair = ProjectionPair::new(p, q, &t).map_err(|e| format!("nested pair: {e}"))?;
        let cert = index_theorem_check(&pair, 2, &t).map_err(|e| format!("nested pair: {e}"))?;
        ensure(
            cert.index_by_rank == 1,
            format!("nested pair: rank route {}", cert.index_by_rank),
        )?;
        ensure(cert.agree, "nested pair: routes disagree".into())?;
        for route in cert.index_by_trace.iter().chain(cert.index_by_pairing.iter()) {
            ensure(
                route.rounded == 1 && route.residual <= 1e-12,
                format!("nested pair: route value {}", route.value),
            )?;
        }
        Ok(())
    })();
    report(
        8,
        "the two worked micro-instances land exactly on their integers",
        outcome,
    );
}

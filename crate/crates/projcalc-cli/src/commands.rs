//! One function per subcommand. Each returns the full `Report`; the
//! caller prints it and maps `pass` onto the exit code. All numeric
//! payload values are taken verbatim from the core library.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use projcalc_core::index::{build_fredholm_module, index_theorem_check, IndexCertificate};
use projcalc_core::pair::{
    difference_spectrum, halmos_decompose, trace_odd_power, trace_stability_check,
    verify_decomposition, HalmosDecomposition, ProjectionPair, SpectrumReport,
};
use projcalc_core::rep::{
    build_representation, random_pair_from_spec, spec_of_decomposition, RepSpec, SectorKind,
};
use projcalc_core::validate::{validate_projection, ValidationReport};
use projcalc_core::words::{
    cp_multiply, evaluate_cp, evaluate_fp, fp_multiply, iso_from_free_product,
    iso_to_free_product, parse_crossed, parse_free_product,
};
use projcalc_core::{DenseMatrix, Scalar, ToleranceConfig};
use serde_json::{json, Value};

use crate::formats::{
    read_matrix, read_spec, CliError, InputDigest, MatrixFile, Report, SpecFile, TolerancesOut,
    SCHEMA,
};

fn report(
    command: &str,
    inputs: Vec<InputDigest>,
    tol: &ToleranceConfig,
    result: Value,
    residuals: BTreeMap<String, f64>,
    pass: bool,
) -> Report {
    Report {
        schema: SCHEMA,
        command: command.into(),
        inputs,
        tolerances: TolerancesOut::of(tol),
        result,
        residuals,
        pass,
    }
}

fn matrix_value(m: &DenseMatrix) -> Value {
    serde_json::to_value(MatrixFile::from_matrix(m)).expect("matrix serializes")
}

fn spectrum_value(rep: &SpectrumReport) -> Value {
    json!({
        "plus_ones": rep.plus_ones,
        "minus_ones": rep.minus_ones,
        "zeros": rep.zeros,
        "paired": rep.paired.iter()
            .map(|&(lambda, pairs)| json!({"lambda": lambda, "pairs": pairs}))
            .collect::<Vec<_>>(),
        "residual": rep.residual,
    })
}

fn decomposition_value(dec: &HalmosDecomposition) -> Value {
    json!({
        "m11": dec.m11,
        "m00": dec.m00,
        "m10": dec.m10,
        "m01": dec.m01,
        "angles": dec.angles,
        "dim": dec.total_dim(),
        "basis": matrix_value(&dec.basis),
    })
}

fn certificate_value(cert: &IndexCertificate) -> Value {
    let routes = |values: &[projcalc_core::index::IndexRouteValue]| {
        values
            .iter()
            .enumerate()
            .map(|(k, r)| {
                json!({"k": k, "value": r.value, "rounded": r.rounded, "residual": r.residual})
            })
            .collect::<Vec<_>>()
    };
    json!({
        "index_by_rank": cert.index_by_rank,
        "trace": routes(&cert.index_by_trace),
        "pairing": routes(&cert.index_by_pairing),
        "agree": cert.agree,
    })
}

fn validation_value(rep: &ValidationReport) -> Value {
    json!({
        "equation_residual": rep.equation_residual,
        "adjoint_residual": rep.adjoint_residual,
        "passed": rep.passed(),
    })
}

fn load_pair(
    p_path: &Path,
    q_path: &Path,
    tol: &ToleranceConfig,
) -> Result<(ProjectionPair, Vec<InputDigest>), CliError> {
    let (p, p_digest) = read_matrix("P", p_path)?;
    let (q, q_digest) = read_matrix("Q", q_path)?;
    let pair = ProjectionPair::new(p, q, tol)?;
    Ok((pair, vec![p_digest, q_digest]))
}

pub fn cmd_decompose(
    p_path: &Path,
    q_path: &Path,
    tol: &ToleranceConfig,
) -> Result<Report, CliError> {
    let (pair, inputs) = load_pair(p_path, q_path, tol)?;
    let dec = halmos_decompose(&pair, tol)?;
    let spectrum = difference_spectrum(&pair, tol)?;
    let verification = verify_decomposition(&pair, &dec)?;
    let mut residuals = BTreeMap::new();
    residuals.insert("verification".into(), verification);
    residuals.insert("spectrum".into(), spectrum.residual);
    let pass = verification <= tol.tol_report;
    let spec = spec_of_decomposition(&dec, tol);
    let result = json!({
        "decomposition": decomposition_value(&dec),
        "spectrum": spectrum_value(&spectrum),
        "spec": serde_json::to_value(SpecFile::from_spec(&spec))?,
    });
    Ok(report("decompose", inputs, tol, result, residuals, pass))
}

pub fn cmd_index(
    p_path: &Path,
    q_path: &Path,
    k_max: usize,
    tol: &ToleranceConfig,
) -> Result<Report, CliError> {
    let (pair, inputs) = load_pair(p_path, q_path, tol)?;
    let cert = index_theorem_check(&pair, k_max, tol)?;
    let worst = cert
        .index_by_trace
        .iter()
        .chain(cert.index_by_pairing.iter())
        .map(|r| r.residual)
        .fold(0.0f64, f64::max);
    let mut residuals = BTreeMap::new();
    residuals.insert("max_route_residual".into(), worst);
    let pass = cert.agree;
    let result = json!({
        "index": cert.index_by_rank,
        "certificate": certificate_value(&cert),
    });
    Ok(report("index", inputs, tol, result, residuals, pass))
}

pub fn cmd_word_multiply(
    left: &str,
    right: &str,
    n: Option<usize>,
    m: Option<usize>,
    tol: &ToleranceConfig,
) -> Result<Report, CliError> {
    let result = match (n, m) {
        (Some(n), None) => {
            let a = parse_free_product(left, n)?;
            let b = parse_free_product(right, n)?;
            let product = fp_multiply(&a, &b)?;
            json!({
                "algebra": "free-product",
                "n": n,
                "left": a.to_string(),
                "right": b.to_string(),
                "product": product.to_string(),
            })
        }
        (None, Some(m)) => {
            let a = parse_crossed(left, m)?;
            let b = parse_crossed(right, m)?;
            let product = cp_multiply(&a, &b)?;
            json!({
                "algebra": "crossed-product",
                "m": m,
                "left": a.to_string(),
                "right": b.to_string(),
                "product": product.to_string(),
            })
        }
        _ => {
            return Err(CliError::parse(
                "pass exactly one of --n (free product) or --m (crossed product)",
            ))
        }
    };
    Ok(report(
        "word multiply",
        Vec::new(),
        tol,
        result,
        BTreeMap::new(),
        true,
    ))
}

pub fn cmd_word_iso(
    input: &str,
    n: Option<usize>,
    m: Option<usize>,
    tol: &ToleranceConfig,
) -> Result<Report, CliError> {
    let result = match (n, m) {
        (None, Some(m)) => {
            let x = parse_crossed(input, m)?;
            let image = iso_to_free_product(&x);
            json!({
                "direction": "to-free-product",
                "m": m,
                "input": x.to_string(),
                "image": image.to_string(),
            })
        }
        (Some(n), None) => {
            let a = parse_free_product(input, n)?;
            let image = iso_from_free_product(&a)?;
            json!({
                "direction": "from-free-product",
                "n": n,
                "input": a.to_string(),
                "image": image.to_string(),
            })
        }
        _ => {
            return Err(CliError::parse(
                "pass exactly one of --m (crossed input) or --n (free-product input)",
            ))
        }
    };
    Ok(report(
        "word iso",
        Vec::new(),
        tol,
        result,
        BTreeMap::new(),
        true,
    ))
}

pub fn cmd_word_eval(
    input: &str,
    projection_paths: &[std::path::PathBuf],
    crossed: bool,
    tol: &ToleranceConfig,
) -> Result<Report, CliError> {
    let mut inputs = Vec::new();
    let mut projections = Vec::new();
    for (i, path) in projection_paths.iter().enumerate() {
        let (p, digest) = read_matrix(&format!("P{}", i + 1), path)?;
        inputs.push(digest);
        projections.push(p);
    }
    let n = projections.len();
    let (normal_form, image, value) = if crossed {
        if n == 0 {
            return Err(CliError::parse("--crossed needs at least one projection"));
        }
        let x = parse_crossed(input, n - 1)?;
        let image = iso_to_free_product(&x);
        let value = evaluate_cp(&x, &projections, tol)?;
        (x.to_string(), Some(image.to_string()), value)
    } else {
        let a = parse_free_product(input, n)?;
        let value = evaluate_fp(&a, &projections, tol)?;
        (a.to_string(), None, value)
    };
    let identity = DenseMatrix::identity(value.rows());
    let unitarity = value
        .adjoint()
        .matmul(&value)
        .and_then(|g| g.max_abs_diff(&identity))?;
    let mut residuals = BTreeMap::new();
    residuals.insert("unitarity".into(), unitarity);
    let pass = unitarity <= tol.tol_report;
    let result = json!({
        "algebra": if crossed { "crossed-product" } else { "free-product" },
        "normal_form": normal_form,
        "free_product_image": image,
        "matrix": matrix_value(&value),
    });
    Ok(report("word eval", inputs, tol, result, residuals, pass))
}

fn sector_layout_value(layout: &[projcalc_core::rep::SectorBlock]) -> Value {
    layout
        .iter()
        .map(|block| {
            let mut entry = match block.kind {
                SectorKind::M11 => json!({"kind": "m11"}),
                SectorKind::M00 => json!({"kind": "m00"}),
                SectorKind::M10 => json!({"kind": "m10"}),
                SectorKind::M01 => json!({"kind": "m01"}),
                SectorKind::Cells { theta } => json!({"kind": "cells", "theta": theta}),
            };
            entry["offset"] = json!(block.offset);
            entry["len"] = json!(block.len);
            entry
        })
        .collect::<Vec<_>>()
        .into()
}

pub fn cmd_build_rep(
    spec_path: &Path,
    out_prefix: Option<&str>,
    tol: &ToleranceConfig,
) -> Result<Report, CliError> {
    let (spec, digest) = read_spec("spec", spec_path)?;
    let rep = build_representation(&spec)?;
    let verification = projcalc_core::rep::verify_built(&rep, tol)?;
    let mut written = Vec::new();
    if let Some(prefix) = out_prefix {
        for (name, m) in [("P1", &rep.p1), ("P2", &rep.p2), ("V", &rep.v)] {
            let path = format!("{prefix}{name}.json");
            write_json(Path::new(&path), &MatrixFile::from_matrix(m))?;
            written.push(path);
        }
    }
    let mut residuals = BTreeMap::new();
    residuals.insert("v_identity".into(), verification.v_residual);
    residuals.insert(
        "crossed_relation".into(),
        verification.crossed_relation_residual,
    );
    residuals.insert("conjugation".into(), verification.conjugation_residual);
    residuals.insert(
        "atomic_spectrum".into(),
        verification.atomic_spectrum_residual,
    );
    let pass = verification.passed;
    let result = json!({
        "spec": serde_json::to_value(SpecFile::from_spec(&spec))?,
        "dim": spec.total_dim(),
        "p1": matrix_value(&rep.p1),
        "p2": matrix_value(&rep.p2),
        "v": matrix_value(&rep.v),
        "sector_layout": sector_layout_value(&rep.sector_layout),
        "verification": {
            "p1": validation_value(&verification.p1_report),
            "p2": validation_value(&verification.p2_report),
            "passed": verification.passed,
        },
        "written": written,
    });
    Ok(report(
        "build-rep",
        vec![digest],
        tol,
        result,
        residuals,
        pass,
    ))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    Ok(())
}

pub fn cmd_gen(
    spec: RepSpec,
    spec_digest: Option<InputDigest>,
    seed: u64,
    out_prefix: &str,
    tol: &ToleranceConfig,
) -> Result<Report, CliError> {
    let pair = random_pair_from_spec(&spec, seed)?;
    let spectrum = difference_spectrum(&pair, tol)?;
    let p_path = format!("{out_prefix}P.json");
    let q_path = format!("{out_prefix}Q.json");
    let truth_path = format!("{out_prefix}truth.json");
    write_json(Path::new(&p_path), &MatrixFile::from_matrix(pair.p()))?;
    write_json(Path::new(&q_path), &MatrixFile::from_matrix(pair.q()))?;
    let truth = json!({
        "schema": SCHEMA,
        "command": "gen",
        "seed": seed,
        "dim": spec.total_dim(),
        "spec": serde_json::to_value(SpecFile::from_spec(&spec))?,
        "spectrum": spectrum_value(&spectrum),
    });
    write_json(Path::new(&truth_path), &truth)?;
    let result = json!({
        "seed": seed,
        "dim": spec.total_dim(),
        "spec": serde_json::to_value(SpecFile::from_spec(&spec))?,
        "p_path": p_path,
        "q_path": q_path,
        "truth_path": truth_path,
    });
    Ok(report(
        "gen",
        spec_digest.into_iter().collect(),
        tol,
        result,
        BTreeMap::new(),
        true,
    ))
}

pub fn cmd_check(
    p_path: &Path,
    q_path: &Path,
    k_max: usize,
    tol: &ToleranceConfig,
) -> Result<Report, CliError> {
    let (p_raw, p_digest) = read_matrix("P", p_path)?;
    let (q_raw, q_digest) = read_matrix("Q", q_path)?;
    let p_report = validate_projection(&p_raw, tol.tol_validate)?;
    let q_report = validate_projection(&q_raw, tol.tol_validate)?;
    let pair = ProjectionPair::new(p_raw, q_raw, tol)?;

    let dec = halmos_decompose(&pair, tol)?;
    let dec_residual = verify_decomposition(&pair, &dec)?;
    let spectrum = difference_spectrum(&pair, tol)?;
    let stability = trace_stability_check(&pair, k_max, tol);
    let cert = index_theorem_check(&pair, k_max, tol)?;

    let module = build_fredholm_module(&pair);
    let big_id = DenseMatrix::identity(module.big_dim);
    let grading_sq = module
        .gamma
        .matmul(&module.gamma)
        .and_then(|g| g.max_abs_diff(&big_id))?;
    let f_sq = module
        .f
        .matmul(&module.f)
        .and_then(|g| g.max_abs_diff(&big_id))?;
    let anti = module
        .gamma
        .matmul(&module.f)
        .and_then(|gf| module.f.matmul(&module.gamma).and_then(|fg| gf.add(&fg)))?
        .max_abs();
    let comm = module
        .f
        .matmul(&module.pi_p1)
        .and_then(|fp| module.pi_p1.matmul(&module.f).and_then(|pf| fp.sub(&pf)))?;
    let d = pair.difference();
    let d_sq = d.matmul(&d)?;
    let comm_target = DenseMatrix::block_diag(&[&d_sq, &d_sq])?.scale(Scalar::new(-1.0, 0.0));
    let comm_residual = comm
        .matmul(&comm)
        .and_then(|sq| sq.max_abs_diff(&comm_target))?;
    let module_pass =
        grading_sq == 0.0 && f_sq == 0.0 && anti == 0.0 && comm_residual <= 1e-12;

    let spectrum_pass = spectrum.residual <= tol.tol_report;
    let dec_pass = dec_residual <= tol.tol_report;
    let pass =
        p_report.passed() && q_report.passed() && dec_pass && spectrum_pass
            && stability.passed && cert.agree && module_pass;

    let mut residuals = BTreeMap::new();
    residuals.insert("validation_p".into(), p_report.worst_residual());
    residuals.insert("validation_q".into(), q_report.worst_residual());
    residuals.insert("decomposition".into(), dec_residual);
    residuals.insert("spectrum".into(), spectrum.residual);
    residuals.insert("trace_deviation".into(), stability.max_deviation);
    residuals.insert("module_commutator_square".into(), comm_residual);

    let result = json!({
        "checks": {
            "validation": {
                "p": validation_value(&p_report),
                "q": validation_value(&q_report),
            },
            "decomposition": {
                "residual": dec_residual,
                "summary": {
                    "m11": dec.m11, "m00": dec.m00, "m10": dec.m10, "m01": dec.m01,
                    "angles": dec.angles,
                },
                "passed": dec_pass,
            },
            "spectrum": { "report": spectrum_value(&spectrum), "passed": spectrum_pass },
            "trace_stability": {
                "values": stability.values,
                "max_deviation": stability.max_deviation,
                "passed": stability.passed,
            },
            "index": certificate_value(&cert),
            "module_axioms": {
                "grading_squares_to_identity": grading_sq,
                "f_squares_to_identity": f_sq,
                "anticommutator": anti,
                "commutator_square": comm_residual,
                "passed": module_pass,
            },
        },
    });
    Ok(report(
        "check",
        vec![p_digest, q_digest],
        tol,
        result,
        residuals,
        pass,
    ))
}

pub fn cmd_trace_powers(
    p_path: &Path,
    q_path: &Path,
    k_max: usize,
    tol: &ToleranceConfig,
) -> Result<Report, CliError> {
    let (pair, inputs) = load_pair(p_path, q_path, tol)?;
    let stability = trace_stability_check(&pair, k_max, tol);
    let values: Vec<Value> = (0..=k_max)
        .map(|k| {
            let value = trace_odd_power(&pair, k);
            let rounded = value.round();
            json!({
                "k": k,
                "power": 2 * k + 1,
                "trace": value,
                "rounded": rounded as i64,
                "residual": (value - rounded).abs(),
            })
        })
        .collect();
    let mut residuals = BTreeMap::new();
    residuals.insert("max_deviation".into(), stability.max_deviation);
    let pass = stability.passed;
    let result = json!({
        "values": values,
        "max_deviation": stability.max_deviation,
        "stable": stability.passed,
    });
    Ok(report("trace-powers", inputs, tol, result, residuals, pass))
}

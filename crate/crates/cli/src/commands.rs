use std::path::Path;

use quadrep_core::maps::{
    catalog, certify_order, recertify, tilde_homotopy, witness_points, CertifyOptions, MapBody, Method, Target,
};
use quadrep_core::numeric::{
    degree_s2, even_order_nullhomotopy_residual, hemisphere_check, hopf_invariant, quadric_residual_scan,
    retraction_homotopy_residual, winding_degree, DegreeReport, HopfOptions, NumericError,
};
use quadrep_core::{MapError, PolyMap};
use serde_json::json;

use crate::document::{Imported, MapDocument};
use crate::report::{CheckResult, Outcome, Report, Status};
use crate::{Check, Mode};

/// Largest acceptable `|q(map(p)) − 1|` in sampled scans.
pub const SAMPLED_TOLERANCE: f64 = 1e-9;
/// Largest acceptable residual along the homotopies.
pub const HOMOTOPY_TOLERANCE: f64 = 1e-9;

fn write_text(text: &str, output: Option<&Path>) -> Result<(), String> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(input: &Path) -> Result<Imported, String> {
    let text = std::fs::read_to_string(input).map_err(|e| format!("cannot read {}: {e}", input.display()))?;
    MapDocument::parse(&text)
        .and_then(MapDocument::import)
        .map_err(|e| format!("{}: {e}", input.display()))
}

pub fn generate(argv: &[String], target: &str, output: Option<&Path>) -> Outcome {
    let target: Target = match target.parse() {
        Ok(t) => t,
        Err(e) => return Outcome::Usage(e.to_string()),
    };
    let mut report = Report::new(argv, target.to_string());
    let map = match catalog(target) {
        Ok(m) => m,
        Err(e) => {
            report.push(certification_error("order", &e));
            return report.finish();
        }
    };
    let doc = match MapDocument::from_map(&map) {
        Ok(d) => d,
        Err(e) => return Outcome::Usage(e.to_string()),
    };
    if let Err(e) = write_text(&doc.to_text(), output) {
        return Outcome::Usage(e);
    }
    if output.is_none() {
        return Outcome::Done(None);
    }
    if let Some(cert) = map.certificate() {
        report.push(CheckResult::from_certificate("order", cert));
    }
    report.push(CheckResult::new(
        "nontriviality",
        Status::Pass,
        target.nontriviality().to_string(),
    ));
    report.finish()
}

pub fn export(input: &Path, output: Option<&Path>) -> Outcome {
    let text = load(input)
        .and_then(|imp| imp.export().map_err(|e| e.to_string()))
        .map(|d| d.to_text());
    match text.and_then(|t| write_text(&t, output)) {
        Ok(()) => Outcome::Done(None),
        Err(e) => Outcome::Usage(e),
    }
}

fn certification_error(name: &str, e: &MapError) -> CheckResult {
    match e {
        MapError::CertificationFailed(cert) => CheckResult::from_certificate(name, cert),
        MapError::Inconclusive(_) | MapError::BudgetExceeded { .. } => {
            CheckResult::new(name, Status::Inconclusive, e.to_string())
        }
        other => CheckResult::new(name, Status::Fail, other.to_string()),
    }
}

fn order_check(name: &str, map: &PolyMap, k: u32, methods: &[Method], opts: &CertifyOptions) -> CheckResult {
    let mut last = None;
    for &m in methods {
        match certify_order(map, k, m, opts) {
            Ok(cert) => return CheckResult::from_certificate(name, &cert),
            Err(e @ MapError::BudgetExceeded { .. }) => last = Some(e),
            Err(e) => return certification_error(name, &e),
        }
    }
    certification_error(name, &last.expect("at least one method"))
}

/// Certificates of all nodes, children first, one line per distinct label.
fn proof_lines(map: &PolyMap, seen: &mut Vec<String>, out: &mut Vec<String>) {
    match map.body() {
        MapBody::Explicit(_) => {}
        MapBody::Composite { outer: a, inner: b } | MapBody::Suspension { f: a, g: b, .. } => {
            proof_lines(a, seen, out);
            proof_lines(b, seen, out);
        }
        MapBody::Offset { base, .. } => proof_lines(base, seen, out),
    }
    if let Some(cert) = map.certificate() {
        if !seen.iter().any(|l| l == map.label()) {
            seen.push(map.label().to_string());
            out.push(format!("[{}] {}", map.label(), cert.detail));
        }
    }
}

/// Re-derives every order claim of the construction tree.
fn tree_check(tree: &PolyMap, opts: &CertifyOptions, note: Option<String>) -> CheckResult {
    let mut check = match recertify(tree, opts) {
        Ok(m) => match m.certificate() {
            Some(cert) => {
                let mut lines = Vec::new();
                proof_lines(&m, &mut Vec::new(), &mut lines);
                CheckResult {
                    detail: lines.join(" | "),
                    ..CheckResult::from_certificate("construction", cert)
                }
            }
            None => CheckResult::new("construction", Status::Fail, "construction carries no order claim"),
        },
        Err(e) => certification_error("construction", &e),
    };
    if let Some(n) = note {
        check.detail = format!("{n}; {}", check.detail);
    }
    check
}

/// The stored expansion and the construction must be the same map.
fn consistency_check(expanded: &PolyMap, tree: &PolyMap) -> CheckResult {
    if let Some(c) = tree.cached_components() {
        let same = c == expanded.cached_components().unwrap_or_default();
        let status = if same { Status::Pass } else { Status::Fail };
        return CheckResult::new("consistency", status, "components compared term by term").with_method("comparison");
    }
    let points = witness_points(tree.domain_dim(), 4);
    for p in &points {
        let (a, b) = (expanded.eval_exact(p), tree.eval_exact(p));
        if a != b {
            let mut check = CheckResult::new("consistency", Status::Fail, "components disagree with the construction");
            let coords: Vec<String> = p.iter().map(ToString::to_string).collect();
            check.witness = Some(format!("at ({})", coords.join(", ")));
            return check.with_method("exact-evaluation");
        }
    }
    CheckResult::new(
        "consistency",
        Status::Pass,
        format!(
            "components agree with the construction at {} exact points",
            points.len()
        ),
    )
    .with_method("exact-evaluation")
}

pub fn verify(argv: &[String], input: &Path, mode: Mode, samples: usize, seed: u64) -> Outcome {
    let imp = match load(input) {
        Ok(i) => i,
        Err(e) => return Outcome::Usage(e),
    };
    let Some(k) = imp.document.order else {
        return Outcome::Usage(format!("{}: document claims no order", input.display()));
    };
    let mut report = Report::new(argv, imp.document.label.clone());
    let opts = CertifyOptions {
        prefer_grid: mode == Mode::Grid,
        ..CertifyOptions::default()
    };
    match mode {
        Mode::Exact | Mode::Grid => {
            let methods: &[Method] = if mode == Mode::Exact {
                &[Method::FullExpansion, Method::ExactEvaluation]
            } else {
                &[Method::ExactEvaluation]
            };
            if let Some(e) = &imp.expanded {
                report.push(order_check("order", e, k, methods, &opts));
            }
            let tree_is_leaf = matches!(imp.tree.body(), MapBody::Explicit(_));
            if !tree_is_leaf || imp.expanded.is_none() {
                if mode == Mode::Grid && imp.expanded.is_none() {
                    match certify_order(&imp.tree, k, Method::ExactEvaluation, &opts) {
                        Ok(cert) => report.push(CheckResult::from_certificate("construction", &cert)),
                        Err(e @ MapError::BudgetExceeded { .. }) => report.push(tree_check(
                            &imp.tree,
                            &opts,
                            Some(format!(
                                "whole-map grid not run ({e}); leaves grid-tested, composition and suspension laws applied"
                            )),
                        )),
                        Err(e) => report.push(certification_error("construction", &e)),
                    }
                } else {
                    report.push(tree_check(&imp.tree, &opts, None));
                }
            }
            if let Some(e) = &imp.expanded {
                report.push(consistency_check(e, &imp.tree));
            }
        }
        Mode::Sampled => {
            let residual = quadric_residual_scan(imp.map(), samples, seed);
            report.push(
                CheckResult::numeric(
                    "quadric residual",
                    json!(residual),
                    SAMPLED_TOLERANCE,
                    residual < SAMPLED_TOLERANCE,
                    format!("max |q(map(p)) − 1| over {samples} quadric points for order {k}, seed {seed}"),
                )
                .with_method("sampled"),
            );
        }
    }
    report.finish()
}

fn numeric_failure(name: &str, e: NumericError) -> Result<CheckResult, String> {
    match e {
        NumericError::Defect {
            value,
            defect,
            tolerance,
            ..
        } => Ok(CheckResult::numeric(
            name,
            json!({ "raw": value, "defect": defect }),
            tolerance,
            false,
            e.to_string(),
        )),
        NumericError::Tracing(_) => Ok(CheckResult::new(name, Status::Fail, e.to_string())),
        other => Err(other.to_string()),
    }
}

fn degree_result(name: &str, rep: DegreeReport, detail: String) -> CheckResult {
    CheckResult::numeric(
        name,
        json!({ "degree": rep.degree, "raw": rep.value, "defect": rep.defect }),
        rep.tolerance,
        true,
        detail,
    )
}

pub fn invariants(argv: &[String], input: &Path, check: Check, samples: Option<usize>, seed: u64) -> Outcome {
    let imp = match load(input) {
        Ok(i) => i,
        Err(e) => return Outcome::Usage(e),
    };
    let mut report = Report::new(argv, imp.document.label.clone());
    let map = imp.map();
    let dims = (map.domain_dim(), map.codomain_dim());
    let results: Result<Vec<CheckResult>, String> = match check {
        Check::Degree => match dims {
            (2, 2) => {
                let n = samples.unwrap_or(2000);
                match winding_degree(map, n) {
                    Ok(r) => Ok(vec![degree_result(
                        "degree",
                        r,
                        format!("winding number over {n} steps"),
                    )]),
                    Err(e) => numeric_failure("degree", e).map(|c| vec![c]),
                }
            }
            (3, 3) => match degree_s2(map, 400, 200) {
                Ok(r) => Ok(vec![degree_result(
                    "degree",
                    r,
                    "Jacobian quadrature on a 400×200 grid".into(),
                )]),
                Err(e) => numeric_failure("degree", e).map(|c| vec![c]),
            },
            _ => Err(format!(
                "degree needs a map ℂ²→ℂ² or ℂ³→ℂ³, got ℂ^{}→ℂ^{}",
                dims.0, dims.1
            )),
        },
        Check::Hopf => {
            if dims != (4, 3) {
                Err(format!("hopf needs a map ℂ⁴→ℂ³, got ℂ^{}→ℂ^{}", dims.0, dims.1))
            } else {
                let opts = HopfOptions {
                    seed,
                    seeds: samples.unwrap_or(HopfOptions::default().seeds),
                    ..HopfOptions::default()
                };
                match hopf_invariant(map, &opts) {
                    Ok(r) => {
                        let lens: Vec<usize> = r.curves.iter().flatten().map(|c| c.points.len()).collect();
                        Ok(vec![CheckResult::numeric(
                            "hopf",
                            json!({ "invariant": r.invariant, "raw": r.linking, "defect": r.defect }),
                            r.tolerance,
                            true,
                            format!(
                                "linking of preimage curves with {lens:?} points, {} value perturbations",
                                r.perturbations
                            ),
                        )])
                    }
                    Err(e) => numeric_failure("hopf", e).map(|c| vec![c]),
                }
            }
        }
        Check::Hemisphere => {
            let n = samples.unwrap_or(2000);
            match hemisphere_check(&imp.tree, n, seed) {
                Ok(r) => Ok(vec![CheckResult::numeric(
                    "hemisphere",
                    json!({
                        "max_equator_value": r.max_equator_value,
                        "max_formula_error": r.max_formula_error,
                        "min_rho": r.min_rho,
                        "sign_violations": r.sign_violations,
                    }),
                    1e-9,
                    r.passed,
                    format!(
                        "{} sphere points and {} equator points; certifies hemisphere preservation, not the identification of the class",
                        r.samples, r.equator_samples
                    ),
                )]),
                Err(e) => Err(e.to_string()),
            }
        }
        Check::Homotopies => homotopy_checks(&imp, samples.unwrap_or(200), seed),
    };
    match results {
        Ok(checks) => {
            for c in checks {
                report.push(c);
            }
            report.finish()
        }
        Err(msg) => Outcome::Usage(msg),
    }
}

fn homotopy_checks(imp: &Imported, samples: usize, seed: u64) -> Result<Vec<CheckResult>, String> {
    const TSTEPS: usize = 11;
    let map = imp.map();
    let mut out = Vec::new();
    let m = map.domain_dim();
    let r = retraction_homotopy_residual(m, samples, TSTEPS, seed);
    out.push(CheckResult::numeric(
        "retraction",
        json!(r),
        HOMOTOPY_TOLERANCE,
        r < HOMOTOPY_TOLERANCE,
        format!("deformation of the quadric onto the sphere, {samples} points × {TSTEPS} steps"),
    ));
    if map.order().is_some_and(|k| k % 2 == 0) {
        let r = even_order_nullhomotopy_residual(map, TSTEPS, samples, seed).map_err(|e| e.to_string())?;
        out.push(CheckResult::numeric(
            "even-order nullhomotopy",
            json!(r),
            HOMOTOPY_TOLERANCE,
            r < HOMOTOPY_TOLERANCE,
            format!("rotation of the input by e^(iπt), {samples} points × {TSTEPS} steps"),
        ));
    }
    if let MapBody::Suspension { f, g, .. } = imp.tree.body() {
        let mut worst: f64 = 0.0;
        for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let blend = tilde_homotopy(f, g, t);
            match blend {
                Ok(b) => worst = worst.max(quadric_residual_scan(&b, samples, seed)),
                Err(e) => {
                    out.push(certification_error("suspension pair blend", &e));
                    return Ok(out);
                }
            }
        }
        out.push(CheckResult::numeric(
            "suspension pair blend",
            json!(worst),
            HOMOTOPY_TOLERANCE,
            worst < HOMOTOPY_TOLERANCE,
            format!("cos(tπ/2)·f + sin(tπ/2)·g at 5 values of t, {samples} points each"),
        ));
    }
    Ok(out)
}

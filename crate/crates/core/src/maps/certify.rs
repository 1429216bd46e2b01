//! Exact verification of `q∘F ≡ q^k` and of `b(F, G) ≡ 0`.
//!
//! Three routes are available:
//!
//! * full expansion of `Σ F_j² − q^k`;
//! * exact evaluation of the difference on a tensor grid with `D_v + 1`
//!   integer points along each variable `v`, where `D_v` bounds the
//!   difference's degree in `v`. A polynomial vanishing on such a grid is
//!   zero, so the test is sound and complete;
//! * structural reduction along the map's construction tree, using only
//!   exact ring identities:
//!   - `q∘(O∘I) = (q∘O)∘I`, so `q∘O ≡ q^a` and `q∘I ≡ q^c` give `q∘(O∘I) ≡ q^{ac}`;
//!   - for a suspension, `q∘F = β₁²·q∘f + 2β₁β₂·b(f,g) + β₂²·q∘g + ρ²·q(u)`
//!     evaluated at `(S,T)`, which reduces to the triple identity once
//!     `q∘f ≡ q∘g ≡ T^k` and `b(f,g) ≡ 0`;
//!   - `b(O₁∘I, O₂∘I) = b(O₁,O₂)∘I`.
//!
//! Every failing verdict carries a witness: a term of the expanded
//! difference or a point where it evaluates to a nonzero value.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificate::{CertDetail, CertMethod, PHCertificate, Witness};
use crate::exact::{GaussianRational, Polynomial, Rational};
use crate::lemma::verify_lemma1;

use super::polymap::{sum_squares_exact, MapBody};
use super::{q_form, MapError, PolyMap};

/// Requested verification route.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Structural when the map has a construction tree, otherwise expansion
    /// or the evaluation grid, whichever fits the budgets.
    Auto,
    FullExpansion,
    ExactEvaluation,
    Structural,
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    /// Estimated term products allowed for one expansion.
    pub expansion_budget: f64,
    /// Largest evaluation grid, in points.
    pub grid_budget: u64,
    /// Points tried when looking for a failure witness by evaluation.
    pub search_points: usize,
    /// Reuse passing certificates already attached to sub-maps.
    pub reuse_certificates: bool,
    /// Zero-test explicit maps on the evaluation grid before trying expansion.
    pub prefer_grid: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            expansion_budget: 5.0e6,
            grid_budget: 200_000,
            search_points: 8,
            reuse_certificates: true,
            prefer_grid: false,
        }
    }
}

impl CertifyOptions {
    pub fn from_scratch() -> Self {
        Self {
            reuse_certificates: false,
            ..Self::default()
        }
    }
}

/// Result of a b-orthogonality check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalityCertificate {
    pub method: CertMethod,
    pub detail: CertDetail,
    pub orthogonal: bool,
    pub witness: Option<Witness>,
}

/// `Σ_j f_j·g_j` as an expanded polynomial.
pub fn b_pairing(f: &PolyMap, g: &PolyMap) -> Result<Polynomial, MapError> {
    check_same_shape(f, g)?;
    let fc = f.components()?;
    let gc = g.components()?;
    Ok(fc
        .iter()
        .zip(gc)
        .fold(Polynomial::zero(f.domain_dim()), |acc, (a, b)| &acc + &(a * b)))
}

fn check_same_shape(f: &PolyMap, g: &PolyMap) -> Result<(), MapError> {
    if f.domain_dim() != g.domain_dim() {
        return Err(MapError::DimensionMismatch {
            what: "domain",
            expected: f.domain_dim(),
            found: g.domain_dim(),
        });
    }
    if f.codomain_dim() != g.codomain_dim() {
        return Err(MapError::DimensionMismatch {
            what: "codomain",
            expected: f.codomain_dim(),
            found: g.codomain_dim(),
        });
    }
    Ok(())
}

/// Verifies `q∘map ≡ q^k`. `k = 0` is allowed and means `q∘map ≡ 1`.
pub fn certify_order(map: &PolyMap, k: u32, method: Method, opts: &CertifyOptions) -> Result<PHCertificate, MapError> {
    match method {
        Method::FullExpansion => by_expansion(map, k, opts),
        Method::ExactEvaluation => by_grid(map, k, opts),
        Method::Structural => by_structure(map, k, opts),
        Method::Auto => {
            if !map.is_explicit() {
                return by_structure(map, k, opts);
            }
            match leaf_order_raw(map, k, opts) {
                Err(MapError::BudgetExceeded { .. }) => {
                    search_or_inconclusive(map, k, opts, "too large to expand or grid-test")
                }
                other => other,
            }
        }
    }
}

fn expansion_cost(comps: &[Polynomial]) -> f64 {
    comps.iter().map(|p| (p.nterms() as f64).powi(2)).sum()
}

fn by_expansion(map: &PolyMap, k: u32, opts: &CertifyOptions) -> Result<PHCertificate, MapError> {
    let comps = map.components_within(opts.expansion_budget)?;
    let cost = expansion_cost(comps);
    if cost > opts.expansion_budget {
        return Err(MapError::BudgetExceeded {
            what: "expansion",
            estimate: cost,
            budget: opts.expansion_budget,
        });
    }
    let lhs = comps
        .iter()
        .fold(Polynomial::zero(map.domain_dim()), |acc, c| &acc + &c.square());
    let diff = &lhs - &q_form(map.domain_dim()).pow(k);
    let detail = CertDetail::Expansion { terms: lhs.nterms() };
    Ok(match diff.leading_term() {
        None => PHCertificate::pass(k, CertMethod::FullExpansion, detail),
        Some((m, c)) => PHCertificate::fail(
            k,
            CertMethod::FullExpansion,
            detail,
            Witness::Term {
                monomial: m.clone(),
                coefficient: c.clone(),
            },
        ),
    })
}

/// Per-variable degree bounds of `q∘map − q^k`.
pub fn difference_degree_bounds(map: &PolyMap, k: u32) -> Vec<u32> {
    let comps = map.degree_bounds();
    (0..map.domain_dim())
        .map(|v| {
            let top = comps.iter().map(|c| c[v]).max().unwrap_or(0);
            (2 * top).max(2 * k)
        })
        .collect()
}

fn order_difference_at(map: &PolyMap, k: u32, point: &[GaussianRational]) -> GaussianRational {
    let image = map.eval_exact(point);
    &sum_squares_exact(&image) - &sum_squares_exact(point).pow(k)
}

fn by_grid(map: &PolyMap, k: u32, opts: &CertifyOptions) -> Result<PHCertificate, MapError> {
    let bounds = difference_degree_bounds(map, k);
    let per_variable: Vec<u32> = bounds.iter().map(|d| d + 1).collect();
    let total = per_variable
        .iter()
        .try_fold(1u64, |acc, &n| acc.checked_mul(u64::from(n)));
    let points = match total {
        Some(p) if p <= opts.grid_budget => p,
        other => {
            return Err(MapError::BudgetExceeded {
                what: "evaluation grid",
                estimate: other.map_or(f64::INFINITY, |p| p as f64),
                budget: opts.grid_budget as f64,
            })
        }
    };
    let detail = CertDetail::Grid {
        points,
        per_variable: per_variable.clone(),
        degree_bounds: bounds,
    };
    let mut index = vec![0u32; per_variable.len()];
    loop {
        let point: Vec<GaussianRational> = index
            .iter()
            .map(|&i| GaussianRational::from_int(i64::from(i)))
            .collect();
        let value = order_difference_at(map, k, &point);
        if !value.is_zero() {
            return Ok(PHCertificate::fail(
                k,
                CertMethod::ExactEvaluation,
                detail,
                Witness::Point { point, value },
            ));
        }
        // Odometer increment over the grid.
        let mut v = 0;
        loop {
            if v == index.len() {
                return Ok(PHCertificate::pass(k, CertMethod::ExactEvaluation, detail));
            }
            index[v] += 1;
            if index[v] < per_variable[v] {
                break;
            }
            index[v] = 0;
            v += 1;
        }
    }
}

/// Deterministic Gaussian-rational points with small numerators and
/// denominators.
pub fn witness_points(dim: usize, count: usize) -> Vec<Vec<GaussianRational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_0a5e);
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let den = rng.random_range(1..=7_i64);
                    let re = Rational::new(rng.random_range(-9..=9_i64).into(), den.into());
                    let im = Rational::new(rng.random_range(-9..=9_i64).into(), den.into());
                    GaussianRational::new(re, im)
                })
                .collect()
        })
        .collect()
}

fn search_or_inconclusive(map: &PolyMap, k: u32, opts: &CertifyOptions, why: &str) -> Result<PHCertificate, MapError> {
    for point in witness_points(map.domain_dim(), opts.search_points) {
        let value = order_difference_at(map, k, &point);
        if !value.is_zero() {
            return Ok(PHCertificate::fail(
                k,
                CertMethod::ExactEvaluation,
                CertDetail::Search {
                    points: opts.search_points,
                },
                Witness::Point { point, value },
            ));
        }
    }
    Err(MapError::Inconclusive(format!(
        "{}: {why}; no failure witness among {} points",
        map.label(),
        opts.search_points
    )))
}

fn by_structure(map: &PolyMap, k: u32, opts: &CertifyOptions) -> Result<PHCertificate, MapError> {
    let mut steps = Vec::new();
    match prove_order(map, k, opts, &mut steps, true) {
        Ok(()) => Ok(PHCertificate::pass(
            k,
            CertMethod::Structural,
            CertDetail::Structural { steps },
        )),
        Err(why) => search_or_inconclusive(map, k, opts, &why),
    }
}

/// Expansion if affordable, else the grid (or the reverse with `prefer_grid`).
fn leaf_order_raw(map: &PolyMap, k: u32, opts: &CertifyOptions) -> Result<PHCertificate, MapError> {
    let (first, second): (ZeroTest, ZeroTest) = if opts.prefer_grid {
        (by_grid, by_expansion)
    } else {
        (by_expansion, by_grid)
    };
    match first(map, k, opts) {
        Err(MapError::BudgetExceeded { .. }) => second(map, k, opts),
        other => other,
    }
}

type ZeroTest = fn(&PolyMap, u32, &CertifyOptions) -> Result<PHCertificate, MapError>;

fn leaf_order(map: &PolyMap, k: u32, opts: &CertifyOptions) -> Result<PHCertificate, String> {
    leaf_order_raw(map, k, opts).map_err(|e| e.to_string())
}

fn reusable(map: &PolyMap, k: u32, opts: &CertifyOptions) -> bool {
    opts.reuse_certificates && map.certificate().is_some_and(|c| c.passed() && c.claimed_order == k)
}

/// Proves `q∘map ≡ q^k` or explains why the reduction does not apply.
fn prove_order(map: &PolyMap, k: u32, opts: &CertifyOptions, steps: &mut Vec<String>, top: bool) -> Result<(), String> {
    if !top && reusable(map, k, opts) {
        steps.push(format!("{}: order {k} (attached certificate)", map.label()));
        return Ok(());
    }
    match map.body() {
        MapBody::Explicit(_) => {
            let cert = leaf_order(map, k, opts)?;
            if !cert.passed() {
                return Err(format!("{}: {cert}", map.label()));
            }
            steps.push(format!(
                "{}: order {k} by {} ({})",
                map.label(),
                cert.method,
                cert.detail
            ));
            Ok(())
        }
        MapBody::Composite { outer, inner } => {
            let ko = outer
                .order()
                .ok_or_else(|| format!("{}: outer map has no order", map.label()))?;
            let ki = if ko == 0 {
                if k != 0 {
                    return Err(format!("{}: constant outer map cannot have order {k}", map.label()));
                }
                // q∘outer ≡ 1 makes the inner map irrelevant.
                prove_order(outer, 0, opts, steps, false)?;
                steps.push(format!("{}: order 0 since q∘outer ≡ 1", map.label()));
                return Ok(());
            } else if !k.is_multiple_of(ko) {
                return Err(format!(
                    "{}: order {k} is not a multiple of the outer order {ko}",
                    map.label()
                ));
            } else {
                k / ko
            };
            prove_order(outer, ko, opts, steps, false)?;
            prove_order(inner, ki, opts, steps, false)?;
            steps.push(format!("{}: order {ko}·{ki} = {k} by composition", map.label()));
            Ok(())
        }
        MapBody::Suspension { f, g, ell: _, triple } => {
            let kf = triple.exact.k;
            if k != 2 * kf - 1 {
                return Err(format!(
                    "{}: suspension of order-{kf} maps has order {}, not {k}",
                    map.label(),
                    2 * kf - 1
                ));
            }
            verify_lemma1(&triple.exact).map_err(|e| e.to_string())?;
            steps.push(format!("lemma triple k={kf}: identity by expansion"));
            prove_order(f, kf, opts, steps, false)?;
            prove_order(g, kf, opts, steps, false)?;
            prove_orthogonal(f, g, opts, steps)?;
            steps.push(format!("{}: order 2·{kf}−1 = {k} by suspension", map.label()));
            Ok(())
        }
        MapBody::Offset { .. } => Err(format!("{}: offset layer has no structural reduction", map.label())),
    }
}

fn prove_orthogonal(f: &PolyMap, g: &PolyMap, opts: &CertifyOptions, steps: &mut Vec<String>) -> Result<(), String> {
    if let (MapBody::Composite { outer: o1, inner: i1 }, MapBody::Composite { outer: o2, inner: i2 }) =
        (f.body(), g.body())
    {
        if i1 == i2 {
            prove_orthogonal(o1, o2, opts, steps)?;
            steps.push(format!("b({}, {}) = b(outer pair)∘inner ≡ 0", f.label(), g.label()));
            return Ok(());
        }
    }
    let cert = orthogonality_by_expansion(f, g, opts).map_err(|e| e.to_string())?;
    if !cert.orthogonal {
        return Err(format!("b({}, {}) ≢ 0", f.label(), g.label()));
    }
    steps.push(format!("b({}, {}) ≡ 0 by expansion", f.label(), g.label()));
    Ok(())
}

fn orthogonality_by_expansion(
    f: &PolyMap,
    g: &PolyMap,
    opts: &CertifyOptions,
) -> Result<OrthogonalityCertificate, MapError> {
    check_same_shape(f, g)?;
    let fc = f.components_within(opts.expansion_budget)?;
    let gc = g.components_within(opts.expansion_budget)?;
    let cost: f64 = fc
        .iter()
        .zip(gc)
        .map(|(a, b)| a.nterms() as f64 * b.nterms() as f64)
        .sum();
    if cost > opts.expansion_budget {
        return Err(MapError::BudgetExceeded {
            what: "expansion",
            estimate: cost,
            budget: opts.expansion_budget,
        });
    }
    let pairing = b_pairing(f, g)?;
    let detail = CertDetail::Expansion {
        terms: fc.iter().chain(gc).map(Polynomial::nterms).sum(),
    };
    Ok(OrthogonalityCertificate {
        method: CertMethod::FullExpansion,
        detail,
        orthogonal: pairing.is_zero(),
        witness: pairing.leading_term().map(|(m, c)| Witness::Term {
            monomial: m.clone(),
            coefficient: c.clone(),
        }),
    })
}

/// Verifies `b(f(z), g(z)) ≡ 0`.
pub fn certify_orthogonal(
    f: &PolyMap,
    g: &PolyMap,
    opts: &CertifyOptions,
) -> Result<OrthogonalityCertificate, MapError> {
    check_same_shape(f, g)?;
    let mut steps = Vec::new();
    match prove_orthogonal(f, g, opts, &mut steps) {
        Ok(()) => Ok(OrthogonalityCertificate {
            method: CertMethod::Structural,
            detail: CertDetail::Structural { steps },
            orthogonal: true,
            witness: None,
        }),
        Err(why) => {
            if let Ok(cert) = orthogonality_by_expansion(f, g, opts) {
                return Ok(cert);
            }
            for point in witness_points(f.domain_dim(), opts.search_points) {
                let a = f.eval_exact(&point);
                let b = g.eval_exact(&point);
                let value = a
                    .iter()
                    .zip(&b)
                    .fold(GaussianRational::zero(), |acc, (x, y)| &acc + &(x * y));
                if !value.is_zero() {
                    return Ok(OrthogonalityCertificate {
                        method: CertMethod::ExactEvaluation,
                        detail: CertDetail::Search {
                            points: opts.search_points,
                        },
                        orthogonal: false,
                        witness: Some(Witness::Point { point, value }),
                    });
                }
            }
            Err(MapError::Inconclusive(why))
        }
    }
}

/// Cheap exact spot check: the order identity at `count` deterministic
/// points. Necessary, not sufficient; used as corroboration in reports.
pub fn spot_check_order(map: &PolyMap, k: u32, count: usize) -> bool {
    witness_points(map.domain_dim(), count)
        .iter()
        .all(|p| order_difference_at(map, k, p).is_zero())
}

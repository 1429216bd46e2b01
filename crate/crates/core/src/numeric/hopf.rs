//! Hopf invariant of a map `S³ → S²` as the linking number of the preimages
//! of two regular values.
//!
//! Preimage curves are traced by predictor–corrector continuation on
//! `G(x) = (e₁·F(x), e₂·F(x), (|x|² − 1)/2) = 0`, where `F` is the map on real
//! points and `e₁, e₂` span the tangent plane of the value `p` with
//! `e₁ × e₂ = p`. Curves are oriented by the cofactor vector of `DG`, which
//! matches the preimage orientation for every value, then projected
//! stereographically to `ℝ³` for the Gauss linking integral.

use rayon::prelude::*;

use super::{retracted_image, sample_sphere, NumericError};
use crate::maps::NumericMap;

type V3 = [f64; 3];
type V4 = [f64; 4];

#[derive(Clone, Debug)]
pub struct HopfOptions {
    /// Arc-length predictor step.
    pub step: f64,
    pub newton_tolerance: f64,
    pub closure_tolerance: f64,
    /// Predictor steps allowed per curve.
    pub step_budget: usize,
    /// Regular values; perturbed automatically on rank drop.
    pub values: [V3; 2],
    /// Sphere samples used to seed Newton.
    pub seeds: usize,
    pub seed: u64,
    pub max_components: usize,
}

impl Default for HopfOptions {
    fn default() -> Self {
        Self {
            step: 1e-2,
            newton_tolerance: 1e-10,
            closure_tolerance: 1e-6,
            step_budget: 100_000,
            values: [[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]],
            seeds: 20_000,
            seed: 0x4f9f,
            max_components: 8,
        }
    }
}

/// A component of the preimage of `value`, as points on `S³`.
#[derive(Clone, Debug, PartialEq)]
pub struct TracedCurve {
    pub points: Vec<V4>,
    pub closed: bool,
    pub value: V3,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HopfReport {
    pub invariant: i64,
    pub linking: f64,
    pub defect: f64,
    pub tolerance: f64,
    /// The regular values actually used.
    pub values: [V3; 2],
    pub curves: [Vec<TracedCurve>; 2],
    /// How many times a value was perturbed after a rank drop.
    pub perturbations: usize,
}

fn dot<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm<const N: usize>(a: &[f64; N]) -> f64 {
    dot(a, a).sqrt()
}

fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn det3(a: V3, b: V3, c: V3) -> f64 {
    dot(&a, &cross(b, c))
}

/// The vector `τ` with `τ·v = det[r₁; r₂; r₃; v]` for all `v`.
fn cofactor4(r: [V4; 3]) -> V4 {
    let minor = |skip: usize| -> f64 {
        let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
        let row = |i: usize| [r[i][cols[0]], r[i][cols[1]], r[i][cols[2]]];
        det3(row(0), row(1), row(2))
    };
    [-minor(0), minor(1), -minor(2), minor(3)]
}

fn det4(rows: [V4; 4]) -> f64 {
    dot(&cofactor4([rows[0], rows[1], rows[2]]), &rows[3])
}

struct Problem<'a> {
    map: &'a dyn NumericMap,
    value: V3,
    e1: V3,
    e2: V3,
}

const FD: f64 = 1e-6;

impl<'a> Problem<'a> {
    fn new(map: &'a dyn NumericMap, value: V3) -> Self {
        let p = value.map(|v| v / norm(&value));
        let axis = (0..3).min_by(|&i, &j| p[i].abs().total_cmp(&p[j].abs())).unwrap();
        let mut a = [0.0; 3];
        a[axis] = 1.0;
        let ap = dot(&a, &p);
        let e1 = [a[0] - ap * p[0], a[1] - ap * p[1], a[2] - ap * p[2]];
        let e1 = e1.map(|v| v / norm(&e1));
        let e2 = cross(p, e1);
        Self { map, value: p, e1, e2 }
    }

    /// `H₁(map(x))`, defined on a neighbourhood of the sphere.
    fn f(&self, x: &V4) -> V3 {
        let w = retracted_image(self.map, x);
        [w[0], w[1], w[2]]
    }

    /// `F(x)` and `DF(x)` (columns by central differences).
    fn f_and_jacobian(&self, x: &V4) -> (V3, [V3; 4]) {
        let mut cols = [[0.0; 3]; 4];
        for (k, col) in cols.iter_mut().enumerate() {
            let (mut a, mut b) = (*x, *x);
            a[k] += FD;
            b[k] -= FD;
            let (fa, fb) = (self.f(&a), self.f(&b));
            *col = [0, 1, 2].map(|i| (fa[i] - fb[i]) / (2.0 * FD));
        }
        (self.f(x), cols)
    }

    /// `G(x)` and the rows of `DG(x)`.
    fn system(&self, x: &V4) -> (V3, [V4; 3]) {
        let (fx, cols) = self.f_and_jacobian(x);
        let g = [dot(&self.e1, &fx), dot(&self.e2, &fx), (dot(x, x) - 1.0) / 2.0];
        let row = |e: &V3| -> V4 { [0, 1, 2, 3].map(|k| dot(e, &cols[k])) };
        (g, [row(&self.e1), row(&self.e2), *x])
    }

    /// Unit tangent and the size of the raw cofactor vector (zero at a rank drop).
    fn tangent(&self, x: &V4) -> (V4, f64) {
        let (_, rows) = self.system(x);
        let t = cofactor4(rows);
        let n = norm(&t);
        (t.map(|v| v / n.max(f64::MIN_POSITIVE)), n)
    }

    /// Minimal-norm Newton iteration onto `G = 0` on the `F·p > 0` side.
    fn correct(&self, start: &V4, tol: f64) -> Option<V4> {
        let mut x = *start;
        for _ in 0..40 {
            let (g, j) = self.system(&x);
            if norm(&g) < tol {
                return (dot(&self.f(&x), &self.value) > 0.0).then_some(x);
            }
            // Δ = −Jᵀ (J Jᵀ)⁻¹ G
            let mut a = [[0.0; 3]; 3];
            for (r, row) in a.iter_mut().enumerate() {
                for (c, v) in row.iter_mut().enumerate() {
                    *v = dot(&j[r], &j[c]);
                }
            }
            let lam = solve3(a, g)?;
            for k in 0..4 {
                x[k] -= j[0][k] * lam[0] + j[1][k] * lam[1] + j[2][k] * lam[2];
            }
            if !x.iter().all(|v| v.is_finite()) || norm(&x) > 2.0 {
                return None;
            }
        }
        None
    }
}

fn solve3(a: [V3; 3], b: V3) -> Option<V3> {
    let d = det3(a[0], a[1], a[2]);
    if d.abs() < 1e-300 {
        return None;
    }
    let col = |k: usize| [a[0][k], a[1][k], a[2][k]];
    let (c0, c1, c2) = (col(0), col(1), col(2));
    // Cramer's rule; a determinant is unchanged by transposition.
    Some([det3(b, c1, c2) / d, det3(c0, b, c2) / d, det3(c0, c1, b) / d])
}

enum TraceError {
    RankDrop,
    Failed(String),
}

/// Relative size of the tangent cofactor below which the value is treated
/// as critical.
const RANK_DROP: f64 = 1e-6;

fn trace(pb: &Problem<'_>, x0: V4, opts: &HopfOptions, scale: f64) -> Result<TracedCurve, TraceError> {
    let tol = opts.newton_tolerance;
    let (mut tau, n0) = pb.tangent(&x0);
    if n0 < RANK_DROP * scale {
        return Err(TraceError::RankDrop);
    }
    let mut points = vec![x0];
    let mut x = x0;
    let mut arc = 0.0;
    let mut h = opts.step;
    for _ in 0..opts.step_budget {
        let d = [0, 1, 2, 3].map(|k| x0[k] - x[k]);
        let s = dot(&d, &tau);
        if arc > 4.0 * opts.step && norm(&d) < 1.5 * opts.step && s > 0.0 && s <= 1.01 * h {
            // Land on the start point: repeat a tangent step of the remaining
            // length followed by correction.
            let mut y = x;
            let mut ty = tau;
            for _ in 0..8 {
                let d = [0, 1, 2, 3].map(|k| x0[k] - y[k]);
                if norm(&d) < opts.closure_tolerance {
                    break;
                }
                let s = dot(&d, &ty);
                let pred = [0, 1, 2, 3].map(|k| y[k] + s * ty[k]);
                let Some(next) = pb.correct(&pred, tol) else { break };
                y = next;
                ty = pb.tangent(&y).0;
            }
            let gap = norm(&[0, 1, 2, 3].map(|k| x0[k] - y[k]));
            if gap < opts.closure_tolerance {
                return Ok(TracedCurve {
                    points,
                    closed: true,
                    value: pb.value,
                });
            }
        }
        let mut accepted = None;
        for _ in 0..12 {
            let pred = [0, 1, 2, 3].map(|k| x[k] + h * tau[k]);
            if let Some(y) = pb.correct(&pred, tol) {
                let (ty, ny) = pb.tangent(&y);
                if ny < RANK_DROP * scale {
                    return Err(TraceError::RankDrop);
                }
                if dot(&ty, &tau) > 0.9 {
                    accepted = Some((y, ty));
                    break;
                }
            }
            h /= 2.0;
        }
        let Some((y, ty)) = accepted else {
            return Err(TraceError::Failed("step size collapsed".into()));
        };
        arc += norm(&[0, 1, 2, 3].map(|k| y[k] - x[k]));
        points.push(y);
        x = y;
        tau = ty;
        h = (h * 2.0).min(opts.step);
    }
    Err(TraceError::Failed(format!(
        "curve did not close within {} steps",
        opts.step_budget
    )))
}

fn distance_to_curve(x: &V4, c: &TracedCurve) -> f64 {
    c.points
        .iter()
        .map(|p| norm(&[0, 1, 2, 3].map(|k| p[k] - x[k])))
        .fold(f64::INFINITY, f64::min)
}

/// All preimage components of `value` that the seeds reach.
fn preimage(map: &dyn NumericMap, value: V3, seeds: &[V4], opts: &HopfOptions) -> Result<Vec<TracedCurve>, TraceError> {
    let pb = Problem::new(map, value);
    let mut scored: Vec<(f64, usize)> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let fx = pb.f(x);
            let n = norm(&fx);
            let h = fx.map(|v| v / n);
            let d = [0, 1, 2].map(|k| h[k] - pb.value[k]);
            (if n > 0.0 { norm(&d) } else { f64::INFINITY }, i)
        })
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    // Typical size of DF on the sphere, for the rank test.
    let scale = {
        let (_, cols) = pb.f_and_jacobian(&seeds[0]);
        cols.iter().map(norm).fold(0.0, f64::max).powi(2).max(1.0)
    };
    let mut curves: Vec<TracedCurve> = Vec::new();
    for &(dist, i) in scored.iter().take(64) {
        if dist > 0.5 || curves.len() >= opts.max_components {
            break;
        }
        let Some(x) = pb.correct(&seeds[i], opts.newton_tolerance) else {
            continue;
        };
        if curves.iter().any(|c| distance_to_curve(&x, c) < 3.0 * opts.step) {
            continue;
        }
        curves.push(trace(&pb, x, opts, scale)?);
    }
    Ok(curves)
}

/// Rotates `value` by a small deterministic amount.
fn perturb(value: V3, attempt: usize) -> V3 {
    let a = 0.05 * attempt as f64;
    let (s, c) = a.sin_cos();
    let v = [value[0], c * value[1] - s * value[2], s * value[1] + c * value[2]];
    let (s2, c2) = (0.7 * a).sin_cos();
    let w = [c2 * v[0] - s2 * v[2], v[1], s2 * v[0] + c2 * v[2]];
    w.map(|x| x / norm(&w))
}

/// Oriented orthonormal basis of `P^⊥` with `det[P, b₁, b₂, b₃] = 1`.
fn complement_basis(pole: &V4) -> [V4; 3] {
    let mut basis: Vec<V4> = Vec::new();
    for k in 0..4 {
        let mut v = [0.0; 4];
        v[k] = 1.0;
        for b in std::iter::once(pole).chain(basis.iter()) {
            let c = dot(&v, b);
            for i in 0..4 {
                v[i] -= c * b[i];
            }
        }
        let n = norm(&v);
        if n > 1e-6 && basis.len() < 3 {
            basis.push(v.map(|x| x / n));
        }
    }
    let mut b = [basis[0], basis[1], basis[2]];
    if det4([*pole, b[0], b[1], b[2]]) < 0.0 {
        b[2] = b[2].map(|x| -x);
    }
    b
}

fn stereographic(x: &V4, pole: &V4, basis: &[V4; 3]) -> V3 {
    let denom = 1.0 - dot(x, pole);
    basis.map(|b| dot(x, &b) / denom)
}

/// Gauss linking integral of two closed curves on `S³` after stereographic
/// projection, by the midpoint rule over polygon segments.
pub fn linking_number(a: &TracedCurve, b: &TracedCurve) -> f64 {
    let everything: Vec<&V4> = a.points.iter().chain(&b.points).collect();
    // Vertices of the 24-cell.
    let mut candidates: Vec<V4> = (0..4)
        .flat_map(|k| {
            [1.0, -1.0].map(|s| {
                let mut p = [0.0; 4];
                p[k] = s;
                p
            })
        })
        .collect();
    candidates.extend((0..16).map(|bits: u32| [0, 1, 2, 3].map(|k| if bits >> k & 1 == 1 { -0.5 } else { 0.5 })));
    let pole = candidates
        .iter()
        .max_by(|p, q| {
            let far = |c: &V4| everything.iter().map(|x| 1.0 - dot(x, c)).fold(f64::INFINITY, f64::min);
            far(p).total_cmp(&far(q))
        })
        .copied()
        .unwrap();
    let basis = complement_basis(&pole);
    let segments = |c: &TracedCurve| -> Vec<(V3, V3)> {
        let pts: Vec<V3> = c.points.iter().map(|x| stereographic(x, &pole, &basis)).collect();
        (0..pts.len())
            .map(|i| {
                let (p, q) = (pts[i], pts[(i + 1) % pts.len()]);
                ([0, 1, 2].map(|k| (p[k] + q[k]) / 2.0), [0, 1, 2].map(|k| q[k] - p[k]))
            })
            .collect()
    };
    let (sa, sb) = (segments(a), segments(b));
    let rows: Vec<f64> = sa
        .par_iter()
        .map(|(ma, da)| {
            sb.iter()
                .map(|(mb, db)| {
                    let r = [0, 1, 2].map(|k| ma[k] - mb[k]);
                    let n = norm(&r);
                    dot(&r, &cross(*da, *db)) / (n * n * n)
                })
                .sum::<f64>()
        })
        .collect();
    rows.iter().sum::<f64>() / (4.0 * std::f64::consts::PI)
}

/// Hopf invariant of `x ↦ H₁(map(x))` on `S³`, as the linking number of the
/// preimages of two regular values. A value whose preimage is empty gives
/// invariant `0`.
pub fn hopf_invariant(map: &dyn NumericMap, opts: &HopfOptions) -> Result<HopfReport, NumericError> {
    if map.domain_dim() != 4 || map.codomain_dim() != 3 {
        return Err(NumericError::Dimensions {
            expected: "ℂ⁴ → ℂ³",
            domain: map.domain_dim(),
            codomain: map.codomain_dim(),
        });
    }
    let seeds: Vec<V4> = sample_sphere(3, opts.seeds, opts.seed)
        .into_iter()
        .map(|v| [v[0], v[1], v[2], v[3]])
        .collect();
    let mut values = opts.values;
    let mut perturbations = 0;
    let mut curves: [Vec<TracedCurve>; 2] = [Vec::new(), Vec::new()];
    for (slot, value) in values.iter_mut().enumerate() {
        let original = *value;
        let mut attempt = 0;
        curves[slot] = loop {
            match preimage(map, *value, &seeds, opts) {
                Ok(c) => break c,
                Err(TraceError::RankDrop) if attempt < 6 => {
                    attempt += 1;
                    perturbations += 1;
                    *value = perturb(original, attempt);
                }
                Err(TraceError::RankDrop) => {
                    return Err(NumericError::Tracing(format!("no regular value near {original:?}")));
                }
                Err(TraceError::Failed(why)) => return Err(NumericError::Tracing(why)),
            }
        };
    }
    let linking: f64 = curves[0]
        .iter()
        .flat_map(|a| curves[1].iter().map(move |b| linking_number(a, b)))
        .sum();
    let invariant = linking.round();
    let defect = (linking - invariant).abs();
    let tolerance = 0.05;
    if defect >= tolerance {
        return Err(NumericError::Defect {
            what: "linking number",
            value: linking,
            defect,
            tolerance,
        });
    }
    Ok(HopfReport {
        invariant: invariant as i64,
        linking,
        defect,
        tolerance,
        values,
        curves,
        perturbations,
    })
}

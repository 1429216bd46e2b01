//! Floating-point checks of what the exact layer cannot express: quadric
//! residuals of sampled points, the retraction of `Q^{m-1}` onto `S^{m-1}`,
//! hemisphere preservation by suspensions, degrees on `S¹` and `S²`, and the
//! Hopf invariant of maps `S³ → S²`.
//!
//! Every scan is seeded and reduces in a fixed order, so results do not
//! depend on the number of threads.

mod degree;
mod hopf;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::lemma::rho_at_one;
use crate::maps::{NumericMap, PolyMap};

pub use degree::{degree_s2, winding_degree, DegreeReport};
pub use hopf::{hopf_invariant, linking_number, HopfOptions, HopfReport, TracedCurve};

pub type ComplexVector = Vec<Complex64>;

/// Largest `|q(p) − 1|` accepted for points handed to the retraction.
pub const QUADRIC_INPUT_TOLERANCE: f64 = 1e-6;

/// Norm bound for the tangent vector `w` when sampling the complex locus.
pub const DEFAULT_TANGENT_RADIUS: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("point is off the quadric: residual {residual:.3e} exceeds {tolerance:.1e}")]
    OffQuadric { residual: f64, tolerance: f64 },
    #[error("expected a map {expected}, got ℂ^{domain} → ℂ^{codomain}")]
    Dimensions {
        expected: &'static str,
        domain: usize,
        codomain: usize,
    },
    #[error("map `{0}` was not built by suspension")]
    NotSuspension(String),
    #[error("map `{0}` has no certified order")]
    Uncertified(String),
    #[error("order {0} is odd; the nullhomotopy needs an even order")]
    OddOrder(u32),
    #[error("{what}: value {value:.6} is {defect:.3} from an integer, tolerance {tolerance}")]
    Defect {
        what: &'static str,
        value: f64,
        defect: f64,
        tolerance: f64,
    },
    #[error("curve tracing failed: {0}")]
    Tracing(String),
}

/// A point of `ℂ^m` with its distance from the quadric `q = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadricPoint {
    pub coords: ComplexVector,
    pub residual: f64,
}

impl QuadricPoint {
    pub fn new(coords: ComplexVector) -> Self {
        let residual = (q_value(&coords) - 1.0).norm();
        Self { coords, residual }
    }

    pub fn real(x: &[f64]) -> Self {
        Self::new(x.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    fn check(&self) -> Result<(), NumericError> {
        if self.residual < QUADRIC_INPUT_TOLERANCE {
            Ok(())
        } else {
            Err(NumericError::OffQuadric {
                residual: self.residual,
                tolerance: QUADRIC_INPUT_TOLERANCE,
            })
        }
    }

    fn split(&self) -> (Vec<f64>, Vec<f64>) {
        (
            self.coords.iter().map(|c| c.re).collect(),
            self.coords.iter().map(|c| c.im).collect(),
        )
    }
}

/// `q(z) = Σ z_j²` in floating point.
pub fn q_value(z: &[Complex64]) -> Complex64 {
    z.iter().map(|c| c * c).sum()
}

fn norm_sqr(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gaussian_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

/// `count` seeded uniform points of `Sⁿ ⊂ ℝ^{n+1}`.
pub fn sample_sphere(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v = gaussian_vector(&mut rng, n + 1);
        let r = norm_sqr(&v).sqrt();
        if r > 1e-8 {
            out.push(v.iter().map(|x| x / r).collect());
        }
    }
    out
}

/// `count` seeded points of the complex quadric `Q^{m-1} ⊂ ℂ^m`, obtained
/// from tangent pairs `(v, w)` with `|w| ≤ radius` through the inverse of
/// [`tangent_bundle_diffeo`].
pub fn sample_quadric(m: usize, count: usize, seed: u64, radius: f64) -> Vec<QuadricPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    sample_sphere(m - 1, count, seed)
        .into_iter()
        .map(|v| {
            let mut w = gaussian_vector(&mut rng, m);
            let along = dot(&w, &v);
            w.iter_mut().zip(&v).for_each(|(a, b)| *a -= along * b);
            let len = norm_sqr(&w).sqrt();
            let target = radius * rng.random::<f64>();
            if len > 1e-12 {
                w.iter_mut().for_each(|a| *a *= target / len);
            } else {
                w.iter_mut().for_each(|a| *a = 0.0);
            }
            tangent_bundle_inverse(&v, &w)
        })
        .collect()
}

/// `H₁(x, y) = (|y|² + 1)^{−1/2}·x`: the retraction of the quadric onto its
/// real sphere.
pub fn retract_h1(p: &QuadricPoint) -> Result<Vec<f64>, NumericError> {
    p.check()?;
    Ok(retract_unchecked(&p.coords))
}

/// `H₁(map(x))` for a real point `x`: how a quadric map is read as a sphere map.
pub fn retracted_image(map: &dyn NumericMap, x: &[f64]) -> Vec<f64> {
    let z: ComplexVector = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    retract_unchecked(&map.eval(&z))
}

fn retract_unchecked(z: &[Complex64]) -> Vec<f64> {
    let y2: f64 = z.iter().map(|c| c.im * c.im).sum();
    let s = (y2 + 1.0).sqrt().recip();
    z.iter().map(|c| c.re * s).collect()
}

/// The deformation `H(x, y, t)` from the identity (`t = 0`) to `H₁` (`t = 1`).
pub fn retraction_homotopy(p: &QuadricPoint, t: f64) -> ComplexVector {
    let (x, y) = p.split();
    let y2 = norm_sqr(&y);
    let a = ((1.0 - t).powi(2) * y2 + 1.0).sqrt() / (y2 + 1.0).sqrt();
    x.iter()
        .zip(&y)
        .map(|(xi, yi)| Complex64::new(a * xi, (1.0 - t) * yi))
        .collect()
}

/// Residual of the real form of the quadric equations:
/// `max(| |x|² − |y|² − 1 |, |x·y|)`.
pub fn real_form_residual(z: &[Complex64]) -> f64 {
    let x: Vec<f64> = z.iter().map(|c| c.re).collect();
    let y: Vec<f64> = z.iter().map(|c| c.im).collect();
    (norm_sqr(&x) - norm_sqr(&y) - 1.0).abs().max(dot(&x, &y).abs())
}

/// Largest real-form residual of `H(p, t)` over `samples` quadric points of
/// `Q^{m-1}` and `tsteps` equally spaced `t ∈ [0, 1]`.
pub fn retraction_homotopy_residual(m: usize, samples: usize, tsteps: usize, seed: u64) -> f64 {
    let points = sample_quadric(m, samples, seed, 1.0);
    let ts: Vec<f64> = (0..tsteps).map(|i| i as f64 / (tsteps.max(2) - 1) as f64).collect();
    points
        .par_iter()
        .map(|p| {
            ts.iter()
                .map(|&t| real_form_residual(&retraction_homotopy(p, t)))
                .fold(0.0, f64::max)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max)
}

/// `g(x, y) = ((|y|² + 1)^{−1/2}·x, y)`: the quadric as the tangent bundle of
/// the sphere. Returns `(v, w)` with `|v| = 1` and `v·w = 0`.
pub fn tangent_bundle_diffeo(p: &QuadricPoint) -> Result<(Vec<f64>, Vec<f64>), NumericError> {
    p.check()?;
    let (_, y) = p.split();
    Ok((retract_unchecked(&p.coords), y))
}

/// Inverse of [`tangent_bundle_diffeo`]: `x = (|w|² + 1)^{1/2}·v`, `y = w`.
pub fn tangent_bundle_inverse(v: &[f64], w: &[f64]) -> QuadricPoint {
    let s = (norm_sqr(w) + 1.0).sqrt();
    QuadricPoint::new(v.iter().zip(w).map(|(a, b)| Complex64::new(s * a, *b)).collect())
}

fn image_residual(map: &dyn NumericMap, z: &[Complex64]) -> f64 {
    (q_value(&map.eval(z)) - 1.0).norm()
}

/// Largest `|q(map(p)) − 1|` over `samples` points: half on the real sphere,
/// half on the complex quadric.
pub fn quadric_residual_scan(map: &dyn NumericMap, samples: usize, seed: u64) -> f64 {
    let m = map.domain_dim();
    let real = samples / 2;
    let mut points: Vec<ComplexVector> = sample_sphere(m - 1, real, seed)
        .into_iter()
        .map(|x| x.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
        .collect();
    points.extend(
        sample_quadric(m, samples - real, seed.wrapping_add(1), DEFAULT_TANGENT_RADIUS)
            .into_iter()
            .map(|p| p.coords),
    );
    points
        .par_iter()
        .map(|z| image_residual(map, z))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max)
}

/// Outcome of [`hemisphere_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct HemisphereReport {
    pub samples: usize,
    pub equator_samples: usize,
    /// Largest `|image_j|` over the suspension block at equator points.
    pub max_equator_value: f64,
    /// Largest deviation of the suspension block from `ρ(1, |z|²)·u`.
    pub max_formula_error: f64,
    /// Smallest `ρ(1, |z|²)` seen.
    pub min_rho: f64,
    /// Coordinates where `sign(image_j) ≠ sign(u_j)`.
    pub sign_violations: usize,
    pub passed: bool,
}

const HEMISPHERE_TOLERANCE: f64 = 1e-9;

/// Checks that a suspension sends the equator `u = 0` to the equator and each
/// hemisphere to the matching one, coordinatewise along the suspension
/// block, on `samples` real sphere points (plus as many equator points).
/// This certifies the hypothesis used to identify the class as a
/// suspension, not the identification itself.
pub fn hemisphere_check(map: &PolyMap, samples: usize, seed: u64) -> Result<HemisphereReport, NumericError> {
    let (ell, triple, f) = map
        .suspension_parts()
        .ok_or_else(|| NumericError::NotSuspension(map.label().to_string()))?;
    let m = f.domain_dim();
    let r = f.codomain_dim();
    let n = m + ell;
    let to_c = |x: &[f64]| -> ComplexVector { x.iter().map(|&v| Complex64::new(v, 0.0)).collect() };

    let general = sample_sphere(n - 1, samples, seed);
    let per_point: Vec<(f64, f64, usize)> = general
        .par_iter()
        .map(|x| {
            let image = map.eval(&to_c(x));
            let (z, u) = x.split_at(m);
            let rho = rho_at_one(triple, norm_sqr(z));
            let mut err = 0.0_f64;
            let mut bad = 0;
            for (j, &uj) in u.iter().enumerate() {
                let v = image[r + j];
                err = err.max((v - Complex64::new(rho * uj, 0.0)).norm());
                if uj.abs() > 1e-12 && (v.re.signum() != uj.signum() || v.re.abs() <= 1e-15) {
                    bad += 1;
                }
            }
            (rho, err, bad)
        })
        .collect();

    let equator = sample_sphere(m - 1, samples, seed.wrapping_add(7));
    let eq_max = equator
        .par_iter()
        .map(|z| {
            let mut x = z.clone();
            x.resize(n, 0.0);
            map.eval(&to_c(&x))[r..].iter().map(|v| v.norm()).fold(0.0, f64::max)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max);

    let min_rho = per_point.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let max_err = per_point.iter().map(|p| p.1).fold(0.0, f64::max);
    let violations = per_point.iter().map(|p| p.2).sum();
    let passed = violations == 0 && min_rho > 0.0 && eq_max == 0.0 && max_err < HEMISPHERE_TOLERANCE;
    Ok(HemisphereReport {
        samples,
        equator_samples: equator.len(),
        max_equator_value: eq_max,
        max_formula_error: max_err,
        min_rho,
        sign_violations: violations,
        passed,
    })
}

/// For a map of even order `2r`, the largest `|q(H(z, t)) − 1|` of
/// `H(z, t) = γ(t)^{−2r}·map(γ(t)·z)`, `γ(t) = e^{iπt}`, over sampled quadric
/// points and `tsteps` values of `t ∈ [0, 1]`.
pub fn even_order_nullhomotopy_residual(
    map: &PolyMap,
    tsteps: usize,
    samples: usize,
    seed: u64,
) -> Result<f64, NumericError> {
    let order = map
        .order()
        .ok_or_else(|| NumericError::Uncertified(map.label().to_string()))?;
    if order % 2 == 1 {
        return Err(NumericError::OddOrder(order));
    }
    let r = order / 2;
    let m = map.domain_dim();
    let mut points: Vec<ComplexVector> = sample_sphere(m - 1, samples / 2, seed)
        .into_iter()
        .map(|x| x.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
        .collect();
    points.extend(
        sample_quadric(m, samples - samples / 2, seed.wrapping_add(1), DEFAULT_TANGENT_RADIUS)
            .into_iter()
            .map(|p| p.coords),
    );
    let ts: Vec<f64> = (0..tsteps).map(|i| i as f64 / (tsteps.max(2) - 1) as f64).collect();
    Ok(points
        .par_iter()
        .map(|z| {
            ts.iter()
                .map(|&t| (q_value(&nullhomotopy_at(map, r, z, t)) - 1.0).norm())
                .fold(0.0, f64::max)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max))
}

/// `γ(t)^{−2r}·map(γ(t)·z)` with `γ(t) = e^{iπt}`.
pub fn nullhomotopy_at(map: &PolyMap, r: u32, z: &[Complex64], t: f64) -> ComplexVector {
    let gamma = Complex64::from_polar(1.0, std::f64::consts::PI * t);
    let scale = Complex64::from_polar(1.0, -std::f64::consts::PI * t * f64::from(2 * r));
    let gz: ComplexVector = z.iter().map(|c| c * gamma).collect();
    map.eval(&gz).into_iter().map(|c| c * scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{circle_pair, constant_map, hopf_pair, identity_map, suspend, tilde_homotopy, Catalog};

    #[test]
    fn sphere_samples() {
        assert!(sample_sphere(3, 0, 1).is_empty());
        let s = sample_sphere(1, 4, 11);
        assert_eq!(s.len(), 4);
        for p in &s {
            assert_eq!(p.len(), 2);
            assert!((norm_sqr(p).sqrt() - 1.0).abs() < 1e-14);
        }
        let big = sample_sphere(3, 1000, 5);
        for j in 0..4 {
            let mean = big.iter().map(|p| p[j]).sum::<f64>() / 1000.0;
            assert!(mean.abs() < 0.1, "coordinate {j} mean {mean}");
        }
        assert_eq!(sample_sphere(2, 10, 3), sample_sphere(2, 10, 3));
    }

    #[test]
    fn retraction_examples() {
        let p = QuadricPoint::real(&[0.6, 0.8]);
        assert_eq!(retract_h1(&p).unwrap(), vec![0.6, 0.8]);
        let q = QuadricPoint::new(vec![Complex64::new(2f64.sqrt(), 0.0), Complex64::new(0.0, 1.0)]);
        assert!(q.residual < 1e-15);
        let h = retract_h1(&q).unwrap();
        assert!((h[0] - 1.0).abs() < 1e-15 && h[1].abs() < 1e-15);
        let off = QuadricPoint::real(&[1.0, 1.0]);
        assert!(matches!(retract_h1(&off), Err(NumericError::OffQuadric { .. })));
        for p in sample_quadric(4, 1000, 9, 2.0) {
            let v = retract_h1(&p).unwrap();
            assert!((norm_sqr(&v).sqrt() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn retraction_homotopy_endpoints() {
        for p in sample_quadric(3, 20, 4, 1.0) {
            let h0 = retraction_homotopy(&p, 0.0);
            for (a, b) in h0.iter().zip(&p.coords) {
                assert!((a - b).norm() < 1e-14);
            }
            let h1 = retraction_homotopy(&p, 1.0);
            assert!(h1.iter().all(|c| c.im == 0.0));
            let x: Vec<f64> = h1.iter().map(|c| c.re).collect();
            assert!((norm_sqr(&x) - 1.0).abs() < 1e-12);
        }
        assert!(retraction_homotopy_residual(3, 100, 11, 1) < 1e-9);
    }

    #[test]
    fn tangent_bundle_round_trip() {
        let q = QuadricPoint::new(vec![Complex64::new(2f64.sqrt(), 0.0), Complex64::new(0.0, 1.0)]);
        let (v, w) = tangent_bundle_diffeo(&q).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-15 && v[1].abs() < 1e-15);
        assert_eq!(w, vec![0.0, 1.0]);
        let (v0, w0) = tangent_bundle_diffeo(&QuadricPoint::real(&[0.0, 1.0, 0.0])).unwrap();
        assert_eq!((v0, w0), (vec![0.0, 1.0, 0.0], vec![0.0; 3]));
        for p in sample_quadric(5, 200, 2, 3.0) {
            let (v, w) = tangent_bundle_diffeo(&p).unwrap();
            assert!((norm_sqr(&v) - 1.0).abs() < 1e-9 && dot(&v, &w).abs() < 1e-9);
            assert!(tangent_bundle_inverse(&v, &w).residual < 1e-9);
        }
    }

    #[test]
    fn residual_scans() {
        assert!(quadric_residual_scan(&identity_map(4), 1000, 1) < 1e-14);
        let (f, g) = hopf_pair();
        assert!(quadric_residual_scan(&f, 10_000, 2) < 1e-12);
        let phi = suspend(&f, &g, 1).unwrap();
        assert!(quadric_residual_scan(&phi, 10_000, 3) < 1e-9);
        for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let b = tilde_homotopy(&f, &g, t).unwrap();
            assert!(quadric_residual_scan(&b, 2000, 4) < 1e-9, "t = {t}");
        }
        let bad = f
            .perturb_coefficient(
                1,
                crate::Monomial::new(vec![1, 1, 0, 0]),
                crate::GaussianRational::ratio(1, 10),
            )
            .unwrap();
        assert!(quadric_residual_scan(&bad, 1000, 5) > 1e-3);
    }

    #[test]
    fn hemispheres() {
        let (f, g) = hopf_pair();
        let phi = suspend(&f, &g, 1).unwrap();
        let rep = hemisphere_check(&phi, 1000, 1).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.max_equator_value, 0.0);
        let neg = phi.with_negated_rho().unwrap();
        let rep = hemisphere_check(&neg, 1000, 1).unwrap();
        assert!(!rep.passed && rep.sign_violations > 0);
        assert!(matches!(
            hemisphere_check(&f, 10, 1),
            Err(NumericError::NotSuspension(_))
        ));
        let cat = Catalog::new();
        assert!(hemisphere_check(cat.big_phi(), 1000, 2).unwrap().passed);
    }

    #[test]
    fn nullhomotopy() {
        let (f, _) = hopf_pair();
        assert!(even_order_nullhomotopy_residual(&f, 11, 1000, 3).unwrap() < 1e-9);
        let z: ComplexVector = [0.3, -0.5, 0.7, 0.2].iter().map(|&v| Complex64::new(v, 0.1)).collect();
        assert_eq!(nullhomotopy_at(&f, 1, &z, 0.0), f.eval(&z));
        let neg: ComplexVector = z.iter().map(|c| -c).collect();
        for (a, b) in nullhomotopy_at(&f, 1, &z, 1.0).iter().zip(f.eval(&neg)) {
            assert!((a - b).norm() < 1e-12);
        }
        let (c, _) = circle_pair(3).unwrap();
        assert_eq!(
            even_order_nullhomotopy_residual(&c, 3, 10, 1),
            Err(NumericError::OddOrder(3))
        );
        assert!(even_order_nullhomotopy_residual(&constant_map(2, 2), 3, 10, 1).unwrap() < 1e-15);
    }
}

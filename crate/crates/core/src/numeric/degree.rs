//! Topological degree of sphere maps read through the retraction `H₁`.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::{retracted_image, NumericError};
use crate::maps::NumericMap;

/// An integer invariant read off a real-valued quadrature.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeReport {
    pub degree: i64,
    pub value: f64,
    /// `|value − degree|`.
    pub defect: f64,
    pub tolerance: f64,
}

impl DegreeReport {
    fn new(what: &'static str, value: f64, tolerance: f64) -> Result<Self, NumericError> {
        let degree = value.round();
        let defect = (value - degree).abs();
        if defect >= tolerance {
            return Err(NumericError::Defect {
                what,
                value,
                defect,
                tolerance,
            });
        }
        Ok(Self {
            degree: degree as i64,
            value,
            defect,
            tolerance,
        })
    }
}

fn check_dims(map: &dyn NumericMap, n: usize, expected: &'static str) -> Result<(), NumericError> {
    if map.domain_dim() != n || map.codomain_dim() != n {
        return Err(NumericError::Dimensions {
            expected,
            domain: map.domain_dim(),
            codomain: map.codomain_dim(),
        });
    }
    Ok(())
}

/// Winding number of `θ ↦ H₁(map(cos θ, sin θ))` by angle accumulation over
/// `samples` steps. The rounding defect must stay below `0.01`.
pub fn winding_degree(map: &dyn NumericMap, samples: usize) -> Result<DegreeReport, NumericError> {
    check_dims(map, 2, "ℂ² → ℂ²")?;
    let angles: Vec<f64> = (0..=samples)
        .into_par_iter()
        .map(|i| {
            let th = 2.0 * PI * i as f64 / samples as f64;
            let w = retracted_image(map, &[th.cos(), th.sin()]);
            w[1].atan2(w[0])
        })
        .collect();
    let total: f64 = angles
        .windows(2)
        .map(|w| {
            let d = w[1] - w[0];
            // wrap into (−π, π]
            d - 2.0 * PI * ((d + PI) / (2.0 * PI)).floor()
        })
        .sum();
    DegreeReport::new("winding number", total / (2.0 * PI), 0.01)
}

fn sphere_point(th: f64, ph: f64) -> [f64; 3] {
    let (st, ct) = th.sin_cos();
    let (sp, cp) = ph.sin_cos();
    [st * cp, st * sp, ct]
}

fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Degree of `h = H₁∘map` on `S²` by midpoint quadrature of
/// `(1/4π) ∬ det(h, ∂_θh, ∂_φh) dθ dφ` on an `nphi × ntheta`
/// latitude–longitude grid, with central differences for the partial
/// derivatives. The rounding defect must stay below `0.05`.
pub fn degree_s2(map: &dyn NumericMap, nphi: usize, ntheta: usize) -> Result<DegreeReport, NumericError> {
    check_dims(map, 3, "ℂ³ → ℂ³")?;
    let fd = 1e-5;
    let h = |th: f64, ph: f64| -> [f64; 3] {
        let v = retracted_image(map, &sphere_point(th, ph));
        [v[0], v[1], v[2]]
    };
    let diff = |a: [f64; 3], b: [f64; 3]| [0, 1, 2].map(|k| (a[k] - b[k]) / (2.0 * fd));
    let (hth, hph) = (PI / ntheta as f64, 2.0 * PI / nphi as f64);
    let rows: Vec<f64> = (0..ntheta)
        .into_par_iter()
        .map(|i| {
            let th = (i as f64 + 0.5) * hth;
            (0..nphi)
                .map(|j| {
                    let ph = (j as f64 + 0.5) * hph;
                    let dt = diff(h(th + fd, ph), h(th - fd, ph));
                    let dp = diff(h(th, ph + fd), h(th, ph - fd));
                    det3(h(th, ph), dt, dp)
                })
                .sum::<f64>()
        })
        .collect();
    let total: f64 = rows.iter().sum::<f64>() * hth * hph / (4.0 * PI);
    DegreeReport::new("degree on S²", total, 0.05)
}

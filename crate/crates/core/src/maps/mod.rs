//! The quadric-map calculus: the forms `q` and `b`, pseudo-homogeneity
//! certification, composition, the suspension operator, and the catalog of
//! homotopy-class representatives.

mod catalog;
mod certify;
mod polymap;

use num_complex::Complex64;

use crate::certificate::PHCertificate;
use crate::exact::{GaussianRational, Monomial, PolyError, Polynomial};
use crate::lemma::{rho_beta, Lemma1Triple, LemmaError};

pub use catalog::{catalog, Catalog, Nontriviality, Target};
pub use certify::{
    b_pairing, certify_order, certify_orthogonal, difference_degree_bounds, spot_check_order, witness_points,
    CertifyOptions, Method, OrthogonalityCertificate,
};
pub use polymap::{suspension_arguments, MapBody, NumericMap, PolyMap, SuspensionTriple, DEFAULT_MATERIALIZE_BUDGET};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MapError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Lemma(#[from] LemmaError),
    #[error("{what} mismatch: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("map `{0}` has no certified order")]
    Uncertified(String),
    #[error("orders differ: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("suspension needs order at least 1")]
    ZeroOrder,
    #[error("maps are not b-orthogonal{}", .0.as_ref().map(|w| format!(": {w}")).unwrap_or_default())]
    NotOrthogonal(Option<Box<crate::certificate::Witness>>),
    #[error("{what} estimated at {estimate:.3e} exceeds budget {budget:.3e}")]
    BudgetExceeded {
        what: &'static str,
        estimate: f64,
        budget: f64,
    },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("certification failed: {0}")]
    CertificationFailed(Box<PHCertificate>),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("malformed map: {0}")]
    Malformed(String),
}

/// `q(z) = z₁² + … + z_m²`.
pub fn q_form(m: usize) -> Polynomial {
    polymap::q_form_in(m, 0..m)
}

/// Certifies `map` at order `k` and attaches the certificate, failing if the
/// identity does not hold.
pub fn certified(map: PolyMap, k: u32) -> Result<PolyMap, MapError> {
    let cert = certify_order(&map, k, Method::Auto, &CertifyOptions::default())?;
    if !cert.passed() {
        return Err(MapError::CertificationFailed(Box::new(cert)));
    }
    Ok(map.with_certificate(cert))
}

fn poly(nvars: usize, terms: &[(i64, &[u16])]) -> Polynomial {
    Polynomial::from_terms(
        nvars,
        terms
            .iter()
            .map(|(c, e)| (Monomial::new(e.to_vec()), GaussianRational::from_int(*c))),
    )
    .expect("consistent variable count")
}

/// The identity map of `ℂ^m`, order 1.
pub fn identity_map(m: usize) -> PolyMap {
    let comps = (0..m).map(|i| Polynomial::var(m, i)).collect();
    let map = PolyMap::explicit(comps, format!("id{m}")).expect("m >= 1");
    certified(map, 1).expect("identity is pseudo-homogeneous of order 1")
}

/// The constant map `ℂ^m → ℂ^r` onto the base point `(1, 0, …, 0)`; order 0.
pub fn constant_map(m: usize, r: usize) -> PolyMap {
    let mut comps = vec![Polynomial::zero(m); r];
    comps[0] = Polynomial::one(m);
    let map = PolyMap::explicit(comps, format!("const({m}->{r})")).expect("m, r >= 1");
    certified(map, 0).expect("constant map onto the base point")
}

/// The Hopf map `f` and its b-orthogonal partner `g`, both `ℂ⁴ → ℂ³` of order 2.
pub fn hopf_pair() -> (PolyMap, PolyMap) {
    // f = (z1²+z2²−z3²−z4², 2z1z3−2z2z4, 2z1z4+2z2z3)
    let f = vec![
        poly(
            4,
            &[
                (1, &[2, 0, 0, 0]),
                (1, &[0, 2, 0, 0]),
                (-1, &[0, 0, 2, 0]),
                (-1, &[0, 0, 0, 2]),
            ],
        ),
        poly(4, &[(2, &[1, 0, 1, 0]), (-2, &[0, 1, 0, 1])]),
        poly(4, &[(2, &[1, 0, 0, 1]), (2, &[0, 1, 1, 0])]),
    ];
    // g = (2z1z4−2z2z3, 2z1z2+2z3z4, z2²+z4²−z1²−z3²)
    let g = vec![
        poly(4, &[(2, &[1, 0, 0, 1]), (-2, &[0, 1, 1, 0])]),
        poly(4, &[(2, &[1, 1, 0, 0]), (2, &[0, 0, 1, 1])]),
        poly(
            4,
            &[
                (1, &[0, 2, 0, 0]),
                (1, &[0, 0, 0, 2]),
                (-1, &[2, 0, 0, 0]),
                (-1, &[0, 0, 2, 0]),
            ],
        ),
    ];
    let f = certified(PolyMap::explicit(f, "hopf.f").expect("shape"), 2).expect("hopf f has order 2");
    let g = certified(PolyMap::explicit(g, "hopf.g").expect("shape"), 2).expect("hopf g has order 2");
    (f, g)
}

/// Circle maps of winding `d`: `f = (Re, ±Im)` of `(z₁ + i z₂)^{|d|}` and
/// `g = (−f₂, f₁)`, both of order `|d|`.
pub fn circle_pair(d: i32) -> Result<(PolyMap, PolyMap), MapError> {
    if d == 0 {
        return Err(MapError::OutOfRange(
            "circle_pair needs d != 0; use constant_map".into(),
        ));
    }
    let n = d.unsigned_abs();
    let w = &Polynomial::var(2, 0) + &Polynomial::var(2, 1).scale(&GaussianRational::i());
    let p = w.pow(n);
    let re = Polynomial::from_terms(2, p.terms().iter().map(|(m, c)| (m.clone(), c.re.clone().into())))?;
    let mut im = Polynomial::from_terms(2, p.terms().iter().map(|(m, c)| (m.clone(), c.im.clone().into())))?;
    if d < 0 {
        im = -&im;
    }
    let g = vec![-&im, re.clone()];
    let f = certified(PolyMap::explicit(vec![re, im], format!("circle({d}).f"))?, n)?;
    let g = certified(PolyMap::explicit(g, format!("circle({d}).g"))?, n)?;
    Ok((f, g))
}

/// A real orthogonal linear map of `ℂ^m` given by a rational matrix (row-major).
pub fn linear_map(matrix: &[Vec<GaussianRational>], label: impl Into<String>) -> Result<PolyMap, MapError> {
    let m = matrix.first().map_or(0, Vec::len);
    let comps = matrix
        .iter()
        .map(|row| Polynomial::from_terms(m, row.iter().enumerate().map(|(j, c)| (Monomial::var(m, j), c.clone()))))
        .collect::<Result<Vec<_>, _>>()?;
    PolyMap::explicit(comps, label)
}

/// `outer ∘ inner`. When both orders are certified the product order is
/// re-verified and attached.
pub fn compose_maps(outer: &PolyMap, inner: &PolyMap) -> Result<PolyMap, MapError> {
    if inner.codomain_dim() != outer.domain_dim() {
        return Err(MapError::DimensionMismatch {
            what: "composition",
            expected: outer.domain_dim(),
            found: inner.codomain_dim(),
        });
    }
    let label = format!("{}∘{}", outer.label(), inner.label());
    let map = PolyMap::composite(outer.clone(), inner.clone(), label);
    match (outer.order(), inner.order()) {
        (Some(a), Some(b)) => certified(map, a * b),
        _ => Ok(map),
    }
}

/// Rebuilds `map` from its leaves up, proving every order recorded in the
/// tree. Certificates already attached anywhere in the tree are ignored.
pub fn recertify(map: &PolyMap, opts: &CertifyOptions) -> Result<PolyMap, MapError> {
    let label = map.label().to_string();
    let rebuilt = match map.body() {
        MapBody::Explicit(c) => PolyMap::explicit(c.clone(), label.clone())?,
        MapBody::Composite { outer, inner } => {
            let (o, i) = (recertify(outer, opts)?, recertify(inner, opts)?);
            compose_maps(&o, &i)?.with_label(label.clone())
        }
        MapBody::Suspension { f, g, ell, triple } => {
            let (f2, g2) = (recertify(f, opts)?, recertify(g, opts)?);
            suspend_with_triple(&f2, &g2, *ell, triple.exact.clone())?.with_label(label.clone())
        }
        MapBody::Offset { base, delta } => PolyMap::from_offset(recertify(base, opts)?, delta.clone(), label.clone())?,
    };
    match (map.order(), rebuilt.order()) {
        (None, _) => Ok(rebuilt),
        (Some(k), Some(j)) if k == j => Ok(rebuilt),
        (Some(k), Some(j)) => Err(MapError::OrderMismatch(k, j)),
        (Some(k), None) => {
            let cert = certify_order(
                &rebuilt,
                k,
                Method::Auto,
                &CertifyOptions {
                    reuse_certificates: true,
                    ..opts.clone()
                },
            )?;
            if cert.passed() {
                Ok(rebuilt.with_certificate(cert))
            } else {
                Err(MapError::CertificationFailed(Box::new(cert)))
            }
        }
    }
}

/// The suspension operator with the canonical `(ρ, β₁, β₂)` triple.
pub fn suspend(f: &PolyMap, g: &PolyMap, ell: usize) -> Result<PolyMap, MapError> {
    let k = shared_order(f, g)?;
    suspend_with_triple(f, g, ell, rho_beta(k)?)
}

fn shared_order(f: &PolyMap, g: &PolyMap) -> Result<u32, MapError> {
    let kf = f.order().ok_or_else(|| MapError::Uncertified(f.label().to_string()))?;
    let kg = g.order().ok_or_else(|| MapError::Uncertified(g.label().to_string()))?;
    if kf != kg {
        return Err(MapError::OrderMismatch(kf, kg));
    }
    if kf == 0 {
        return Err(MapError::ZeroOrder);
    }
    Ok(kf)
}

/// The suspension operator with an explicit triple. The triple's `k` must
/// match the shared order of `f` and `g`.
pub fn suspend_with_triple(f: &PolyMap, g: &PolyMap, ell: usize, triple: Lemma1Triple) -> Result<PolyMap, MapError> {
    if ell == 0 {
        return Err(MapError::OutOfRange("suspension block size must be positive".into()));
    }
    let k = shared_order(f, g)?;
    if triple.k != k {
        return Err(MapError::OrderMismatch(triple.k, k));
    }
    let ortho = certify_orthogonal(f, g, &CertifyOptions::default())?;
    if !ortho.orthogonal {
        return Err(MapError::NotOrthogonal(ortho.witness.map(Box::new)));
    }
    let label = format!("suspend({},{},{ell})", f.label(), g.label());
    let map = PolyMap::suspension(f.clone(), g.clone(), ell, triple, label);
    certified(map, 2 * k - 1)
}

/// `cos(tπ/2)·f + sin(tπ/2)·g`, a homotopy from `f` to `g` through maps of
/// the quadric when `f`, `g` are b-orthogonal of the same order.
#[derive(Clone, Debug)]
pub struct BlendedMap {
    pub f: PolyMap,
    pub g: PolyMap,
    pub t: f64,
    cos: f64,
    sin: f64,
}

pub fn tilde_homotopy(f: &PolyMap, g: &PolyMap, t: f64) -> Result<BlendedMap, MapError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(MapError::OutOfRange(format!("homotopy parameter {t} outside [0, 1]")));
    }
    shared_order(f, g)?;
    let ortho = certify_orthogonal(f, g, &CertifyOptions::default())?;
    if !ortho.orthogonal {
        return Err(MapError::NotOrthogonal(ortho.witness.map(Box::new)));
    }
    let angle = t * std::f64::consts::FRAC_PI_2;
    // Exact endpoints, so that t = 0 and t = 1 reproduce f and g.
    let (sin, cos) = if t == 0.0 {
        (0.0, 1.0)
    } else if t == 1.0 {
        (1.0, 0.0)
    } else {
        angle.sin_cos()
    };
    Ok(BlendedMap {
        f: f.clone(),
        g: g.clone(),
        t,
        cos,
        sin,
    })
}

impl NumericMap for BlendedMap {
    fn domain_dim(&self) -> usize {
        self.f.domain_dim()
    }

    fn codomain_dim(&self) -> usize {
        self.f.codomain_dim()
    }

    fn eval(&self, z: &[Complex64]) -> Vec<Complex64> {
        let a = self.f.eval(z);
        let b = self.g.eval(z);
        a.iter().zip(&b).map(|(x, y)| x * self.cos + y * self.sin).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::{Verdict, Witness};
    use num_traits::Zero;

    fn opts() -> CertifyOptions {
        CertifyOptions::default()
    }

    #[test]
    fn q_form_examples() {
        assert_eq!(q_form(1), Polynomial::var(1, 0).square());
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(q_form(4).eval(&[one, zero, zero, zero]), one);
        assert_eq!(q_form(2).eval(&[one, Complex64::new(0.0, 1.0)]), zero);
    }

    #[test]
    fn hopf_pair_values_and_identities() {
        let (f, g) = hopf_pair();
        let e = |i: usize| -> Vec<GaussianRational> {
            (0..4).map(|j| GaussianRational::from_int(i64::from(i == j))).collect()
        };
        let ints = |v: &[i64]| -> Vec<GaussianRational> { v.iter().map(|&x| GaussianRational::from_int(x)).collect() };
        assert_eq!(f.eval_exact(&e(0)), ints(&[1, 0, 0]));
        assert_eq!(f.eval_exact(&e(2)), ints(&[-1, 0, 0]));
        assert!(b_pairing(&f, &g).unwrap().is_zero());
        assert!(certify_order(&g, 2, Method::FullExpansion, &opts()).unwrap().passed());
        assert_eq!(f.order(), Some(2));
    }

    #[test]
    fn wrong_order_fails_with_witness() {
        let (f, _) = hopf_pair();
        let cert = certify_order(&f, 3, Method::Auto, &opts()).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
        assert!(matches!(cert.witness, Some(Witness::Term { .. })));
        let cert = certify_order(&f, 3, Method::ExactEvaluation, &opts()).unwrap();
        assert!(matches!(cert.witness, Some(Witness::Point { .. })));
    }

    #[test]
    fn identity_certifies_order_one() {
        for m in 1..5 {
            let id = identity_map(m);
            assert!(certify_order(&id, 1, Method::FullExpansion, &opts()).unwrap().passed());
            assert!(certify_order(&id, 1, Method::ExactEvaluation, &opts())
                .unwrap()
                .passed());
        }
        let f = hopf_pair().0;
        let fid = compose_maps(&f, &identity_map(4)).unwrap();
        assert_eq!(fid.components().unwrap(), f.components().unwrap());
    }

    #[test]
    fn circle_pairs() {
        let (f, g) = circle_pair(1).unwrap();
        assert_eq!(f.components().unwrap(), &[Polynomial::var(2, 0), Polynomial::var(2, 1)]);
        assert_eq!(
            g.components().unwrap(),
            &[-&Polynomial::var(2, 1), Polynomial::var(2, 0)]
        );
        let (f2, _) = circle_pair(2).unwrap();
        let (x, y) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
        let expect = [
            &x.square() - &y.square(),
            (&x * &y).scale(&GaussianRational::from_int(2)),
        ];
        assert_eq!(f2.components().unwrap(), &expect);
        let (fm, _) = circle_pair(-1).unwrap();
        assert_eq!(fm.components().unwrap(), &[x.clone(), -&y]);
        for d in [-3, -2, 2, 3, 5] {
            let (f, g) = circle_pair(d).unwrap();
            assert_eq!(f.order(), Some(d.unsigned_abs()));
            assert!(b_pairing(&f, &g).unwrap().is_zero());
        }
        assert!(circle_pair(0).is_err());
    }

    #[test]
    fn phi_suspension_order_and_degree() {
        let (f, g) = hopf_pair();
        let phi = suspend(&f, &g, 1).unwrap();
        assert_eq!((phi.domain_dim(), phi.codomain_dim(), phi.order()), (5, 4, Some(3)));
        // order and degree differ
        let degrees: Vec<u32> = phi.components().unwrap().iter().map(|c| c.degree().unwrap()).collect();
        assert_eq!(degrees.iter().max(), Some(&4));
        for method in [Method::FullExpansion, Method::ExactEvaluation, Method::Structural] {
            let cert = certify_order(&phi, 3, method, &CertifyOptions::from_scratch()).unwrap();
            assert!(cert.passed(), "{method:?}: {cert}");
        }
        // Expansion of the lazy map agrees with exact evaluation of the tree.
        let p = &witness_points(5, 1)[0];
        let from_tree = phi.eval_exact(p);
        let from_comps: Vec<_> = phi.components().unwrap().iter().map(|c| c.eval_exact(p)).collect();
        assert_eq!(from_tree, from_comps);
    }

    #[test]
    fn suspension_of_circle_uses_k1_triple() {
        let (f, g) = circle_pair(1).unwrap();
        let s = suspend(&f, &g, 1).unwrap();
        assert_eq!((s.domain_dim(), s.codomain_dim(), s.order()), (3, 3, Some(1)));
        let (_, triple, _) = s.suspension_parts().unwrap();
        assert_eq!(triple.k, 1);
        assert!(certify_order(&s, 1, Method::FullExpansion, &opts()).unwrap().passed());
    }

    #[test]
    fn suspension_preconditions() {
        let (f, g) = hopf_pair();
        assert!(matches!(suspend(&f, &f, 1), Err(MapError::NotOrthogonal(Some(_)))));
        let (c, d) = circle_pair(2).unwrap();
        assert!(matches!(suspend(&f, &c, 1), Err(MapError::DimensionMismatch { .. })));
        let (c3, _) = circle_pair(3).unwrap();
        assert!(matches!(suspend(&c, &c3, 1), Err(MapError::OrderMismatch(2, 3))));
        let raw = PolyMap::explicit(f.components().unwrap().to_vec(), "raw").unwrap();
        assert!(matches!(suspend(&raw, &g, 1), Err(MapError::Uncertified(_))));
        assert!(suspend(&c, &d, 0).is_err());
    }

    #[test]
    fn chain_orthogonality_propagates() {
        let (f, g) = hopf_pair();
        let phi = suspend(&f, &g, 1).unwrap();
        let f1 = compose_maps(&f, &phi).unwrap();
        let g1 = compose_maps(&g, &phi).unwrap();
        assert_eq!(f1.order(), Some(6));
        assert!(b_pairing(&f1, &g1).unwrap().is_zero());
        let ortho = certify_orthogonal(&f1, &g1, &opts()).unwrap();
        assert!(ortho.orthogonal);
        assert_eq!(ortho.method, crate::certificate::CertMethod::Structural);
    }

    #[test]
    fn perturbed_structured_map_fails_with_point_witness() {
        let (f, g) = hopf_pair();
        let phi = suspend(&f, &g, 1).unwrap();
        let f1 = compose_maps(&f, &phi).unwrap();
        let bad = f1
            .perturb_coefficient(0, Monomial::new(vec![1, 0, 0, 0, 1]), GaussianRational::ratio(1, 3))
            .unwrap();
        let cert = certify_order(&bad, 6, Method::Auto, &opts()).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
        match cert.witness {
            Some(Witness::Point { value, .. }) => assert!(!value.is_zero()),
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn blend_endpoints() {
        let (f, g) = hopf_pair();
        let z = [0.3, -0.2, 0.5, 0.1].map(|x| Complex64::new(x, 0.05));
        let b0 = tilde_homotopy(&f, &g, 0.0).unwrap();
        let b1 = tilde_homotopy(&f, &g, 1.0).unwrap();
        assert_eq!(b0.eval(&z), f.eval(&z));
        assert_eq!(b1.eval(&z), g.eval(&z));
        assert!(tilde_homotopy(&f, &f, 0.5).is_err());
        assert!(tilde_homotopy(&f, &g, 1.5).is_err());
    }

    #[test]
    fn constant_map_has_order_zero() {
        let c = constant_map(3, 3);
        assert_eq!(c.order(), Some(0));
        let (f, _) = hopf_pair();
        let fc = compose_maps(&f, &constant_map(4, 4)).unwrap();
        assert_eq!(fc.order(), Some(0));
    }
}

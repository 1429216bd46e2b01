//! Polynomial maps `ℂ^m → ℂ^r` with their construction lineage.
//!
//! A map keeps the tree it was built from (composition, suspension, or an
//! explicit component list). Expanded components are computed on demand and
//! cached; the deep catalog chains are never expanded, and every numeric or
//! exact point evaluation walks the tree instead.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use num_traits::Zero;

use crate::certificate::PHCertificate;
use crate::exact::{GaussianRational, Monomial, NumericPolynomial, Polynomial};
use crate::lemma::Lemma1Triple;

use super::MapError;

/// Default ceiling on the estimated number of terms when expanding a map.
pub const DEFAULT_MATERIALIZE_BUDGET: f64 = 2.0e6;

/// Anything that can be evaluated in floating point as a map `ℂ^m → ℂ^r`.
pub trait NumericMap: Sync {
    fn domain_dim(&self) -> usize;
    fn codomain_dim(&self) -> usize;
    fn eval(&self, z: &[Complex64]) -> Vec<Complex64>;
}

#[derive(Debug)]
pub enum MapBody {
    Explicit(Vec<Polynomial>),
    /// `outer ∘ inner`.
    Composite {
        outer: PolyMap,
        inner: PolyMap,
    },
    /// `F(z,u) = (β₁(S,T)f(z) + β₂(S,T)g(z), ρ(S,T)u)` with
    /// `S = q(z) + q(u)`, `T = q(z)` and `u ∈ ℂ^ell`.
    Suspension {
        f: PolyMap,
        g: PolyMap,
        ell: usize,
        triple: Arc<SuspensionTriple>,
    },
    /// `base + delta`, componentwise.
    Offset {
        base: PolyMap,
        delta: Vec<Polynomial>,
    },
}

/// A `(ρ, β₁, β₂)` triple together with floating copies for fast evaluation.
#[derive(Debug)]
pub struct SuspensionTriple {
    pub exact: Lemma1Triple,
    numeric: [NumericPolynomial; 3],
}

impl SuspensionTriple {
    pub fn new(exact: Lemma1Triple) -> Self {
        let numeric = [
            exact.rho.to_numeric(),
            exact.beta1.to_numeric(),
            exact.beta2.to_numeric(),
        ];
        Self { exact, numeric }
    }

    /// `[ρ, β₁, β₂]` at `(s, t)`.
    pub fn eval(&self, s: Complex64, t: Complex64) -> [Complex64; 3] {
        let p = [s, t];
        [
            self.numeric[0].eval(&p),
            self.numeric[1].eval(&p),
            self.numeric[2].eval(&p),
        ]
    }

    pub fn eval_exact(&self, s: &GaussianRational, t: &GaussianRational) -> [GaussianRational; 3] {
        let p = [s.clone(), t.clone()];
        [
            self.exact.rho.eval_exact(&p),
            self.exact.beta1.eval_exact(&p),
            self.exact.beta2.eval_exact(&p),
        ]
    }
}

impl PartialEq for MapBody {
    fn eq(&self, other: &Self) -> bool {
        use MapBody::*;
        match (self, other) {
            (Explicit(a), Explicit(b)) => a == b,
            (Composite { outer: o1, inner: i1 }, Composite { outer: o2, inner: i2 }) => o1 == o2 && i1 == i2,
            (
                Suspension {
                    f: f1,
                    g: g1,
                    ell: l1,
                    triple: t1,
                },
                Suspension {
                    f: f2,
                    g: g2,
                    ell: l2,
                    triple: t2,
                },
            ) => l1 == l2 && t1.exact == t2.exact && f1 == f2 && g1 == g2,
            (Offset { base: b1, delta: d1 }, Offset { base: b2, delta: d2 }) => b1 == b2 && d1 == d2,
            _ => false,
        }
    }
}

/// A polynomial map with an optional certified pseudo-homogeneity order.
#[derive(Clone, Debug)]
pub struct PolyMap {
    domain_dim: usize,
    codomain_dim: usize,
    body: Arc<MapBody>,
    order: Option<u32>,
    certificate: Option<PHCertificate>,
    label: String,
    expanded: Arc<OnceLock<Vec<Polynomial>>>,
    numeric: Arc<OnceLock<Vec<NumericPolynomial>>>,
}

/// Equality of the underlying maps' construction; labels and certificates
/// are ignored.
impl PartialEq for PolyMap {
    fn eq(&self, other: &Self) -> bool {
        self.domain_dim == other.domain_dim
            && self.codomain_dim == other.codomain_dim
            && (Arc::ptr_eq(&self.body, &other.body) || *self.body == *other.body)
    }
}

impl PolyMap {
    fn from_body(domain_dim: usize, codomain_dim: usize, body: MapBody, label: String) -> Self {
        Self {
            domain_dim,
            codomain_dim,
            body: Arc::new(body),
            order: None,
            certificate: None,
            label,
            expanded: Arc::new(OnceLock::new()),
            numeric: Arc::new(OnceLock::new()),
        }
    }

    /// A map given by its expanded components, all in the same variables.
    pub fn explicit(components: Vec<Polynomial>, label: impl Into<String>) -> Result<Self, MapError> {
        let Some(first) = components.first() else {
            return Err(MapError::Malformed("a map needs at least one component".into()));
        };
        let m = first.nvars();
        if m == 0 {
            return Err(MapError::Malformed("domain dimension must be positive".into()));
        }
        if let Some(bad) = components.iter().find(|c| c.nvars() != m) {
            return Err(MapError::DimensionMismatch {
                what: "component variable count",
                expected: m,
                found: bad.nvars(),
            });
        }
        let r = components.len();
        Ok(Self::from_body(m, r, MapBody::Explicit(components), label.into()))
    }

    pub(crate) fn composite(outer: PolyMap, inner: PolyMap, label: String) -> Self {
        let (m, r) = (inner.domain_dim, outer.codomain_dim);
        Self::from_body(m, r, MapBody::Composite { outer, inner }, label)
    }

    pub(crate) fn suspension(f: PolyMap, g: PolyMap, ell: usize, triple: Lemma1Triple, label: String) -> Self {
        let (m, r) = (f.domain_dim + ell, f.codomain_dim + ell);
        let triple = Arc::new(SuspensionTriple::new(triple));
        Self::from_body(m, r, MapBody::Suspension { f, g, ell, triple }, label)
    }

    pub(crate) fn offset(base: PolyMap, delta: Vec<Polynomial>, label: String) -> Self {
        let (m, r) = (base.domain_dim, base.codomain_dim);
        Self::from_body(m, r, MapBody::Offset { base, delta }, label)
    }

    /// `outer ∘ inner` without certification, for rebuilding imported trees.
    pub fn from_composite(outer: PolyMap, inner: PolyMap, label: impl Into<String>) -> Result<Self, MapError> {
        if inner.codomain_dim != outer.domain_dim {
            return Err(MapError::DimensionMismatch {
                what: "composition",
                expected: outer.domain_dim,
                found: inner.codomain_dim,
            });
        }
        Ok(Self::composite(outer, inner, label.into()))
    }

    /// A suspension without certification, for rebuilding imported trees.
    pub fn from_suspension(
        f: PolyMap,
        g: PolyMap,
        ell: usize,
        triple: Lemma1Triple,
        label: impl Into<String>,
    ) -> Result<Self, MapError> {
        if f.domain_dim != g.domain_dim || f.codomain_dim != g.codomain_dim {
            return Err(MapError::DimensionMismatch {
                what: "suspension pair",
                expected: f.codomain_dim,
                found: g.codomain_dim,
            });
        }
        if ell == 0 {
            return Err(MapError::OutOfRange("suspension block size must be positive".into()));
        }
        Ok(Self::suspension(f, g, ell, triple, label.into()))
    }

    /// `base + delta` without certification.
    pub fn from_offset(base: PolyMap, delta: Vec<Polynomial>, label: impl Into<String>) -> Result<Self, MapError> {
        if delta.len() != base.codomain_dim {
            return Err(MapError::DimensionMismatch {
                what: "offset components",
                expected: base.codomain_dim,
                found: delta.len(),
            });
        }
        if let Some(bad) = delta.iter().find(|p| p.nvars() != base.domain_dim) {
            return Err(MapError::DimensionMismatch {
                what: "offset variables",
                expected: base.domain_dim,
                found: bad.nvars(),
            });
        }
        Ok(Self::offset(base, delta, label.into()))
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn body(&self) -> &MapBody {
        &self.body
    }

    pub fn order(&self) -> Option<u32> {
        self.order
    }

    pub fn certificate(&self) -> Option<&PHCertificate> {
        self.certificate.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Attaches a certified order. Only passing certificates are accepted.
    pub(crate) fn with_certificate(mut self, cert: PHCertificate) -> Self {
        debug_assert!(cert.passed());
        self.order = Some(cert.claimed_order);
        self.certificate = Some(cert);
        self
    }

    /// Records an order claim without a certificate (used for imported maps).
    pub fn with_claimed_order(mut self, order: Option<u32>) -> Self {
        self.order = order;
        self.certificate = None;
        self
    }

    pub fn is_explicit(&self) -> bool {
        matches!(*self.body, MapBody::Explicit(_))
    }

    /// Suspension block size and triple when the map was built by `suspend`.
    pub fn suspension_parts(&self) -> Option<(usize, &Lemma1Triple, &PolyMap)> {
        match &*self.body {
            MapBody::Suspension { f, ell, triple, .. } => Some((*ell, &triple.exact, f)),
            _ => None,
        }
    }

    /// The same suspension built with `−ρ`, uncertified. The order identity
    /// survives (only `ρ²` enters it) but hemispheres are swapped.
    pub fn with_negated_rho(&self) -> Option<PolyMap> {
        match &*self.body {
            MapBody::Suspension { f, g, ell, triple } => Some(PolyMap::suspension(
                f.clone(),
                g.clone(),
                *ell,
                triple.exact.with_negated_rho(),
                format!("negated-rho({})", self.label),
            )),
            _ => None,
        }
    }

    /// Expanded components if they are already available without work.
    pub fn cached_components(&self) -> Option<&[Polynomial]> {
        match &*self.body {
            MapBody::Explicit(c) => Some(c),
            _ => self.expanded.get().map(Vec::as_slice),
        }
    }

    /// Expanded components, computed on first use when the estimated size
    /// fits `budget` terms.
    pub fn components_within(&self, budget: f64) -> Result<&[Polynomial], MapError> {
        if let Some(c) = self.cached_components() {
            return Ok(c);
        }
        let estimate = self.estimated_terms();
        if estimate > budget {
            return Err(MapError::BudgetExceeded {
                what: "expansion",
                estimate,
                budget,
            });
        }
        let comps = self.expand(budget)?;
        Ok(self.expanded.get_or_init(|| comps))
    }

    pub fn components(&self) -> Result<&[Polynomial], MapError> {
        self.components_within(DEFAULT_MATERIALIZE_BUDGET)
    }

    fn expand(&self, budget: f64) -> Result<Vec<Polynomial>, MapError> {
        match &*self.body {
            MapBody::Explicit(c) => Ok(c.clone()),
            MapBody::Composite { outer, inner } => {
                let args = inner.components_within(budget)?;
                let outer = outer.components_within(budget)?;
                outer.iter().map(|p| p.compose(args).map_err(MapError::from)).collect()
            }
            MapBody::Suspension { f, g, ell, triple } => {
                let m = f.domain_dim;
                let n = m + ell;
                let fc = f.components_within(budget)?;
                let gc = g.components_within(budget)?;
                let (s, t) = suspension_arguments(m, *ell);
                let tr = &triple.exact;
                let b1 = tr.beta1.compose(&[s.clone(), t.clone()])?;
                let b2 = tr.beta2.compose(&[s.clone(), t.clone()])?;
                let rho = tr.rho.compose(&[s, t])?;
                let mut out: Vec<Polynomial> = fc
                    .iter()
                    .zip(gc)
                    .map(|(fj, gj)| &(&b1 * &fj.embed(n, 0)) + &(&b2 * &gj.embed(n, 0)))
                    .collect();
                out.extend((0..*ell).map(|i| &rho * &Polynomial::var(n, m + i)));
                Ok(out)
            }
            MapBody::Offset { base, delta } => {
                let b = base.components_within(budget)?;
                Ok(b.iter().zip(delta).map(|(p, d)| p + d).collect())
            }
        }
    }

    /// Per-component, per-variable degree upper bounds.
    pub fn degree_bounds(&self) -> Vec<Vec<u32>> {
        if let Some(c) = self.cached_components() {
            return c
                .iter()
                .map(|p| (0..p.nvars()).map(|v| p.degree_in(v)).collect())
                .collect();
        }
        match &*self.body {
            MapBody::Explicit(_) => unreachable!("explicit maps have cached components"),
            MapBody::Composite { outer, inner } => {
                let inner_b = inner.degree_bounds();
                let monomial_bound =
                    |e: &[u16], v: usize| -> u32 { e.iter().zip(&inner_b).map(|(&a, ib)| u32::from(a) * ib[v]).sum() };
                match outer.cached_components() {
                    Some(oc) => oc
                        .iter()
                        .map(|p| {
                            (0..self.domain_dim)
                                .map(|v| {
                                    p.terms()
                                        .iter()
                                        .map(|(m, _)| monomial_bound(m.exponents(), v))
                                        .max()
                                        .unwrap_or(0)
                                })
                                .collect()
                        })
                        .collect(),
                    // Coarser: treat each outer variable's degree independently.
                    None => outer
                        .degree_bounds()
                        .iter()
                        .map(|ob| {
                            (0..self.domain_dim)
                                .map(|v| ob.iter().zip(&inner_b).map(|(e, ib)| e * ib[v]).sum())
                                .collect()
                        })
                        .collect(),
                }
            }
            MapBody::Suspension { f, g, ell, triple } => {
                let m = f.domain_dim;
                let bd = 2 * (triple.exact.k - 1);
                let fb = f.degree_bounds();
                let gb = g.degree_bounds();
                let mut out: Vec<Vec<u32>> = fb
                    .iter()
                    .zip(&gb)
                    .map(|(a, b)| {
                        (0..m + ell)
                            .map(|v| bd + if v < m { a[v].max(b[v]) } else { 0 })
                            .collect()
                    })
                    .collect();
                for i in 0..*ell {
                    out.push((0..m + ell).map(|v| bd + u32::from(v == m + i)).collect());
                }
                out
            }
            MapBody::Offset { base, delta } => base
                .degree_bounds()
                .into_iter()
                .zip(delta)
                .map(|(b, d)| b.iter().enumerate().map(|(v, &x)| x.max(d.degree_in(v))).collect())
                .collect(),
        }
    }

    /// Per-component total degree upper bounds.
    pub fn total_degree_bounds(&self) -> Vec<u32> {
        if let Some(c) = self.cached_components() {
            return c.iter().map(|p| p.degree().unwrap_or(0)).collect();
        }
        match &*self.body {
            MapBody::Explicit(_) => unreachable!("explicit maps have cached components"),
            MapBody::Composite { outer, inner } => {
                let it = inner.total_degree_bounds();
                let max_inner = it.iter().copied().max().unwrap_or(0);
                match outer.cached_components() {
                    Some(oc) => oc
                        .iter()
                        .map(|p| {
                            p.terms()
                                .iter()
                                .map(|(m, _)| m.exponents().iter().zip(&it).map(|(&e, &d)| u32::from(e) * d).sum())
                                .max()
                                .unwrap_or(0)
                        })
                        .collect(),
                    None => outer.total_degree_bounds().iter().map(|d| d * max_inner).collect(),
                }
            }
            MapBody::Suspension { f, g, ell, triple } => {
                let bd = 2 * (triple.exact.k - 1);
                let mut out: Vec<u32> = f
                    .total_degree_bounds()
                    .iter()
                    .zip(g.total_degree_bounds())
                    .map(|(a, b)| bd + a.max(&b))
                    .collect();
                out.extend(std::iter::repeat_n(bd + 1, *ell));
                out
            }
            MapBody::Offset { base, delta } => base
                .total_degree_bounds()
                .into_iter()
                .zip(delta)
                .map(|(b, d)| b.max(d.degree().unwrap_or(0)))
                .collect(),
        }
    }

    /// Rough estimate of the total number of terms in the expanded components.
    pub fn estimated_terms(&self) -> f64 {
        if let Some(c) = self.cached_components() {
            return c.iter().map(|p| p.nterms() as f64).sum();
        }
        let dense = |d: u32| dense_monomial_count(self.domain_dim, d);
        let per_component: Vec<f64> = match &*self.body {
            MapBody::Explicit(_) => unreachable!("explicit maps have cached components"),
            MapBody::Composite { outer, inner } => {
                let inner_terms = inner.estimated_terms() / inner.codomain_dim as f64;
                let outer_terms = outer.estimated_terms() / outer.codomain_dim as f64;
                let outer_deg = outer.total_degree_bounds().into_iter().max().unwrap_or(0);
                let guess = outer_terms * inner_terms.powi(outer_deg as i32);
                self.total_degree_bounds()
                    .into_iter()
                    .map(|d| guess.min(dense(d)))
                    .collect()
            }
            MapBody::Suspension { f, g, ell, triple } => {
                let k = triple.exact.k;
                // β(S,T) expands to roughly the dense count in the squares.
                let beta_terms = dense_monomial_count(self.domain_dim, k - 1);
                let fg = (f.estimated_terms() + g.estimated_terms()) / f.codomain_dim as f64;
                let mut v: Vec<f64> = self
                    .total_degree_bounds()
                    .into_iter()
                    .take(f.codomain_dim)
                    .map(|d| (beta_terms * fg).min(dense(d)))
                    .collect();
                v.extend(std::iter::repeat_n(beta_terms, *ell));
                v
            }
            MapBody::Offset { base, delta } => {
                return base.estimated_terms() + delta.iter().map(|p| p.nterms() as f64).sum::<f64>();
            }
        };
        per_component.iter().sum()
    }

    /// Exact evaluation at a Gaussian-rational point.
    pub fn eval_exact(&self, z: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(z.len(), self.domain_dim, "point dimension");
        match &*self.body {
            MapBody::Explicit(c) => c.iter().map(|p| p.eval_exact(z)).collect(),
            MapBody::Composite { outer, inner } => outer.eval_exact(&inner.eval_exact(z)),
            MapBody::Suspension { f, g, ell: _, triple } => {
                let m = f.domain_dim;
                let (zs, us) = z.split_at(m);
                let t = sum_squares_exact(zs);
                let s = &t + &sum_squares_exact(us);
                let [rho, b1, b2] = triple.eval_exact(&s, &t);
                let fz = f.eval_exact(zs);
                let gz = g.eval_exact(zs);
                let mut out: Vec<_> = fz.iter().zip(&gz).map(|(a, b)| &(&b1 * a) + &(&b2 * b)).collect();
                out.extend(us.iter().map(|u| &rho * u));
                out
            }
            MapBody::Offset { base, delta } => base
                .eval_exact(z)
                .into_iter()
                .zip(delta)
                .map(|(v, d)| &v + &d.eval_exact(z))
                .collect(),
        }
    }

    fn numeric_components(&self, comps: &[Polynomial]) -> &[NumericPolynomial] {
        self.numeric
            .get_or_init(|| comps.iter().map(Polynomial::to_numeric).collect())
    }

    /// Replaces the coefficient of `monomial` in `component` by adding `delta`.
    /// Explicit maps are edited in place; structured maps get an offset layer.
    pub fn perturb_coefficient(
        &self,
        component: usize,
        monomial: Monomial,
        delta: GaussianRational,
    ) -> Result<PolyMap, MapError> {
        if component >= self.codomain_dim || monomial.nvars() != self.domain_dim {
            return Err(MapError::Malformed("perturbation outside the map's shape".into()));
        }
        let bump = Polynomial::monomial(self.domain_dim, monomial, delta);
        let label = format!("perturbed({})", self.label);
        if let MapBody::Explicit(c) = &*self.body {
            let mut c = c.clone();
            c[component] = &c[component] + &bump;
            return PolyMap::explicit(c, label);
        }
        let mut delta = vec![Polynomial::zero(self.domain_dim); self.codomain_dim];
        delta[component] = bump;
        Ok(PolyMap::offset(self.clone(), delta, label))
    }
}

impl NumericMap for PolyMap {
    fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    fn eval(&self, z: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(z.len(), self.domain_dim, "point dimension");
        match &*self.body {
            MapBody::Explicit(c) => self.numeric_components(c).iter().map(|p| p.eval(z)).collect(),
            MapBody::Composite { outer, inner } => outer.eval(&inner.eval(z)),
            MapBody::Suspension { f, g, ell: _, triple } => {
                let m = f.domain_dim;
                let (zs, us) = z.split_at(m);
                let t: Complex64 = zs.iter().map(|x| x * x).sum();
                let s = t + us.iter().map(|x| x * x).sum::<Complex64>();
                let [rho, b1, b2] = triple.eval(s, t);
                let fz = f.eval(zs);
                let gz = g.eval(zs);
                let mut out: Vec<_> = fz.iter().zip(&gz).map(|(a, b)| b1 * a + b2 * b).collect();
                out.extend(us.iter().map(|u| rho * u));
                out
            }
            MapBody::Offset { base, delta } => {
                let nums = self
                    .numeric
                    .get_or_init(|| delta.iter().map(Polynomial::to_numeric).collect());
                base.eval(z).into_iter().zip(nums).map(|(v, d)| v + d.eval(z)).collect()
            }
        }
    }
}

/// `(S, T) = (q(z) + q(u), q(z))` as polynomials in `m + ell` variables.
pub fn suspension_arguments(m: usize, ell: usize) -> (Polynomial, Polynomial) {
    let n = m + ell;
    let t = q_form_in(n, 0..m);
    let s = &t + &q_form_in(n, m..n);
    (s, t)
}

/// `Σ_{j ∈ range} x_j²` in `n` variables.
pub(crate) fn q_form_in(n: usize, range: std::ops::Range<usize>) -> Polynomial {
    let terms = range.map(|j| {
        let mut e = vec![0; n];
        e[j] = 2;
        (Monomial::new(e), GaussianRational::from_int(1))
    });
    Polynomial::from_terms(n, terms).expect("consistent variable count")
}

pub(crate) fn sum_squares_exact(z: &[GaussianRational]) -> GaussianRational {
    z.iter().fold(GaussianRational::zero(), |acc, x| &acc + &(x * x))
}

/// Number of monomials of total degree at most `d` in `n` variables.
pub(crate) fn dense_monomial_count(n: usize, d: u32) -> f64 {
    // C(d + n, n)
    let mut c = 1.0_f64;
    for i in 1..=n {
        c = c * (d as f64 + i as f64) / i as f64;
    }
    c
}

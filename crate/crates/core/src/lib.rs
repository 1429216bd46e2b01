//! Complex polynomial representatives of homotopy classes of sphere maps.
//!
//! A polynomial map `f: ℂ^m → ℂ^r` is pseudo-homogeneous of order `k` when
//! `q(f(z)) = q(z)^k` for the complex quadratic form `q(z) = Σ z_j²`; such a
//! map sends the affine quadric `Q^{m-1} = q⁻¹(1)` into `Q^{r-1}`, and since
//! each quadric deformation-retracts onto its real sphere it represents an
//! element of `π_{m-1}(S^{r-1})`.
//!
//! The crate is layered:
//!
//! * [`exact`]: Gaussian-rational coefficients and sparse polynomials.
//! * [`lemma`]: the `(ρ, β₁, β₂)` polynomial triples behind the suspension operator.
//! * [`maps`]: the quadric-map calculus (certification, composition,
//!   suspension, and the catalog of representatives).
//! * [`numeric`]: floating-point checks the exact layer cannot express
//!   (retractions, degrees, the Hopf invariant).

pub mod certificate;
pub mod exact;
pub mod lemma;
pub mod maps;
pub mod numeric;

pub use certificate::{CertMethod, PHCertificate, Verdict, Witness};
pub use exact::{GaussianRational, Monomial, PolyError, Polynomial, Rational};
pub use lemma::{Lemma1Triple, LemmaError};
pub use maps::{MapError, PolyMap};

//! The polynomial triples `(ρ, β₁, β₂)` that make the suspension operator
//! pseudo-homogeneous.
//!
//! For every order `k ≥ 1` the triple satisfies, identically in `(s, t)`,
//!
//! ```text
//! (t − s)·ρ(s,t)² + s^{2k−1} = t^k·(β₁(s,t)² + β₂(s,t)²)
//! ```
//!
//! with `ρ` real and homogeneous of degree `k − 1`, `ρ(1,t) > 0` for `t ≥ 0`,
//! and `β₂` purely imaginary. With `ℓ = k − 1` the construction starts from
//! one-variable polynomials `φ_ℓ`, `λ_ℓ` satisfying
//! `(t − 1)·φ_ℓ(t)² + 1 = t^{ℓ+1}·λ_ℓ(t)`: `φ_ℓ` is the degree-`ℓ` truncation of
//! the series of `(1 − t)^{−1/2}`, so the left side vanishes to order `ℓ + 1`
//! at `t = 0`, and `λ_ℓ` is the exact quotient. Homogenizing gives `ρ` and
//! `β`, and `β₁ = β + 1/4`, `β₂ = i·β − i/4` split `β = β₁² + β₂²`.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::certificate::{CertDetail, CertMethod, PHCertificate};
use crate::exact::{GaussianRational, Monomial, PolyError, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LemmaError {
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("identity fails for k = {k}: difference {difference}")]
    IdentityViolated { k: u32, difference: Polynomial },
    #[error("rho(1,t) > 0 on t >= 0 is not witnessed: phi has a non-positive coefficient")]
    PositivityWitness,
    #[error("malformed triple: {0}")]
    Malformed(String),
}

/// Polynomials in `(s, t)` (two variables) together with the one-variable
/// `φ`, `λ` they were homogenized from.
#[derive(Clone, Debug, PartialEq)]
pub struct Lemma1Triple {
    pub k: u32,
    pub rho: Polynomial,
    pub beta: Polynomial,
    pub beta1: Polynomial,
    pub beta2: Polynomial,
    pub phi: Polynomial,
    pub lambda: Polynomial,
}

/// Coefficient of `t^j` in `(1 − t)^{−1/2}`: `C(2j, j) / 4^j`.
pub fn central_binomial_ratio(j: u32) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    // C(2j,j)/4^j = Π_{i=1}^{j} (2i − 1)/(2i)
    for i in 1..=j {
        num *= 2 * i - 1;
        den *= 2 * i;
    }
    Rational::new(num, den)
}

/// `(φ_ℓ, λ_ℓ)` as polynomials in one variable.
pub fn phi_lambda(ell: u32) -> Result<(Polynomial, Polynomial), LemmaError> {
    let coeffs: Vec<GaussianRational> = (0..=ell).map(|j| central_binomial_ratio(j).into()).collect();
    let phi = Polynomial::univariate(&coeffs);
    let t = Polynomial::var(1, 0);
    let numerator = &(&(&t - &Polynomial::one(1)) * &phi.square()) + &Polynomial::one(1);
    let lambda = divide_by_power(&numerator, ell + 1)?;
    Ok((phi, lambda))
}

/// Exact division of a univariate polynomial by `t^e`.
fn divide_by_power(p: &Polynomial, e: u32) -> Result<Polynomial, PolyError> {
    let shift = Monomial::new(vec![e as u16]);
    let mut terms = Vec::with_capacity(p.nterms());
    for (m, c) in p.terms() {
        match m.div(&shift) {
            Some(q) => terms.push((q, c.clone())),
            None => {
                let rem: Vec<_> = p
                    .terms()
                    .iter()
                    .filter(|(m, _)| m.div(&shift).is_none())
                    .cloned()
                    .collect();
                let rem = Polynomial::from_terms(1, rem)?;
                return Err(PolyError::Remainder(rem.to_string()));
            }
        }
    }
    Polynomial::from_terms(1, terms)
}

/// `s^deg · p(t/s)` for a univariate `p` of degree at most `deg`.
fn homogenize(p: &Polynomial, deg: u32) -> Polynomial {
    let terms = p.terms().iter().map(|(m, c)| {
        let j = m.exponents()[0];
        (Monomial::new(vec![deg as u16 - j, j]), c.clone())
    });
    Polynomial::from_terms(2, terms).expect("two variables")
}

/// The canonical triple for order `k`.
pub fn rho_beta(k: u32) -> Result<Lemma1Triple, LemmaError> {
    if k == 0 {
        return Err(LemmaError::ZeroOrder);
    }
    let ell = k - 1;
    let (phi, lambda) = phi_lambda(ell)?;
    let rho = homogenize(&phi, ell);
    let beta = homogenize(&lambda, ell);
    let quarter = Polynomial::constant(2, GaussianRational::ratio(1, 4));
    let beta1 = &beta + &quarter;
    let beta2 = (&beta - &quarter).scale(&GaussianRational::i());
    Ok(Lemma1Triple {
        k,
        rho,
        beta,
        beta1,
        beta2,
        phi,
        lambda,
    })
}

impl Lemma1Triple {
    /// `(t − s)ρ² + s^{2k−1} − t^k(β₁² + β₂²)`, which must vanish.
    pub fn identity_difference(&self) -> Polynomial {
        let s = Polynomial::var(2, 0);
        let t = Polynomial::var(2, 1);
        let lhs = &(&(&t - &s) * &self.rho.square()) + &s.pow(2 * self.k - 1);
        let rhs = &t.pow(self.k) * &(&self.beta1.square() + &self.beta2.square());
        &lhs - &rhs
    }

    /// Evaluates `(ρ, β₁, β₂)` at complex `(s, t)`.
    pub fn eval(&self, s: num_complex::Complex64, t: num_complex::Complex64) -> [num_complex::Complex64; 3] {
        let p = [s, t];
        [self.rho.eval(&p), self.beta1.eval(&p), self.beta2.eval(&p)]
    }

    /// The same triple with `ρ` negated. The identity still holds (only `ρ²`
    /// enters it) but positivity of `ρ(1,t)` is lost.
    pub fn with_negated_rho(&self) -> Self {
        let mut out = self.clone();
        out.rho = -&self.rho;
        out.phi = -&self.phi;
        out
    }

    /// `ρ(1, t) > 0` for `t ≥ 0`, witnessed by the coefficients of `ρ(1,·)`
    /// all being positive rationals.
    pub fn positivity_witness(&self) -> bool {
        !self.rho.is_zero() && self.rho.terms().iter().all(|(_, c)| c.is_real() && c.re.is_positive())
    }
}

/// Verifies the identity by full expansion and the positivity witness.
pub fn verify_lemma1(triple: &Lemma1Triple) -> Result<PHCertificate, LemmaError> {
    let k = triple.k;
    if k == 0 {
        return Err(LemmaError::ZeroOrder);
    }
    for (name, p) in [("rho", &triple.rho), ("beta1", &triple.beta1), ("beta2", &triple.beta2)] {
        if p.nvars() != 2 {
            return Err(LemmaError::Malformed(format!("{name} must have 2 variables")));
        }
    }
    if !triple.rho.has_real_coefficients() {
        return Err(LemmaError::Malformed("rho must have real coefficients".into()));
    }
    if !triple.beta2.has_imaginary_coefficients() {
        return Err(LemmaError::Malformed("beta2 must have imaginary coefficients".into()));
    }
    let difference = triple.identity_difference();
    if !difference.is_zero() {
        return Err(LemmaError::IdentityViolated { k, difference });
    }
    if !triple.positivity_witness() {
        return Err(LemmaError::PositivityWitness);
    }
    let terms = triple.rho.nterms() + triple.beta1.nterms() + triple.beta2.nterms();
    Ok(PHCertificate::pass(
        k,
        CertMethod::FullExpansion,
        CertDetail::Expansion { terms },
    ))
}

/// `ρ(1, t)` as a real number for real `t`.
pub fn rho_at_one(triple: &Lemma1Triple, t: f64) -> f64 {
    triple
        .rho
        .terms()
        .iter()
        .map(|(m, c)| c.to_complex64().re * t.powi(i32::from(m.exponents()[1])))
        .sum()
}

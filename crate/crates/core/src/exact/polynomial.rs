//! Sparse multivariate polynomials over ℚ(i).
//!
//! Terms are kept in a vector sorted by descending graded-lex order with no
//! zero coefficients and no repeated monomials, so structural equality is
//! polynomial equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use super::{GaussianRational, Monomial, PolyError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(Monomial, GaussianRational)>,
}

type Accumulator = FxHashMap<Monomial, GaussianRational>;

fn accumulate(acc: &mut Accumulator, m: Monomial, c: GaussianRational) {
    match acc.get_mut(&m) {
        Some(slot) => *slot += &c,
        None => {
            acc.insert(m, c);
        }
    }
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::one())
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        Self::monomial(nvars, Monomial::one(nvars), c)
    }

    /// The coordinate function `x_index` (zero-based).
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(
            index < nvars,
            "variable index {index} out of range for {nvars} variables"
        );
        Self::monomial(nvars, Monomial::var(nvars, index), GaussianRational::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: GaussianRational) -> Self {
        assert_eq!(m.nvars(), nvars);
        if c.is_zero() {
            Self::zero(nvars)
        } else {
            Self {
                nvars,
                terms: vec![(m, c)],
            }
        }
    }

    /// Builds a canonical polynomial from arbitrary terms, merging repeats
    /// and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Monomial, GaussianRational)>,
    {
        let mut acc = Accumulator::default();
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(PolyError::VariableCount {
                    left: nvars,
                    right: m.nvars(),
                });
            }
            accumulate(&mut acc, m, c);
        }
        Ok(Self::from_accumulator(nvars, acc))
    }

    fn from_accumulator(nvars: usize, acc: Accumulator) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Self { nvars, terms }
    }

    /// Univariate polynomial `Σ coeffs[j] t^j`.
    pub fn univariate(coeffs: &[GaussianRational]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| (Monomial::new(vec![j as u16]), c.clone()));
        Self::from_terms(1, terms).expect("single variable")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, GaussianRational)] {
        &self.terms
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<&(Monomial, GaussianRational)> {
        self.terms.first()
    }

    pub fn coefficient(&self, m: &Monomial) -> GaussianRational {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| GaussianRational::zero())
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coefficient(&Monomial::one(self.nvars))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// Degree in a single variable (0 for the zero polynomial).
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| u32::from(m.exponents()[var]))
            .max()
            .unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.degree() {
            None => true,
            Some(d) => self.terms.iter().all(|(m, _)| m.degree() == d),
        }
    }

    pub fn has_real_coefficients(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_real())
    }

    pub fn has_imaginary_coefficients(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_imaginary())
    }

    fn check_same(&self, other: &Self) -> Result<(), PolyError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(PolyError::VariableCount {
                left: self.nvars,
                right: other.nvars,
            })
        }
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let sign = |c: &GaussianRational| if negate_other { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((b[j].0.clone(), sign(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), sign(c))));
        Self {
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        let (small, large) = if self.nterms() <= other.nterms() {
            (self, other)
        } else {
            (other, self)
        };
        if small.nterms() == 1 {
            let (m, c) = &small.terms[0];
            // Multiplying by a single term preserves the order.
            let terms = large.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect();
            return Ok(Self {
                nvars: self.nvars,
                terms,
            });
        }
        let mut acc = Accumulator::default();
        acc.reserve(large.nterms() * 2);
        for (m1, c1) in &small.terms {
            for (m2, c2) in &large.terms {
                accumulate(&mut acc, m1.mul(m2), c1 * c2);
            }
        }
        Ok(Self::from_accumulator(self.nvars, acc))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect();
        Self {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact substitution `x_i ↦ args[i]`.
    pub fn compose(&self, args: &[Polynomial]) -> Result<Self, PolyError> {
        if args.len() != self.nvars {
            return Err(PolyError::Arity {
                expected: self.nvars,
                found: args.len(),
            });
        }
        let Some(target) = args.first().map(Polynomial::nvars) else {
            // No variables: the polynomial is a constant, kept in a zero-variable ring.
            return Ok(self.clone());
        };
        if let Some(bad) = args.iter().find(|a| a.nvars != target) {
            return Err(PolyError::VariableCount {
                left: target,
                right: bad.nvars,
            });
        }
        let mut powers: Vec<Vec<Polynomial>> = args.iter().map(|a| vec![Self::one(target), a.clone()]).collect();
        for (i, a) in args.iter().enumerate() {
            let need = self.degree_in(i) as usize;
            while powers[i].len() <= need {
                let next = powers[i].last().expect("nonempty") * a;
                powers[i].push(next);
            }
        }
        let mut acc = Accumulator::default();
        for (m, c) in &self.terms {
            let mut prod: Option<Polynomial> = None;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = &powers[i][e as usize];
                prod = Some(match prod {
                    None => p.clone(),
                    Some(q) => &q * p,
                });
            }
            let prod = prod.unwrap_or_else(|| Self::one(target));
            for (n, d) in prod.terms {
                accumulate(&mut acc, n, &d * c);
            }
        }
        Ok(Self::from_accumulator(target, acc))
    }

    /// Floating evaluation. Coefficients are converted to `f64` at the last
    /// step and terms are summed in canonical order.
    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let powers = power_table(point, |i| self.degree_in(i), Complex64::new(1.0, 0.0), |a, b| a * b);
        self.terms
            .iter()
            .map(|(m, c)| {
                m.exponents()
                    .iter()
                    .enumerate()
                    .fold(c.to_complex64(), |acc, (i, &e)| acc * powers[i][e as usize])
            })
            .sum()
    }

    /// Exact evaluation at a Gaussian-rational point.
    pub fn eval_exact(&self, point: &[GaussianRational]) -> GaussianRational {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let powers = power_table(point, |i| self.degree_in(i), GaussianRational::one(), |a, b| a * b);
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            acc += &t;
        }
        acc
    }

    /// The same polynomial viewed in `nvars` variables, its own occupying
    /// positions `offset..offset + self.nvars()`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Self {
        assert!(offset + self.nvars <= nvars);
        // Embedding preserves relative grlex order only at offset 0 with
        // trailing padding; re-sort in general.
        let mut terms: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| (m.embed(nvars, offset), c.clone()))
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Self { nvars, terms }
    }

    /// Floating copy for repeated numeric evaluation.
    pub fn to_numeric(&self) -> NumericPolynomial {
        NumericPolynomial {
            nvars: self.nvars,
            max_deg: (0..self.nvars).map(|i| self.degree_in(i)).collect(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.exponents().to_vec().into_boxed_slice(), c.to_complex64()))
                .collect(),
        }
    }
}

fn power_table<T: Clone>(point: &[T], degree: impl Fn(usize) -> u32, one: T, mul: impl Fn(&T, &T) -> T) -> Vec<Vec<T>> {
    point
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let d = degree(i) as usize;
            let mut row = Vec::with_capacity(d + 1);
            row.push(one.clone());
            for k in 1..=d {
                let next = mul(&row[k - 1], x);
                row.push(next);
            }
            row
        })
        .collect()
}

/// Polynomial with `f64` complex coefficients, used by the numeric scans.
#[derive(Clone, Debug)]
pub struct NumericPolynomial {
    nvars: usize,
    max_deg: Vec<u32>,
    terms: Vec<(Box<[u16]>, Complex64)>,
}

impl NumericPolynomial {
    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let powers = power_table(point, |i| self.max_deg[i], Complex64::new(1.0, 0.0), |a, b| a * b);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .enumerate()
                    .fold(*c, |acc, (i, &k)| acc * powers[i][k as usize])
            })
            .sum()
    }
}

macro_rules! ref_ops {
    ($tr:ident, $m:ident, $checked:ident) => {
        /// Panics on a variable-count mismatch; use the `checked_*` form to
        /// get an error instead.
        impl<'a> $tr<&'a Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &'a Polynomial) -> Polynomial {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
ref_ops!(Add, add, checked_add);
ref_ops!(Sub, sub, checked_sub);
ref_ops!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

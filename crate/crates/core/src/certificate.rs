//! Records of exact identity verifications.

use std::fmt;

use crate::exact::{GaussianRational, Monomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CertMethod {
    /// The difference polynomial was expanded and found to have no terms.
    FullExpansion,
    /// The difference was evaluated exactly on a tensor grid with more
    /// points per variable than its degree in that variable.
    ExactEvaluation,
    /// The identity was reduced, through exact ring identities, to smaller
    /// identities that were each verified by expansion.
    Structural,
}

impl CertMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            CertMethod::FullExpansion => "full-expansion",
            CertMethod::ExactEvaluation => "exact-evaluation",
            CertMethod::Structural => "structural",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "full-expansion" => Some(CertMethod::FullExpansion),
            "exact-evaluation" => Some(CertMethod::ExactEvaluation),
            "structural" => Some(CertMethod::Structural),
            _ => None,
        }
    }
}

impl fmt::Display for CertMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertDetail {
    /// Number of terms in the expanded left-hand side.
    Expansion { terms: usize },
    /// `points` evaluations; `per_variable[v]` points along variable `v`,
    /// each exceeding the degree bound `degree_bounds[v]`.
    Grid {
        points: u64,
        per_variable: Vec<u32>,
        degree_bounds: Vec<u32>,
    },
    /// One line per sub-identity that was verified.
    Structural { steps: Vec<String> },
    /// A failing verdict found by evaluating at explicit points.
    Search { points: usize },
}

impl fmt::Display for CertDetail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertDetail::Expansion { terms } => write!(f, "expanded {terms} terms"),
            CertDetail::Grid {
                points,
                per_variable,
                degree_bounds,
            } => write!(
                f,
                "{points} grid points, per-variable counts {per_variable:?} over degree bounds {degree_bounds:?}"
            ),
            CertDetail::Structural { steps } => write!(f, "{}", steps.join("; ")),
            CertDetail::Search { points } => write!(f, "witness search over {points} points"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

/// Evidence that an identity does not hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A term of the nonzero difference polynomial.
    Term {
        monomial: Monomial,
        coefficient: GaussianRational,
    },
    /// A point where the difference evaluates to a nonzero value.
    Point {
        point: Vec<GaussianRational>,
        value: GaussianRational,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Term { monomial, coefficient } => {
                write!(f, "term {coefficient} * x^{:?}", monomial.exponents())
            }
            Witness::Point { point, value } => {
                let p: Vec<String> = point.iter().map(ToString::to_string).collect();
                write!(f, "value {value} at ({})", p.join(", "))
            }
        }
    }
}

/// Outcome of checking `q∘map − q^k ≡ 0` (or another polynomial identity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PHCertificate {
    pub claimed_order: u32,
    pub method: CertMethod,
    pub detail: CertDetail,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

impl PHCertificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub(crate) fn pass(claimed_order: u32, method: CertMethod, detail: CertDetail) -> Self {
        Self {
            claimed_order,
            method,
            detail,
            verdict: Verdict::Pass,
            witness: None,
        }
    }

    pub(crate) fn fail(claimed_order: u32, method: CertMethod, detail: CertDetail, witness: Witness) -> Self {
        Self {
            claimed_order,
            method,
            detail,
            verdict: Verdict::Fail,
            witness: Some(witness),
        }
    }
}

impl fmt::Display for PHCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "order {} via {}: {} ({})",
            self.claimed_order,
            self.method,
            self.verdict.as_str(),
            self.detail
        )?;
        if let Some(w) = &self.witness {
            write!(f, "; witness {w}")?;
        }
        Ok(())
    }
}

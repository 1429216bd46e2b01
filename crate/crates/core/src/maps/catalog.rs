//! Representatives of homotopy classes, built from the Hopf pair, circle
//! pairs, composition, and suspension.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use super::{circle_pair, compose_maps, constant_map, hopf_pair, suspend, MapError, PolyMap};

/// A catalog request.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    /// Degree-`d` class of `π_n(Sⁿ)`.
    PiN { n: u32, d: i32 },
    /// Generator of `π_{n+1}(Sⁿ) = ℤ₂`, `n ≥ 3`.
    PiNp1 { n: u32 },
    /// Generator of `π_{n+2}(Sⁿ) = ℤ₂`, `n ≥ 2`.
    PiNp2 { n: u32 },
    /// `d` times the Hopf class in `π₃(S²)`.
    Pi3S2 { d: i32 },
    /// The order-2 class of `π_{n+3}(Sⁿ)`, `n ≥ 2`.
    PiNp3 { n: u32 },
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::PiN { n, d } => write!(f, "pi_n:{n},{d}"),
            Target::PiNp1 { n } => write!(f, "pi_np1:{n}"),
            Target::PiNp2 { n } => write!(f, "pi_np2:{n}"),
            Target::Pi3S2 { d } => write!(f, "pi3_s2:{d}"),
            Target::PiNp3 { n } => write!(f, "pi_np3:{n}"),
        }
    }
}

impl FromStr for Target {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MapError::OutOfRange(format!("unknown target `{s}`"));
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let ints: Vec<i64> = args
            .split(',')
            .map(|a| a.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        let n = |v: i64| u32::try_from(v).map_err(|_| MapError::OutOfRange(format!("`{s}`: n must be nonnegative")));
        let d = |v: i64| i32::try_from(v).map_err(|_| MapError::OutOfRange(format!("`{s}`: d out of range")));
        let target = match (kind, ints.as_slice()) {
            ("pi_n", [a, b]) => Target::PiN { n: n(*a)?, d: d(*b)? },
            ("pi_np1", [a]) => Target::PiNp1 { n: n(*a)? },
            ("pi_np2", [a]) => Target::PiNp2 { n: n(*a)? },
            ("pi3_s2", [b]) => Target::Pi3S2 { d: d(*b)? },
            ("pi_np3" | "pi_np3_torsion", [a]) => Target::PiNp3 { n: n(*a)? },
            _ => return Err(bad()),
        };
        target.check_range()?;
        Ok(target)
    }
}

impl Target {
    pub fn check_range(&self) -> Result<(), MapError> {
        let err = |msg: String| Err(MapError::OutOfRange(msg));
        match *self {
            Target::PiN { n, .. } if n < 1 => err("pi_n needs n >= 1".into()),
            Target::PiNp1 { n: 2 } => err("pi_np1:2 is served by pi3_s2".into()),
            Target::PiNp1 { n } if n < 3 => err("pi_np1 needs n >= 3".into()),
            Target::PiNp2 { n } if n < 2 => err("pi_np2 needs n >= 2".into()),
            Target::PiNp3 { n } if n < 2 => err("pi_np3 needs n >= 2".into()),
            _ => Ok(()),
        }
    }

    /// What evidence beyond the exact identities is available for the class
    /// being nontrivial.
    pub fn nontriviality(&self) -> Nontriviality {
        match *self {
            Target::PiN { d: 0, .. } | Target::Pi3S2 { d: 0 } => Nontriviality::Trivial,
            Target::PiN { n: 1, .. } => Nontriviality::Computed("winding number on S¹"),
            Target::PiN { n: 2, .. } => Nontriviality::Computed("degree on S² by quadrature"),
            Target::PiN { .. } => Nontriviality::Inherited("degree of the S² suspension; suspension preserves degree"),
            Target::Pi3S2 { .. } => Nontriviality::Computed("Hopf invariant by preimage linking"),
            Target::PiNp1 { .. } | Target::PiNp2 { .. } | Target::PiNp3 { .. } => Nontriviality::NotDecidable,
        }
    }
}

/// Evidence status for a catalog class being nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nontriviality {
    /// The class is the unit; nothing to show.
    Trivial,
    /// A numeric invariant decides it.
    Computed(&'static str),
    /// Follows from a computed invariant of a lower instance.
    Inherited(&'static str),
    /// Torsion classes of the stable stems: no desk-scale invariant. The
    /// exact identities and the hemisphere structure are checked; the class
    /// itself is not.
    NotDecidable,
}

impl fmt::Display for Nontriviality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nontriviality::Trivial => f.write_str("unit class (constant map)"),
            Nontriviality::Computed(how) => write!(f, "decided numerically: {how}"),
            Nontriviality::Inherited(how) => write!(f, "inherited: {how}"),
            Nontriviality::NotDecidable => f.write_str(
                "not decidable here: identities and hemisphere structure are certified, nontriviality of the torsion class is not",
            ),
        }
    }
}

/// Lazily built chain maps shared by all catalog requests.
#[derive(Default)]
pub struct Catalog {
    hopf: OnceLock<(PolyMap, PolyMap)>,
    phi: OnceLock<PolyMap>,
    f1g1: OnceLock<(PolyMap, PolyMap)>,
    big_phi: OnceLock<PolyMap>,
    f2g2: OnceLock<(PolyMap, PolyMap)>,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// The process-wide instance.
    pub fn global() -> &'static Catalog {
        static GLOBAL: OnceLock<Catalog> = OnceLock::new();
        GLOBAL.get_or_init(Catalog::new)
    }

    pub fn hopf(&self) -> &(PolyMap, PolyMap) {
        self.hopf.get_or_init(hopf_pair)
    }

    /// `φ = suspend(f, g, 1)`: `ℂ⁵ → ℂ⁴`, order 3.
    pub fn phi(&self) -> &PolyMap {
        self.phi.get_or_init(|| {
            let (f, g) = self.hopf();
            suspend(f, g, 1).expect("hopf pair suspends").with_label("phi")
        })
    }

    /// `(f∘φ, g∘φ)`: `ℂ⁵ → ℂ³`, order 6, b-orthogonal.
    pub fn f1_g1(&self) -> &(PolyMap, PolyMap) {
        self.f1g1.get_or_init(|| {
            let (f, g) = self.hopf();
            let phi = self.phi();
            let f1 = compose_maps(f, phi).expect("f∘φ").with_label("f1");
            let g1 = compose_maps(g, phi).expect("g∘φ").with_label("g1");
            (f1, g1)
        })
    }

    /// `Φ = suspend(f₁, g₁, 1)`: `ℂ⁶ → ℂ⁴`, order 11.
    pub fn big_phi(&self) -> &PolyMap {
        self.big_phi.get_or_init(|| {
            let (f1, g1) = self.f1_g1();
            suspend(f1, g1, 1).expect("(f1, g1) suspends").with_label("Phi")
        })
    }

    /// `(f∘Φ, g∘Φ)`: `ℂ⁶ → ℂ³`, order 22, b-orthogonal.
    pub fn f2_g2(&self) -> &(PolyMap, PolyMap) {
        self.f2g2.get_or_init(|| {
            let (f, g) = self.hopf();
            let big_phi = self.big_phi();
            let f2 = compose_maps(f, big_phi).expect("f∘Φ").with_label("f2");
            let g2 = compose_maps(g, big_phi).expect("g∘Φ").with_label("g2");
            (f2, g2)
        })
    }

    /// The b-orthogonal same-order pairs the catalog suspends.
    pub fn pairs(&self) -> Vec<(String, PolyMap, PolyMap)> {
        let mut out = Vec::new();
        for d in [-3, -2, -1, 1, 2, 3] {
            let (f, g) = circle_pair(d).expect("d != 0");
            out.push((format!("circle({d})"), f, g));
        }
        let (f, g) = self.hopf();
        out.push(("hopf".into(), f.clone(), g.clone()));
        let (f1, g1) = self.f1_g1();
        out.push(("(f1,g1)".into(), f1.clone(), g1.clone()));
        let (f2, g2) = self.f2_g2();
        out.push(("(f2,g2)".into(), f2.clone(), g2.clone()));
        out
    }

    pub fn get(&self, target: Target) -> Result<PolyMap, MapError> {
        target.check_range()?;
        let label = target.to_string();
        let map = match target {
            Target::PiN { n, d: 0 } => constant_map(n as usize + 1, n as usize + 1),
            Target::PiN { n: 1, d } => circle_pair(d)?.0,
            Target::PiN { n, d } => {
                let (f, g) = circle_pair(d)?;
                suspend(&f, &g, n as usize - 1)?
            }
            Target::PiNp1 { n } => {
                let (f, g) = self.hopf();
                if n == 3 {
                    self.phi().clone()
                } else {
                    suspend(f, g, n as usize - 2)?
                }
            }
            Target::Pi3S2 { d } => {
                let (f, _) = self.hopf();
                let inner = self.get(Target::PiN { n: 3, d })?;
                compose_maps(f, &inner)?
            }
            Target::PiNp2 { n: 2 } => self.f1_g1().0.clone(),
            Target::PiNp2 { n } => {
                let (f1, g1) = self.f1_g1();
                if n == 3 {
                    self.big_phi().clone()
                } else {
                    suspend(f1, g1, n as usize - 2)?
                }
            }
            Target::PiNp3 { n: 2 } => self.f2_g2().0.clone(),
            Target::PiNp3 { n } => {
                let (f2, g2) = self.f2_g2();
                suspend(f2, g2, n as usize - 2)?
            }
        };
        if map.order().is_none() {
            return Err(MapError::Uncertified(label));
        }
        Ok(map.with_label(label))
    }
}

/// Builds the catalog map for `target` using the shared chain cache.
pub fn catalog(target: Target) -> Result<PolyMap, MapError> {
    Catalog::global().get(target)
}

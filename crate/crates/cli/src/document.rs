//! The on-disk map format: one JSON object, rationals as canonical strings.

use quadrep_core::certificate::CertDetail;
use quadrep_core::exact::{format_rational, parse_rational};
use quadrep_core::lemma::rho_beta;
use quadrep_core::maps::MapBody;
use quadrep_core::{GaussianRational, Monomial, PHCertificate, PolyMap, Polynomial};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

/// Largest estimated term count written out as expanded components.
pub const EXPORT_TERM_BUDGET: f64 = 50_000.0;

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format_version {0}")]
    Version(u32),
    #[error("malformed document: {0}")]
    Malformed(String),
}

fn malformed(msg: impl Into<String>) -> DocumentError {
    DocumentError::Malformed(msg.into())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub exponents: Vec<u16>,
    pub re: String,
    pub im: String,
}

pub type ComponentsDoc = Vec<Vec<TermDoc>>;

/// How the map was built. Lets lazily represented maps travel without
/// expanding them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NodeDoc {
    Explicit {
        label: String,
        order: Option<u32>,
        domain_dim: usize,
        components: ComponentsDoc,
    },
    Composite {
        label: String,
        order: Option<u32>,
        outer: Box<NodeDoc>,
        inner: Box<NodeDoc>,
    },
    /// The triple is always the canonical one of order `k`.
    Suspension {
        label: String,
        order: Option<u32>,
        ell: usize,
        k: u32,
        f: Box<NodeDoc>,
        g: Box<NodeDoc>,
    },
    Offset {
        label: String,
        order: Option<u32>,
        base: Box<NodeDoc>,
        delta: ComponentsDoc,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub claimed_order: u32,
    pub method: String,
    pub verdict: String,
    pub detail: String,
    pub witness: Option<String>,
}

impl From<&PHCertificate> for CertificateDoc {
    fn from(c: &PHCertificate) -> Self {
        let detail = match &c.detail {
            CertDetail::Structural { steps } => steps.join("\n"),
            other => other.to_string(),
        };
        Self {
            claimed_order: c.claimed_order,
            method: c.method.as_str().to_string(),
            verdict: c.verdict.as_str().to_string(),
            detail,
            witness: c.witness.as_ref().map(ToString::to_string),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub format_version: u32,
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub order: Option<u32>,
    pub label: String,
    /// Expanded components; `null` when the map is too large to expand.
    pub components: Option<ComponentsDoc>,
    pub construction: NodeDoc,
    pub certificates: Vec<CertificateDoc>,
}

fn poly_doc(p: &Polynomial) -> Vec<TermDoc> {
    p.terms()
        .iter()
        .map(|(m, c)| TermDoc {
            exponents: m.exponents().to_vec(),
            re: format_rational(&c.re),
            im: format_rational(&c.im),
        })
        .collect()
}

fn components_doc(comps: &[Polynomial]) -> ComponentsDoc {
    comps.iter().map(poly_doc).collect()
}

fn poly_of(terms: &[TermDoc], nvars: usize) -> Result<Polynomial, DocumentError> {
    let mut parsed = Vec::with_capacity(terms.len());
    for t in terms {
        if t.exponents.len() != nvars {
            return Err(malformed(format!(
                "term has {} exponents, expected {nvars}",
                t.exponents.len()
            )));
        }
        let re = parse_rational(&t.re).map_err(|e| malformed(e.to_string()))?;
        let im = parse_rational(&t.im).map_err(|e| malformed(e.to_string()))?;
        if format_rational(&re) != t.re || format_rational(&im) != t.im {
            return Err(malformed(format!(
                "rational `{}`/`{}` is not in canonical form",
                t.re, t.im
            )));
        }
        parsed.push((Monomial::new(t.exponents.clone()), GaussianRational::new(re, im)));
    }
    let p = Polynomial::from_terms(nvars, parsed.iter().cloned()).map_err(|e| malformed(e.to_string()))?;
    if p.terms() != parsed.as_slice() {
        return Err(malformed(
            "terms are not in canonical graded-lex descending order without repeats or zeros",
        ));
    }
    Ok(p)
}

fn components_of(doc: &ComponentsDoc, nvars: usize) -> Result<Vec<Polynomial>, DocumentError> {
    doc.iter().map(|c| poly_of(c, nvars)).collect()
}

/// Serializes the construction tree of `map`.
pub fn node_of(map: &PolyMap) -> Result<NodeDoc, DocumentError> {
    let (label, order) = (map.label().to_string(), map.order());
    Ok(match map.body() {
        MapBody::Explicit(c) => NodeDoc::Explicit {
            label,
            order,
            domain_dim: map.domain_dim(),
            components: components_doc(c),
        },
        MapBody::Composite { outer, inner } => NodeDoc::Composite {
            label,
            order,
            outer: Box::new(node_of(outer)?),
            inner: Box::new(node_of(inner)?),
        },
        MapBody::Suspension { f, g, ell, triple } => {
            let k = triple.exact.k;
            let canonical = rho_beta(k).map_err(|e| malformed(e.to_string()))?;
            if canonical != triple.exact {
                return Err(malformed(format!(
                    "{label}: only the canonical suspension triple can be written"
                )));
            }
            NodeDoc::Suspension {
                label,
                order,
                ell: *ell,
                k,
                f: Box::new(node_of(f)?),
                g: Box::new(node_of(g)?),
            }
        }
        MapBody::Offset { base, delta } => NodeDoc::Offset {
            label,
            order,
            base: Box::new(node_of(base)?),
            delta: components_doc(delta),
        },
    })
}

/// Rebuilds a tree with its claimed (unverified) orders.
pub fn map_of(node: &NodeDoc) -> Result<PolyMap, DocumentError> {
    let wrap = |e: quadrep_core::MapError| malformed(e.to_string());
    Ok(match node {
        NodeDoc::Explicit {
            label,
            order,
            domain_dim,
            components,
        } => PolyMap::explicit(components_of(components, *domain_dim)?, label.clone())
            .map_err(wrap)?
            .with_claimed_order(*order),
        NodeDoc::Composite {
            label,
            order,
            outer,
            inner,
        } => PolyMap::from_composite(map_of(outer)?, map_of(inner)?, label.clone())
            .map_err(wrap)?
            .with_claimed_order(*order),
        NodeDoc::Suspension {
            label,
            order,
            ell,
            k,
            f,
            g,
        } => {
            let triple = rho_beta(*k).map_err(|e| malformed(e.to_string()))?;
            PolyMap::from_suspension(map_of(f)?, map_of(g)?, *ell, triple, label.clone())
                .map_err(wrap)?
                .with_claimed_order(*order)
        }
        NodeDoc::Offset {
            label,
            order,
            base,
            delta,
        } => {
            let base = map_of(base)?;
            let delta = components_of(delta, base.domain_dim())?;
            PolyMap::from_offset(base, delta, label.clone())
                .map_err(wrap)?
                .with_claimed_order(*order)
        }
    })
}

/// A document read back into maps. Nothing in it is trusted yet.
#[derive(Clone, Debug)]
pub struct Imported {
    pub document: MapDocument,
    /// The construction tree.
    pub tree: PolyMap,
    /// The stored expansion, when present.
    pub expanded: Option<PolyMap>,
}

impl Imported {
    /// The cheapest faithful representation for evaluation.
    pub fn map(&self) -> &PolyMap {
        self.expanded.as_ref().unwrap_or(&self.tree)
    }
}

impl MapDocument {
    /// Describes a (certified) map. Components are written when the map is
    /// small enough to expand.
    pub fn from_map(map: &PolyMap) -> Result<Self, DocumentError> {
        let components = if map.estimated_terms() <= EXPORT_TERM_BUDGET {
            map.components_within(EXPORT_TERM_BUDGET).ok().map(components_doc)
        } else {
            None
        };
        Ok(Self {
            format_version: FORMAT_VERSION,
            domain_dim: map.domain_dim(),
            codomain_dim: map.codomain_dim(),
            order: map.order(),
            label: map.label().to_string(),
            components,
            construction: node_of(map)?,
            certificates: map.certificate().map(CertificateDoc::from).into_iter().collect(),
        })
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: Self = serde_json::from_str(text)?;
        if doc.format_version != FORMAT_VERSION {
            return Err(DocumentError::Version(doc.format_version));
        }
        Ok(doc)
    }

    /// Canonical text: compact JSON followed by a newline.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    /// Rebuilds the maps and checks that the header agrees with them.
    pub fn import(self) -> Result<Imported, DocumentError> {
        let tree = map_of(&self.construction)?;
        if (tree.domain_dim(), tree.codomain_dim()) != (self.domain_dim, self.codomain_dim) {
            return Err(malformed(format!(
                "header says ℂ^{} → ℂ^{}, construction gives ℂ^{} → ℂ^{}",
                self.domain_dim,
                self.codomain_dim,
                tree.domain_dim(),
                tree.codomain_dim()
            )));
        }
        let expanded = match &self.components {
            None => None,
            Some(c) => {
                if c.len() != self.codomain_dim {
                    return Err(malformed(format!(
                        "{} components for codomain dimension {}",
                        c.len(),
                        self.codomain_dim
                    )));
                }
                let comps = components_of(c, self.domain_dim)?;
                Some(
                    PolyMap::explicit(comps, self.label.clone())
                        .map_err(|e| malformed(e.to_string()))?
                        .with_claimed_order(self.order),
                )
            }
        };
        Ok(Imported {
            document: self,
            tree,
            expanded,
        })
    }
}

impl Imported {
    /// Writes the document again from the rebuilt maps.
    pub fn export(&self) -> Result<MapDocument, DocumentError> {
        Ok(MapDocument {
            format_version: FORMAT_VERSION,
            domain_dim: self.tree.domain_dim(),
            codomain_dim: self.tree.codomain_dim(),
            order: self.document.order,
            label: self.document.label.clone(),
            components: self
                .expanded
                .as_ref()
                .map(|m| components_doc(m.cached_components().unwrap_or_default())),
            construction: node_of(&self.tree)?,
            certificates: self.document.certificates.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use quadrep_core::maps::{catalog, circle_pair, Target};

    fn round_trip(map: &PolyMap) {
        let text = MapDocument::from_map(map).unwrap().to_text();
        let again = MapDocument::parse(&text)
            .unwrap()
            .import()
            .unwrap()
            .export()
            .unwrap()
            .to_text();
        assert_eq!(text, again);
        assert!(text.ends_with('\n') && !text[..text.len() - 1].contains('\n'));
    }

    #[test]
    fn catalog_documents_round_trip() {
        for t in ["pi_n:1,2", "pi_n:3,-2", "pi3_s2:1", "pi_np1:3", "pi_np2:3", "pi_np3:3"] {
            round_trip(&catalog(t.parse::<Target>().unwrap()).unwrap());
        }
    }

    #[test]
    fn imported_tree_matches_the_original() {
        let phi = catalog(Target::PiNp1 { n: 3 }).unwrap();
        let imported = MapDocument::from_map(&phi).unwrap().import().unwrap();
        assert_eq!(imported.tree, phi);
        assert_eq!(
            imported.expanded.as_ref().unwrap().components().unwrap(),
            phi.components().unwrap()
        );
        assert_eq!(imported.tree.order(), Some(3));
        assert!(imported.tree.certificate().is_none());
    }

    #[test]
    fn rejects_non_canonical_input() {
        let (f, _) = circle_pair(2).unwrap();
        let doc = MapDocument::from_map(&f).unwrap();
        let text = doc.to_text();
        let bad = text.replacen("\"1/1\"", "\"2/2\"", 1);
        assert!(matches!(
            MapDocument::parse(&bad).unwrap().import(),
            Err(DocumentError::Malformed(_))
        ));
        let mut swapped = doc.clone();
        swapped.components.as_mut().unwrap()[0].reverse();
        assert!(swapped.import().is_err());
        let v2 = text.replacen("\"format_version\":1", "\"format_version\":2", 1);
        assert!(matches!(MapDocument::parse(&v2), Err(DocumentError::Version(2))));
        assert!(MapDocument::parse("{\"format_version\":1}").is_err());
    }
}

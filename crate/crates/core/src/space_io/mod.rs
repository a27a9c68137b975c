//! Space files, the bundled fruit space and SVG plot export.
//!
//! A space file is a single JSON document:
//!
//! ```json
//! {
//!   "dimensions": ["hue", "round", "sweet"],
//!   "domains": { "color": [0], "shape": [1], "taste": [2] },
//!   "concepts": {
//!     "red": {
//!       "cuboids": [ { "hue": [0.9, 1.0] } ],
//!       "mu0": 1.0,
//!       "c": 20.0,
//!       "domain_weights": { "color": 1.0 },
//!       "dimension_weights": { "color": { "hue": 1.0 } }
//!     }
//!   }
//! }
//! ```
//!
//! A concept's domains are the keys of its `domain_weights`. Every cuboid
//! lists a `[min, max]` pair for each dimension of those domains and nothing
//! else; all other dimensions are unbounded. Numbers are written in the
//! shortest form that parses back to the same `f64`, so saving and loading
//! is exact.

mod plot;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::concepts::Concept;
use crate::error::{Error, Result};
use crate::geometry::{DomainSet, DomainStructure, Weights};
use crate::regions::{Core, Cuboid};

pub use plot::{alpha_cut_outline, export_plot, render_plot, PlotView};

const FRUIT_JSON: &str = include_str!("../../data/fruit.json");

/// On-disk form of a space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    pub dimensions: Vec<String>,
    pub domains: BTreeMap<String, Vec<usize>>,
    #[serde(default)]
    pub concepts: BTreeMap<String, ConceptRecord>,
}

/// On-disk form of a concept.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConceptRecord {
    pub cuboids: Vec<BTreeMap<String, [f64; 2]>>,
    pub mu0: f64,
    pub c: f64,
    pub domain_weights: BTreeMap<String, f64>,
    pub dimension_weights: BTreeMap<String, BTreeMap<String, f64>>,
}

/// A domain structure with a registry of named concepts.
#[derive(Clone, Debug, PartialEq)]
pub struct Space {
    structure: DomainStructure,
    concepts: BTreeMap<String, Concept>,
}

impl Space {
    pub fn new(structure: DomainStructure) -> Self {
        Space {
            structure,
            concepts: BTreeMap::new(),
        }
    }

    pub fn structure(&self) -> &DomainStructure {
        &self.structure
    }

    pub fn concepts(&self) -> &BTreeMap<String, Concept> {
        &self.concepts
    }

    pub fn concept(&self, name: &str) -> Result<&Concept> {
        self.concepts
            .get(name)
            .ok_or_else(|| Error::UnknownConcept(name.to_string()))
    }

    /// Adds or replaces a concept. It must live in this space.
    pub fn insert(&mut self, name: impl Into<String>, concept: Concept) -> Result<()> {
        if concept.structure() != &self.structure {
            return Err(Error::SpaceMismatch);
        }
        self.concepts.insert(name.into(), concept);
        Ok(())
    }

    pub fn to_document(&self) -> SpaceDocument {
        SpaceDocument {
            dimensions: self.structure.dimension_names().to_vec(),
            domains: self.structure.domains().clone(),
            concepts: self
                .concepts
                .iter()
                .map(|(name, c)| (name.clone(), ConceptRecord::from_concept(c)))
                .collect(),
        }
    }

    pub fn from_document(doc: SpaceDocument) -> Result<Self> {
        let structure = DomainStructure::new(doc.domains, doc.dimensions)?;
        let mut space = Space::new(structure);
        for (name, record) in doc.concepts {
            let concept = record
                .to_concept(&space.structure)
                .map_err(|e| e.in_concept(&name))?;
            space.concepts.insert(name, concept);
        }
        Ok(space)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SpaceDocument =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Space::from_document(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("space documents serialize")
    }
}

impl ConceptRecord {
    pub fn from_concept(concept: &Concept) -> Self {
        let structure = concept.structure();
        let names = structure.dimension_names();
        let dims = structure
            .dims_of(concept.domains())
            .expect("concept domains belong to its structure");
        let cuboids = concept
            .core()
            .cuboids()
            .iter()
            .map(|cuboid| {
                dims.iter()
                    .map(|&d| (names[d].clone(), [cuboid.p_min()[d], cuboid.p_max()[d]]))
                    .collect()
            })
            .collect();
        let weights = concept.weights();
        let dimension_weights = weights
            .all_dimension_weights()
            .iter()
            .map(|(domain, ws)| {
                let named = ws.iter().map(|(&d, &w)| (names[d].clone(), w)).collect();
                (domain.clone(), named)
            })
            .collect();
        ConceptRecord {
            cuboids,
            mu0: concept.mu0(),
            c: concept.c(),
            domain_weights: weights.domain_weights().clone(),
            dimension_weights,
        }
    }

    pub fn to_concept(&self, structure: &DomainStructure) -> Result<Concept> {
        let domains: DomainSet = self.domain_weights.keys().cloned().collect();
        structure.check_domains(&domains)?;
        let mut dimension_weights = BTreeMap::new();
        for (domain, ws) in &self.dimension_weights {
            let mut indexed = BTreeMap::new();
            for (dim, &w) in ws {
                let d = dimension(structure, dim)?;
                if structure.domain_of(d) != domain {
                    return Err(Error::InvalidWeights(format!(
                        "dimension '{dim}' does not belong to domain '{domain}'"
                    )));
                }
                indexed.insert(d, w);
            }
            dimension_weights.insert(domain.clone(), indexed);
        }
        let weights = Weights::new(self.domain_weights.clone(), dimension_weights)?;

        let defined = structure.dims_of(&domains)?;
        let n = structure.n();
        let mut cuboids = Vec::with_capacity(self.cuboids.len());
        for bounds in &self.cuboids {
            let mut lo = vec![f64::NEG_INFINITY; n];
            let mut hi = vec![f64::INFINITY; n];
            for (dim, &[min, max]) in bounds {
                let d = dimension(structure, dim)?;
                if !defined.contains(&d) {
                    return Err(Error::DimensionNotInDomains(d));
                }
                lo[d] = min;
                hi[d] = max;
            }
            if let Some(&d) = defined.iter().find(|&&d| !bounds.contains_key(&structure.dimension_names()[d])) {
                return Err(Error::InvalidCuboid(format!(
                    "missing bounds for dimension '{}'",
                    structure.dimension_names()[d]
                )));
            }
            cuboids.push(Cuboid::new(lo, hi, domains.clone(), structure)?);
        }
        Concept::new(Core::new(cuboids)?, self.mu0, self.c, weights)
    }
}

fn dimension(structure: &DomainStructure, name: &str) -> Result<usize> {
    structure
        .dimension_index(name)
        .ok_or_else(|| Error::UnknownDimension(name.to_string()))
}

pub fn load_space(path: impl AsRef<Path>) -> Result<Space> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Space::from_json(&text)
}

pub fn save_space(space: &Space, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = space.to_json();
    text.push('\n');
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// The fruit space: hue, roundness and sweetness in three one-dimensional
/// domains, with pear, orange, lemon, Granny Smith, apple, banana and red.
pub fn fruit_space() -> Space {
    Space::from_json(FRUIT_JSON).expect("bundled fruit space is valid")
}

/// Source text of the bundled fruit space file.
pub fn fruit_space_json() -> &'static str {
    FRUIT_JSON
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fruit_space_has_seven_concepts() {
        let space = fruit_space();
        let names: Vec<_> = space.concepts().keys().cloned().collect();
        assert_eq!(
            names,
            ["apple", "banana", "granny_smith", "lemon", "orange", "pear", "red"]
        );
        let apple = space.concept("apple").unwrap();
        assert_eq!(apple.core().cuboids().len(), 3);
        assert_eq!(apple.c(), 10.0);
        assert_eq!(apple.weights().domain_weight("shape").unwrap(), 1.5);
        let red = space.concept("red").unwrap();
        assert_eq!(red.domains().len(), 1);
        assert_eq!(red.core().cuboids()[0].p_min()[1], f64::NEG_INFINITY);
    }

    #[test]
    fn round_trip_is_exact() {
        let space = fruit_space();
        let again = Space::from_json(&space.to_json()).unwrap();
        assert_eq!(space, again);
        let red = again.to_document().concepts["red"].clone();
        assert_eq!(red.cuboids[0].len(), 1);
    }

    #[test]
    fn empty_concepts_are_allowed() {
        let text = r#"{"dimensions": ["x"], "domains": {"d": [0]}, "concepts": {}}"#;
        let space = Space::from_json(text).unwrap();
        assert!(space.concepts().is_empty());
    }

    #[test]
    fn broken_core_names_the_concept() {
        let mut doc = fruit_space().to_document();
        let apple = doc.concepts.get_mut("apple").unwrap();
        apple.cuboids[2].insert("hue".into(), [0.95, 1.0]);
        let err = Space::from_document(doc).unwrap_err();
        assert_eq!(err.to_string(), "core intersection empty: apple");
    }

    #[test]
    fn loader_rejects_bad_records() {
        let base = fruit_space().to_document();

        let mut doc = base.clone();
        doc.concepts.get_mut("pear").unwrap().cuboids[0].remove("round");
        assert!(Space::from_document(doc).is_err());

        let mut doc = base.clone();
        doc.concepts.get_mut("pear").unwrap().mu0 = 1.5;
        assert!(Space::from_document(doc).is_err());

        let mut doc = base.clone();
        doc.concepts.get_mut("red").unwrap().cuboids[0].insert("sweet".into(), [0.0, 1.0]);
        assert!(Space::from_document(doc).is_err());

        let mut doc = base;
        doc.concepts.get_mut("pear").unwrap().domain_weights.insert("color".into(), 3.0);
        assert!(Space::from_document(doc).is_err());

        assert!(matches!(Space::from_json("{"), Err(Error::Format(_))));
    }
}

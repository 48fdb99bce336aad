//! Scenario documents: a space, an alphabet of contractions, named
//! sequences, named operators and analysis defaults, stored as JSON.
//!
//! ```json
//! {
//!   "space": { "lower": [0, 0], "upper": [1, 1] },
//!   "alphabet": [
//!     { "name": "f1", "matrix": [[0.5, 0], [0, 0.5]], "offset": [0, 0] }
//!   ],
//!   "sequences": [
//!     { "name": "fixed", "kind": "eventually_periodic", "preperiod": [], "period": ["f1"] },
//!     { "name": "sys", "kind": "finite", "maps": ["f1"] },
//!     { "name": "blocks", "kind": "block_enumeration", "symbol_order": ["f1", "f2"], "offset": 0 }
//!   ],
//!   "operators": [ { "name": "shift", "kind": "shift_discrete" } ],
//!   "defaults": { "tolerance": 9.094947017729282e-13, "resolution": 512, "seed": 42, "horizon": 10000 }
//! }
//! ```

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::alphabet::ContractionAlphabet;
use crate::contraction::validate_contraction;
use crate::distance::DEFAULT_TOLERANCE;
use crate::dynamics::{shift_n, EvolutionOperator, OperatorKind};
use crate::error::{Error, Result};
use crate::sequence::{names_to_symbols, IfsSequence, DEFAULT_EQUALITY_HORIZON};
use crate::space::SpaceBox;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceDoc {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    name: String,
    matrix: Vec<Vec<f64>>,
    offset: Vec<f64>,
}

/// How a named sequence is defined in the document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceSource {
    EventuallyPeriodic {
        #[serde(default)]
        preperiod: Vec<String>,
        period: Vec<String>,
    },
    /// A finite system `(f1..fn)` embedded as `f1..fn f1 f1 ...`.
    Finite { maps: Vec<String> },
    BlockEnumeration {
        symbol_order: Vec<String>,
        #[serde(default, skip_serializing_if = "is_zero")]
        offset: u64,
    },
}

fn is_zero(x: &u64) -> bool {
    *x == 0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SequenceDoc {
    name: String,
    #[serde(flatten)]
    source: SequenceSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorDoc {
    name: String,
    kind: OperatorKind,
}

/// Analysis defaults used when a command does not override them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Defaults {
    pub tolerance: f64,
    pub resolution: usize,
    pub seed: u64,
    pub horizon: u64,
}

impl Default for Defaults {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            resolution: 512,
            seed: 42,
            horizon: DEFAULT_EQUALITY_HORIZON,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    space: SpaceDoc,
    alphabet: Vec<MapDoc>,
    #[serde(default)]
    sequences: Vec<SequenceDoc>,
    #[serde(default)]
    operators: Vec<OperatorDoc>,
    #[serde(default)]
    defaults: Defaults,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedSequence {
    pub name: String,
    pub source: SequenceSource,
    /// The normalized sequence (generated streams are kept as they are).
    pub sequence: IfsSequence,
}

/// A fully validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub space: SpaceBox,
    pub alphabet: Arc<ContractionAlphabet>,
    pub sequences: Vec<NamedSequence>,
    pub operators: Vec<(String, EvolutionOperator)>,
    pub defaults: Defaults,
}

fn invalid(entity: impl Into<String>) -> impl FnOnce(Error) -> Error {
    let entity = entity.into();
    move |e| match e {
        Error::Validation { .. } => e,
        other => Error::Validation {
            entity,
            source: Box::new(other),
        },
    }
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn build_sequence(alphabet: &Arc<ContractionAlphabet>, source: &SequenceSource) -> Result<IfsSequence> {
    match source {
        SequenceSource::EventuallyPeriodic { preperiod, period } => {
            IfsSequence::from_names(alphabet.clone(), &strs(preperiod), &strs(period))?.normalize()
        }
        SequenceSource::Finite { maps } => {
            if maps.is_empty() {
                return Err(Error::EmptySystem);
            }
            for (i, m) in maps.iter().enumerate() {
                if maps[..i].contains(m) {
                    return Err(Error::DuplicateName(m.clone()));
                }
            }
            IfsSequence::from_names(alphabet.clone(), &strs(maps), &[maps[0].as_str()])?.normalize()
        }
        SequenceSource::BlockEnumeration {
            symbol_order,
            offset,
        } => {
            let order = names_to_symbols(alphabet, &strs(symbol_order))?;
            Ok(shift_n(
                &IfsSequence::block_enumeration(alphabet.clone(), order)?,
                *offset,
            ))
        }
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let space = SpaceBox::new(&doc.space.lower, &doc.space.upper).map_err(invalid("space"))?;

    let mut entries = Vec::with_capacity(doc.alphabet.len());
    for m in &doc.alphabet {
        let f = validate_contraction(&space, &m.matrix, &m.offset)
            .map_err(invalid(format!("alphabet.{}", m.name)))?;
        entries.push((m.name.clone(), f));
    }
    if entries.is_empty() {
        return Err(Error::Validation {
            entity: "alphabet".into(),
            source: Box::new(Error::EmptySystem),
        });
    }
    let alphabet = Arc::new(ContractionAlphabet::new(space, entries).map_err(invalid("alphabet"))?);

    let mut sequences: Vec<NamedSequence> = Vec::with_capacity(doc.sequences.len());
    for s in doc.sequences {
        let entity = format!("sequences.{}", s.name);
        if sequences.iter().any(|o| o.name == s.name) {
            return Err(invalid(entity)(Error::DuplicateName(s.name)));
        }
        let sequence = build_sequence(&alphabet, &s.source).map_err(invalid(entity))?;
        sequences.push(NamedSequence {
            name: s.name,
            source: s.source,
            sequence,
        });
    }

    let mut operators: Vec<(String, EvolutionOperator)> = Vec::with_capacity(doc.operators.len());
    for o in doc.operators {
        if operators.iter().any(|(n, _)| *n == o.name) {
            return Err(invalid(format!("operators.{}", o.name))(Error::DuplicateName(o.name)));
        }
        if o.kind == OperatorKind::ScaleExp && !space.contains_origin() {
            return Err(invalid(format!("operators.{}", o.name))(Error::OriginNotInSpace));
        }
        operators.push((o.name, EvolutionOperator::new(o.kind)));
    }

    let d = doc.defaults;
    if !(d.tolerance > 0.0 && d.tolerance < 1.0) {
        return Err(invalid("defaults.tolerance")(Error::InvalidTolerance(d.tolerance)));
    }
    if d.resolution == 0 || d.horizon == 0 {
        return Err(invalid("defaults")(Error::InvalidParameter(
            "resolution and horizon must be positive".into(),
        )));
    }

    Ok(Scenario {
        space,
        alphabet,
        sequences,
        operators,
        defaults: d,
    })
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        parse_scenario(text)
    }

    pub fn sequence(&self, name: &str) -> Result<&IfsSequence> {
        self.sequences
            .iter()
            .find(|s| s.name == name)
            .map(|s| &s.sequence)
            .ok_or_else(|| Error::UnknownEntity {
                kind: "sequence",
                name: name.into(),
            })
    }

    pub fn operator(&self, name: &str) -> Result<EvolutionOperator> {
        self.operators
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, op)| *op)
            .ok_or_else(|| Error::UnknownEntity {
                kind: "operator",
                name: name.into(),
            })
    }

    fn document(&self) -> Document {
        Document {
            space: SpaceDoc {
                lower: self.space.lower().to_vec(),
                upper: self.space.upper().to_vec(),
            },
            alphabet: self
                .alphabet
                .entries()
                .iter()
                .map(|(name, f)| MapDoc {
                    name: name.clone(),
                    matrix: f.matrix(),
                    offset: f.offset().to_vec(),
                })
                .collect(),
            sequences: self
                .sequences
                .iter()
                .map(|s| SequenceDoc {
                    name: s.name.clone(),
                    source: s.source.clone(),
                })
                .collect(),
            operators: self
                .operators
                .iter()
                .map(|(name, op)| OperatorDoc {
                    name: name.clone(),
                    kind: op.kind,
                })
                .collect(),
            defaults: self.defaults,
        }
    }

    /// Serializes back to a document that parses to an identical scenario.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.document()).expect("scenario serializes") + "\n"
    }
}

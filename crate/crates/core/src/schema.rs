//! Fixed attribute schema for service profiles and requirements.
//!
//! The schema is the single place that declares which attribute keys exist
//! and whether each carries a concept reference or a numeric value. Extend
//! [`ATTRIBUTE_KEYS`] to add attributes.

use crate::error::{Error, Result};
use crate::ontology::{normalize_term, ConceptGraph, NodeId, NodeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributeKind {
    Concept,
    Numeric,
}

/// Every attribute a profile or requirement may declare.
pub const ATTRIBUTE_KEYS: [(&str, AttributeKind); 8] = [
    ("compute_unit_type", AttributeKind::Concept),
    ("license_fee", AttributeKind::Concept),
    ("job_mgmt", AttributeKind::Concept),
    ("software", AttributeKind::Concept),
    ("render_engine", AttributeKind::Concept),
    ("plugin", AttributeKind::Concept),
    ("os", AttributeKind::Concept),
    ("render_node_cost", AttributeKind::Numeric),
];

/// Kind declared for `key`, or `None` if the key is not in the schema.
pub fn attribute_kind(key: &str) -> Option<AttributeKind> {
    ATTRIBUTE_KEYS
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, kind)| *kind)
}

/// Reference to a concept, optionally pinned to one of its versions, as
/// written in a profile: `maya` or `maya@7`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptRef {
    /// Normalized node id (a concept, or a version node referenced directly).
    pub node: String,
    /// Version label when the reference uses `@<label>` syntax.
    pub label: Option<u32>,
}

impl ConceptRef {
    /// Splits `name[@label]`, normalizing the name part. The referenced
    /// node is not checked here; call [`ConceptRef::resolve`] for that.
    pub fn parse(text: &str) -> Result<Self> {
        let (name, label) = match text.split_once('@') {
            None => (text, None),
            Some((name, label)) => {
                let label: u32 = label.trim().parse().ok().filter(|l| *l > 0).ok_or_else(|| {
                    Error::invalid(format!(
                        "version label `{label}` in `{text}` must be a positive integer"
                    ))
                })?;
                (name, Some(label))
            }
        };
        let node = normalize_term(name);
        if node.is_empty() {
            return Err(Error::invalid(format!("concept reference `{text}` is empty")));
        }
        Ok(ConceptRef { node, label })
    }

    /// Canonical text form: the normalized id, plus `@label` if pinned.
    pub fn canonical(&self) -> String {
        match self.label {
            None => self.node.clone(),
            Some(label) => format!("{}@{label}", self.node),
        }
    }

    /// Resolves the reference against a graph.
    ///
    /// `maya@7` resolves to maya's version child labeled 7; a direct
    /// reference to a version node yields its parent concept and own label.
    pub fn resolve(&self, graph: &ConceptGraph) -> Result<ResolvedRef> {
        let node = graph.resolve(&self.node)?;
        match (graph.node(node).kind, self.label) {
            (NodeKind::Concept, None) => Ok(ResolvedRef {
                concept: node,
                version: None,
            }),
            (NodeKind::Concept, Some(label)) => {
                let version = graph.version_child(node, label)?;
                Ok(ResolvedRef {
                    concept: node,
                    version: Some((version, label)),
                })
            }
            (NodeKind::Version { label }, None) => Ok(ResolvedRef {
                concept: graph.parent(node).expect("version nodes have parents"),
                version: Some((node, label)),
            }),
            (NodeKind::Version { .. }, Some(_)) => Err(Error::invalid(format!(
                "`{}` is already a version node and cannot take `@{}`",
                self.node,
                self.label.expect("checked above"),
            ))),
        }
    }
}

/// A concept reference resolved to graph nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolvedRef {
    pub concept: NodeId,
    pub version: Option<(NodeId, u32)>,
}

/// Value of one profile or requirement attribute.
#[derive(Debug, Clone, PartialEq)]
pub enum AttributeValue {
    Concept(ConceptRef),
    Numeric { value: f64, unit: String },
}

impl AttributeValue {
    pub fn kind(&self) -> AttributeKind {
        match self {
            AttributeValue::Concept(_) => AttributeKind::Concept,
            AttributeValue::Numeric { .. } => AttributeKind::Numeric,
        }
    }

    /// Canonical single-line form used by the profile serializer, e.g.
    /// `concept maya@7` or `numeric 0.6 usd_per_core_hour`.
    pub fn canonical(&self) -> String {
        match self {
            AttributeValue::Concept(r) => format!("concept {}", r.canonical()),
            AttributeValue::Numeric { value, unit } => format!("numeric {value} {unit}"),
        }
    }

    /// Exact-match comparison used by the keyword baseline: canonical text
    /// equality for concepts, value equality for numerics. No graph access.
    pub fn matches_exactly(&self, other: &AttributeValue) -> bool {
        match (self, other) {
            (AttributeValue::Concept(a), AttributeValue::Concept(b)) => {
                a.node == b.node && a.label == b.label
            }
            (
                AttributeValue::Numeric { value: a, .. },
                AttributeValue::Numeric { value: b, .. },
            ) => a == b,
            _ => false,
        }
    }
}

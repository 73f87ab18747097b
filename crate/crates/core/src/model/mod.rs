//! UML-lite model documents: elements, associations, diagrams, and
//! stereotype applications.
//!
//! Parsing checks structure only (well-formed XML, known metaclasses,
//! unique ids, grammatical multiplicities); referential problems such as
//! dangling association ends are deferred to the validator as E5xx
//! diagnostics so a partially broken model stays inspectable.

mod resolve;
mod xml;

use std::collections::BTreeMap;

use crate::metamodel::MetaClass;

pub use resolve::{resolve, ProfileRegistry, ResolvedModel, TargetRef};
pub use xml::{parse_model, serialize_model, ModelParseError, ParsedModel};

/// A user model with its profile imports.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModelDocument {
    pub name: String,
    /// Names of the profiles this model draws stereotypes from.
    pub imports: Vec<String>,
    pub elements: Vec<ModelElement>,
    pub associations: Vec<Association>,
    pub diagrams: Vec<Diagram>,
}

impl ModelDocument {
    pub fn element(&self, id: &str) -> Option<&ModelElement> {
        self.elements.iter().find(|e| e.id == id)
    }

    pub fn association(&self, id: &str) -> Option<&Association> {
        self.associations.iter().find(|a| a.id == id)
    }

    pub fn diagram(&self, id: &str) -> Option<&Diagram> {
        self.diagrams.iter().find(|d| d.id == id)
    }
}

/// A model element: the target stereotypes are applied to.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelElement {
    pub id: String,
    pub metaclass: MetaClass,
    pub name: String,
    pub owner: Option<String>,
    /// `(name, type text)` pairs; the type text is opaque.
    pub attributes: Vec<(String, String)>,
    pub applications: Vec<StereotypeApplication>,
}

/// One stereotype applied to an element or association, with its tagged
/// values. Tag values travel as strings and are coerced against the tag
/// definitions when the model is validated.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StereotypeApplication {
    pub profile: String,
    pub stereotype: String,
    pub tags: BTreeMap<String, String>,
}

/// A binary association. Roles name the ends as seen from the opposite
/// end, so navigation follows the far-end role.
#[derive(Debug, Clone, PartialEq)]
pub struct Association {
    pub id: String,
    pub source: String,
    pub target: String,
    pub source_role: String,
    pub target_role: String,
    pub source_mult: String,
    pub target_mult: String,
    pub applications: Vec<StereotypeApplication>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagramKind {
    Class,
    Sequence,
}

impl DiagramKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagramKind::Class => "class",
            DiagramKind::Sequence => "sequence",
        }
    }
}

/// A diagram over document elements. Class diagrams use `members`;
/// sequence diagrams use `lifelines` and `messages`.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagram {
    pub id: String,
    pub kind: DiagramKind,
    pub members: Vec<String>,
    pub lifelines: Vec<String>,
    pub messages: Vec<Message>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MessageKind {
    Call,
    Return,
}

impl MessageKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MessageKind::Call => "call",
            MessageKind::Return => "return",
        }
    }
}

/// A sequence-diagram message. Self-messages (`from == to`) are allowed;
/// sequence numbers must be unique within their diagram (checked by the
/// validator as E503).
#[derive(Debug, Clone, PartialEq)]
pub struct Message {
    pub seq: u32,
    pub from: String,
    pub to: String,
    pub label: String,
    pub kind: MessageKind,
}

/// Checks a multiplicity text against the grammar
/// `INT | INT..INT | INT..* | *`. Multiplicities carry no numeric
/// semantics here beyond this well-formedness.
pub fn multiplicity_is_valid(text: &str) -> bool {
    fn is_int(s: &str) -> bool {
        !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
    }
    if text == "*" {
        return true;
    }
    match text.split_once("..") {
        None => is_int(text),
        Some((low, high)) => is_int(low) && (high == "*" || is_int(high)),
    }
}

//! The closed UML-lite metaclass vocabulary and its conformance relation.
//!
//! Stereotype applicability is phrased as conformance: a stereotype applies
//! to an element when the element's metaclass conforms to at least one of the
//! stereotype's declared base classes. The hierarchy is deliberately minimal:
//! `UMLClass` conforms to `UMLAbstractClass`, and every metaclass conforms to
//! itself. Names are case-sensitive; the profile XML is machine-written, so
//! silent case-folding would only hide authoring errors.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// The closed set of UML-lite metaclasses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetaClass {
    Class,
    AbstractClass,
    Attribute,
    Operation,
    Package,
    Association,
    Object,
    Message,
    Lifeline,
    ClassDiagram,
    SequenceDiagram,
}

impl MetaClass {
    /// Every metaclass, in canonical order.
    pub const ALL: [MetaClass; 11] = [
        MetaClass::Class,
        MetaClass::AbstractClass,
        MetaClass::Attribute,
        MetaClass::Operation,
        MetaClass::Package,
        MetaClass::Association,
        MetaClass::Object,
        MetaClass::Message,
        MetaClass::Lifeline,
        MetaClass::ClassDiagram,
        MetaClass::SequenceDiagram,
    ];

    /// The external (StarUML `BASECLASS`) spelling.
    pub fn name(self) -> &'static str {
        match self {
            MetaClass::Class => "UMLClass",
            MetaClass::AbstractClass => "UMLAbstractClass",
            MetaClass::Attribute => "UMLAttribute",
            MetaClass::Operation => "UMLOperation",
            MetaClass::Package => "UMLPackage",
            MetaClass::Association => "UMLAssociation",
            MetaClass::Object => "UMLObject",
            MetaClass::Message => "UMLMessage",
            MetaClass::Lifeline => "UMLLifeline",
            MetaClass::ClassDiagram => "UMLClassDiagram",
            MetaClass::SequenceDiagram => "UMLSequenceDiagram",
        }
    }

    fn index(self) -> usize {
        MetaClass::ALL.iter().position(|m| *m == self).unwrap()
    }
}

impl fmt::Display for MetaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Raised when a name is not one of the eleven metaclass spellings.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown metaclass '{0}'")]
pub struct UnknownMetaClass(pub String);

impl FromStr for MetaClass {
    type Err = UnknownMetaClass;

    /// Exact, case-sensitive lookup.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetaClass::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(|| UnknownMetaClass(s.to_string()))
    }
}

/// Raised when declared generalization edges contain a cycle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("conformance edges form a cycle through {0}")]
pub struct ConformanceCycle(pub MetaClass);

/// The reflexive-transitive conformance relation over [`MetaClass`].
///
/// Immutable after construction; the closure is precomputed so lookups are a
/// single matrix read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformanceTable {
    closure: [[bool; 11]; 11],
}

impl ConformanceTable {
    /// Builds the table from declared `(sub, super)` generalization edges.
    /// The result is closed under reflexivity and transitivity. Edges that
    /// would make two distinct metaclasses conform to each other are
    /// rejected.
    pub fn from_edges(edges: &[(MetaClass, MetaClass)]) -> Result<Self, ConformanceCycle> {
        let mut closure = [[false; 11]; 11];
        for (i, row) in closure.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(sub, sup) in edges {
            closure[sub.index()][sup.index()] = true;
        }
        // Warshall closure over an 11x11 matrix.
        for k in 0..11 {
            for i in 0..11 {
                if closure[i][k] {
                    let via = closure[k];
                    for (cell, reachable) in closure[i].iter_mut().zip(via) {
                        *cell |= reachable;
                    }
                }
            }
        }
        for (i, row) in closure.iter().enumerate() {
            for (j, &forward) in row.iter().enumerate() {
                if i != j && forward && closure[j][i] {
                    return Err(ConformanceCycle(MetaClass::ALL[i]));
                }
            }
        }
        Ok(ConformanceTable { closure })
    }

    /// The standard UML-lite hierarchy: `UMLClass` conforms to
    /// `UMLAbstractClass`; everything else conforms only to itself.
    pub fn standard() -> Self {
        ConformanceTable::from_edges(&[(MetaClass::Class, MetaClass::AbstractClass)])
            .expect("standard edge list is acyclic")
    }

    /// True iff `sub` conforms to `base` under this table. Total over the
    /// closed metaclass set.
    pub fn conforms_to(&self, sub: MetaClass, base: MetaClass) -> bool {
        self.closure[sub.index()][base.index()]
    }
}

impl Default for ConformanceTable {
    fn default() -> Self {
        ConformanceTable::standard()
    }
}

//! Model XML reading and canonical writing.
//!
//! Canonical form:
//!
//! ```text
//! <?xml version="1.0" encoding="UTF-8"?>
//! <MODEL name="...">
//!   <IMPORTS> <IMPORT profile="..."/> .. </IMPORTS>
//!   <ELEMENTS>
//!     <ELEMENT id=".." metaclass=".." name=".." owner="..">
//!       <ATTRIBUTE name=".." type=".."/> ..
//!       <APPLY profile=".." stereotype=".."> <TAG name=".." value=".."/> .. </APPLY> ..
//!     </ELEMENT> ..
//!   </ELEMENTS>
//!   <ASSOCIATIONS>
//!     <ASSOCIATION id=".." source=".." target=".."
//!                  source_role=".." source_mult=".." target_role=".." target_mult="..">
//!       <APPLY ../> ..
//!     </ASSOCIATION> ..
//!   </ASSOCIATIONS>
//!   <DIAGRAMS>
//!     <DIAGRAM id=".." kind="class"> <MEMBER ref=".."/> .. </DIAGRAM>
//!     <DIAGRAM id=".." kind="sequence">
//!       <LIFELINE ref=".."/> ..
//!       <MESSAGE seq=".." from=".." to=".." label=".." kind="call|return"/> ..
//!     </DIAGRAM> ..
//!   </DIAGRAMS>
//! </MODEL>
//! ```
//!
//! All four containers are always written, self-closed when empty. Role
//! attributes are omitted when empty; multiplicities default to `*` when
//! absent; a message `kind` defaults to `call`. Ids live in one namespace:
//! an id reused anywhere in the document is a duplicate-id error.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{
    multiplicity_is_valid, Association, Diagram, DiagramKind, Message, MessageKind, ModelDocument,
    ModelElement, StereotypeApplication,
};
use crate::diagnostics::Diagnostic;
use crate::xml::{children, warn_unknown_children, XmlWriter};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelParseError {
    #[error("malformed XML: {0}")]
    Malformed(String),
    #[error("root element must be MODEL, found '{0}'")]
    UnexpectedRoot(String),
    #[error("element '{element}': unknown metaclass '{name}'")]
    UnknownMetaClass { element: String, name: String },
    #[error("duplicate id '{0}'")]
    DuplicateId(String),
    #[error("{context}: missing required attribute '{attr}'")]
    MissingAttr { context: String, attr: &'static str },
    #[error("association '{association}': multiplicity '{value}' does not match INT | INT..INT | INT..* | *")]
    BadMultiplicity { association: String, value: String },
    #[error("diagram '{diagram}': unknown kind '{value}' (expected class or sequence)")]
    UnknownDiagramKind { diagram: String, value: String },
    #[error("diagram '{diagram}': message seq '{value}' is not a positive integer")]
    BadSequenceNumber { diagram: String, value: String },
    #[error("diagram '{diagram}': unknown message kind '{value}' (expected call or return)")]
    UnknownMessageKind { diagram: String, value: String },
}

/// A parse result: the document plus any skip warnings (W001).
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedModel {
    pub document: ModelDocument,
    pub warnings: Vec<Diagnostic>,
}

pub fn parse_model(input: &[u8]) -> Result<ParsedModel, ModelParseError> {
    let text = std::str::from_utf8(input)
        .map_err(|e| ModelParseError::Malformed(format!("input is not UTF-8: {e}")))?;
    let doc =
        roxmltree::Document::parse(text).map_err(|e| ModelParseError::Malformed(e.to_string()))?;
    let root = doc.root_element();
    if root.tag_name().name() != "MODEL" {
        return Err(ModelParseError::UnexpectedRoot(
            root.tag_name().name().to_string(),
        ));
    }

    let mut warnings = Vec::new();
    warn_unknown_children(
        root,
        &["IMPORTS", "ELEMENTS", "ASSOCIATIONS", "DIAGRAMS"],
        "MODEL",
        &mut warnings,
    );

    let mut document = ModelDocument {
        name: root.attribute("name").unwrap_or_default().to_string(),
        ..ModelDocument::default()
    };
    let mut ids = BTreeSet::new();
    let mut claim_id = |id: &str| -> Result<(), ModelParseError> {
        if ids.insert(id.to_string()) {
            Ok(())
        } else {
            Err(ModelParseError::DuplicateId(id.to_string()))
        }
    };

    if let Some(imports) = find(root, "IMPORTS") {
        warn_unknown_children(imports, &["IMPORT"], "IMPORTS", &mut warnings);
        for import in children(imports, "IMPORT") {
            document
                .imports
                .push(require_attr(import, "profile", "IMPORT")?);
        }
    }

    if let Some(elements) = find(root, "ELEMENTS") {
        warn_unknown_children(elements, &["ELEMENT"], "ELEMENTS", &mut warnings);
        for node in children(elements, "ELEMENT") {
            let id = require_attr(node, "id", "ELEMENT")?;
            claim_id(&id)?;
            let metaclass_text = require_attr(node, "metaclass", "ELEMENT")?;
            let metaclass =
                metaclass_text
                    .parse()
                    .map_err(|_| ModelParseError::UnknownMetaClass {
                        element: id.clone(),
                        name: metaclass_text.clone(),
                    })?;
            warn_unknown_children(node, &["ATTRIBUTE", "APPLY"], "ELEMENT", &mut warnings);
            let mut attributes = Vec::new();
            for attr in children(node, "ATTRIBUTE") {
                attributes.push((
                    require_attr(attr, "name", "ATTRIBUTE")?,
                    attr.attribute("type").unwrap_or_default().to_string(),
                ));
            }
            document.elements.push(ModelElement {
                id,
                metaclass,
                name: node.attribute("name").unwrap_or_default().to_string(),
                owner: node.attribute("owner").map(str::to_string),
                attributes,
                applications: parse_applications(node, &mut warnings)?,
            });
        }
    }

    if let Some(associations) = find(root, "ASSOCIATIONS") {
        warn_unknown_children(
            associations,
            &["ASSOCIATION"],
            "ASSOCIATIONS",
            &mut warnings,
        );
        for node in children(associations, "ASSOCIATION") {
            let id = require_attr(node, "id", "ASSOCIATION")?;
            claim_id(&id)?;
            warn_unknown_children(node, &["APPLY"], "ASSOCIATION", &mut warnings);
            let mult = |attr: &str| -> Result<String, ModelParseError> {
                let value = node.attribute(attr).unwrap_or("*").to_string();
                if multiplicity_is_valid(&value) {
                    Ok(value)
                } else {
                    Err(ModelParseError::BadMultiplicity {
                        association: id.clone(),
                        value,
                    })
                }
            };
            document.associations.push(Association {
                source: require_attr(node, "source", "ASSOCIATION")?,
                target: require_attr(node, "target", "ASSOCIATION")?,
                source_role: node
                    .attribute("source_role")
                    .unwrap_or_default()
                    .to_string(),
                target_role: node
                    .attribute("target_role")
                    .unwrap_or_default()
                    .to_string(),
                source_mult: mult("source_mult")?,
                target_mult: mult("target_mult")?,
                applications: parse_applications(node, &mut warnings)?,
                id,
            });
        }
    }

    if let Some(diagrams) = find(root, "DIAGRAMS") {
        warn_unknown_children(diagrams, &["DIAGRAM"], "DIAGRAMS", &mut warnings);
        for node in children(diagrams, "DIAGRAM") {
            let id = require_attr(node, "id", "DIAGRAM")?;
            claim_id(&id)?;
            let kind_text = require_attr(node, "kind", "DIAGRAM")?;
            let kind = match kind_text.as_str() {
                "class" => DiagramKind::Class,
                "sequence" => DiagramKind::Sequence,
                other => {
                    return Err(ModelParseError::UnknownDiagramKind {
                        diagram: id,
                        value: other.to_string(),
                    })
                }
            };
            warn_unknown_children(
                node,
                &["MEMBER", "LIFELINE", "MESSAGE"],
                "DIAGRAM",
                &mut warnings,
            );
            let mut diagram = Diagram {
                id: id.clone(),
                kind,
                members: Vec::new(),
                lifelines: Vec::new(),
                messages: Vec::new(),
            };
            for member in children(node, "MEMBER") {
                diagram.members.push(require_attr(member, "ref", "MEMBER")?);
            }
            for lifeline in children(node, "LIFELINE") {
                diagram
                    .lifelines
                    .push(require_attr(lifeline, "ref", "LIFELINE")?);
            }
            for message in children(node, "MESSAGE") {
                let seq_text = require_attr(message, "seq", "MESSAGE")?;
                let seq = match seq_text.parse::<u32>() {
                    Ok(v) if v > 0 => v,
                    _ => {
                        return Err(ModelParseError::BadSequenceNumber {
                            diagram: id,
                            value: seq_text,
                        })
                    }
                };
                let kind_text = message.attribute("kind").unwrap_or("call");
                let kind = match kind_text {
                    "call" => MessageKind::Call,
                    "return" => MessageKind::Return,
                    other => {
                        return Err(ModelParseError::UnknownMessageKind {
                            diagram: id,
                            value: other.to_string(),
                        })
                    }
                };
                diagram.messages.push(Message {
                    seq,
                    from: require_attr(message, "from", "MESSAGE")?,
                    to: require_attr(message, "to", "MESSAGE")?,
                    label: message.attribute("label").unwrap_or_default().to_string(),
                    kind,
                });
            }
            document.diagrams.push(diagram);
        }
    }

    Ok(ParsedModel { document, warnings })
}

fn parse_applications(
    node: roxmltree::Node,
    warnings: &mut Vec<Diagnostic>,
) -> Result<Vec<StereotypeApplication>, ModelParseError> {
    let mut applications = Vec::new();
    for apply in children(node, "APPLY") {
        warn_unknown_children(apply, &["TAG"], "APPLY", warnings);
        let mut application = StereotypeApplication {
            profile: require_attr(apply, "profile", "APPLY")?,
            stereotype: require_attr(apply, "stereotype", "APPLY")?,
            tags: Default::default(),
        };
        for tag in children(apply, "TAG") {
            // Repeated TAG names: last one wins.
            application.tags.insert(
                require_attr(tag, "name", "TAG")?,
                tag.attribute("value").unwrap_or_default().to_string(),
            );
        }
        applications.push(application);
    }
    Ok(applications)
}

fn find<'a, 'input>(
    node: roxmltree::Node<'a, 'input>,
    tag: &str,
) -> Option<roxmltree::Node<'a, 'input>> {
    crate::xml::find_child(node, tag)
}

fn require_attr(
    node: roxmltree::Node,
    attr: &'static str,
    context: &str,
) -> Result<String, ModelParseError> {
    node.attribute(attr)
        .map(str::to_string)
        .ok_or_else(|| ModelParseError::MissingAttr {
            context: context.to_string(),
            attr,
        })
}

/// Emits the canonical XML byte form. Inverse of [`parse_model`] up to
/// structural equality; byte-stable under reparse-and-reserialize.
pub fn serialize_model(document: &ModelDocument) -> String {
    let mut w = XmlWriter::new();
    w.open("MODEL", &[("name", &document.name)]);

    if document.imports.is_empty() {
        w.text_element("IMPORTS", "");
    } else {
        w.open("IMPORTS", &[]);
        for import in &document.imports {
            w.empty_element("IMPORT", &[("profile", import)]);
        }
        w.close("IMPORTS");
    }

    if document.elements.is_empty() {
        w.text_element("ELEMENTS", "");
    } else {
        w.open("ELEMENTS", &[]);
        for element in &document.elements {
            let metaclass = element.metaclass.name();
            let mut attrs = vec![
                ("id", element.id.as_str()),
                ("metaclass", metaclass),
                ("name", element.name.as_str()),
            ];
            if let Some(owner) = &element.owner {
                attrs.push(("owner", owner));
            }
            if element.attributes.is_empty() && element.applications.is_empty() {
                w.empty_element("ELEMENT", &attrs);
            } else {
                w.open("ELEMENT", &attrs);
                for (name, type_text) in &element.attributes {
                    w.empty_element("ATTRIBUTE", &[("name", name), ("type", type_text)]);
                }
                write_applications(&mut w, &element.applications);
                w.close("ELEMENT");
            }
        }
        w.close("ELEMENTS");
    }

    if document.associations.is_empty() {
        w.text_element("ASSOCIATIONS", "");
    } else {
        w.open("ASSOCIATIONS", &[]);
        for association in &document.associations {
            let mut attrs = vec![
                ("id", association.id.as_str()),
                ("source", association.source.as_str()),
                ("target", association.target.as_str()),
            ];
            if !association.source_role.is_empty() {
                attrs.push(("source_role", &association.source_role));
            }
            attrs.push(("source_mult", &association.source_mult));
            if !association.target_role.is_empty() {
                attrs.push(("target_role", &association.target_role));
            }
            attrs.push(("target_mult", &association.target_mult));
            if association.applications.is_empty() {
                w.empty_element("ASSOCIATION", &attrs);
            } else {
                w.open("ASSOCIATION", &attrs);
                write_applications(&mut w, &association.applications);
                w.close("ASSOCIATION");
            }
        }
        w.close("ASSOCIATIONS");
    }

    if document.diagrams.is_empty() {
        w.text_element("DIAGRAMS", "");
    } else {
        w.open("DIAGRAMS", &[]);
        for diagram in &document.diagrams {
            let attrs = [("id", diagram.id.as_str()), ("kind", diagram.kind.as_str())];
            if diagram.members.is_empty()
                && diagram.lifelines.is_empty()
                && diagram.messages.is_empty()
            {
                w.empty_element("DIAGRAM", &attrs);
                continue;
            }
            w.open("DIAGRAM", &attrs);
            for member in &diagram.members {
                w.empty_element("MEMBER", &[("ref", member)]);
            }
            for lifeline in &diagram.lifelines {
                w.empty_element("LIFELINE", &[("ref", lifeline)]);
            }
            for message in &diagram.messages {
                let seq = message.seq.to_string();
                w.empty_element(
                    "MESSAGE",
                    &[
                        ("seq", seq.as_str()),
                        ("from", message.from.as_str()),
                        ("to", message.to.as_str()),
                        ("label", message.label.as_str()),
                        ("kind", message.kind.as_str()),
                    ],
                );
            }
            w.close("DIAGRAM");
        }
        w.close("DIAGRAMS");
    }

    w.close("MODEL");
    w.finish()
}

fn write_applications(w: &mut XmlWriter, applications: &[StereotypeApplication]) {
    for application in applications {
        let attrs = [
            ("profile", application.profile.as_str()),
            ("stereotype", application.stereotype.as_str()),
        ];
        if application.tags.is_empty() {
            w.empty_element("APPLY", &attrs);
        } else {
            w.open("APPLY", &attrs);
            for (name, value) in &application.tags {
                w.empty_element("TAG", &[("name", name), ("value", value)]);
            }
            w.close("APPLY");
        }
    }
}

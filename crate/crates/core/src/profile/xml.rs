//! StarUML-compatible profile XML reading and canonical writing.
//!
//! Canonical form, fixed element order:
//!
//! ```text
//! <?xml version="1.0" encoding="UTF-8"?>
//! <PROFILE version="...">
//!   <HEADER>
//!     <NAME>..</NAME> <DISPLAYNAME>..</DISPLAYNAME> <DESCRIPTION>..</DESCRIPTION>
//!   </HEADER>
//!   <BODY>
//!     <STEREOTYPELIST>
//!       <STEREOTYPE>
//!         <NAME>..</NAME> <DESCRIPTION>..</DESCRIPTION>
//!         <BASECLASSES> <BASECLASS>..</BASECLASS>.. </BASECLASSES>
//!         <ICON>..</ICON>                 (optional)
//!         <TAGDEFINITIONLIST>..</TAGDEFINITIONLIST>   (omitted when empty)
//!         <CONSTRAINTLIST>..</CONSTRAINTLIST>         (omitted when empty)
//!       </STEREOTYPE>
//!     </STEREOTYPELIST>
//!   </BODY>
//! </PROFILE>
//! ```
//!
//! `TAGDEFINITION` holds `NAME`, `TYPE`, optional `DEFAULT`, and `CHOICES`
//! with `CHOICE` entries; `CONSTRAINT` holds `NAME` and `EXPR`. Unrecognized
//! elements inside known containers are skipped with a W001 warning.

use thiserror::Error;

use super::{ConstraintDef, Profile, Stereotype, TagDefinition};
use crate::constraint::{parse_constraint, ConstraintParseError};
use crate::diagnostics::Diagnostic;
use crate::xml::{children, find_child, node_text, warn_unknown_children, XmlWriter};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileParseError {
    #[error("malformed XML: {0}")]
    Malformed(String),
    #[error("root element must be PROFILE, found '{0}'")]
    UnexpectedRoot(String),
    #[error("missing required element {element} in {parent}")]
    MissingElement {
        element: &'static str,
        parent: String,
    },
    #[error("stereotype '{stereotype}': unknown metaclass '{name}'")]
    UnknownMetaClass { stereotype: String, name: String },
    #[error("tag '{tag}' of stereotype '{stereotype}': unknown tag type '{value}'")]
    UnknownTagType {
        stereotype: String,
        tag: String,
        value: String,
    },
    #[error(
        "constraint '{constraint}' of stereotype '{stereotype}' at {line}:{column}: {message}"
    )]
    ConstraintSyntax {
        stereotype: String,
        constraint: String,
        line: usize,
        column: usize,
        message: String,
    },
}

/// A parse result: the profile plus any skip warnings (W001).
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedProfile {
    pub profile: Profile,
    pub warnings: Vec<Diagnostic>,
}

/// Parses a profile document. Structural problems (bad XML, unknown
/// metaclass or tag type, unparsable constraint, missing `NAME`) are
/// errors; semantic problems are left for [`super::lint_profile`].
pub fn parse_profile(input: &[u8]) -> Result<ParsedProfile, ProfileParseError> {
    let text = std::str::from_utf8(input)
        .map_err(|e| ProfileParseError::Malformed(format!("input is not UTF-8: {e}")))?;
    let doc = roxmltree::Document::parse(text)
        .map_err(|e| ProfileParseError::Malformed(e.to_string()))?;
    let root = doc.root_element();
    if root.tag_name().name() != "PROFILE" {
        return Err(ProfileParseError::UnexpectedRoot(
            root.tag_name().name().to_string(),
        ));
    }

    let mut warnings = Vec::new();
    warn_unknown_children(root, &["HEADER", "BODY"], "PROFILE", &mut warnings);

    let header = find_child(root, "HEADER").ok_or(ProfileParseError::MissingElement {
        element: "HEADER",
        parent: "PROFILE".into(),
    })?;
    warn_unknown_children(
        header,
        &["NAME", "DISPLAYNAME", "DESCRIPTION"],
        "HEADER",
        &mut warnings,
    );
    let name = required_text(header, "NAME", "HEADER")?;
    let display_name = optional_text(header, "DISPLAYNAME");
    let description = optional_text(header, "DESCRIPTION");
    let version = root.attribute("version").unwrap_or_default().to_string();

    let mut stereotypes = Vec::new();
    if let Some(body) = find_child(root, "BODY") {
        warn_unknown_children(body, &["STEREOTYPELIST"], "BODY", &mut warnings);
        if let Some(list) = find_child(body, "STEREOTYPELIST") {
            warn_unknown_children(list, &["STEREOTYPE"], "STEREOTYPELIST", &mut warnings);
            for node in children(list, "STEREOTYPE") {
                stereotypes.push(parse_stereotype(node, &mut warnings)?);
            }
        }
    }

    Ok(ParsedProfile {
        profile: Profile {
            name,
            display_name,
            description,
            version,
            stereotypes,
        },
        warnings,
    })
}

fn parse_stereotype(
    node: roxmltree::Node,
    warnings: &mut Vec<Diagnostic>,
) -> Result<Stereotype, ProfileParseError> {
    warn_unknown_children(
        node,
        &[
            "NAME",
            "DESCRIPTION",
            "BASECLASSES",
            "ICON",
            "TAGDEFINITIONLIST",
            "CONSTRAINTLIST",
        ],
        "STEREOTYPE",
        warnings,
    );
    let name = required_text(node, "NAME", "STEREOTYPE")?;
    let description = optional_text(node, "DESCRIPTION");

    let mut base_classes = std::collections::BTreeSet::new();
    if let Some(bases) = find_child(node, "BASECLASSES") {
        warn_unknown_children(bases, &["BASECLASS"], "BASECLASSES", warnings);
        for base in children(bases, "BASECLASS") {
            let text = node_text(base);
            let metaclass = text
                .parse()
                .map_err(|_| ProfileParseError::UnknownMetaClass {
                    stereotype: name.clone(),
                    name: text.clone(),
                })?;
            base_classes.insert(metaclass);
        }
    }

    let icon = find_child(node, "ICON").map(node_text);

    let mut tag_defs = Vec::new();
    if let Some(list) = find_child(node, "TAGDEFINITIONLIST") {
        warn_unknown_children(list, &["TAGDEFINITION"], "TAGDEFINITIONLIST", warnings);
        for tag_node in children(list, "TAGDEFINITION") {
            warn_unknown_children(
                tag_node,
                &["NAME", "TYPE", "DEFAULT", "CHOICES"],
                "TAGDEFINITION",
                warnings,
            );
            let tag_name = required_text(tag_node, "NAME", "TAGDEFINITION")?;
            let type_text = required_text(tag_node, "TYPE", "TAGDEFINITION")?;
            let value_type = type_text
                .parse()
                .map_err(|_| ProfileParseError::UnknownTagType {
                    stereotype: name.clone(),
                    tag: tag_name.clone(),
                    value: type_text.clone(),
                })?;
            let default = find_child(tag_node, "DEFAULT").map(node_text);
            let mut enum_choices = Vec::new();
            if let Some(choices) = find_child(tag_node, "CHOICES") {
                warn_unknown_children(choices, &["CHOICE"], "CHOICES", warnings);
                for choice in children(choices, "CHOICE") {
                    enum_choices.push(node_text(choice));
                }
            }
            tag_defs.push(TagDefinition {
                name: tag_name,
                value_type,
                enum_choices,
                default,
            });
        }
    }

    let mut constraints = Vec::new();
    if let Some(list) = find_child(node, "CONSTRAINTLIST") {
        warn_unknown_children(list, &["CONSTRAINT"], "CONSTRAINTLIST", warnings);
        for constraint_node in children(list, "CONSTRAINT") {
            warn_unknown_children(constraint_node, &["NAME", "EXPR"], "CONSTRAINT", warnings);
            let constraint_name = required_text(constraint_node, "NAME", "CONSTRAINT")?;
            let source_text = find_child(constraint_node, "EXPR").map(node_text).ok_or(
                ProfileParseError::MissingElement {
                    element: "EXPR",
                    parent: format!("CONSTRAINT '{constraint_name}'"),
                },
            )?;
            let compiled = parse_constraint(&source_text).map_err(|e| {
                let (line, column) = match &e {
                    ConstraintParseError::Syntax { line, column, .. } => (*line, *column),
                    ConstraintParseError::UnboundVariable { line, column, .. } => (*line, *column),
                };
                ProfileParseError::ConstraintSyntax {
                    stereotype: name.clone(),
                    constraint: constraint_name.clone(),
                    line,
                    column,
                    message: e.to_string(),
                }
            })?;
            constraints.push(ConstraintDef {
                name: constraint_name,
                source_text,
                compiled,
            });
        }
    }

    Ok(Stereotype {
        name,
        description,
        base_classes,
        icon,
        tag_defs,
        constraints,
    })
}

fn required_text(
    node: roxmltree::Node,
    tag: &'static str,
    parent: &str,
) -> Result<String, ProfileParseError> {
    // An empty NAME is as useless as a missing one; both are refused.
    match find_child(node, tag) {
        Some(child) => {
            let text = node_text(child);
            if text.is_empty() {
                Err(ProfileParseError::MissingElement {
                    element: tag,
                    parent: parent.to_string(),
                })
            } else {
                Ok(text)
            }
        }
        None => Err(ProfileParseError::MissingElement {
            element: tag,
            parent: parent.to_string(),
        }),
    }
}

fn optional_text(node: roxmltree::Node, tag: &str) -> String {
    find_child(node, tag).map(node_text).unwrap_or_default()
}

/// Emits the canonical XML byte form. Inverse of [`parse_profile`] up to
/// structural equality; byte-stable under reparse-and-reserialize.
pub fn serialize_profile(profile: &Profile) -> String {
    let mut w = XmlWriter::new();
    w.open("PROFILE", &[("version", &profile.version)]);
    w.open("HEADER", &[]);
    w.text_element("NAME", &profile.name);
    w.text_element("DISPLAYNAME", &profile.display_name);
    w.text_element("DESCRIPTION", &profile.description);
    w.close("HEADER");
    w.open("BODY", &[]);
    if profile.stereotypes.is_empty() {
        w.text_element("STEREOTYPELIST", "");
    } else {
        w.open("STEREOTYPELIST", &[]);
        for stereotype in &profile.stereotypes {
            write_stereotype(&mut w, stereotype);
        }
        w.close("STEREOTYPELIST");
    }
    w.close("BODY");
    w.close("PROFILE");
    w.finish()
}

fn write_stereotype(w: &mut XmlWriter, stereotype: &Stereotype) {
    w.open("STEREOTYPE", &[]);
    w.text_element("NAME", &stereotype.name);
    w.text_element("DESCRIPTION", &stereotype.description);
    if stereotype.base_classes.is_empty() {
        w.text_element("BASECLASSES", "");
    } else {
        w.open("BASECLASSES", &[]);
        for base in &stereotype.base_classes {
            w.text_element("BASECLASS", base.name());
        }
        w.close("BASECLASSES");
    }
    if let Some(icon) = &stereotype.icon {
        w.text_element("ICON", icon);
    }
    if !stereotype.tag_defs.is_empty() {
        w.open("TAGDEFINITIONLIST", &[]);
        for tag in &stereotype.tag_defs {
            w.open("TAGDEFINITION", &[]);
            w.text_element("NAME", &tag.name);
            w.text_element("TYPE", tag.value_type.as_str());
            if let Some(default) = &tag.default {
                w.text_element("DEFAULT", default);
            }
            if !tag.enum_choices.is_empty() {
                w.open("CHOICES", &[]);
                for choice in &tag.enum_choices {
                    w.text_element("CHOICE", choice);
                }
                w.close("CHOICES");
            }
            w.close("TAGDEFINITION");
        }
        w.close("TAGDEFINITIONLIST");
    }
    if !stereotype.constraints.is_empty() {
        w.open("CONSTRAINTLIST", &[]);
        for constraint in &stereotype.constraints {
            w.open("CONSTRAINT", &[]);
            w.text_element("NAME", &constraint.name);
            w.text_element("EXPR", &constraint.source_text);
            w.close("CONSTRAINT");
        }
        w.close("CONSTRAINTLIST");
    }
    w.close("STEREOTYPE");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::Code;
    use crate::metamodel::MetaClass;

    const HEADER_ONLY: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<PROFILE version="1.0">
<HEADER><NAME>Empty</NAME><DISPLAYNAME>Empty</DISPLAYNAME><DESCRIPTION>d</DESCRIPTION></HEADER>
<BODY><STEREOTYPELIST></STEREOTYPELIST></BODY>
</PROFILE>"#;

    #[test]
    fn header_only_profile_has_no_stereotypes() {
        let parsed = parse_profile(HEADER_ONLY.as_bytes()).unwrap();
        assert_eq!(parsed.profile.name, "Empty");
        assert!(parsed.profile.stereotypes.is_empty());
        assert!(parsed.warnings.is_empty());
    }

    #[test]
    fn unknown_base_class_is_an_error() {
        let doc = r#"<?xml version="1.0" encoding="UTF-8"?>
<PROFILE version="1.0">
<HEADER><NAME>P</NAME></HEADER>
<BODY><STEREOTYPELIST><STEREOTYPE>
<NAME>Widgety</NAME>
<BASECLASSES><BASECLASS>UMLWidget</BASECLASS></BASECLASSES>
</STEREOTYPE></STEREOTYPELIST></BODY>
</PROFILE>"#;
        let err = parse_profile(doc.as_bytes()).unwrap_err();
        assert_eq!(
            err,
            ProfileParseError::UnknownMetaClass {
                stereotype: "Widgety".into(),
                name: "UMLWidget".into(),
            }
        );
    }

    #[test]
    fn missing_header_name_is_an_error() {
        let doc = r#"<?xml version="1.0" encoding="UTF-8"?>
<PROFILE version="1.0"><HEADER><DISPLAYNAME>x</DISPLAYNAME></HEADER></PROFILE>"#;
        let err = parse_profile(doc.as_bytes()).unwrap_err();
        assert!(matches!(
            err,
            ProfileParseError::MissingElement {
                element: "NAME",
                ..
            }
        ));
    }

    #[test]
    fn garbage_is_malformed() {
        assert!(matches!(
            parse_profile(b"this is not xml"),
            Err(ProfileParseError::Malformed(_))
        ));
        assert!(matches!(
            parse_profile(b""),
            Err(ProfileParseError::Malformed(_))
        ));
    }

    #[test]
    fn wrong_root_is_reported() {
        let err = parse_profile(b"<?xml version=\"1.0\"?><MODEL/>").unwrap_err();
        assert_eq!(err, ProfileParseError::UnexpectedRoot("MODEL".into()));
    }

    #[test]
    fn unknown_sections_are_skipped_with_w001() {
        let doc = r#"<?xml version="1.0" encoding="UTF-8"?>
<PROFILE version="1.0">
<HEADER><NAME>P</NAME><FANCYNEWTHING/></HEADER>
<BODY><STEREOTYPELIST/></BODY>
</PROFILE>"#;
        let parsed = parse_profile(doc.as_bytes()).unwrap();
        assert_eq!(parsed.warnings.len(), 1);
        assert_eq!(parsed.warnings[0].code, Code::W001);
        assert_eq!(parsed.profile.name, "P");
    }

    #[test]
    fn bad_constraint_reports_name_line_and_column() {
        let doc = r#"<?xml version="1.0" encoding="UTF-8"?>
<PROFILE version="1.0">
<HEADER><NAME>P</NAME></HEADER>
<BODY><STEREOTYPELIST><STEREOTYPE>
<NAME>S</NAME>
<BASECLASSES><BASECLASS>UMLClass</BASECLASS></BASECLASSES>
<CONSTRAINTLIST><CONSTRAINT><NAME>broken</NAME><EXPR>self.name &lt;&gt;</EXPR></CONSTRAINT></CONSTRAINTLIST>
</STEREOTYPE></STEREOTYPELIST></BODY>
</PROFILE>"#;
        let err = parse_profile(doc.as_bytes()).unwrap_err();
        match err {
            ProfileParseError::ConstraintSyntax {
                constraint,
                line,
                column,
                ..
            } => {
                assert_eq!(constraint, "broken");
                assert_eq!((line, column), (1, 13));
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn unknown_tag_type_is_an_error() {
        let doc = r#"<?xml version="1.0" encoding="UTF-8"?>
<PROFILE version="1.0">
<HEADER><NAME>P</NAME></HEADER>
<BODY><STEREOTYPELIST><STEREOTYPE>
<NAME>S</NAME>
<BASECLASSES><BASECLASS>UMLClass</BASECLASS></BASECLASSES>
<TAGDEFINITIONLIST><TAGDEFINITION><NAME>t</NAME><TYPE>flavor</TYPE></TAGDEFINITION></TAGDEFINITIONLIST>
</STEREOTYPE></STEREOTYPELIST></BODY>
</PROFILE>"#;
        let err = parse_profile(doc.as_bytes()).unwrap_err();
        assert_eq!(
            err,
            ProfileParseError::UnknownTagType {
                stereotype: "S".into(),
                tag: "t".into(),
                value: "flavor".into(),
            }
        );
    }

    #[test]
    fn duplicate_stereotype_names_parse_fine_and_lint_dirty() {
        // The parser stays structural so tooling can inspect broken
        // profiles; the linter owns duplicate detection.
        let doc = r#"<?xml version="1.0" encoding="UTF-8"?>
<PROFILE version="1.0">
<HEADER><NAME>P</NAME></HEADER>
<BODY><STEREOTYPELIST>
<STEREOTYPE><NAME>Annotation</NAME><BASECLASSES><BASECLASS>UMLClass</BASECLASS></BASECLASSES></STEREOTYPE>
<STEREOTYPE><NAME>Annotation</NAME><BASECLASSES><BASECLASS>UMLObject</BASECLASS></BASECLASSES></STEREOTYPE>
</STEREOTYPELIST></BODY>
</PROFILE>"#;
        let parsed = parse_profile(doc.as_bytes()).unwrap();
        assert_eq!(parsed.profile.stereotypes.len(), 2);
        let diags = crate::profile::lint_profile(&parsed.profile);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, Code::E101);
    }

    #[test]
    fn empty_profile_serializes_with_empty_stereotypelist() {
        let profile = Profile {
            name: "Empty".into(),
            display_name: "Empty".into(),
            description: "d".into(),
            version: "1.0".into(),
            stereotypes: Vec::new(),
        };
        let xml = serialize_profile(&profile);
        assert!(xml.contains("<STEREOTYPELIST/>"), "got:\n{xml}");
        let reparsed = parse_profile(xml.as_bytes()).unwrap();
        assert_eq!(reparsed.profile, profile);
    }

    #[test]
    fn serialization_is_idempotent_over_a_rich_profile() {
        let doc = r#"<?xml version="1.0" encoding="UTF-8"?>
<PROFILE version="2.3">
<HEADER><NAME>Rich</NAME><DISPLAYNAME>Rich &amp; Co</DISPLAYNAME><DESCRIPTION>a &lt; b</DESCRIPTION></HEADER>
<BODY><STEREOTYPELIST><STEREOTYPE>
<NAME>S</NAME><DESCRIPTION>desc</DESCRIPTION>
<BASECLASSES><BASECLASS>UMLObject</BASECLASS><BASECLASS>UMLClass</BASECLASS></BASECLASSES>
<ICON>icon1</ICON>
<TAGDEFINITIONLIST>
<TAGDEFINITION><NAME>mode</NAME><TYPE>enum</TYPE><DEFAULT>fast</DEFAULT><CHOICES><CHOICE>fast</CHOICE><CHOICE>slow</CHOICE></CHOICES></TAGDEFINITION>
<TAGDEFINITION><NAME>level</NAME><TYPE>int</TYPE></TAGDEFINITION>
</TAGDEFINITIONLIST>
<CONSTRAINTLIST><CONSTRAINT><NAME>named</NAME><EXPR>self.name &lt;&gt; ''</EXPR></CONSTRAINT></CONSTRAINTLIST>
</STEREOTYPE></STEREOTYPELIST></BODY>
</PROFILE>"#;
        let first = parse_profile(doc.as_bytes()).unwrap().profile;
        let once = serialize_profile(&first);
        let second = parse_profile(once.as_bytes()).unwrap().profile;
        assert_eq!(second, first);
        let twice = serialize_profile(&second);
        assert_eq!(twice, once);
        assert_eq!(first.stereotypes[0].base_classes.len(), 2);
        assert_eq!(
            first.stereotypes[0].base_classes.iter().next(),
            Some(&MetaClass::Class)
        );
        assert_eq!(
            first.stereotypes[0].constraints[0].source_text,
            "self.name <> ''"
        );
    }
}

//! UML profiles: stereotypes, tag definitions, and constraints.
//!
//! A profile is the extension vocabulary a model imports. The XML form
//! ([`parse_profile`], [`serialize_profile`]) is the StarUML profile format
//! extended backward-compatibly with `ICON`, `TAGDEFINITIONLIST`, and
//! `CONSTRAINTLIST` sections; readers that predate those sections can skip
//! them.
//!
//! Parsing is deliberately forgiving about semantic problems (duplicate
//! names, empty base-class sets): tooling must be able to load and inspect
//! a broken profile, so those are reported by [`lint_profile`] rather than
//! refused by the parser.

mod xml;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::constraint::Expr;
use crate::diagnostics::{Code, Diagnostic};
use crate::metamodel::MetaClass;

pub use xml::{parse_profile, serialize_profile, ParsedProfile, ProfileParseError};

/// A parsed profile: the extension vocabulary plus its rules.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub name: String,
    pub display_name: String,
    pub description: String,
    pub version: String,
    pub stereotypes: Vec<Stereotype>,
}

impl Profile {
    /// First stereotype with the given name, if any.
    pub fn stereotype(&self, name: &str) -> Option<&Stereotype> {
        self.stereotypes.iter().find(|s| s.name == name)
    }
}

/// A named extension of one or more metaclasses.
#[derive(Debug, Clone, PartialEq)]
pub struct Stereotype {
    pub name: String,
    pub description: String,
    pub base_classes: BTreeSet<MetaClass>,
    /// Opaque icon identifier; icon imagery is out of scope.
    pub icon: Option<String>,
    pub tag_defs: Vec<TagDefinition>,
    pub constraints: Vec<ConstraintDef>,
}

/// Value types a tag definition can declare.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagType {
    String,
    Int,
    Real,
    Bool,
    Enum,
}

impl TagType {
    pub fn as_str(self) -> &'static str {
        match self {
            TagType::String => "string",
            TagType::Int => "int",
            TagType::Real => "real",
            TagType::Bool => "bool",
            TagType::Enum => "enum",
        }
    }
}

impl fmt::Display for TagType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Raised for a `TYPE` text outside the closed tag-type set.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown tag type '{0}'")]
pub struct UnknownTagType(pub String);

impl FromStr for TagType {
    type Err = UnknownTagType;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "string" => Ok(TagType::String),
            "int" => Ok(TagType::Int),
            "real" => Ok(TagType::Real),
            "bool" => Ok(TagType::Bool),
            "enum" => Ok(TagType::Enum),
            other => Err(UnknownTagType(other.to_string())),
        }
    }
}

/// A typed meta-attribute a stereotype adds to its targets.
#[derive(Debug, Clone, PartialEq)]
pub struct TagDefinition {
    pub name: String,
    pub value_type: TagType,
    /// Nonempty exactly when `value_type` is [`TagType::Enum`].
    pub enum_choices: Vec<String>,
    /// Serialized literal of `value_type`; applications omitting the tag
    /// silently receive it.
    pub default: Option<String>,
}

impl TagDefinition {
    /// Checks that a serialized tag value coerces to the declared type.
    /// Tag values travel as strings; this is the single coercion rule used
    /// for both defaults and applied values.
    pub fn check_value(&self, value: &str) -> Result<(), String> {
        match self.value_type {
            TagType::String => Ok(()),
            TagType::Int => value
                .parse::<i64>()
                .map(|_| ())
                .map_err(|_| format!("'{value}' is not an int")),
            TagType::Real => value
                .parse::<f64>()
                .map(|_| ())
                .map_err(|_| format!("'{value}' is not a real")),
            TagType::Bool => match value {
                "true" | "false" => Ok(()),
                _ => Err(format!("'{value}' is not a bool (expected true or false)")),
            },
            TagType::Enum => {
                if self.enum_choices.iter().any(|c| c == value) {
                    Ok(())
                } else {
                    Err(format!(
                        "'{value}' is not one of the enum choices [{}]",
                        self.enum_choices.join(", ")
                    ))
                }
            }
        }
    }
}

/// A named constraint attached to a stereotype, compiled at load time.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintDef {
    pub name: String,
    /// The text as authored; serialization preserves it verbatim.
    pub source_text: String,
    pub compiled: Expr,
}

/// Reports profile-level consistency problems.
///
/// Fires E101 (duplicate stereotype name), E103 (empty base-class set),
/// E104 (duplicate tag name), E105 (tag default/enum misconfiguration),
/// and E106 (duplicate constraint name). An empty result means clean.
pub fn lint_profile(profile: &Profile) -> Vec<Diagnostic> {
    let mut diags = Vec::new();

    let mut seen = BTreeSet::new();
    for stereotype in &profile.stereotypes {
        if !seen.insert(stereotype.name.as_str()) {
            diags.push(
                Diagnostic::new(
                    Code::E101,
                    format!(
                        "profile '{}' declares stereotype '{}' more than once",
                        profile.name, stereotype.name
                    ),
                )
                .with_detail("stereotype", &stereotype.name),
            );
        }
    }

    for stereotype in &profile.stereotypes {
        if stereotype.base_classes.is_empty() {
            diags.push(
                Diagnostic::new(
                    Code::E103,
                    format!("stereotype '{}' extends no base class", stereotype.name),
                )
                .with_detail("stereotype", &stereotype.name),
            );
        }

        let mut tag_names = BTreeSet::new();
        for tag in &stereotype.tag_defs {
            if !tag_names.insert(tag.name.as_str()) {
                diags.push(
                    Diagnostic::new(
                        Code::E104,
                        format!(
                            "stereotype '{}' declares tag '{}' more than once",
                            stereotype.name, tag.name
                        ),
                    )
                    .with_detail("stereotype", &stereotype.name)
                    .with_detail("tag", &tag.name),
                );
            }
            if tag.value_type == TagType::Enum && tag.enum_choices.is_empty() {
                diags.push(
                    Diagnostic::new(
                        Code::E105,
                        format!(
                            "enum tag '{}' of stereotype '{}' has no choices",
                            tag.name, stereotype.name
                        ),
                    )
                    .with_detail("stereotype", &stereotype.name)
                    .with_detail("tag", &tag.name),
                );
            } else if let Some(default) = &tag.default {
                if let Err(reason) = tag.check_value(default) {
                    diags.push(
                        Diagnostic::new(
                            Code::E105,
                            format!(
                                "default for tag '{}' of stereotype '{}' does not conform to {}: {}",
                                tag.name, stereotype.name, tag.value_type, reason
                            ),
                        )
                        .with_detail("stereotype", &stereotype.name)
                        .with_detail("tag", &tag.name),
                    );
                }
            }
        }

        let mut constraint_names = BTreeSet::new();
        for constraint in &stereotype.constraints {
            if !constraint_names.insert(constraint.name.as_str()) {
                diags.push(
                    Diagnostic::new(
                        Code::E106,
                        format!(
                            "stereotype '{}' declares constraint '{}' more than once",
                            stereotype.name, constraint.name
                        ),
                    )
                    .with_detail("stereotype", &stereotype.name)
                    .with_detail("constraint", &constraint.name),
                );
            }
        }
    }

    diags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::parse_constraint;

    fn stereotype(name: &str) -> Stereotype {
        Stereotype {
            name: name.into(),
            description: String::new(),
            base_classes: BTreeSet::from([MetaClass::Class]),
            icon: None,
            tag_defs: Vec::new(),
            constraints: Vec::new(),
        }
    }

    fn profile(stereotypes: Vec<Stereotype>) -> Profile {
        Profile {
            name: "P".into(),
            display_name: "P".into(),
            description: String::new(),
            version: "1.0".into(),
            stereotypes,
        }
    }

    fn codes(diags: &[Diagnostic]) -> Vec<Code> {
        diags.iter().map(|d| d.code).collect()
    }

    #[test]
    fn empty_profile_lints_clean() {
        assert!(lint_profile(&profile(Vec::new())).is_empty());
    }

    #[test]
    fn duplicate_stereotype_names_fire_e101() {
        let p = profile(vec![stereotype("Annotation"), stereotype("Annotation")]);
        assert_eq!(codes(&lint_profile(&p)), vec![Code::E101]);
    }

    #[test]
    fn empty_base_class_set_fires_e103() {
        let mut s = stereotype("S");
        s.base_classes.clear();
        assert_eq!(codes(&lint_profile(&profile(vec![s]))), vec![Code::E103]);
    }

    #[test]
    fn duplicate_tags_fire_e104() {
        let mut s = stereotype("S");
        let tag = TagDefinition {
            name: "t".into(),
            value_type: TagType::String,
            enum_choices: Vec::new(),
            default: None,
        };
        s.tag_defs = vec![tag.clone(), tag];
        assert_eq!(codes(&lint_profile(&profile(vec![s]))), vec![Code::E104]);
    }

    #[test]
    fn enum_default_outside_choices_fires_e105() {
        let mut s = stereotype("S");
        s.tag_defs = vec![TagDefinition {
            name: "kind".into(),
            value_type: TagType::Enum,
            enum_choices: vec!["a".into(), "b".into()],
            default: Some("c".into()),
        }];
        assert_eq!(codes(&lint_profile(&profile(vec![s]))), vec![Code::E105]);
    }

    #[test]
    fn enum_without_choices_fires_e105() {
        let mut s = stereotype("S");
        s.tag_defs = vec![TagDefinition {
            name: "kind".into(),
            value_type: TagType::Enum,
            enum_choices: Vec::new(),
            default: None,
        }];
        assert_eq!(codes(&lint_profile(&profile(vec![s]))), vec![Code::E105]);
    }

    #[test]
    fn nonconforming_default_fires_e105() {
        let mut s = stereotype("S");
        s.tag_defs = vec![TagDefinition {
            name: "count".into(),
            value_type: TagType::Int,
            enum_choices: Vec::new(),
            default: Some("three".into()),
        }];
        assert_eq!(codes(&lint_profile(&profile(vec![s]))), vec![Code::E105]);
    }

    #[test]
    fn duplicate_constraints_fire_e106() {
        let mut s = stereotype("S");
        let c = ConstraintDef {
            name: "c".into(),
            source_text: "true".into(),
            compiled: parse_constraint("true").unwrap(),
        };
        s.constraints = vec![c.clone(), c];
        assert_eq!(codes(&lint_profile(&profile(vec![s]))), vec![Code::E106]);
    }

    #[test]
    fn tag_value_coercion_rules() {
        let int_tag = TagDefinition {
            name: "n".into(),
            value_type: TagType::Int,
            enum_choices: Vec::new(),
            default: None,
        };
        assert!(int_tag.check_value("3").is_ok());
        assert!(int_tag.check_value("-7").is_ok());
        assert!(int_tag.check_value("three").is_err());
        let bool_tag = TagDefinition {
            value_type: TagType::Bool,
            ..int_tag.clone()
        };
        assert!(bool_tag.check_value("true").is_ok());
        assert!(bool_tag.check_value("True").is_err());
        let real_tag = TagDefinition {
            value_type: TagType::Real,
            ..int_tag.clone()
        };
        assert!(real_tag.check_value("2.5").is_ok());
        assert!(real_tag.check_value("2").is_ok());
        assert!(real_tag.check_value("x").is_err());
    }
}

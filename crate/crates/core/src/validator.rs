//! Rule engine producing stable-coded diagnostics.
//!
//! Every rule is pure over immutable inputs and never fails on resolvable
//! input: all findings are diagnostics. [`check_document`] composes the
//! rules in a fixed order (well-formedness, resolution, applicability,
//! stereotype count, tags, constraints) and sorts the combined result by
//! (element id, code) so reports diff cleanly in CI.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::constraint::{evaluate, Value};
use crate::diagnostics::{sort_diagnostics, Code, Diagnostic, Severity};
use crate::metamodel::ConformanceTable;
use crate::model::{resolve, DiagramKind, ModelDocument, ProfileRegistry, ResolvedModel};

/// How strictly stereotype applications are policed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StereotypeMode {
    /// At most one stereotype per element, mirroring StarUML.
    #[default]
    Strict,
    /// Any number of stereotypes per element.
    Uml2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ValidationOptions {
    pub stereotype_mode: StereotypeMode,
    pub fail_on_warning: bool,
}

/// E201 per application whose target metaclass conforms to none of the
/// stereotype's base classes. Unbound applications are skipped here; their
/// E102 already covers them.
pub fn check_applicability(model: &ResolvedModel) -> Vec<Diagnostic> {
    let table = ConformanceTable::standard();
    let mut diags = Vec::new();
    for target in model.targets() {
        for index in 0..target.applications.len() {
            let Some(stereotype) = model.binding(target.id, index) else {
                continue;
            };
            let applicable = stereotype
                .base_classes
                .iter()
                .any(|base| table.conforms_to(target.metaclass, *base));
            if !applicable {
                let bases: Vec<&str> = stereotype.base_classes.iter().map(|b| b.name()).collect();
                diags.push(
                    Diagnostic::on(
                        Code::E201,
                        target.id,
                        format!(
                            "stereotype '{}' (base classes: {}) is not applicable to {}",
                            stereotype.name,
                            bases.join(", "),
                            target.metaclass
                        ),
                    )
                    .with_detail("stereotype", &stereotype.name)
                    .with_detail("metaclass", target.metaclass.name()),
                );
            }
        }
    }
    diags
}

/// E202 per element or association carrying two or more stereotypes, in
/// strict mode only.
pub fn check_stereotype_count(
    model: &ResolvedModel,
    options: &ValidationOptions,
) -> Vec<Diagnostic> {
    if options.stereotype_mode != StereotypeMode::Strict {
        return Vec::new();
    }
    let mut diags = Vec::new();
    for target in model.targets() {
        if target.applications.len() >= 2 {
            diags.push(
                Diagnostic::on(
                    Code::E202,
                    target.id,
                    format!(
                        "{} stereotypes applied; strict mode allows one per element",
                        target.applications.len()
                    ),
                )
                .with_detail("count", target.applications.len().to_string()),
            );
        }
    }
    diags
}

/// Tagged-value conformance: E401 for a value that does not coerce to its
/// declared type, E402 for a tag the stereotype does not declare, E403 for
/// a missing tag with no default. Missing tags with defaults are filled
/// silently.
pub fn check_tags(model: &ResolvedModel) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for target in model.targets() {
        for (index, application) in target.applications.iter().enumerate() {
            let Some(stereotype) = model.binding(target.id, index) else {
                continue;
            };
            for (name, value) in &application.tags {
                match stereotype.tag_defs.iter().find(|def| &def.name == name) {
                    None => diags.push(
                        Diagnostic::on(
                            Code::E402,
                            target.id,
                            format!(
                                "stereotype '{}' declares no tag '{}'",
                                stereotype.name, name
                            ),
                        )
                        .with_detail("stereotype", &stereotype.name)
                        .with_detail("tag", name),
                    ),
                    Some(def) => {
                        if let Err(reason) = def.check_value(value) {
                            diags.push(
                                Diagnostic::on(
                                    Code::E401,
                                    target.id,
                                    format!(
                                        "tag '{}' of stereotype '{}' expects {}: {}",
                                        name, stereotype.name, def.value_type, reason
                                    ),
                                )
                                .with_detail("tag", name)
                                .with_detail("expected", def.value_type.as_str())
                                .with_detail("actual", value),
                            );
                        }
                    }
                }
            }
            for def in &stereotype.tag_defs {
                if !application.tags.contains_key(&def.name) && def.default.is_none() {
                    diags.push(
                        Diagnostic::on(
                            Code::E403,
                            target.id,
                            format!(
                                "tag '{}' of stereotype '{}' has no default and was not supplied",
                                def.name, stereotype.name
                            ),
                        )
                        .with_detail("stereotype", &stereotype.name)
                        .with_detail("tag", &def.name),
                    );
                }
            }
        }
    }
    diags
}

/// Evaluates every constraint of every bound application with the target
/// as context: false is E301, an invalid result is E302, any other
/// non-boolean is E303. Runs even for targets that also have E201/E202
/// findings, so one pass reports everything.
pub fn check_constraints(model: &ResolvedModel) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for target in model.targets() {
        for (index, _) in target.applications.iter().enumerate() {
            let Some(stereotype) = model.binding(target.id, index) else {
                continue;
            };
            for constraint in &stereotype.constraints {
                match evaluate(&constraint.compiled, target.id, model) {
                    Value::Bool(true) => {}
                    Value::Bool(false) => diags.push(
                        Diagnostic::on(
                            Code::E301,
                            target.id,
                            format!(
                                "constraint '{}' of stereotype '{}' is violated",
                                constraint.name, stereotype.name
                            ),
                        )
                        .with_detail("constraint", &constraint.name)
                        .with_detail("stereotype", &stereotype.name),
                    ),
                    Value::Invalid(reason) => diags.push(
                        Diagnostic::on(
                            Code::E302,
                            target.id,
                            format!(
                                "constraint '{}' of stereotype '{}' could not be evaluated: {}",
                                constraint.name, stereotype.name, reason
                            ),
                        )
                        .with_detail("constraint", &constraint.name)
                        .with_detail("reason", &reason),
                    ),
                    other => diags.push(
                        Diagnostic::on(
                            Code::E303,
                            target.id,
                            format!(
                                "constraint '{}' of stereotype '{}' produced {} instead of a boolean",
                                constraint.name,
                                stereotype.name,
                                other.type_name()
                            ),
                        )
                        .with_detail("constraint", &constraint.name)
                        .with_detail("actual", other.type_name()),
                    ),
                }
            }
        }
    }
    diags
}

/// Structural sanity of a document: E501 dangling association end, E502
/// message endpoint outside its diagram's lifelines, E503 duplicate message
/// seq, E504 unknown diagram member or lifeline, E505 ownership cycle.
/// An owner naming a nonexistent element simply ends the owner chain.
pub fn check_wellformed(document: &ModelDocument) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let ids: BTreeSet<&str> = document.elements.iter().map(|e| e.id.as_str()).collect();

    for association in &document.associations {
        for (end, value) in [
            ("source", &association.source),
            ("target", &association.target),
        ] {
            if !ids.contains(value.as_str()) {
                diags.push(
                    Diagnostic::on(
                        Code::E501,
                        &association.id,
                        format!("association {end} '{value}' names no element"),
                    )
                    .with_detail("end", end)
                    .with_detail("ref", value),
                );
            }
        }
    }

    for diagram in &document.diagrams {
        let refs = match diagram.kind {
            DiagramKind::Class => &diagram.members,
            DiagramKind::Sequence => &diagram.lifelines,
        };
        for reference in refs {
            if !ids.contains(reference.as_str()) {
                diags.push(
                    Diagnostic::on(
                        Code::E504,
                        &diagram.id,
                        format!("diagram references unknown element '{reference}'"),
                    )
                    .with_detail("ref", reference),
                );
            }
        }

        let lifelines: BTreeSet<&str> = diagram.lifelines.iter().map(String::as_str).collect();
        for message in &diagram.messages {
            for (end, value) in [("from", &message.from), ("to", &message.to)] {
                if !lifelines.contains(value.as_str()) {
                    diags.push(
                        Diagnostic::on(
                            Code::E502,
                            &diagram.id,
                            format!(
                                "message {} endpoint '{}' ({end}) is not a lifeline of the diagram",
                                message.seq, value
                            ),
                        )
                        .with_detail("seq", message.seq.to_string())
                        .with_detail("ref", value),
                    );
                }
            }
        }

        let mut by_seq: BTreeMap<u32, usize> = BTreeMap::new();
        for message in &diagram.messages {
            *by_seq.entry(message.seq).or_default() += 1;
        }
        for (seq, count) in by_seq {
            if count > 1 {
                diags.push(
                    Diagnostic::on(
                        Code::E503,
                        &diagram.id,
                        format!("sequence number {seq} is used by {count} messages"),
                    )
                    .with_detail("seq", seq.to_string()),
                );
            }
        }
    }

    // Ownership cycles: one E505 per distinct cycle, attached to the
    // smallest element id in it.
    let owner_of: BTreeMap<&str, &str> = document
        .elements
        .iter()
        .filter_map(|e| e.owner.as_deref().map(|owner| (e.id.as_str(), owner)))
        .collect();
    let mut reported: BTreeSet<&str> = BTreeSet::new();
    for element in &document.elements {
        let mut path: Vec<&str> = Vec::new();
        let mut current = element.id.as_str();
        loop {
            if let Some(position) = path.iter().position(|id| *id == current) {
                let cycle = &path[position..];
                let anchor = cycle.iter().min().copied().unwrap_or(current);
                if reported.insert(anchor) {
                    let mut members: Vec<&str> = cycle.to_vec();
                    members.sort_unstable();
                    diags.push(
                        Diagnostic::on(
                            Code::E505,
                            anchor,
                            format!("ownership cycle through {}", members.join(" -> ")),
                        )
                        .with_detail("cycle", members.join(",")),
                    );
                }
                break;
            }
            path.push(current);
            match owner_of.get(current) {
                Some(owner) if ids.contains(owner) => current = owner,
                _ => break,
            }
        }
    }

    diags
}

/// A deterministic validation result: diagnostics sorted by (element id,
/// code), plus severity totals.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub diagnostics: Vec<Diagnostic>,
    pub errors: usize,
    pub warnings: usize,
}

#[derive(Serialize)]
struct JsonDiagnostic<'a> {
    code: &'a str,
    severity: Severity,
    element: Option<&'a str>,
    message: &'a str,
}

impl ValidationReport {
    /// Sorts and counts. The single constructor, so every report is in
    /// canonical order.
    pub fn from_diagnostics(mut diagnostics: Vec<Diagnostic>) -> Self {
        sort_diagnostics(&mut diagnostics);
        let errors = diagnostics
            .iter()
            .filter(|d| d.severity() == Severity::Error)
            .count();
        let warnings = diagnostics.len() - errors;
        ValidationReport {
            diagnostics,
            errors,
            warnings,
        }
    }

    pub fn is_clean(&self) -> bool {
        self.diagnostics.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.errors > 0
    }

    /// One line per diagnostic plus a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for diagnostic in &self.diagnostics {
            out.push_str(&diagnostic.to_line());
            out.push('\n');
        }
        let plural = |n: usize, word: &str| {
            if n == 1 {
                format!("1 {word}")
            } else {
                format!("{n} {word}s")
            }
        };
        out.push_str(&plural(self.errors, "error"));
        out.push_str(", ");
        out.push_str(&plural(self.warnings, "warning"));
        out.push('\n');
        out
    }

    /// Machine-readable JSON array with fields code, severity, element,
    /// message.
    pub fn to_json(&self) -> String {
        let entries: Vec<JsonDiagnostic> = self
            .diagnostics
            .iter()
            .map(|d| JsonDiagnostic {
                code: d.code.as_str(),
                severity: d.severity(),
                element: d.element.as_deref(),
                message: &d.message,
            })
            .collect();
        serde_json::to_string_pretty(&entries).expect("report serialization cannot fail")
    }
}

/// Runs the whole rule set over a document and its profile registry.
pub fn check_document(
    document: &ModelDocument,
    registry: &ProfileRegistry,
    options: &ValidationOptions,
) -> ValidationReport {
    let mut diagnostics = check_wellformed(document);
    let resolved = resolve(document, registry);
    diagnostics.extend(resolved.diagnostics.iter().cloned());
    diagnostics.extend(check_applicability(&resolved));
    diagnostics.extend(check_stereotype_count(&resolved, options));
    diagnostics.extend(check_tags(&resolved));
    diagnostics.extend(check_constraints(&resolved));
    ValidationReport::from_diagnostics(diagnostics)
}

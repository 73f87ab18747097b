//! Deterministic diagram rendering.
//!
//! Class diagrams render to DOT (record-shaped nodes, quoted labels with
//! `\n` separators, nodes and edges in ascending id order); sequence
//! diagrams render to a numbered text trace, since lifeline ordering has no
//! natural DOT encoding. Output is a pure function of (model, diagram,
//! mode): no timestamps, no map-order leaks.

use std::fmt;

use thiserror::Error;

use crate::model::{DiagramKind, MessageKind, ResolvedModel, StereotypeApplication};

/// How applied stereotypes are shown, mirroring the StarUML
/// "Stereotype Display" setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DisplayMode {
    /// `<<Name>>`
    #[default]
    Textual,
    /// `[icon:ID]`, falling back to `<<Name>>` when the stereotype has no
    /// icon (icons are opaque identifiers here; bitmaps are out of scope).
    Iconic,
    /// Both forms.
    Decoration,
}

impl DisplayMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DisplayMode::Textual => "textual",
            DisplayMode::Iconic => "iconic",
            DisplayMode::Decoration => "decoration",
        }
    }
}

impl fmt::Display for DisplayMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("no diagram with id '{0}'")]
    UnknownDiagram(String),
    #[error("diagram '{diagram}' is a {actual} diagram, not {expected}")]
    WrongKind {
        diagram: String,
        expected: &'static str,
        actual: &'static str,
    },
}

/// Textual markers (`<<Name>>`) for every application, resolved or not.
fn textual_markers(applications: &[StereotypeApplication]) -> Vec<String> {
    applications
        .iter()
        .map(|a| format!("<<{}>>", a.stereotype))
        .collect()
}

/// Icon markers for the applications whose bound stereotype has an icon.
fn icon_markers(
    model: &ResolvedModel,
    target_id: &str,
    applications: &[StereotypeApplication],
) -> Vec<String> {
    applications
        .iter()
        .enumerate()
        .filter_map(|(index, _)| {
            model
                .binding(target_id, index)
                .and_then(|s| s.icon.as_deref())
                .map(|icon| format!("[icon:{icon}]"))
        })
        .collect()
}

/// Marker line(s) for one target under the given mode. Textual and iconic
/// produce at most one line; decoration produces the textual line plus an
/// icon line when any applied stereotype has an icon.
fn marker_lines(
    model: &ResolvedModel,
    target_id: &str,
    applications: &[StereotypeApplication],
    mode: DisplayMode,
) -> Vec<String> {
    if applications.is_empty() {
        return Vec::new();
    }
    match mode {
        DisplayMode::Textual => vec![textual_markers(applications).join(" ")],
        DisplayMode::Iconic => {
            let markers: Vec<String> = applications
                .iter()
                .enumerate()
                .map(|(index, application)| {
                    match model
                        .binding(target_id, index)
                        .and_then(|s| s.icon.as_deref())
                    {
                        Some(icon) => format!("[icon:{icon}]"),
                        None => format!("<<{}>>", application.stereotype),
                    }
                })
                .collect();
            vec![markers.join(" ")]
        }
        DisplayMode::Decoration => {
            let mut lines = vec![textual_markers(applications).join(" ")];
            let icons = icon_markers(model, target_id, applications);
            if !icons.is_empty() {
                lines.push(icons.join(" "));
            }
            lines
        }
    }
}

/// Escapes text for a double-quoted DOT string; literal newlines become
/// `\n` escapes.
fn escape_dot(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            _ => out.push(c),
        }
    }
    out
}

/// Renders a class diagram as a DOT digraph.
pub fn render_class_diagram(
    model: &ResolvedModel,
    diagram_id: &str,
    mode: DisplayMode,
) -> Result<String, RenderError> {
    let diagram = model
        .document
        .diagram(diagram_id)
        .ok_or_else(|| RenderError::UnknownDiagram(diagram_id.to_string()))?;
    if diagram.kind != DiagramKind::Class {
        return Err(RenderError::WrongKind {
            diagram: diagram_id.to_string(),
            expected: DiagramKind::Class.as_str(),
            actual: diagram.kind.as_str(),
        });
    }

    let mut members: Vec<&str> = diagram
        .members
        .iter()
        .map(String::as_str)
        .filter(|id| model.element(id).is_some())
        .collect();
    members.sort_unstable();
    members.dedup();

    let mut out = String::new();
    out.push_str(&format!("digraph \"{}\" {{\n", escape_dot(diagram_id)));
    out.push_str("  node [shape=record];\n");
    for id in &members {
        let element = model
            .element(id)
            .expect("members were filtered to known ids");
        let mut lines = marker_lines(model, id, &element.applications, mode);
        lines.push(element.name.clone());
        for (name, type_text) in &element.attributes {
            if type_text.is_empty() {
                lines.push(name.clone());
            } else {
                lines.push(format!("{name}: {type_text}"));
            }
        }
        out.push_str(&format!(
            "  \"{}\" [label=\"{}\"];\n",
            escape_dot(id),
            escape_dot(&lines.join("\n"))
        ));
    }

    let member_set: std::collections::BTreeSet<&str> = members.iter().copied().collect();
    let mut associations: Vec<_> = model
        .document
        .associations
        .iter()
        .filter(|a| {
            member_set.contains(a.source.as_str()) && member_set.contains(a.target.as_str())
        })
        .collect();
    associations.sort_by(|a, b| a.id.cmp(&b.id));
    for association in associations {
        let side = |role: &str, mult: &str| -> String {
            [role, mult]
                .iter()
                .filter(|s| !s.is_empty())
                .copied()
                .collect::<Vec<_>>()
                .join(" ")
        };
        let source_side = side(&association.source_role, &association.source_mult);
        let target_side = side(&association.target_role, &association.target_mult);
        let label = [source_side, target_side]
            .iter()
            .filter(|s| !s.is_empty())
            .cloned()
            .collect::<Vec<_>>()
            .join(" / ");
        if label.is_empty() {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                escape_dot(&association.source),
                escape_dot(&association.target)
            ));
        } else {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                escape_dot(&association.source),
                escape_dot(&association.target),
                escape_dot(&label)
            ));
        }
    }
    out.push_str("}\n");
    Ok(out)
}

/// Renders a sequence diagram as a text trace: a header of lifelines in
/// declaration order, a blank line, then `seq. From -> To : label` lines in
/// seq order (`-->` for returns).
pub fn render_sequence_diagram(
    model: &ResolvedModel,
    diagram_id: &str,
    mode: DisplayMode,
) -> Result<String, RenderError> {
    let diagram = model
        .document
        .diagram(diagram_id)
        .ok_or_else(|| RenderError::UnknownDiagram(diagram_id.to_string()))?;
    if diagram.kind != DiagramKind::Sequence {
        return Err(RenderError::WrongKind {
            diagram: diagram_id.to_string(),
            expected: DiagramKind::Sequence.as_str(),
            actual: diagram.kind.as_str(),
        });
    }

    let mut out = String::new();
    for id in &diagram.lifelines {
        let Some(element) = model.element(id) else {
            continue;
        };
        let markers = marker_lines(model, id, &element.applications, mode);
        if markers.is_empty() {
            out.push_str(&element.name);
        } else {
            out.push_str(&markers.join(" "));
            out.push(' ');
            out.push_str(&element.name);
        }
        out.push('\n');
    }

    let mut messages: Vec<_> = diagram.messages.iter().collect();
    messages.sort_by_key(|m| m.seq);
    if !messages.is_empty() {
        out.push('\n');
    }
    let display_name = |id: &str| -> String {
        model
            .element(id)
            .map(|e| e.name.clone())
            .unwrap_or_else(|| id.to_string())
    };
    for message in messages {
        let arrow = match message.kind {
            MessageKind::Call => "->",
            MessageKind::Return => "-->",
        };
        out.push_str(&format!(
            "{}. {} {} {} : {}\n",
            message.seq,
            display_name(&message.from),
            arrow,
            display_name(&message.to),
            message.label
        ));
    }
    Ok(out)
}

/// Minimal DOT well-formedness: braces balanced outside quoted strings,
/// quotes balanced, nonzero content.
pub fn dot_is_well_formed(text: &str) -> bool {
    let mut depth: i64 = 0;
    let mut in_quotes = false;
    let mut escaped = false;
    for c in text.chars() {
        if in_quotes {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_quotes = false;
            }
            continue;
        }
        match c {
            '"' => in_quotes = true,
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0 && !in_quotes && text.starts_with("digraph")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::model::{resolve, Diagram, ModelDocument, ProfileRegistry};

    fn corpus_registry() -> ProfileRegistry {
        [corpus::builtin_profile()].into_iter().collect()
    }

    #[test]
    fn textual_class_labels_start_with_the_stereotype() {
        let model = corpus::builtin_class_model();
        let registry = corpus_registry();
        let resolved = resolve(&model, &registry);
        let dot = render_class_diagram(&resolved, "d1", DisplayMode::Textual).unwrap();
        assert!(
            dot.contains("label=\"<<Annotation>>\\nAnnotation\\n"),
            "got:\n{dot}"
        );
        assert!(dot.contains("<<Patient>>"));
        assert!(!dot.contains("[icon:"));
        assert!(dot_is_well_formed(&dot));
    }

    #[test]
    fn iconic_mode_uses_icons_for_the_corpus() {
        let model = corpus::builtin_class_model();
        let registry = corpus_registry();
        let resolved = resolve(&model, &registry);
        let dot = render_class_diagram(&resolved, "d1", DisplayMode::Iconic).unwrap();
        assert!(dot.contains("[icon:ann16]"));
        assert!(
            !dot.contains("<<"),
            "all corpus stereotypes have icons:\n{dot}"
        );
    }

    #[test]
    fn iconic_mode_falls_back_to_textual_without_an_icon() {
        let mut profile = corpus::builtin_profile();
        profile
            .stereotypes
            .iter_mut()
            .find(|s| s.name == "Annotation")
            .unwrap()
            .icon = None;
        let registry: ProfileRegistry = [profile].into_iter().collect();
        let model = corpus::builtin_class_model();
        let resolved = resolve(&model, &registry);
        let dot = render_class_diagram(&resolved, "d1", DisplayMode::Iconic).unwrap();
        assert!(dot.contains("<<Annotation>>"));
        assert!(dot.contains("[icon:pat16]"));
    }

    #[test]
    fn decoration_mode_shows_both_marker_forms() {
        let model = corpus::builtin_class_model();
        let registry = corpus_registry();
        let resolved = resolve(&model, &registry);
        let dot = render_class_diagram(&resolved, "d1", DisplayMode::Decoration).unwrap();
        assert!(dot.contains("<<Annotation>>"));
        assert!(dot.contains("[icon:ann16]"));
    }

    #[test]
    fn empty_class_diagram_is_valid_dot_with_no_nodes() {
        let model = ModelDocument {
            diagrams: vec![Diagram {
                id: "d9".into(),
                kind: DiagramKind::Class,
                members: Vec::new(),
                lifelines: Vec::new(),
                messages: Vec::new(),
            }],
            ..ModelDocument::default()
        };
        let registry = ProfileRegistry::new();
        let resolved = resolve(&model, &registry);
        let dot = render_class_diagram(&resolved, "d9", DisplayMode::Textual).unwrap();
        assert!(dot_is_well_formed(&dot));
        assert!(!dot.contains("label"));
    }

    #[test]
    fn nodes_and_edges_come_out_in_ascending_id_order() {
        let model = corpus::builtin_class_model();
        let registry = corpus_registry();
        let resolved = resolve(&model, &registry);
        let dot = render_class_diagram(&resolved, "d1", DisplayMode::Textual).unwrap();
        let annotation = dot.find("\"annotation\" [").unwrap();
        let annotator = dot.find("\"annotator\" [").unwrap();
        let keywords = dot.find("\"keywords\" [").unwrap();
        assert!(annotation < annotator && annotator < keywords);
    }

    #[test]
    fn unknown_diagram_and_wrong_kind_are_errors() {
        let model = corpus::builtin_class_model();
        let registry = corpus_registry();
        let resolved = resolve(&model, &registry);
        assert_eq!(
            render_class_diagram(&resolved, "nope", DisplayMode::Textual),
            Err(RenderError::UnknownDiagram("nope".into()))
        );
        assert!(matches!(
            render_sequence_diagram(&resolved, "d1", DisplayMode::Textual),
            Err(RenderError::WrongKind { .. })
        ));
    }

    #[test]
    fn sequence_render_matches_the_workflow_trace() {
        let model = corpus::builtin_sequence_model();
        let registry = corpus_registry();
        let resolved = resolve(&model, &registry);
        let text = render_sequence_diagram(&resolved, "d1", DisplayMode::Textual).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines,
            vec![
                "Annotator",
                "<<Interface>> SearchUI",
                "<<Controller>> AnnotationController",
                "ImageStore",
                "",
                "1. Annotator -> SearchUI : sendQueryImage",
                "2. SearchUI -> AnnotationController : consultImageTable",
                "3. AnnotationController -> ImageStore : computeDistance",
                "4. AnnotationController --> SearchUI : displayImagesWithDescriptions",
                "5. Annotator -> SearchUI : chooseSimilarImage",
                "6. SearchUI -> AnnotationController : storeAnnotation",
            ]
        );
    }

    #[test]
    fn lifelines_without_messages_render_header_only() {
        let mut model = corpus::builtin_sequence_model();
        model.diagrams[0].messages.clear();
        let registry = corpus_registry();
        let resolved = resolve(&model, &registry);
        let text = render_sequence_diagram(&resolved, "d1", DisplayMode::Textual).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(!text.contains("->"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let model = corpus::builtin_class_model();
        let registry = corpus_registry();
        let resolved = resolve(&model, &registry);
        let first = render_class_diagram(&resolved, "d1", DisplayMode::Decoration).unwrap();
        let second = render_class_diagram(&resolved, "d1", DisplayMode::Decoration).unwrap();
        assert_eq!(first, second);

        let seq_model = corpus::builtin_sequence_model();
        let resolved = resolve(&seq_model, &registry);
        let first = render_sequence_diagram(&resolved, "d1", DisplayMode::Iconic).unwrap();
        let second = render_sequence_diagram(&resolved, "d1", DisplayMode::Iconic).unwrap();
        assert_eq!(first, second);
        assert!(first.contains("[icon:if16] SearchUI"));
    }

    #[test]
    fn messages_sort_by_seq_not_declaration_order() {
        let mut model = corpus::builtin_sequence_model();
        model.diagrams[0].messages.reverse();
        let registry = corpus_registry();
        let resolved = resolve(&model, &registry);
        let text = render_sequence_diagram(&resolved, "d1", DisplayMode::Textual).unwrap();
        let message_lines: Vec<&str> = text.lines().filter(|l| l.contains(" : ")).collect();
        assert!(message_lines[0].starts_with("1. "));
        assert!(message_lines[5].starts_with("6. "));
    }

    #[test]
    fn dot_checker_rejects_unbalanced_documents() {
        assert!(!dot_is_well_formed("digraph \"x\" {"));
        assert!(!dot_is_well_formed("digraph \"x\" {}}"));
        assert!(!dot_is_well_formed(
            "digraph \"x\" { \"a\" [label=\"unclosed];"
        ));
        assert!(dot_is_well_formed("digraph \"x\" {\n}\n"));
    }
}

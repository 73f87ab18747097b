//! Shared canonical-XML plumbing for the profile and model formats.
//!
//! Writing is hand-rolled so the canonical form is fully pinned: declaration
//! line, 2-space indentation, fixed element order (decided by the callers),
//! `<TAG/>` for empty elements, and stable escaping. Reading goes through
//! roxmltree; the readers in [`crate::profile`] and [`crate::model`] walk the
//! resulting tree.

use crate::diagnostics::{Code, Diagnostic};

pub const DECLARATION: &str = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>";

/// Escapes element text. `<`, `>`, `&` always; a literal carriage return is
/// written as a character reference so it survives the XML end-of-line
/// normalization a reparse would apply.
pub fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            _ => out.push(c),
        }
    }
    out
}

/// Escapes an attribute value. Whitespace other than a plain space is
/// written as character references so attribute-value normalization cannot
/// change it on reparse.
pub fn escape_attr(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            _ => out.push(c),
        }
    }
    out
}

/// Indented element writer producing the canonical byte form.
pub struct XmlWriter {
    buf: String,
    depth: usize,
}

impl XmlWriter {
    pub fn new() -> Self {
        let mut buf = String::new();
        buf.push_str(DECLARATION);
        buf.push('\n');
        XmlWriter { buf, depth: 0 }
    }

    fn indent(&mut self) {
        for _ in 0..self.depth {
            self.buf.push_str("  ");
        }
    }

    fn push_attrs(&mut self, attrs: &[(&str, &str)]) {
        for (k, v) in attrs {
            self.buf.push(' ');
            self.buf.push_str(k);
            self.buf.push_str("=\"");
            self.buf.push_str(&escape_attr(v));
            self.buf.push('"');
        }
    }

    /// Opens a container element; children go on their own lines.
    pub fn open(&mut self, tag: &str, attrs: &[(&str, &str)]) {
        self.indent();
        self.buf.push('<');
        self.buf.push_str(tag);
        self.push_attrs(attrs);
        self.buf.push_str(">\n");
        self.depth += 1;
    }

    pub fn close(&mut self, tag: &str) {
        self.depth -= 1;
        self.indent();
        self.buf.push_str("</");
        self.buf.push_str(tag);
        self.buf.push_str(">\n");
    }

    /// Writes `<TAG>text</TAG>` inline, or `<TAG/>` when the text is empty.
    pub fn text_element(&mut self, tag: &str, text: &str) {
        self.indent();
        if text.is_empty() {
            self.buf.push('<');
            self.buf.push_str(tag);
            self.buf.push_str("/>\n");
        } else {
            self.buf.push('<');
            self.buf.push_str(tag);
            self.buf.push('>');
            self.buf.push_str(&escape_text(text));
            self.buf.push_str("</");
            self.buf.push_str(tag);
            self.buf.push_str(">\n");
        }
    }

    /// Writes a childless element, `<TAG a="b"/>`.
    pub fn empty_element(&mut self, tag: &str, attrs: &[(&str, &str)]) {
        self.indent();
        self.buf.push('<');
        self.buf.push_str(tag);
        self.push_attrs(attrs);
        self.buf.push_str("/>\n");
    }

    pub fn finish(self) -> String {
        debug_assert_eq!(self.depth, 0, "unbalanced open/close");
        self.buf
    }
}

impl Default for XmlWriter {
    fn default() -> Self {
        XmlWriter::new()
    }
}

/// Concatenated direct text of an element (entity references already
/// resolved by the parser).
pub fn node_text(node: roxmltree::Node) -> String {
    let mut out = String::new();
    for child in node.children() {
        if child.is_text() {
            if let Some(t) = child.text() {
                out.push_str(t);
            }
        }
    }
    out
}

/// Emits a W001 warning for each element child whose tag is not in `known`.
/// Unknown sections are skipped, never an error, so documents written by a
/// newer tool still load.
pub fn warn_unknown_children(
    node: roxmltree::Node,
    known: &[&str],
    context: &str,
    warnings: &mut Vec<Diagnostic>,
) {
    for child in node.children() {
        if child.is_element() && !known.contains(&child.tag_name().name()) {
            warnings.push(
                Diagnostic::new(
                    Code::W001,
                    format!(
                        "ignoring unrecognized element '{}' inside {}",
                        child.tag_name().name(),
                        context
                    ),
                )
                .with_detail("element", child.tag_name().name())
                .with_detail("inside", context),
            );
        }
    }
}

/// First element child with the given tag.
pub fn find_child<'a, 'input>(
    node: roxmltree::Node<'a, 'input>,
    tag: &str,
) -> Option<roxmltree::Node<'a, 'input>> {
    node.children()
        .find(|c| c.is_element() && c.tag_name().name() == tag)
}

/// All element children with the given tag, in document order.
pub fn children<'a, 'input>(
    node: roxmltree::Node<'a, 'input>,
    tag: &'a str,
) -> impl Iterator<Item = roxmltree::Node<'a, 'input>> + 'a {
    node.children()
        .filter(move |c| c.is_element() && c.tag_name().name() == tag)
}

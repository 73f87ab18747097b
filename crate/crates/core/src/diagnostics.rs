//! Validation findings with stable codes.
//!
//! Codes are part of the public contract: tooling and tests match on codes,
//! never on message wording. The code alone determines the severity (`E*` is
//! an error, `W*` a warning).

use std::fmt;

use serde::Serialize;

/// The closed set of diagnostic codes.
///
/// | code | meaning |
/// |------|---------|
/// | E101 | duplicate stereotype name in a profile |
/// | E102 | unresolved profile import or unknown stereotype reference |
/// | E103 | stereotype with an empty base-class set |
/// | E104 | duplicate tag definition name within a stereotype |
/// | E105 | enum tag misconfiguration (default not in choices, or no choices) |
/// | E106 | duplicate constraint name within a stereotype |
/// | E201 | stereotype not applicable to the target's metaclass |
/// | E202 | more than one stereotype per element (strict mode) |
/// | E301 | constraint violated (evaluated to false) |
/// | E302 | constraint could not be evaluated (invalid result) |
/// | E303 | constraint produced a non-boolean value |
/// | E401 | tag value does not coerce to its declared type |
/// | E402 | tag name not declared by the stereotype |
/// | E403 | required tag (no default) missing from the application |
/// | E501 | association end names no existing element |
/// | E502 | message endpoint is not a lifeline of its diagram |
/// | E503 | duplicate message sequence number within a diagram |
/// | E504 | diagram member or lifeline names no existing element |
/// | E505 | element ownership cycle |
/// | W001 | unrecognized XML element skipped |
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[allow(clippy::upper_case_acronyms)]
pub enum Code {
    E101,
    E102,
    E103,
    E104,
    E105,
    E106,
    E201,
    E202,
    E301,
    E302,
    E303,
    E401,
    E402,
    E403,
    E501,
    E502,
    E503,
    E504,
    E505,
    W001,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::E101 => "E101",
            Code::E102 => "E102",
            Code::E103 => "E103",
            Code::E104 => "E104",
            Code::E105 => "E105",
            Code::E106 => "E106",
            Code::E201 => "E201",
            Code::E202 => "E202",
            Code::E301 => "E301",
            Code::E302 => "E302",
            Code::E303 => "E303",
            Code::E401 => "E401",
            Code::E402 => "E402",
            Code::E403 => "E403",
            Code::E501 => "E501",
            Code::E502 => "E502",
            Code::E503 => "E503",
            Code::E504 => "E504",
            Code::E505 => "E505",
            Code::W001 => "W001",
        }
    }

    /// Severity is fully determined by the code.
    pub fn severity(self) -> Severity {
        match self {
            Code::W001 => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => f.write_str("error"),
            Severity::Warning => f.write_str("warning"),
        }
    }
}

/// A single validation finding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: Code,
    /// Human-readable description. Wording may change between releases;
    /// match on [`Diagnostic::code`] instead.
    pub message: String,
    /// Id of the element, association, or diagram the finding is attached
    /// to, when there is one.
    pub element: Option<String>,
    /// Structured payload (key/value pairs such as stereotype name or
    /// expected/actual values). Empty when there is nothing structured.
    pub detail: Vec<(String, String)>,
}

impl Diagnostic {
    pub fn new(code: Code, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            message: message.into(),
            element: None,
            detail: Vec::new(),
        }
    }

    pub fn on(code: Code, element: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            message: message.into(),
            element: Some(element.into()),
            detail: Vec::new(),
        }
    }

    pub fn with_detail(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.detail.push((key.into(), value.into()));
        self
    }

    pub fn severity(&self) -> Severity {
        self.code.severity()
    }

    /// Renders the stable one-line text form: `CODE severity element: message`.
    /// Diagnostics without an element location use `-` in the element slot.
    pub fn to_line(&self) -> String {
        format!(
            "{} {} {}: {}",
            self.code,
            self.severity(),
            self.element.as_deref().unwrap_or("-"),
            self.message
        )
    }
}

/// Sorts diagnostics by (element id, code), the order reports are emitted in.
/// The sort is stable, so diagnostics sharing an element and code keep their
/// rule-emission order.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| {
        let ka = (a.element.as_deref().unwrap_or(""), a.code);
        let kb = (b.element.as_deref().unwrap_or(""), b.code);
        ka.cmp(&kb)
    });
}

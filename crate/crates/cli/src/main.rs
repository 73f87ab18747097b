//! `umlprof` — validate, lint, render, and scaffold profile-aware UML-lite
//! models.
//!
//! Exit status contract: 0 means clean, 1 means the run produced
//! error-severity diagnostics, 2 means the command itself failed (usage,
//! I/O, malformed input, unknown diagram). Machine output (JSON, DOT,
//! renderings) goes to stdout; error prose goes to stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use umlprof_core::corpus;
use umlprof_core::model::{
    parse_model, serialize_model, DiagramKind, ModelDocument, ProfileRegistry,
};
use umlprof_core::profile::{lint_profile, parse_profile, serialize_profile};
use umlprof_core::render::{render_class_diagram, render_sequence_diagram};
use umlprof_core::validator::{
    check_document, StereotypeMode, ValidationOptions, ValidationReport,
};
use umlprof_core::{Diagnostic, DisplayMode};

const STATUS_CLEAN: u8 = 0;
const STATUS_FINDINGS: u8 = 1;
const STATUS_FAILURE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "umlprof",
    version,
    about = "Profile-aware UML-lite model validator and diagram renderer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a model against its imported profiles
    Validate {
        /// Model XML file
        model: PathBuf,
        /// Profile XML file to load into the registry (repeatable)
        #[arg(long = "profile", value_name = "PATH")]
        profiles: Vec<PathBuf>,
        /// Stereotype policy: strict mirrors StarUML's one-per-element rule
        #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Parse a profile and report consistency findings
    ProfileLint {
        /// Profile XML file
        profile: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Render one diagram of a model to stdout
    Render {
        /// Model XML file
        model: PathBuf,
        /// Profile XML file to load into the registry (repeatable)
        #[arg(long = "profile", value_name = "PATH")]
        profiles: Vec<PathBuf>,
        /// Id of the diagram to render
        #[arg(long, value_name = "ID")]
        diagram: String,
        /// Stereotype display mode
        #[arg(long, value_enum, default_value_t = DisplayArg::Textual)]
        display: DisplayArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Write the starter profile and reference models into a directory
    Init {
        /// Target directory (created if missing; existing files are never
        /// overwritten)
        directory: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Uml2,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum DisplayArg {
    Textual,
    Iconic,
    Decoration,
}

impl From<DisplayArg> for DisplayMode {
    fn from(arg: DisplayArg) -> Self {
        match arg {
            DisplayArg::Textual => DisplayMode::Textual,
            DisplayArg::Iconic => DisplayMode::Iconic,
            DisplayArg::Decoration => DisplayMode::Decoration,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match cli.command {
        Command::Validate {
            model,
            profiles,
            mode,
            format,
        } => cmd_validate(&model, &profiles, mode, format),
        Command::ProfileLint { profile, format } => cmd_profile_lint(&profile, format),
        Command::Render {
            model,
            profiles,
            diagram,
            display,
            format,
        } => cmd_render(&model, &profiles, &diagram, display.into(), format),
        Command::Init { directory } => cmd_init(&directory),
    };
    ExitCode::from(status)
}

/// Reads and parses every `--profile` into a registry, collecting parse
/// warnings. Any failure is fatal (status 2).
fn load_registry(paths: &[PathBuf]) -> Result<(ProfileRegistry, Vec<Diagnostic>), String> {
    let mut registry = ProfileRegistry::new();
    let mut warnings = Vec::new();
    for path in paths {
        let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let parsed = parse_profile(&bytes).map_err(|e| format!("{}: {e}", path.display()))?;
        warnings.extend(parsed.warnings);
        registry.insert(parsed.profile);
    }
    Ok((registry, warnings))
}

fn load_model(path: &Path) -> Result<(ModelDocument, Vec<Diagnostic>), String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let parsed = parse_model(&bytes).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((parsed.document, parsed.warnings))
}

/// Exit status is a function of the diagnostic multiset and the options:
/// any error-severity diagnostic (or any warning under fail-on-warning)
/// means findings.
fn status_for(report: &ValidationReport, fail_on_warning: bool) -> u8 {
    if report.has_errors() || (fail_on_warning && report.warnings > 0) {
        STATUS_FINDINGS
    } else {
        STATUS_CLEAN
    }
}

fn emit_report(report: &ValidationReport, format: FormatArg, fail_on_warning: bool) -> u8 {
    match format {
        FormatArg::Text => print!("{}", report.to_text()),
        FormatArg::Json => println!("{}", report.to_json()),
    }
    status_for(report, fail_on_warning)
}

fn fail(message: String) -> u8 {
    eprintln!("umlprof: {message}");
    STATUS_FAILURE
}

fn cmd_validate(
    model_path: &Path,
    profile_paths: &[PathBuf],
    mode: ModeArg,
    format: FormatArg,
) -> u8 {
    let (registry, mut diagnostics) = match load_registry(profile_paths) {
        Ok(loaded) => loaded,
        Err(message) => return fail(message),
    };
    let (document, model_warnings) = match load_model(model_path) {
        Ok(loaded) => loaded,
        Err(message) => return fail(message),
    };
    diagnostics.extend(model_warnings);
    let options = ValidationOptions {
        stereotype_mode: match mode {
            ModeArg::Strict => StereotypeMode::Strict,
            ModeArg::Uml2 => StereotypeMode::Uml2,
        },
        fail_on_warning: false,
    };
    let report = check_document(&document, &registry, &options);
    diagnostics.extend(report.diagnostics);
    emit_report(
        &ValidationReport::from_diagnostics(diagnostics),
        format,
        options.fail_on_warning,
    )
}

fn cmd_profile_lint(profile_path: &Path, format: FormatArg) -> u8 {
    let bytes = match std::fs::read(profile_path) {
        Ok(bytes) => bytes,
        Err(e) => return fail(format!("{}: {e}", profile_path.display())),
    };
    let parsed = match parse_profile(&bytes) {
        Ok(parsed) => parsed,
        Err(e) => return fail(format!("{}: {e}", profile_path.display())),
    };
    let mut diagnostics = parsed.warnings;
    diagnostics.extend(lint_profile(&parsed.profile));
    emit_report(
        &ValidationReport::from_diagnostics(diagnostics),
        format,
        false,
    )
}

fn cmd_render(
    model_path: &Path,
    profile_paths: &[PathBuf],
    diagram_id: &str,
    mode: DisplayMode,
    format: FormatArg,
) -> u8 {
    let (registry, _) = match load_registry(profile_paths) {
        Ok(loaded) => loaded,
        Err(message) => return fail(message),
    };
    let (document, _) = match load_model(model_path) {
        Ok(loaded) => loaded,
        Err(message) => return fail(message),
    };
    let Some(diagram) = document.diagram(diagram_id) else {
        return fail(format!(
            "{}: no diagram with id '{diagram_id}'",
            model_path.display()
        ));
    };
    let kind = diagram.kind;
    let resolved = umlprof_core::model::resolve(&document, &registry);
    let rendered = match kind {
        DiagramKind::Class => render_class_diagram(&resolved, diagram_id, mode),
        DiagramKind::Sequence => render_sequence_diagram(&resolved, diagram_id, mode),
    };
    match rendered {
        Ok(content) => {
            match format {
                FormatArg::Text => print!("{content}"),
                FormatArg::Json => {
                    let wrapped = serde_json::json!({
                        "diagram": diagram_id,
                        "kind": kind.as_str(),
                        "display": mode.as_str(),
                        "content": content,
                    });
                    println!("{wrapped:#}");
                }
            }
            STATUS_CLEAN
        }
        Err(e) => fail(format!("{}: {e}", model_path.display())),
    }
}

fn cmd_init(directory: &Path) -> u8 {
    let files = [
        (
            "mia_profile.xml",
            serialize_profile(&corpus::builtin_profile()),
        ),
        (
            "class_model.xml",
            serialize_model(&corpus::builtin_class_model()),
        ),
        (
            "sequence_model.xml",
            serialize_model(&corpus::builtin_sequence_model()),
        ),
    ];
    if let Err(e) = std::fs::create_dir_all(directory) {
        return fail(format!("{}: {e}", directory.display()));
    }
    // Scaffolding is non-destructive: refuse if anything is in the way.
    for (name, _) in &files {
        let path = directory.join(name);
        if path.exists() {
            return fail(format!(
                "{} already exists; not overwriting",
                path.display()
            ));
        }
    }
    for (name, content) in &files {
        let path = directory.join(name);
        if let Err(e) = std::fs::write(&path, content) {
            return fail(format!("{}: {e}", path.display()));
        }
        println!("wrote {}", path.display());
    }
    STATUS_CLEAN
}

#[cfg(test)]
mod tests {
    use super::*;
    use umlprof_core::{Code, Diagnostic};

    fn report_of(codes: &[Code]) -> ValidationReport {
        ValidationReport::from_diagnostics(
            codes
                .iter()
                .map(|c| Diagnostic::new(*c, "synthesized"))
                .collect(),
        )
    }

    #[test]
    fn status_mapping_over_synthesized_reports() {
        assert_eq!(status_for(&report_of(&[]), false), STATUS_CLEAN);
        assert_eq!(status_for(&report_of(&[]), true), STATUS_CLEAN);
        assert_eq!(status_for(&report_of(&[Code::W001]), false), STATUS_CLEAN);
        assert_eq!(status_for(&report_of(&[Code::W001]), true), STATUS_FINDINGS);
        assert_eq!(
            status_for(&report_of(&[Code::E201]), false),
            STATUS_FINDINGS
        );
        assert_eq!(
            status_for(&report_of(&[Code::E201, Code::W001]), false),
            STATUS_FINDINGS
        );
        assert_eq!(
            status_for(&report_of(&[Code::W001, Code::W001, Code::E503]), false),
            STATUS_FINDINGS
        );
    }
}

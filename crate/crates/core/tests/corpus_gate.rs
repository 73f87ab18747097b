//! Corpus self-consistency: the builtin profile lints clean, both builtin
//! models validate clean in strict mode, every mutation produces exactly
//! its declared codes, the applicability sweep matches the independent
//! reachability oracle, and the shipped corpus XML files are byte-equal to
//! the serialized builtins.

use std::collections::BTreeSet;
use std::path::PathBuf;

use umlprof_core::corpus::{
    builtin_class_model, builtin_profile, builtin_registry, builtin_sequence_model, mutation_suite,
};
use umlprof_core::metamodel::MetaClass;
use umlprof_core::model::{
    resolve, serialize_model, ModelDocument, ModelElement, StereotypeApplication,
};
use umlprof_core::profile::{lint_profile, serialize_profile};
use umlprof_core::testutil::{reachability_oracle, TestRng, STANDARD_EDGES};
use umlprof_core::validator::{check_applicability, check_document, ValidationOptions};
use umlprof_core::Code;

#[test]
fn corpus_is_self_consistent() {
    assert!(lint_profile(&builtin_profile()).is_empty());
    let registry = builtin_registry();
    for model in [builtin_class_model(), builtin_sequence_model()] {
        let report = check_document(&model, &registry, &ValidationOptions::default());
        assert!(report.is_clean(), "{}:\n{}", model.name, report.to_text());
    }
    for fixture in mutation_suite() {
        assert_eq!(
            fixture.observed_codes(),
            fixture.expected_codes,
            "mutation '{}' diverged",
            fixture.name
        );
    }
}

#[test]
fn applicability_sweep_matches_reachability_oracle() {
    let profile = builtin_profile();
    let registry = builtin_registry();
    let oracle = reachability_oracle(STANDARD_EDGES);
    let mut cases = 0;
    for stereotype in &profile.stereotypes {
        for metaclass in MetaClass::ALL {
            let model = ModelDocument {
                name: "probe".into(),
                imports: vec![profile.name.clone()],
                elements: vec![ModelElement {
                    id: "probe".into(),
                    metaclass,
                    name: "Probe".into(),
                    owner: None,
                    attributes: Vec::new(),
                    applications: vec![StereotypeApplication {
                        profile: profile.name.clone(),
                        stereotype: stereotype.name.clone(),
                        tags: Default::default(),
                    }],
                }],
                associations: Vec::new(),
                diagrams: Vec::new(),
            };
            let resolved = resolve(&model, &registry);
            let fired = check_applicability(&resolved)
                .iter()
                .filter(|d| d.code == Code::E201)
                .count();
            let applicable = stereotype
                .base_classes
                .iter()
                .any(|base| oracle.contains(&(metaclass, *base)));
            assert_eq!(
                fired == 0,
                applicable,
                "sweep mismatch for «{}» on {}",
                stereotype.name,
                metaclass
            );
            cases += 1;
        }
    }
    assert_eq!(cases, 77);
}

#[test]
fn mutation_suite_covers_the_required_codes() {
    let suite = mutation_suite();
    assert!(
        suite.len() >= 10,
        "suite has only {} mutations",
        suite.len()
    );
    let covered: BTreeSet<Code> = suite
        .iter()
        .flat_map(|f| f.expected_codes.clone())
        .collect();
    for code in [
        Code::E101,
        Code::E102,
        Code::E201,
        Code::E202,
        Code::E301,
        Code::E302,
        Code::E401,
        Code::E402,
        Code::E501,
        Code::E503,
    ] {
        assert!(
            covered.contains(&code),
            "{code} not covered by any mutation"
        );
    }
}

#[test]
fn validation_never_panics_on_corrupted_documents() {
    // Every failure mode must come back as a diagnostic, even on documents
    // whose references have been scrambled.
    let registries = [builtin_registry(), umlprof_core::model::ProfileRegistry::new()];
    let mut rng = TestRng::new(0xC4A05);
    for round in 0..60 {
        let mut model = umlprof_core::testutil::gen_model(&mut rng);
        model.imports.push("MedicalImageAnnotation".into());
        // Scramble a few references.
        if let Some(association) = model.associations.first_mut() {
            association.target = "ghost".into();
        }
        if let Some(element) = model.elements.first_mut() {
            element.owner = Some(element.id.clone());
            element.applications.push(StereotypeApplication {
                profile: "MedicalImageAnnotation".into(),
                stereotype: if round % 2 == 0 { "Annotation" } else { "NoSuch" }.into(),
                tags: [("color".to_string(), "red".to_string())].into_iter().collect(),
            });
        }
        if let Some(diagram) = model.diagrams.first_mut() {
            diagram.members.push("ghost".into());
            diagram.lifelines.push("ghost".into());
        }
        for registry in &registries {
            let report = check_document(&model, registry, &ValidationOptions::default());
            assert_eq!(report.errors + report.warnings, report.diagnostics.len());
        }
    }
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

#[test]
fn shipped_corpus_files_match_the_builtins_byte_for_byte() {
    for (file, expected) in [
        ("mia_profile.xml", serialize_profile(&builtin_profile())),
        ("class_model.xml", serialize_model(&builtin_class_model())),
        (
            "sequence_model.xml",
            serialize_model(&builtin_sequence_model()),
        ),
    ] {
        let path = corpus_dir().join(file);
        let on_disk = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
        assert_eq!(
            on_disk, expected,
            "{file} is out of date with the builtin corpus"
        );
    }
}

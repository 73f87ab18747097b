//! Built-in Medical Image Annotation corpus.
//!
//! Ships the profile (five class-diagram stereotypes plus the two
//! sequence-diagram object stereotypes), a reference class model of the
//! annotation domain, the annotator-workflow sequence model, and a suite of
//! named mutations with their expected diagnostic codes. The corpus is the
//! self-test bed: the profile lints clean, both models validate clean in
//! strict mode, and every mutation produces exactly its declared codes.

use std::collections::BTreeSet;

use crate::constraint::parse_constraint;
use crate::diagnostics::Code;
use crate::metamodel::MetaClass;
use crate::model::{
    Association, Diagram, DiagramKind, Message, MessageKind, ModelDocument, ModelElement,
    ProfileRegistry, StereotypeApplication,
};
use crate::profile::{lint_profile, ConstraintDef, Profile, Stereotype, TagDefinition, TagType};
use crate::validator::{check_document, ValidationOptions};

fn stereotype(
    name: &str,
    description: &str,
    base: MetaClass,
    icon: &str,
    tag_defs: Vec<TagDefinition>,
    constraints: Vec<(&str, &str)>,
) -> Stereotype {
    Stereotype {
        name: name.to_string(),
        description: description.to_string(),
        base_classes: BTreeSet::from([base]),
        icon: Some(icon.to_string()),
        tag_defs,
        constraints: constraints
            .into_iter()
            .map(|(name, source)| ConstraintDef {
                name: name.to_string(),
                source_text: source.to_string(),
                compiled: parse_constraint(source).expect("corpus constraints parse"),
            })
            .collect(),
    }
}

/// The Medical Image Annotation profile: Annotation, MedicalImage,
/// Annotator, Patient, and KeyWords extend `UMLClass`; Interface and
/// Controller extend `UMLObject`.
pub fn builtin_profile() -> Profile {
    Profile {
        name: "MedicalImageAnnotation".into(),
        display_name: "MedicalImageAnnotation".into(),
        description: "Medical Image Annotation conceptual modeling".into(),
        version: "1.0".into(),
        stereotypes: vec![
            stereotype(
                "Annotation",
                "This stereotype indicates that the class represents the annotation",
                MetaClass::Class,
                "ann16",
                vec![TagDefinition {
                    name: "reviewed".into(),
                    value_type: TagType::Bool,
                    enum_choices: Vec::new(),
                    default: Some("false".into()),
                }],
                vec![
                    ("atLeastOneKeyword", "self.keywords->size() >= 1"),
                    ("exactlyOneImage", "self.nav('image')->size() = 1"),
                ],
            ),
            stereotype(
                "MedicalImage",
                "This stereotype indicates that the class represents the image for the annotation",
                MetaClass::Class,
                "img16",
                vec![TagDefinition {
                    name: "modality".into(),
                    value_type: TagType::Enum,
                    enum_choices: vec!["XRay".into(), "MRI".into(), "CT".into(), "Ultrasound".into()],
                    default: Some("XRay".into()),
                }],
                Vec::new(),
            ),
            stereotype(
                "Annotator",
                "This stereotype indicates that the class represents the annotator of medical image",
                MetaClass::Class,
                "atr16",
                Vec::new(),
                Vec::new(),
            ),
            stereotype(
                "Patient",
                "This stereotype indicates that the class represents the patient",
                MetaClass::Class,
                "pat16",
                Vec::new(),
                Vec::new(),
            ),
            stereotype(
                "KeyWords",
                "This stereotype indicates that the class represents the key words of annotation",
                MetaClass::Class,
                "kw16",
                Vec::new(),
                Vec::new(),
            ),
            stereotype(
                "Interface",
                "This stereotype indicates that the Interface.",
                MetaClass::Object,
                "if16",
                vec![TagDefinition {
                    name: "view".into(),
                    value_type: TagType::String,
                    enum_choices: Vec::new(),
                    default: Some("MainView".into()),
                }],
                Vec::new(),
            ),
            stereotype(
                "Controller",
                "This stereotype indicates that the controller.",
                MetaClass::Object,
                "ctl16",
                Vec::new(),
                Vec::new(),
            ),
        ],
    }
}

fn apply(stereotype: &str, tags: &[(&str, &str)]) -> StereotypeApplication {
    StereotypeApplication {
        profile: "MedicalImageAnnotation".into(),
        stereotype: stereotype.into(),
        tags: tags
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect(),
    }
}

fn class_element(
    id: &str,
    name: &str,
    attrs: &[(&str, &str)],
    stereo: &str,
    tags: &[(&str, &str)],
) -> ModelElement {
    ModelElement {
        id: id.into(),
        metaclass: MetaClass::Class,
        name: name.into(),
        owner: None,
        attributes: attrs
            .iter()
            .map(|(n, t)| (n.to_string(), t.to_string()))
            .collect(),
        applications: vec![apply(stereo, tags)],
    }
}

/// The reference class model: five stereotyped classes with the annotation
/// linked to its image, keywords, and annotator, and the image to its
/// patient. Association roles and multiplicities are corpus choices.
pub fn builtin_class_model() -> ModelDocument {
    let association = |id: &str,
                       source: &str,
                       target: &str,
                       source_role: &str,
                       source_mult: &str,
                       target_role: &str,
                       target_mult: &str| Association {
        id: id.into(),
        source: source.into(),
        target: target.into(),
        source_role: source_role.into(),
        target_role: target_role.into(),
        source_mult: source_mult.into(),
        target_mult: target_mult.into(),
        applications: Vec::new(),
    };

    ModelDocument {
        name: "AnnotationClassModel".into(),
        imports: vec!["MedicalImageAnnotation".into()],
        elements: vec![
            class_element(
                "annotation",
                "Annotation",
                &[("text", "String"), ("createdAt", "Date")],
                "Annotation",
                &[],
            ),
            class_element(
                "medicalimage",
                "MedicalImage",
                &[("uri", "String")],
                "MedicalImage",
                &[("modality", "MRI")],
            ),
            class_element(
                "annotator",
                "Annotator",
                &[("fullName", "String")],
                "Annotator",
                &[],
            ),
            class_element(
                "patient",
                "Patient",
                &[("patientId", "String")],
                "Patient",
                &[],
            ),
            class_element(
                "keywords",
                "KeyWords",
                &[("word", "String")],
                "KeyWords",
                &[],
            ),
        ],
        associations: vec![
            association(
                "a1",
                "annotation",
                "medicalimage",
                "annotations",
                "0..*",
                "image",
                "1..1",
            ),
            association(
                "a2",
                "annotation",
                "keywords",
                "annotation",
                "1",
                "keywords",
                "1..*",
            ),
            association(
                "a3",
                "annotation",
                "annotator",
                "annotations",
                "0..*",
                "annotator",
                "1..1",
            ),
            association(
                "a4",
                "medicalimage",
                "patient",
                "images",
                "0..*",
                "patient",
                "1..1",
            ),
        ],
        diagrams: vec![Diagram {
            id: "d1".into(),
            kind: DiagramKind::Class,
            members: vec![
                "annotation".into(),
                "medicalimage".into(),
                "annotator".into(),
                "patient".into(),
                "keywords".into(),
            ],
            lifelines: Vec::new(),
            messages: Vec::new(),
        }],
    }
}

/// The annotator-workflow sequence model: the annotator sends a query
/// image, the controller computes distances over the image store, results
/// come back for the annotator to pick from, and the chosen annotation is
/// stored.
pub fn builtin_sequence_model() -> ModelDocument {
    let object = |id: &str, name: &str, applications: Vec<StereotypeApplication>| ModelElement {
        id: id.into(),
        metaclass: MetaClass::Object,
        name: name.into(),
        owner: None,
        attributes: Vec::new(),
        applications,
    };
    let message = |seq: u32, from: &str, to: &str, label: &str, kind: MessageKind| Message {
        seq,
        from: from.into(),
        to: to.into(),
        label: label.into(),
        kind,
    };

    ModelDocument {
        name: "AnnotationSequenceModel".into(),
        imports: vec!["MedicalImageAnnotation".into()],
        elements: vec![
            object("annotator", "Annotator", Vec::new()),
            object(
                "searchui",
                "SearchUI",
                vec![apply("Interface", &[("view", "SearchView")])],
            ),
            object(
                "controller",
                "AnnotationController",
                vec![apply("Controller", &[])],
            ),
            object("imagestore", "ImageStore", Vec::new()),
        ],
        associations: Vec::new(),
        diagrams: vec![Diagram {
            id: "d1".into(),
            kind: DiagramKind::Sequence,
            members: Vec::new(),
            lifelines: vec![
                "annotator".into(),
                "searchui".into(),
                "controller".into(),
                "imagestore".into(),
            ],
            messages: vec![
                message(
                    1,
                    "annotator",
                    "searchui",
                    "sendQueryImage",
                    MessageKind::Call,
                ),
                message(
                    2,
                    "searchui",
                    "controller",
                    "consultImageTable",
                    MessageKind::Call,
                ),
                message(
                    3,
                    "controller",
                    "imagestore",
                    "computeDistance",
                    MessageKind::Call,
                ),
                message(
                    4,
                    "controller",
                    "searchui",
                    "displayImagesWithDescriptions",
                    MessageKind::Return,
                ),
                message(
                    5,
                    "annotator",
                    "searchui",
                    "chooseSimilarImage",
                    MessageKind::Call,
                ),
                message(
                    6,
                    "searchui",
                    "controller",
                    "storeAnnotation",
                    MessageKind::Call,
                ),
            ],
        }],
    }
}

/// Registry preloaded with the built-in profile.
pub fn builtin_registry() -> ProfileRegistry {
    [builtin_profile()].into_iter().collect()
}

/// A named (profile, model) pair with the exact diagnostic codes it must
/// produce under profile lint plus strict-mode document validation.
#[derive(Debug, Clone)]
pub struct MutationFixture {
    pub name: &'static str,
    pub profile: Profile,
    pub model: ModelDocument,
    /// Expected code multiset, sorted.
    pub expected_codes: Vec<Code>,
}

impl MutationFixture {
    /// Lints the fixture profile and validates the fixture model against
    /// it in strict mode; returns the observed code multiset, sorted.
    pub fn observed_codes(&self) -> Vec<Code> {
        let mut codes: Vec<Code> = lint_profile(&self.profile).iter().map(|d| d.code).collect();
        let registry: ProfileRegistry = [self.profile.clone()].into_iter().collect();
        let report = check_document(&self.model, &registry, &ValidationOptions::default());
        codes.extend(report.diagnostics.iter().map(|d| d.code));
        codes.sort();
        codes
    }
}

/// The mutation suite. Each entry mutates the builtin profile and/or one
/// builtin model and declares the exact codes the toolchain must report.
pub fn mutation_suite() -> Vec<MutationFixture> {
    let mut fixtures = Vec::new();
    let fixture =
        |name: &'static str, profile: Profile, model: ModelDocument, expected: &[Code]| {
            let mut expected_codes = expected.to_vec();
            expected_codes.sort();
            MutationFixture {
                name,
                profile,
                model,
                expected_codes,
            }
        };

    fixtures.push(fixture(
        "identity",
        builtin_profile(),
        builtin_class_model(),
        &[],
    ));

    let mut profile = builtin_profile();
    let duplicate = profile.stereotypes[0].clone();
    profile.stereotypes.push(duplicate);
    fixtures.push(fixture(
        "duplicate-stereotype-name",
        profile,
        builtin_class_model(),
        &[Code::E101],
    ));

    let mut model = builtin_class_model();
    model.imports.push("NoSuchProfile".into());
    fixtures.push(fixture(
        "import-unknown-profile",
        builtin_profile(),
        model,
        &[Code::E102],
    ));

    let mut model = builtin_class_model();
    model.elements[0].applications = vec![apply("Interface", &[])];
    fixtures.push(fixture(
        "interface-on-class",
        builtin_profile(),
        model,
        &[Code::E201],
    ));

    let mut model = builtin_class_model();
    model.elements[0].applications.push(apply("Patient", &[]));
    fixtures.push(fixture(
        "double-stereotype",
        builtin_profile(),
        model,
        &[Code::E202],
    ));

    let mut model = builtin_class_model();
    model.associations.retain(|a| a.id != "a2");
    fixtures.push(fixture(
        "remove-keywords-association",
        builtin_profile(),
        model,
        &[Code::E301],
    ));

    let mut profile = builtin_profile();
    profile.stereotypes[0].constraints.push(ConstraintDef {
        name: "neverEvaluates".into(),
        source_text: "1 / 0 = 1".into(),
        compiled: parse_constraint("1 / 0 = 1").expect("fixture constraint parses"),
    });
    fixtures.push(fixture(
        "division-by-zero-constraint",
        profile,
        builtin_class_model(),
        &[Code::E302],
    ));

    let mut model = builtin_class_model();
    model.elements[0].applications[0]
        .tags
        .insert("reviewed".into(), "maybe".into());
    fixtures.push(fixture(
        "bad-bool-tag",
        builtin_profile(),
        model,
        &[Code::E401],
    ));

    let mut model = builtin_class_model();
    model.elements[0].applications[0]
        .tags
        .insert("color".into(), "red".into());
    fixtures.push(fixture(
        "unknown-tag",
        builtin_profile(),
        model,
        &[Code::E402],
    ));

    let mut profile = builtin_profile();
    profile
        .stereotypes
        .iter_mut()
        .find(|s| s.name == "Interface")
        .expect("Interface stereotype exists")
        .tag_defs[0]
        .default = None;
    let mut model = builtin_sequence_model();
    model.elements[1].applications[0].tags.clear();
    fixtures.push(fixture(
        "missing-required-tag",
        profile,
        model,
        &[Code::E403],
    ));

    let mut model = builtin_class_model();
    model.associations[3].target = "ghost".into();
    fixtures.push(fixture(
        "dangling-association-end",
        builtin_profile(),
        model,
        &[Code::E501],
    ));

    let mut model = builtin_sequence_model();
    model.diagrams[0].lifelines.retain(|l| l != "imagestore");
    fixtures.push(fixture(
        "message-endpoint-not-lifeline",
        builtin_profile(),
        model,
        &[Code::E502],
    ));

    let mut model = builtin_sequence_model();
    model.diagrams[0].messages[4].seq = 2;
    fixtures.push(fixture(
        "duplicate-message-seq",
        builtin_profile(),
        model,
        &[Code::E503],
    ));

    let mut model = builtin_class_model();
    model.diagrams[0].members.push("ghost".into());
    fixtures.push(fixture(
        "unknown-diagram-member",
        builtin_profile(),
        model,
        &[Code::E504],
    ));

    let mut model = builtin_class_model();
    model.elements[0].owner = Some("medicalimage".into());
    model.elements[1].owner = Some("annotation".into());
    fixtures.push(fixture(
        "owner-cycle",
        builtin_profile(),
        model,
        &[Code::E505],
    ));

    fixtures
}

//! Binding stereotype applications to their profile definitions.
//!
//! Resolution is total: it never aborts. Unresolved imports and unknown
//! stereotype references become E102 diagnostics on the result, and the
//! affected applications simply stay unbound.

use std::collections::{BTreeMap, HashMap};

use super::{ModelDocument, ModelElement, StereotypeApplication};
use crate::diagnostics::{Code, Diagnostic};
use crate::metamodel::MetaClass;
use crate::profile::{Profile, Stereotype};

/// Profiles addressable by name. Lookup is by name only, so results never
/// depend on insertion order.
#[derive(Debug, Clone, Default)]
pub struct ProfileRegistry {
    profiles: BTreeMap<String, Profile>,
}

impl ProfileRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a profile under its own name, replacing any previous
    /// profile with that name.
    pub fn insert(&mut self, profile: Profile) -> Option<Profile> {
        self.profiles.insert(profile.name.clone(), profile)
    }

    pub fn get(&self, name: &str) -> Option<&Profile> {
        self.profiles.get(name)
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Profile> {
        self.profiles.values()
    }
}

impl FromIterator<Profile> for ProfileRegistry {
    fn from_iter<T: IntoIterator<Item = Profile>>(iter: T) -> Self {
        let mut registry = ProfileRegistry::new();
        for profile in iter {
            registry.insert(profile);
        }
        registry
    }
}

/// One stereotype-application target: an element or an association.
/// Associations validate under the `UMLAssociation` metaclass.
#[derive(Debug, Clone, Copy)]
pub struct TargetRef<'a> {
    pub id: &'a str,
    pub metaclass: MetaClass,
    pub applications: &'a [StereotypeApplication],
}

/// A model document with every resolvable stereotype application bound to
/// its definition.
#[derive(Debug, Clone)]
pub struct ResolvedModel<'a> {
    pub document: &'a ModelDocument,
    /// E102 diagnostics gathered during resolution.
    pub diagnostics: Vec<Diagnostic>,
    bindings: HashMap<(String, usize), &'a Stereotype>,
}

impl<'a> ResolvedModel<'a> {
    pub fn element(&self, id: &str) -> Option<&'a ModelElement> {
        self.document.elements.iter().find(|e| e.id == id)
    }

    pub fn association(&self, id: &str) -> Option<&'a super::Association> {
        self.document.associations.iter().find(|a| a.id == id)
    }

    /// The stereotype definition bound to application `index` of the
    /// element or association `target_id`, when resolution succeeded.
    pub fn binding(&self, target_id: &str, index: usize) -> Option<&'a Stereotype> {
        self.bindings.get(&(target_id.to_string(), index)).copied()
    }

    /// All application targets: elements in document order, then
    /// associations in document order.
    pub fn targets(&self) -> impl Iterator<Item = TargetRef<'a>> + '_ {
        let elements = self.document.elements.iter().map(|e| TargetRef {
            id: &e.id,
            metaclass: e.metaclass,
            applications: &e.applications,
        });
        let associations = self.document.associations.iter().map(|a| TargetRef {
            id: &a.id,
            metaclass: MetaClass::Association,
            applications: &a.applications,
        });
        elements.chain(associations)
    }

    /// Elements reachable from `from_id` over associations whose far-end
    /// role is `role`, ascending by element id. Unknown roles yield an
    /// empty collection, and an end naming a nonexistent element is
    /// skipped; both are deliberate so constraint navigation stays total.
    pub fn navigate(&self, from_id: &str, role: &str) -> Vec<&'a ModelElement> {
        let mut found: Vec<&ModelElement> = Vec::new();
        for association in &self.document.associations {
            if association.source == from_id && association.target_role == role {
                if let Some(element) = self.element(&association.target) {
                    found.push(element);
                }
            }
            if association.target == from_id && association.source_role == role {
                if let Some(element) = self.element(&association.source) {
                    found.push(element);
                }
            }
        }
        found.sort_by(|a, b| a.id.cmp(&b.id));
        found
    }
}

/// Binds every stereotype application in `document` against the imported
/// profiles in `registry`. Applications must name an imported profile;
/// referencing a profile that is in the registry but not imported is an
/// E102 like any other unknown profile.
pub fn resolve<'a>(
    document: &'a ModelDocument,
    registry: &'a ProfileRegistry,
) -> ResolvedModel<'a> {
    let mut diagnostics = Vec::new();
    let mut imported: BTreeMap<&str, &Profile> = BTreeMap::new();

    for import in &document.imports {
        match registry.get(import) {
            Some(profile) => {
                imported.insert(import.as_str(), profile);
            }
            None => diagnostics.push(
                Diagnostic::new(Code::E102, format!("import of unknown profile '{import}'"))
                    .with_detail("profile", import),
            ),
        }
    }

    let mut bindings: HashMap<(String, usize), &Stereotype> = HashMap::new();
    {
        let mut bind_target = |id: &str, applications: &[StereotypeApplication]| {
            for (index, application) in applications.iter().enumerate() {
                match imported.get(application.profile.as_str()) {
                    None => diagnostics.push(
                        Diagnostic::on(
                            Code::E102,
                            id,
                            format!(
                                "application of '{}::{}' references a profile that is not imported or not loaded",
                                application.profile, application.stereotype
                            ),
                        )
                        .with_detail("profile", &application.profile)
                        .with_detail("stereotype", &application.stereotype),
                    ),
                    Some(profile) => match profile.stereotype(&application.stereotype) {
                        Some(stereotype) => {
                            bindings.insert((id.to_string(), index), stereotype);
                        }
                        None => diagnostics.push(
                            Diagnostic::on(
                                Code::E102,
                                id,
                                format!(
                                    "profile '{}' defines no stereotype '{}'",
                                    application.profile, application.stereotype
                                ),
                            )
                            .with_detail("profile", &application.profile)
                            .with_detail("stereotype", &application.stereotype),
                        ),
                    },
                }
            }
        };
        for element in &document.elements {
            bind_target(&element.id, &element.applications);
        }
        for association in &document.associations {
            bind_target(&association.id, &association.applications);
        }
    }

    ResolvedModel {
        document,
        diagnostics,
        bindings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn corpus_model_resolves_without_diagnostics() {
        let profile = corpus::builtin_profile();
        let registry: ProfileRegistry = [profile].into_iter().collect();
        let model = corpus::builtin_class_model();
        let resolved = resolve(&model, &registry);
        assert!(resolved.diagnostics.is_empty());
        for (i, element) in model.elements.iter().enumerate() {
            assert!(
                resolved.binding(&element.id, 0).is_some(),
                "element {i} ({}) should be bound",
                element.id
            );
        }
    }

    #[test]
    fn unknown_import_is_a_single_e102() {
        let mut model = corpus::builtin_class_model();
        model.imports = vec!["NoSuchProfile".into()];
        let registry = ProfileRegistry::new();
        let resolved = resolve(&model, &registry);
        // One for the import, one per application now lacking its profile.
        assert!(resolved.diagnostics.iter().all(|d| d.code == Code::E102));
        assert_eq!(resolved.diagnostics[0].element, None);

        let model = ModelDocument {
            imports: vec!["NoSuchProfile".into()],
            ..ModelDocument::default()
        };
        let resolved = resolve(&model, &registry);
        assert_eq!(resolved.diagnostics.len(), 1);
        assert_eq!(resolved.diagnostics[0].code, Code::E102);
    }

    #[test]
    fn empty_model_resolves_clean_against_empty_registry() {
        let model = ModelDocument::default();
        let registry = ProfileRegistry::new();
        assert!(resolve(&model, &registry).diagnostics.is_empty());
    }

    #[test]
    fn unknown_stereotype_name_is_reported_on_the_element() {
        let profile = corpus::builtin_profile();
        let registry: ProfileRegistry = [profile].into_iter().collect();
        let mut model = corpus::builtin_class_model();
        model.elements[0].applications[0].stereotype = "NoSuchStereotype".into();
        let resolved = resolve(&model, &registry);
        assert_eq!(resolved.diagnostics.len(), 1);
        assert_eq!(resolved.diagnostics[0].code, Code::E102);
        assert_eq!(
            resolved.diagnostics[0].element.as_deref(),
            Some("annotation")
        );
        assert!(resolved.binding("annotation", 0).is_none());
    }

    #[test]
    fn registry_profile_not_imported_is_not_visible() {
        let profile = corpus::builtin_profile();
        let registry: ProfileRegistry = [profile].into_iter().collect();
        let mut model = corpus::builtin_class_model();
        model.imports.clear();
        let resolved = resolve(&model, &registry);
        assert_eq!(resolved.diagnostics.len(), model.elements.len());
        assert!(resolved.diagnostics.iter().all(|d| d.code == Code::E102));
    }

    #[test]
    fn resolution_ignores_registry_insertion_order() {
        let mut other = corpus::builtin_profile();
        other.name = "OtherProfile".into();
        let forward: ProfileRegistry = [corpus::builtin_profile(), other.clone()]
            .into_iter()
            .collect();
        let backward: ProfileRegistry = [other, corpus::builtin_profile()].into_iter().collect();
        let model = corpus::builtin_class_model();
        let a = resolve(&model, &forward);
        let b = resolve(&model, &backward);
        assert_eq!(a.diagnostics, b.diagnostics);
        for element in &model.elements {
            assert_eq!(
                a.binding(&element.id, 0).map(|s| &s.name),
                b.binding(&element.id, 0).map(|s| &s.name)
            );
        }
    }

    #[test]
    fn navigation_follows_far_end_roles_both_ways() {
        let model = corpus::builtin_class_model();
        let registry: ProfileRegistry = [corpus::builtin_profile()].into_iter().collect();
        let resolved = resolve(&model, &registry);
        let images: Vec<_> = resolved
            .navigate("annotation", "image")
            .iter()
            .map(|e| e.id.clone())
            .collect();
        assert_eq!(images, vec!["medicalimage"]);
        let back: Vec<_> = resolved
            .navigate("medicalimage", "annotations")
            .iter()
            .map(|e| e.id.clone())
            .collect();
        assert_eq!(back, vec!["annotation"]);
        assert!(resolved.navigate("annotation", "nosuchrole").is_empty());
    }
}

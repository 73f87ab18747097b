//! Profile-aware UML-lite modeling toolkit.
//!
//! The library covers the whole pipeline a modeling tool front end needs:
//!
//! - [`metamodel`]: the closed set of UML-lite metaclasses and their
//!   conformance (subtyping) relation.
//! - [`profile`]: StarUML-compatible profile documents (stereotypes, tag
//!   definitions, constraints) with a canonical XML form and a linter.
//! - [`model`]: UML-lite model documents (elements, associations, diagrams,
//!   stereotype applications) with a canonical XML form and profile
//!   resolution.
//! - [`constraint`]: an executable OCL-subset expression language used by
//!   stereotype constraints.
//! - [`validator`]: a rule engine producing stable-coded diagnostics.
//! - [`render`]: deterministic class-diagram (DOT) and sequence-diagram
//!   (text) rendering.
//! - [`corpus`]: the built-in Medical Image Annotation profile, reference
//!   models, and mutation fixtures.

pub mod constraint;
pub mod corpus;
pub mod diagnostics;
pub mod metamodel;
pub mod model;
pub mod profile;
pub mod render;
pub mod validator;

mod xml;

#[cfg(feature = "testutil")]
pub mod testutil;

pub use diagnostics::{Code, Diagnostic, Severity};
pub use metamodel::{ConformanceTable, MetaClass};
pub use model::{
    Association, Diagram, DiagramKind, Message, MessageKind, ModelDocument, ModelElement,
    ProfileRegistry, ResolvedModel, StereotypeApplication,
};
pub use profile::{ConstraintDef, Profile, Stereotype, TagDefinition, TagType};
pub use render::DisplayMode;
pub use validator::{ValidationOptions, ValidationReport};

#[cfg(test)]
mod tests {
    // Every value type is immutable after construction; pin the resulting
    // thread-safety so an interior-mutability regression fails to compile.
    #[test]
    fn core_types_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<crate::MetaClass>();
        assert_send_sync::<crate::ConformanceTable>();
        assert_send_sync::<crate::Profile>();
        assert_send_sync::<crate::ModelDocument>();
        assert_send_sync::<crate::Diagnostic>();
        assert_send_sync::<crate::ValidationReport>();
        assert_send_sync::<crate::constraint::Expr>();
        assert_send_sync::<crate::constraint::Value>();
        assert_send_sync::<crate::ResolvedModel<'static>>();
    }
}

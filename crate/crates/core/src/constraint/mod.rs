//! An executable OCL-subset constraint language.
//!
//! StarUML profiles can declare stereotypes and tagged values but give
//! constraints no machine-checkable form; this module supplies one. The
//! language covers boolean/arithmetic/comparison operators, `self`,
//! property access, association-role navigation, and the collection
//! operations `size`, `isEmpty`, `notEmpty`, `exists`, `forAll`, `select`.
//! Deliberately out: `let`, tuples, `allInstances`, `oclIsKindOf`, and any
//! static type system beyond what evaluation needs.
//!
//! Evaluation is total: failures (division by zero, property access on a
//! non-element, type mismatches) produce [`Value::Invalid`] instead of
//! raising, so a validator can report "constraint could not be evaluated"
//! distinctly from "constraint violated".

pub mod ast;
pub mod eval;
mod lexer;
pub mod parser;
pub mod printer;

pub use ast::{BinaryOp, CollectionOp, Expr, IteratorOp, UnaryOp, Value};
pub use eval::evaluate;
pub use parser::{parse_constraint, ConstraintParseError};
pub use printer::pretty_print;

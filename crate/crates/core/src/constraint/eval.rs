//! Constraint evaluation over a resolved model.
//!
//! Semantics, in full:
//!
//! - `self` is the context element (an element reference by id).
//! - Property access on an element: `name` (string), `metaclass` (the
//!   metaclass spelling as a string), `attributes` (collection of attribute
//!   names in declaration order), `stereotypes` (collection of applied
//!   stereotype names in application order). Any other property, and any
//!   `nav('role')` call, navigates associations by far-end role and yields
//!   the reachable elements ascending by id — an unknown role is simply an
//!   empty collection, never a failure, so "the association was removed"
//!   reads as a violated constraint rather than an unevaluable one.
//! - Property access on anything that is not an element reference (numbers,
//!   strings, collections, association references) is `Invalid`.
//! - Arithmetic: `Int op Int` stays `Int` (division truncates toward zero),
//!   any `Real` operand promotes to `Real`. Division by zero and integer
//!   overflow are `Invalid`.
//! - Comparison: `=`/`<>` on same-typed values (numeric `Int`/`Real` mix
//!   promotes; collections compare elementwise, differing lengths are
//!   unequal); `<` `<=` `>` `>=` on numbers and on strings (lexicographic by
//!   code point). Anything else is a type mismatch, which is `Invalid`.
//! - `and`, `or`, `implies` short-circuit on the left operand: `false and X`
//!   is `false` and `true or X` is `true` even when `X` would be `Invalid`.
//! - `Invalid` absorbs: every other operation with an `Invalid` operand is
//!   `Invalid`, and `=` between two `Invalid`s is `Invalid`, never true.
//! - `exists` is true if any body is true, otherwise `Invalid` if any body
//!   failed to produce a boolean, otherwise false; `forAll` dually. Over an
//!   empty collection `forAll` is true and `exists` is false. `select`
//!   keeps the items whose body is true and is `Invalid` if any body is
//!   not a boolean.

use super::ast::{BinaryOp, CollectionOp, Expr, IteratorOp, UnaryOp, Value};
use crate::model::ResolvedModel;

/// Evaluates `expr` with `self` bound to the element (or association) id
/// `context`. Total: failures come back as [`Value::Invalid`].
pub fn evaluate(expr: &Expr, context: &str, model: &ResolvedModel) -> Value {
    let mut env = Vec::new();
    eval(expr, context, model, &mut env)
}

fn eval(
    expr: &Expr,
    context: &str,
    model: &ResolvedModel,
    env: &mut Vec<(String, Value)>,
) -> Value {
    match expr {
        Expr::Bool(v) => Value::Bool(*v),
        Expr::Int(v) => Value::Int(*v),
        Expr::Real(v) => Value::Real(*v),
        Expr::Str(s) => Value::Str(s.clone()),
        Expr::SelfRef => Value::ElementRef(context.to_string()),
        Expr::Var(name) => env
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| Value::Invalid(format!("unbound variable '{name}'"))),
        Expr::Property { object, name } => {
            let object = eval(object, context, model, env);
            access_property(object, name, model)
        }
        Expr::Nav { object, role } => {
            let object = eval(object, context, model, env);
            navigate(object, role, model)
        }
        Expr::Unary { op, operand } => {
            let operand = eval(operand, context, model, env);
            if let Value::Invalid(_) = operand {
                return operand;
            }
            match (op, operand) {
                (UnaryOp::Not, Value::Bool(b)) => Value::Bool(!b),
                (UnaryOp::Not, v) => Value::Invalid(format!("'not' applied to {}", v.type_name())),
                (UnaryOp::Neg, Value::Int(i)) => match i.checked_neg() {
                    Some(v) => Value::Int(v),
                    None => Value::Invalid("integer overflow".into()),
                },
                (UnaryOp::Neg, Value::Real(r)) => Value::Real(-r),
                (UnaryOp::Neg, v) => Value::Invalid(format!("'-' applied to {}", v.type_name())),
            }
        }
        Expr::Binary { op, left, right } => eval_binary(*op, left, right, context, model, env),
        Expr::CollectionOp { collection, op } => match eval(collection, context, model, env) {
            v @ Value::Invalid(_) => v,
            Value::Collection(items) => match op {
                CollectionOp::Size => Value::Int(items.len() as i64),
                CollectionOp::IsEmpty => Value::Bool(items.is_empty()),
                CollectionOp::NotEmpty => Value::Bool(!items.is_empty()),
            },
            v => Value::Invalid(format!("'{}' applied to {}", op.name(), v.type_name())),
        },
        Expr::Iterate {
            collection,
            op,
            var,
            body,
        } => {
            let items = match eval(collection, context, model, env) {
                v @ Value::Invalid(_) => return v,
                Value::Collection(items) => items,
                v => {
                    return Value::Invalid(format!("'{}' applied to {}", op.name(), v.type_name()))
                }
            };
            let mut results = Vec::with_capacity(items.len());
            for item in &items {
                env.push((var.clone(), item.clone()));
                let result = eval(body, context, model, env);
                env.pop();
                results.push(result);
            }
            let first_failure = results.iter().find(|v| !matches!(v, Value::Bool(_)));
            match op {
                IteratorOp::Exists => {
                    if results.iter().any(|v| matches!(v, Value::Bool(true))) {
                        Value::Bool(true)
                    } else if let Some(bad) = first_failure {
                        iterate_failure(IteratorOp::Exists, bad)
                    } else {
                        Value::Bool(false)
                    }
                }
                IteratorOp::ForAll => {
                    if results.iter().any(|v| matches!(v, Value::Bool(false))) {
                        Value::Bool(false)
                    } else if let Some(bad) = first_failure {
                        iterate_failure(IteratorOp::ForAll, bad)
                    } else {
                        Value::Bool(true)
                    }
                }
                IteratorOp::Select => {
                    if let Some(bad) = first_failure {
                        return iterate_failure(IteratorOp::Select, bad);
                    }
                    let selected = items
                        .into_iter()
                        .zip(&results)
                        .filter(|(_, keep)| matches!(keep, Value::Bool(true)))
                        .map(|(item, _)| item)
                        .collect();
                    Value::Collection(selected)
                }
            }
        }
    }
}

fn iterate_failure(op: IteratorOp, bad: &Value) -> Value {
    match bad {
        Value::Invalid(reason) => Value::Invalid(reason.clone()),
        other => Value::Invalid(format!(
            "'{}' body produced {} instead of Bool",
            op.name(),
            other.type_name()
        )),
    }
}

fn access_property(object: Value, name: &str, model: &ResolvedModel) -> Value {
    match object {
        Value::Invalid(_) => object,
        Value::ElementRef(id) => {
            if let Some(element) = model.element(&id) {
                match name {
                    "name" => Value::Str(element.name.clone()),
                    "metaclass" => Value::Str(element.metaclass.name().to_string()),
                    "attributes" => Value::Collection(
                        element
                            .attributes
                            .iter()
                            .map(|(name, _)| Value::Str(name.clone()))
                            .collect(),
                    ),
                    "stereotypes" => Value::Collection(
                        element
                            .applications
                            .iter()
                            .map(|application| Value::Str(application.stereotype.clone()))
                            .collect(),
                    ),
                    role => role_collection(model, &id, role),
                }
            } else if model.association(&id).is_some() {
                Value::Invalid(format!("unknown property '{name}' on association '{id}'"))
            } else {
                Value::Invalid(format!("unknown element '{id}'"))
            }
        }
        other => Value::Invalid(format!(
            "unknown property '{name}' on {}",
            other.type_name()
        )),
    }
}

fn navigate(object: Value, role: &str, model: &ResolvedModel) -> Value {
    match object {
        Value::Invalid(_) => object,
        Value::ElementRef(id) => {
            if model.element(&id).is_some() {
                role_collection(model, &id, role)
            } else if model.association(&id).is_some() {
                Value::Invalid(format!("cannot navigate '{role}' from association '{id}'"))
            } else {
                Value::Invalid(format!("unknown element '{id}'"))
            }
        }
        other => Value::Invalid(format!(
            "cannot navigate '{role}' from {}",
            other.type_name()
        )),
    }
}

fn role_collection(model: &ResolvedModel, from_id: &str, role: &str) -> Value {
    Value::Collection(
        model
            .navigate(from_id, role)
            .into_iter()
            .map(|element| Value::ElementRef(element.id.clone()))
            .collect(),
    )
}

fn eval_binary(
    op: BinaryOp,
    left: &Expr,
    right: &Expr,
    context: &str,
    model: &ResolvedModel,
    env: &mut Vec<(String, Value)>,
) -> Value {
    // The logical operators decide on the left value alone when they can;
    // the right side is then never evaluated.
    match op {
        BinaryOp::And => {
            return match eval(left, context, model, env) {
                Value::Bool(false) => Value::Bool(false),
                Value::Bool(true) => expect_bool(eval(right, context, model, env), "and"),
                other => logic_failure(other, "and"),
            }
        }
        BinaryOp::Or => {
            return match eval(left, context, model, env) {
                Value::Bool(true) => Value::Bool(true),
                Value::Bool(false) => expect_bool(eval(right, context, model, env), "or"),
                other => logic_failure(other, "or"),
            }
        }
        BinaryOp::Implies => {
            return match eval(left, context, model, env) {
                Value::Bool(false) => Value::Bool(true),
                Value::Bool(true) => expect_bool(eval(right, context, model, env), "implies"),
                other => logic_failure(other, "implies"),
            }
        }
        _ => {}
    }

    let lhs = eval(left, context, model, env);
    if let Value::Invalid(_) = lhs {
        return lhs;
    }
    let rhs = eval(right, context, model, env);
    if let Value::Invalid(_) = rhs {
        return rhs;
    }

    match op {
        BinaryOp::Add | BinaryOp::Sub | BinaryOp::Mul | BinaryOp::Div => arith(op, lhs, rhs),
        BinaryOp::Eq => match value_eq(&lhs, &rhs) {
            Ok(equal) => Value::Bool(equal),
            Err(reason) => Value::Invalid(reason),
        },
        BinaryOp::Ne => match value_eq(&lhs, &rhs) {
            Ok(equal) => Value::Bool(!equal),
            Err(reason) => Value::Invalid(reason),
        },
        BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge => order(op, lhs, rhs),
        BinaryOp::And | BinaryOp::Or | BinaryOp::Implies => unreachable!("handled above"),
    }
}

fn logic_failure(value: Value, op: &str) -> Value {
    match value {
        Value::Invalid(_) => value,
        other => Value::Invalid(format!("'{op}' applied to {}", other.type_name())),
    }
}

fn expect_bool(value: Value, op: &str) -> Value {
    match value {
        Value::Bool(_) | Value::Invalid(_) => value,
        other => Value::Invalid(format!("'{op}' applied to {}", other.type_name())),
    }
}

fn arith(op: BinaryOp, lhs: Value, rhs: Value) -> Value {
    match (lhs, rhs) {
        (Value::Int(a), Value::Int(b)) => {
            let result = match op {
                BinaryOp::Add => a.checked_add(b),
                BinaryOp::Sub => a.checked_sub(b),
                BinaryOp::Mul => a.checked_mul(b),
                BinaryOp::Div => {
                    if b == 0 {
                        return Value::Invalid("division by zero".into());
                    }
                    a.checked_div(b)
                }
                _ => unreachable!(),
            };
            match result {
                Some(v) => Value::Int(v),
                None => Value::Invalid("integer overflow".into()),
            }
        }
        (lhs, rhs) => match (as_real(&lhs), as_real(&rhs)) {
            (Some(a), Some(b)) => match op {
                BinaryOp::Add => Value::Real(a + b),
                BinaryOp::Sub => Value::Real(a - b),
                BinaryOp::Mul => Value::Real(a * b),
                BinaryOp::Div => {
                    if b == 0.0 {
                        Value::Invalid("division by zero".into())
                    } else {
                        Value::Real(a / b)
                    }
                }
                _ => unreachable!(),
            },
            _ => Value::Invalid(format!(
                "'{}' applied to {} and {}",
                op.symbol(),
                lhs.type_name(),
                rhs.type_name()
            )),
        },
    }
}

fn order(op: BinaryOp, lhs: Value, rhs: Value) -> Value {
    let check = |ordering: std::cmp::Ordering| match op {
        BinaryOp::Lt => ordering.is_lt(),
        BinaryOp::Le => ordering.is_le(),
        BinaryOp::Gt => ordering.is_gt(),
        BinaryOp::Ge => ordering.is_ge(),
        _ => unreachable!(),
    };
    match (&lhs, &rhs) {
        (Value::Str(a), Value::Str(b)) => Value::Bool(check(a.cmp(b))),
        _ => match (as_real(&lhs), as_real(&rhs)) {
            (Some(a), Some(b)) => match a.partial_cmp(&b) {
                Some(ordering) => Value::Bool(check(ordering)),
                None => Value::Invalid("comparison with NaN".into()),
            },
            _ => Value::Invalid(format!(
                "'{}' applied to {} and {}",
                op.symbol(),
                lhs.type_name(),
                rhs.type_name()
            )),
        },
    }
}

fn as_real(value: &Value) -> Option<f64> {
    match value {
        Value::Int(i) => Some(*i as f64),
        Value::Real(r) => Some(*r),
        _ => None,
    }
}

/// Language-level equality. `Err` is a type mismatch (which the caller
/// turns into `Invalid`); `Invalid` operands never get here.
fn value_eq(lhs: &Value, rhs: &Value) -> Result<bool, String> {
    match (lhs, rhs) {
        (Value::Bool(a), Value::Bool(b)) => Ok(a == b),
        (Value::Int(a), Value::Int(b)) => Ok(a == b),
        (Value::Str(a), Value::Str(b)) => Ok(a == b),
        (Value::ElementRef(a), Value::ElementRef(b)) => Ok(a == b),
        (Value::Collection(a), Value::Collection(b)) => {
            if a.len() != b.len() {
                return Ok(false);
            }
            for (x, y) in a.iter().zip(b) {
                if x.is_invalid() || y.is_invalid() {
                    return Err("comparison over Invalid collection items".into());
                }
                if !value_eq(x, y)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => match (as_real(lhs), as_real(rhs)) {
            (Some(a), Some(b)) => Ok(a == b),
            _ => Err(format!(
                "cannot compare {} and {}",
                lhs.type_name(),
                rhs.type_name()
            )),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::parse_constraint;
    use crate::corpus;
    use crate::model::{resolve, ProfileRegistry};

    fn eval_on_corpus(source: &str, context: &str) -> Value {
        let model = corpus::builtin_class_model();
        let registry: ProfileRegistry = [corpus::builtin_profile()].into_iter().collect();
        let resolved = resolve(&model, &registry);
        evaluate(&parse_constraint(source).unwrap(), context, &resolved)
    }

    #[test]
    fn true_literal_evaluates_true() {
        assert_eq!(eval_on_corpus("true", "annotation"), Value::Bool(true));
    }

    #[test]
    fn corpus_keyword_constraint_holds() {
        assert_eq!(
            eval_on_corpus("self.keywords->size() >= 1", "annotation"),
            Value::Bool(true)
        );
        assert_eq!(
            eval_on_corpus("self.nav('image')->size() = 1", "annotation"),
            Value::Bool(true)
        );
    }

    #[test]
    fn division_by_zero_is_invalid() {
        assert_eq!(
            eval_on_corpus("1/0 = 1", "annotation"),
            Value::Invalid("division by zero".into())
        );
        assert_eq!(
            eval_on_corpus("1.0/0.0 = 1.0", "annotation"),
            Value::Invalid("division by zero".into())
        );
    }

    #[test]
    fn short_circuit_beats_invalid() {
        assert_eq!(
            eval_on_corpus("false and 1/0 = 1", "annotation"),
            Value::Bool(false)
        );
        assert_eq!(
            eval_on_corpus("true or 1/0 = 1", "annotation"),
            Value::Bool(true)
        );
        assert_eq!(
            eval_on_corpus("false implies 1/0 = 1", "annotation"),
            Value::Bool(true)
        );
    }

    #[test]
    fn invalid_absorbs_through_operators() {
        assert!(eval_on_corpus("1/0 + 1", "annotation").is_invalid());
        assert!(eval_on_corpus("-(1/0)", "annotation").is_invalid());
        assert!(eval_on_corpus("1/0 = 1/0", "annotation").is_invalid());
        assert!(eval_on_corpus("not (1/0 = 1)", "annotation").is_invalid());
    }

    #[test]
    fn integer_division_truncates_toward_zero() {
        assert_eq!(eval_on_corpus("7/2", "annotation"), Value::Int(3));
        assert_eq!(eval_on_corpus("-7/2", "annotation"), Value::Int(-3));
        assert_eq!(eval_on_corpus("1 + 2.5", "annotation"), Value::Real(3.5));
        assert_eq!(eval_on_corpus("1 = 1.0", "annotation"), Value::Bool(true));
    }

    #[test]
    fn property_access_on_elements() {
        assert_eq!(
            eval_on_corpus("self.name", "annotation"),
            Value::Str("Annotation".into())
        );
        assert_eq!(
            eval_on_corpus("self.metaclass", "annotation"),
            Value::Str("UMLClass".into())
        );
        assert_eq!(
            eval_on_corpus("self.attributes->size()", "annotation"),
            Value::Int(2)
        );
        assert_eq!(
            eval_on_corpus(
                "self.stereotypes->exists(s | s = 'Annotation')",
                "annotation"
            ),
            Value::Bool(true)
        );
    }

    #[test]
    fn property_access_on_non_elements_is_invalid() {
        assert!(eval_on_corpus("1 .name", "annotation").is_invalid());
        assert!(eval_on_corpus("'x'.name", "annotation").is_invalid());
        assert!(eval_on_corpus("self.name.name", "annotation").is_invalid());
    }

    #[test]
    fn unknown_context_element_is_invalid() {
        assert!(eval_on_corpus("self.name", "ghost").is_invalid());
    }

    #[test]
    fn unknown_role_is_an_empty_collection() {
        assert_eq!(
            eval_on_corpus("self.nosuchrole->size()", "annotation"),
            Value::Int(0)
        );
        assert_eq!(
            eval_on_corpus("self.nosuchrole->isEmpty()", "annotation"),
            Value::Bool(true)
        );
        assert_eq!(
            eval_on_corpus("self.nosuchrole->notEmpty()", "annotation"),
            Value::Bool(false)
        );
    }

    #[test]
    fn empty_collection_iterator_rules() {
        assert_eq!(
            eval_on_corpus("self.nosuchrole->forAll(x | false)", "annotation"),
            Value::Bool(true)
        );
        assert_eq!(
            eval_on_corpus("self.nosuchrole->exists(x | true)", "annotation"),
            Value::Bool(false)
        );
        assert_eq!(
            eval_on_corpus("self.nosuchrole->select(x | true)->size()", "annotation"),
            Value::Int(0)
        );
    }

    #[test]
    fn iterators_and_navigation_compose() {
        assert_eq!(
            eval_on_corpus(
                "self.keywords->forAll(k | k.metaclass = 'UMLClass')",
                "annotation"
            ),
            Value::Bool(true)
        );
        assert_eq!(
            eval_on_corpus(
                "self.keywords->select(k | k.name = 'KeyWords')->size()",
                "annotation"
            ),
            Value::Int(1)
        );
    }

    #[test]
    fn exists_prefers_truth_over_invalid_and_forall_prefers_false() {
        assert_eq!(
            eval_on_corpus("self.keywords->exists(k | 1/0 = 1 or true)", "annotation"),
            Value::Invalid("division by zero".into())
        );
        assert_eq!(
            eval_on_corpus("self.keywords->exists(k | true or 1/0 = 1)", "annotation"),
            Value::Bool(true)
        );
        assert_eq!(
            eval_on_corpus("self.keywords->forAll(k | false and 1/0 = 1)", "annotation"),
            Value::Bool(false)
        );
    }

    #[test]
    fn string_ordering_is_lexicographic() {
        assert_eq!(
            eval_on_corpus("'abc' < 'abd'", "annotation"),
            Value::Bool(true)
        );
        assert_eq!(
            eval_on_corpus("'b' >= 'b'", "annotation"),
            Value::Bool(true)
        );
        assert!(eval_on_corpus("'a' < 1", "annotation").is_invalid());
        assert!(eval_on_corpus("true < false", "annotation").is_invalid());
    }

    #[test]
    fn type_mismatch_equality_is_invalid() {
        assert!(eval_on_corpus("1 = 'one'", "annotation").is_invalid());
        assert!(eval_on_corpus("true = 1", "annotation").is_invalid());
        assert_eq!(
            eval_on_corpus("self = self", "annotation"),
            Value::Bool(true)
        );
    }

    #[test]
    fn collections_compare_elementwise() {
        assert_eq!(
            eval_on_corpus("self.keywords = self.nav('keywords')", "annotation"),
            Value::Bool(true)
        );
        assert_eq!(
            eval_on_corpus("self.keywords = self.nosuchrole", "annotation"),
            Value::Bool(false)
        );
    }
}

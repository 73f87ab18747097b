//! Test support: a deterministic PRNG, generators for profiles, models,
//! and constraint expressions, an independently written reference
//! interpreter, a reachability oracle for the conformance relation, and
//! shared fixtures. Compiled only under the `testutil` feature; nothing
//! here is part of the library proper.

use std::collections::BTreeSet;

use crate::constraint::ast::{BinaryOp, CollectionOp, Expr, IteratorOp, UnaryOp, Value};
use crate::constraint::pretty_print;
use crate::metamodel::MetaClass;
use crate::model::{
    Association, Diagram, DiagramKind, Message, MessageKind, ModelDocument, ModelElement,
    ResolvedModel, StereotypeApplication,
};
use crate::profile::{ConstraintDef, Profile, Stereotype, TagDefinition, TagType};

/// The profile document in StarUML's published XML profile form, used as a
/// parsing fixture. The published listing stops after `</STEREOTYPE>`; the
/// three trailing closers are completed so the document is well-formed XML.
pub const STARUML_PROFILE_LISTING: &str = r#"<?xml version="1.0" encoding="UTF-8"?> <PROFILE version="1.0">
<HEADER> <NAME>MedicalImageAnnotation</NAME>
<DISPLAYNAME>MedicalImageAnnotation</DISPLAYNAME>
<DESCRIPTION>Medical Image Annotation conceptual modeling</DESCRIPTION>
</HEADER>
<BODY>
<STEREOTYPELIST>
<STEREOTYPE> <NAME>MedicalImageAnnotationObject</NAME>
<DESCRIPTION>Object view.</DESCRIPTION>
<BASECLASSES>
<BASECLASS>UMLAbstractClass</BASECLASS>
<BASECLASS>UMLAttribute</BASECLASS>
<BASECLASS>UMLPackage</BASECLASS>
<BASECLASS>UMLSequenceDiagram</BASECLASS>
</BASECLASSES>
</STEREOTYPE>
</STEREOTYPELIST>
</BODY>
</PROFILE>
"#;

/// Small xorshift* PRNG; fixed seeds make every generated corpus
/// reproducible across runs and platforms.
#[derive(Debug, Clone)]
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Uniform in `0..bound` (`bound` must be nonzero).
    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }

    pub fn chance(&mut self, percent: usize) -> bool {
        self.below(100) < percent
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }
}

const IDENT_FIRST: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_";
const IDENT_REST: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_";
// Free text exercises XML escaping: angle brackets, ampersands, quotes,
// whitespace, and some non-ASCII.
const TEXT_CHARS: &[char] = &[
    'a', 'b', 'c', 'x', 'y', 'z', 'A', 'Z', '0', '9', ' ', ' ', '<', '>', '&', '"', '\'', '.', ',',
    '-', '(', ')', 'é', 'ß', '漢', '\t', '\n',
];

pub fn gen_identifier(rng: &mut TestRng) -> String {
    let mut out = String::new();
    out.push(IDENT_FIRST[rng.below(IDENT_FIRST.len())] as char);
    for _ in 0..rng.range(0, 9) {
        out.push(IDENT_REST[rng.below(IDENT_REST.len())] as char);
    }
    out
}

/// Free text without leading/trailing whitespace (element text is stored
/// verbatim, so padded text could collide with document indentation).
pub fn gen_text(rng: &mut TestRng) -> String {
    let len = rng.range(0, 16);
    let mut out = String::new();
    for _ in 0..len {
        out.push(*rng.pick(TEXT_CHARS));
    }
    out.trim().to_string()
}

fn unique_name(rng: &mut TestRng, taken: &mut BTreeSet<String>) -> String {
    loop {
        let candidate = gen_identifier(rng);
        if taken.insert(candidate.clone()) {
            return candidate;
        }
    }
}

const ROLE_POOL: &[&str] = &[
    "keywords",
    "image",
    "annotator",
    "patient",
    "items",
    "parts",
];
const STRING_POOL: &[&str] = &["", "a", "Annotation", "UMLClass", "k w"];

/// A random well-formed expression: closed (no free variables), literals
/// non-negative, depth-bounded.
pub fn gen_expr(rng: &mut TestRng, depth: usize) -> Expr {
    gen_expr_scoped(rng, depth, &mut Vec::new())
}

fn gen_expr_scoped(rng: &mut TestRng, depth: usize, scope: &mut Vec<String>) -> Expr {
    if depth == 0 {
        return gen_leaf(rng, scope);
    }
    match rng.below(10) {
        0 | 1 => gen_leaf(rng, scope),
        2 => Expr::Unary {
            op: *rng.pick(&[UnaryOp::Not, UnaryOp::Neg]),
            operand: Box::new(gen_expr_scoped(rng, depth - 1, scope)),
        },
        3..=5 => Expr::Binary {
            op: *rng.pick(&[
                BinaryOp::Implies,
                BinaryOp::Or,
                BinaryOp::And,
                BinaryOp::Eq,
                BinaryOp::Ne,
                BinaryOp::Lt,
                BinaryOp::Le,
                BinaryOp::Gt,
                BinaryOp::Ge,
                BinaryOp::Add,
                BinaryOp::Sub,
                BinaryOp::Mul,
                BinaryOp::Div,
            ]),
            left: Box::new(gen_expr_scoped(rng, depth - 1, scope)),
            right: Box::new(gen_expr_scoped(rng, depth - 1, scope)),
        },
        6 => Expr::Property {
            object: Box::new(gen_object(rng, depth - 1, scope)),
            name: gen_property_name(rng),
        },
        7 => Expr::Nav {
            object: Box::new(gen_object(rng, depth - 1, scope)),
            role: rng.pick(ROLE_POOL).to_string(),
        },
        8 => Expr::CollectionOp {
            collection: Box::new(gen_collection(rng, depth - 1, scope)),
            op: *rng.pick(&[
                CollectionOp::Size,
                CollectionOp::IsEmpty,
                CollectionOp::NotEmpty,
            ]),
        },
        _ => {
            let var = format!("v{}", scope.len());
            let collection = Box::new(gen_collection(rng, depth - 1, scope));
            scope.push(var.clone());
            let body = Box::new(gen_expr_scoped(rng, depth - 1, scope));
            scope.pop();
            Expr::Iterate {
                collection,
                op: *rng.pick(&[IteratorOp::Exists, IteratorOp::ForAll, IteratorOp::Select]),
                var,
                body,
            }
        }
    }
}

fn gen_property_name(rng: &mut TestRng) -> String {
    if rng.chance(50) {
        rng.pick(&["name", "metaclass", "attributes", "stereotypes"])
            .to_string()
    } else {
        rng.pick(ROLE_POOL).to_string()
    }
}

/// Something plausibly element-valued, so properties and navigation hit
/// real data reasonably often.
fn gen_object(rng: &mut TestRng, depth: usize, scope: &mut Vec<String>) -> Expr {
    match rng.below(4) {
        0 if !scope.is_empty() => Expr::Var(rng.pick(scope).clone()),
        1 if depth > 0 => Expr::Nav {
            object: Box::new(gen_object(rng, depth - 1, scope)),
            role: rng.pick(ROLE_POOL).to_string(),
        },
        _ => Expr::SelfRef,
    }
}

/// Something plausibly collection-valued.
fn gen_collection(rng: &mut TestRng, depth: usize, scope: &mut Vec<String>) -> Expr {
    match rng.below(3) {
        0 => Expr::Property {
            object: Box::new(gen_object(rng, depth, scope)),
            name: rng.pick(ROLE_POOL).to_string(),
        },
        1 => Expr::Property {
            object: Box::new(gen_object(rng, depth, scope)),
            name: rng.pick(&["attributes", "stereotypes"]).to_string(),
        },
        _ => Expr::Nav {
            object: Box::new(gen_object(rng, depth, scope)),
            role: rng.pick(ROLE_POOL).to_string(),
        },
    }
}

fn gen_leaf(rng: &mut TestRng, scope: &[String]) -> Expr {
    match rng.below(7) {
        0 => Expr::Bool(rng.chance(50)),
        1 => Expr::Int(rng.below(100) as i64),
        2 => {
            // Build reals from decimal text so print -> parse is exact.
            let text = format!("{}.{}", rng.below(50), rng.below(100));
            Expr::Real(text.parse().unwrap())
        }
        3 => Expr::Str(rng.pick(STRING_POOL).to_string()),
        4 if !scope.is_empty() => Expr::Var(rng.pick(scope).clone()),
        _ => Expr::SelfRef,
    }
}

/// A random structurally valid profile (unique names, nonempty base
/// classes, conforming defaults); lints clean by construction.
pub fn gen_profile(rng: &mut TestRng) -> Profile {
    let mut stereotype_names = BTreeSet::new();
    let stereotypes = (0..rng.range(0, 4))
        .map(|_| {
            let name = unique_name(rng, &mut stereotype_names);
            let mut base_classes = BTreeSet::new();
            for _ in 0..rng.range(1, 3) {
                base_classes.insert(*rng.pick(&MetaClass::ALL));
            }
            let mut tag_names = BTreeSet::new();
            let tag_defs = (0..rng.range(0, 3))
                .map(|_| gen_tag_definition(rng, &mut tag_names))
                .collect();
            let mut constraint_names = BTreeSet::new();
            let constraints = (0..rng.range(0, 2))
                .map(|_| {
                    let source = pretty_print(&gen_expr(rng, 3));
                    ConstraintDef {
                        name: unique_name(rng, &mut constraint_names),
                        compiled: crate::constraint::parse_constraint(&source)
                            .expect("generated constraints parse"),
                        source_text: source,
                    }
                })
                .collect();
            Stereotype {
                name,
                description: gen_text(rng),
                base_classes,
                icon: rng.chance(50).then(|| gen_identifier(rng)),
                tag_defs,
                constraints,
            }
        })
        .collect();
    Profile {
        name: gen_identifier(rng),
        display_name: gen_text(rng),
        description: gen_text(rng),
        version: format!("{}.{}", rng.below(4), rng.below(10)),
        stereotypes,
    }
}

fn gen_tag_definition(rng: &mut TestRng, taken: &mut BTreeSet<String>) -> TagDefinition {
    let value_type = *rng.pick(&[
        TagType::String,
        TagType::Int,
        TagType::Real,
        TagType::Bool,
        TagType::Enum,
    ]);
    let enum_choices: Vec<String> = if value_type == TagType::Enum {
        let mut choices = BTreeSet::new();
        for _ in 0..rng.range(1, 4) {
            choices.insert(gen_identifier(rng));
        }
        choices.into_iter().collect()
    } else {
        Vec::new()
    };
    let default = rng.chance(60).then(|| match value_type {
        TagType::String => gen_text(rng),
        TagType::Int => format!("{}", rng.below(1000) as i64 - 500),
        TagType::Real => format!("{}.{}", rng.below(100), rng.below(10)),
        TagType::Bool => {
            if rng.chance(50) {
                "true".into()
            } else {
                "false".into()
            }
        }
        TagType::Enum => rng.pick(&enum_choices).clone(),
    });
    TagDefinition {
        name: unique_name(rng, taken),
        value_type,
        enum_choices,
        default,
    }
}

const MULT_POOL: &[&str] = &["*", "1", "0..1", "1..*", "0..*", "2..7"];

/// A random structurally valid model document: unique ids, association
/// ends and diagram references over existing elements, owners acyclic,
/// seq numbers unique per diagram.
pub fn gen_model(rng: &mut TestRng) -> ModelDocument {
    let element_count = rng.range(1, 7);
    let ids: Vec<String> = (0..element_count).map(|i| format!("e{i}")).collect();
    let elements: Vec<ModelElement> = ids
        .iter()
        .enumerate()
        .map(|(index, id)| {
            let mut attr_names = BTreeSet::new();
            let attributes = (0..rng.range(0, 3))
                .map(|_| (unique_name(rng, &mut attr_names), gen_text(rng)))
                .collect();
            ModelElement {
                id: id.clone(),
                metaclass: *rng.pick(&MetaClass::ALL),
                name: gen_text(rng),
                // Owners always point at earlier elements, so no cycles.
                owner: (index > 0 && rng.chance(30)).then(|| ids[rng.below(index)].clone()),
                attributes,
                applications: gen_applications(rng),
            }
        })
        .collect();

    let associations: Vec<Association> = (0..rng.range(0, 4))
        .map(|i| Association {
            id: format!("a{i}"),
            source: rng.pick(&ids).clone(),
            target: rng.pick(&ids).clone(),
            source_role: if rng.chance(60) {
                rng.pick(ROLE_POOL).to_string()
            } else {
                String::new()
            },
            target_role: if rng.chance(60) {
                rng.pick(ROLE_POOL).to_string()
            } else {
                String::new()
            },
            source_mult: rng.pick(MULT_POOL).to_string(),
            target_mult: rng.pick(MULT_POOL).to_string(),
            applications: gen_applications(rng),
        })
        .collect();

    let diagrams: Vec<Diagram> = (0..rng.range(0, 2))
        .map(|i| {
            if rng.chance(50) {
                Diagram {
                    id: format!("d{i}"),
                    kind: DiagramKind::Class,
                    members: ids.iter().filter(|_| rng.chance(60)).cloned().collect(),
                    lifelines: Vec::new(),
                    messages: Vec::new(),
                }
            } else {
                let lifelines: Vec<String> =
                    ids.iter().filter(|_| rng.chance(70)).cloned().collect();
                let messages = if lifelines.is_empty() {
                    Vec::new()
                } else {
                    (0..rng.range(0, 4))
                        .map(|seq| Message {
                            seq: seq as u32 + 1,
                            from: rng.pick(&lifelines).clone(),
                            to: rng.pick(&lifelines).clone(),
                            label: gen_text(rng),
                            kind: if rng.chance(75) {
                                MessageKind::Call
                            } else {
                                MessageKind::Return
                            },
                        })
                        .collect()
                };
                Diagram {
                    id: format!("d{i}"),
                    kind: DiagramKind::Sequence,
                    members: Vec::new(),
                    lifelines,
                    messages,
                }
            }
        })
        .collect();

    ModelDocument {
        name: gen_text(rng),
        imports: (0..rng.range(0, 2)).map(|_| gen_identifier(rng)).collect(),
        elements,
        associations,
        diagrams,
    }
}

fn gen_applications(rng: &mut TestRng) -> Vec<StereotypeApplication> {
    (0..rng.range(0, 2))
        .map(|_| {
            let mut tag_names = BTreeSet::new();
            StereotypeApplication {
                profile: gen_identifier(rng),
                stereotype: gen_identifier(rng),
                tags: (0..rng.range(0, 2))
                    .map(|_| (unique_name(rng, &mut tag_names), gen_text(rng)))
                    .collect(),
            }
        })
        .collect()
}

/// Reference interpreter for the constraint language: a plain recursive
/// walker with an explicit environment, written separately from
/// [`crate::constraint::evaluate`] (it re-derives navigation from the raw
/// document rather than using the model's helpers).
pub fn naive_eval(expr: &Expr, context: &str, model: &ResolvedModel) -> Value {
    naive_step(expr, context, model, &[])
}

fn naive_step(expr: &Expr, context: &str, model: &ResolvedModel, env: &[(String, Value)]) -> Value {
    match expr {
        Expr::Bool(v) => Value::Bool(*v),
        Expr::Int(v) => Value::Int(*v),
        Expr::Real(v) => Value::Real(*v),
        Expr::Str(s) => Value::Str(s.clone()),
        Expr::SelfRef => Value::ElementRef(context.to_string()),
        Expr::Var(name) => match env.iter().rev().find(|(n, _)| n == name) {
            Some((_, value)) => value.clone(),
            None => Value::Invalid(format!("unbound variable '{name}'")),
        },
        Expr::Property { object, name } => match naive_step(object, context, model, env) {
            Value::Invalid(r) => Value::Invalid(r),
            Value::ElementRef(id) => {
                let Some(element) = model.document.elements.iter().find(|e| e.id == id) else {
                    return if model.document.associations.iter().any(|a| a.id == id) {
                        Value::Invalid(format!("no properties on association '{id}'"))
                    } else {
                        Value::Invalid(format!("no element '{id}'"))
                    };
                };
                match name.as_str() {
                    "name" => Value::Str(element.name.clone()),
                    "metaclass" => Value::Str(element.metaclass.name().into()),
                    "attributes" => Value::Collection(
                        element
                            .attributes
                            .iter()
                            .map(|(n, _)| Value::Str(n.clone()))
                            .collect(),
                    ),
                    "stereotypes" => Value::Collection(
                        element
                            .applications
                            .iter()
                            .map(|a| Value::Str(a.stereotype.clone()))
                            .collect(),
                    ),
                    role => naive_navigate(model, &id, role),
                }
            }
            other => Value::Invalid(format!("no property '{name}' on {}", other.type_name())),
        },
        Expr::Nav { object, role } => match naive_step(object, context, model, env) {
            Value::Invalid(r) => Value::Invalid(r),
            Value::ElementRef(id) => {
                if model.document.elements.iter().any(|e| e.id == id) {
                    naive_navigate(model, &id, role)
                } else {
                    Value::Invalid(format!("cannot navigate from '{id}'"))
                }
            }
            other => Value::Invalid(format!("cannot navigate from {}", other.type_name())),
        },
        Expr::Unary { op, operand } => {
            let value = naive_step(operand, context, model, env);
            match (op, value) {
                (_, Value::Invalid(r)) => Value::Invalid(r),
                (UnaryOp::Not, Value::Bool(b)) => Value::Bool(!b),
                (UnaryOp::Neg, Value::Int(i)) => i
                    .checked_neg()
                    .map(Value::Int)
                    .unwrap_or_else(|| Value::Invalid("overflow".into())),
                (UnaryOp::Neg, Value::Real(r)) => Value::Real(-r),
                (op, v) => Value::Invalid(format!("bad operand {} for {op:?}", v.type_name())),
            }
        }
        Expr::Binary { op, left, right } => naive_binary(*op, left, right, context, model, env),
        Expr::CollectionOp { collection, op } => {
            match naive_step(collection, context, model, env) {
                Value::Invalid(r) => Value::Invalid(r),
                Value::Collection(items) => match op {
                    CollectionOp::Size => Value::Int(items.len() as i64),
                    CollectionOp::IsEmpty => Value::Bool(items.is_empty()),
                    CollectionOp::NotEmpty => Value::Bool(!items.is_empty()),
                },
                other => Value::Invalid(format!("not a collection: {}", other.type_name())),
            }
        }
        Expr::Iterate {
            collection,
            op,
            var,
            body,
        } => {
            let items = match naive_step(collection, context, model, env) {
                Value::Invalid(r) => return Value::Invalid(r),
                Value::Collection(items) => items,
                other => return Value::Invalid(format!("not a collection: {}", other.type_name())),
            };
            let mut outcomes = Vec::new();
            for item in &items {
                let mut inner = env.to_vec();
                inner.push((var.clone(), item.clone()));
                outcomes.push(naive_step(body, context, model, &inner));
            }
            let bad = outcomes.iter().find(|v| !matches!(v, Value::Bool(_)));
            match op {
                IteratorOp::Exists => {
                    if outcomes.contains(&Value::Bool(true)) {
                        Value::Bool(true)
                    } else if let Some(b) = bad {
                        naive_bad_body(b)
                    } else {
                        Value::Bool(false)
                    }
                }
                IteratorOp::ForAll => {
                    if outcomes.contains(&Value::Bool(false)) {
                        Value::Bool(false)
                    } else if let Some(b) = bad {
                        naive_bad_body(b)
                    } else {
                        Value::Bool(true)
                    }
                }
                IteratorOp::Select => {
                    if let Some(b) = bad {
                        naive_bad_body(b)
                    } else {
                        Value::Collection(
                            items
                                .iter()
                                .zip(&outcomes)
                                .filter(|(_, keep)| **keep == Value::Bool(true))
                                .map(|(item, _)| item.clone())
                                .collect(),
                        )
                    }
                }
            }
        }
    }
}

fn naive_bad_body(value: &Value) -> Value {
    match value {
        Value::Invalid(r) => Value::Invalid(r.clone()),
        other => Value::Invalid(format!("iterator body was {}", other.type_name())),
    }
}

fn naive_navigate(model: &ResolvedModel, from: &str, role: &str) -> Value {
    let mut reachable: Vec<String> = Vec::new();
    for association in &model.document.associations {
        if association.source == from
            && association.target_role == role
            && model
                .document
                .elements
                .iter()
                .any(|e| e.id == association.target)
        {
            reachable.push(association.target.clone());
        }
        if association.target == from
            && association.source_role == role
            && model
                .document
                .elements
                .iter()
                .any(|e| e.id == association.source)
        {
            reachable.push(association.source.clone());
        }
    }
    reachable.sort();
    Value::Collection(reachable.into_iter().map(Value::ElementRef).collect())
}

fn naive_binary(
    op: BinaryOp,
    left: &Expr,
    right: &Expr,
    context: &str,
    model: &ResolvedModel,
    env: &[(String, Value)],
) -> Value {
    let lhs = naive_step(left, context, model, env);
    match op {
        BinaryOp::And | BinaryOp::Or | BinaryOp::Implies => {
            let short = match (op, &lhs) {
                (BinaryOp::And, Value::Bool(false)) => Some(Value::Bool(false)),
                (BinaryOp::Or, Value::Bool(true)) => Some(Value::Bool(true)),
                (BinaryOp::Implies, Value::Bool(false)) => Some(Value::Bool(true)),
                _ => None,
            };
            if let Some(value) = short {
                return value;
            }
            return match lhs {
                Value::Bool(_) => match naive_step(right, context, model, env) {
                    v @ (Value::Bool(_) | Value::Invalid(_)) => v,
                    other => Value::Invalid(format!("logic over {}", other.type_name())),
                },
                Value::Invalid(r) => Value::Invalid(r),
                other => Value::Invalid(format!("logic over {}", other.type_name())),
            };
        }
        _ => {}
    }
    if let Value::Invalid(r) = lhs {
        return Value::Invalid(r);
    }
    let rhs = naive_step(right, context, model, env);
    if let Value::Invalid(r) = rhs {
        return Value::Invalid(r);
    }

    fn number(value: &Value) -> Option<f64> {
        match value {
            Value::Int(i) => Some(*i as f64),
            Value::Real(r) => Some(*r),
            _ => None,
        }
    }

    fn equal(lhs: &Value, rhs: &Value) -> Result<bool, ()> {
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
                    if matches!(x, Value::Invalid(_)) || matches!(y, Value::Invalid(_)) {
                        return Err(());
                    }
                    if !equal(x, y)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => match (number(lhs), number(rhs)) {
                (Some(a), Some(b)) => Ok(a == b),
                _ => Err(()),
            },
        }
    }

    match op {
        BinaryOp::Add | BinaryOp::Sub | BinaryOp::Mul | BinaryOp::Div => match (&lhs, &rhs) {
            (Value::Int(a), Value::Int(b)) => {
                if op == BinaryOp::Div && *b == 0 {
                    return Value::Invalid("division by zero".into());
                }
                let out = match op {
                    BinaryOp::Add => a.checked_add(*b),
                    BinaryOp::Sub => a.checked_sub(*b),
                    BinaryOp::Mul => a.checked_mul(*b),
                    BinaryOp::Div => a.checked_div(*b),
                    _ => unreachable!(),
                };
                out.map(Value::Int)
                    .unwrap_or_else(|| Value::Invalid("overflow".into()))
            }
            _ => match (number(&lhs), number(&rhs)) {
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
                _ => Value::Invalid("arithmetic type mismatch".into()),
            },
        },
        BinaryOp::Eq => match equal(&lhs, &rhs) {
            Ok(v) => Value::Bool(v),
            Err(()) => Value::Invalid("incomparable values".into()),
        },
        BinaryOp::Ne => match equal(&lhs, &rhs) {
            Ok(v) => Value::Bool(!v),
            Err(()) => Value::Invalid("incomparable values".into()),
        },
        BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge => {
            let ordering = match (&lhs, &rhs) {
                (Value::Str(a), Value::Str(b)) => Some(a.cmp(b)),
                _ => match (number(&lhs), number(&rhs)) {
                    (Some(a), Some(b)) => a.partial_cmp(&b),
                    _ => None,
                },
            };
            match ordering {
                Some(ordering) => Value::Bool(match op {
                    BinaryOp::Lt => ordering.is_lt(),
                    BinaryOp::Le => ordering.is_le(),
                    BinaryOp::Gt => ordering.is_gt(),
                    BinaryOp::Ge => ordering.is_ge(),
                    _ => unreachable!(),
                }),
                None => Value::Invalid("unordered values".into()),
            }
        }
        BinaryOp::And | BinaryOp::Or | BinaryOp::Implies => unreachable!(),
    }
}

/// Agreement up to `Invalid` reasons: the two interpreters must agree on
/// every value, but an `Invalid` is an `Invalid` regardless of wording.
pub fn values_agree(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Invalid(_), Value::Invalid(_)) => true,
        (Value::Collection(x), Value::Collection(y)) => {
            x.len() == y.len() && x.iter().zip(y).all(|(a, b)| values_agree(a, b))
        }
        _ => a == b,
    }
}

/// Independent conformance oracle: iterate reachability to a fixpoint over
/// an explicit pair set (a different algorithm and representation than the
/// closure matrix in [`crate::metamodel::ConformanceTable`]).
pub fn reachability_oracle(edges: &[(MetaClass, MetaClass)]) -> BTreeSet<(MetaClass, MetaClass)> {
    let mut pairs: BTreeSet<(MetaClass, MetaClass)> =
        MetaClass::ALL.iter().map(|m| (*m, *m)).collect();
    for edge in edges {
        pairs.insert(*edge);
    }
    loop {
        let mut grew = false;
        let snapshot: Vec<(MetaClass, MetaClass)> = pairs.iter().copied().collect();
        for &(a, b) in &snapshot {
            for &(c, d) in &snapshot {
                if b == c && pairs.insert((a, d)) {
                    grew = true;
                }
            }
        }
        if !grew {
            return pairs;
        }
    }
}

/// The declared generalization edges of the standard UML-lite hierarchy,
/// for oracle-side closure computation.
pub const STANDARD_EDGES: &[(MetaClass, MetaClass)] =
    &[(MetaClass::Class, MetaClass::AbstractClass)];

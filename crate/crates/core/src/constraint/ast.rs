//! Expression tree for the constraint language.
//!
//! Numeric literals are always non-negative in a well-formed tree; the
//! parser represents `-3` as negation applied to `3`, and the pretty-printer
//! relies on that to stay inverse to the parser.

/// A parsed constraint expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Bool(bool),
    Int(i64),
    Real(f64),
    Str(String),
    /// The context element the constraint is evaluated against.
    SelfRef,
    /// An iterator variable bound by an enclosing `exists`/`forAll`/`select`.
    Var(String),
    /// `object.name` — a built-in property or an association-role
    /// navigation, decided at evaluation time.
    Property {
        object: Box<Expr>,
        name: String,
    },
    /// `object.nav('role')` — explicit association-role navigation, for
    /// roles shadowed by a built-in property name.
    Nav {
        object: Box<Expr>,
        role: String,
    },
    Unary {
        op: UnaryOp,
        operand: Box<Expr>,
    },
    Binary {
        op: BinaryOp,
        left: Box<Expr>,
        right: Box<Expr>,
    },
    /// `collection->size()`, `->isEmpty()`, `->notEmpty()`.
    CollectionOp {
        collection: Box<Expr>,
        op: CollectionOp,
    },
    /// `collection->exists(v | body)`, `->forAll(..)`, `->select(..)`.
    Iterate {
        collection: Box<Expr>,
        op: IteratorOp,
        var: String,
        body: Box<Expr>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Implies,
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Implies => "implies",
            BinaryOp::Or => "or",
            BinaryOp::And => "and",
            BinaryOp::Eq => "=",
            BinaryOp::Ne => "<>",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollectionOp {
    Size,
    IsEmpty,
    NotEmpty,
}

impl CollectionOp {
    pub fn name(self) -> &'static str {
        match self {
            CollectionOp::Size => "size",
            CollectionOp::IsEmpty => "isEmpty",
            CollectionOp::NotEmpty => "notEmpty",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IteratorOp {
    Exists,
    ForAll,
    Select,
}

impl IteratorOp {
    pub fn name(self) -> &'static str {
        match self {
            IteratorOp::Exists => "exists",
            IteratorOp::ForAll => "forAll",
            IteratorOp::Select => "select",
        }
    }
}

/// The result of evaluating an expression.
///
/// `Invalid` is the in-band failure value: division by zero, type
/// mismatches, and property access on non-elements all produce it, and any
/// operation over an `Invalid` operand stays `Invalid` (short-circuiting
/// `and`/`or`/`implies` excepted). Two `Invalid` values never compare equal
/// under the language's `=`; the derived `PartialEq` here is structural and
/// only meant for assertions.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Real(f64),
    Str(String),
    /// Ordered, possibly heterogeneous.
    Collection(Vec<Value>),
    /// Reference to a model element (or, for constraints applied to an
    /// association, the association) by id.
    ElementRef(String),
    Invalid(String),
}

impl Value {
    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Bool(_) => "Bool",
            Value::Int(_) => "Int",
            Value::Real(_) => "Real",
            Value::Str(_) => "Str",
            Value::Collection(_) => "Collection",
            Value::ElementRef(_) => "Element",
            Value::Invalid(_) => "Invalid",
        }
    }

    pub fn is_invalid(&self) -> bool {
        matches!(self, Value::Invalid(_))
    }
}

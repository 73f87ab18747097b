//! Canonical text form for constraint expressions.
//!
//! `parse_constraint(pretty_print(e))` is structurally equal to `e` for any
//! tree the parser can produce: parentheses are inserted exactly where the
//! grammar's precedence and associativity would otherwise reshape the tree.

use super::ast::{BinaryOp, Expr, UnaryOp};

const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_NOT: u8 = 4;
const PREC_CMP: u8 = 5;
const PREC_ADD: u8 = 6;
const PREC_MUL: u8 = 7;
const PREC_NEG: u8 = 8;
const PREC_POSTFIX: u8 = 9;
const PREC_ATOM: u8 = 10;

fn precedence(expr: &Expr) -> u8 {
    match expr {
        Expr::Binary { op, .. } => match op {
            BinaryOp::Implies => PREC_IMPLIES,
            BinaryOp::Or => PREC_OR,
            BinaryOp::And => PREC_AND,
            BinaryOp::Eq
            | BinaryOp::Ne
            | BinaryOp::Lt
            | BinaryOp::Le
            | BinaryOp::Gt
            | BinaryOp::Ge => PREC_CMP,
            BinaryOp::Add | BinaryOp::Sub => PREC_ADD,
            BinaryOp::Mul | BinaryOp::Div => PREC_MUL,
        },
        Expr::Unary {
            op: UnaryOp::Not, ..
        } => PREC_NOT,
        Expr::Unary {
            op: UnaryOp::Neg, ..
        } => PREC_NEG,
        Expr::Property { .. }
        | Expr::Nav { .. }
        | Expr::CollectionOp { .. }
        | Expr::Iterate { .. } => PREC_POSTFIX,
        _ => PREC_ATOM,
    }
}

/// Renders the canonical source text of an expression.
pub fn pretty_print(expr: &Expr) -> String {
    let mut out = String::new();
    print_into(expr, PREC_IMPLIES, &mut out);
    out
}

fn print_into(expr: &Expr, min_prec: u8, out: &mut String) {
    let prec = precedence(expr);
    let needs_parens = prec < min_prec;
    if needs_parens {
        out.push('(');
    }
    match expr {
        Expr::Bool(v) => out.push_str(if *v { "true" } else { "false" }),
        Expr::Int(v) => out.push_str(&v.to_string()),
        Expr::Real(v) => {
            if v.fract() == 0.0 && v.is_finite() {
                out.push_str(&format!("{v:.1}"));
            } else {
                out.push_str(&format!("{v}"));
            }
        }
        Expr::Str(s) => {
            out.push('\'');
            out.push_str(s);
            out.push('\'');
        }
        Expr::SelfRef => out.push_str("self"),
        Expr::Var(name) => out.push_str(name),
        Expr::Property { object, name } => {
            print_into(object, PREC_POSTFIX, out);
            out.push('.');
            out.push_str(name);
        }
        Expr::Nav { object, role } => {
            print_into(object, PREC_POSTFIX, out);
            out.push_str(".nav('");
            out.push_str(role);
            out.push_str("')");
        }
        Expr::Unary {
            op: UnaryOp::Not,
            operand,
        } => {
            out.push_str("not ");
            print_into(operand, PREC_NOT, out);
        }
        Expr::Unary {
            op: UnaryOp::Neg,
            operand,
        } => {
            out.push('-');
            print_into(operand, PREC_NEG, out);
        }
        Expr::Binary { op, left, right } => {
            // Comparison is non-associative; both sides re-parse only at the
            // next tighter level. The logical and arithmetic operators fold
            // left, so the right operand needs one extra level too.
            let (left_min, right_min) = if prec == PREC_CMP {
                (PREC_ADD, PREC_ADD)
            } else {
                (prec, prec + 1)
            };
            print_into(left, left_min, out);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            print_into(right, right_min, out);
        }
        Expr::CollectionOp { collection, op } => {
            print_into(collection, PREC_POSTFIX, out);
            out.push_str("->");
            out.push_str(op.name());
            out.push_str("()");
        }
        Expr::Iterate {
            collection,
            op,
            var,
            body,
        } => {
            print_into(collection, PREC_POSTFIX, out);
            out.push_str("->");
            out.push_str(op.name());
            out.push('(');
            out.push_str(var);
            out.push_str(" | ");
            print_into(body, PREC_IMPLIES, out);
            out.push(')');
        }
    }
    if needs_parens {
        out.push(')');
    }
}

//! Recursive-descent parser for the constraint language.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := implies
//! implies := or ("implies" or)*
//! or      := and ("or" and)*
//! and     := not ("and" not)*
//! not     := "not" not | cmp
//! cmp     := add (("=" | "<>" | "<" | "<=" | ">" | ">=") add)?
//! add     := mul (("+" | "-") mul)*
//! mul     := unary (("*" | "/") unary)*
//! unary   := "-" unary | postfix
//! postfix := primary (("." IDENT ("(" STRING ")")?)
//!                    | ("->" IDENT "(" (IDENT "|" expr)? ")"))*
//! primary := "self" | IDENT | INT | REAL | STRING | "true" | "false"
//!          | "(" expr ")"
//! ```
//!
//! Comparison does not chain, and `not` binds looser than comparison, so
//! `not a = b` reads as `not (a = b)`. Of the dotted forms only
//! `nav('role')` takes an argument; it navigates by role name just like a
//! plain `.role` access, and exists for roles shadowed by a built-in
//! property. Iterator variables are scope-checked at parse time: a bare
//! identifier outside any enclosing `exists`/`forAll`/`select` is rejected.

use thiserror::Error;

use super::ast::{BinaryOp, CollectionOp, Expr, IteratorOp, UnaryOp};
use super::lexer::{tokenize, Token, TokenKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstraintParseError {
    #[error("syntax error at {line}:{column}: unexpected {found}; expected {}", expected.join(", "))]
    Syntax {
        line: usize,
        column: usize,
        found: String,
        expected: Vec<String>,
    },
    #[error("unbound variable '{name}' at {line}:{column}")]
    UnboundVariable {
        name: String,
        line: usize,
        column: usize,
    },
}

/// Parses constraint source text into an expression tree.
pub fn parse_constraint(source: &str) -> Result<Expr, ConstraintParseError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        scope: Vec::new(),
    };
    let expr = parser.expr()?;
    parser.expect_eof()?;
    Ok(expr)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    scope: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, expected: &[&str]) -> ConstraintParseError {
        let tok = self.peek();
        ConstraintParseError::Syntax {
            line: tok.line,
            column: tok.column,
            found: tok.kind.describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if &self.peek().kind == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> Result<(), ConstraintParseError> {
        if self.eat(&kind) {
            Ok(())
        } else {
            Err(self.error(&[expected]))
        }
    }

    fn expect_eof(&self) -> Result<(), ConstraintParseError> {
        if self.peek().kind == TokenKind::Eof {
            Ok(())
        } else {
            Err(self.error(&["operator", "end of input"]))
        }
    }

    fn expect_ident(
        &mut self,
        expected: &str,
    ) -> Result<(String, usize, usize), ConstraintParseError> {
        let tok = self.peek().clone();
        if let TokenKind::Ident(name) = tok.kind {
            self.bump();
            Ok((name, tok.line, tok.column))
        } else {
            Err(self.error(&[expected]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ConstraintParseError> {
        self.implies()
    }

    fn implies(&mut self) -> Result<Expr, ConstraintParseError> {
        let mut left = self.or()?;
        while self.eat(&TokenKind::KwImplies) {
            let right = self.or()?;
            left = Expr::Binary {
                op: BinaryOp::Implies,
                left: Box::new(left),
                right: Box::new(right),
            };
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Expr, ConstraintParseError> {
        let mut left = self.and()?;
        while self.eat(&TokenKind::KwOr) {
            let right = self.and()?;
            left = Expr::Binary {
                op: BinaryOp::Or,
                left: Box::new(left),
                right: Box::new(right),
            };
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Expr, ConstraintParseError> {
        let mut left = self.not()?;
        while self.eat(&TokenKind::KwAnd) {
            let right = self.not()?;
            left = Expr::Binary {
                op: BinaryOp::And,
                left: Box::new(left),
                right: Box::new(right),
            };
        }
        Ok(left)
    }

    fn not(&mut self) -> Result<Expr, ConstraintParseError> {
        if self.eat(&TokenKind::KwNot) {
            let operand = self.not()?;
            Ok(Expr::Unary {
                op: UnaryOp::Not,
                operand: Box::new(operand),
            })
        } else {
            self.cmp()
        }
    }

    fn cmp(&mut self) -> Result<Expr, ConstraintParseError> {
        let left = self.add()?;
        let op = match self.peek().kind {
            TokenKind::Eq => BinaryOp::Eq,
            TokenKind::Ne => BinaryOp::Ne,
            TokenKind::Lt => BinaryOp::Lt,
            TokenKind::Le => BinaryOp::Le,
            TokenKind::Gt => BinaryOp::Gt,
            TokenKind::Ge => BinaryOp::Ge,
            _ => return Ok(left),
        };
        self.bump();
        let right = self.add()?;
        Ok(Expr::Binary {
            op,
            left: Box::new(left),
            right: Box::new(right),
        })
    }

    fn add(&mut self) -> Result<Expr, ConstraintParseError> {
        let mut left = self.mul()?;
        loop {
            let op = match self.peek().kind {
                TokenKind::Plus => BinaryOp::Add,
                TokenKind::Minus => BinaryOp::Sub,
                _ => return Ok(left),
            };
            self.bump();
            let right = self.mul()?;
            left = Expr::Binary {
                op,
                left: Box::new(left),
                right: Box::new(right),
            };
        }
    }

    fn mul(&mut self) -> Result<Expr, ConstraintParseError> {
        let mut left = self.unary()?;
        loop {
            let op = match self.peek().kind {
                TokenKind::Star => BinaryOp::Mul,
                TokenKind::Slash => BinaryOp::Div,
                _ => return Ok(left),
            };
            self.bump();
            let right = self.unary()?;
            left = Expr::Binary {
                op,
                left: Box::new(left),
                right: Box::new(right),
            };
        }
    }

    fn unary(&mut self) -> Result<Expr, ConstraintParseError> {
        if self.eat(&TokenKind::Minus) {
            let operand = self.unary()?;
            Ok(Expr::Unary {
                op: UnaryOp::Neg,
                operand: Box::new(operand),
            })
        } else {
            self.postfix()
        }
    }

    fn postfix(&mut self) -> Result<Expr, ConstraintParseError> {
        let mut expr = self.primary()?;
        loop {
            if self.eat(&TokenKind::Dot) {
                let (name, _, _) = self.expect_ident("property or role name")?;
                if self.peek().kind == TokenKind::LParen {
                    if name != "nav" {
                        return Err(self.error(&["operator ('nav' is the only dotted call)"]));
                    }
                    self.bump();
                    let role = match self.peek().kind.clone() {
                        TokenKind::Str(role) => {
                            self.bump();
                            role
                        }
                        _ => return Err(self.error(&["role name string"])),
                    };
                    self.expect(TokenKind::RParen, "')'")?;
                    expr = Expr::Nav {
                        object: Box::new(expr),
                        role,
                    };
                } else {
                    expr = Expr::Property {
                        object: Box::new(expr),
                        name,
                    };
                }
            } else if self.eat(&TokenKind::Arrow) {
                let (name, line, column) = self.expect_ident("collection operation")?;
                self.expect(TokenKind::LParen, "'('")?;
                match name.as_str() {
                    "size" | "isEmpty" | "notEmpty" => {
                        self.expect(TokenKind::RParen, "')'")?;
                        let op = match name.as_str() {
                            "size" => CollectionOp::Size,
                            "isEmpty" => CollectionOp::IsEmpty,
                            _ => CollectionOp::NotEmpty,
                        };
                        expr = Expr::CollectionOp {
                            collection: Box::new(expr),
                            op,
                        };
                    }
                    "exists" | "forAll" | "select" => {
                        let (var, _, _) = self.expect_ident("iterator variable")?;
                        self.expect(TokenKind::Pipe, "'|'")?;
                        self.scope.push(var.clone());
                        let body = self.expr()?;
                        self.scope.pop();
                        self.expect(TokenKind::RParen, "')'")?;
                        let op = match name.as_str() {
                            "exists" => IteratorOp::Exists,
                            "forAll" => IteratorOp::ForAll,
                            _ => IteratorOp::Select,
                        };
                        expr = Expr::Iterate {
                            collection: Box::new(expr),
                            op,
                            var,
                            body: Box::new(body),
                        };
                    }
                    other => {
                        return Err(ConstraintParseError::Syntax {
                            line,
                            column,
                            found: format!("unknown collection operation '{other}'"),
                            expected: vec![
                                "size".into(),
                                "isEmpty".into(),
                                "notEmpty".into(),
                                "exists".into(),
                                "forAll".into(),
                                "select".into(),
                            ],
                        })
                    }
                }
            } else {
                return Ok(expr);
            }
        }
    }

    fn primary(&mut self) -> Result<Expr, ConstraintParseError> {
        let tok = self.peek().clone();
        match tok.kind {
            TokenKind::KwSelf => {
                self.bump();
                Ok(Expr::SelfRef)
            }
            TokenKind::KwTrue => {
                self.bump();
                Ok(Expr::Bool(true))
            }
            TokenKind::KwFalse => {
                self.bump();
                Ok(Expr::Bool(false))
            }
            TokenKind::Int(v) => {
                self.bump();
                Ok(Expr::Int(v))
            }
            TokenKind::Real(v) => {
                self.bump();
                Ok(Expr::Real(v))
            }
            TokenKind::Str(s) => {
                self.bump();
                Ok(Expr::Str(s))
            }
            TokenKind::Ident(name) => {
                if !self.scope.contains(&name) {
                    return Err(ConstraintParseError::UnboundVariable {
                        name,
                        line: tok.line,
                        column: tok.column,
                    });
                }
                self.bump();
                Ok(Expr::Var(name))
            }
            TokenKind::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(self.error(&["expression"])),
        }
    }
}

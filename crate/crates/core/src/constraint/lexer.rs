//! Tokenizer for the constraint language.

use super::parser::ConstraintParseError;

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Int(i64),
    Real(f64),
    Str(String),
    KwSelf,
    KwTrue,
    KwFalse,
    KwNot,
    KwAnd,
    KwOr,
    KwImplies,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Dot,
    Arrow,
    LParen,
    RParen,
    Pipe,
    Eof,
}

impl TokenKind {
    /// Short description used in "expected X, found Y" messages.
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(name) => format!("identifier '{name}'"),
            TokenKind::Int(v) => format!("integer {v}"),
            TokenKind::Real(v) => format!("real {v}"),
            TokenKind::Str(s) => format!("string '{s}'"),
            TokenKind::KwSelf => "'self'".into(),
            TokenKind::KwTrue => "'true'".into(),
            TokenKind::KwFalse => "'false'".into(),
            TokenKind::KwNot => "'not'".into(),
            TokenKind::KwAnd => "'and'".into(),
            TokenKind::KwOr => "'or'".into(),
            TokenKind::KwImplies => "'implies'".into(),
            TokenKind::Eq => "'='".into(),
            TokenKind::Ne => "'<>'".into(),
            TokenKind::Lt => "'<'".into(),
            TokenKind::Le => "'<='".into(),
            TokenKind::Gt => "'>'".into(),
            TokenKind::Ge => "'>='".into(),
            TokenKind::Plus => "'+'".into(),
            TokenKind::Minus => "'-'".into(),
            TokenKind::Star => "'*'".into(),
            TokenKind::Slash => "'/'".into(),
            TokenKind::Dot => "'.'".into(),
            TokenKind::Arrow => "'->'".into(),
            TokenKind::LParen => "'('".into(),
            TokenKind::RParen => "')'".into(),
            TokenKind::Pipe => "'|'".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, ConstraintParseError> {
    let mut tokens = Vec::new();
    let mut chars = source.chars().peekable();
    let mut line = 1usize;
    let mut column = 1usize;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if let Some(c) = c {
                if c == '\n' {
                    line += 1;
                    column = 1;
                } else {
                    column += 1;
                }
            }
            c
        }};
    }

    loop {
        let (tok_line, tok_column) = (line, column);
        let c = match bump!() {
            Some(c) => c,
            None => {
                tokens.push(Token {
                    kind: TokenKind::Eof,
                    line,
                    column,
                });
                return Ok(tokens);
            }
        };
        let kind = match c {
            c if c.is_whitespace() => continue,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            '|' => TokenKind::Pipe,
            '.' => TokenKind::Dot,
            '+' => TokenKind::Plus,
            '*' => TokenKind::Star,
            '/' => TokenKind::Slash,
            '=' => TokenKind::Eq,
            '-' => {
                if chars.peek() == Some(&'>') {
                    bump!();
                    TokenKind::Arrow
                } else {
                    TokenKind::Minus
                }
            }
            '<' => match chars.peek() {
                Some('>') => {
                    bump!();
                    TokenKind::Ne
                }
                Some('=') => {
                    bump!();
                    TokenKind::Le
                }
                _ => TokenKind::Lt,
            },
            '>' => {
                if chars.peek() == Some(&'=') {
                    bump!();
                    TokenKind::Ge
                } else {
                    TokenKind::Gt
                }
            }
            '\'' => {
                let mut text = String::new();
                loop {
                    match bump!() {
                        Some('\'') => break,
                        Some(c) => text.push(c),
                        None => {
                            return Err(ConstraintParseError::Syntax {
                                line: tok_line,
                                column: tok_column,
                                found: "unterminated string literal".into(),
                                expected: vec!["closing '".into()],
                            })
                        }
                    }
                }
                TokenKind::Str(text)
            }
            c if c.is_ascii_digit() => {
                let mut text = String::new();
                text.push(c);
                while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    text.push(bump!().unwrap());
                }
                // A dot starts a fraction only when a digit follows;
                // otherwise it is a property access on the integer.
                let mut is_real = false;
                let mut lookahead = chars.clone();
                if lookahead.next() == Some('.')
                    && lookahead.next().is_some_and(|c| c.is_ascii_digit())
                {
                    is_real = true;
                    text.push(bump!().unwrap());
                    while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                        text.push(bump!().unwrap());
                    }
                }
                if is_real {
                    match text.parse::<f64>() {
                        Ok(v) => TokenKind::Real(v),
                        Err(_) => {
                            return Err(ConstraintParseError::Syntax {
                                line: tok_line,
                                column: tok_column,
                                found: format!("malformed real literal '{text}'"),
                                expected: vec!["real literal".into()],
                            })
                        }
                    }
                } else {
                    match text.parse::<i64>() {
                        Ok(v) => TokenKind::Int(v),
                        Err(_) => {
                            return Err(ConstraintParseError::Syntax {
                                line: tok_line,
                                column: tok_column,
                                found: format!("integer literal '{text}' out of range"),
                                expected: vec!["integer literal".into()],
                            })
                        }
                    }
                }
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut text = String::new();
                text.push(c);
                while chars
                    .peek()
                    .is_some_and(|c| c.is_alphanumeric() || *c == '_')
                {
                    text.push(bump!().unwrap());
                }
                match text.as_str() {
                    "self" => TokenKind::KwSelf,
                    "true" => TokenKind::KwTrue,
                    "false" => TokenKind::KwFalse,
                    "not" => TokenKind::KwNot,
                    "and" => TokenKind::KwAnd,
                    "or" => TokenKind::KwOr,
                    "implies" => TokenKind::KwImplies,
                    _ => TokenKind::Ident(text),
                }
            }
            other => {
                return Err(ConstraintParseError::Syntax {
                    line: tok_line,
                    column: tok_column,
                    found: format!("unexpected character '{other}'"),
                    expected: vec!["token".into()],
                })
            }
        };
        tokens.push(Token {
            kind,
            line: tok_line,
            column: tok_column,
        });
    }
}

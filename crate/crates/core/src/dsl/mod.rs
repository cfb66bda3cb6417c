//! Expression language for entire functions of a single complex variable `z`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' uint)*
//! atom   := number | 'i' | 'z' | func '(' expr ')' | '(' expr ')'
//! func   := sin | cos | exp | sinh | cosh
//! ```
//!
//! Literals are real; complex constants are written `a+b*i`. The caret is a
//! pointwise power with a nonnegative integer exponent, so every expression
//! that parses is entire. Chained carets are right-associative and fold into
//! a single integer exponent (`z^2^3` is `z^8`). There is no implicit
//! multiplication: `2z` is rejected.

mod expr;
mod lexer;
mod parser;

use std::fmt;

pub use expr::{make_symmetric_from_odd, BinaryOp, Expr, UnaryFn};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;

/// Lexing or parsing failure, located by 0-based character offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at offset {}: {}",
            self.position, self.message
        )
    }
}

impl std::error::Error for ParseError {}

use num_complex::Complex64;

use super::expr::{BinaryOp, Expr, UnaryFn};
use super::lexer::{tokenize, Token, TokenKind};
use super::ParseError;

/// Parses DSL source into an expression tree.
pub fn parse(source: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        end: source.chars().count(),
    };
    let expr = parser.expr()?;
    if let Some(tok) = parser.peek() {
        return Err(ParseError::new(
            tok.position,
            format!("unexpected {:?} after complete expression", tok.lexeme),
        ));
    }
    Ok(expr)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let tok = self.tokens.get(self.pos);
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.position)
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<&'a Token, ParseError> {
        match self.peek() {
            Some(tok) if tok.kind == kind => {
                self.pos += 1;
                Ok(tok)
            }
            Some(tok) => Err(ParseError::new(
                tok.position,
                format!("expected {what}, found {:?}", tok.lexeme),
            )),
            None => Err(ParseError::new(
                self.end,
                format!("expected {what}, found end of input"),
            )),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Plus) => BinaryOp::Add,
                Some(TokenKind::Minus) => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Star) => BinaryOp::Mul,
                Some(TokenKind::Slash) => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek_kind() == Some(TokenKind::Minus) {
            self.pos += 1;
            return Ok(Expr::unary(UnaryFn::Neg, self.factor()?));
        }
        let base = self.atom()?;
        if self.peek_kind() == Some(TokenKind::Caret) {
            self.pos += 1;
            let n = self.exponent()?;
            return Ok(Expr::pow(base, n));
        }
        Ok(base)
    }

    /// Integer exponent, folding right-associative chains like `2^3^2`.
    fn exponent(&mut self) -> Result<u32, ParseError> {
        let at = self.here();
        let tok = match self.peek() {
            Some(tok) if tok.kind == TokenKind::Number => tok,
            Some(tok) if tok.kind == TokenKind::Minus => {
                return Err(ParseError::new(at, "exponent must be nonnegative"));
            }
            Some(tok) => {
                return Err(ParseError::new(
                    at,
                    format!(
                        "exponent must be a nonnegative integer literal, found {:?}",
                        tok.lexeme
                    ),
                ));
            }
            None => return Err(ParseError::new(at, "dangling '^'")),
        };
        self.pos += 1;
        let base = integer_literal(tok)?;
        if self.peek_kind() != Some(TokenKind::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let inner = self.exponent()?;
        base.checked_pow(inner)
            .ok_or_else(|| ParseError::new(at, "exponent too large"))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.here();
        let Some(tok) = self.next() else {
            return Err(ParseError::new(at, "expected operand, found end of input"));
        };
        match tok.kind {
            TokenKind::Number => {
                let value: f64 = tok
                    .lexeme
                    .parse()
                    .map_err(|_| ParseError::new(tok.position, "malformed number"))?;
                if !value.is_finite() {
                    return Err(ParseError::new(tok.position, "number literal overflows"));
                }
                Ok(Expr::Const(Complex64::new(value, 0.0)))
            }
            TokenKind::Identifier => match tok.lexeme.as_str() {
                "z" => Ok(Expr::Var),
                "i" => Ok(Expr::Const(Complex64::i())),
                name => {
                    let func = UnaryFn::from_name(name).ok_or_else(|| {
                        ParseError::new(tok.position, format!("unknown identifier {name:?}"))
                    })?;
                    self.expect(TokenKind::LParen, &format!("'(' after {name}"))?;
                    let arg = self.expr()?;
                    self.expect(TokenKind::RParen, "')'")?;
                    Ok(Expr::unary(func, arg))
                }
            },
            TokenKind::LParen => {
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(ParseError::new(
                tok.position,
                format!("expected operand, found {:?}", tok.lexeme),
            )),
        }
    }
}

fn integer_literal(tok: &Token) -> Result<u32, ParseError> {
    let value: f64 = tok
        .lexeme
        .parse()
        .map_err(|_| ParseError::new(tok.position, "malformed number"))?;
    if value.fract() != 0.0 || value > u32::MAX as f64 {
        return Err(ParseError::new(
            tok.position,
            format!("exponent {} is not a nonnegative integer", tok.lexeme),
        ));
    }
    Ok(value as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Expr {
        Expr::constant(1.0)
    }

    #[test]
    fn shifted_sine_tree() {
        let expected = Expr::binary(
            BinaryOp::Add,
            one(),
            Expr::unary(UnaryFn::Sin, Expr::binary(BinaryOp::Sub, Expr::Var, one())),
        );
        assert_eq!(parse("1+sin(z-1)").unwrap(), expected);
    }

    #[test]
    fn gaussian_factor_tree() {
        let zm1 = || Expr::binary(BinaryOp::Sub, Expr::Var, one());
        let expected = Expr::binary(
            BinaryOp::Add,
            one(),
            Expr::binary(
                BinaryOp::Mul,
                zm1(),
                Expr::unary(UnaryFn::Exp, Expr::pow(zm1(), 2)),
            ),
        );
        assert_eq!(parse("1+(z-1)*exp((z-1)^2)").unwrap(), expected);
    }

    #[test]
    fn unary_minus_binds_looser_than_caret() {
        let expected = Expr::unary(UnaryFn::Neg, Expr::pow(Expr::Var, 2));
        assert_eq!(parse("-z^2").unwrap(), expected);
        assert_eq!(
            parse("(-z)^2").unwrap(),
            Expr::pow(Expr::unary(UnaryFn::Neg, Expr::Var), 2)
        );
        assert!(parse("2*-z").is_ok());
    }

    #[test]
    fn left_associative_subtraction() {
        let expected = Expr::binary(
            BinaryOp::Sub,
            Expr::binary(BinaryOp::Sub, Expr::constant(8.0), Expr::constant(3.0)),
            Expr::constant(2.0),
        );
        assert_eq!(parse("8-3-2").unwrap(), expected);
    }

    #[test]
    fn unclosed_paren() {
        let err = parse("sin(").unwrap_err();
        assert_eq!(err.position, 4);
        let err = parse("(z+1").unwrap_err();
        assert_eq!(err.position, 4);
    }

    #[test]
    fn malformed_inputs() {
        for src in [
            "", "1+", "*z", "z)", "sin z", "2z", "sin()", "z,z", "cos(z))",
        ] {
            assert!(parse(src).is_err(), "{src:?} should not parse");
        }
    }

    #[test]
    fn error_positions_are_within_source() {
        for src in ["", "1+", "sin(", "foo(z)", "z^", "z^1.5", "z^-2", "2z"] {
            let err = parse(src).unwrap_err();
            assert!(err.position <= src.chars().count(), "{src:?}: {err}");
        }
    }

    #[test]
    fn unknown_identifier() {
        let err = parse("1+tan(z)").unwrap_err();
        assert_eq!(err.position, 2);
        assert!(err.message.contains("tan"));
        assert!(parse("w+1").is_err());
    }

    #[test]
    fn bad_exponents() {
        assert!(parse("z^1.5").is_err());
        assert!(parse("z^-1").is_err());
        assert!(parse("z^z").is_err());
        assert!(parse("z^(2)").is_err());
        assert_eq!(parse("z^2.0").unwrap(), Expr::pow(Expr::Var, 2));
        assert_eq!(parse("z^0").unwrap(), Expr::pow(Expr::Var, 0));
        assert!(parse("z^99999^9").is_err());
    }
}

//! Recursive-descent parser for polynomial strings.
//!
//! Grammar: integer coefficients, `+ - * ^`, variables `x0..xN`, and
//! parentheses with unlimited nesting. Multiplication is always explicit.

use num_bigint::BigInt;
use thiserror::Error;

use super::poly::MultiPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.col,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> u8 {
        let c = self.src[self.pos];
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn next_token(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.bump();
        }
        let (line, col) = (self.line, self.col);
        let c = match self.peek() {
            None => return Ok((Tok::End, line, col)),
            Some(c) => c,
        };
        let tok = match c {
            b'+' => {
                self.bump();
                Tok::Plus
            }
            b'-' => {
                self.bump();
                Tok::Minus
            }
            b'*' => {
                self.bump();
                Tok::Star
            }
            b'^' => {
                self.bump();
                Tok::Caret
            }
            b'(' => {
                self.bump();
                Tok::LParen
            }
            b')' => {
                self.bump();
                Tok::RParen
            }
            b'0'..=b'9' => {
                let mut digits = String::new();
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    digits.push(self.bump() as char);
                }
                Tok::Int(digits.parse().expect("digit string"))
            }
            b'x' => {
                self.bump();
                let mut digits = String::new();
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    digits.push(self.bump() as char);
                }
                if digits.is_empty() {
                    return Err(ParseError {
                        line,
                        column: col,
                        message: "expected variable index after 'x'".into(),
                    });
                }
                let idx: usize = digits.parse().map_err(|_| ParseError {
                    line,
                    column: col,
                    message: format!("variable index 'x{}' out of range", digits),
                })?;
                Tok::Var(idx)
            }
            other => {
                return Err(self.error(format!("unexpected character '{}'", other as char)));
            }
        };
        Ok((tok, line, col))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: Tok,
    line: usize,
    col: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, nvars: usize) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src);
        let (current, line, col) = lexer.next_token()?;
        Ok(Parser {
            lexer,
            current,
            line,
            col,
            nvars,
        })
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.col,
            message: message.into(),
        }
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        let (tok, line, col) = self.lexer.next_token()?;
        self.current = tok;
        self.line = line;
        self.col = col;
        Ok(())
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = match self.current {
            Tok::Minus => {
                self.advance()?;
                self.term()?.neg()
            }
            _ => self.term()?,
        };
        loop {
            match self.current {
                Tok::Plus => {
                    self.advance()?;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.advance()?;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.current == Tok::Star {
            self.advance()?;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.primary()?;
        if self.current == Tok::Caret {
            self.advance()?;
            let e = match &self.current {
                Tok::Int(n) => {
                    use num_traits::ToPrimitive;
                    n.to_u32().ok_or_else(|| self.error("exponent too large"))?
                }
                _ => return Err(self.error("expected integer exponent after '^'")),
            };
            self.advance()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<MultiPoly, ParseError> {
        match self.current.clone() {
            Tok::Int(n) => {
                self.advance()?;
                Ok(MultiPoly::constant(self.nvars, n))
            }
            Tok::Var(idx) => {
                if idx >= self.nvars {
                    return Err(self.error(format!(
                        "variable x{} out of range (expected x0..x{})",
                        idx,
                        self.nvars - 1
                    )));
                }
                self.advance()?;
                Ok(MultiPoly::var(self.nvars, idx))
            }
            Tok::Minus => {
                self.advance()?;
                Ok(self.factor()?.neg())
            }
            Tok::LParen => {
                self.advance()?;
                let inner = self.expr()?;
                if self.current != Tok::RParen {
                    return Err(self.error("expected ')'"));
                }
                self.advance()?;
                Ok(inner)
            }
            Tok::End => Err(self.error("unexpected end of input")),
            _ => Err(self.error("expected a number, variable, or '('")),
        }
    }
}

/// Parse a polynomial in variables `x0..x{nvars-1}`.
pub fn parse_poly(src: &str, nvars: usize) -> Result<MultiPoly, ParseError> {
    let mut parser = Parser::new(src, nvars)?;
    let poly = parser.expr()?;
    if parser.current != Tok::End {
        return Err(parser.error("trailing input after expression"));
    }
    Ok(poly)
}

/// Parse, requiring a nonzero polynomial.
pub fn parse_nonzero_poly(src: &str, nvars: usize) -> Result<MultiPoly, ParseError> {
    let p = parse_poly(src, nvars)?;
    if p.is_zero() {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: "polynomial is identically zero".into(),
        });
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_forms() {
        let p = parse_poly("x0^2*x1 - 3*x2 + 7", 3).unwrap();
        let expect = MultiPoly::monomial(3, vec![2, 1, 0], 1)
            .add(&MultiPoly::monomial(3, vec![0, 0, 1], -3))
            .add(&MultiPoly::constant(3, 7));
        assert_eq!(p, expect);
    }

    #[test]
    fn parses_nested_parentheses() {
        let p = parse_poly("(x0 + x1)^2 * ((x0 - x1))", 2).unwrap();
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        assert_eq!(p, x.add(&y).pow(2).mul(&x.sub(&y)));
    }

    #[test]
    fn parses_unary_minus() {
        let p = parse_poly("-x0 + -2*x1", 2).unwrap();
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        assert_eq!(p, x.neg().sub(&y.mul_scalar(&BigInt::from(2))));
    }

    #[test]
    fn rejects_out_of_range_variable() {
        let err = parse_poly("x0 + x5", 3).unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.column, 6);
        assert!(err.message.contains("x5"));
    }

    #[test]
    fn rejects_malformed_input_with_position() {
        let err = parse_poly("x0 + * x1", 2).unwrap_err();
        assert_eq!((err.line, err.column), (1, 6));
        let err = parse_poly("x0 + x1 $", 2).unwrap_err();
        assert_eq!((err.line, err.column), (1, 9));
        let err = parse_poly("(x0 + x1", 2).unwrap_err();
        assert!(err.message.contains("')'"));
    }

    #[test]
    fn implicit_multiplication_is_rejected() {
        assert!(parse_poly("2x0", 1).is_err());
    }
}

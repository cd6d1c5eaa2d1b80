//! Recursive-descent parser for the matrix-expression grammar.
//!
//! ```text
//! equation := sum ( '=' sum )?
//! sum      := product ( ('+' | '-') product )*
//! product  := unary ( ('*' | '.*') unary )*
//! unary    := '-' unary | power
//! power    := postfix ( '^.' unary )?
//! postfix  := atom "'"*
//! atom     := ident | number | '(' equation ')' | '|' equation '|'
//! ident    := [A-Za-z_][A-Za-z0-9_]*
//! number   := digits ( '.' digits )?
//! ```
//!
//! There is no division operator.

use std::fmt;

use super::ast::ShapeExpr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub expected: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}: expected {}", self.position, self.expected)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Plus,
    Minus,
    Star,
    DotStar,
    Caret,
    Quote,
    Bar,
    LParen,
    RParen,
    Eq,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        let start = i;
        let two = |c: u8| bytes.get(i + 1) == Some(&c);
        let tok = match ch {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'\'' => Tok::Quote,
            b'|' => Tok::Bar,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'=' => Tok::Eq,
            b'.' if two(b'*') => {
                i += 1;
                Tok::DotStar
            }
            b'^' if two(b'.') => {
                i += 1;
                Tok::Caret
            }
            b'0'..=b'9' => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                if bytes.get(i + 1) == Some(&b'.') && bytes.get(i + 2).is_some_and(u8::is_ascii_digit) {
                    i += 2;
                    while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                        i += 1;
                    }
                }
                let value = text[start..=i].parse().map_err(|_| ParseError {
                    position: start,
                    expected: "number".into(),
                })?;
                Tok::Num(value)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                return Err(ParseError {
                    position: start,
                    expected: "operator, operand or parenthesis".into(),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.offset(),
            expected: expected.to_string(),
        })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn equation(&mut self) -> Result<ShapeExpr, ParseError> {
        let lhs = self.sum()?;
        if self.eat(&Tok::Eq) {
            let rhs = self.sum()?;
            return Ok(ShapeExpr::equate(lhs, rhs));
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<ShapeExpr, ParseError> {
        let mut acc = self.product()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = ShapeExpr::add(acc, self.product()?);
            } else if self.eat(&Tok::Minus) {
                acc = ShapeExpr::sub(acc, self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<ShapeExpr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = ShapeExpr::mul(acc, self.unary()?);
            } else if self.eat(&Tok::DotStar) {
                acc = ShapeExpr::elem_mul(acc, self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<ShapeExpr, ParseError> {
        if self.eat(&Tok::Minus) {
            return Ok(ShapeExpr::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ShapeExpr, ParseError> {
        let base = self.postfix()?;
        if self.eat(&Tok::Caret) {
            return Ok(ShapeExpr::elem_pow(base, self.unary()?));
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<ShapeExpr, ParseError> {
        let mut acc = self.atom()?;
        while self.eat(&Tok::Quote) {
            acc = ShapeExpr::transpose(acc);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<ShapeExpr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(ShapeExpr::Sym(name))
            }
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(ShapeExpr::ScalarLit(v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.equation()?;
                if !self.eat(&Tok::RParen) {
                    return self.fail("`)`");
                }
                Ok(inner)
            }
            Some(Tok::Bar) => {
                self.pos += 1;
                let inner = self.equation()?;
                if !self.eat(&Tok::Bar) {
                    return self.fail("closing `|`");
                }
                Ok(ShapeExpr::abs(inner))
            }
            _ => self.fail("operand"),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<ShapeExpr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
    };
    let expr = p.equation()?;
    if p.pos != p.toks.len() {
        return p.fail("end of input");
    }
    Ok(expr)
}

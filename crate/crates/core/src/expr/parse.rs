use super::{BinOp, Expr};
use crate::error::{Error, Result};
use crate::nilpotent::Primitive;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

/// Tokens paired with their byte offsets.
pub(crate) fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let v: f64 = text
                    .parse()
                    .map_err(|_| Error::Syntax { offset: start, message: format!("malformed number `{text}`") })?;
                out.push((start, Tok::Num(v)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax { offset: start, message: format!("unexpected character `{ch}`") });
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Parses an expression in the grammar documented on [`crate::expr`].
pub fn parse(src: &str) -> Result<Expr> {
    parse_tokens(lex(src)?, src.len())
}

/// Parses an already-lexed token run; `end` is the offset reported for a premature end.
pub(crate) fn parse_tokens(tokens: Vec<(usize, Tok)>, end: usize) -> Result<Expr> {
    let mut p = Parser { tokens, pos: 0, end };
    let e = p.expr()?;
    if let Some((off, tok)) = p.tokens.get(p.pos) {
        return Err(Error::Syntax { offset: *off, message: format!("unexpected {}", tok.describe()) });
    }
    Ok(e)
}

struct Parser {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn unexpected(&self) -> Error {
        match self.tokens.get(self.pos) {
            Some((off, tok)) => Error::Syntax { offset: *off, message: format!("unexpected {}", tok.describe()) },
            None => Error::Syntax { offset: self.end, message: "unexpected end of input".into() },
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat(&Tok::Plus) {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let p = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), p));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<f64> {
        let start = self.offset();
        if self.eat(&Tok::LParen) {
            let v = self.exponent().map_err(|e| match e {
                Error::NonLiteralExponent { .. } => Error::NonLiteralExponent { offset: start },
                other => other,
            })?;
            if !self.eat(&Tok::RParen) {
                return Err(match self.peek() {
                    None => self.unexpected(),
                    Some(_) => Error::NonLiteralExponent { offset: start },
                });
            }
            return Ok(v);
        }
        let sign = if self.eat(&Tok::Minus) {
            -1.0
        } else {
            self.eat(&Tok::Plus);
            1.0
        };
        let v = match self.peek() {
            Some(Tok::Num(v)) => *v,
            None => return Err(self.unexpected()),
            Some(_) => return Err(Error::NonLiteralExponent { offset: start }),
        };
        self.pos += 1;
        let v = if self.eat(&Tok::Caret) { v.powf(self.exponent()?) } else { v };
        // A literal exponent followed directly by an operand-like token means the
        // exponent was a larger expression, e.g. `x^(2*y)` or `x^2y`.
        if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::LParen)) {
            return Err(Error::NonLiteralExponent { offset: start });
        }
        Ok(sign * v)
    }

    fn atom(&mut self) -> Result<Expr> {
        let Some((off, tok)) = self.tokens.get(self.pos).cloned() else {
            return Err(self.unexpected());
        };
        match tok {
            Tok::Num(v) => {
                self.pos += 1;
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::LParen) {
                    let prim = Primitive::from_name(&name)
                        .ok_or(Error::UnknownPrimitive { name: name.clone(), offset: off })?;
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect(&Tok::RParen)?;
                    Ok(Expr::call(prim, arg))
                } else if Primitive::from_name(&name).is_some() {
                    Err(Error::Syntax { offset: self.offset(), message: format!("expected `(` after `{name}`") })
                } else {
                    Ok(Expr::Var(name))
                }
            }
            _ => Err(self.unexpected()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn can_surface_area() {
        let e = p("2*pi*r*h + 2*pi*r^2");
        match &e {
            Expr::Binary(BinOp::Add, _, rhs) => {
                assert!(matches!(**rhs, Expr::Binary(BinOp::Mul, _, _)));
            }
            other => panic!("unexpected tree {other:?}"),
        }
    }

    #[test]
    fn catenary_call_tree() {
        let e = p("a*cosh(x/a)");
        let expect = Expr::binary(
            BinOp::Mul,
            Expr::var("a"),
            Expr::call(Primitive::Cosh, Expr::binary(BinOp::Div, Expr::var("x"), Expr::var("a"))),
        );
        assert_eq!(e, expect);
    }

    #[test]
    fn syntax_error_offset() {
        assert_eq!(parse("1 + * 2"), Err(Error::Syntax { offset: 4, message: "unexpected `*`".into() }));
        assert!(matches!(parse("(1 + 2"), Err(Error::Syntax { offset: 6, .. })));
        assert!(matches!(parse("1 2"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("x $ y"), Err(Error::Syntax { offset: 2, .. })));
    }

    #[test]
    fn unknown_and_non_smooth_primitives() {
        assert_eq!(parse("1 + abs(x)"), Err(Error::UnknownPrimitive { name: "abs".into(), offset: 4 }));
        assert!(matches!(parse("floor(x)"), Err(Error::UnknownPrimitive { .. })));
        assert!(matches!(parse("sin + 1"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn exponents() {
        assert_eq!(p("x^2"), Expr::Pow(Box::new(Expr::var("x")), 2.0));
        assert_eq!(p("x^-1"), Expr::Pow(Box::new(Expr::var("x")), -1.0));
        assert_eq!(p("x^(-0.5)"), Expr::Pow(Box::new(Expr::var("x")), -0.5));
        // right-associative: x^(2^3)
        assert_eq!(p("x^2^3"), Expr::Pow(Box::new(Expr::var("x")), 8.0));
        assert_eq!(parse("x^y"), Err(Error::NonLiteralExponent { offset: 2 }));
        assert_eq!(parse("x^(2*y)"), Err(Error::NonLiteralExponent { offset: 2 }));
        assert!(matches!(parse("x^pi"), Err(Error::NonLiteralExponent { .. })));
    }

    #[test]
    fn unary_minus_binds_below_power() {
        assert_eq!(p("-x^2"), Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::var("x")), 2.0))));
    }

    #[test]
    fn scientific_literals() {
        assert_eq!(p("1.5e-3"), Expr::Num(1.5e-3));
        assert_eq!(p(".5"), Expr::Num(0.5));
        assert!(parse("2e").is_err());
    }
}

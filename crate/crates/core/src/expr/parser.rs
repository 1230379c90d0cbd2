//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' factor)?
//! atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
//! ```
//!
//! `pi` and `e` are accepted as named numeric literals.

use super::ast::{BinaryOp, Expr, Func, UnaryOp, Var};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
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
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                out.push(Token {
                    tok: Tok::Op(c as char),
                    offset: start,
                });
                i += 1;
            }
            b'(' => {
                out.push(Token {
                    tok: Tok::LParen,
                    offset: start,
                });
                i += 1;
            }
            b')' => {
                out.push(Token {
                    tok: Tok::RParen,
                    offset: start,
                });
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                // Exponent only if digits actually follow; otherwise `e` is left for the identifier lexer.
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
                let value: f64 = text
                    .parse()
                    .map_err(|_| syntax(start, format!("malformed number `{text}`")))?;
                out.push(Token {
                    tok: Tok::Num(value),
                    offset: start,
                });
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(src[start..i].to_string()),
                    offset: start,
                });
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        }
    }
    out.push(Token {
        tok: Tok::End,
        offset: src.len(),
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Op('+') => BinaryOp::Add,
                Tok::Op('-') => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().tok {
                Tok::Op('*') => BinaryOp::Mul,
                Tok::Op('/') => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.peek().tok == Tok::Op('-') {
            self.bump();
            let inner = self.factor()?;
            return Ok(Expr::Unary(UnaryOp::Neg, Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek().tok == Tok::Op('^') {
            self.bump();
            // Right operand is a `factor`, which makes `^` right-associative.
            let exponent = self.factor()?;
            return Ok(Expr::binary(BinaryOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let Token { tok, offset } = self.bump();
        match tok {
            Tok::Num(v) => Ok(Expr::Number(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if self.peek().tok == Tok::LParen {
                    let func = Func::from_name(&name).ok_or_else(|| Error::UnknownIdentifier {
                        name: name.clone(),
                        offset,
                    })?;
                    self.bump();
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Expr::call(func, arg));
                }
                if let Some(v) = Var::from_name(&name) {
                    return Ok(Expr::Var(v));
                }
                match name.as_str() {
                    "pi" => Ok(Expr::Number(std::f64::consts::PI)),
                    "e" => Ok(Expr::Number(std::f64::consts::E)),
                    _ if Func::from_name(&name).is_some() => Err(syntax(
                        offset + name.len(),
                        format!("expected `(` after `{name}`"),
                    )),
                    _ => Err(Error::UnknownIdentifier { name, offset }),
                }
            }
            Tok::End => Err(syntax(offset, "unexpected end of input")),
            Tok::RParen => Err(syntax(offset, "unexpected `)`")),
            Tok::Op(c) => Err(syntax(offset, format!("unexpected operator `{c}`"))),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        let t = self.bump();
        match t.tok {
            Tok::RParen => Ok(()),
            Tok::End => Err(syntax(t.offset, "expected `)` before end of input")),
            _ => Err(syntax(t.offset, "expected `)`")),
        }
    }
}

/// Parses `src` into an expression tree.
///
/// Errors carry the byte offset of the offending token; `UnknownIdentifier`
/// is raised for names that are neither a coordinate symbol, a constant,
/// nor one of the supported functions.
pub fn parse(src: &str) -> Result<Expr> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    let t = p.peek();
    if t.tok != Tok::End {
        return Err(syntax(t.offset, "unexpected trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Expr {
        Expr::Var(Var::X)
    }

    #[test]
    fn precedence_of_product_over_sum() {
        let e = parse("x + y*z").unwrap();
        assert_eq!(e, x() + Expr::Var(Var::Y) * Expr::Var(Var::Z));
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let e = parse("-t^2").unwrap();
        assert_eq!(e, -Expr::Var(Var::T).pow(Expr::num(2.0)));
    }

    #[test]
    fn power_is_right_associative() {
        let e = parse("2^3^2").unwrap();
        assert_eq!(e, Expr::num(2.0).pow(Expr::num(3.0).pow(Expr::num(2.0))));
        let e = parse("2^-x").unwrap();
        assert_eq!(e, Expr::num(2.0).pow(-x()));
    }

    #[test]
    fn subtraction_is_left_associative() {
        let e = parse("x - 1 - 2").unwrap();
        assert_eq!(e, (x() - Expr::num(1.0)) - Expr::num(2.0));
        let e = parse("x / 2 / 4").unwrap();
        assert_eq!(e, (x() / Expr::num(2.0)) / Expr::num(4.0));
    }

    #[test]
    fn unclosed_call_reports_end_offset() {
        match parse("sin(") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_names() {
        assert!(matches!(
            parse("w + 1"),
            Err(Error::UnknownIdentifier { ref name, offset: 0 }) if name == "w"
        ));
        assert!(matches!(
            parse("1 + foo(x)"),
            Err(Error::UnknownIdentifier { ref name, offset: 4 }) if name == "foo"
        ));
    }

    #[test]
    fn numbers_and_constants() {
        assert_eq!(parse("1.5e3").unwrap(), Expr::num(1500.0));
        assert_eq!(parse(".25").unwrap(), Expr::num(0.25));
        assert_eq!(parse("2E-2").unwrap(), Expr::num(0.02));
        assert_eq!(parse("pi").unwrap(), Expr::num(std::f64::consts::PI));
        assert_eq!(parse("e").unwrap(), Expr::num(std::f64::consts::E));
        // `2e` is a number followed by the constant, which is not valid juxtaposition.
        assert!(matches!(parse("2e"), Err(Error::Syntax { offset: 1, .. })));
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(
            parse(" sin ( x )*\t2 ").unwrap(),
            parse("sin(x)*2").unwrap()
        );
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse(""), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse("x +"), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse("(x"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("x y"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(
            parse("x $ 1"),
            Err(Error::Syntax { offset: 2, .. })
        ));
        assert!(matches!(parse("sqrt + 1"), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse("1..2"),
            Err(Error::Syntax { offset: 2, .. })
        ));
    }
}

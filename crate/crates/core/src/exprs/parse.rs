//! Recursive-descent parser for the component expression grammar:
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') ['-'] term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' nonneg-integer)?
//! base   := integer | identifier | '(' expr ')'
//! ```
//!
//! A rational literal `3/2` is read as the quotient of two integers, which
//! yields the same value.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Chart, ExprError, ScalarExpr};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().expect("digits"))));
                continue;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            other => {
                return Err(ExprError::SyntaxError {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    chart: &'a Chart,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::SyntaxError {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn signed_term(&mut self) -> Result<ScalarExpr, ExprError> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            Ok(-self.term()?)
        } else {
            self.term()
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr, ExprError> {
        let mut acc = self.signed_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.signed_term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.signed_term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ScalarExpr, ExprError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let d = self.factor()?;
                    acc = acc.checked_div(&d)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ScalarExpr, ExprError> {
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e: u32 = match u32::try_from(&n) {
                        Ok(e) if e <= 1024 => e,
                        _ => {
                            self.at -= 1;
                            return self.err("exponent too large");
                        }
                    };
                    Ok(base.pow(e))
                }
                _ => {
                    self.at -= 1;
                    self.err("expected a non-negative integer exponent")
                }
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<ScalarExpr, ExprError> {
        match self.bump() {
            Some(Tok::Int(n)) => Ok(ScalarExpr::from_rational(BigRational::from_integer(n))),
            Some(Tok::Ident(name)) => match self.chart.position(&name) {
                Some(i) => Ok(ScalarExpr::var(i)),
                None => Err(ExprError::UnknownIdentifier(name)),
            },
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    self.at -= 1;
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(_) => {
                self.at -= 1;
                self.err("expected a number, coordinate or `(`")
            }
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parses `text` into canonical form over `chart`.
pub fn parse_scalar(text: &str, chart: &Chart) -> Result<ScalarExpr, ExprError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        chart,
    };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> Chart {
        Chart::new(["x1", "x2", "x3"]).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        let c = chart();
        let a = parse_scalar("1 - 2 - 3", &c).unwrap();
        assert_eq!(a, ScalarExpr::from_int(-4));
        let b = parse_scalar("8/2/2", &c).unwrap();
        assert_eq!(b, ScalarExpr::from_int(2));
        let d = parse_scalar("2*x1^2", &c).unwrap();
        assert_eq!(d, &ScalarExpr::from_int(2) * &ScalarExpr::var(0).pow(2));
        assert_eq!(
            parse_scalar("-x1 - -x2", &c).unwrap(),
            parse_scalar("x2 - x1", &c).unwrap()
        );
        assert_eq!(parse_scalar("1/2^2", &c).unwrap(), ScalarExpr::ratio(1, 4));
        assert_eq!(parse_scalar("x1^0", &c).unwrap(), ScalarExpr::one());
    }

    #[test]
    fn errors() {
        let c = chart();
        assert_eq!(
            parse_scalar("y + 1", &c),
            Err(ExprError::UnknownIdentifier("y".into()))
        );
        assert!(matches!(
            parse_scalar("x1 x2", &c),
            Err(ExprError::SyntaxError { .. })
        ));
        assert!(matches!(
            parse_scalar("", &c),
            Err(ExprError::SyntaxError { .. })
        ));
        assert!(matches!(
            parse_scalar("(x1", &c),
            Err(ExprError::SyntaxError { .. })
        ));
        assert!(matches!(
            parse_scalar("x1^-1", &c),
            Err(ExprError::SyntaxError { .. })
        ));
        assert!(matches!(
            parse_scalar("x1^2^2", &c),
            Err(ExprError::SyntaxError { .. })
        ));
        assert!(matches!(
            parse_scalar("x1 # 2", &c),
            Err(ExprError::SyntaxError { pos: 3, .. })
        ));
        assert_eq!(
            parse_scalar("1/(x1 - x1)", &c),
            Err(ExprError::ZeroDenominator)
        );
        assert_eq!(parse_scalar("x2/0", &c), Err(ExprError::ZeroDenominator));
    }
}

//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr  := term { ("+" | "-") term }
//! term  := unary { ("*" | "/") unary }
//! unary := ["-"] power
//! power := atom [ "^" uint ]
//! atom  := uint | ident | "exp" "(" expr ")" | "(" expr ")"
//! ```
//!
//! A divisor must be a unit of the ring (a nonzero constant times an
//! exponential), so `1/2`, `z1^2/2` and `x/exp(x)` are accepted and `1/x` is
//! not. Columns in errors are 1-based character offsets.

use std::sync::Arc;

use num_bigint::BigInt;

use super::{Chart, ExpPoly, ExprError};
use crate::scalar::Scalar;

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
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits.parse::<BigInt>().map_err(|e| ExprError::Syntax { pos: col, msg: e.to_string() })?;
            out.push(Token { tok: Tok::Int(n), col });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), col });
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ExprError::Syntax { pos: col, msg: format!("unexpected character `{other}`") })
            }
        };
        out.push(Token { tok, col });
        i += 1;
    }
    out.push(Token { tok: Tok::End, col: chars.len() + 1 });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    chart: &'a Arc<Chart>,
}

/// Parses `text` into its canonical expression on `chart`.
pub fn parse<T: Scalar>(text: &str, chart: &Arc<Chart>) -> Result<ExpPoly<T>, ExprError> {
    let mut parser = Parser { tokens: lex(text)?, pos: 0, chart };
    let e = parser.expr()?;
    let next = parser.peek();
    if next.tok != Tok::End {
        return Err(ExprError::Syntax { pos: next.col, msg: "unexpected trailing input".into() });
    }
    Ok(e)
}

impl Parser<'_> {
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

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ExprError> {
        let t = self.bump();
        if t.tok == want {
            Ok(())
        } else {
            Err(ExprError::Syntax { pos: t.col, msg: format!("expected {what}") })
        }
    }

    fn expr<T: Scalar>(&mut self) -> Result<ExpPoly<T>, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<T: Scalar>(&mut self) -> Result<ExpPoly<T>, ExprError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    acc = acc * self.unary()?;
                }
                Tok::Slash => {
                    let col = self.bump().col;
                    let den = self.unary()?;
                    if den.is_zero() {
                        return Err(ExprError::DivisionByZero { pos: col });
                    }
                    let is_unit = den.as_monomial().is_some_and(|(m, _, _)| m.is_one());
                    if !is_unit {
                        return Err(ExprError::NonUnitDivisor { pos: col });
                    }
                    acc = acc.div_exact(&den)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary<T: Scalar>(&mut self) -> Result<ExpPoly<T>, ExprError> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            Ok(-self.power()?)
        } else {
            self.power()
        }
    }

    fn power<T: Scalar>(&mut self) -> Result<ExpPoly<T>, ExprError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.bump();
        match t.tok {
            Tok::Int(n) => {
                let k = u32::try_from(n).map_err(|_| ExprError::ExponentTooLarge { pos: t.col })?;
                if k > 64 {
                    return Err(ExprError::ExponentTooLarge { pos: t.col });
                }
                Ok(base.pow(k))
            }
            _ => Err(ExprError::Syntax { pos: t.col, msg: "expected a non-negative integer exponent".into() }),
        }
    }

    fn atom<T: Scalar>(&mut self) -> Result<ExpPoly<T>, ExprError> {
        let t = self.bump();
        match t.tok {
            Tok::Int(n) => Ok(ExpPoly::constant(self.chart, T::from_integer(&n))),
            Tok::Ident(name) if name == "exp" => {
                self.expect(Tok::LParen, "`(` after exp")?;
                let arg_col = self.peek().col;
                let arg: ExpPoly<T> = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                arg.exp().map_err(|_| ExprError::NestedExponential { pos: arg_col })
            }
            Tok::Ident(name) => match self.chart.index_of(&name) {
                Some(i) => Ok(ExpPoly::var(self.chart, i)),
                None => Err(ExprError::UnknownIdentifier { name, pos: t.col }),
            },
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::End => Err(ExprError::Syntax { pos: t.col, msg: "unexpected end of input".into() }),
            _ => Err(ExprError::Syntax { pos: t.col, msg: "expected a number, coordinate, exp(...) or `(`".into() }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn chart() -> Arc<Chart> {
        Chart::new(["x", "y", "z"]).unwrap()
    }

    fn parse_q(s: &str) -> Result<ExpPoly<Rational>, ExprError> {
        parse(s, &chart())
    }

    #[test]
    fn typeset_style_inputs() {
        let e = parse_q("1/2 * exp(-x)").unwrap();
        let (m, p, c) = e.as_monomial().unwrap();
        assert!(m.is_one());
        assert_eq!(*c, Rational::from_ratio(1, 2));
        let terms: Vec<_> = p.terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0.exponents(), &[1, 0, 0]);
        assert_eq!(*terms[0].1, Rational::from_i64(-1));
    }

    #[test]
    fn zero_and_cancellation() {
        assert!(parse_q("0").unwrap().is_zero());
        assert_eq!(parse_q("exp(x)*exp(-x) + z - z").unwrap(), ExpPoly::one(&chart()));
    }

    #[test]
    fn precedence() {
        assert_eq!(parse_q("-x^2").unwrap(), -parse_q("x*x").unwrap());
        assert_eq!(parse_q("2*-x").unwrap(), parse_q("-2*x").unwrap());
        assert_eq!(parse_q("1 - 2 - 3").unwrap(), parse_q("-4").unwrap());
        assert_eq!(parse_q("z^2/2").unwrap(), parse_q("1/2*z^2").unwrap());
        assert_eq!(parse_q("x/exp(x)").unwrap(), parse_q("x*exp(-x)").unwrap());
        assert_eq!(parse_q("exp(x)^3").unwrap(), parse_q("exp(3*x)").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_q("exp(exp(x))"), Err(ExprError::NestedExponential { pos: 5 }));
        assert_eq!(
            parse_q("x + w"),
            Err(ExprError::UnknownIdentifier { name: "w".into(), pos: 5 })
        );
        assert_eq!(parse_q("1/x"), Err(ExprError::NonUnitDivisor { pos: 2 }));
        assert_eq!(parse_q("1/0"), Err(ExprError::DivisionByZero { pos: 2 }));
        assert!(matches!(parse_q("x +"), Err(ExprError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_q("(x"), Err(ExprError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_q("x $"), Err(ExprError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_q("x y"), Err(ExprError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_q("x^y"), Err(ExprError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_q("x^99999999999"), Err(ExprError::ExponentTooLarge { .. })));
        assert!(matches!(parse_q("+x"), Err(ExprError::Syntax { pos: 1, .. })));
    }

    #[test]
    fn exp_of_zero_polynomial_is_allowed() {
        assert_eq!(parse_q("exp(exp(x) - exp(x))").unwrap(), ExpPoly::one(&chart()));
    }
}

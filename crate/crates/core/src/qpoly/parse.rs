//! Expression parser for Pol(SU_q(2)).
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (['*'] unary)*          juxtaposition multiplies
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := number ['i'] | 'i' | ident ['*'] | '(' expr ')'
//! ident  := a | alpha | g | gamma
//! ```
//!
//! A `*` written directly after a generator name is the adjoint marker when
//! the next character does not start an operand: `a* * a` and `a**a` are
//! `α*·α`, while `a*a` is `α·α`.

use super::{Letter, QParam, QPoly};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(C64),
    Gen(Letter),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Int(u32),
}

fn starts_operand(c: Option<char>) -> bool {
    matches!(c, Some(c) if c.is_ascii_alphanumeric() || c == '.' || c == '(' || c == '_')
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => toks.push((start, Tok::Plus)),
            '-' | '−' => toks.push((start, Tok::Minus)),
            '*' | '·' => toks.push((start, Tok::Star)),
            '^' => toks.push((start, Tok::Caret)),
            '(' => toks.push((start, Tok::LParen)),
            ')' => toks.push((start, Tok::RParen)),
            c if c.is_ascii_digit() || c == '.' => {
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len()
                    && (chars[i] == 'e' || chars[i] == 'E')
                    && i + 1 < chars.len()
                    && (chars[i + 1].is_ascii_digit()
                        || ((chars[i + 1] == '-' || chars[i + 1] == '+')
                            && i + 2 < chars.len()
                            && chars[i + 2].is_ascii_digit()))
                {
                    i += 2;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let lit: String = chars[start..i].iter().collect();
                let value: f64 = lit.parse().map_err(|_| Error::Syntax {
                    pos: start,
                    msg: format!("malformed number `{lit}`"),
                })?;
                // an `i` suffix not followed by more identifier characters
                let imag = i < chars.len()
                    && chars[i] == 'i'
                    && !chars.get(i + 1).is_some_and(|c| c.is_ascii_alphanumeric());
                if imag {
                    i += 1;
                    toks.push((start, Tok::Num(C64::new(0.0, value))));
                } else if !lit.contains(['.', 'e', 'E']) {
                    match lit.parse::<u32>() {
                        Ok(k) => toks.push((start, Tok::Int(k))),
                        Err(_) => toks.push((start, Tok::Num(C64::new(value, 0.0)))),
                    }
                } else {
                    toks.push((start, Tok::Num(C64::new(value, 0.0))));
                }
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                let starred = i < chars.len() && chars[i] == '*' && !starts_operand(chars.get(i + 1).copied());
                if starred {
                    i += 1;
                }
                let tok = match name.as_str() {
                    "i" if !starred => Tok::Num(C64::i()),
                    "a" | "alpha" | "g" | "gamma" => {
                        let base: Letter = name.parse()?;
                        Tok::Gen(if starred { base.star() } else { base })
                    }
                    _ => return Err(Error::UnknownIdentifier { name, pos: start }),
                };
                toks.push((start, tok));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
        i += 1;
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    param: QParam,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<QPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Num(_) | Tok::Int(_) | Tok::Gen(_) | Tok::LParen) => {
                    acc = &acc * &self.unary()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<QPoly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<QPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.peek() {
                Some(&Tok::Int(k)) => {
                    self.pos += 1;
                    Ok(base.pow(k))
                }
                _ => self.err("expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<QPoly> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.err("unexpected end of input"),
        };
        self.pos += 1;
        match tok {
            Tok::Num(c) => Ok(QPoly::scalar(self.param, c)),
            Tok::Int(k) => Ok(QPoly::scalar(self.param, C64::new(k as f64, 0.0))),
            Tok::Gen(l) => Ok(QPoly::generator(self.param, l)),
            Tok::LParen => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => {
                self.pos -= 1;
                self.err("expected an operand")
            }
        }
    }
}

/// Parses an expression and returns its PBW normal form.
pub fn parse(text: &str, param: QParam) -> Result<QPoly> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Syntax {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.chars().count(),
        param,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::Monomial;

    fn half() -> QParam {
        QParam::new(0.5).unwrap()
    }

    #[test]
    fn unit_relation_parses_to_one() {
        let p = parse("a* * a + g* * g", half()).unwrap();
        assert!(p.distance(&QPoly::one(half())) < 1e-15);
        let p = parse("alpha** alpha + gamma**gamma", half()).unwrap();
        assert!(p.distance(&QPoly::one(half())) < 1e-15);
    }

    #[test]
    fn literal_one() {
        let p = parse("1", half()).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff(&Monomial::UNIT), C64::new(1.0, 0.0));
    }

    #[test]
    fn reordering() {
        let p = parse("g * a", half()).unwrap();
        assert_eq!(p, QPoly::monomial(half(), Monomial::new(1, 1, 0), C64::new(2.0, 0.0)));
    }

    #[test]
    fn complex_literals_and_powers() {
        let p = parse("(1 + 2i) * g^2 - 0.5i g*", half()).unwrap();
        assert_eq!(p.coeff(&Monomial::new(0, 2, 0)), C64::new(1.0, 2.0));
        assert_eq!(p.coeff(&Monomial::new(0, 0, 1)), C64::new(0.0, -0.5));
        let p = parse("a*^2", half()).unwrap();
        assert_eq!(p, QPoly::monomial(half(), Monomial::new(-2, 0, 0), C64::new(1.0, 0.0)));
        let p = parse("a*a", half()).unwrap();
        assert_eq!(p, QPoly::monomial(half(), Monomial::new(2, 0, 0), C64::new(1.0, 0.0)));
        let p = parse("i", half()).unwrap();
        assert_eq!(p.coeff(&Monomial::UNIT), C64::i());
        let p = parse("1e-1 * a", half()).unwrap();
        assert_eq!(p.coeff(&Monomial::new(1, 0, 0)), C64::new(0.1, 0.0));
    }

    #[test]
    fn errors_carry_positions() {
        match parse("a + b", half()) {
            Err(Error::UnknownIdentifier { name, pos }) => {
                assert_eq!(name, "b");
                assert_eq!(pos, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse("a + (g", half()) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("a ^ x", half()), Err(Error::UnknownIdentifier { .. })));
        assert!(matches!(parse("a ^ 1.5", half()), Err(Error::Syntax { .. })));
        assert!(matches!(parse("", half()), Err(Error::Syntax { .. })));
        assert!(matches!(parse("a $ g", half()), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("a )", half()), Err(Error::Syntax { pos: 2, .. })));
    }
}

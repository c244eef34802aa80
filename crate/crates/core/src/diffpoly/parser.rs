//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor ("*" factor)*
//! factor := atom ("^" NAT)*        -- right-associative tower of literals
//! atom   := NAT | VAR ("@" NAT)? | "(" expr ")" | "-" atom
//! ```
//!
//! Columns in errors are 0-based character offsets.

use num_bigint::BigUint;

use super::{DifferencePolynomial, PolyRing};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Nat(String),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Lexer> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            toks.push((Tok::Nat(chars[start..i].iter().collect()), start));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*^@()".contains(c) {
            toks.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(Error::Syntax {
                column: i,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    toks.push((Tok::End, chars.len()));
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            column: self.column(),
            msg: msg.into(),
        })
    }

    fn nat_u64(&mut self, what: &str) -> Result<u64> {
        let col = self.column();
        match self.bump() {
            Tok::Nat(s) => s.parse().map_err(|_| Error::Syntax {
                column: col,
                msg: format!("{what} {s} is too large"),
            }),
            _ => Err(Error::Syntax {
                column: col,
                msg: format!("expected a nonnegative integer {what}"),
            }),
        }
    }
}

/// `parse_poly`: parse and normalize a difference polynomial.
pub fn parse_poly(ring: &PolyRing, text: &str) -> Result<DifferencePolynomial> {
    let mut lx = lex(text)?;
    let p = expr(ring, &mut lx)?;
    if *lx.peek() != Tok::End {
        return lx.error("unexpected trailing input");
    }
    Ok(p)
}

fn expr(ring: &PolyRing, lx: &mut Lexer) -> Result<DifferencePolynomial> {
    let mut acc = term(ring, lx)?;
    loop {
        match lx.peek() {
            Tok::Sym('+') => {
                lx.bump();
                acc = acc.add(&term(ring, lx)?);
            }
            Tok::Sym('-') => {
                lx.bump();
                acc = acc.sub(&term(ring, lx)?);
            }
            _ => return Ok(acc),
        }
    }
}

fn term(ring: &PolyRing, lx: &mut Lexer) -> Result<DifferencePolynomial> {
    let mut acc = factor(ring, lx)?;
    while *lx.peek() == Tok::Sym('*') {
        lx.bump();
        acc = acc.mul(&factor(ring, lx)?);
    }
    Ok(acc)
}

fn factor(ring: &PolyRing, lx: &mut Lexer) -> Result<DifferencePolynomial> {
    let base = atom(ring, lx)?;
    let mut exps = Vec::new();
    while *lx.peek() == Tok::Sym('^') {
        lx.bump();
        exps.push(lx.nat_u64("exponent")?);
    }
    // a^b^c = a^(b^c)
    let Some(mut e) = exps.pop() else {
        return Ok(base);
    };
    while let Some(b) = exps.pop() {
        e = u32::try_from(e)
            .ok()
            .and_then(|e32| b.checked_pow(e32))
            .ok_or_else(|| Error::Poly("exponent tower overflows".into()))?;
    }
    Ok(base.pow(e))
}

fn atom(ring: &PolyRing, lx: &mut Lexer) -> Result<DifferencePolynomial> {
    let col = lx.column();
    match lx.bump() {
        Tok::Nat(s) => {
            let v: BigUint = s.parse().expect("digits");
            Ok(ring.constant(ring.field.from_biguint(&v)))
        }
        Tok::Ident(name) => {
            let shift = if *lx.peek() == Tok::Sym('@') {
                lx.bump();
                let k = lx.nat_u64("shift")?;
                Some(u32::try_from(k).map_err(|_| Error::Syntax {
                    column: col,
                    msg: "shift too large".into(),
                })?)
            } else {
                None
            };
            if let Some(j) = ring.var_index(&name) {
                return Ok(ring.var(j, shift.unwrap_or(0)));
            }
            if ring.generator.as_deref() == Some(name.as_str()) {
                if shift.is_some() {
                    return Err(Error::Syntax {
                        column: col,
                        msg: format!("constant {name} cannot be shifted"),
                    });
                }
                return Ok(ring.constant(ring.field.generator()));
            }
            Err(Error::UnknownVariable(name))
        }
        Tok::Sym('(') => {
            let inner = expr(ring, lx)?;
            if lx.bump() != Tok::Sym(')') {
                return Err(Error::Syntax {
                    column: lx.toks[lx.pos.saturating_sub(1)].1,
                    msg: "expected ')'".into(),
                });
            }
            Ok(inner)
        }
        Tok::Sym('-') => Ok(atom(ring, lx)?.neg()),
        Tok::End => Err(Error::Syntax {
            column: col,
            msg: "unexpected end of input".into(),
        }),
        Tok::Sym(c) => Err(Error::Syntax {
            column: col,
            msg: format!("unexpected {c:?}"),
        }),
    }
}

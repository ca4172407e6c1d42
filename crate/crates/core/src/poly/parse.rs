//! Recursive-descent parser for defining equations.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | primary ('^' INT)*
//! primary:= INT ['/' INT] | DECIMAL | 'i' | 'z'INT | 'Z'INT | 'u'
//!         | '|' ('z'|'Z')INT '|' '^' EVEN_INT
//!         | 'Re(' expr ')' | 'Im(' expr ')' | '(' expr ')'
//! ```
//!
//! `z3` is the holomorphic coordinate, `Z3` its conjugate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::complex::{parse_ratio, ExactComplex};
use super::polynomial::Polynomial;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Decimal(BigRational),
    I,
    Z(usize),
    ZBar(usize),
    U,
    Re,
    Im,
    Pipe,
    Caret,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        if ch.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match ch {
            b'|' => Tok::Pipe,
            b'^' => Tok::Caret,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                let lit = &text[start..i];
                let tok = if lit.contains('.') {
                    Tok::Decimal(
                        parse_ratio(lit)
                            .ok_or_else(|| Error::parse(start, format!("malformed number '{lit}'")))?,
                    )
                } else {
                    Tok::Int(lit.parse().map_err(|_| Error::parse(start, "malformed integer"))?)
                };
                out.push((tok, start));
                continue;
            }
            b'z' | b'Z' => {
                i += 1;
                let ds = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if ds == i {
                    return Err(Error::parse(start, "variable needs an index, e.g. z1"));
                }
                let idx: usize = text[ds..i]
                    .parse()
                    .map_err(|_| Error::parse(ds, "variable index out of range"))?;
                out.push((if ch == b'z' { Tok::Z(idx) } else { Tok::ZBar(idx) }, start));
                continue;
            }
            b'a'..=b'y' | b'A'..=b'Y' => {
                while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "i" => Tok::I,
                    "u" => Tok::U,
                    "Re" => Tok::Re,
                    "Im" => Tok::Im,
                    _ => return Err(Error::parse(start, format!("unknown identifier '{word}'"))),
                };
                out.push((tok, start));
                continue;
            }
            _ => {
                return Err(Error::parse(
                    start,
                    format!("unexpected character '{}'", text[start..].chars().next().unwrap_or('?')),
                ))
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(Error::parse(self.offset(), format!("expected {what}")))
        }
    }

    fn var_index(&self, idx: usize, at: usize) -> Result<usize> {
        if idx == 0 || idx > self.n {
            Err(Error::parse(
                at,
                format!("variable index {idx} outside 1..={}", self.n),
            ))
        } else {
            Ok(idx - 1)
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let negate_first = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate_first {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.factor()?);
        }
        let mut base = self.primary()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let e = self.small_int("exponent")?;
            base = base.pow(e);
        }
        Ok(base)
    }

    fn small_int(&mut self, what: &str) -> Result<u32> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(v) => u32::try_from(v).map_err(|_| Error::parse(at, format!("{what} too large"))),
            _ => Err(Error::parse(at, format!("expected integer {what}"))),
        }
    }

    fn primary(&mut self) -> Result<Polynomial> {
        let n = self.n;
        let at = self.offset();
        match self.bump() {
            Tok::Int(num) => {
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let dat = self.offset();
                    let den = match self.bump() {
                        Tok::Int(d) => d,
                        _ => return Err(Error::parse(dat, "expected integer denominator")),
                    };
                    if den.is_zero() {
                        return Err(Error::parse(dat, "division by zero"));
                    }
                    Ok(Polynomial::constant(n, ExactComplex::real(BigRational::new(num, den))))
                } else {
                    Ok(Polynomial::constant(n, ExactComplex::real(BigRational::from_integer(num))))
                }
            }
            Tok::Decimal(r) => Ok(Polynomial::constant(n, ExactComplex::real(r))),
            Tok::I => Ok(Polynomial::constant(n, ExactComplex::i())),
            Tok::Z(idx) => Ok(Polynomial::z(n, self.var_index(idx, at)?)),
            Tok::ZBar(idx) => Ok(Polynomial::zbar(n, self.var_index(idx, at)?)),
            Tok::U => Ok(Polynomial::u(n)),
            Tok::Pipe => {
                let vat = self.offset();
                let j = match self.bump() {
                    Tok::Z(idx) | Tok::ZBar(idx) => self.var_index(idx, vat)?,
                    _ => return Err(Error::parse(vat, "only a single variable may appear inside |·|")),
                };
                self.expect(Tok::Pipe, "closing '|'")?;
                let eat = self.offset();
                if *self.peek() != Tok::Caret {
                    return Err(Error::parse(eat, "odd power of |z| (|z|^1) is not polynomial"));
                }
                self.bump();
                let eat = self.offset();
                let e = self.small_int("exponent")?;
                if e % 2 == 1 {
                    return Err(Error::parse(eat, format!("odd power {e} of |z| is not polynomial")));
                }
                Ok((&Polynomial::z(n, j) * &Polynomial::zbar(n, j)).pow(e / 2))
            }
            Tok::Re | Tok::Im => {
                let is_re = self.toks[self.pos - 1].0 == Tok::Re;
                self.expect(Tok::LParen, "'(' after Re/Im")?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(if is_re { inner.real_part() } else { inner.imag_part() })
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::End => Err(Error::parse(at, "unexpected end of input")),
            other => Err(Error::parse(at, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses a defining equation in `n` complex variables into canonical form.
pub fn parse_defining_equation(text: &str, n: usize) -> Result<Polynomial> {
    if n == 0 {
        return Err(Error::Domain("dimension n must be at least 1".into()));
    }
    let toks = tokenize(text)?;
    let mut parser = Parser { toks, pos: 0, n };
    let p = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(Error::parse(parser.offset(), "unexpected trailing input"));
    }
    Ok(p)
}

//! The series literal grammar used by the command line:
//!
//! ```text
//! expr   := ["+" | "-"] term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := atom ["^" ["+" | "-"] integer]
//! atom   := integer | generator | "t" | "(" expr ")" | "O(" expr ")"
//! ```
//!
//! `O(t^N)` marks the series as known below `t^N`. Division is only by
//! constant units, so `1/2` and `e/3` are literals over `Q`. Whitespace is
//! ignored. Positions in errors are character offsets into the input.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::rings::{Ring, RingElement};
use crate::series::LaurentSeries;

/// Largest `|index|` a literal may produce.
pub const MAX_EXPONENT: i64 = 1 << 20;

/// Parses a series literal over `ring`. Finite literals without `O(...)` are
/// exact.
pub fn parse_series(text: &str, ring: &Ring) -> Result<LaurentSeries> {
    let tokens = lex(text)?;
    let mut p = Parser { ring, tokens, at: 0, end: text.chars().count() };
    let s = p.expr()?;
    match p.peek() {
        None => Ok(s),
        Some(t) => Err(Error::Parse { pos: t.pos, msg: format!("unexpected {}", t.kind) }),
    }
}

/// Parses a literal that must be a constant, and returns the constant.
pub fn parse_element(text: &str, ring: &Ring) -> Result<RingElement> {
    let s = parse_series(text, ring)?;
    if !s.is_exact() || s.terms().any(|(i, _)| i != 0) {
        return Err(Error::Parse { pos: 0, msg: format!("`{text}` is not a ring element") });
    }
    Ok(s.coeff(0))
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Kind::Int(n) => write!(f, "number `{n}`"),
            Kind::Ident(s) => write!(f, "identifier `{s}`"),
            Kind::Sym(c) => write!(f, "`{c}`"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: Kind,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Token { kind: Kind::Int(digits.parse().expect("ascii digits")), pos: start });
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { kind: Kind::Ident(chars[start..i].iter().collect()), pos: start });
        } else if "+-*/^()".contains(c) {
            out.push(Token { kind: Kind::Sym(c), pos: start });
            i += 1;
        } else {
            return Err(Error::Parse { pos: start, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Ring,
    tokens: Vec<Token>,
    at: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at)
    }

    fn pos(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().is_some_and(|t| t.kind == Kind::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            return Ok(());
        }
        let found = self.peek().map_or("end of input".to_string(), |t| t.kind.to_string());
        Err(Error::Parse { pos: self.pos(), msg: format!("expected `{c}`, found {found}") })
    }

    fn expr(&mut self) -> Result<LaurentSeries> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentSeries> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                let pos = self.pos();
                let rhs = self.factor()?;
                check_size(&acc, &rhs, pos)?;
                acc = &acc * &rhs;
            } else if self.eat('/') {
                let pos = self.pos();
                let d = self.factor()?;
                let inv = constant_of(&d).and_then(|c| c.invert().ok()).ok_or_else(|| Error::Parse {
                    pos,
                    msg: format!("can only divide by a constant unit, not `{d}`"),
                })?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentSeries> {
        let base_pos = self.pos();
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let k = match self.peek() {
            Some(Token { kind: Kind::Int(n), .. }) => n.clone(),
            _ => return Err(Error::Parse { pos: self.pos(), msg: "expected an integer exponent".into() }),
        };
        self.at += 1;
        let k = k.to_i64().filter(|k| *k <= MAX_EXPONENT).ok_or(Error::ExponentOverflow { pos })?;
        if negative {
            return monomial_power(&base, -k, pos, base_pos);
        }
        if let Ok(s) = monomial_power(&base, k, pos, base_pos) {
            return Ok(s);
        }
        let span = base.top() - base.lowest();
        if span.saturating_mul(k) > MAX_EXPONENT || base.lowest().saturating_mul(k).abs() > MAX_EXPONENT {
            return Err(Error::ExponentOverflow { pos });
        }
        Ok(base.pow_capped(k as u64, base.precision()))
    }

    fn atom(&mut self) -> Result<LaurentSeries> {
        let Some(tok) = self.peek().cloned() else {
            return Err(Error::Parse { pos: self.end, msg: "unexpected end of input".into() });
        };
        self.at += 1;
        match tok.kind {
            Kind::Int(n) => Ok(LaurentSeries::constant(self.ring.from_bigint(&n))),
            Kind::Sym('(') => {
                let s = self.expr()?;
                self.expect(')')?;
                Ok(s)
            }
            Kind::Sym(c) => Err(Error::Parse { pos: tok.pos, msg: format!("unexpected `{c}`") }),
            Kind::Ident(name) => {
                if let Ok(g) = self.ring.generator(&name) {
                    return Ok(LaurentSeries::constant(g));
                }
                match name.as_str() {
                    "t" => Ok(LaurentSeries::t(self.ring)),
                    "O" if self.peek().is_some_and(|t| t.kind == Kind::Sym('(')) => self.big_o(),
                    _ => Err(Error::UnknownIdentifier { pos: tok.pos, name }),
                }
            }
        }
    }

    /// `O(t^N)`, as the zero series known below `t^N`.
    fn big_o(&mut self) -> Result<LaurentSeries> {
        self.expect('(')?;
        let pos = self.pos();
        let arg = self.expr()?;
        self.expect(')')?;
        let terms: Vec<_> = arg.terms().collect();
        match terms.as_slice() {
            [(n, c)] if c.is_one() && arg.is_exact() => Ok(LaurentSeries::zero(self.ring).truncate(*n)),
            _ => Err(Error::Parse { pos, msg: format!("expected O(t^N), found O({arg})") }),
        }
    }
}

fn constant_of(s: &LaurentSeries) -> Option<RingElement> {
    (s.is_exact() && s.terms().all(|(i, _)| i == 0)).then(|| s.coeff(0))
}

/// `(c t^j)^k` for a single exact term, allowing `k < 0` when `c` is a unit.
fn monomial_power(base: &LaurentSeries, k: i64, pos: usize, base_pos: usize) -> Result<LaurentSeries> {
    let terms: Vec<_> = base.terms().collect();
    let (j, c) = match terms.as_slice() {
        [(j, c)] if base.is_exact() => (*j, (*c).clone()),
        [] if base.is_exact() && k > 0 => return Ok(base.clone()),
        _ => {
            return Err(Error::Parse {
                pos: base_pos,
                msg: format!("only a single term can be raised to a negative power, not `{base}`"),
            })
        }
    };
    let index = j.checked_mul(k).filter(|i| i.abs() <= MAX_EXPONENT).ok_or(Error::ExponentOverflow { pos })?;
    let c = c.pow_i64(k).map_err(|_| Error::Parse { pos: base_pos, msg: format!("`{c}` is not a unit") })?;
    Ok(LaurentSeries::monomial(c, index))
}

fn check_size(a: &LaurentSeries, b: &LaurentSeries, pos: usize) -> Result<()> {
    let lo = a.lowest().saturating_add(b.lowest());
    let hi = a.top().saturating_add(b.top());
    if lo.abs() > MAX_EXPONENT || hi.abs() > MAX_EXPONENT {
        return Err(Error::ExponentOverflow { pos });
    }
    Ok(())
}

//! Canonical text form, e.g. `5 + 3*u + 2*alpha*u^-1`.
//!
//! Terms are grouped by `u`-exponent (0, 1, 2, …, then −1, −2, …) and, inside a
//! group, ordered by monomial degree and then lexicographically.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Pow, Signed, Zero};

use super::poly::valid_name;
use super::{
    format_rational, is_unit_magnitude, AlgebraError, EquivariantLaurent, GradedPolynomial,
    GradedSymbol, Monomial, Rational, UNBOUNDED,
};

/// Name → symbol map; names are unique within a table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    symbols: BTreeMap<String, GradedSymbol>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(decls: &[(&str, u32)]) -> Result<Self, AlgebraError> {
        let mut t = Self::new();
        for (n, d) in decls {
            t.declare(n, *d)?;
        }
        Ok(t)
    }

    /// Declares (or re-fetches) a symbol. Redeclaring with another degree fails.
    pub fn declare(&mut self, name: &str, degree: u32) -> Result<GradedSymbol, AlgebraError> {
        if let Some(existing) = self.symbols.get(name) {
            if existing.degree() != degree {
                return Err(AlgebraError::DegreeConflict {
                    name: name.to_string(),
                    existing: existing.degree(),
                    requested: degree,
                });
            }
            return Ok(existing.clone());
        }
        let s = GradedSymbol::new(name, degree)?;
        self.symbols.insert(name.to_string(), s.clone());
        Ok(s)
    }

    pub fn get(&self, name: &str) -> Option<&GradedSymbol> {
        self.symbols.get(name)
    }

    pub fn symbol(&self, name: &str) -> Result<GradedSymbol, AlgebraError> {
        self.get(name)
            .cloned()
            .ok_or_else(|| AlgebraError::UnknownSymbol(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &GradedSymbol> {
        self.symbols.values()
    }

    /// Adds every symbol occurring in `p`.
    pub fn absorb(&mut self, p: &GradedPolynomial) -> Result<(), AlgebraError> {
        for s in p.symbols() {
            self.declare(s.name(), s.degree())?;
        }
        Ok(())
    }
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &Rational,
    m: &Monomial,
    u_exp: i64,
) -> fmt::Result {
    let negative = c.is_negative();
    if first {
        if negative {
            f.write_str("-")?;
        }
    } else {
        f.write_str(if negative { " - " } else { " + " })?;
    }
    let mag = c.abs();
    let mut factors: Vec<String> = Vec::new();
    if !m.is_one() {
        factors.push(m.to_string());
    }
    match u_exp {
        0 => {}
        1 => factors.push("u".into()),
        k => factors.push(format!("u^{k}")),
    }
    if factors.is_empty() {
        return f.write_str(&format_rational(&mag));
    }
    if !is_unit_magnitude(&mag) {
        write!(f, "{}*", format_rational(&mag))?;
    }
    f.write_str(&factors.join("*"))
}

impl fmt::Display for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            write_term(f, i == 0, c, m, 0)?;
        }
        Ok(())
    }
}

fn u_group_order(k: i64) -> (u8, i64) {
    if k >= 0 {
        (0, k)
    } else {
        (1, -k)
    }
}

impl fmt::Display for EquivariantLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut groups: Vec<(i64, &GradedPolynomial)> = self.coefficients().collect();
        groups.sort_by_key(|(k, _)| u_group_order(*k));
        let mut first = true;
        for (k, p) in groups {
            for (m, c) in p.terms() {
                write_term(f, first, c, m, k)?;
                first = false;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, AlgebraError> {
    let bytes = s.as_bytes();
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
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let mut text = s[start..i].to_string();
                if i < bytes.len() && bytes[i] == b'/' {
                    let dstart = i + 1;
                    let mut j = dstart;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == dstart {
                        return Err(AlgebraError::Parse {
                            pos: i,
                            msg: "expected denominator after `/`".into(),
                        });
                    }
                    text.push('/');
                    text.push_str(&s[dstart..j]);
                    i = j;
                }
                let r = super::parse_rational(&text).map_err(|_| AlgebraError::Parse {
                    pos: start,
                    msg: format!("bad number `{text}`"),
                })?;
                out.push((start, Tok::Num(r)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(s[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(AlgebraError::Parse {
                    pos: start,
                    msg: format!("unexpected character `{}`", s[start..].chars().next().unwrap()),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    table: &'a SymbolTable,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err(&self, msg: impl Into<String>) -> AlgebraError {
        AlgebraError::Parse {
            pos: self.here(),
            msg: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<EquivariantLaurent, AlgebraError> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -self.term()?
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
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

    fn term(&mut self) -> Result<EquivariantLaurent, AlgebraError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<EquivariantLaurent, AlgebraError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let neg = matches!(self.peek(), Some(Tok::Minus));
            if neg {
                self.pos += 1;
            }
            let exp = match self.peek() {
                Some(Tok::Num(r)) if r.is_integer() && !r.is_negative() => {
                    let e: i64 = r
                        .to_integer()
                        .try_into()
                        .map_err(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    e
                }
                _ => return Err(self.err("expected integer exponent")),
            };
            return if neg { self.invert_power(&base, exp) } else {
                let e = u32::try_from(exp).map_err(|_| self.err("exponent too large"))?;
                Ok(base.pow_truncated(e, UNBOUNDED))
            };
        }
        Ok(base)
    }

    /// Negative powers are only defined for a single invertible term `c·u^k`.
    fn invert_power(
        &self,
        base: &EquivariantLaurent,
        exp: i64,
    ) -> Result<EquivariantLaurent, AlgebraError> {
        match base.as_single_term() {
            Some((k, m, c)) if m.is_one() && !c.is_zero() => {
                let e = i32::try_from(exp).map_err(|_| self.err("exponent too large"))?;
                let coeff = Pow::pow(&c, -e);
                Ok(EquivariantLaurent::term(-k * exp, GradedPolynomial::constant(coeff)))
            }
            _ => Err(self.err("negative exponent on a non-invertible factor")),
        }
    }

    fn atom(&mut self) -> Result<EquivariantLaurent, AlgebraError> {
        let tok = self.peek().cloned();
        match tok {
            Some(Tok::Num(r)) => {
                self.pos += 1;
                Ok(EquivariantLaurent::constant(r))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "u" {
                    return Ok(EquivariantLaurent::u_pow(1));
                }
                if !valid_name(&name) {
                    return Err(self.err(format!("invalid symbol `{name}`")));
                }
                let s = self.table.symbol(&name)?;
                Ok(EquivariantLaurent::from_poly(GradedPolynomial::symbol(&s)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.err("expected `)`")),
                }
            }
            _ => Err(self.err("expected number, symbol or `(`")),
        }
    }
}

/// Parses a Laurent series; every non-`u` symbol must be declared in `table`.
pub fn parse_laurent(s: &str, table: &SymbolTable) -> Result<EquivariantLaurent, AlgebraError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(AlgebraError::Parse {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: s.len(),
        table,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

/// Parses a polynomial; `u` may appear only if it cancels.
pub fn parse_polynomial(s: &str, table: &SymbolTable) -> Result<GradedPolynomial, AlgebraError> {
    let l = parse_laurent(s, table)?;
    if l.coefficients().any(|(k, _)| k != 0) {
        return Err(AlgebraError::Parse {
            pos: 0,
            msg: "polynomial contains powers of u".into(),
        });
    }
    Ok(l.constant_u_term())
}

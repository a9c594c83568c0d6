//! JSON term-list form:
//!
//! ```json
//! {"schema":1,
//!  "symbols":[{"name":"alpha","degree":2}],
//!  "terms":[{"coeff":"2","u":-1,"monomial":[["alpha",1]]}]}
//! ```

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{
    format_rational, parse_rational, AlgebraError, EquivariantLaurent, GradedPolynomial, Monomial,
    SymbolTable,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolDecl {
    pub name: String,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub coeff: String,
    #[serde(default)]
    pub u: i64,
    #[serde(default)]
    pub monomial: Vec<(String, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermList {
    pub schema: u32,
    pub symbols: Vec<SymbolDecl>,
    pub terms: Vec<TermEntry>,
}

impl TermList {
    pub fn from_laurent(l: &EquivariantLaurent) -> Self {
        let mut table = SymbolTable::new();
        let mut terms = Vec::new();
        for (k, p) in l.coefficients() {
            // absorb cannot conflict: symbols in one value share degrees
            let _ = table.absorb(p);
            for (m, c) in p.terms() {
                terms.push(TermEntry {
                    coeff: format_rational(c),
                    u: k,
                    monomial: m
                        .factors()
                        .iter()
                        .map(|(s, e)| (s.name().to_string(), *e))
                        .collect(),
                });
            }
        }
        Self {
            schema: 1,
            symbols: table
                .iter()
                .map(|s| SymbolDecl {
                    name: s.name().to_string(),
                    degree: s.degree(),
                })
                .collect(),
            terms,
        }
    }

    pub fn to_laurent(&self) -> Result<EquivariantLaurent, AlgebraError> {
        if self.schema != 1 {
            return Err(AlgebraError::TermList(format!(
                "unsupported schema {}",
                self.schema
            )));
        }
        let mut table = SymbolTable::new();
        for d in &self.symbols {
            table.declare(&d.name, d.degree)?;
        }
        let mut out = EquivariantLaurent::zero();
        for t in &self.terms {
            let c = parse_rational(&t.coeff)?;
            let mut m = Monomial::one();
            for (name, e) in &t.monomial {
                m = m.mul(&Monomial::power(&table.symbol(name)?, *e));
            }
            out.add_coefficient(t.u, GradedPolynomial::term(m, c));
        }
        Ok(out)
    }
}

impl Serialize for EquivariantLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TermList::from_laurent(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for EquivariantLaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        TermList::deserialize(d)?
            .to_laurent()
            .map_err(serde::de::Error::custom)
    }
}

impl Serialize for GradedPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TermList::from_laurent(&EquivariantLaurent::from_poly(self.clone())).serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let l = TermList::deserialize(d)?
            .to_laurent()
            .map_err(serde::de::Error::custom)?;
        if l.coefficients().any(|(k, _)| k != 0) {
            return Err(serde::de::Error::custom("polynomial term list has u-powers"));
        }
        Ok(l.constant_u_term())
    }
}

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{AlgebraError, Rational};

/// A formal class with an even cohomological degree. Degree-0 symbols act as
/// scalar indeterminates (for example `⟨α,Σ⟩` or `χ`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedSymbol {
    name: Arc<str>,
    degree: u32,
}

impl GradedSymbol {
    pub fn new(name: &str, degree: u32) -> Result<Self, AlgebraError> {
        if degree % 2 != 0 {
            return Err(AlgebraError::OddDegree {
                name: name.to_string(),
                degree,
            });
        }
        if !valid_name(name) {
            return Err(AlgebraError::InvalidName(name.to_string()));
        }
        Ok(Self {
            name: Arc::from(name),
            degree,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
}

/// `u` is reserved for the equivariant parameter.
pub(crate) fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    let first_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_');
    first_ok && chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && name != "u"
}

/// Product of symbol powers, sorted by symbol with strictly positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(GradedSymbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(sym: &GradedSymbol) -> Self {
        Self(vec![(sym.clone(), 1)])
    }

    pub fn power(sym: &GradedSymbol, exp: u32) -> Self {
        if exp == 0 {
            Self::one()
        } else {
            Self(vec![(sym.clone(), exp)])
        }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (GradedSymbol, u32)>) -> Self {
        factors
            .into_iter()
            .fold(Self::one(), |acc, (s, e)| acc.mul(&Self::power(&s, e)))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(GradedSymbol, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(s, e)| s.degree * e).sum()
    }

    pub fn exponent_of(&self, name: &str) -> u32 {
        self.0
            .iter()
            .find(|(s, _)| &*s.name == name)
            .map_or(0, |(_, e)| *e)
    }

    /// Removes every power of `name`, returning the stripped monomial and the exponent.
    pub fn without(&self, name: &str) -> (Monomial, u32) {
        let exp = self.exponent_of(name);
        let rest = self
            .0
            .iter()
            .filter(|(s, _)| &*s.name != name)
            .cloned()
            .collect();
        (Monomial(rest), exp)
    }

    /// Splits into (degree-0 scalar part, positive-degree class part).
    pub fn split_scalar(&self) -> (Monomial, Monomial) {
        let (scalar, class): (Vec<_>, Vec<_>) =
            self.0.iter().cloned().partition(|(s, _)| s.degree == 0);
        (Monomial(scalar), Monomial(class))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (s, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{}", s.name)?;
            } else {
                write!(f, "{}^{}", s.name, e)?;
            }
        }
        Ok(())
    }
}

/// Finite sum of rational multiples of monomials. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GradedPolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn symbol(sym: &GradedSymbol) -> Self {
        Self::term(Monomial::var(sym), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the empty monomial.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// Largest monomial degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Smallest monomial degree, `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn truncate(&self, top_degree: u32) -> Self {
        self.retain(|m| m.degree() <= top_degree)
    }

    pub fn retain(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogeneous component of the given degree.
    pub fn component(&self, degree: u32) -> Self {
        self.retain(|m| m.degree() == degree)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (k.mul(m), v * c)))
    }

    /// Product with every monomial above `top_degree` dropped.
    pub fn mul_truncated(&self, other: &Self, top_degree: u32) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > top_degree {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da.saturating_add(mb.degree()) > top_degree {
                    continue;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        self.pow_truncated(n, u32::MAX)
    }

    pub fn pow_truncated(&self, n: u32, top_degree: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul_truncated(self, top_degree);
        }
        acc
    }

    /// Replaces every occurrence of the symbol `name` by `value`.
    pub fn substitute(&self, name: &str, value: &GradedPolynomial) -> Self {
        let mut cache: Vec<GradedPolynomial> = vec![Self::one()];
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(name);
            while cache.len() <= e as usize {
                let next = &cache[cache.len() - 1] * value;
                cache.push(next);
            }
            out = out + cache[e as usize].mul_monomial(&rest, c);
        }
        out
    }

    /// Monomial-wise linear map.
    pub fn map_monomials(&self, mut f: impl FnMut(&Monomial) -> GradedPolynomial) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out = out + f(m).scale(c);
        }
        out
    }

    /// Every symbol occurring with nonzero exponent.
    pub fn symbols(&self) -> Vec<GradedSymbol> {
        let mut syms: Vec<GradedSymbol> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(s, _)| s.clone()))
            .collect();
        syms.sort();
        syms.dedup();
        syms
    }
}

/// Drops every monomial of degree above `top_degree`.
pub fn poly_truncate(p: &GradedPolynomial, top_degree: u32) -> GradedPolynomial {
    p.truncate(top_degree)
}

impl Add for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn add(self, rhs: &GradedPolynomial) -> GradedPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Add for GradedPolynomial {
    type Output = GradedPolynomial;
    fn add(mut self, rhs: GradedPolynomial) -> GradedPolynomial {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Neg for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn neg(self) -> GradedPolynomial {
        GradedPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for GradedPolynomial {
    type Output = GradedPolynomial;
    fn neg(self) -> GradedPolynomial {
        -&self
    }
}

impl Sub for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn sub(self, rhs: &GradedPolynomial) -> GradedPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Sub for GradedPolynomial {
    type Output = GradedPolynomial;
    fn sub(self, rhs: GradedPolynomial) -> GradedPolynomial {
        &self - &rhs
    }
}

impl Mul for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn mul(self, rhs: &GradedPolynomial) -> GradedPolynomial {
        self.mul_truncated(rhs, u32::MAX)
    }
}

impl Mul for GradedPolynomial {
    type Output = GradedPolynomial;
    fn mul(self, rhs: GradedPolynomial) -> GradedPolynomial {
        &self * &rhs
    }
}

impl From<Rational> for GradedPolynomial {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    fn sym(n: &str, d: u32) -> GradedSymbol {
        GradedSymbol::new(n, d).unwrap()
    }

    #[test]
    fn odd_degree_rejected() {
        assert!(matches!(
            GradedSymbol::new("theta", 1),
            Err(AlgebraError::OddDegree { .. })
        ));
        assert!(GradedSymbol::new("u", 2).is_err());
    }

    #[test]
    fn truncate_examples() {
        let a = GradedPolynomial::symbol(&sym("alpha", 2));
        let w = GradedPolynomial::symbol(&sym("omega", 2));
        assert_eq!(poly_truncate(&a.pow(2), 4), a.pow(2));
        assert!(poly_truncate(&a.pow(3), 4).is_zero());
        let p = GradedPolynomial::constant(int(3)) + &a * &w;
        assert_eq!(poly_truncate(&p, 2), GradedPolynomial::constant(int(3)));
    }

    #[test]
    fn substitute_is_evaluation() {
        let x = sym("x", 2);
        let p = GradedPolynomial::symbol(&x).pow(3) + GradedPolynomial::constant(int(2));
        let v = GradedPolynomial::constant(int(2));
        assert_eq!(p.substitute("x", &v), GradedPolynomial::constant(int(10)));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let a = GradedPolynomial::symbol(&sym("alpha", 2));
        let z = &a - &a;
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
    }
}

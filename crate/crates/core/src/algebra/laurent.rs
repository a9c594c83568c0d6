use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::{GradedPolynomial, Monomial, Rational};

/// Cohomological degree of the equivariant parameter `u`.
pub const U_DEGREE: u32 = 2;

/// Truncation bound meaning "keep everything".
pub const UNBOUNDED: u32 = u32::MAX;

/// Finite Laurent series `Σ_k a_k u^k` with graded-polynomial coefficients.
///
/// The total degree of `a_k u^k` is `2k + deg a_k`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EquivariantLaurent {
    coeffs: BTreeMap<i64, GradedPolynomial>,
}

impl EquivariantLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_poly(GradedPolynomial::one())
    }

    /// `u^k`
    pub fn u_pow(k: i64) -> Self {
        Self::term(k, GradedPolynomial::one())
    }

    pub fn from_poly(p: GradedPolynomial) -> Self {
        Self::term(0, p)
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(GradedPolynomial::constant(c))
    }

    /// `p · u^k`
    pub fn term(k: i64, p: GradedPolynomial) -> Self {
        let mut out = Self::zero();
        out.add_coefficient(k, p);
        out
    }

    pub fn add_coefficient(&mut self, k: i64, p: GradedPolynomial) {
        if p.is_zero() {
            return;
        }
        match self.coeffs.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &p;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Nonzero coefficients in ascending `u`-exponent order.
    pub fn coefficients(&self) -> impl Iterator<Item = (i64, &GradedPolynomial)> {
        self.coeffs.iter().map(|(k, p)| (*k, p))
    }

    pub fn coefficient(&self, k: i64) -> GradedPolynomial {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_u_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_u_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// True when some nonzero coefficient sits at a negative power of `u`.
    pub fn has_negative_powers(&self) -> bool {
        self.min_u_exponent().is_some_and(|k| k < 0)
    }

    /// Coefficient-wise truncation of the graded polynomials.
    pub fn truncate(&self, top_degree: u32) -> Self {
        self.map_coefficients(|p| p.truncate(top_degree))
    }

    pub fn map_coefficients(&self, mut f: impl FnMut(&GradedPolynomial) -> GradedPolynomial) -> Self {
        let mut out = Self::zero();
        for (k, p) in &self.coeffs {
            out.add_coefficient(*k, f(p));
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_coefficients(|p| p.scale(c))
    }

    /// Multiplies by `u^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, p)| (e + k, p.clone())).collect(),
        }
    }

    pub fn mul_truncated(&self, other: &Self, top_degree: u32) -> Self {
        let mut out = Self::zero();
        for (ka, pa) in &self.coeffs {
            for (kb, pb) in &other.coeffs {
                out.add_coefficient(ka + kb, pa.mul_truncated(pb, top_degree));
            }
        }
        out
    }

    pub fn pow_truncated(&self, n: u32, top_degree: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul_truncated(self, top_degree);
        }
        acc
    }

    /// Multiplies every coefficient by a polynomial.
    pub fn mul_poly(&self, p: &GradedPolynomial, top_degree: u32) -> Self {
        self.map_coefficients(|c| c.mul_truncated(p, top_degree))
    }

    /// Single term `c · m · u^k` when the series has exactly one monomial.
    pub(crate) fn as_single_term(&self) -> Option<(i64, Monomial, Rational)> {
        if self.coeffs.len() != 1 {
            return None;
        }
        let (k, p) = self.coeffs.iter().next()?;
        if p.len() != 1 {
            return None;
        }
        let (m, c) = p.terms().next()?;
        Some((*k, m.clone(), c.clone()))
    }

    pub fn constant_u_term(&self) -> GradedPolynomial {
        self.coefficient(0)
    }

    /// Largest total degree `2k + deg a_k` among the terms.
    pub fn total_degree(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .filter_map(|(k, p)| p.degree().map(|d| 2 * k + d as i64))
            .max()
    }
}

/// Distributive product with coefficient-wise truncation at `top_degree`.
pub fn laurent_mul(
    a: &EquivariantLaurent,
    b: &EquivariantLaurent,
    top_degree: u32,
) -> EquivariantLaurent {
    a.mul_truncated(b, top_degree)
}

/// Coefficient of `u^0`.
pub fn constant_u_term(a: &EquivariantLaurent) -> GradedPolynomial {
    a.constant_u_term()
}

impl Add for &EquivariantLaurent {
    type Output = EquivariantLaurent;
    fn add(self, rhs: &EquivariantLaurent) -> EquivariantLaurent {
        let mut out = self.clone();
        for (k, p) in &rhs.coeffs {
            out.add_coefficient(*k, p.clone());
        }
        out
    }
}

impl Add for EquivariantLaurent {
    type Output = EquivariantLaurent;
    fn add(self, rhs: EquivariantLaurent) -> EquivariantLaurent {
        &self + &rhs
    }
}

impl Neg for &EquivariantLaurent {
    type Output = EquivariantLaurent;
    fn neg(self) -> EquivariantLaurent {
        self.map_coefficients(|p| -p)
    }
}

impl Neg for EquivariantLaurent {
    type Output = EquivariantLaurent;
    fn neg(self) -> EquivariantLaurent {
        -&self
    }
}

impl Sub for &EquivariantLaurent {
    type Output = EquivariantLaurent;
    fn sub(self, rhs: &EquivariantLaurent) -> EquivariantLaurent {
        self + &(-rhs)
    }
}

impl Sub for EquivariantLaurent {
    type Output = EquivariantLaurent;
    fn sub(self, rhs: EquivariantLaurent) -> EquivariantLaurent {
        &self - &rhs
    }
}

impl Mul for &EquivariantLaurent {
    type Output = EquivariantLaurent;
    fn mul(self, rhs: &EquivariantLaurent) -> EquivariantLaurent {
        self.mul_truncated(rhs, UNBOUNDED)
    }
}

impl Mul for EquivariantLaurent {
    type Output = EquivariantLaurent;
    fn mul(self, rhs: EquivariantLaurent) -> EquivariantLaurent {
        &self * &rhs
    }
}

impl From<GradedPolynomial> for EquivariantLaurent {
    fn from(p: GradedPolynomial) -> Self {
        Self::from_poly(p)
    }
}

impl Zero for EquivariantLaurent {
    fn zero() -> Self {
        EquivariantLaurent::zero()
    }
    fn is_zero(&self) -> bool {
        EquivariantLaurent::is_zero(self)
    }
}

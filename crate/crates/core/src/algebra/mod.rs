//! Exact arithmetic: arbitrary-precision rationals, graded multivariate
//! polynomials over formal cohomology classes, and finite Laurent series in the
//! degree-2 equivariant parameter `u`.
//!
//! Nothing in this module touches floating point. Monomials are stored in a
//! canonical sorted order, so structural equality is mathematical equality.

mod json;
mod laurent;
mod poly;
mod text;

pub use json::{SymbolDecl, TermEntry, TermList};
pub use laurent::{constant_u_term, laurent_mul, EquivariantLaurent, UNBOUNDED, U_DEGREE};
pub use poly::{poly_truncate, GradedPolynomial, GradedSymbol, Monomial};
pub use text::{parse_laurent, parse_polynomial, SymbolTable};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar, always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("symbol `{name}` has odd degree {degree}; only even-degree classes are supported")]
    OddDegree { name: String, degree: u32 },
    #[error("invalid symbol name `{0}`")]
    InvalidName(String),
    #[error("symbol `{name}` declared with degree {existing}, redeclared with {requested}")]
    DegreeConflict {
        name: String,
        existing: u32,
        requested: u32,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("bad term list: {0}")]
    TermList(String),
}

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"-3"`, `"7/2"` or `"-7/2"`.
pub fn parse_rational(s: &str) -> Result<Rational, AlgebraError> {
    let err = |msg: &str| AlgebraError::Parse {
        pos: 0,
        msg: format!("{msg}: `{s}`"),
    };
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err("bad numerator"))?;
    let den: BigInt = den.parse().map_err(|_| err("bad denominator"))?;
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn is_unit_magnitude(r: &Rational) -> bool {
    r.abs().is_one()
}

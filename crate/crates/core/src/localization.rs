//! S¹-equivariant localization in exact arithmetic: inverting Euler classes as
//! terminating Laurent series, fixed-point sums, link pairings, and the
//! substitution rules for spin characteristic classes and fiber pushforwards.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{
    format_rational, parse_laurent, parse_polynomial, parse_rational, AlgebraError, EquivariantLaurent,
    GradedPolynomial, GradedSymbol, Monomial, Rational, SymbolDecl, SymbolTable,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocalizationError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("Euler class {0} has no invertible leading term c·u^k")]
    ZeroLeading(String),
    #[error("Euler class remainder {0} is not nilpotent")]
    NonNilpotent(String),
    #[error("locus `{locus}`: no integration rule for `{monomial}`")]
    MissingRule { locus: String, monomial: String },
    #[error("class {0} is not of degree 2")]
    NotDegreeTwo(String),
    #[error("locus `{0}` has odd dimension")]
    OddDimension(String),
    #[error("pushforward: power {0} of the fiber class has no rule")]
    UnresolvedPower(u32),
    #[error("bad locus dataset: {0}")]
    Dataset(String),
}

/// `c·u^k` with `c` a nonzero rational, and the remainder `η` with
/// `E = c·u^k·(1 + η)`.
fn split_leading(e: &EquivariantLaurent) -> Result<(Rational, i64, EquivariantLaurent), LocalizationError> {
    let mut lead = None;
    for (k, p) in e.coefficients() {
        if !p.component(0).is_zero() {
            lead = Some(k);
        }
    }
    let k = lead.ok_or_else(|| LocalizationError::ZeroLeading(e.to_string()))?;
    let c = e
        .coefficient(k)
        .component(0)
        .as_constant()
        .filter(|c| !c.is_zero())
        .ok_or_else(|| LocalizationError::ZeroLeading(e.to_string()))?;
    let rest = e - &EquivariantLaurent::term(k, GradedPolynomial::constant(c.clone()));
    let eta = rest.shift(-k).scale(&(Rational::one() / &c));
    if eta.coefficients().any(|(_, p)| p.min_degree() == Some(0)) {
        return Err(LocalizationError::NonNilpotent(eta.to_string()));
    }
    Ok((c, k, eta))
}

/// `E⁻¹ = c⁻¹u⁻ᵏ Σⱼ (−η)ʲ`, the geometric series terminating once the class
/// degree exceeds `top_degree`.
pub fn euler_invert(e: &EquivariantLaurent, top_degree: u32) -> Result<EquivariantLaurent, LocalizationError> {
    let (c, k, eta) = split_leading(e)?;
    let neg_eta = -&eta;
    let mut sum = EquivariantLaurent::one();
    let mut power = EquivariantLaurent::one();
    loop {
        power = power.mul_truncated(&neg_eta, top_degree);
        if power.is_zero() {
            break;
        }
        sum = &sum + &power;
    }
    Ok(sum.shift(-k).scale(&(Rational::one() / c)))
}

/// What integrating a class monomial over a fixed locus gives.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntegrationRules {
    pub rules: BTreeMap<Monomial, GradedPolynomial>,
    /// When set, monomials without a rule integrate to zero.
    pub default_zero: bool,
}

impl IntegrationRules {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, m: Monomial, value: GradedPolynomial) -> Self {
        self.rules.insert(m, value);
        self
    }

    pub fn defaulting_to_zero(mut self) -> Self {
        self.default_zero = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedLocusDatum {
    pub name: String,
    /// Real dimension of the fixed component.
    pub dimension: u32,
    pub restricted_class: EquivariantLaurent,
    pub euler_class: EquivariantLaurent,
    pub rules: IntegrationRules,
    pub multiplicity: Rational,
}

impl FixedLocusDatum {
    /// An isolated fixed point with the given restriction and Euler class.
    pub fn point(name: &str, restricted: EquivariantLaurent, euler: EquivariantLaurent) -> Self {
        Self {
            name: name.into(),
            dimension: 0,
            restricted_class: restricted,
            euler_class: euler,
            rules: IntegrationRules::new(),
            multiplicity: Rational::one(),
        }
    }

    /// `∫_F α` term by term in `u`: keeps the degree-`dimension` part, splits
    /// each monomial into scalars and classes, and integrates the classes.
    pub fn integrate(&self, a: &EquivariantLaurent) -> Result<EquivariantLaurent, LocalizationError> {
        if self.dimension % 2 != 0 {
            return Err(LocalizationError::OddDimension(self.name.clone()));
        }
        let mut out = EquivariantLaurent::zero();
        for (k, p) in a.coefficients() {
            let mut acc = GradedPolynomial::zero();
            for (m, c) in p.terms() {
                let (scalar, class) = m.split_scalar();
                if class.degree() != self.dimension {
                    continue;
                }
                let value = if self.dimension == 0 && class.is_one() {
                    GradedPolynomial::one()
                } else if let Some(v) = self.rules.rules.get(&class) {
                    v.clone()
                } else if self.rules.default_zero {
                    continue;
                } else {
                    return Err(LocalizationError::MissingRule {
                        locus: self.name.clone(),
                        monomial: class.to_string(),
                    });
                };
                acc = &acc + &value.mul_monomial(&scalar, c);
            }
            out.add_coefficient(k, acc);
        }
        Ok(out)
    }

    /// `multiplicity · ∫_F integrand / E`.
    pub fn residue(&self, integrand: &EquivariantLaurent) -> Result<EquivariantLaurent, LocalizationError> {
        let inv = euler_invert(&self.euler_class, self.dimension)?;
        let body = integrand.mul_truncated(&inv, self.dimension);
        Ok(self.integrate(&body)?.scale(&self.multiplicity))
    }
}

/// `Σᵢ ∫_{Fᵢ} γᵢ / Eᵢ` over the fixed loci, as a Laurent series in `u`.
pub fn localize_sum(loci: &[FixedLocusDatum]) -> Result<EquivariantLaurent, LocalizationError> {
    let mut total = EquivariantLaurent::zero();
    for l in loci {
        total = &total + &l.residue(&l.restricted_class)?;
    }
    Ok(total)
}

fn check_degree_two(g: &EquivariantLaurent) -> Result<(), LocalizationError> {
    let ok = g.coefficients().all(|(k, p)| {
        p.terms()
            .all(|(m, _)| 2 * k + m.degree() as i64 == 2)
    });
    if ok {
        Ok(())
    } else {
        Err(LocalizationError::NotDegreeTwo(g.to_string()))
    }
}

/// Link pairing `Σᵢ ∫_{Fᵢ} γᵢ^{m−1}·u / Eᵢ`, its `u⁰` coefficient, with each
/// locus's own restricted class as `γᵢ`.
pub fn boundary_pairing_restricted(loci: &[FixedLocusDatum], m: u32) -> Result<GradedPolynomial, LocalizationError> {
    let mut total = EquivariantLaurent::zero();
    for l in loci {
        check_degree_two(&l.restricted_class)?;
        let top = l.dimension;
        let integrand = l
            .restricted_class
            .pow_truncated(m.saturating_sub(1), top)
            .shift(1);
        total = &total + &l.residue(&integrand)?;
    }
    Ok(total.constant_u_term())
}

/// Link pairing with the same class `γ = μ + f·u` restricted to every locus.
pub fn boundary_pairing(
    loci: &[FixedLocusDatum],
    gamma: &EquivariantLaurent,
    m: u32,
) -> Result<GradedPolynomial, LocalizationError> {
    check_degree_two(gamma)?;
    let with_gamma: Vec<FixedLocusDatum> = loci
        .iter()
        .map(|l| FixedLocusDatum {
            restricted_class: gamma.clone(),
            ..l.clone()
        })
        .collect();
    boundary_pairing_restricted(&with_gamma, m)
}

/// Symbols of the spin substitution: `p1`, `e`, `cL`, `cR`, all of degree 4.
pub fn spin_symbols() -> [GradedSymbol; 4] {
    ["p1", "e", "cL", "cR"].map(|n| GradedSymbol::new(n, 4).expect("valid symbol"))
}

/// `p₁ ↦ −2(c_R + c_L)`, `e ↦ c_L − c_R`.
pub fn spin_substitute(p: &GradedPolynomial) -> GradedPolynomial {
    let [_, _, cl, cr] = spin_symbols();
    let cl = GradedPolynomial::symbol(&cl);
    let cr = GradedPolynomial::symbol(&cr);
    let two = GradedPolynomial::constant(Rational::from_integer(2.into()));
    let p1_val = -&(&two * &(&cr + &cl));
    let e_val = &cl - &cr;
    // substitute both at once so `e` introduced by p1 cannot be rewritten
    p.map_monomials(|m| {
        let (rest, ep) = m.without("p1");
        let (rest, ee) = rest.without("e");
        let mut v = GradedPolynomial::term(rest, Rational::one());
        v = &v * &p1_val.pow(ep);
        &v * &e_val.pow(ee)
    })
}

/// Fiber pushforward for a rank-`r` family: powers of the fiber class `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushforwardRules {
    pub symbol: GradedSymbol,
    pub r: u32,
    /// Value of `P^{2r−2}`.
    pub a: GradedPolynomial,
    /// Value of `P^{2r−1}`.
    pub b: GradedPolynomial,
    /// Values of explicitly resolved lower powers.
    pub lower: BTreeMap<u32, GradedPolynomial>,
    /// When set, unresolved lower powers push forward to zero.
    pub lower_zero: bool,
}

impl PushforwardRules {
    /// `P^{2r−2} ↦ A`, `P^{2r−1} ↦ B_R(2e+3σ) + B_L(2e−3σ)`.
    pub fn standard(
        symbol: GradedSymbol,
        r: u32,
        a: GradedPolynomial,
        b_r: GradedPolynomial,
        b_l: GradedPolynomial,
        e: &GradedPolynomial,
        sigma: &GradedPolynomial,
    ) -> Self {
        let two = Rational::from_integer(2.into());
        let three = Rational::from_integer(3.into());
        let plus = &e.scale(&two) + &sigma.scale(&three);
        let minus = &e.scale(&two) - &sigma.scale(&three);
        Self {
            symbol,
            r,
            a,
            b: &(&b_r * &plus) + &(&b_l * &minus),
            lower: BTreeMap::new(),
            lower_zero: false,
        }
    }

    pub fn value_of_power(&self, j: u32) -> Result<GradedPolynomial, LocalizationError> {
        let top = 2 * self.r;
        if j >= top {
            Ok(GradedPolynomial::zero())
        } else if j + 1 == top {
            Ok(self.b.clone())
        } else if j + 2 == top {
            Ok(self.a.clone())
        } else if let Some(v) = self.lower.get(&j) {
            Ok(v.clone())
        } else if self.lower_zero {
            Ok(GradedPolynomial::zero())
        } else {
            Err(LocalizationError::UnresolvedPower(j))
        }
    }
}

pub fn apply_pushforward(p: &GradedPolynomial, rules: &PushforwardRules) -> Result<GradedPolynomial, LocalizationError> {
    let mut out = GradedPolynomial::zero();
    for (m, c) in p.terms() {
        let (rest, j) = m.without(rules.symbol.name());
        let v = rules.value_of_power(j)?;
        out = &out + &v.mul_monomial(&rest, c);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleJson {
    pub monomial: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocusJson {
    pub name: String,
    pub dimension: u32,
    /// Text form of the Euler class, e.g. `"-(u - alpha)^2 + p1"`.
    pub euler: String,
    #[serde(default = "one_str")]
    pub restricted_class: String,
    #[serde(default)]
    pub rules: Vec<RuleJson>,
    #[serde(default)]
    pub default_zero: bool,
    #[serde(default = "one_str")]
    pub multiplicity: String,
}

fn one_str() -> String {
    "1".into()
}

/// Locus dataset: declared symbols plus loci whose classes are written in the
/// text syntax of [`parse_laurent`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocusDataset {
    pub schema: u32,
    #[serde(default)]
    pub symbols: Vec<SymbolDecl>,
    pub loci: Vec<LocusJson>,
}

impl LocusDataset {
    pub fn to_loci(&self) -> Result<Vec<FixedLocusDatum>, LocalizationError> {
        if self.schema != 1 {
            return Err(LocalizationError::Dataset(format!("unsupported schema {}", self.schema)));
        }
        let mut table = SymbolTable::new();
        for s in &self.symbols {
            table.declare(&s.name, s.degree)?;
        }
        let mut out = Vec::new();
        for l in &self.loci {
            let mut rules = IntegrationRules::new();
            rules.default_zero = l.default_zero;
            for r in &l.rules {
                let p = parse_polynomial(&r.monomial, &table)?;
                let (m, c) = match p.terms().collect::<Vec<_>>()[..] {
                    [(m, c)] if c.is_one() => (m.clone(), c.clone()),
                    _ => {
                        return Err(LocalizationError::Dataset(format!(
                            "rule key `{}` is not a monomial",
                            r.monomial
                        )))
                    }
                };
                debug_assert!(c.is_one());
                rules.rules.insert(m, parse_polynomial(&r.value, &table)?);
            }
            out.push(FixedLocusDatum {
                name: l.name.clone(),
                dimension: l.dimension,
                restricted_class: parse_laurent(&l.restricted_class, &table)?,
                euler_class: parse_laurent(&l.euler, &table)?,
                rules,
                multiplicity: parse_rational(&l.multiplicity)?,
            });
        }
        Ok(out)
    }
}

/// Rational-coefficient summary of a scalar Laurent series, `u`-power → value.
pub fn scalar_coefficients(l: &EquivariantLaurent) -> BTreeMap<i64, String> {
    l.coefficients().map(|(k, p)| (k, p.to_string())).collect()
}

/// Formats a rational for reports.
pub fn fmt_q(q: &Rational) -> String {
    format_rational(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rational};

    fn table() -> SymbolTable {
        SymbolTable::with(&[("alpha", 2), ("p1", 4), ("e", 4), ("cL", 4), ("cR", 4), ("sigma", 4), ("H", 2)]).unwrap()
    }

    fn l(s: &str) -> EquivariantLaurent {
        parse_laurent(s, &table()).unwrap()
    }

    fn p(s: &str) -> GradedPolynomial {
        parse_polynomial(s, &table()).unwrap()
    }

    #[test]
    fn invert_examples() {
        assert_eq!(euler_invert(&l("u"), 0).unwrap(), l("u^-1"));
        assert_eq!(euler_invert(&l("2*u^2"), 0).unwrap(), l("1/2*u^-2"));
        let e = l("-(u - alpha)^2 + p1");
        let inv = euler_invert(&e, 8).unwrap();
        assert_eq!(e.mul_truncated(&inv, 8), EquivariantLaurent::one());
        assert_eq!(inv.coefficient(-2), GradedPolynomial::constant(int(-1)));
        assert_eq!(inv.coefficient(-3), p("-2*alpha"));
    }

    #[test]
    fn invert_errors() {
        assert!(matches!(euler_invert(&l("alpha"), 4), Err(LocalizationError::ZeroLeading(_))));
        assert!(matches!(euler_invert(&l("u + 1"), 4), Err(LocalizationError::NonNilpotent(_))));
    }

    #[test]
    fn cp1_sums() {
        let pts = |g1: &str, g2: &str| {
            vec![
                FixedLocusDatum::point("N", l(g1), l("u")),
                FixedLocusDatum::point("S", l(g2), l("-u")),
            ]
        };
        assert!(localize_sum(&pts("1", "1")).unwrap().is_zero());
        let two = localize_sum(&pts("u", "-u")).unwrap();
        assert_eq!(two, EquivariantLaurent::constant(int(2)));
        assert!(!two.has_negative_powers());
        let single = FixedLocusDatum::point("p", l("u^3"), l("u^3"));
        assert_eq!(localize_sum(&[single]).unwrap(), EquivariantLaurent::one());
    }

    #[test]
    fn pairing_examples() {
        let f = rational(-1, 2);
        let gamma = EquivariantLaurent::term(1, GradedPolynomial::constant(f.clone()));
        let at0 = |n: i64| vec![FixedLocusDatum::point("0", l("1"), EquivariantLaurent::u_pow(n))];
        assert_eq!(boundary_pairing(&at0(2), &gamma, 2).unwrap(), GradedPolynomial::constant(f.clone()));
        assert_eq!(boundary_pairing(&at0(3), &gamma, 3).unwrap(), GradedPolynomial::constant(rational(1, 4)));
        // m = 1: Σ u/E vanishes once the codimension exceeds 2
        assert!(boundary_pairing(&at0(3), &gamma, 1).unwrap().is_zero());
        assert!(boundary_pairing(&at0(1), &l("alpha + 3*u"), 1).is_ok());
        assert!(matches!(
            boundary_pairing(&at0(1), &l("u^2"), 1),
            Err(LocalizationError::NotDegreeTwo(_))
        ));
    }

    #[test]
    fn closed_cp1_pairing_vanishes() {
        let loci = vec![
            FixedLocusDatum::point("N", l("u"), l("u")),
            FixedLocusDatum::point("S", l("-u"), l("-u")),
        ];
        assert!(boundary_pairing_restricted(&loci, 1).unwrap().is_zero());
    }

    #[test]
    fn spin_examples() {
        assert_eq!(spin_substitute(&p("p1 + 2*e")), p("-4*cR"));
        assert_eq!(spin_substitute(&p("p1 - 2*e")), p("-4*cL"));
        assert_eq!(spin_substitute(&p("e")), p("cL - cR"));
    }

    #[test]
    fn pushforward_examples() {
        let t = SymbolTable::with(&[("P", 4), ("e", 4), ("sigma", 4), ("alpha", 2)]).unwrap();
        let sym = t.symbol("P").unwrap();
        let r = 2;
        let pp = |s: &str| parse_polynomial(s, &t).unwrap();
        let rules = PushforwardRules::standard(
            sym,
            r,
            GradedPolynomial::constant(int(7)),
            GradedPolynomial::constant(int(3)),
            GradedPolynomial::constant(int(5)),
            &pp("e"),
            &pp("sigma"),
        );
        assert_eq!(apply_pushforward(&pp("P^3"), &rules).unwrap(), pp("3*(2*e + 3*sigma) + 5*(2*e - 3*sigma)"));
        assert!(apply_pushforward(&pp("P^4"), &rules).unwrap().is_zero());
        assert_eq!(apply_pushforward(&pp("P^2*alpha"), &rules).unwrap(), pp("7*alpha"));
        assert!(matches!(apply_pushforward(&pp("P"), &rules), Err(LocalizationError::UnresolvedPower(1))));
    }

    #[test]
    fn dataset_round() {
        let js = r#"{"schema":1,"symbols":[{"name":"H","degree":2}],
            "loci":[{"name":"N","dimension":0,"euler":"u","restricted_class":"u"},
                    {"name":"S","dimension":0,"euler":"-u","restricted_class":"-u"}]}"#;
        let ds: LocusDataset = serde_json::from_str(js).unwrap();
        let loci = ds.to_loci().unwrap();
        assert_eq!(localize_sum(&loci).unwrap(), EquivariantLaurent::constant(int(2)));
    }
}

//! Wall-crossing terms as localization residues around the reducible family.
//!
//! For a partition `t = (t₁,…,t_k)` of the level `r` the fixed locus is a
//! product of blocks `X × (fiber of dimension 8tᵢ − 8)`. Block `i` carries a
//! point class `ωᵢ`, the restricted class `αᵢ` and the fiber class `Pᵢ`. The
//! term is
//!
//! ```text
//! [u⁰] u^{−N} ∫ γᵈ · u / ∏ (−(u − αᵢ)² + Pᵢ),   γ = Σ tᵢωᵢ − ½⟨α,Σ⟩u
//! ```
//!
//! weighted by `∏C(tᵢ) / |Aut t|`. Fiber powers push forward through
//! [`PushforwardRules::standard`] and the X-integral sends `ω² ↦ Qsym`,
//! `ωα ↦ Aα`, `α² ↦ α²`, `e ↦ χ`, `σ ↦ σ`.

use std::collections::BTreeMap;

use num_traits::One;
use serde::Serialize;

use super::{IntersectionForm, Wall, WallError, WallInvariants};
use crate::algebra::{
    int, rational, EquivariantLaurent, GradedPolynomial, GradedSymbol, Monomial, Rational,
    UNBOUNDED,
};
use crate::localization::{apply_pushforward, euler_invert, PushforwardRules};

/// Names of the scalar indeterminates in δ.
pub struct DeltaSymbols;

impl DeltaSymbols {
    pub const QSYM: &'static str = "Qsym";
    pub const A_ALPHA: &'static str = "Aalpha";
    pub const CHI: &'static str = "chi";
    pub const SIGMA: &'static str = "sigma";

    pub fn a(t: u32) -> String {
        format!("A{t}")
    }
    pub fn b_left(t: u32) -> String {
        format!("BL{t}")
    }
    pub fn b_right(t: u32) -> String {
        format!("BR{t}")
    }
}

fn scalar(name: &str) -> GradedSymbol {
    GradedSymbol::new(name, 0).expect("fixed scalar name")
}

fn scalar_poly(name: &str) -> GradedPolynomial {
    GradedPolynomial::symbol(&scalar(name))
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DeltaParams {
    /// Orbifold normalisation per block size; missing sizes default to 1.
    pub block_constants: BTreeMap<u32, Rational>,
    /// Euler number; symbolic when absent.
    pub chi: Option<i64>,
    /// Signature; symbolic when absent.
    pub sigma: Option<i64>,
}

impl DeltaParams {
    pub fn with_topology(chi: i64, sigma: i64) -> Self {
        Self {
            chi: Some(chi),
            sigma: Some(sigma),
            ..Default::default()
        }
    }

    fn block_constant(&self, t: u32) -> Rational {
        self.block_constants.get(&t).cloned().unwrap_or_else(Rational::one)
    }

    fn chi_value(&self) -> GradedPolynomial {
        match self.chi {
            Some(v) => GradedPolynomial::constant(int(v)),
            None => scalar_poly(DeltaSymbols::CHI),
        }
    }

    fn sigma_value(&self) -> GradedPolynomial {
        match self.sigma {
            Some(v) => GradedPolynomial::constant(int(v)),
            None => scalar_poly(DeltaSymbols::SIGMA),
        }
    }
}

/// Non-increasing partitions of `r`; `[[]]` for `r = 0`.
pub fn partitions(r: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(r, r, &mut Vec::new(), &mut out);
    out
}

fn automorphisms(parts: &[u32]) -> u64 {
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for &p in parts {
        *counts.entry(p).or_default() += 1;
    }
    counts.values().map(|&m| (1..=m).product::<u64>()).product()
}

struct Block {
    size: u32,
    omega: GradedSymbol,
    alpha: GradedSymbol,
    fiber: GradedSymbol,
    euler: GradedSymbol,
    signature: GradedSymbol,
}

impl Block {
    fn new(i: usize, size: u32) -> Self {
        let s = |p: &str, d| GradedSymbol::new(&format!("{p}{i}"), d).expect("block symbol");
        Self {
            size,
            omega: s("blk_w", 2),
            alpha: s("blk_a", 2),
            fiber: s("blk_P", 4),
            euler: s("blk_e", 4),
            signature: s("blk_s", 4),
        }
    }

    /// X-degree at most 4 and fiber degree at most `4(2t − 1)`.
    fn admits(&self, m: &Monomial) -> bool {
        let x = 2 * (m.exponent_of(self.omega.name()) + m.exponent_of(self.alpha.name()))
            + 4 * (m.exponent_of(self.euler.name()) + m.exponent_of(self.signature.name()));
        x <= 4 && m.exponent_of(self.fiber.name()) <= 2 * self.size - 1
    }

    /// `−(u − α)² + P`
    fn normal_euler(&self) -> EquivariantLaurent {
        let a = GradedPolynomial::symbol(&self.alpha);
        let mut e = EquivariantLaurent::term(2, GradedPolynomial::constant(int(-1)));
        e.add_coefficient(1, a.scale(&int(2)));
        e.add_coefficient(0, &GradedPolynomial::symbol(&self.fiber) - &(&a * &a));
        e
    }

    fn pushforward(&self, p: &GradedPolynomial) -> Result<GradedPolynomial, WallError> {
        let mut rules = PushforwardRules::standard(
            self.fiber.clone(),
            self.size,
            scalar_poly(&DeltaSymbols::a(self.size)),
            scalar_poly(&DeltaSymbols::b_right(self.size)),
            scalar_poly(&DeltaSymbols::b_left(self.size)),
            &GradedPolynomial::symbol(&self.euler),
            &GradedPolynomial::symbol(&self.signature),
        );
        rules.lower_zero = true;
        apply_pushforward(p, &rules).map_err(|e| WallError::Algebra(e.to_string()))
    }

    fn integrate_x(&self, p: &GradedPolynomial, alpha_sq: i64, params: &DeltaParams) -> GradedPolynomial {
        p.map_monomials(|m| {
            let (m, w) = m.without(self.omega.name());
            let (m, a) = m.without(self.alpha.name());
            let (m, e) = m.without(self.euler.name());
            let (m, s) = m.without(self.signature.name());
            let rest = GradedPolynomial::term(m, Rational::one());
            let value = match (w, a, e, s) {
                (2, 0, 0, 0) => scalar_poly(DeltaSymbols::QSYM),
                (1, 1, 0, 0) => scalar_poly(DeltaSymbols::A_ALPHA),
                (0, 2, 0, 0) => GradedPolynomial::constant(int(alpha_sq)),
                (0, 0, 1, 0) => params.chi_value(),
                (0, 0, 0, 1) => params.sigma_value(),
                _ => return GradedPolynomial::zero(),
            };
            &rest * &value
        })
    }
}

fn retain_all(l: &EquivariantLaurent, blocks: &[Block]) -> EquivariantLaurent {
    l.map_coefficients(|p| p.retain(|m| blocks.iter().all(|b| b.admits(m))))
}

fn mul_filtered(a: &EquivariantLaurent, b: &EquivariantLaurent, blocks: &[Block]) -> EquivariantLaurent {
    retain_all(&a.mul_truncated(b, UNBOUNDED), blocks)
}

/// The full Laurent series of one partition before taking `[u⁰]`.
fn partition_series(
    parts: &[u32],
    d: u32,
    n: i64,
    alpha_sq: i64,
    params: &DeltaParams,
) -> Result<EquivariantLaurent, WallError> {
    let blocks: Vec<Block> = parts.iter().enumerate().map(|(i, &t)| Block::new(i + 1, t)).collect();
    let mut gamma = EquivariantLaurent::term(1, scalar_poly(DeltaSymbols::A_ALPHA).scale(&rational(-1, 2)));
    for b in &blocks {
        gamma.add_coefficient(0, GradedPolynomial::symbol(&b.omega).scale(&int(b.size as i64)));
    }
    let mut acc = EquivariantLaurent::u_pow(1);
    for _ in 0..d {
        acc = mul_filtered(&acc, &gamma, &blocks);
    }
    for b in &blocks {
        let inv = euler_invert(&b.normal_euler(), 8 * b.size).map_err(|e| WallError::Algebra(e.to_string()))?;
        acc = mul_filtered(&acc, &inv, &blocks);
    }
    let mut out = EquivariantLaurent::zero();
    for (k, p) in acc.coefficients() {
        let mut p = p.clone();
        for b in &blocks {
            p = b.pushforward(&p)?;
            p = b.integrate_x(&p, alpha_sq, params);
        }
        out.add_coefficient(k, p);
    }
    let weight = parts.iter().fold(Rational::one(), |w, &t| w * params.block_constant(t))
        / Rational::from_integer(automorphisms(parts).into());
    Ok(out.shift(-n).scale(&weight))
}

/// Series of a single block of size `t`: `C(t) · u^{−N} · ∫ γᵈ u / E`.
/// Its `[u⁰]` is the one-part partition's contribution.
pub fn delta_block(t: u32, d: u32, n: i64, alpha_sq: i64, params: &DeltaParams) -> Result<EquivariantLaurent, WallError> {
    if t == 0 {
        return Err(WallError::Malformed("block size must be at least 1".into()));
    }
    if alpha_sq == -1 {
        return Err(WallError::Obstructed);
    }
    partition_series(&[t], d, n, alpha_sq, params)
}

/// `Σ a_i Qsym^{r−i} Aα^{d−2r+2i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaPolynomial {
    pub r: u32,
    pub d: u32,
    pub polynomial: GradedPolynomial,
    /// `a_0, …, a_r`, free of `Qsym` and `Aα`.
    pub coefficients: Vec<GradedPolynomial>,
}

impl DeltaPolynomial {
    pub fn from_polynomial(r: u32, d: u32, p: GradedPolynomial) -> Result<Self, WallError> {
        let mut coefficients = vec![GradedPolynomial::zero(); r as usize + 1];
        for (m, c) in p.terms() {
            let (rest, j) = m.without(DeltaSymbols::QSYM);
            let (rest, a) = rest.without(DeltaSymbols::A_ALPHA);
            if j > r || a as i64 != d as i64 - 2 * j as i64 {
                return Err(WallError::Shape(format!("term {m} with r = {r}, d = {d}")));
            }
            let i = (r - j) as usize;
            coefficients[i].add_term(rest, c.clone());
        }
        Ok(Self {
            r,
            d,
            polynomial: p,
            coefficients,
        })
    }

    /// Exponent of `Aα` in the `i`-th term.
    pub fn alpha_exponent(&self, i: u32) -> i64 {
        self.d as i64 - 2 * self.r as i64 + 2 * i as i64
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "r": self.r,
            "d": self.d,
            "delta": self.polynomial.to_string(),
            "coefficients": self.coefficients.iter().enumerate().map(|(i, a)| serde_json::json!({
                "i": i,
                "qsym_power": self.r as usize - i,
                "aalpha_power": self.alpha_exponent(i as u32),
                "value": a.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Sum over partitions of the level, checked against the polynomial shape.
pub fn delta_assemble(inv: &WallInvariants, params: &DeltaParams) -> Result<DeltaPolynomial, WallError> {
    let alpha_sq = -inv.n - 2;
    if alpha_sq == -1 {
        return Err(WallError::Obstructed);
    }
    if inv.r < 0 || inv.d < 0 {
        return Err(WallError::Malformed(format!("negative invariants {inv:?}")));
    }
    let (r, d) = (inv.r as u32, inv.d as u32);
    let mut total = GradedPolynomial::zero();
    for parts in partitions(r) {
        let s = partition_series(&parts, d, inv.n, alpha_sq, params)?;
        total = total + s.coefficient(0);
    }
    DeltaPolynomial::from_polynomial(r, d, total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingTerm {
    pub alpha: Vec<i64>,
    pub epsilon: i64,
    /// `ε·δ` with `Qsym` and `Aα` written in the coordinates `s1, s2, …` of `Σ`.
    pub signed_delta: GradedPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CrossingSum {
    pub terms: Vec<CrossingTerm>,
    pub total: GradedPolynomial,
}

impl CrossingSum {
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct T<'a> {
            alpha: &'a [i64],
            epsilon: i64,
            signed_delta: String,
        }
        serde_json::json!({
            "terms": self.terms.iter().map(|t| T {
                alpha: &t.alpha,
                epsilon: t.epsilon,
                signed_delta: t.signed_delta.to_string(),
            }).collect::<Vec<_>>(),
            "total": self.total.to_string(),
        })
    }
}

/// `Σ ε(c,α) δ(α)` as a polynomial in the coordinates of `Σ`.
pub fn wall_crossing_difference(
    q: &IntersectionForm,
    walls: &[(Wall, DeltaPolynomial)],
) -> Result<CrossingSum, WallError> {
    let n = q.rank();
    let coords: Vec<GradedPolynomial> = (1..=n).map(|i| scalar_poly(&format!("s{i}"))).collect();
    let mut qsym = GradedPolynomial::zero();
    for i in 0..n {
        for j in 0..n {
            let e = q.matrix()[i][j];
            if e != 0 {
                qsym = qsym + (&coords[i] * &coords[j]).scale(&int(e));
            }
        }
    }
    let mut sum = CrossingSum::default();
    for (w, delta) in walls {
        let eps = w
            .epsilon
            .ok_or_else(|| WallError::Malformed(format!("wall {:?} has no sign", w.alpha)))?;
        let qa = q.apply(&w.alpha);
        let pairing = qa
            .iter()
            .zip(&coords)
            .fold(GradedPolynomial::zero(), |acc, (&k, s)| acc + s.scale(&int(k)));
        let signed = delta
            .polynomial
            .substitute(DeltaSymbols::QSYM, &qsym)
            .substitute(DeltaSymbols::A_ALPHA, &pairing)
            .scale(&int(eps));
        sum.total = &sum.total + &signed;
        sum.terms.push(CrossingTerm {
            alpha: w.alpha.clone(),
            epsilon: eps,
            signed_delta: signed,
        });
    }
    Ok(sum)
}

//! Walls for `b⁺ = 1`: intersection forms, wall classes crossed by a path of
//! period points, wall signs and invariants, and the wall-crossing terms.

mod delta;
mod form;

pub use delta::{
    delta_assemble, delta_block, partitions, wall_crossing_difference, CrossingSum, CrossingTerm, DeltaParams,
    DeltaPolynomial, DeltaSymbols,
};
pub use form::{FormJson, IntersectionForm, Inertia};

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::algebra::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WallError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("form is not symmetric")]
    NotSymmetric,
    #[error("wall operations need b⁺ = 1, form has b⁺ = {0}")]
    BPlus(usize),
    #[error("period point {0} has non-positive square")]
    NotPositive(String),
    #[error("period points lie in different components of the positive cone")]
    DifferentComponents,
    #[error("(c − α)² = {0} is odd")]
    OddEpsilon(i64),
    #[error("α² − p₁ = {0} is not divisible by 4")]
    Divisibility(i64),
    #[error("α² = {alpha_sq} is outside [p₁, 0) for p₁ = {p1}")]
    OutOfRange { alpha_sq: i64, p1: i64 },
    #[error("α² = −1 is outside the residue computation")]
    Obstructed,
    #[error("{0}")]
    Algebra(String),
    #[error("shape violation in δ: {0}")]
    Shape(String),
    #[error("bad input: {0}")]
    Malformed(String),
}

/// `α ≡ c (mod 2)` and `0 > Q(α,α) ≥ p₁`.
pub fn is_p_type_wall(alpha: &[i64], c: &[i64], p1: i64, q: &IntersectionForm) -> bool {
    if alpha.len() != q.rank() || c.len() != q.rank() {
        return false;
    }
    let parity = alpha.iter().zip(c).all(|(a, b)| (a - b).rem_euclid(2) == 0);
    let sq = q.square(alpha);
    parity && sq < 0 && sq >= p1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum EpsilonConvention {
    /// `(−1)^{(c−α)²/2}`
    #[default]
    Signed,
    /// The bare exponent `(c−α)²/2`.
    Unsigned,
}

/// The wall sign. With [`EpsilonConvention::Unsigned`] the exponent itself.
pub fn epsilon(q: &IntersectionForm, c: &[i64], alpha: &[i64], conv: EpsilonConvention) -> Result<i64, WallError> {
    let diff: Vec<i64> = c.iter().zip(alpha).map(|(a, b)| a - b).collect();
    let sq = q.square(&diff);
    if sq % 2 != 0 {
        return Err(WallError::OddEpsilon(sq));
    }
    let e = sq / 2;
    Ok(match conv {
        EpsilonConvention::Signed => {
            if e.rem_euclid(2) == 0 {
                1
            } else {
                -1
            }
        }
        EpsilonConvention::Unsigned => e,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WallInvariants {
    /// Level `(α² − p₁)/4`.
    pub r: i64,
    /// Degree `−p₁ − 3`.
    pub d: i64,
    /// Complex dimension `−α² − 2` of the reducible model.
    pub n: i64,
}

pub fn wall_invariants(alpha_sq: i64, p1: i64) -> Result<WallInvariants, WallError> {
    if (alpha_sq - p1).rem_euclid(4) != 0 {
        return Err(WallError::Divisibility(alpha_sq - p1));
    }
    if alpha_sq >= 0 || alpha_sq < p1 {
        return Err(WallError::OutOfRange { alpha_sq, p1 });
    }
    if alpha_sq == -1 {
        return Err(WallError::Obstructed);
    }
    Ok(WallInvariants {
        r: (alpha_sq - p1) / 4,
        d: -p1 - 3,
        n: -alpha_sq - 2,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub alpha: Vec<i64>,
    pub alpha_sq: i64,
    /// `None` when `α² − p₁` is not divisible by 4 or `α² = −1`.
    pub invariants: Option<WallInvariants>,
    pub epsilon: Option<i64>,
    /// Crossing parameter on the segment `ω₋ + t(ω₊ − ω₋)`.
    pub t_star: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WallSearch {
    pub walls: Vec<Wall>,
    /// P-type classes orthogonal to an endpoint (the path starts or ends on a wall).
    pub degenerate: Vec<Vec<i64>>,
    /// Coordinate bounds of the candidate box.
    pub bounds: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WallOptions {
    /// Count `α` and `−α` once, keeping the sign with `Q(α,ω₋) < 0 < Q(α,ω₊)`.
    pub collapse_sign: bool,
    pub epsilon: EpsilonConvention,
}

impl Default for WallOptions {
    fn default() -> Self {
        Self {
            collapse_sign: true,
            epsilon: EpsilonConvention::Signed,
        }
    }
}

const T_SAMPLES: usize = 64;

/// Walls of P-type crossed by the segment from `ω₋` to `ω₊`.
///
/// Candidates come from a box: on the wall `x·ω_t = 0` the positive definite
/// majorant `G_t = 2Qωωᵀ Q/(ωQω) − Q` satisfies `xᵀG_t x = −x² ≤ −p₁`, which
/// bounds `|xᵢ|` by `√(−p₁ (G_t⁻¹)ᵢᵢ)`. The bound is maximised over sampled
/// `t` and doubled; membership is then decided exactly.
pub fn enumerate_walls(
    q: &IntersectionForm,
    c: &[i64],
    p1: i64,
    omega_minus: &[Rational],
    omega_plus: &[Rational],
    opts: WallOptions,
) -> Result<WallSearch, WallError> {
    let n = q.rank();
    for v in [c.len(), omega_minus.len(), omega_plus.len()] {
        if v != n {
            return Err(WallError::Dimension { expected: n, found: v });
        }
    }
    let inertia = q.inertia();
    if inertia.positive != 1 {
        return Err(WallError::BPlus(inertia.positive));
    }
    for w in [omega_minus, omega_plus] {
        if !q.square_q(w).is_positive() {
            return Err(WallError::NotPositive(fmt_vec(w)));
        }
    }
    if !q.pair_q(omega_minus, omega_plus).is_positive() {
        return Err(WallError::DifferentComponents);
    }
    let mut search = WallSearch {
        bounds: candidate_bounds(q, p1, omega_minus, omega_plus),
        ..Default::default()
    };
    if p1 >= 0 {
        return Ok(search);
    }
    let mut seen = BTreeSet::new();
    for alpha in box_points(&search.bounds) {
        if !is_p_type_wall(&alpha, c, p1, q) {
            continue;
        }
        let a = q.pair_int_q(&alpha, omega_minus);
        let b = q.pair_int_q(&alpha, omega_plus);
        if a.is_zero() || b.is_zero() {
            search.degenerate.push(alpha);
            continue;
        }
        if (&a * &b).is_positive() {
            continue;
        }
        if opts.collapse_sign && a.is_positive() {
            continue;
        }
        if !seen.insert(alpha.clone()) {
            continue;
        }
        let sq = q.square(&alpha);
        search.walls.push(Wall {
            t_star: &a / (&a - &b),
            invariants: wall_invariants(sq, p1).ok(),
            epsilon: epsilon(q, c, &alpha, opts.epsilon).ok(),
            alpha_sq: sq,
            alpha,
        });
    }
    search
        .walls
        .sort_by(|x, y| x.t_star.cmp(&y.t_star).then_with(|| x.alpha.cmp(&y.alpha)));
    search.degenerate.sort();
    Ok(search)
}

fn candidate_bounds(q: &IntersectionForm, p1: i64, wm: &[Rational], wp: &[Rational]) -> Vec<i64> {
    let n = q.rank();
    let to_f = |r: &Rational| -> f64 {
        let (num, den) = (r.numer().to_string(), r.denom().to_string());
        num.parse::<f64>().unwrap_or(0.0) / den.parse::<f64>().unwrap_or(1.0)
    };
    let wm: Vec<f64> = wm.iter().map(to_f).collect();
    let wp: Vec<f64> = wp.iter().map(to_f).collect();
    let qm: Vec<Vec<f64>> = q.matrix().iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let mut best = vec![0.0f64; n];
    let budget = (-p1).max(0) as f64;
    for s in 0..T_SAMPLES {
        let t = s as f64 / (T_SAMPLES - 1) as f64;
        let w: Vec<f64> = (0..n).map(|i| wm[i] + t * (wp[i] - wm[i])).collect();
        let qw: Vec<f64> = (0..n).map(|i| (0..n).map(|j| qm[i][j] * w[j]).sum()).collect();
        let wqw: f64 = (0..n).map(|i| w[i] * qw[i]).sum();
        let g: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| 2.0 * qw[i] * qw[j] / wqw - qm[i][j]).collect())
            .collect();
        if let Some(inv) = invert_f64(&g) {
            for i in 0..n {
                best[i] = best[i].max((budget * inv[i][i].max(0.0)).sqrt());
            }
        }
    }
    best.iter().map(|b| (2.0 * b).ceil() as i64 + 1).collect()
}

fn invert_f64(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != 0.0 {
                    let pivot_row = a[col].clone();
                    for (x, y) in a[r].iter_mut().zip(pivot_row) {
                        *x -= f * y;
                    }
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// All integer points with `|xᵢ| ≤ bounds[i]`.
pub fn box_points(bounds: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-b..=b).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn fmt_vec(v: &[Rational]) -> String {
    format!("({})", v.iter().map(format_rational).collect::<Vec<_>>().join(","))
}

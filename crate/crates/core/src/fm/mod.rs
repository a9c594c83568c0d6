//! Weighted point configurations in ℝ⁴: balanced representatives, the strata
//! of the weighted configuration space (trees whose non-leaf, non-root vertices
//! are all ghosts), and limits of colliding polynomial families.

mod limit;
mod strata;

pub use limit::{limit_stratum, screen_center, FamilyJson, LimitStratum, PolynomialFamily, Screen, ScreenPoint, TPoly};
pub use strata::{enumerate_fm_strata, is_w_type, leaf_weights, stratum_format, unit_shape};

use num_traits::Zero;

use crate::algebra::Rational;

pub type Vec4 = [Rational; 4];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FmError {
    #[error("all points coincide; no balanced representative exists")]
    Coincident,
    #[error("points {0} and {1} coincide for all small t")]
    NotEventuallyDistinct(usize, usize),
    #[error("family has no points")]
    Empty,
    #[error("weights must be positive")]
    ZeroWeight,
    #[error("t-order did not increase while resolving cluster {0:?}")]
    OrderGuard(Vec<usize>),
    #[error("tree {0} is not a configuration-space stratum")]
    NotWType(String),
    #[error("bad family: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPoint {
    pub coords: Vec4,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightedConfiguration {
    pub points: Vec<WeightedPoint>,
}

pub fn zero4() -> Vec4 {
    std::array::from_fn(|_| Rational::zero())
}

pub fn norm_sq(v: &Vec4) -> Rational {
    v.iter().map(|x| x * x).sum()
}

impl WeightedConfiguration {
    pub fn new(points: impl IntoIterator<Item = (Vec4, u64)>) -> Self {
        Self {
            points: points
                .into_iter()
                .map(|(coords, weight)| WeightedPoint { coords, weight })
                .collect(),
        }
    }

    pub fn total_weight(&self) -> Rational {
        Rational::from_integer(self.points.iter().map(|p| p.weight).sum::<u64>().into())
    }

    /// `Σ wᵢ xᵢ / Σ wᵢ`
    pub fn barycenter(&self) -> Vec4 {
        let total = self.total_weight();
        let mut c = zero4();
        if total.is_zero() {
            return c;
        }
        for p in &self.points {
            let w = Rational::from_integer(p.weight.into());
            for (ci, xi) in c.iter_mut().zip(&p.coords) {
                *ci += &w * xi;
            }
        }
        c.map(|x| x / &total)
    }

    /// `Σ wᵢ |xᵢ|²`
    pub fn moment(&self) -> Rational {
        self.points
            .iter()
            .map(|p| Rational::from_integer(p.weight.into()) * norm_sq(&p.coords))
            .sum()
    }

    pub fn translated(&self, by: &Vec4) -> Self {
        Self {
            points: self
                .points
                .iter()
                .map(|p| WeightedPoint {
                    coords: std::array::from_fn(|i| &p.coords[i] - &by[i]),
                    weight: p.weight,
                })
                .collect(),
        }
    }
}

/// `Σ wᵢxᵢ = 0` and `Σ wᵢ|xᵢ|² = Σ wᵢ`, exactly.
pub fn balanced_check(c: &WeightedConfiguration) -> bool {
    c.barycenter().iter().all(Zero::is_zero) && c.moment() == c.total_weight()
}

/// Centres the configuration and returns it with `λ²` such that scaling the
/// centred points by `λ` balances them: `λ² · Σ wᵢ|zᵢ|² = Σ wᵢ`.
pub fn balance_class(c: &WeightedConfiguration) -> Result<(WeightedConfiguration, Rational), FmError> {
    let centred = c.translated(&c.barycenter());
    let m = centred.moment();
    if m.is_zero() {
        return Err(FmError::Coincident);
    }
    Ok((centred.clone(), centred.total_weight() / m))
}

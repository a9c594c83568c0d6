use std::fmt;

use super::{BubbleTree, TreeError};

/// `constant + (chi_sigma_halves / 2)·(χ + σ)`, an affine function of χ+σ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AffineDim {
    pub constant: i64,
    pub chi_sigma_halves: i64,
}

impl AffineDim {
    /// Evaluates at `χ + σ = s`; `s` must be even.
    pub fn eval(&self, chi: i64, sigma: i64) -> Result<i64, TreeError> {
        let s = chi + sigma;
        if s % 2 != 0 {
            return Err(TreeError::Parity(s));
        }
        Ok(self.constant + self.chi_sigma_halves * (s / 2))
    }

    /// Dimension of the top stratum `[K]` of the charge-K moduli space.
    pub fn top(k: u64) -> Self {
        Self {
            constant: 8 * k as i64,
            chi_sigma_halves: -3,
        }
    }
}

impl std::ops::Sub for AffineDim {
    type Output = AffineDim;
    fn sub(self, rhs: AffineDim) -> AffineDim {
        AffineDim {
            constant: self.constant - rhs.constant,
            chi_sigma_halves: self.chi_sigma_halves - rhs.chi_sigma_halves,
        }
    }
}

impl fmt::Display for AffineDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        match self.chi_sigma_halves {
            0 => Ok(()),
            h if h % 2 == 0 => write!(f, " {} {}(χ+σ)", if h < 0 { '-' } else { '+' }, (h / 2).abs()),
            h => write!(f, " {} {}/2(χ+σ)", if h < 0 { '-' } else { '+' }, h.abs()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumInfo {
    pub tree: BubbleTree,
    pub dimension: AffineDim,
    /// `dimension` evaluated at the requested (χ, σ).
    pub dimension_value: i64,
    pub ghost_count: usize,
    pub edge_count: usize,
    /// Dimension of the product of SO(3) isotropy groups at ghost vertices.
    pub isotropy_dim: i64,
    /// Dimension of the gluing parameters, one `R⁺ × SO(3)` per edge.
    pub gluing_dim: i64,
    /// `dim [K] − dimension`.
    pub codimension: i64,
}

impl BubbleTree {
    /// Symbolic stratum dimension as an affine function of χ+σ.
    ///
    /// Root: `8w − (3/2)(χ+σ) + 4n` (instanton on X, n bubble points on X).
    /// Bubble with `w ≥ 1`: `8w − 8 + 4n` (centred instanton on S⁴ mod
    /// dilation and translation, plus n points). Ghost: `4n − 5` (n points
    /// on ℝ⁴ mod the 5-dimensional group of translations and dilations).
    /// Each marked weight is one more point, `+4`.
    pub fn dimension(&self) -> AffineDim {
        let mut constant = 0i64;
        for v in self.vertices() {
            let n = (v.children.len() + v.marks.len()) as i64;
            let w = v.weight as i64;
            constant += if v.is_root() {
                8 * w + 4 * n
            } else if w >= 1 {
                8 * w - 8 + 4 * n
            } else {
                4 * n - 5
            };
        }
        AffineDim {
            constant,
            chi_sigma_halves: -3,
        }
    }

    pub fn stratum_info(&self, chi: i64, sigma: i64) -> Result<StratumInfo, TreeError> {
        self.validate().map_err(TreeError::Invalid)?;
        let dimension = self.dimension();
        let dimension_value = dimension.eval(chi, sigma)?;
        let top = AffineDim::top(self.charge());
        let codim = top - dimension;
        debug_assert_eq!(codim.chi_sigma_halves, 0);
        let ghost_count = self.ghost_count();
        let edge_count = self.edge_count();
        Ok(StratumInfo {
            tree: self.clone(),
            dimension,
            dimension_value,
            ghost_count,
            edge_count,
            isotropy_dim: 3 * ghost_count as i64,
            gluing_dim: 4 * edge_count as i64,
            codimension: codim.constant,
        })
    }
}

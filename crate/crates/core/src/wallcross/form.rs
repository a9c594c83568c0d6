use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::WallError;
use crate::algebra::Rational;

/// Symmetric integer intersection form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionForm {
    matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl IntersectionForm {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self, WallError> {
        let n = matrix.len();
        for row in &matrix {
            if row.len() != n {
                return Err(WallError::Dimension {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        for i in 0..n {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(WallError::NotSymmetric);
                }
            }
        }
        Ok(Self { matrix })
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        Self {
            matrix: (0..n)
                .map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect())
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| x[i] * self.matrix[i][j] * y[j]).sum::<i64>())
            .sum()
    }

    pub fn square(&self, x: &[i64]) -> i64 {
        self.pair(x, x)
    }

    pub fn pair_q(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let n = self.rank();
        let mut s = Rational::zero();
        for i in 0..n {
            for j in 0..n {
                if self.matrix[i][j] != 0 {
                    s += &x[i] * &y[j] * Rational::from_integer(self.matrix[i][j].into());
                }
            }
        }
        s
    }

    pub fn square_q(&self, x: &[Rational]) -> Rational {
        self.pair_q(x, x)
    }

    pub fn pair_int_q(&self, x: &[i64], y: &[Rational]) -> Rational {
        let xq: Vec<Rational> = x.iter().map(|&v| Rational::from_integer(v.into())).collect();
        self.pair_q(&xq, y)
    }

    /// `Q·x`
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Signature counts by exact symmetric elimination over ℚ.
    pub fn inertia(&self) -> Inertia {
        let n = self.rank();
        let mut a: Vec<Vec<Rational>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        let mut out = Inertia {
            positive: 0,
            negative: 0,
            zero: 0,
        };
        let mut k = 0;
        while k < n {
            // bring a nonzero diagonal entry to (k, k)
            if a[k][k].is_zero() {
                if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                    a.swap(k, i);
                    for row in a.iter_mut() {
                        row.swap(k, i);
                    }
                } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                    // x_k += x_j makes the (k, k) entry 2·a[k][j] ≠ 0
                    for c in 0..n {
                        let v = a[j][c].clone();
                        a[k][c] += v;
                    }
                    for r in 0..n {
                        let v = a[r][j].clone();
                        a[r][k] += v;
                    }
                } else {
                    out.zero += 1;
                    k += 1;
                    continue;
                }
            }
            let p = a[k][k].clone();
            if p.is_positive() {
                out.positive += 1;
            } else {
                out.negative += 1;
            }
            for i in k + 1..n {
                let f = &a[i][k] / &p;
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = &f * &a[k][j];
                    a[i][j] -= v;
                }
                for r in k..n {
                    let v = &f * &a[r][k];
                    a[r][i] -= v;
                }
            }
            k += 1;
        }
        out
    }

    pub fn b_plus(&self) -> usize {
        self.inertia().positive
    }

    pub fn signature(&self) -> i64 {
        let i = self.inertia();
        i.positive as i64 - i.negative as i64
    }

    /// `χ = 2 + b₂` for a simply connected four-manifold with this form.
    pub fn euler_number(&self) -> i64 {
        2 + self.rank() as i64
    }

    pub fn determinant(&self) -> Rational {
        let n = self.rank();
        let mut a: Vec<Vec<Rational>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        let mut det = Rational::from_integer(1.into());
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= &a[c][c];
            for r in c + 1..n {
                let f = &a[r][c] / &a[c][c];
                for k in c..n {
                    let v = &f * &a[c][k];
                    a[r][k] -= v;
                }
            }
        }
        det
    }

    pub fn is_unimodular(&self) -> bool {
        let d = self.determinant();
        d == Rational::from_integer(1.into()) || d == Rational::from_integer((-1).into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormJson {
    pub schema: u32,
    pub matrix: Vec<Vec<i64>>,
}

impl FormJson {
    pub fn to_form(&self) -> Result<IntersectionForm, WallError> {
        if self.schema != 1 {
            return Err(WallError::Malformed(format!("unsupported schema {}", self.schema)));
        }
        IntersectionForm::new(self.matrix.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inertia_examples() {
        let h = IntersectionForm::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(h.inertia(), Inertia { positive: 1, negative: 1, zero: 0 });
        assert_eq!(h.signature(), 0);
        assert!(h.is_unimodular());
        let d = IntersectionForm::diagonal(&[1, -1, -1, -1]);
        assert_eq!(d.b_plus(), 1);
        assert_eq!(d.signature(), -2);
        let z = IntersectionForm::new(vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(z.inertia().zero, 2);
        let e8ish = IntersectionForm::new(vec![vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(e8ish.b_plus(), 2);
        assert!(!e8ish.is_unimodular());
        assert!(IntersectionForm::new(vec![vec![0, 1], vec![2, 0]]).is_err());
    }
}

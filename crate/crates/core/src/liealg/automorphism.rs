use num_traits::Zero;

use super::{Elem, LieAlgebraData};
use crate::error::{Result, WakiError};
use crate::exactnum::{root_of_unity, CycNum, Mat};

const MAX_ORDER: u32 = 1000;

/// Finite-order automorphism; column `j` of `matrix` is the image of basis element `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct AutomorphismData {
    pub matrix: Mat,
    pub order: u32,
}

fn matrix_order(m: &Mat) -> Result<u32> {
    let id = Mat::identity(m.rows);
    let mut p = m.clone();
    for k in 1..=MAX_ORDER {
        if p == id {
            return Ok(k);
        }
        p = p.mul(m);
    }
    Err(WakiError::InvalidAutomorphism(format!("order exceeds {MAX_ORDER}")))
}

impl AutomorphismData {
    pub fn identity(dim: usize) -> Self {
        AutomorphismData { matrix: Mat::identity(dim), order: 1 }
    }

    /// Wraps a matrix after checking that it preserves bracket and form and has finite order.
    pub fn from_matrix(alg: &LieAlgebraData, matrix: Mat) -> Result<Self> {
        let n = alg.dim();
        if matrix.rows != n || matrix.cols != n {
            return Err(WakiError::InvalidAutomorphism("matrix has the wrong shape".into()));
        }
        let order = matrix_order(&matrix)?;
        let t = AutomorphismData { matrix, order };
        t.validate(alg)?;
        Ok(t)
    }

    pub fn apply(&self, x: &[CycNum]) -> Elem {
        self.matrix.mul_vec(x)
    }

    pub fn power(&self, k: u32) -> Mat {
        let mut p = Mat::identity(self.matrix.rows);
        for _ in 0..(k % self.order) {
            p = p.mul(&self.matrix);
        }
        p
    }

    pub fn validate(&self, alg: &LieAlgebraData) -> Result<()> {
        let n = alg.dim();
        let img: Vec<Elem> = (0..n).map(|a| self.matrix.col(a)).collect();
        for a in 0..n {
            for b in 0..n {
                let lhs = self.apply(&alg.bracket(&alg.basis_elem(a), &alg.basis_elem(b)));
                let rhs = alg.bracket(&img[a], &img[b]);
                if lhs != rhs {
                    return Err(WakiError::InvalidAutomorphism(format!(
                        "bracket not preserved on ({}, {})",
                        alg.labels[a], alg.labels[b]
                    )));
                }
                if alg.pair(&img[a], &img[b]) != alg.form[(a, b)] {
                    return Err(WakiError::InvalidAutomorphism(format!(
                        "form not preserved on ({}, {})",
                        alg.labels[a], alg.labels[b]
                    )));
                }
            }
        }
        if matrix_order(&self.matrix)? != self.order {
            return Err(WakiError::InvalidAutomorphism("declared order is wrong".into()));
        }
        Ok(())
    }

    /// `exp(2 pi i / n ad_theta)`; `ad_theta` must be diagonal with integer
    /// eigenvalues in the ambient basis.
    pub fn inner(alg: &LieAlgebraData, theta: &[CycNum], n: u32) -> Result<Self> {
        if n == 0 {
            return Err(WakiError::InvalidAutomorphism("order must be positive".into()));
        }
        let ad = alg.ad_matrix(theta);
        let dim = alg.dim();
        let mut m = Mat::zeros(dim, dim);
        for a in 0..dim {
            for b in 0..dim {
                if a != b && !ad[(a, b)].is_zero() {
                    return Err(WakiError::InvalidAutomorphism(
                        "ad_theta is not diagonal in the basis".into(),
                    ));
                }
            }
            let ev = ad[(a, a)].as_rational().filter(|x| x.is_integer()).ok_or_else(|| {
                WakiError::InvalidAutomorphism(format!(
                    "ad_theta eigenvalue on {} is not an integer",
                    alg.labels[a]
                ))
            })?;
            let k: i64 = ev.to_integer().try_into().map_err(|_| {
                WakiError::InvalidAutomorphism("ad_theta eigenvalue too large".into())
            })?;
            m[(a, a)] = root_of_unity(k, n);
        }
        Self::from_matrix(alg, m)
    }

    /// Outer automorphism `X -> -J X^T J` of `sl_n` (`J` the anti-diagonal),
    /// i.e. `E_ij -> -E_{n+1-j, n+1-i}`.
    pub fn secondary_diagonal(alg: &LieAlgebraData) -> Result<Self> {
        let rep = alg.matrix_rep.as_ref().ok_or_else(|| {
            WakiError::InvalidAutomorphism("secondary diagonal transpose needs an sl_n preset".into())
        })?;
        if rep.n < 3 {
            return Err(WakiError::InvalidAutomorphism(
                "secondary diagonal transpose is inner for n < 3".into(),
            ));
        }
        let n = rep.n;
        let cols: Vec<Elem> = rep
            .basis
            .iter()
            .map(|x| {
                let mut y = Mat::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        y[(i, j)] = -&x[(n - 1 - j, n - 1 - i)];
                    }
                }
                rep.from_matrix(&y)
            })
            .collect::<Result<_>>()?;
        Self::from_matrix(alg, Mat::from_cols(&cols))
    }

    /// `mu o exp(2 pi i / n ad_theta)`, requiring `mu(theta) = theta`.
    pub fn compose_outer(alg: &LieAlgebraData, mu: &Self, theta: &[CycNum], n: u32) -> Result<Self> {
        if mu.apply(theta) != theta {
            return Err(WakiError::InvalidAutomorphism("mu does not fix theta".into()));
        }
        let inner = Self::inner(alg, theta, n)?;
        Self::from_matrix(alg, mu.matrix.mul(&inner.matrix))
    }
}

use num_traits::{One, Zero};

use crate::error::{Result, WakiError};
use crate::exactnum::{CycNum, Mat, Q};

/// Coefficient vector of a Lie algebra element in the ambient basis.
pub type Elem = Vec<CycNum>;

/// Sparse structure constants: `table[a][b]` lists `(c, f_ab^c)`.
pub type Structure = Vec<Vec<Vec<(usize, CycNum)>>>;

/// Defining representation of an `sl_n` preset.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    pub n: usize,
    pub basis: Vec<Mat>,
}

#[derive(Clone, Debug)]
pub struct LieAlgebraData {
    pub name: String,
    pub labels: Vec<String>,
    pub structure: Structure,
    /// Invariant form, normalised so that long roots have `|psi|^2` below.
    pub form: Mat,
    pub dual_coxeter: Q,
    pub highest_root_norm_sq: Q,
    pub matrix_rep: Option<MatrixRep>,
}

fn unit_matrix(n: usize, i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(n, n);
    m[(i, j)] = CycNum::one();
    m
}

impl MatrixRep {
    pub fn to_matrix(&self, x: &[CycNum]) -> Mat {
        let mut m = Mat::zeros(self.n, self.n);
        for (c, b) in x.iter().zip(&self.basis) {
            if !c.is_zero() {
                m = m.add(&b.scale(c));
            }
        }
        m
    }

    /// Coordinates of a traceless matrix in the `sl_n` basis
    /// (off-diagonal units row-major, then `E_ii - E_{i+1,i+1}`).
    pub fn from_matrix(&self, m: &Mat) -> Result<Elem> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n - 1);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    out.push(m[(i, j)].clone());
                }
            }
        }
        let mut acc = CycNum::zero();
        for i in 0..n - 1 {
            acc += &m[(i, i)];
            out.push(acc.clone());
        }
        acc += &m[(n - 1, n - 1)];
        if !acc.is_zero() {
            return Err(WakiError::InvalidAlgebra("matrix is not traceless".into()));
        }
        Ok(out)
    }
}

impl LieAlgebraData {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn bracket(&self, x: &[CycNum], y: &[CycNum]) -> Elem {
        let mut out = vec![CycNum::zero(); self.dim()];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let s = xa * yb;
                for (c, f) in &self.structure[a][b] {
                    out[*c] += &(&s * f);
                }
            }
        }
        out
    }

    pub fn pair(&self, x: &[CycNum], y: &[CycNum]) -> CycNum {
        let mut acc = CycNum::zero();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                let f = &self.form[(a, b)];
                if !yb.is_zero() && !f.is_zero() {
                    acc += &(&(xa * yb) * f);
                }
            }
        }
        acc
    }

    pub fn basis_elem(&self, a: usize) -> Elem {
        let mut v = vec![CycNum::zero(); self.dim()];
        v[a] = CycNum::one();
        v
    }

    /// Matrix of `ad_x`; column `b` holds `[x, e_b]`.
    pub fn ad_matrix(&self, x: &[CycNum]) -> Mat {
        let cols: Vec<Elem> = (0..self.dim()).map(|b| self.bracket(x, &self.basis_elem(b))).collect();
        Mat::from_cols(&cols)
    }

    pub fn killing_form(&self) -> Mat {
        let ads: Vec<Mat> = (0..self.dim()).map(|a| self.ad_matrix(&self.basis_elem(a))).collect();
        let n = self.dim();
        let mut k = Mat::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let t = ads[a].mul(&ads[b]).trace();
                k[(a, b)] = t.clone();
                k[(b, a)] = t;
            }
        }
        k
    }

    /// `sl_n` in the basis: `E_ij` (i != j, row-major) then `H_i = E_ii - E_{i+1,i+1}`,
    /// with the trace form.
    pub fn sl(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(WakiError::InvalidAlgebra(format!("sl_{n} needs n >= 2")));
        }
        let mut labels = Vec::new();
        let mut basis = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    labels.push(format!("E{}{}", i + 1, j + 1));
                    basis.push(unit_matrix(n, i, j));
                }
            }
        }
        for i in 0..n - 1 {
            labels.push(format!("H{}", i + 1));
            basis.push(unit_matrix(n, i, i).sub(&unit_matrix(n, i + 1, i + 1)));
        }
        let rep = MatrixRep { n, basis };
        let dim = labels.len();
        let mut structure: Structure = vec![vec![Vec::new(); dim]; dim];
        let mut form = Mat::zeros(dim, dim);
        for a in 0..dim {
            for b in 0..dim {
                let (x, y) = (&rep.basis[a], &rep.basis[b]);
                let comm = x.mul(y).sub(&y.mul(x));
                let coords = rep.from_matrix(&comm)?;
                structure[a][b] =
                    coords.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
                form[(a, b)] = x.mul(y).trace();
            }
        }
        Ok(LieAlgebraData {
            name: format!("sl{n}"),
            labels,
            structure,
            form,
            dual_coxeter: Q::from_integer((n as i64).into()),
            highest_root_norm_sq: Q::from_integer(2.into()),
            matrix_rep: Some(rep),
        })
    }

    /// Checks antisymmetry, Jacobi, invariance and non-degeneracy of the form,
    /// and that the Killing form equals `h |psi|^2` times the given form.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if self.structure.len() != n || self.structure.iter().any(|r| r.len() != n) {
            return Err(WakiError::InvalidAlgebra("structure table has the wrong shape".into()));
        }
        if self.form.rows != n || self.form.cols != n {
            return Err(WakiError::InvalidAlgebra("form has the wrong shape".into()));
        }
        let e: Vec<Elem> = (0..n).map(|a| self.basis_elem(a)).collect();
        let br: Vec<Vec<Elem>> =
            (0..n).map(|a| (0..n).map(|b| self.bracket(&e[a], &e[b])).collect()).collect();
        for a in 0..n {
            for b in 0..n {
                let s: Elem = br[a][b].iter().zip(&br[b][a]).map(|(x, y)| x + y).collect();
                if s.iter().any(|x| !x.is_zero()) {
                    return Err(WakiError::InvalidAlgebra(format!(
                        "antisymmetry fails for ({}, {})",
                        self.labels[a], self.labels[b]
                    )));
                }
                if self.form[(a, b)] != self.form[(b, a)] {
                    return Err(WakiError::InvalidAlgebra("form is not symmetric".into()));
                }
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    let t1 = self.bracket(&e[a], &br[b][c]);
                    let t2 = self.bracket(&e[b], &br[c][a]);
                    let t3 = self.bracket(&e[c], &br[a][b]);
                    if (0..n).any(|i| !(&(&t1[i] + &t2[i]) + &t3[i]).is_zero()) {
                        return Err(WakiError::InvalidAlgebra(format!(
                            "Jacobi identity fails for ({}, {}, {})",
                            self.labels[a], self.labels[b], self.labels[c]
                        )));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.pair(&br[a][b], &e[c]) != self.pair(&e[a], &br[b][c]) {
                        return Err(WakiError::InvalidAlgebra(format!(
                            "form is not invariant on ({}, {}, {})",
                            self.labels[a], self.labels[b], self.labels[c]
                        )));
                    }
                }
            }
        }
        if self.form.rank() != n {
            return Err(WakiError::InvalidAlgebra("form is degenerate".into()));
        }
        let scale = CycNum::from_q(&self.dual_coxeter * &self.highest_root_norm_sq);
        if self.killing_form() != self.form.scale(&scale) {
            return Err(WakiError::InvalidAlgebra(
                "Killing form is not h |psi|^2 times the invariant form".into(),
            ));
        }
        Ok(())
    }

    /// Element given by its diagonal in the defining representation.
    pub fn from_diagonal(&self, diag: &[Q]) -> Result<Elem> {
        let rep = self
            .matrix_rep
            .as_ref()
            .ok_or_else(|| WakiError::InvalidAlgebra("diagonal input needs an sl_n preset".into()))?;
        if diag.len() != rep.n {
            return Err(WakiError::InvalidAlgebra(format!("expected {} diagonal entries", rep.n)));
        }
        let mut m = Mat::zeros(rep.n, rep.n);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = CycNum::from_q(d.clone());
        }
        rep.from_matrix(&m)
    }

    /// Element `sum c E_{ij}` of `sl_n` from 1-based matrix entries.
    pub fn from_entries(&self, entries: &[(usize, usize, Q)]) -> Result<Elem> {
        let rep = self
            .matrix_rep
            .as_ref()
            .ok_or_else(|| WakiError::InvalidAlgebra("matrix entries need an sl_n preset".into()))?;
        let mut m = Mat::zeros(rep.n, rep.n);
        for (i, j, c) in entries {
            if *i == 0 || *j == 0 || *i > rep.n || *j > rep.n {
                return Err(WakiError::InvalidAlgebra(format!("entry ({i},{j}) out of range")));
            }
            m[(i - 1, j - 1)] += &CycNum::from_q(c.clone());
        }
        if !m.trace().is_zero() {
            return Err(WakiError::InvalidAlgebra("matrix is not traceless".into()));
        }
        rep.from_matrix(&m)
    }

    /// The principal grading element `diag((n-1)/2, (n-3)/2, ..., -(n-1)/2)` of `sl_n`.
    pub fn principal_element(&self) -> Result<Elem> {
        let rep = self
            .matrix_rep
            .as_ref()
            .ok_or_else(|| WakiError::InvalidAlgebra("principal element needs an sl_n preset".into()))?;
        let n = rep.n as i64;
        let diag: Vec<Q> = (0..n).map(|i| crate::exactnum::q(n - 1 - 2 * i, 2)).collect();
        self.from_diagonal(&diag)
    }

    pub fn is_zero_elem(x: &[CycNum]) -> bool {
        x.iter().all(Zero::is_zero)
    }
}

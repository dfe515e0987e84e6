use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{AutomorphismData, Elem, LieAlgebraData, Structure};
use crate::error::{Result, WakiError};
use crate::exactnum::{root_of_unity, CycNum, Mat, Q};

/// Eigenspace of the operator `eta_0^{-1} kappa_0` on `g_0`: either the centre
/// (`casimir = 0`) or a sum of simple ideals sharing `h |psi|^2 = casimir`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorGroup {
    pub casimir: Q,
    pub dim: usize,
    pub simple_factors: usize,
}

/// Optional user-supplied ordered bases; each vector must be a joint eigenvector.
#[derive(Clone, Debug, Default)]
pub struct GradingOptions {
    pub minus_basis: Option<Vec<Elem>>,
    pub zero_basis: Option<Vec<Elem>>,
}

/// The joint basis `T_a = (L_alpha, D_k, U^alpha)` adapted to the grading and
/// the twist, with its dual `T^a = (U^alpha, D^k, L_alpha)`.
#[derive(Clone, Debug)]
pub struct GradedTwistData {
    pub algebra: LieAlgebraData,
    pub grading: Elem,
    pub tau: AutomorphismData,
    pub n: u32,
    pub n_minus: usize,
    pub n_zero: usize,
    pub basis: Vec<Elem>,
    pub dual: Vec<Elem>,
    pub grade: Vec<i64>,
    pub class: Vec<u32>,
    /// `f_ab^c` in the joint basis.
    pub structure: Structure,
    pub eta: Mat,
    pub eta_inv: Mat,
    pub groups: Vec<FactorGroup>,
    pub d_group: Vec<usize>,
    to_joint: Mat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelShifts {
    pub level: Q,
    /// `K_0^0 = K + |psi|^2 h / 2`; also the `y` of the Sugawara normalisation.
    pub k00: Q,
    pub group_levels: Vec<Q>,
}

/// Solves for coordinates with respect to a list of independent vectors.
struct Coords {
    rows: Vec<usize>,
    inv: Mat,
}

impl Coords {
    fn new(basis: &[Elem]) -> Result<Self> {
        let m = Mat::from_cols(basis);
        let rows = m.transpose().rref();
        if rows.len() != basis.len() {
            return Err(WakiError::Singular("vectors are linearly dependent".into()));
        }
        let sub = Mat::from_rows(
            rows.iter().map(|&r| (0..basis.len()).map(|c| m[(r, c)].clone()).collect()).collect(),
        );
        Ok(Coords { rows, inv: sub.inverse()? })
    }

    fn of(&self, v: &[CycNum]) -> Vec<CycNum> {
        let sel: Vec<CycNum> = self.rows.iter().map(|&r| v[r].clone()).collect();
        self.inv.mul_vec(&sel)
    }
}

fn combine(basis: &[Elem], coeffs: &[CycNum]) -> Elem {
    let mut out = vec![CycNum::zero(); basis[0].len()];
    for (b, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            if !x.is_zero() {
                *o += &(x * c);
            }
        }
    }
    out
}

/// Scalar `l` with `w = l v`, if any.
fn eigenvalue(v: &[CycNum], w: &[CycNum]) -> Option<CycNum> {
    let i = v.iter().position(|x| !x.is_zero())?;
    let l = &w[i] / &v[i];
    v.iter().zip(w).all(|(a, b)| &(a * &l) == b).then_some(l)
}

fn class_of_root(l: &CycNum, n: u32) -> Option<u32> {
    (0..n).find(|&k| &root_of_unity(k as i64, n) == l)
}

fn integer_divisors(x: &BigInt) -> Result<Vec<u64>> {
    let v = x.abs().to_u64().ok_or_else(|| WakiError::Other("coefficient too large".into()))?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(d);
            out.push(v / d);
        }
        d += 1;
    }
    Ok(out)
}

/// Distinct rational eigenvalues of a rational matrix via its characteristic
/// polynomial (Faddeev-LeVerrier) and the rational root theorem.
fn rational_eigenvalues(a: &Mat) -> Result<Vec<Q>> {
    let n = a.rows;
    let mut coeffs = vec![CycNum::zero(); n + 1];
    coeffs[n] = CycNum::one();
    let mut m = Mat::zeros(n, n);
    let id = Mat::identity(n);
    for k in 1..=n {
        m = a.mul(&m).add(&id.scale(&coeffs[n - k + 1]));
        let am = a.mul(&m);
        coeffs[n - k] = -&(&am.trace() / &CycNum::from_int(k as i64));
    }
    let mut qc: Vec<Q> = coeffs
        .iter()
        .map(|c| c.as_rational().cloned().ok_or_else(|| WakiError::Other("non-rational".into())))
        .collect::<Result<_>>()?;
    let mut roots = Vec::new();
    let low = qc.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if low > 0 {
        roots.push(Q::zero());
        qc.drain(0..low);
    }
    let den = qc.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = qc.iter().map(|c| (c * Q::from_integer(den.clone())).to_integer()).collect();
    if ints.len() > 1 {
        let p = integer_divisors(&ints[0])?;
        let qd = integer_divisors(ints.last().unwrap())?;
        let mut cands: Vec<Q> = Vec::new();
        for a in &p {
            for b in &qd {
                for s in [1i64, -1] {
                    let r = Q::new(BigInt::from(*a) * s, BigInt::from(*b));
                    if !cands.contains(&r) {
                        cands.push(r);
                    }
                }
            }
        }
        for r in cands {
            let mut acc = Q::zero();
            for c in qc.iter().rev() {
                acc = acc * &r + c;
            }
            if acc.is_zero() {
                roots.push(r);
            }
        }
    }
    roots.sort();
    Ok(roots)
}

impl GradedTwistData {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn n_plus(&self) -> usize {
        self.n_minus
    }

    pub fn l_index(&self, alpha: usize) -> usize {
        alpha
    }

    pub fn d_index(&self, k: usize) -> usize {
        self.n_minus + k
    }

    pub fn u_index(&self, alpha: usize) -> usize {
        self.n_minus + self.n_zero + alpha
    }

    /// Class of `T^a`.
    pub fn dual_class(&self, a: usize) -> u32 {
        (self.n - self.class[a]) % self.n
    }

    /// Class of `q^alpha`, i.e. of `U^alpha`.
    pub fn q_class(&self, alpha: usize) -> u32 {
        self.class[self.u_index(alpha)]
    }

    /// Class of `p_alpha`, i.e. of `L_alpha`.
    pub fn p_class(&self, alpha: usize) -> u32 {
        self.class[alpha]
    }

    pub fn d_class(&self, k: usize) -> u32 {
        self.class[self.d_index(k)]
    }

    pub fn joint_coords(&self, x: &[CycNum]) -> Vec<CycNum> {
        self.to_joint.mul_vec(x)
    }

    pub fn ambient(&self, coords: &[CycNum]) -> Elem {
        combine(&self.basis, coords)
    }

    /// `Q = 1/2 sum_alpha [U^alpha, L_alpha]`.
    pub fn q_element(&self) -> Elem {
        let mut acc = vec![CycNum::zero(); self.dim()];
        for a in 0..self.n_minus {
            let b = self.algebra.bracket(&self.basis[self.u_index(a)], &self.basis[a]);
            for (x, y) in acc.iter_mut().zip(&b) {
                *x += y;
            }
        }
        acc.iter().map(|x| x * &CycNum::frac(1, 2)).collect()
    }

    pub fn level_shifts(&self, level: &Q) -> Result<LevelShifts> {
        let alg = &self.algebra;
        let k00 = level + &alg.dual_coxeter * &alg.highest_root_norm_sq / Q::from_integer(2.into());
        if k00.is_zero() {
            return Err(WakiError::CriticalLevel);
        }
        let group_levels =
            self.groups.iter().map(|g| &k00 - &g.casimir / Q::from_integer(2.into())).collect();
        Ok(LevelShifts { level: level.clone(), k00, group_levels })
    }

    /// `<D^k, X>` components of an element of `g_0` (ambient coordinates).
    pub fn zero_component(&self, x: &[CycNum], k: usize) -> CycNum {
        let a = self.d_index(k);
        self.algebra.pair(&self.dual[a], x)
    }
}

struct Decomposer<'a> {
    alg: &'a LieAlgebraData,
    tau: &'a AutomorphismData,
    powers: Vec<Mat>,
}

impl<'a> Decomposer<'a> {
    fn new(alg: &'a LieAlgebraData, tau: &'a AutomorphismData) -> Self {
        let powers = (0..tau.order).map(|k| tau.power(k)).collect();
        Decomposer { alg, tau, powers }
    }

    fn project(&self, v: &[CycNum], class: u32) -> Elem {
        let n = self.tau.order;
        let mut acc = vec![CycNum::zero(); v.len()];
        for (k, p) in self.powers.iter().enumerate() {
            let w = p.mul_vec(v);
            let c = root_of_unity(-(class as i64) * k as i64, n);
            for (a, b) in acc.iter_mut().zip(&w) {
                if !b.is_zero() {
                    *a += &(b * &c);
                }
            }
        }
        let s = CycNum::frac(1, n as i64);
        acc.iter().map(|x| x * &s).collect()
    }

    /// Splits a tau-stable subspace into tau-eigenspaces, in class order.
    fn split(&self, space: &[Elem]) -> Vec<(u32, Elem)> {
        let mut out = Vec::new();
        for class in 0..self.tau.order {
            let imgs: Vec<Elem> = space.iter().map(|v| self.project(v, class)).collect();
            for b in Mat::span_basis(&imgs, self.alg.dim()) {
                out.push((class, b));
            }
        }
        out
    }

    fn class_of(&self, v: &[CycNum]) -> Option<u32> {
        let l = eigenvalue(v, &self.tau.apply(v))?;
        class_of_root(&l, self.tau.order)
    }
}

fn grade_of(alg: &LieAlgebraData, h: &[CycNum], v: &[CycNum]) -> Option<i64> {
    let l = eigenvalue(v, &alg.bracket(h, v))?;
    let r = l.as_rational()?;
    r.is_integer().then(|| r.to_integer().to_i64()).flatten()
}

/// Builds the joint basis for the grading element `h` and automorphism `tau`.
pub fn grade_and_twist(
    alg: &LieAlgebraData,
    h: &[CycNum],
    tau: &AutomorphismData,
    opts: &GradingOptions,
) -> Result<GradedTwistData> {
    let dim = alg.dim();
    if tau.apply(h) != h {
        return Err(WakiError::Incompatible("tau(H) != H".into()));
    }
    let ad = alg.ad_matrix(h);
    let t = ad.mul(&ad).trace();
    let bound = t
        .as_rational()
        .filter(|x| !x.is_negative())
        .ok_or_else(|| WakiError::InvalidGrading("ad_H has non-real spectrum".into()))?
        .floor()
        .to_integer()
        .sqrt()
        .to_i64()
        .unwrap_or(0)
        + 1;
    let mut spaces: Vec<(i64, Vec<Elem>)> = Vec::new();
    let mut total = 0;
    for m in -bound..=bound {
        let shifted = ad.sub(&Mat::identity(dim).scale(&CycNum::from_int(m)));
        let ker = Mat::span_basis(&shifted.nullspace(), dim);
        if !ker.is_empty() {
            total += ker.len();
            spaces.push((m, ker));
        }
    }
    if total != dim {
        return Err(WakiError::InvalidGrading(
            "ad_H is not diagonalisable with integer eigenvalues".into(),
        ));
    }
    let dec = Decomposer::new(alg, tau);
    let n = tau.order;
    let minus_dim: usize = spaces.iter().filter(|(m, _)| *m < 0).map(|(_, s)| s.len()).sum();
    let plus_space: Vec<Elem> =
        spaces.iter().filter(|(m, _)| *m > 0).flat_map(|(_, s)| s.clone()).collect();
    let zero_space: Vec<Elem> =
        spaces.iter().filter(|(m, _)| *m == 0).flat_map(|(_, s)| s.clone()).collect();

    // g_-
    let mut minus: Vec<(i64, u32, Elem)> = Vec::new();
    if let Some(seed) = &opts.minus_basis {
        for (i, v) in seed.iter().enumerate() {
            let g = grade_of(alg, h, v).filter(|g| *g < 0).ok_or_else(|| {
                WakiError::InvalidGrading(format!("seed vector {i} of g_- is not a negative-grade eigenvector"))
            })?;
            let c = dec.class_of(v).ok_or_else(|| {
                WakiError::InvalidGrading(format!("seed vector {i} of g_- is not a tau-eigenvector"))
            })?;
            minus.push((g, c, v.clone()));
        }
        if seed.len() != minus_dim || Mat::span_basis(seed, dim).len() != minus_dim {
            return Err(WakiError::InvalidGrading("seed vectors do not form a basis of g_-".into()));
        }
    } else {
        for (m, space) in spaces.iter().filter(|(m, _)| *m < 0) {
            for (c, v) in dec.split(space) {
                minus.push((*m, c, v));
            }
        }
    }

    // g_+ as the dual of g_-
    let gram = Mat::from_rows(
        minus.iter().map(|(_, _, l)| plus_space.iter().map(|w| alg.pair(l, w)).collect()).collect(),
    );
    let ginv = gram
        .inverse()
        .map_err(|_| WakiError::InvalidGrading("form does not pair g_- with g_+".into()))?;
    let mut plus: Vec<(i64, u32, Elem)> = Vec::new();
    for a in 0..minus.len() {
        let u = combine(&plus_space, &ginv.col(a));
        let g = grade_of(alg, h, &u).ok_or_else(|| WakiError::InvalidGrading("dual vector is not graded".into()))?;
        let c = dec
            .class_of(&u)
            .ok_or_else(|| WakiError::InvalidGrading("dual vector is not a tau-eigenvector".into()))?;
        plus.push((g, c, u));
    }

    // g_0, its factor groups and the D_k
    let d0 = zero_space.len();
    let zc = Coords::new(&zero_space)?;
    let ads: Vec<Mat> = zero_space
        .iter()
        .map(|x| Mat::from_cols(&zero_space.iter().map(|y| zc.of(&alg.bracket(x, y))).collect::<Vec<_>>()))
        .collect();
    let mut kappa0 = Mat::zeros(d0, d0);
    let mut eta0 = Mat::zeros(d0, d0);
    for i in 0..d0 {
        for j in 0..d0 {
            kappa0[(i, j)] = ads[i].mul(&ads[j]).trace();
            eta0[(i, j)] = alg.pair(&zero_space[i], &zero_space[j]);
        }
    }
    let a0 = eta0
        .inverse()
        .map_err(|_| WakiError::InvalidGrading("form is degenerate on g_0".into()))?
        .mul(&kappa0);
    if !a0.is_rational() {
        return Err(WakiError::InvalidGrading("Killing operator on g_0 is not rational".into()));
    }
    let eigs = rational_eigenvalues(&a0)?;
    let mut groups = Vec::new();
    let mut group_spaces: Vec<Vec<Elem>> = Vec::new();
    for c in &eigs {
        let shifted = a0.sub(&Mat::identity(d0).scale(&CycNum::from_q(c.clone())));
        let ker: Vec<Elem> = shifted.nullspace().iter().map(|co| combine(&zero_space, co)).collect();
        let ker = Mat::span_basis(&ker, dim);
        let simple_factors = if c.is_zero() { 0 } else { commutant_dim(alg, &ker)? };
        groups.push(FactorGroup { casimir: c.clone(), dim: ker.len(), simple_factors });
        group_spaces.push(ker);
    }
    if groups.iter().map(|g| g.dim).sum::<usize>() != d0 {
        return Err(WakiError::InvalidGrading("g_0 is not reductive".into()));
    }
    let group_of = |v: &[CycNum]| -> Option<usize> {
        let co = zc.of(v);
        let l = eigenvalue(&co, &a0.mul_vec(&co))?;
        let l = l.as_rational()?.clone();
        eigs.iter().position(|c| *c == l)
    };
    let mut zero: Vec<(usize, u32, Elem)> = Vec::new();
    if let Some(seed) = &opts.zero_basis {
        for (i, v) in seed.iter().enumerate() {
            if grade_of(alg, h, v) != Some(0) {
                return Err(WakiError::InvalidGrading(format!("seed vector {i} of g_0 has nonzero grade")));
            }
            let c = dec.class_of(v).ok_or_else(|| {
                WakiError::InvalidGrading(format!("seed vector {i} of g_0 is not a tau-eigenvector"))
            })?;
            let g = group_of(v).ok_or_else(|| {
                WakiError::InvalidGrading(format!("seed vector {i} of g_0 mixes factor groups"))
            })?;
            zero.push((g, c, v.clone()));
        }
        if seed.len() != d0 || Mat::span_basis(seed, dim).len() != d0 {
            return Err(WakiError::InvalidGrading("seed vectors do not form a basis of g_0".into()));
        }
    } else {
        for (g, space) in group_spaces.iter().enumerate() {
            for (c, v) in dec.split(space) {
                zero.push((g, c, v));
            }
        }
    }
    let eta_d = Mat::from_rows(
        zero.iter().map(|(_, _, x)| zero.iter().map(|(_, _, y)| alg.pair(x, y)).collect()).collect(),
    );
    let eta_d_inv = eta_d.inverse()?;
    let dbasis: Vec<Elem> = zero.iter().map(|(_, _, v)| v.clone()).collect();
    let d_dual: Vec<Elem> = (0..d0).map(|k| combine(&dbasis, &eta_d_inv.col(k))).collect();

    let n_minus = minus.len();
    let mut basis = Vec::with_capacity(dim);
    let mut dual = Vec::with_capacity(dim);
    let mut grade = Vec::with_capacity(dim);
    let mut class = Vec::with_capacity(dim);
    for (g, c, v) in &minus {
        basis.push(v.clone());
        grade.push(*g);
        class.push(*c);
    }
    for (_, c, v) in &zero {
        basis.push(v.clone());
        grade.push(0);
        class.push(*c);
    }
    for (g, c, v) in &plus {
        basis.push(v.clone());
        grade.push(*g);
        class.push(*c);
    }
    for (_, _, u) in &plus {
        dual.push(u.clone());
    }
    dual.extend(d_dual);
    for (_, _, l) in &minus {
        dual.push(l.clone());
    }
    let to_joint = Mat::from_cols(&basis).inverse()?;
    let mut structure: Structure = vec![vec![Vec::new(); dim]; dim];
    let mut eta = Mat::zeros(dim, dim);
    for a in 0..dim {
        for b in 0..dim {
            let br = to_joint.mul_vec(&alg.bracket(&basis[a], &basis[b]));
            structure[a][b] = br.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
            eta[(a, b)] = alg.pair(&basis[a], &basis[b]);
        }
    }
    let eta_inv = eta.inverse()?;
    Ok(GradedTwistData {
        algebra: alg.clone(),
        grading: h.to_vec(),
        tau: tau.clone(),
        n,
        n_minus,
        n_zero: d0,
        basis,
        dual,
        grade,
        class,
        structure,
        eta,
        eta_inv,
        groups,
        d_group: zero.iter().map(|(g, _, _)| *g).collect(),
        to_joint,
    })
}

/// Dimension of the commutant of `ad` restricted to an ideal, which counts its simple factors.
fn commutant_dim(alg: &LieAlgebraData, ideal: &[Elem]) -> Result<usize> {
    let g = ideal.len();
    let co = Coords::new(ideal)?;
    let ads: Vec<Mat> = ideal
        .iter()
        .map(|x| Mat::from_cols(&ideal.iter().map(|y| co.of(&alg.bracket(x, y))).collect::<Vec<_>>()))
        .collect();
    // unknown X (g x g, row-major); equations (X R - R X)_{ij} = 0
    let mut eqs = Mat::zeros(g * g * g, g * g);
    let mut row = 0;
    for r in &ads {
        for i in 0..g {
            for j in 0..g {
                for k in 0..g {
                    let v = &r[(k, j)];
                    if !v.is_zero() {
                        eqs[(row, i * g + k)] += v;
                    }
                    let w = &r[(i, k)];
                    if !w.is_zero() {
                        eqs[(row, k * g + j)] -= w;
                    }
                }
                row += 1;
            }
        }
    }
    Ok(g * g - eqs.rank())
}

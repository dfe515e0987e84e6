use num_traits::{One, Zero};

use super::field::{Atom, FieldExpr, Gen};
use super::wick::{BracketSource, LambdaPoly};
use crate::error::{Result, WakiError};
use crate::exactnum::{root_of_unity, CycNum, Mat, Monomial, QPoly, Q};
use crate::liealg::{Elem, GradedTwistData, LevelShifts};
use crate::twistor::SplitConvention;
use crate::wakipoly::WakiPolys;

/// Deliberate corruption of one polynomial entry, used to check that the
/// verifier localises errors.
#[derive(Clone, Debug, PartialEq)]
pub enum Mutation {
    /// Adds `delta * mono` to `Theta_a` (twisted currents only); `None` means
    /// the constant term.
    Theta { a: usize, mono: Option<Monomial>, delta: CycNum },
    /// Adds `delta * mono` to `Lambda_{alpha,b}`; `None` means the constant term.
    Lambda { alpha: usize, b: usize, mono: Option<Monomial>, delta: CycNum },
}

/// A Wakimoto realization at fixed level.
#[derive(Clone, Debug)]
pub struct Realization {
    pub graded: GradedTwistData,
    pub shifts: LevelShifts,
    pub polys: WakiPolys,
    /// `kappa_kl = K_k eta_{0,kl}`, the level form of the `j` currents.
    pub j_level: Mat,
    pub mutation: Option<Mutation>,
}

impl Realization {
    pub fn new(graded: GradedTwistData, level: &Q) -> Result<Self> {
        let shifts = graded.level_shifts(level)?;
        let polys = WakiPolys::build(&graded)?;
        let nz = graded.n_zero;
        let mut j_level = Mat::zeros(nz, nz);
        for k in 0..nz {
            let lk = CycNum::from_q(shifts.group_levels[graded.d_group[k]].clone());
            for l in 0..nz {
                let e = &graded.eta[(graded.d_index(k), graded.d_index(l))];
                if !e.is_zero() {
                    j_level[(k, l)] = e * &lk;
                }
            }
        }
        Ok(Realization { graded, shifts, polys, j_level, mutation: None })
    }

    pub fn with_mutation(mut self, m: Mutation) -> Self {
        if let Mutation::Lambda { alpha, b, mono, delta } = &m {
            let nv = self.polys.nvars;
            let e = mono.clone().unwrap_or_else(|| vec![0; nv]);
            self.polys.lambda[*alpha][*b].add_term(e, delta.clone());
        }
        self.mutation = Some(m);
        self
    }

    pub fn level(&self) -> &Q {
        &self.shifts.level
    }

    pub fn dim(&self) -> usize {
        self.graded.dim()
    }

    pub fn n_alpha(&self) -> usize {
        self.graded.n_minus
    }

    pub fn n_j(&self) -> usize {
        self.graded.n_zero
    }

    /// `y = K + |psi|^2 h / 2`.
    pub fn y(&self) -> &Q {
        &self.shifts.k00
    }

    fn k(&self) -> CycNum {
        CycNum::from_q(self.shifts.level.clone())
    }

    /// Structure constant `<[D_k, D_l], D^m>`.
    pub fn j_structure(&self, k: usize, l: usize) -> Vec<(usize, CycNum)> {
        let g = &self.graded;
        g.structure[g.d_index(k)][g.d_index(l)]
            .iter()
            .map(|(c, f)| (*c - g.n_minus, f.clone()))
            .collect()
    }

    fn build_current(&self, a: usize, twisted: bool, split: SplitConvention) -> Result<FieldExpr> {
        let g = &self.graded;
        let w = &self.polys;
        let mut e = FieldExpr::zero(twisted);
        for beta in 0..g.n_minus {
            let poly = &w.p_coeff[beta][a];
            if poly.is_zero() {
                continue;
            }
            let r = if twisted { split.representative(g.p_class(beta), g.n) } else { 0 };
            let x = FieldExpr::from_poly(poly, twisted);
            e = e.sub(&FieldExpr::normal_product(Atom::new(Gen::P(beta as u16)), &x, r as i32)?);
        }
        let k = self.k();
        for alpha in 0..g.n_minus {
            let (pl, lam) = w.dq_coeff(g, alpha, a);
            let coeff = pl.scale(&k).add(&lam);
            if coeff.is_zero() {
                continue;
            }
            let dq = FieldExpr::atom(Atom::d(Gen::Q(alpha as u16), 1), twisted);
            e = e.add(&FieldExpr::from_poly(&coeff, twisted).product(&dq)?);
        }
        for kk in 0..g.n_zero {
            let d = w.d(g, kk, a);
            if d.is_zero() {
                continue;
            }
            let j = FieldExpr::gen(Gen::J(kk as u16), twisted);
            e = e.add(&FieldExpr::from_poly(d, twisted).product(&j)?);
        }
        Ok(e)
    }

    /// The free-field current `J_a` (untwisted).
    pub fn current(&self, a: usize) -> Result<FieldExpr> {
        self.build_current(a, false, SplitConvention::Standard)
    }

    pub fn currents(&self) -> Result<Vec<FieldExpr>> {
        (0..self.dim()).map(|a| self.current(a)).collect()
    }

    /// `Theta_a`, including a mutation if one is active.
    pub fn theta(&self, split: SplitConvention) -> Vec<QPoly> {
        let mut t = self.polys.theta(&self.graded, split);
        if let Some(Mutation::Theta { a, mono, delta }) = &self.mutation {
            t[*a] = t[*a].add(&self.mutation_poly(mono, delta));
        }
        t
    }

    pub(crate) fn mutation_poly(&self, mono: &Option<Monomial>, delta: &CycNum) -> QPoly {
        let nv = self.polys.nvars;
        QPoly::from_terms(nv, [(mono.clone().unwrap_or_else(|| vec![0; nv]), delta.clone())])
    }

    /// Lowest q-monomial (degree at most 3) whose twist class is that of `T_a`,
    /// so that adding it to `Theta_a` keeps the twisted current well formed.
    pub fn class_monomial(&self, a: usize) -> Option<Monomial> {
        let g = &self.graded;
        let nv = self.polys.nvars;
        let target = g.class[a] % g.n;
        let mut layer: Vec<Monomial> = vec![vec![0; nv]];
        for _ in 0..=3 {
            let mut hit: Vec<&Monomial> = layer
                .iter()
                .filter(|e| e.iter().enumerate().map(|(i, &k)| g.q_class(i) * k as u32).sum::<u32>() % g.n == target)
                .collect();
            hit.sort();
            if let Some(e) = hit.first() {
                return Some((*e).clone());
            }
            let mut next = std::collections::BTreeSet::new();
            for e in &layer {
                for i in 0..nv {
                    let mut f = e.clone();
                    f[i] += 1;
                    next.insert(f);
                }
            }
            layer = next.into_iter().collect();
        }
        None
    }

    /// The twisted current from the closed form: twisted generators plus `z^{-1} Theta_a`.
    pub fn twisted_current(&self, a: usize, split: SplitConvention) -> Result<FieldExpr> {
        let e = self.build_current(a, true, split)?;
        let theta = &self.theta(split)[a];
        Ok(e.add(&FieldExpr::from_poly(theta, true).z_shift(1)))
    }

    pub fn twisted_currents(&self, split: SplitConvention) -> Result<Vec<FieldExpr>> {
        (0..self.dim()).map(|a| self.twisted_current(a, split)).collect()
    }

    /// `sum_a <T^a, X> J_a` for an ambient element `X`.
    pub fn combine_currents(&self, x: &[CycNum], currents: &[FieldExpr]) -> FieldExpr {
        let g = &self.graded;
        let mut e = FieldExpr::zero(currents.first().is_some_and(|c| c.twisted));
        for (a, cur) in currents.iter().enumerate() {
            let c = g.algebra.pair(&g.dual[a], x);
            if !c.is_zero() {
                e = e.add(&cur.scale(&c));
            }
        }
        e
    }

    /// `j_X = sum_k <D^k, X> j_k` for `X` in `g_0`.
    pub fn jbar_for(&self, x: &[CycNum], twisted: bool) -> FieldExpr {
        let g = &self.graded;
        let mut e = FieldExpr::zero(twisted);
        for k in 0..g.n_zero {
            let c = g.zero_component(x, k);
            if !c.is_zero() {
                e = e.add(&FieldExpr::gen(Gen::J(k as u16), twisted).scale(&c));
            }
        }
        e
    }

    /// `Q = 1/2 [U^alpha, L_alpha]`.
    pub fn q_element(&self) -> Elem {
        self.graded.q_element()
    }

    fn inv_2y(&self) -> CycNum {
        CycNum::from_q(Q::one() / (Q::from_integer(2.into()) * self.y()))
    }

    fn eta0_inv(&self) -> Result<Mat> {
        let g = &self.graded;
        let nz = g.n_zero;
        let mut eta0 = Mat::zeros(nz, nz);
        for k in 0..nz {
            for l in 0..nz {
                eta0[(k, l)] = g.eta[(g.d_index(k), g.d_index(l))].clone();
            }
        }
        eta0.inverse()
    }

    /// Checks that `Q` lies in the centre of `g_0`.
    pub fn check_q_central(&self) -> bool {
        let g = &self.graded;
        let qe = self.q_element();
        (0..g.n_zero).all(|k| g.algebra.bracket(&qe, &g.basis[g.d_index(k)]).iter().all(Zero::is_zero))
    }

    /// Free-field Sugawara field
    /// `-:p_alpha dq^alpha: + 1/(2y) eta_0^{kl} :j_k j_l: + 1/y d j_Q`.
    pub fn sugawara_free_field(&self) -> Result<FieldExpr> {
        let g = &self.graded;
        let mut e = FieldExpr::zero(false);
        for alpha in 0..g.n_minus {
            let dq = FieldExpr::atom(Atom::d(Gen::Q(alpha as u16), 1), false);
            e = e.sub(&FieldExpr::normal_product(Atom::new(Gen::P(alpha as u16)), &dq, 0)?);
        }
        let inv = self.eta0_inv()?;
        let c = self.inv_2y();
        for k in 0..g.n_zero {
            for l in 0..g.n_zero {
                if inv[(k, l)].is_zero() {
                    continue;
                }
                let jl = FieldExpr::gen(Gen::J(l as u16), false);
                let p = FieldExpr::normal_product(Atom::new(Gen::J(k as u16)), &jl, 0)?;
                e = e.add(&p.scale(&(&inv[(k, l)] * &c)));
            }
        }
        let jq = self.jbar_for(&self.q_element(), false);
        e = e.add(&jq.derivative()?.scale(&(&c * &CycNum::from_int(2))));
        Ok(e)
    }

    /// `S = 1/(2y) eta^{ab} :J_a J_b:` in terms of abstract currents.
    pub fn sugawara_currents(&self) -> Result<FieldExpr> {
        let g = &self.graded;
        let c = self.inv_2y();
        let mut e = FieldExpr::zero(false);
        for a in 0..g.dim() {
            for b in 0..g.dim() {
                let ei = &g.eta_inv[(a, b)];
                if ei.is_zero() {
                    continue;
                }
                let jb = FieldExpr::gen(Gen::Cur(b as u16), false);
                let p = FieldExpr::normal_product(Atom::new(Gen::Cur(a as u16)), &jb, 0)?;
                e = e.add(&p.scale(&(ei * &c)));
            }
        }
        Ok(e)
    }

    /// Twist class of a generator.
    pub fn gen_class(&self, gen: Gen) -> u32 {
        let g = &self.graded;
        match gen {
            Gen::Q(a) => g.q_class(a as usize),
            Gen::P(a) => g.p_class(a as usize),
            Gen::J(k) => g.d_class(k as usize),
            Gen::Cur(a) => g.class[a as usize],
        }
    }

    /// Equivariance of the currents: every term of `J_a` has class `n_a`.
    /// Returns the labels of failing currents.
    pub fn check_equivariance(&self) -> Result<Vec<usize>> {
        let g = &self.graded;
        let mut bad = Vec::new();
        for a in 0..g.dim() {
            let cur = self.current(a)?;
            let ok = cur.terms.keys().all(|t| {
                let c: u32 = t.word.atoms().map(|at| self.gen_class(at.gen)).sum();
                c % g.n == g.class[a]
            });
            // compare tau_W(J_a) with omega_a J_a on the coefficients
            let phase = root_of_unity(g.class[a] as i64, g.n);
            let mut moved = FieldExpr::zero(false);
            for (t, c) in &cur.terms {
                let k: u32 = t.word.atoms().map(|at| self.gen_class(at.gen)).sum();
                let mut piece = FieldExpr::zero(false);
                piece.add_term(t.clone(), c * &root_of_unity(k as i64, g.n));
                moved = moved.add(&piece);
            }
            if !ok || moved != cur.scale(&phase) {
                bad.push(a);
            }
        }
        Ok(bad)
    }

    /// Matrix `M` with `j'_mu = sum_k M_{mu k} j_k` for the currents attached to
    /// another basis `B'` of `g_0` (`j = j'_mu B'^mu`), and its inverse.
    pub fn jbar_basis_change(&self, other: &[Elem]) -> Result<(Mat, Mat)> {
        let g = &self.graded;
        let nz = g.n_zero;
        if other.len() != nz {
            return Err(WakiError::InvalidGrading("basis of g_0 has the wrong size".into()));
        }
        // j(X) = sum_k <D^k, X> j_k, so j'_mu = j(B'_mu)
        let m = Mat::from_rows(
            other.iter().map(|b| (0..nz).map(|k| g.zero_component(b, k)).collect()).collect(),
        );
        let inv = m.inverse()?;
        Ok((m, inv))
    }
}

impl BracketSource for Realization {
    fn gen_bracket(&self, a: Gen, b: Gen) -> LambdaPoly {
        match (a, b) {
            (Gen::Q(x), Gen::P(y)) if x == y => vec![FieldExpr::constant(CycNum::one(), false)],
            (Gen::P(x), Gen::Q(y)) if x == y => vec![FieldExpr::constant(-CycNum::one(), false)],
            (Gen::J(k), Gen::J(l)) => {
                let mut c0 = FieldExpr::zero(false);
                for (m, f) in self.j_structure(k as usize, l as usize) {
                    c0 = c0.add(&FieldExpr::gen(Gen::J(m as u16), false).scale(&f));
                }
                let lv = &self.j_level[(k as usize, l as usize)];
                if lv.is_zero() {
                    vec![c0]
                } else {
                    vec![c0, FieldExpr::constant(lv.clone(), false)]
                }
            }
            (Gen::Cur(a), Gen::Cur(b)) => {
                let g = &self.graded;
                let mut c0 = FieldExpr::zero(false);
                for (c, f) in &g.structure[a as usize][b as usize] {
                    c0 = c0.add(&FieldExpr::gen(Gen::Cur(*c as u16), false).scale(f));
                }
                let e = &g.eta[(a as usize, b as usize)];
                if e.is_zero() {
                    vec![c0]
                } else {
                    vec![c0, FieldExpr::constant(e * &self.k(), false)]
                }
            }
            _ => Vec::new(),
        }
    }
}

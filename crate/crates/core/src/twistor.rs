//! Twisted fields: the class bookkeeping and the correction that turns a
//! normal product `:phi X:` of the untwisted theory into the corresponding
//! twisted field,
//! `:phi X:  ->  :phi~ X~: - sum_s s! C(r/N, s+1) chi_s~ z^{-s-1}`,
//! where `chi_s` are the commutator fields of `phi` with `X` and `r` is the
//! chosen representative of the class of `phi`.

use num_traits::Zero;

use crate::currents::{commutator_fields, Atom, FieldExpr, Gen, Realization, Term, Word};
use crate::error::{Result, WakiError};
use crate::exactnum::{binomial, q, CycNum, Mat, Q};

/// Which integer represents a twist class `k` in the twisted normal ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SplitConvention {
    /// `r = k` in `{0, ..., N-1}`.
    #[default]
    Standard,
    /// `r = k - N` for `k != 0`, i.e. `r` in `{1-N, ..., 0}`.
    Shifted,
}

impl SplitConvention {
    pub fn representative(self, class: u32, n: u32) -> i64 {
        match self {
            SplitConvention::Standard => class as i64,
            SplitConvention::Shifted if class != 0 => class as i64 - n as i64,
            SplitConvention::Shifted => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SplitConvention::Standard => "standard",
            SplitConvention::Shifted => "shifted",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwistClass {
    pub k: u32,
    pub n: u32,
}

impl TwistClass {
    /// Mode support `k/N + Z`, rendered as text.
    pub fn support(&self) -> String {
        if self.k == 0 {
            "Z".into()
        } else {
            format!("{}/{} + Z", self.k, self.n)
        }
    }
}

/// Class of a homogeneous expression; errors when terms have different classes.
pub fn twist_class_of(r: &Realization, e: &FieldExpr) -> Result<TwistClass> {
    let n = r.graded.n;
    let mut class = None;
    for t in e.terms.keys() {
        let k = t.word.atoms().map(|a| r.gen_class(a.gen)).sum::<u32>() % n;
        match class {
            None => class = Some(k),
            Some(c) if c != k => {
                return Err(WakiError::Field("expression mixes twist classes".into()));
            }
            _ => {}
        }
    }
    Ok(TwistClass { k: class.unwrap_or(0), n })
}

/// Twisted image of `:phi X:`, with `X` free of heads.
pub fn twisted_normal_order_correction(
    r: &Realization,
    phi: Atom,
    x: &FieldExpr,
    split: SplitConvention,
) -> Result<FieldExpr> {
    let n = r.graded.n;
    let rep = split.representative(r.gen_class(phi.gen), n);
    let xt = twist(r, x, split)?;
    let mut out = FieldExpr::normal_product(phi, &xt, rep as i32)?;
    let chi = commutator_fields(r, phi, x)?;
    let ratio = q(rep, n as i64);
    let mut fact = Q::from_integer(1.into());
    for (s, c) in chi.iter().enumerate() {
        if s > 0 {
            fact *= Q::from_integer((s as i64).into());
        }
        if c.is_zero() {
            continue;
        }
        let coeff = -(&fact * binomial(&ratio, s as u32 + 1));
        if coeff.is_zero() {
            continue;
        }
        let ct = twist(r, c, split)?;
        out = out.add(&ct.z_shift(s as u32 + 1).scale(&CycNum::from_q(coeff)));
    }
    Ok(out)
}

/// Twisted image of an untwisted expression built from the generators.
pub fn twist(r: &Realization, e: &FieldExpr, split: SplitConvention) -> Result<FieldExpr> {
    let mut out = FieldExpr::zero(true);
    for (t, c) in &e.terms {
        match t.word.head {
            None => {
                let mut piece = FieldExpr::zero(true);
                piece.add_term(Term { zpow: t.zpow, word: t.word.clone() }, c.clone());
                out = out.add(&piece);
            }
            Some(phi) => {
                let mut x = FieldExpr::zero(false);
                x.add_term(
                    Term { zpow: 0, word: Word { head: None, split: 0, rest: t.word.rest.clone() } },
                    CycNum::from_int(1),
                );
                let tw = twisted_normal_order_correction(r, phi, &x, split)?;
                out = out.add(&tw.z_shift(t.zpow).scale(c));
            }
        }
    }
    Ok(out)
}

impl Realization {
    /// Twisted current obtained by applying the generic correction to `J_a`.
    pub fn twisted_current_generic(&self, a: usize, split: SplitConvention) -> Result<FieldExpr> {
        let t = twist(self, &self.current(a)?, split)?;
        match &self.mutation {
            Some(crate::currents::Mutation::Theta { a: ma, mono, delta }) if *ma == a => {
                Ok(t.add(&FieldExpr::from_poly(&self.mutation_poly(mono, delta), true).z_shift(1)))
            }
            _ => Ok(t),
        }
    }

    /// Twisted Sugawara field over abstract currents:
    /// `1/(2y) eta^{ab} :J_a J_b: - z^{-1}/(2yN) eta^{ab} n_a f_ab^c J_c + z^{-2} K/(4yN^2) n_a n^a`.
    pub fn twisted_sugawara_currents(&self) -> Result<FieldExpr> {
        let g = &self.graded;
        let n = g.n as i64;
        let y = CycNum::from_q(self.y().clone());
        let two_y = &y * &CycNum::from_int(2);
        let mut e = FieldExpr::zero(true);
        let mut cst = CycNum::zero();
        for a in 0..g.dim() {
            for b in 0..g.dim() {
                let ei = &g.eta_inv[(a, b)];
                if ei.is_zero() {
                    continue;
                }
                let jb = FieldExpr::gen(Gen::Cur(b as u16), true);
                let rep = SplitConvention::Standard.representative(g.class[a], g.n);
                let p = FieldExpr::normal_product(Atom::new(Gen::Cur(a as u16)), &jb, rep as i32)?;
                e = e.add(&p.scale(&(ei / &two_y)));
                let na = CycNum::from_int(g.class[a] as i64);
                for (c, f) in &g.structure[a][b] {
                    let coeff = -&(&(ei * &na) * f) / &(&two_y * &CycNum::from_int(n));
                    e = e.add(&FieldExpr::gen(Gen::Cur(*c as u16), true).z_shift(1).scale(&coeff));
                }
            }
            let nup = g.dual_class(a) as i64;
            cst += &CycNum::from_int(g.class[a] as i64 * nup);
        }
        let k = CycNum::from_q(self.level().clone());
        let c2 = &(&k * &cst) / &(&(&y * &CycNum::from_int(4)) * &CycNum::from_int(n * n));
        Ok(e.add(&FieldExpr::constant(c2, true).z_shift(2)))
    }

    /// Twisted free-field Sugawara field in closed form.
    pub fn twisted_sugawara_free_field(&self) -> Result<FieldExpr> {
        let g = &self.graded;
        let n = g.n as i64;
        let y = CycNum::from_q(self.y().clone());
        let two_y = &y * &CycNum::from_int(2);
        let mut e = FieldExpr::zero(true);
        let mut cst = CycNum::zero();
        for alpha in 0..g.n_minus {
            let dq = FieldExpr::atom(Atom::d(Gen::Q(alpha as u16), 1), true);
            let rep = SplitConvention::Standard.representative(g.p_class(alpha), g.n);
            e = e.sub(&FieldExpr::normal_product(Atom::new(Gen::P(alpha as u16)), &dq, rep as i32)?);
            cst += &CycNum::from_int(g.p_class(alpha) as i64 * g.q_class(alpha) as i64);
        }
        let nz = g.n_zero;
        let mut eta0 = Mat::zeros(nz, nz);
        for k in 0..nz {
            for l in 0..nz {
                eta0[(k, l)] = g.eta[(g.d_index(k), g.d_index(l))].clone();
            }
        }
        let inv = eta0.inverse()?;
        let mut jcst = CycNum::zero();
        for k in 0..nz {
            let nk = g.d_class(k) as i64;
            for l in 0..nz {
                if inv[(k, l)].is_zero() {
                    continue;
                }
                let jl = FieldExpr::gen(Gen::J(l as u16), true);
                let p = FieldExpr::normal_product(Atom::new(Gen::J(k as u16)), &jl, nk as i32)?;
                e = e.add(&p.scale(&(&inv[(k, l)] / &two_y)));
                for (m, f) in self.j_structure(k, l) {
                    let coeff = -&(&(&inv[(k, l)] * &CycNum::from_int(nk)) * &f) / &(&two_y * &CycNum::from_int(n));
                    e = e.add(&FieldExpr::gen(Gen::J(m as u16), true).z_shift(1).scale(&coeff));
                }
            }
            let nup = g.dual_class(g.d_index(k)) as i64;
            let kk = CycNum::from_q(self.shifts.group_levels[g.d_group[k]].clone());
            jcst += &(&kk * &CycNum::from_int(nk * nup));
        }
        let jq = self.jbar_for(&self.q_element(), false).derivative()?.with_twisted(true);
        e = e.add(&jq.scale(&(&CycNum::from_int(1) / &y)));
        let total = &(&cst + &(&jcst / &two_y)) / &CycNum::from_int(2 * n * n);
        Ok(e.add(&FieldExpr::constant(total, true).z_shift(2)))
    }
}

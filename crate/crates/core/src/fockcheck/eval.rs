//! Exact action of field modes on the induced module.
//!
//! Generator modes act by commuting annihilators to the right. A normal product
//! `:phi X:` with head split `r` acts as
//! `(:phi X:)[n] = sum_{m < r/N} phi[m] X[n-m-1] + sum_{m >= r/N} X[n-m-1] phi[m]`,
//! and both sums are finite on a given vector because every mode shifts the
//! degree `sum(-m)` of a monomial by a bounded amount.

use std::collections::HashMap;
use std::rc::Rc;

use num_traits::{One, Zero};

use super::module::{FockState, ModeIndex, ModuleSpec, Mono, Op};
use crate::currents::{Atom, FieldExpr, Gen, Word};
use crate::error::{Result, WakiError};
use crate::exactnum::CycNum;

type WordKey = (Vec<Atom>, i32, i32, Mono);

/// Memo caches are dropped once they hold this many terms in total.
const CACHE_TERMS: usize = 1 << 21;

pub struct Evaluator<'a> {
    spec: &'a ModuleSpec,
    currents: &'a [FieldExpr],
    cur_sigma: Vec<i32>,
    ops: HashMap<(Op, Mono), Rc<FockState>>,
    words: HashMap<WordKey, Rc<FockState>>,
    cached: usize,
}

impl<'a> Evaluator<'a> {
    /// `currents` gives the meaning of `Cur` atoms; it may be empty when unused.
    pub fn new(spec: &'a ModuleSpec, currents: &'a [FieldExpr]) -> Self {
        let mut ev = Evaluator { spec, currents, cur_sigma: Vec::new(), ops: HashMap::new(), words: HashMap::new(), cached: 0 };
        ev.cur_sigma = currents.iter().map(|e| ev.sigma(e)).collect();
        ev
    }

    pub fn spec(&self) -> &ModuleSpec {
        self.spec
    }

    /// Upper bound `s` such that `E[n]` raises the degree by at most `s - n`.
    pub fn sigma(&self, e: &FieldExpr) -> i32 {
        let den = self.spec.den();
        e.terms
            .keys()
            .map(|t| self.word_sigma(&t.word) + t.zpow as i32 * den)
            .max()
            .unwrap_or(i32::MIN / 4)
    }

    fn atom_sigma(&self, a: &Atom) -> i32 {
        let base = match a.gen {
            Gen::Cur(i) => self.cur_sigma.get(i as usize).copied().unwrap_or(0),
            _ => 0,
        };
        base + a.deriv as i32 * self.spec.den()
    }

    fn word_sigma(&self, w: &Word) -> i32 {
        let k = w.len() as i32;
        w.atoms().map(|a| self.atom_sigma(a)).sum::<i32>() + (k - 1) * self.spec.den()
    }

    fn atoms_sigma(&self, atoms: &[Atom]) -> i32 {
        let k = atoms.len() as i32;
        atoms.iter().map(|a| self.atom_sigma(a)).sum::<i32>() + (k - 1) * self.spec.den()
    }

    /// Generator mode applied to a PBW monomial.
    pub fn apply_op(&mut self, op: Op, mono: &Mono) -> Rc<FockState> {
        if let Some(r) = self.ops.get(&(op, mono.clone())) {
            return r.clone();
        }
        let out = self.apply_op_uncached(op, mono);
        let rc = Rc::new(out);
        self.note_cached(rc.terms.len());
        self.ops.insert((op, mono.clone()), rc.clone());
        rc
    }

    fn note_cached(&mut self, terms: usize) {
        self.cached += terms + 1;
        if self.cached > CACHE_TERMS {
            self.ops.clear();
            self.words.clear();
            self.cached = terms + 1;
        }
    }

    fn apply_op_uncached(&mut self, op: Op, mono: &Mono) -> FockState {
        let creator = op.m < 0;
        if mono.is_empty() {
            return if creator { FockState::basis(vec![op]) } else { FockState::zero() };
        }
        if creator && op <= mono[0] {
            let mut m = Vec::with_capacity(mono.len() + 1);
            m.push(op);
            m.extend_from_slice(mono);
            return FockState::basis(m);
        }
        // op c1 rest = c1 (op rest) + [op, c1] rest
        let c1 = mono[0];
        let rest: Mono = mono[1..].to_vec();
        let inner = self.apply_op(op, &rest);
        let mut out = FockState::zero();
        for (m, c) in inner.terms.iter() {
            let r = self.apply_op(c1, m);
            out.add_scaled(&r, c);
        }
        let (ops, scalar) = self.spec.commutator(op, c1);
        for (o, c) in ops {
            let r = self.apply_op(o, &rest);
            out.add_scaled(&r, &c);
        }
        if !scalar.is_zero() {
            out.add_mono(rest, scalar);
        }
        out
    }

    pub fn apply_op_state(&mut self, op: Op, s: &FockState) -> FockState {
        let mut out = FockState::zero();
        for (m, c) in &s.terms {
            let r = self.apply_op(op, m);
            out.add_scaled(&r, c);
        }
        out
    }

    /// `E[n] v` with `n` a mode index; errors if `n` is outside the support of `E`.
    pub fn mode_action(&mut self, e: &FieldExpr, n: &ModeIndex, v: &FockState) -> Result<FockState> {
        let num = self.spec.to_num(n).ok_or_else(|| WakiError::ModeSupport {
            mode: n.to_string(),
            support: format!("(1/{}) Z", self.spec.den()),
        })?;
        if let Some(class) = self.expr_class(e) {
            if !self.spec.in_lattice(class, num) {
                return Err(WakiError::ModeSupport {
                    mode: n.to_string(),
                    support: if class == 0 { "Z".into() } else { format!("{}/{} + Z", class, self.spec.n) },
                });
            }
        }
        Ok(self.mode(e, num, v))
    }

    fn expr_class(&self, e: &FieldExpr) -> Option<u32> {
        let t = e.terms.keys().next()?;
        let n = self.spec.n;
        Some(t.word.atoms().map(|a| self.spec.class_of(a.gen)).sum::<u32>() % n)
    }

    /// `E[num / den] v`.
    pub fn mode(&mut self, e: &FieldExpr, num: i32, v: &FockState) -> FockState {
        let mut out = FockState::zero();
        for (m, c) in &v.terms {
            let r = self.mode_mono(e, num, m);
            out.add_scaled(&r, c);
        }
        out
    }

    fn mode_mono(&mut self, e: &FieldExpr, num: i32, mono: &Mono) -> FockState {
        let den = self.spec.den();
        let mut out = FockState::zero();
        for (t, c) in &e.terms {
            let atoms: Vec<Atom> = t.word.atoms().copied().collect();
            let split = if t.word.head.is_some() { t.word.split } else { 0 };
            let r = self.word_mono(&atoms, split, num - t.zpow as i32 * den, mono);
            out.add_scaled(&r, c);
        }
        out
    }

    fn word_mono(&mut self, atoms: &[Atom], split: i32, n: i32, mono: &Mono) -> Rc<FockState> {
        let den = self.spec.den();
        match atoms.len() {
            0 => {
                return Rc::new(if n == -den { FockState::basis(mono.clone()) } else { FockState::zero() });
            }
            1 => return Rc::new(self.atom_mono(atoms[0], n, mono)),
            _ => {}
        }
        let d = self.spec.degree(mono);
        if d - n + self.atoms_sigma(atoms) < 0 {
            return Rc::new(FockState::zero());
        }
        let key = (atoms.to_vec(), split, n, mono.clone());
        if let Some(r) = self.words.get(&key) {
            return r.clone();
        }
        let phi = atoms[0];
        let x = &atoms[1..];
        let class = self.spec.class_of(phi.gen) as i32;
        let bound = if self.spec.twisted { split } else { 0 };
        let sx = self.atoms_sigma(x);
        let sphi = self.atom_sigma(&phi);
        let step = den;
        let first_in_lattice = |lo: i32| lo + (class - lo).rem_euclid(step);
        let mut out = FockState::zero();
        // m < bound: phi[m] X[n-m-1] v
        let lo = n - den - d - sx;
        let mut m = first_in_lattice(lo);
        while m < bound {
            let xv = self.word_mono(x, 0, n - m - den, mono);
            if !xv.is_zero() {
                let r = self.atom_state(phi, m, &xv);
                out.add_scaled(&r, &CycNum::one());
            }
            m += step;
        }
        // m >= bound: X[n-m-1] phi[m] v
        let hi = d + sphi;
        let mut m = first_in_lattice(bound);
        while m <= hi {
            let pv = self.atom_mono(phi, m, mono);
            for (mm, c) in &pv.terms {
                let r = self.word_mono(x, 0, n - m - den, mm);
                out.add_scaled(&r, c);
            }
            m += step;
        }
        let rc = Rc::new(out);
        self.note_cached(rc.terms.len());
        self.words.insert(key, rc.clone());
        rc
    }

    fn atom_state(&mut self, a: Atom, n: i32, v: &FockState) -> FockState {
        let mut out = FockState::zero();
        for (m, c) in &v.terms {
            let r = self.atom_mono(a, n, m);
            out.add_scaled(&r, c);
        }
        out
    }

    /// `(d^k phi)[n] = (-n)(-n+1)...(-n+k-1) phi[n-k]`.
    fn atom_mono(&mut self, a: Atom, n: i32, mono: &Mono) -> FockState {
        let den = self.spec.den();
        let mut factor = CycNum::one();
        for i in 0..a.deriv as i32 {
            factor = &factor * &CycNum::frac((-n + i * den) as i64, den as i64);
        }
        if factor.is_zero() {
            return FockState::zero();
        }
        let m = n - a.deriv as i32 * den;
        if !self.spec.in_lattice(self.spec.class_of(a.gen), m) {
            return FockState::zero();
        }
        let base = match a.gen {
            Gen::Cur(i) => {
                let e = self.currents[i as usize].clone();
                self.mode_mono(&e, m, mono)
            }
            g => (*self.apply_op(Op { gen: g, m }, mono)).clone(),
        };
        base.scale(&factor)
    }
}

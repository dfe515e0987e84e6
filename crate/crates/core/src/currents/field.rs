use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Result, WakiError};
use crate::exactnum::{CycNum, QPoly};

/// Generating fields: the `beta gamma` pairs `q^alpha`, `p_alpha`, the `g_0`
/// currents `j_k`, and abstract affine currents `J_a`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Gen {
    Q(u16),
    P(u16),
    J(u16),
    Cur(u16),
}

impl Gen {
    /// Whether all lambda-brackets between the two generators vanish
    /// (decided structurally, independent of the structure constants).
    pub fn commutes_with(self, other: Gen) -> bool {
        use Gen::*;
        match (self, other) {
            (Q(_), Q(_)) | (P(_), P(_)) => true,
            (Q(_), J(_)) | (J(_), Q(_)) | (P(_), J(_)) | (J(_), P(_)) => true,
            (P(a), Q(b)) | (Q(b), P(a)) => a != b,
            _ => false,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom {
    pub gen: Gen,
    pub deriv: u8,
}

impl Atom {
    pub fn new(gen: Gen) -> Self {
        Atom { gen, deriv: 0 }
    }

    pub fn d(gen: Gen, deriv: u8) -> Self {
        Atom { gen, deriv }
    }

    pub fn commutes_with(self, other: Atom) -> bool {
        self.gen.commutes_with(other.gen)
    }
}

/// Normally ordered monomial `:head :r_1 r_2 ...::` where the `r_i` pairwise
/// commute and `head` fails to commute with at least one of them.
///
/// For twisted fields `split` is the integer `r` such that the modes of `head`
/// at or above `r/N` count as annihilation modes in the normal ordering.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word {
    pub head: Option<Atom>,
    pub split: i32,
    pub rest: Vec<Atom>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.head.iter().chain(self.rest.iter())
    }

    pub fn len(&self) -> usize {
        self.rest.len() + usize::from(self.head.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn headless(mut rest: Vec<Atom>) -> Self {
        rest.sort();
        Word { head: None, split: 0, rest }
    }

    /// `:phi W:` for a word `W`.
    pub fn prepend(&self, phi: Atom, split: i32) -> Result<Word> {
        let commutes_all = self.atoms().all(|a| phi.commutes_with(*a));
        if commutes_all {
            let mut rest = self.rest.clone();
            rest.push(phi);
            rest.sort();
            return Ok(Word { head: self.head, split: self.split, rest });
        }
        if self.head.is_some() {
            return Err(WakiError::Field(format!(
                "nested normal product {phi:?} with non-commuting word {self:?}"
            )));
        }
        Ok(Word { head: Some(phi), split, rest: self.rest.clone() })
    }

    /// Product of two words whose atoms commute across the two factors.
    pub fn merge(&self, other: &Word) -> Result<Word> {
        if !self.atoms().all(|a| other.atoms().all(|b| a.commutes_with(*b))) {
            return Err(WakiError::Field("product of non-commuting words".into()));
        }
        if other.head.is_none() {
            let mut w = self.clone();
            for a in &other.rest {
                w = w.prepend(*a, 0)?;
            }
            return Ok(w);
        }
        if self.head.is_none() {
            return other.merge(self);
        }
        Err(WakiError::Field("product of two words with heads".into()))
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Term {
    /// Power `s` of the explicit factor `z^{-s}`.
    pub zpow: u32,
    pub word: Word,
}

/// Finite linear combination of `z^{-s}` times normally ordered words, in
/// canonical form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldExpr {
    pub twisted: bool,
    pub terms: BTreeMap<Term, CycNum>,
}

impl FieldExpr {
    pub fn zero(twisted: bool) -> Self {
        FieldExpr { twisted, terms: BTreeMap::new() }
    }

    pub fn constant(c: CycNum, twisted: bool) -> Self {
        let mut e = Self::zero(twisted);
        e.add_term(Term { zpow: 0, word: Word::identity() }, c);
        e
    }

    pub fn atom(a: Atom, twisted: bool) -> Self {
        let mut e = Self::zero(twisted);
        e.add_term(Term { zpow: 0, word: Word::headless(vec![a]) }, CycNum::one());
        e
    }

    pub fn gen(g: Gen, twisted: bool) -> Self {
        Self::atom(Atom::new(g), twisted)
    }

    /// A polynomial in the `q^alpha`.
    pub fn from_poly(p: &QPoly, twisted: bool) -> Self {
        let mut e = Self::zero(twisted);
        for (mono, c) in p.terms() {
            let mut rest = Vec::new();
            for (i, &k) in mono.iter().enumerate() {
                for _ in 0..k {
                    rest.push(Atom::new(Gen::Q(i as u16)));
                }
            }
            e.add_term(Term { zpow: 0, word: Word::headless(rest) }, c.clone());
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, t: Term, c: CycNum) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(t) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &FieldExpr) -> FieldExpr {
        let mut e = self.clone();
        e.twisted |= other.twisted;
        for (t, c) in &other.terms {
            e.add_term(t.clone(), c.clone());
        }
        e
    }

    pub fn sub(&self, other: &FieldExpr) -> FieldExpr {
        self.add(&other.scale(&-CycNum::one()))
    }

    pub fn scale(&self, s: &CycNum) -> FieldExpr {
        let mut e = Self::zero(self.twisted);
        for (t, c) in &self.terms {
            e.add_term(t.clone(), c * s);
        }
        e
    }

    pub fn neg(&self) -> FieldExpr {
        self.scale(&-CycNum::one())
    }

    pub fn with_twisted(&self, twisted: bool) -> FieldExpr {
        FieldExpr { twisted, terms: self.terms.clone() }
    }

    /// `z^{-s}` times the expression.
    pub fn z_shift(&self, s: u32) -> FieldExpr {
        let mut e = Self::zero(self.twisted);
        for (t, c) in &self.terms {
            e.add_term(Term { zpow: t.zpow + s, word: t.word.clone() }, c.clone());
        }
        e
    }

    /// `:phi X:` with the head split `split` (ignored when `phi` commutes through).
    pub fn normal_product(phi: Atom, x: &FieldExpr, split: i32) -> Result<FieldExpr> {
        let mut e = Self::zero(x.twisted);
        for (t, c) in &x.terms {
            let word = t.word.prepend(phi, split)?;
            e.add_term(Term { zpow: t.zpow, word }, c.clone());
        }
        Ok(e)
    }

    /// Product of expressions whose factors commute with each other.
    pub fn product(&self, other: &FieldExpr) -> Result<FieldExpr> {
        let mut e = Self::zero(self.twisted || other.twisted);
        for (t1, c1) in &self.terms {
            for (t2, c2) in &other.terms {
                let word = t1.word.merge(&t2.word)?;
                e.add_term(Term { zpow: t1.zpow + t2.zpow, word }, c1 * c2);
            }
        }
        Ok(e)
    }

    /// `d/dz`; for twisted expressions only words without a head are allowed.
    pub fn derivative(&self) -> Result<FieldExpr> {
        let mut e = Self::zero(self.twisted);
        for (t, c) in &self.terms {
            if t.zpow > 0 {
                e.add_term(
                    Term { zpow: t.zpow + 1, word: t.word.clone() },
                    c * &CycNum::from_int(-(t.zpow as i64)),
                );
            }
            if self.twisted && t.word.head.is_some() {
                return Err(WakiError::Field("derivative of a twisted normal product".into()));
            }
            if let Some(h) = t.word.head {
                let mut w = t.word.clone();
                w.head = Some(Atom::d(h.gen, h.deriv + 1));
                e.add_term(Term { zpow: t.zpow, word: w }, c.clone());
            }
            for i in 0..t.word.rest.len() {
                let mut w = t.word.clone();
                w.rest[i].deriv += 1;
                w.rest.sort();
                e.add_term(Term { zpow: t.zpow, word: w }, c.clone());
            }
        }
        Ok(e)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.terms.keys().flat_map(|t| t.word.atoms())
    }

    pub fn max_zpow(&self) -> u32 {
        self.terms.keys().map(|t| t.zpow).max().unwrap_or(0)
    }
}

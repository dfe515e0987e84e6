//! Lambda-brackets of a generator with normally ordered expressions, via the
//! non-commutative Wick formula
//! `[a_l :b c:] = :[a_l b] c: + :b [a_l c]: + int_0^l [[a_l b]_m c] dm`.

use num_traits::One;

use super::field::{Atom, FieldExpr, Gen, Term, Word};
use crate::error::Result;
use crate::exactnum::CycNum;

/// Polynomial in `lambda` with field coefficients; index `s` holds the coefficient of `lambda^s`.
pub type LambdaPoly = Vec<FieldExpr>;

/// Source of the basic lambda-brackets between generators.
pub trait BracketSource {
    /// `[a_lambda b]`; coefficients are linear combinations of generators and constants.
    fn gen_bracket(&self, a: Gen, b: Gen) -> LambdaPoly;
}

fn lp_add(a: &mut LambdaPoly, b: &LambdaPoly) {
    if a.len() < b.len() {
        a.resize(b.len(), FieldExpr::zero(false));
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x = x.add(y);
    }
}

fn trim(mut a: LambdaPoly) -> LambdaPoly {
    while a.last().is_some_and(FieldExpr::is_zero) {
        a.pop();
    }
    a
}

fn binom(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// `[a_lambda b]` for atoms, using `[d a_l b] = -l [a_l b]` and `[a_l d b] = (l + d)[a_l b]`.
pub fn atom_bracket(src: &dyn BracketSource, a: Atom, b: Atom) -> Result<LambdaPoly> {
    let base = src.gen_bracket(a.gen, b.gen);
    if base.iter().all(FieldExpr::is_zero) {
        return Ok(Vec::new());
    }
    // (lambda + d)^e
    let mut out: LambdaPoly = Vec::new();
    let e = b.deriv as u32;
    for (s, coeff) in base.iter().enumerate() {
        let mut dk = coeff.clone();
        for j in 0..=e {
            let pow = s + (e - j) as usize;
            let mut piece = vec![FieldExpr::zero(false); pow + 1];
            piece[pow] = dk.scale(&CycNum::from_int(binom(e, j)));
            lp_add(&mut out, &piece);
            if j < e {
                dk = dk.derivative()?;
            }
        }
    }
    // (-lambda)^d
    let d = a.deriv as usize;
    if d > 0 {
        let sign = CycNum::from_int(if d.is_multiple_of(2) { 1 } else { -1 });
        let mut shifted = vec![FieldExpr::zero(false); d];
        shifted.extend(out.into_iter().map(|x| x.scale(&sign)));
        out = shifted;
    }
    Ok(trim(out))
}

fn word_expr(word: Word) -> FieldExpr {
    let mut e = FieldExpr::zero(false);
    e.add_term(Term { zpow: 0, word }, CycNum::one());
    e
}

/// `:A X:` where `A` is a combination of single atoms and constants.
fn left_multiply(a: &FieldExpr, x: &FieldExpr) -> Result<FieldExpr> {
    let mut out = FieldExpr::zero(false);
    for (t, c) in &a.terms {
        let piece = match t.word.len() {
            0 => x.clone(),
            1 => FieldExpr::normal_product(*t.word.atoms().next().unwrap(), x, 0)?,
            _ => {
                return Err(crate::WakiError::Field("bracket coefficient is not linear".into()));
            }
        };
        out = out.add(&piece.z_shift(t.zpow).scale(c));
    }
    Ok(out)
}

/// `[a_lambda W]` for a single word.
pub fn bracket_word(src: &dyn BracketSource, a: Atom, word: &Word) -> Result<LambdaPoly> {
    let atoms: Vec<Atom> = word.atoms().copied().collect();
    match atoms.len() {
        0 => return Ok(Vec::new()),
        1 => return atom_bracket(src, a, atoms[0]),
        _ => {}
    }
    let first = atoms[0];
    let rest = Word { head: None, split: 0, rest: atoms[1..].to_vec() };
    let x = word_expr(rest.clone());
    let ab = atom_bracket(src, a, first)?;
    let ax = bracket_word(src, a, &rest)?;
    let mut out: LambdaPoly = Vec::new();
    for (j, coeff) in ab.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let mut piece = vec![FieldExpr::zero(false); j + 1];
        piece[j] = left_multiply(coeff, &x)?;
        lp_add(&mut out, &piece);
        // integral term: sum_i lambda^{j+i+1}/(i+1) [coeff_mu X]_i
        let inner = bracket_expr(src, coeff, &x)?;
        for (i, c) in inner.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let pow = j + i + 1;
            let mut piece = vec![FieldExpr::zero(false); pow + 1];
            piece[pow] = c.scale(&CycNum::frac(1, (i + 1) as i64));
            lp_add(&mut out, &piece);
        }
    }
    for (j, coeff) in ax.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let mut piece = vec![FieldExpr::zero(false); j + 1];
        piece[j] = FieldExpr::normal_product(first, coeff, 0)?;
        lp_add(&mut out, &piece);
    }
    Ok(trim(out))
}

/// `[A_lambda X]` for `A` a combination of single atoms and constants.
fn bracket_expr(src: &dyn BracketSource, a: &FieldExpr, x: &FieldExpr) -> Result<LambdaPoly> {
    let mut out: LambdaPoly = Vec::new();
    for (t, c) in &a.terms {
        if t.word.is_empty() {
            continue;
        }
        let atom = *t.word.atoms().next().unwrap();
        let r = bracket_atom(src, atom, x)?;
        lp_add(&mut out, &r.iter().map(|e| e.scale(c)).collect());
    }
    Ok(trim(out))
}

/// `[a_lambda E]` for an atom and an untwisted expression.
pub fn bracket_atom(src: &dyn BracketSource, a: Atom, e: &FieldExpr) -> Result<LambdaPoly> {
    let mut out: LambdaPoly = Vec::new();
    for (t, c) in &e.terms {
        let r = bracket_word(src, a, &t.word)?;
        lp_add(&mut out, &r.iter().map(|x| x.z_shift(t.zpow).scale(c)).collect());
    }
    Ok(trim(out))
}

/// The fields `chi_s` with `[phi(z), E(w)] = sum_s chi_s(w) d_w^s delta(z - w) / s!`,
/// so that `[phi[M], E[n]] = sum_s M (M-1) ... (M-s+1) chi_s[M+n-s]`.
pub fn commutator_fields(src: &dyn BracketSource, phi: Atom, e: &FieldExpr) -> Result<Vec<FieldExpr>> {
    bracket_atom(src, phi, &e.with_twisted(false))
}

/// True when every coefficient of a lambda-polynomial vanishes.
pub fn lp_is_zero(a: &LambdaPoly) -> bool {
    a.iter().all(FieldExpr::is_zero)
}

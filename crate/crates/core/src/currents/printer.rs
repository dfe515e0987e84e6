//! Grouped rendering of field expressions: a JSON-serialisable tree, plain
//! text and LaTeX.
//!
//! Terms sharing the `z`-power, the head and all atoms other than the bare
//! `q^alpha` are grouped, and the `q` dependence is printed as one polynomial
//! coefficient.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::field::{Atom, FieldExpr, Gen, Term, Word};
use crate::error::{Result, WakiError};
use crate::exactnum::{parse_q, q_to_string, CycNum, QPoly};

/// JSON form of a cyclotomic number: a rational string, or the power-basis
/// coefficients in `Q(zeta_order)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CycJson {
    Rational(String),
    Cyclotomic { order: u32, coeffs: Vec<String> },
}

impl CycJson {
    pub fn from_cyc(c: &CycNum) -> Self {
        match c.as_rational() {
            Some(r) => CycJson::Rational(q_to_string(r)),
            None => CycJson::Cyclotomic {
                order: c.order(),
                coeffs: c.coeffs().iter().map(q_to_string).collect(),
            },
        }
    }

    pub fn to_cyc(&self) -> Result<CycNum> {
        match self {
            CycJson::Rational(s) => Ok(CycNum::from_q(parse_q(s)?)),
            CycJson::Cyclotomic { order, coeffs } => {
                let qs = coeffs.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?;
                Ok(CycNum::from_power_coeffs(*order, qs))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyTermJson {
    pub coeff: CycJson,
    pub exponents: Vec<u16>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumTerm {
    pub coeff: CycJson,
    pub field: FieldTree,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node")]
pub enum FieldTree {
    Sum { terms: Vec<SumTerm> },
    ZPower { s: u32, child: Box<FieldTree> },
    NormalProduct {
        left: Box<FieldTree>,
        right: Box<FieldTree>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        split: Option<i32>,
    },
    Generator { kind: String, index: u16 },
    Derivative { order: u8, child: Box<FieldTree> },
    PolyCoeff { nvars: usize, terms: Vec<PolyTermJson> },
    Identity,
}

/// One printable group: `z^{-s} :head others P(q):`.
pub struct Group {
    pub zpow: u32,
    pub head: Option<Atom>,
    pub split: i32,
    pub others: Vec<Atom>,
    pub poly: QPoly,
}

/// Groups the terms of an expression; `nvars` is the number of `q` variables.
pub fn groups(e: &FieldExpr, nvars: usize) -> Vec<Group> {
    let mut map: BTreeMap<(u32, Option<Atom>, i32, Vec<Atom>), QPoly> = BTreeMap::new();
    for (t, c) in &e.terms {
        let mut exps = vec![0u16; nvars];
        let mut others = Vec::new();
        for a in &t.word.rest {
            match a.gen {
                Gen::Q(i) if a.deriv == 0 && (i as usize) < nvars => exps[i as usize] += 1,
                _ => others.push(*a),
            }
        }
        let key = (t.zpow, t.word.head, t.word.split, others);
        let p = map.entry(key).or_insert_with(|| QPoly::zero(nvars));
        p.add_term(exps, c.clone());
    }
    map.into_iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|((zpow, head, split, others), poly)| Group { zpow, head, split, others, poly })
        .collect()
}

fn gen_tree(a: Atom) -> FieldTree {
    let (kind, index) = match a.gen {
        Gen::P(i) => ("p", i),
        Gen::Q(i) => ("q", i),
        Gen::J(i) => ("j", i),
        Gen::Cur(i) => ("J", i),
    };
    let g = FieldTree::Generator { kind: kind.into(), index };
    if a.deriv == 0 {
        g
    } else {
        FieldTree::Derivative { order: a.deriv, child: Box::new(g) }
    }
}

fn poly_tree(p: &QPoly) -> FieldTree {
    FieldTree::PolyCoeff {
        nvars: p.nvars(),
        terms: p
            .terms()
            .map(|(e, c)| PolyTermJson { coeff: CycJson::from_cyc(c), exponents: e.clone() })
            .collect(),
    }
}

/// Single-term polynomials contribute their coefficient outside the product.
fn split_coeff(p: &QPoly) -> (CycNum, Option<QPoly>) {
    if p.num_terms() == 1 {
        let (e, c) = p.terms().next().unwrap();
        if e.iter().all(|x| *x == 0) {
            return (c.clone(), None);
        }
        return (c.clone(), Some(QPoly::from_terms(p.nvars(), [(e.clone(), CycNum::one())])));
    }
    (CycNum::one(), Some(p.clone()))
}

pub fn to_tree(e: &FieldExpr, nvars: usize) -> FieldTree {
    let mut terms = Vec::new();
    for g in groups(e, nvars) {
        let (coeff, poly) = split_coeff(&g.poly);
        let mut atoms: Vec<Atom> = g.head.iter().copied().collect();
        atoms.extend(g.others.iter().copied());
        let mut node: Option<FieldTree> = poly.map(|p| poly_tree(&p));
        for (i, a) in atoms.iter().enumerate().rev() {
            let split = (i == 0 && g.head.is_some() && e.twisted).then_some(g.split);
            node = Some(match node {
                None => gen_tree(*a),
                Some(right) => {
                    FieldTree::NormalProduct { left: Box::new(gen_tree(*a)), right: Box::new(right), split }
                }
            });
        }
        let mut field = node.unwrap_or(FieldTree::Identity);
        if g.zpow > 0 {
            field = FieldTree::ZPower { s: g.zpow, child: Box::new(field) };
        }
        terms.push(SumTerm { coeff: CycJson::from_cyc(&coeff), field });
    }
    FieldTree::Sum { terms }
}

fn tree_atom(t: &FieldTree) -> Result<Atom> {
    match t {
        FieldTree::Generator { kind, index } => {
            let gen = match kind.as_str() {
                "p" => Gen::P(*index),
                "q" => Gen::Q(*index),
                "j" => Gen::J(*index),
                "J" => Gen::Cur(*index),
                other => return Err(WakiError::Field(format!("unknown generator kind {other:?}"))),
            };
            Ok(Atom::new(gen))
        }
        FieldTree::Derivative { order, child } => {
            let a = tree_atom(child)?;
            Ok(Atom::d(a.gen, a.deriv + order))
        }
        _ => Err(WakiError::Field("left factor of a normal product must be a generator".into())),
    }
}

pub fn from_tree(t: &FieldTree, twisted: bool) -> Result<FieldExpr> {
    Ok(match t {
        FieldTree::Sum { terms } => {
            let mut e = FieldExpr::zero(twisted);
            for st in terms {
                e = e.add(&from_tree(&st.field, twisted)?.scale(&st.coeff.to_cyc()?));
            }
            e
        }
        FieldTree::ZPower { s, child } => from_tree(child, twisted)?.z_shift(*s),
        FieldTree::NormalProduct { left, right, split } => {
            FieldExpr::normal_product(tree_atom(left)?, &from_tree(right, twisted)?, split.unwrap_or(0))?
        }
        FieldTree::Generator { .. } | FieldTree::Derivative { .. } => FieldExpr::atom(tree_atom(t)?, twisted),
        FieldTree::PolyCoeff { nvars, terms } => {
            let mut p = QPoly::zero(*nvars);
            for pt in terms {
                if pt.exponents.len() != *nvars {
                    return Err(WakiError::Field("polynomial exponent length mismatch".into()));
                }
                p.add_term(pt.exponents.clone(), pt.coeff.to_cyc()?);
            }
            FieldExpr::from_poly(&p, twisted)
        }
        FieldTree::Identity => FieldExpr::constant(CycNum::one(), twisted),
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Style {
    Plain,
    Latex,
}

fn atom_text(a: Atom, twisted: bool, style: Style) -> String {
    let (base, idx, upper) = match a.gen {
        Gen::P(i) => ("p", i + 1, false),
        Gen::Q(i) => ("q", i + 1, true),
        Gen::J(i) => ("j", i + 1, false),
        Gen::Cur(i) => ("J", i + 1, false),
    };
    let name = match style {
        Style::Plain => {
            let t = if twisted { "~" } else { "" };
            format!("{base}{idx}{t}")
        }
        Style::Latex => {
            let b = if base == "j" { "\\jmath" } else { base };
            let b = if twisted { format!("\\tilde{{{b}}}") } else { b.to_string() };
            if upper {
                format!("{b}^{{{idx}}}")
            } else {
                format!("{b}_{{{idx}}}")
            }
        }
    };
    match (a.deriv, style) {
        (0, _) => name,
        (1, Style::Plain) => format!("d{name}"),
        (d, Style::Plain) => format!("d{d}{name}"),
        (1, Style::Latex) => format!("\\partial {name}"),
        (d, Style::Latex) => format!("\\partial^{{{d}}} {name}"),
    }
}

fn coeff_text(c: &CycNum, style: Style) -> String {
    match (c.as_rational(), style) {
        (Some(r), Style::Latex) if !r.denom().is_one() => {
            format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
        }
        (Some(r), _) => q_to_string(r),
        (None, Style::Plain) => c.to_string(),
        (None, Style::Latex) => c.to_string().replace(&format!("z{}", c.order()), &format!("\\zeta_{{{}}}", c.order())),
    }
}

fn poly_text(p: &QPoly, twisted: bool, style: Style) -> String {
    let name = |i: usize| {
        
        atom_text(Atom::new(Gen::Q(i as u16)), twisted, style)
    };
    match style {
        Style::Plain => p.fmt_with(&name),
        Style::Latex => {
            let mut out = String::new();
            for (k, (e, c)) in p.terms().enumerate() {
                let neg = c.is_negative_rational();
                let mag = if neg { -c } else { c.clone() };
                if k > 0 {
                    out.push_str(if neg { " - " } else { " + " });
                } else if neg {
                    out.push('-');
                }
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| if x == 1 { name(i) } else { format!("({})^{{{x}}}", name(i)) })
                    .collect();
                if mono.is_empty() || !mag.is_one() {
                    out.push_str(&coeff_text(&mag, style));
                }
                out.push_str(&mono.join(""));
            }
            out
        }
    }
}

/// Renders an expression; `nvars` is the number of `q` variables.
pub fn render(e: &FieldExpr, nvars: usize, style: Style) -> String {
    let gs = groups(e, nvars);
    if gs.is_empty() {
        return "0".into();
    }
    let sep = if style == Style::Latex { "" } else { " " };
    let mut out = String::new();
    for (i, g) in gs.iter().enumerate() {
        let (coeff, poly) = split_coeff(&g.poly);
        let neg = coeff.is_negative_rational();
        let mag = if neg { -&coeff } else { coeff.clone() };
        if i > 0 {
            out.push_str(if neg { " - " } else { " + " });
        } else if neg {
            out.push('-');
        }
        let mut factors: Vec<String> = Vec::new();
        if g.zpow > 0 {
            factors.push(match style {
                Style::Plain => format!("z^-{}", g.zpow),
                Style::Latex => format!("z^{{-{}}}", g.zpow),
            });
        }
        let mut inner: Vec<String> = g.others.iter().map(|a| atom_text(*a, e.twisted, style)).collect();
        if let Some(p) = &poly {
            let t = poly_text(p, e.twisted, style);
            inner.push(if p.num_terms() > 1 { format!("({t})") } else { t });
        }
        let body = match g.head {
            Some(h) => {
                let mut parts = vec![atom_text(h, e.twisted, style)];
                parts.extend(inner);
                Some(format!(":{}:", parts.join(sep)))
            }
            None if inner.is_empty() => None,
            None => Some(inner.join(sep)),
        };
        let show_coeff = !mag.is_one() || (body.is_none() && factors.is_empty());
        let mut pieces = Vec::new();
        if show_coeff {
            pieces.push(coeff_text(&mag, style));
        }
        pieces.extend(factors);
        pieces.extend(body);
        out.push_str(&pieces.join(" "));
    }
    out
}

/// Normally ordered monomial from text such as `"p1 q1 q1"` or `"j2 dq3"`:
/// atoms `p`, `q`, `j` (free fields) or `J` (abstract currents) with a 1-based
/// index and one `d` per derivative, nested to the right. `split` gives the
/// head split for each generator.
pub fn parse_monomial(text: &str, twisted: bool, split: &dyn Fn(Gen) -> i32) -> Result<FieldExpr> {
    let mut atoms = Vec::new();
    for tok in text.split_whitespace() {
        let deriv = tok.chars().take_while(|&c| c == 'd').count();
        let rest = &tok[deriv..];
        let mut chars = rest.chars();
        let kind = chars.next().ok_or_else(|| WakiError::Field(format!("bad atom '{tok}'")))?;
        let idx: u16 = chars
            .as_str()
            .parse()
            .ok()
            .filter(|&i: &u16| i > 0)
            .ok_or_else(|| WakiError::Field(format!("bad atom index in '{tok}'")))?;
        let gen = match kind {
            'p' => Gen::P(idx - 1),
            'q' => Gen::Q(idx - 1),
            'j' => Gen::J(idx - 1),
            'J' => Gen::Cur(idx - 1),
            _ => return Err(WakiError::Field(format!("bad atom '{tok}'"))),
        };
        atoms.push(Atom::d(gen, deriv as u8));
    }
    let mut e = FieldExpr::constant(CycNum::one(), twisted);
    for a in atoms.into_iter().rev() {
        e = FieldExpr::normal_product(a, &e, split(a.gen))?;
    }
    Ok(e)
}

/// Convenience: the expression equal to `z^{-s}` times a word, used by tests.
pub fn single_term(word: Word, zpow: u32, c: CycNum, twisted: bool) -> FieldExpr {
    let mut e = FieldExpr::zero(twisted);
    if !c.is_zero() {
        e.add_term(Term { zpow, word }, c);
    }
    e
}

//! Reference currents for the `sl_2` and `sl_4` examples, written in the basis
//! independent form `J_X = sum_a <T^a, X> J_a`.

use crate::currents::{parse_monomial, FieldExpr, Gen, Realization};
use crate::error::Result;
use crate::exactnum::{q, CycNum, Q};
use crate::liealg::{Elem, LieAlgebraData};
use crate::twistor::SplitConvention;

pub struct Golden {
    pub label: String,
    pub expected: FieldExpr,
    pub actual: FieldExpr,
}

impl Golden {
    pub fn matches(&self) -> bool {
        self.expected == self.actual
    }
}

/// Builder for expected expressions.
struct Expr<'a> {
    r: &'a Realization,
    twisted: bool,
    split: SplitConvention,
    e: FieldExpr,
}

impl<'a> Expr<'a> {
    fn new(r: &'a Realization, twisted: bool, split: SplitConvention) -> Self {
        Expr { r, twisted, split, e: FieldExpr::zero(twisted) }
    }

    fn word(mut self, c: Q, text: &str) -> Result<Self> {
        let g = &self.r.graded;
        let split = self.split;
        let tw = self.twisted;
        let sp = |x: Gen| if tw { split.representative(self.r.gen_class(x), g.n) as i32 } else { 0 };
        let w = parse_monomial(text, self.twisted, &sp)?;
        self.e = self.e.add(&w.scale(&CycNum::from_q(c)));
        Ok(self)
    }

    /// `c z^{-1} text`.
    fn zword(mut self, c: Q, text: &str) -> Result<Self> {
        let w = Expr::new(self.r, self.twisted, self.split).word(c, text)?.e;
        self.e = self.e.add(&w.z_shift(1));
        Ok(self)
    }

    /// `c j_X text`, with `text` a free-field monomial commuting with `j`.
    fn jword(mut self, c: Q, x: &Elem, text: &str) -> Result<Self> {
        let j = self.r.jbar_for(x, self.twisted);
        let rest = Expr::new(self.r, self.twisted, self.split).word(c, text)?.e;
        self.e = self.e.add(&j.product(&rest)?);
        Ok(self)
    }

    /// `c K d(text)`.
    fn kd(mut self, c: Q, text: &str) -> Result<Self> {
        let k = self.r.level().clone();
        let w = Expr::new(self.r, self.twisted, self.split).word(c * k, text)?.e;
        self.e = self.e.add(&w.derivative()?);
        Ok(self)
    }
}

fn i(n: i64) -> Q {
    q(n, 1)
}

fn elem(alg: &LieAlgebraData, v: &[(usize, usize, i64)]) -> Result<Elem> {
    alg.from_entries(&v.iter().map(|&(a, b, c)| (a, b, q(c, 1))).collect::<Vec<_>>())
}

/// `sl_2` with the principal grading: the untwisted currents, and for `N > 1`
/// also the twisted ones (standard split).
pub fn sl2_goldens(r: &Realization) -> Result<Vec<Golden>> {
    let alg = &r.graded.algebra;
    let sm = elem(alg, &[(2, 1, 1)])?;
    let s3 = elem(alg, &[(1, 1, 1), (2, 2, -1)])?;
    let sp = elem(alg, &[(1, 2, 1)])?;
    let mut out = Vec::new();
    let n = r.graded.n as i64;
    let variants: &[bool] = if n > 1 { &[false, true] } else { &[false] };
    for &tw in variants {
        let split = SplitConvention::Standard;
        let cur = if tw { r.twisted_currents(split)? } else { r.currents()? };
        let corr = if tw { q(2 * (n - 1), n) } else { Q::from_integer(0.into()) };
        let jm = Expr::new(r, tw, split).word(i(-1), "p1")?.e;
        let j3 = Expr::new(r, tw, split).jword(i(1), &s3, "")?.word(i(-2), "p1 q1")?.zword(-corr.clone(), "")?.e;
        let jp = Expr::new(r, tw, split)
            .word(i(1), "p1 q1 q1")?
            .jword(i(-1), &s3, "q1")?
            .kd(i(1), "q1")?
            .zword(corr, "q1")?
            .e;
        let tag = if tw { "twisted " } else { "" };
        for (name, x, e) in [("sigma-", &sm, jm), ("sigma3", &s3, j3), ("sigma+", &sp, jp)] {
            out.push(Golden { label: format!("{tag}J[{name}]"), actual: r.combine_currents(x, &cur), expected: e });
        }
    }
    Ok(out)
}

/// Named elements of `sl_4` in the eigenbasis of the secondary-diagonal transpose.
pub fn sl4_elements(alg: &LieAlgebraData) -> Result<Vec<(&'static str, Elem)>> {
    Ok(vec![
        ("E-[-2e1]", elem(alg, &[(4, 1, 1)])?),
        ("E-[-2e2]", elem(alg, &[(3, 2, 1)])?),
        ("E+[-e1-e2]", elem(alg, &[(3, 1, 1), (4, 2, -1)])?),
        ("E-[-e1-e2]", elem(alg, &[(3, 1, 1), (4, 2, 1)])?),
        ("E+[e1-e2]", elem(alg, &[(1, 2, 1), (3, 4, -1)])?),
        ("E-[e1-e2]", elem(alg, &[(1, 2, 1), (3, 4, 1)])?),
        ("E+[e2-e1]", elem(alg, &[(2, 1, 1), (4, 3, -1)])?),
        ("E-[e2-e1]", elem(alg, &[(2, 1, 1), (4, 3, 1)])?),
        ("H+", elem(alg, &[(1, 1, 1), (2, 2, -1), (3, 3, 1), (4, 4, -1)])?),
        ("H-", elem(alg, &[(1, 1, 1), (2, 2, -1), (3, 3, -1), (4, 4, 1)])?),
        ("H", alg.from_diagonal(&[q(1, 2), q(1, 2), q(-1, 2), q(-1, 2)])?),
        ("E-[2e1]", elem(alg, &[(1, 4, 1)])?),
        ("E-[2e2]", elem(alg, &[(2, 3, 1)])?),
        ("E+[e1+e2]", elem(alg, &[(1, 3, 1), (2, 4, -1)])?),
        ("E-[e1+e2]", elem(alg, &[(1, 3, 1), (2, 4, 1)])?),
    ])
}

/// The fifteen untwisted `sl_4` currents for the grading `diag(1,1,-1,-1)/2`
/// with `q`, `p` expanded in the `E_{41}, E_{32}, E_{31} -+ E_{42}` basis.
pub fn sl4_goldens(r: &Realization) -> Result<Vec<Golden>> {
    let alg = &r.graded.algebra;
    let els = sl4_elements(alg)?;
    let x = |n: &str| els.iter().find(|(m, _)| *m == n).map(|(_, e)| e.clone()).unwrap();
    let (ep12, em12, ep21, em21, hp, hm, h) =
        (x("E+[e1-e2]"), x("E-[e1-e2]"), x("E+[e2-e1]"), x("E-[e2-e1]"), x("H+"), x("H-"), x("H"));
    let s = SplitConvention::Standard;
    let ex = || Expr::new(r, false, s);
    let half = q(1, 2);
    let mut expected: Vec<(&str, FieldExpr)> = vec![
        ("E-[-2e1]", ex().word(i(-1), "p1")?.e),
        ("E-[-2e2]", ex().word(i(-1), "p2")?.e),
        ("E+[-e1-e2]", ex().word(i(-1), "p3")?.e),
        ("E-[-e1-e2]", ex().word(i(-1), "p4")?.e),
        ("E+[e1-e2]", ex().jword(i(1), &ep12, "")?.word(i(-2), "p2 q4")?.word(i(-1), "p4 q1")?.e),
        ("E-[e1-e2]", ex().jword(i(1), &em12, "")?.word(i(-2), "p2 q3")?.word(i(1), "p3 q1")?.e),
        ("E+[e2-e1]", ex().jword(i(1), &ep21, "")?.word(i(-2), "p1 q4")?.word(i(-1), "p4 q2")?.e),
        ("E-[e2-e1]", ex().jword(i(1), &em21, "")?.word(i(2), "p1 q3")?.word(i(-1), "p3 q2")?.e),
        ("H+", ex().jword(i(1), &hp, "")?.word(i(-2), "p1 q1")?.word(i(2), "p2 q2")?.e),
        ("H-", ex().jword(i(1), &hm, "")?.word(i(-2), "p4 q3")?.word(i(-2), "p3 q4")?.e),
        (
            "H",
            ex().jword(i(1), &h, "")?
                .word(i(-1), "p1 q1")?
                .word(i(-1), "p2 q2")?
                .word(i(-1), "p3 q3")?
                .word(i(-1), "p4 q4")?
                .e,
        ),
    ];
    expected.push((
        "E-[2e1]",
        ex().jword(-half.clone(), &hp, "q1")?
            .jword(i(-1), &h, "q1")?
            .jword(i(1), &em12, "q3")?
            .jword(i(-1), &ep12, "q4")?
            .word(i(1), "p1 q1 q1")?
            .word(i(1), "p2 q4 q4")?
            .word(i(-1), "p2 q3 q3")?
            .word(i(1), "p3 q1 q3")?
            .word(i(1), "p4 q1 q4")?
            .kd(i(1), "q1")?
            .e,
    ));
    expected.push((
        "E-[2e2]",
        ex().jword(half, &hp, "q2")?
            .jword(i(-1), &h, "q2")?
            .jword(i(-1), &em21, "q3")?
            .jword(i(-1), &ep21, "q4")?
            .word(i(1), "p2 q2 q2")?
            .word(i(1), "p1 q4 q4")?
            .word(i(-1), "p1 q3 q3")?
            .word(i(1), "p3 q2 q3")?
            .word(i(1), "p4 q2 q4")?
            .kd(i(1), "q2")?
            .e,
    ));
    expected.push((
        "E+[e1+e2]",
        ex().jword(i(1), &em21, "q1")?
            .jword(i(-1), &em12, "q2")?
            .jword(i(-2), &h, "q3")?
            .jword(i(-1), &hm, "q4")?
            .word(i(2), "p1 q1 q3")?
            .word(i(2), "p2 q2 q3")?
            .word(i(1), "p3 q3 q3")?
            .word(i(1), "p3 q4 q4")?
            .word(i(-1), "p3 q1 q2")?
            .word(i(2), "p4 q3 q4")?
            .kd(i(2), "q3")?
            .e,
    ));
    expected.push((
        "E-[e1+e2]",
        ex().jword(i(-1), &ep21, "q1")?
            .jword(i(-1), &ep12, "q2")?
            .jword(i(-1), &hm, "q3")?
            .jword(i(-2), &h, "q4")?
            .word(i(2), "p1 q1 q4")?
            .word(i(2), "p2 q2 q4")?
            .word(i(2), "p3 q3 q4")?
            .word(i(1), "p4 q3 q3")?
            .word(i(1), "p4 q4 q4")?
            .word(i(1), "p4 q1 q2")?
            .kd(i(2), "q4")?
            .e,
    ));
    let cur = r.currents()?;
    Ok(expected
        .into_iter()
        .map(|(name, e)| Golden { label: format!("J[{name}]"), actual: r.combine_currents(&x(name), &cur), expected: e })
        .collect())
}

/// Correction terms `Theta_X = Theta_a <X, T^a>` for `sl_4` with the secondary-diagonal
/// transpose, under the given split convention. Returns `(X, Theta_X)` for all named `X`.
pub fn sl4_theta(r: &Realization, split: SplitConvention) -> Result<Vec<(String, FieldExpr)>> {
    let thq: Vec<FieldExpr> = r.theta(split).iter().map(|t| FieldExpr::from_poly(t, false)).collect();
    Ok(sl4_elements(&r.graded.algebra)?
        .into_iter()
        .map(|(n, x)| (n.to_string(), r.combine_currents(&x, &thq)))
        .collect())
}

/// The nonzero correction terms of the `sl_4` example:
/// `Theta_H = 3/2`, `Theta_{E-[2e_i]} = -3/2 q^i`, `Theta_{E+-[e1+e2]} = -3 q^{3,4}`.
pub fn sl4_theta_expected(r: &Realization) -> Result<Vec<(String, FieldExpr)>> {
    let s = SplitConvention::Standard;
    let ex = || Expr::new(r, false, s);
    let mut out = Vec::new();
    for (n, _) in sl4_elements(&r.graded.algebra)? {
        let e = match n {
            "H" => ex().word(q(3, 2), "")?.e,
            "E-[2e1]" => ex().word(q(-3, 2), "q1")?.e,
            "E-[2e2]" => ex().word(q(-3, 2), "q2")?.e,
            "E+[e1+e2]" => ex().word(i(-3), "q3")?.e,
            "E-[e1+e2]" => ex().word(i(-3), "q4")?.e,
            _ => FieldExpr::zero(false),
        };
        out.push((n.to_string(), e));
    }
    Ok(out)
}

/// The `sl_4` grading options used by the examples: `q^alpha` expanded in
/// `E_{41}, E_{32}, E_{31} - E_{42}, E_{31} + E_{42}`.
pub fn sl4_minus_basis(alg: &LieAlgebraData) -> Result<Vec<Elem>> {
    Ok(vec![
        elem(alg, &[(4, 1, 1)])?,
        elem(alg, &[(3, 2, 1)])?,
        elem(alg, &[(3, 1, 1), (4, 2, -1)])?,
        elem(alg, &[(3, 1, 1), (4, 2, 1)])?,
    ])
}

/// Levels of the `g_0` factors: centre first.
pub fn group_level_offsets(r: &Realization) -> Vec<Q> {
    r.shifts.group_levels.iter().map(|l| l - r.level()).collect()
}


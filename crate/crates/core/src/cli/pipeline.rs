//! Build and verify pipelines shared by the subcommands.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::Zero;
use serde::Serialize;

use super::config::RunConfig;
use crate::currents::{render, to_tree, CycJson, FieldExpr, FieldTree, Mutation, Realization, Style};
use crate::error::Result;
use crate::exactnum::{q_to_string, CycNum, Q, QPoly};
use crate::fockcheck::{
    verify_borcherds_consequences, verify_mode_algebra, verify_sugawara, CheckReport, ModuleSpec, VerifyOptions,
};
use crate::liealg::{grade_and_twist, AutomorphismData, Elem, GradedTwistData, GradingOptions, LieAlgebraData};
use crate::twistor::{twist, SplitConvention};
use crate::wakipoly::{check_lemma1, check_lemma2, families};

/// Validated configuration together with the graded algebra.
pub struct Pipeline {
    pub config: RunConfig,
    pub algebra: LieAlgebraData,
    pub tau: AutomorphismData,
    pub graded: GradedTwistData,
}

impl Pipeline {
    pub fn new(config: RunConfig) -> Result<Self> {
        let algebra = config.algebra()?;
        let h = config.grading_element(&algebra)?;
        let tau = config.automorphism(&algebra)?;
        let opts = GradingOptions { minus_basis: config.basis(&algebra, "minus")?, zero_basis: config.basis(&algebra, "zero")? };
        let graded = grade_and_twist(&algebra, &h, &tau, &opts)?;
        Ok(Pipeline { config, algebra, tau, graded })
    }

    pub fn realization(&self, level: &Q) -> Result<Realization> {
        Realization::new(self.graded.clone(), level)
    }
}

/// Label of joint basis element `a`: `L`, `D` or `U` with a 1-based index.
pub fn basis_label(g: &GradedTwistData, a: usize) -> String {
    if a < g.n_minus {
        format!("L{}", a + 1)
    } else if a < g.n_minus + g.n_zero {
        format!("D{}", a - g.n_minus + 1)
    } else {
        format!("U{}", a - g.n_minus - g.n_zero + 1)
    }
}

/// Ambient element as text, using matrix units for `sl_n`.
pub fn elem_text(alg: &LieAlgebraData, x: &Elem) -> String {
    let mut parts: Vec<(CycNum, String)> = Vec::new();
    match &alg.matrix_rep {
        Some(rep) => {
            let m = rep.to_matrix(x);
            for i in 0..rep.n {
                for j in 0..rep.n {
                    if !m[(i, j)].is_zero() {
                        parts.push((m[(i, j)].clone(), format!("E{}{}", i + 1, j + 1)));
                    }
                }
            }
        }
        None => {
            for (c, l) in x.iter().zip(&alg.labels) {
                if !c.is_zero() {
                    parts.push((c.clone(), l.clone()));
                }
            }
        }
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (c, name)) in parts.iter().enumerate() {
        let neg = c.is_negative_rational();
        let mag = if neg { -c } else { c.clone() };
        out.push_str(match (i, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        if !mag.is_one() {
            out.push_str(&format!("{mag}*"));
        }
        out.push_str(name);
    }
    out
}

#[derive(Serialize)]
struct BasisEntry {
    index: usize,
    label: String,
    element: String,
    grade: i64,
    class: u32,
}

#[derive(Serialize)]
struct CurrentEntry {
    index: usize,
    label: String,
    text: String,
    tree: FieldTree,
}

#[derive(Serialize)]
struct GroupEntry {
    dim: usize,
    casimir: String,
    simple_factors: usize,
    level: String,
}

#[derive(Serialize)]
struct BuildOutput {
    name: String,
    algebra: String,
    dim: usize,
    order: u32,
    level: String,
    y: String,
    split: String,
    basis: Vec<BasisEntry>,
    groups: Vec<GroupEntry>,
    j_level_form: Vec<Vec<CycJson>>,
    currents: Vec<CurrentEntry>,
    twisted_currents: Vec<CurrentEntry>,
    theta: BTreeMap<String, String>,
    phi: Vec<Vec<String>>,
    psi: Vec<Vec<String>>,
    lambda: Vec<Vec<String>>,
    sugawara: String,
    twisted_sugawara: Option<String>,
}

fn poly_table(m: &[Vec<QPoly>]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(|p| p.to_string()).collect()).collect()
}

fn current_entries(r: &Realization, cur: &[FieldExpr]) -> Vec<CurrentEntry> {
    let nv = r.n_alpha();
    cur.iter()
        .enumerate()
        .map(|(a, e)| CurrentEntry {
            index: a + 1,
            label: basis_label(&r.graded, a),
            text: render(e, nv, Style::Plain),
            tree: to_tree(e, nv),
        })
        .collect()
}

/// Everything `build` emits, as a JSON value with sorted keys.
pub fn build_json(name: &str, r: &Realization, split: SplitConvention) -> Result<serde_json::Value> {
    let g = &r.graded;
    let cur = r.currents()?;
    let twisted = if g.n > 1 { r.twisted_currents(split)? } else { Vec::new() };
    let mut theta = BTreeMap::new();
    if g.n > 1 {
        for (a, t) in r.theta(split).iter().enumerate() {
            if !t.is_zero() {
                theta.insert(basis_label(g, a), t.to_string());
            }
        }
    }
    let out = BuildOutput {
        name: name.into(),
        algebra: g.algebra.name.clone(),
        dim: g.dim(),
        order: g.n,
        level: q_to_string(r.level()),
        y: q_to_string(r.y()),
        split: split.name().into(),
        basis: (0..g.dim())
            .map(|a| BasisEntry {
                index: a + 1,
                label: basis_label(g, a),
                element: elem_text(&g.algebra, &g.basis[a]),
                grade: g.grade[a],
                class: g.class[a],
            })
            .collect(),
        groups: g
            .groups
            .iter()
            .zip(&r.shifts.group_levels)
            .map(|(f, l)| GroupEntry {
                dim: f.dim,
                casimir: q_to_string(&f.casimir),
                simple_factors: f.simple_factors,
                level: q_to_string(l),
            })
            .collect(),
        j_level_form: (0..r.n_j())
            .map(|k| (0..r.n_j()).map(|l| CycJson::from_cyc(&r.j_level[(k, l)])).collect())
            .collect(),
        currents: current_entries(r, &cur),
        twisted_currents: current_entries(r, &twisted),
        theta,
        phi: poly_table(&r.polys.phi),
        psi: poly_table(&r.polys.psi),
        lambda: poly_table(&r.polys.lambda),
        sugawara: render(&r.sugawara_free_field()?, r.n_alpha(), Style::Plain),
        twisted_sugawara: if g.n > 1 {
            Some(render(&r.twisted_sugawara_free_field()?, r.n_alpha(), Style::Plain))
        } else {
            None
        },
    };
    serde_json::to_value(out).map_err(|e| crate::WakiError::Other(e.to_string()))
}

/// LaTeX listing of the currents, the twisted currents and the correction terms.
pub fn build_latex(r: &Realization, split: SplitConvention) -> Result<String> {
    let g = &r.graded;
    let nv = r.n_alpha();
    let mut s = String::from("\\begin{align*}\n");
    for (a, e) in r.currents()?.iter().enumerate() {
        s.push_str(&format!("\\mathcal{{J}}_{{{}}} &= {} \\\\\n", basis_label(g, a), render(e, nv, Style::Latex)));
    }
    if g.n > 1 {
        for (a, e) in r.twisted_currents(split)?.iter().enumerate() {
            s.push_str(&format!("J^\\tau_{{{}}} &= {} \\\\\n", basis_label(g, a), render(e, nv, Style::Latex)));
        }
        for (a, t) in r.theta(split).iter().enumerate() {
            if !t.is_zero() {
                let e = FieldExpr::from_poly(t, false);
                s.push_str(&format!("\\Theta_{{{}}} &= {} \\\\\n", basis_label(g, a), render(&e, nv, Style::Latex)));
            }
        }
    }
    s.push_str("\\end{align*}\n");
    Ok(s)
}

/// Outcome of a level-independent check.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct StaticCheck {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub details: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct LevelReport {
    pub level: String,
    pub checks: Vec<CheckReport>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct VerifyOutput {
    pub name: String,
    pub seed: u64,
    pub split: String,
    pub cutoff: i64,
    pub modes: (i64, i64),
    pub static_checks: Vec<StaticCheck>,
    pub levels: Vec<LevelReport>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u128>>,
}

/// What `verify` runs.
pub struct VerifyPlan {
    pub levels: Vec<Q>,
    pub split: SplitConvention,
    pub checks: Vec<String>,
    pub options: VerifyOptions,
    pub mutation: Option<Mutation>,
    pub timings: bool,
}

/// Covariance and homogeneity of all polynomial families.
pub fn lemma_check(r: &Realization, split: SplitConvention) -> Vec<StaticCheck> {
    let g = &r.graded;
    let fams = families(g, &r.polys, &r.theta(split));
    let l1 = check_lemma1(g, &fams);
    let l2 = check_lemma2(g, &fams);
    let conv = |name: &str, rep: crate::wakipoly::LemmaReport| StaticCheck {
        name: name.into(),
        passed: rep.passed(),
        checked: rep.checked,
        details: rep.failures.iter().map(|(f, e)| format!("{f}: {e}")).collect(),
    };
    vec![conv("lemma1_covariance", l1), conv("lemma2_homogeneity", l2)]
}

/// Closed-form twisted currents and Sugawara field against the generic correction.
pub fn path_check(r: &Realization, split: SplitConvention) -> Result<StaticCheck> {
    let g = &r.graded;
    let mut details = Vec::new();
    let mut checked = 0;
    for a in 0..g.dim() {
        checked += 1;
        if r.twisted_current(a, split)? != r.twisted_current_generic(a, split)? {
            details.push(format!("current {}", basis_label(g, a)));
        }
    }
    if g.n > 1 {
        checked += 1;
        let generic = twist(r, &r.sugawara_free_field()?, SplitConvention::Standard)?;
        if generic != r.twisted_sugawara_free_field()? {
            details.push("twisted Sugawara field".into());
        }
    }
    Ok(StaticCheck { name: "path_independence".into(), passed: details.is_empty(), checked, details })
}

pub fn run_verify(p: &Pipeline, plan: &VerifyPlan) -> Result<VerifyOutput> {
    let cfg = &p.config;
    let has = |c: &str| plan.checks.iter().any(|x| x == c);
    let mut timings = BTreeMap::new();
    let mut static_checks = Vec::new();
    let main_level = cfg.level.to_q("level")?;
    let mut base = p.realization(&main_level)?;
    if let Some(m) = &plan.mutation {
        base = base.with_mutation(m.clone());
    }
    let t = Instant::now();
    if has("lemmas") {
        static_checks.extend(lemma_check(&base, plan.split));
        timings.insert("lemmas".to_string(), t.elapsed().as_millis());
    }
    if has("paths") {
        let t = Instant::now();
        static_checks.push(path_check(&base, plan.split)?);
        timings.insert("paths".to_string(), t.elapsed().as_millis());
    }
    if has("equivariance") {
        let bad = base.check_equivariance()?;
        static_checks.push(StaticCheck {
            name: "equivariance".into(),
            passed: bad.is_empty(),
            checked: base.dim(),
            details: bad.iter().map(|&a| basis_label(&p.graded, a)).collect(),
        });
    }
    if has("q_central") {
        static_checks.push(StaticCheck {
            name: "q_central".into(),
            passed: base.check_q_central(),
            checked: 1,
            details: Vec::new(),
        });
    }
    let mut levels = Vec::new();
    let ff = plan.options.fail_fast;
    let mut stopped = ff && static_checks.iter().any(|c: &StaticCheck| !c.passed);
    for k in &plan.levels {
        if stopped {
            break;
        }
        let mut r = p.realization(k)?;
        if let Some(m) = &plan.mutation {
            r = r.with_mutation(m.clone());
        }
        let mut checks = Vec::new();
        let mut sectors = vec![false];
        if p.graded.n > 1 && has("twisted") {
            sectors.push(true);
        }
        for tw in sectors {
            if stopped {
                break;
            }
            let spec = ModuleSpec::new(&r, tw);
            let cur = if tw { r.twisted_currents(plan.split)? } else { r.currents()? };
            let tag = |n: &str| format!("K={} {} {}", q_to_string(k), if tw { "twisted" } else { "untwisted" }, n);
            if has("mode_algebra") && !stopped {
                let t = Instant::now();
                checks.push(verify_mode_algebra(&r, &spec, &cur, &plan.options)?);
                timings.insert(tag("mode_algebra"), t.elapsed().as_millis());
                stopped = ff && checks.iter().any(|c: &CheckReport| !c.passed());
            }
            if has("sugawara") && !stopped {
                let t = Instant::now();
                let (s, alt) = if tw {
                    (r.twisted_sugawara_free_field()?, r.twisted_sugawara_currents()?)
                } else {
                    (r.sugawara_free_field()?, r.sugawara_currents()?)
                };
                checks.push(verify_sugawara(&r, &spec, &s, Some(&alt), &cur, &plan.options)?);
                timings.insert(tag("sugawara"), t.elapsed().as_millis());
                stopped = ff && checks.iter().any(|c: &CheckReport| !c.passed());
            }
            if has("borcherds") && !stopped {
                let t = Instant::now();
                checks.push(verify_borcherds_consequences(&r, &spec, &cur, &plan.options)?);
                timings.insert(tag("borcherds"), t.elapsed().as_millis());
                stopped = ff && checks.iter().any(|c: &CheckReport| !c.passed());
            }
        }
        levels.push(LevelReport { level: q_to_string(k), checks });
    }
    let passed = static_checks.iter().all(|c| c.passed) && levels.iter().all(|l| l.checks.iter().all(|c| c.passed()));
    Ok(VerifyOutput {
        name: cfg.display_name(),
        seed: plan.options.seed,
        split: plan.split.name().into(),
        cutoff: plan.options.cutoff,
        modes: plan.options.modes,
        static_checks,
        levels,
        passed,
        timings_ms: plan.timings.then_some(timings),
    })
}

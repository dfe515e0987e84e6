//! One line per acceptance criterion. Exits non-zero if any criterion fails.

#[path = "common/mod.rs"]
mod common;

use std::time::{Duration, Instant};

use wakimoto_core::cli::goldens::{group_level_offsets, sl2_goldens, sl4_goldens, sl4_theta, sl4_theta_expected};
use wakimoto_core::cli::{build_json, lemma_check, path_check, Pipeline};
use wakimoto_core::currents::{Mutation, Realization};
use wakimoto_core::exactnum::{q, CycNum};
use wakimoto_core::fockcheck::{verify_mode_algebra, verify_sugawara, CheckReport, ModuleSpec, VerifyOptions};
use wakimoto_core::twistor::SplitConvention;

const LEVELS: [&str; 3] = ["1", "5/7", "3"];

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn opts(cutoff: i64) -> VerifyOptions {
    VerifyOptions { modes: (-2, 2), cutoff, ..VerifyOptions::default() }
}

fn sl2(n: u32) -> Pipeline {
    common::pipeline_from(&common::sl2_text(n))
}

fn mode_algebra(r: &Realization, twisted: bool, o: &VerifyOptions) -> CheckReport {
    let spec = ModuleSpec::new(r, twisted);
    let cur = if twisted { r.twisted_currents(SplitConvention::Standard) } else { r.currents() }.unwrap();
    verify_mode_algebra(r, &spec, &cur, o).unwrap()
}

fn first_failure(rep: &CheckReport) -> String {
    rep.failures.first().map(|f| format!("{} on {}", f.operands, f.state)).unwrap_or_default()
}

fn c1_sl2() -> Outcome {
    let t = Instant::now();
    let mut n_gold = 0;
    for n in 1..=4 {
        let p = sl2(n);
        let r = p.realization(&common::level("1")).unwrap();
        if build_json("sl2", &r, SplitConvention::Standard).is_err() {
            return fail(format!("build failed for N={n}"));
        }
        for g in sl2_goldens(&r).unwrap() {
            n_gold += 1;
            if !g.matches() {
                return fail(format!("N={n} {} differs", g.label));
            }
        }
    }
    let dt = t.elapsed();
    if dt > Duration::from_secs(5) {
        return fail(format!("{n_gold} currents match but took {dt:.1?}"));
    }
    pass(format!("{n_gold} currents, N in 1..4, {dt:.1?}"))
}

fn c2_sl4() -> Outcome {
    let t = Instant::now();
    let p = common::pipeline("sl4_nu");
    let r = p.realization(&common::level("1")).unwrap();
    let gs = sl4_goldens(&r).unwrap();
    if let Some(g) = gs.iter().find(|g| !g.matches()) {
        return fail(format!("{} differs", g.label));
    }
    let got = sl4_theta(&r, SplitConvention::Shifted).unwrap();
    let want = sl4_theta_expected(&r).unwrap();
    if let Some(((n, _), _)) = got.iter().zip(&want).find(|((_, a), (_, b))| a != b) {
        return fail(format!("Theta_{n} differs"));
    }
    let lv = group_level_offsets(&r);
    if lv != vec![q(4, 1), q(2, 1)] {
        return fail(format!("group level shifts {lv:?}"));
    }
    let dt = t.elapsed();
    if dt > Duration::from_secs(30) {
        return fail(format!("matches but took {dt:.1?}"));
    }
    pass(format!("{} currents, 15 Theta entries, levels K+4 and K+2, {dt:.1?}", gs.len()))
}

fn matrix() -> Vec<(&'static str, Pipeline)> {
    vec![
        ("sl2 N=2", sl2(2)),
        ("sl2 N=3", sl2(3)),
        ("sl4 nu", common::pipeline("sl4_nu")),
        ("sl4 order 6", common::pipeline("sl4_b20")),
        ("sl3 inner N=3", common::pipeline("sl3_inner")),
    ]
}

fn c3_lemmas() -> Outcome {
    let t = Instant::now();
    let mut checked = 0;
    for (name, p) in matrix() {
        let r = p.realization(&common::level("1")).unwrap();
        for split in [SplitConvention::Standard, SplitConvention::Shifted] {
            for c in lemma_check(&r, split) {
                checked += c.checked;
                if !c.passed {
                    return fail(format!("{name} {}: {:?}", c.name, c.details.first()));
                }
            }
        }
    }
    let dt = t.elapsed();
    if dt > Duration::from_secs(60) {
        return fail(format!("passes but took {dt:.1?}"));
    }
    pass(format!("{checked} polynomial entries over 5 configurations, {dt:.1?}"))
}

fn c4_untwisted() -> Outcome {
    let t = Instant::now();
    let mut checks = 0;
    for (name, p, cutoff) in [("sl2", sl2(1), 4), ("sl3", common::pipeline("sl3_inner"), 3)] {
        for k in LEVELS {
            let r = p.realization(&common::level(k)).unwrap();
            let rep = mode_algebra(&r, false, &opts(cutoff));
            checks += rep.checks;
            if !rep.passed() {
                return fail(format!("{name} K={k}: {}", first_failure(&rep)));
            }
        }
    }
    let dt = t.elapsed();
    if dt > Duration::from_secs(600) {
        return fail(format!("passes but took {dt:.1?}"));
    }
    pass(format!("{checks} mode identities, sl2 and sl3 at K = 1, 5/7, 3, {dt:.1?}"))
}

fn c5_twisted() -> Outcome {
    let t = Instant::now();
    let mut checks = 0;
    for (name, p, cutoff) in [("sl2 N=2", sl2(2), 4), ("sl2 N=3", sl2(3), 4), ("sl4 nu", common::pipeline("sl4_nu"), 3)] {
        for k in LEVELS {
            let r = p.realization(&common::level(k)).unwrap();
            let rep = mode_algebra(&r, true, &opts(cutoff));
            checks += rep.checks;
            if !rep.passed() {
                return fail(format!("{name} K={k}: {}", first_failure(&rep)));
            }
        }
    }
    let dt = t.elapsed();
    if dt > Duration::from_secs(900) {
        return fail(format!("passes but took {dt:.1?}"));
    }
    pass(format!("{checks} fractional-mode identities, sl2 N=2,3 and sl4 nu at K = 1, 5/7, 3, {dt:.1?}"))
}

fn c6_paths() -> Outcome {
    let t = Instant::now();
    let mut checked = 0;
    for (name, p) in matrix() {
        let r = p.realization(&common::level("5/7")).unwrap();
        for split in [SplitConvention::Standard, SplitConvention::Shifted] {
            let c = path_check(&r, split).unwrap();
            checked += c.checked;
            if !c.passed {
                return fail(format!("{name} {}: {:?}", split.name(), c.details));
            }
        }
    }
    pass(format!("{checked} closed forms equal the generic correction, {:.1?}", t.elapsed()))
}

fn c7_sugawara() -> Outcome {
    let t = Instant::now();
    let p = sl2(1);
    let r = p.realization(&common::level("1")).unwrap();
    let spec = ModuleSpec::new(&r, false);
    let cur = r.currents().unwrap();
    let s = r.sugawara_free_field().unwrap();
    let alt = r.sugawara_currents().unwrap();
    let rep = verify_sugawara(&r, &spec, &s, Some(&alt), &cur, &opts(4)).unwrap();
    if !rep.passed() {
        return fail(format!("sl2 K=1: {:?}", rep.failures.first()));
    }
    let c = rep.values["central_charge"].clone();
    if c != "1" {
        return fail(format!("sl2 K=1 measured c = {c}"));
    }
    let mut checks = rep.checks;
    for (name, p, cutoff) in [("sl2 N=2", sl2(2), 4), ("sl4 nu", common::pipeline("sl4_nu"), 3)] {
        let r = p.realization(&common::level("1")).unwrap();
        let spec = ModuleSpec::new(&r, true);
        let cur = r.twisted_currents(SplitConvention::Standard).unwrap();
        let s = r.twisted_sugawara_free_field().unwrap();
        let alt = r.twisted_sugawara_currents().unwrap();
        let rep = verify_sugawara(&r, &spec, &s, Some(&alt), &cur, &opts(cutoff)).unwrap();
        checks += rep.checks;
        if !rep.passed() {
            return fail(format!("{name}: {:?}", rep.failures.first()));
        }
    }
    pass(format!("measured c = {c} at K = 1; {checks} checks incl. twisted forms for sl2 N=2 and sl4 nu, {:.1?}", t.elapsed()))
}

fn c8_mutations() -> Outcome {
    let t = Instant::now();
    let ff = |cutoff| VerifyOptions { fail_fast: true, ..opts(cutoff) };
    let k = common::level("1");
    let mut caught = 0;
    for (name, p, cutoff) in [("sl2 N=2", sl2(2), 4), ("sl2 N=3", sl2(3), 4), ("sl4 nu", common::pipeline("sl4_nu"), 3)] {
        let base = p.realization(&k).unwrap();
        for a in 0..base.dim() {
            let Some(mono) = base.class_monomial(a) else {
                return fail(format!("{name}: no monomial of the class of T_{a}"));
            };
            let bad = base.clone().with_mutation(Mutation::Theta { a, mono: Some(mono), delta: CycNum::from_int(1) });
            let rep = mode_algebra(&bad, true, &ff(cutoff));
            if rep.passed() {
                return fail(format!("{name}: corrupted Theta_{} not detected", a + 1));
            }
            caught += 1;
        }
    }
    for (name, p, cutoff) in [("sl2", sl2(1), 4), ("sl3", common::pipeline("sl3_inner"), 3)] {
        let base = p.realization(&k).unwrap();
        let nv = base.polys.nvars;
        for alpha in 0..nv {
            for b in 0..base.dim() {
                let entry = &base.polys.lambda[alpha][b];
                let monos: Vec<Option<Vec<u16>>> =
                    if entry.is_zero() { vec![None] } else { entry.terms().map(|(e, _)| Some(e.clone())).collect() };
                for mono in monos {
                    let bad = base.clone().with_mutation(Mutation::Lambda { alpha, b, mono: mono.clone(), delta: CycNum::from_int(1) });
                    let rep = mode_algebra(&bad, false, &ff(cutoff));
                    if rep.passed() {
                        return fail(format!("{name}: corrupted Lambda[{}][{}] {mono:?} not detected", alpha + 1, b + 1));
                    }
                    if rep.failures.iter().all(|f| f.residual.is_empty()) {
                        return fail(format!("{name}: Lambda[{}][{}] failure without residual", alpha + 1, b + 1));
                    }
                    caught += 1;
                }
            }
        }
    }
    pass(format!("{caught} single-coefficient corruptions detected, {:.1?}", t.elapsed()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("sl2 currents, untwisted and twisted N = 2, 3, 4", c1_sl2),
        ("sl4 currents, correction table and group levels", c2_sl4),
        ("covariance and homogeneity lemmas", c3_lemmas),
        ("untwisted mode algebra on the vacuum module", c4_untwisted),
        ("twisted mode algebra on the vacuum module", c5_twisted),
        ("closed form equals generic twisted correction", c6_paths),
        ("Sugawara central charge, Virasoro, two twisted forms", c7_sugawara),
        ("seeded corruptions are detected", c8_mutations),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let out = f();
        println!("criterion {}: {} {title}: {}", i + 1, if out.ok { "PASS" } else { "FAIL" }, out.detail);
        if !out.ok {
            failed += 1;
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Mode action on the vacuum module and the oracle checks on small cases.

mod common;

use num_rational::Ratio;
use num_traits::One;

use wakimoto_core::currents::{Atom, FieldExpr, Gen, Mutation, Realization};
use wakimoto_core::exactnum::{q, CycNum};
use wakimoto_core::fockcheck::{
    sample_states, verify_borcherds_consequences, verify_mode_algebra, verify_sugawara, Evaluator, FockState, ModuleSpec,
    Op, VerifyOptions,
};
use wakimoto_core::twistor::SplitConvention;
use wakimoto_core::WakiError;

fn sl2(n: u32, k: &str) -> Realization {
    common::pipeline_from(&common::sl2_text(n)).realization(&common::level(k)).unwrap()
}

fn small() -> VerifyOptions {
    VerifyOptions { modes: (-1, 1), cutoff: 2, samples: 2, ..VerifyOptions::default() }
}

#[test]
fn heisenberg_modes() {
    let r = sl2(1, "1");
    let spec = ModuleSpec::new(&r, false);
    let none: [FieldExpr; 0] = [];
    let mut ev = Evaluator::new(&spec, &none);
    let qo = |m| Op { gen: Gen::Q(0), m };
    let p = |m| Op { gen: Gen::P(0), m };
    // q[0] p[-1]|0> = |0>, p[0] q[-1]|0> = -|0>
    let v = ev.apply_op(p(-1), &Vec::new());
    assert_eq!(ev.apply_op_state(qo(0), &v), FockState::vacuum());
    let v = ev.apply_op(qo(-1), &Vec::new());
    assert_eq!(ev.apply_op_state(p(0), &v), FockState::vacuum().scale(&-CycNum::one()));
    // non-negative modes kill the vacuum
    for m in 0..3 {
        assert!(ev.apply_op(qo(m), &Vec::new()).is_zero());
        assert!(ev.apply_op(p(m), &Vec::new()).is_zero());
    }
    // creators are ordered
    let pv = ev.apply_op(p(-1), &Vec::new()).as_ref().clone();
    let a = ev.apply_op_state(qo(-2), &pv);
    let qv = ev.apply_op(qo(-2), &Vec::new()).as_ref().clone();
    let b = ev.apply_op_state(p(-1), &qv);
    assert_eq!(a, b);
}

#[test]
fn j_level_and_derivatives() {
    let r = sl2(1, "3");
    let spec = ModuleSpec::new(&r, false);
    let none: [FieldExpr; 0] = [];
    let mut ev = Evaluator::new(&spec, &none);
    let j = |m| Op { gen: Gen::J(0), m };
    // j[1] j[-1]|0> = kappa |0>
    let v = ev.apply_op(j(-1), &Vec::new()).as_ref().clone();
    let w = ev.apply_op_state(j(1), &v);
    assert_eq!(w.vacuum_coeff(), r.j_level[(0, 0)]);
    // (dq)[n] = -n q[n-1]: (dq)[0] ... acting on p[-1]|0> via the field q'
    let dq = FieldExpr::atom(Atom::d(Gen::Q(0), 1), false);
    let pv = ev.apply_op(Op { gen: Gen::P(0), m: -1 }, &Vec::new()).as_ref().clone();
    let got = ev.mode_action(&dq, &Ratio::from_integer(1), &pv).unwrap();
    assert_eq!(got, FockState::vacuum().scale(&CycNum::from_int(-1)));
}

#[test]
fn twisted_mode_support() {
    let r = sl2(2, "1");
    let spec = ModuleSpec::new(&r, true);
    let cur = r.twisted_currents(SplitConvention::Standard).unwrap();
    let mut ev = Evaluator::new(&spec, &cur);
    let v = FockState::vacuum();
    // L_1 lives on 1/2 + Z
    let err = ev.mode_action(&cur[0], &Ratio::from_integer(0), &v).unwrap_err();
    assert!(matches!(err, WakiError::ModeSupport { .. }));
    assert!(ev.mode_action(&cur[0], &Ratio::new(1, 3), &v).is_err());
    assert!(ev.mode_action(&cur[0], &Ratio::new(-1, 2), &v).is_ok());
}

#[test]
fn twisted_vacuum_commutator() {
    // [J_+[1/N], J_-[-1/N]]|0> = (J_3[0] + K/N)|0>
    for (n, k) in [(2u32, "1"), (2, "5/7"), (3, "3")] {
        let r = sl2(n, k);
        let alg = &r.graded.algebra;
        let sp = alg.from_entries(&[(1, 2, q(1, 1))]).unwrap();
        let sm = alg.from_entries(&[(2, 1, q(1, 1))]).unwrap();
        let s3 = alg.from_entries(&[(1, 1, q(1, 1)), (2, 2, q(-1, 1))]).unwrap();
        let cur = r.twisted_currents(SplitConvention::Standard).unwrap();
        let (jp, jm, j3) = (r.combine_currents(&sp, &cur), r.combine_currents(&sm, &cur), r.combine_currents(&s3, &cur));
        let spec = ModuleSpec::new(&r, true);
        let mut ev = Evaluator::new(&spec, &cur);
        let vac = FockState::vacuum();
        let (a, b) = (Ratio::new(1, n as i64), Ratio::new(-1, n as i64));
        let x = ev.mode_action(&jm, &b, &vac).unwrap();
        let mut lhs = ev.mode_action(&jp, &a, &x).unwrap();
        let y = ev.mode_action(&jp, &a, &vac).unwrap();
        lhs.add_scaled(&ev.mode_action(&jm, &b, &y).unwrap(), &-CycNum::one());
        let j3v = ev.mode_action(&j3, &Ratio::from_integer(0), &vac).unwrap();
        if n == 2 {
            // q[-1/2] and p[-1/2] are both creators here, with [p[-1/2], q[-1/2]] = -1,
            // so J_3[0]|0> = (2 + Theta)|0> - 2 q[-1/2] p[-1/2]|0>
            let mut want = vac.clone();
            let qp = vec![Op { gen: Gen::Q(0), m: -1 }, Op { gen: Gen::P(0), m: -1 }];
            want.add_mono(qp, CycNum::from_int(-2));
            assert_eq!(j3v, want);
        }
        let kk = CycNum::from_q(r.level().clone());
        let mut rhs = j3v.clone();
        rhs.add_scaled(&vac, &(&kk / &CycNum::from_int(n as i64)));
        assert_eq!(lhs, rhs, "N={n} K={k}");
    }
}

#[test]
fn samples_are_seeded() {
    let r = sl2(2, "1");
    let spec = ModuleSpec::new(&r, true);
    let o = VerifyOptions { samples: 4, cutoff: 3, ..VerifyOptions::default() };
    let a: Vec<String> = sample_states(&spec, &o, 0).into_iter().map(|s| s.label).collect();
    let b: Vec<String> = sample_states(&spec, &o, 0).into_iter().map(|s| s.label).collect();
    assert_eq!(a, b);
    assert_eq!(a[0], "|0>");
    let c: Vec<String> = sample_states(&spec, &VerifyOptions { seed: 9, ..o.clone() }, 0).into_iter().map(|s| s.label).collect();
    assert_ne!(a, c);
}

#[test]
fn mode_algebra_small() {
    for n in [1u32, 2, 3] {
        let r = sl2(n, "5/7");
        for tw in [false, true] {
            if tw && n == 1 {
                continue;
            }
            let spec = ModuleSpec::new(&r, tw);
            let cur = if tw { r.twisted_currents(SplitConvention::Standard).unwrap() } else { r.currents().unwrap() };
            let rep = verify_mode_algebra(&r, &spec, &cur, &small()).unwrap();
            assert!(rep.passed(), "N={n} twisted={tw}: {:?}", rep.failures);
        }
    }
}

#[test]
fn cutoff_growth_is_consistent() {
    let r = sl2(2, "1");
    let spec = ModuleSpec::new(&r, true);
    let cur = r.twisted_currents(SplitConvention::Standard).unwrap();
    let mut counts = Vec::new();
    for cutoff in [2, 3] {
        let o = VerifyOptions { cutoff, samples: 4, ..small() };
        let rep = verify_mode_algebra(&r, &spec, &cur, &o).unwrap();
        assert!(rep.passed(), "cutoff {cutoff}");
        counts.push(rep.checks);
    }
    assert!(counts[0] <= counts[1]);
}

#[test]
fn sugawara_central_charge() {
    for (k, c) in [("1", CycNum::one()), ("5/7", CycNum::frac(15, 19))] {
        let r = sl2(1, k);
        let spec = ModuleSpec::new(&r, false);
        let cur = r.currents().unwrap();
        let s = r.sugawara_free_field().unwrap();
        let alt = r.sugawara_currents().unwrap();
        let rep = verify_sugawara(&r, &spec, &s, Some(&alt), &cur, &small()).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!(rep.values["central_charge"], c.to_string());
    }
    let r = sl2(2, "1");
    let spec = ModuleSpec::new(&r, true);
    let cur = r.twisted_currents(SplitConvention::Standard).unwrap();
    let s = r.twisted_sugawara_free_field().unwrap();
    let alt = r.twisted_sugawara_currents().unwrap();
    let rep = verify_sugawara(&r, &spec, &s, Some(&alt), &cur, &small()).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
}

#[test]
fn critical_level_is_rejected() {
    let p = common::pipeline_from(&common::sl2_text(1));
    assert!(matches!(p.realization(&common::level("-2")), Err(WakiError::CriticalLevel)));
}

#[test]
fn borcherds_small() {
    let r = sl2(2, "3");
    for tw in [false, true] {
        let spec = ModuleSpec::new(&r, tw);
        let cur = if tw { r.twisted_currents(SplitConvention::Standard).unwrap() } else { r.currents().unwrap() };
        let rep = verify_borcherds_consequences(&r, &spec, &cur, &small()).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
    }
}

#[test]
fn lambda_mutation_is_localised() {
    let r = sl2(1, "1");
    let bad = r.clone().with_mutation(Mutation::Lambda { alpha: 0, b: 0, mono: None, delta: CycNum::one() });
    let spec = ModuleSpec::new(&bad, false);
    let cur = bad.currents().unwrap();
    let rep = verify_mode_algebra(&bad, &spec, &cur, &small()).unwrap();
    assert!(!rep.passed());
    let f = &rep.failures[0];
    assert!(f.operands.contains("a=1"), "{}", f.operands);
    assert!(!f.residual.is_empty() && f.residual != "0");
}

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::eval::Evaluator;
use super::module::{FockState, ModuleSpec, Op};
use crate::currents::{commutator_fields, Atom, FieldExpr, Gen, Realization, Term, Word};
use crate::error::{Result, WakiError};
use crate::exactnum::CycNum;
use crate::twistor::{twist, SplitConvention};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Mode window `[lo, hi]`; fractional modes inside it are included.
    pub modes: (i64, i64),
    /// Total degree bound for sample states.
    pub cutoff: i64,
    /// Random sample states besides the vacuum and the one-particle states.
    pub samples: usize,
    pub seed: u64,
    pub jobs: usize,
    /// Failures kept in a report.
    pub max_failures: usize,
    /// Stop scheduling work after the first failing cell.
    pub fail_fast: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { modes: (-2, 2), cutoff: 4, samples: 3, seed: 0, jobs: 1, max_failures: 10, fail_fast: false }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Failure {
    pub identity: String,
    pub operands: String,
    pub state: String,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub module: String,
    pub checks: usize,
    pub failed: usize,
    pub failures: Vec<Failure>,
    pub values: BTreeMap<String, String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checks > 0
    }

    fn new(name: &str, spec: &ModuleSpec) -> Self {
        CheckReport {
            name: name.into(),
            module: if spec.twisted { format!("twisted N={}", spec.n) } else { "untwisted".into() },
            checks: 0,
            failed: 0,
            failures: Vec::new(),
            values: BTreeMap::new(),
        }
    }

    fn absorb(&mut self, cells: Vec<CellResult>, max: usize) {
        for c in cells {
            self.checks += c.checks;
            self.failed += c.failures.len();
            for f in c.failures {
                if self.failures.len() < max {
                    self.failures.push(f);
                }
            }
        }
    }
}

#[derive(Default)]
struct CellResult {
    checks: usize,
    failures: Vec<Failure>,
}

impl CellResult {
    fn record(&mut self, spec: &ModuleSpec, residual: &FockState, identity: &str, operands: impl FnOnce() -> String, state: &str) {
        self.checks += 1;
        if !residual.is_zero() {
            let mut text = spec.state_text(residual);
            if text.len() > 400 {
                text.truncate(400);
                text.push_str(" ...");
            }
            self.failures.push(Failure { identity: identity.into(), operands: operands(), state: state.into(), residual: text });
        }
    }
}

/// A sample vector with a readable label.
#[derive(Clone, Debug)]
pub struct Sample {
    pub label: String,
    pub state: FockState,
}

/// Creation modes of single generators of degree at most `cutoff`.
fn creators(spec: &ModuleSpec, cutoff: i64) -> Vec<Op> {
    let den = spec.den();
    let mut gens: Vec<Gen> = Vec::new();
    gens.extend((0..spec.n_alpha).map(|a| Gen::Q(a as u16)));
    gens.extend((0..spec.n_alpha).map(|a| Gen::P(a as u16)));
    gens.extend((0..spec.n_j).map(|k| Gen::J(k as u16)));
    let mut out = Vec::new();
    for g in gens {
        let class = spec.class_of(g);
        for m in (-(cutoff as i32) * den..0).rev() {
            if spec.in_lattice(class, m) {
                out.push(Op { gen: g, m });
            }
        }
    }
    out
}

/// Vacuum, a seeded choice of one-particle states and random products of
/// creation modes with total degree at most `cutoff - margin`.
pub fn sample_states(spec: &ModuleSpec, opts: &VerifyOptions, margin: i64) -> Vec<Sample> {
    let mut out = vec![Sample { label: "|0>".into(), state: FockState::vacuum() }];
    let budget = (opts.cutoff - margin).max(0) as i32 * spec.den();
    let ops: Vec<Op> = creators(spec, opts.cutoff).into_iter().filter(|o| -o.m <= budget).collect();
    if ops.is_empty() {
        return out;
    }
    let none: [FieldExpr; 0] = [];
    let mut ev = Evaluator::new(spec, &none);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut seen = std::collections::BTreeSet::new();
    let mut tries = 0;
    while out.len() < opts.samples + 1 && tries < 50 * (opts.samples + 1) {
        tries += 1;
        let len = rng.random_range(1..=3usize);
        let mut chosen: Vec<Op> = Vec::new();
        let mut deg = 0;
        for _ in 0..len {
            let o = ops[rng.random_range(0..ops.len())];
            if deg - o.m <= budget {
                deg -= o.m;
                chosen.push(o);
            }
        }
        if chosen.is_empty() || !seen.insert(chosen.clone()) {
            continue;
        }
        let mut st = FockState::vacuum();
        for o in chosen.iter().rev() {
            st = ev.apply_op_state(*o, &st);
        }
        if st.is_zero() {
            continue;
        }
        let label = chosen.iter().map(|o| spec.op_text(o)).collect::<Vec<_>>().join(" ") + "|0>";
        out.push(Sample { label, state: st });
    }
    out
}

/// Mode numerators of class `class` inside the window.
pub fn lattice_modes(spec: &ModuleSpec, class: u32, lo: i64, hi: i64) -> Vec<i32> {
    let den = spec.den();
    ((lo as i32 * den)..=(hi as i32 * den)).filter(|&m| spec.in_lattice(class, m)).collect()
}

fn run_cells<C, F>(spec: &ModuleSpec, currents: &[FieldExpr], opts: &VerifyOptions, cells: &[C], f: F) -> Result<Vec<CellResult>>
where
    C: Sync,
    F: Fn(&mut Evaluator, &C) -> CellResult + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| WakiError::Other(e.to_string()))?;
    let stop = AtomicBool::new(false);
    Ok(pool.install(|| {
        cells
            .par_iter()
            .map_init(
                || Evaluator::new(spec, currents),
                |ev, c| {
                    if opts.fail_fast && stop.load(Ordering::Relaxed) {
                        return CellResult::default();
                    }
                    let r = f(ev, c);
                    if !r.failures.is_empty() {
                        stop.store(true, Ordering::Relaxed);
                    }
                    r
                },
            )
            .collect()
    }))
}

fn mode_text(spec: &ModuleSpec, m: i32) -> String {
    spec.to_mode(m).to_string()
}

/// `[J_a[m], J_b[n]] = f_ab^c J_c[m+n] + K m <T_a,T_b> delta_{m+n,0}` on sample states.
pub fn verify_mode_algebra(
    r: &Realization,
    spec: &ModuleSpec,
    currents: &[FieldExpr],
    opts: &VerifyOptions,
) -> Result<CheckReport> {
    let g = &r.graded;
    let dim = g.dim();
    let states = sample_states(spec, opts, 0);
    let k = CycNum::from_q(r.level().clone());
    let classes: Vec<u32> = (0..dim).map(|a| if spec.twisted { g.class[a] } else { 0 }).collect();
    let cells: Vec<(usize, usize)> = (0..dim).flat_map(|a| (a..dim).map(move |b| (a, b))).collect();
    let (lo, hi) = opts.modes;
    let results = run_cells(spec, currents, opts, &cells, |ev, &(a, b)| {
        let mut res = CellResult::default();
        for &m in &lattice_modes(spec, classes[a], lo, hi) {
            for &n in &lattice_modes(spec, classes[b], lo, hi) {
                for s in &states {
                    let v = &s.state;
                    let jb = ev.mode(&currents[b], n, v);
                    let mut lhs = ev.mode(&currents[a], m, &jb);
                    let ja = ev.mode(&currents[a], m, v);
                    lhs.add_scaled(&ev.mode(&currents[b], n, &ja), &-CycNum::one());
                    let mut rhs = FockState::zero();
                    for (c, f) in &g.structure[a][b] {
                        rhs.add_scaled(&ev.mode(&currents[*c], m + n, v), f);
                    }
                    if m + n == 0 && !g.eta[(a, b)].is_zero() {
                        let cc = &(&k * &g.eta[(a, b)]) * &CycNum::frac(m as i64, spec.den() as i64);
                        rhs.add_scaled(v, &cc);
                    }
                    res.record(
                        spec,
                        &lhs.sub(&rhs),
                        "[J_a[m],J_b[n]] = f_ab^c J_c[m+n] + K m eta_ab delta",
                        || format!("a={} b={} m={} n={}", a + 1, b + 1, mode_text(spec, m), mode_text(spec, n)),
                        &s.label,
                    );
                }
            }
        }
        res
    })?;
    let mut rep = CheckReport::new("mode_algebra", spec);
    rep.values.insert("level".into(), r.level().to_string());
    rep.values.insert("states".into(), states.len().to_string());
    rep.absorb(results, opts.max_failures);
    Ok(rep)
}

/// Virasoro checks for `L_n = S[n+1]`, optionally comparing `S` with a second
/// expression `alt` of the same field.
pub fn verify_sugawara(
    r: &Realization,
    spec: &ModuleSpec,
    s_field: &FieldExpr,
    alt: Option<&FieldExpr>,
    currents: &[FieldExpr],
    opts: &VerifyOptions,
) -> Result<CheckReport> {
    if r.y().is_zero() {
        return Err(WakiError::CriticalLevel);
    }
    let g = &r.graded;
    let den = spec.den();
    let states = sample_states(spec, opts, 0);
    let (lo, hi) = opts.modes;
    let mut rep = CheckReport::new("sugawara", spec);
    let lmode = |m: i64| (m as i32 + 1) * den;

    // central charge from [L_2, L_-2]|0> = (4 L_0 + c/2)|0>
    let mut ev = Evaluator::new(spec, currents);
    let vac = FockState::vacuum();
    let lm2 = ev.mode(s_field, lmode(-2), &vac);
    let mut w = ev.mode(s_field, lmode(2), &lm2);
    let l2 = ev.mode(s_field, lmode(2), &vac);
    w.add_scaled(&ev.mode(s_field, lmode(-2), &l2), &-CycNum::one());
    w.add_scaled(&ev.mode(s_field, lmode(0), &vac), &CycNum::from_int(-4));
    let c = &w.vacuum_coeff() * &CycNum::from_int(2);
    let mut cres = CellResult::default();
    let rest = w.sub(&vac.scale(&w.vacuum_coeff()));
    cres.record(spec, &rest, "[L_2,L_-2]|0> - 4 L_0|0> is proportional to |0>", || "m=2 n=-2".into(), "|0>");
    let expected = &CycNum::from_q(r.level().clone()) * &CycNum::frac(g.dim() as i64, 1) / CycNum::from_q(r.y().clone());
    let diff = FockState::vacuum().scale(&(&c - &expected));
    cres.record(spec, &diff, "c = K dim(g) / (K + h |psi|^2/2)", || format!("measured {c}, expected {expected}"), "|0>");
    rep.values.insert("central_charge".into(), c.to_string());
    rep.values.insert("central_charge_expected".into(), expected.to_string());
    rep.values.insert("states".into(), states.len().to_string());

    // primaries
    let dim = g.dim();
    let cells: Vec<(usize, i64)> = (0..dim).flat_map(|a| (lo..=hi).map(move |m| (a, m))).collect();
    let results = run_cells(spec, currents, opts, &cells, |ev, &(a, m)| {
        let mut res = CellResult::default();
        let class = if spec.twisted { g.class[a] } else { 0 };
        for &n in &lattice_modes(spec, class, lo, hi) {
            for s in &states {
                let v = &s.state;
                let jv = ev.mode(&currents[a], n, v);
                let mut lhs = ev.mode(s_field, lmode(m), &jv);
                let lv = ev.mode(s_field, lmode(m), v);
                lhs.add_scaled(&ev.mode(&currents[a], n, &lv), &-CycNum::one());
                let rhs = ev.mode(&currents[a], n + m as i32 * den, v).scale(&CycNum::frac(-(n as i64), den as i64));
                res.record(spec, &lhs.sub(&rhs), "[L_m, J_a[n]] = -n J_a[m+n]", || {
                    format!("a={} m={} n={}", a + 1, m, mode_text(spec, n))
                }, &s.label);
            }
        }
        res
    })?;
    rep.absorb(vec![cres], opts.max_failures);
    rep.absorb(results, opts.max_failures);

    // Virasoro
    let pairs: Vec<(i64, i64)> = (lo..=hi).flat_map(|m| (m..=hi).map(move |n| (m, n))).collect();
    let c12 = &c / &CycNum::from_int(12);
    let results = run_cells(spec, currents, opts, &pairs, |ev, &(m, n)| {
        let mut res = CellResult::default();
        for s in &states {
            let v = &s.state;
            let ln = ev.mode(s_field, lmode(n), v);
            let mut lhs = ev.mode(s_field, lmode(m), &ln);
            let lm = ev.mode(s_field, lmode(m), v);
            lhs.add_scaled(&ev.mode(s_field, lmode(n), &lm), &-CycNum::one());
            let mut rhs = ev.mode(s_field, lmode(m + n), v).scale(&CycNum::from_int(m - n));
            if m + n == 0 {
                rhs.add_scaled(v, &(&c12 * &CycNum::from_int(m * m * m - m)));
            }
            res.record(spec, &lhs.sub(&rhs), "[L_m,L_n] = (m-n) L_{m+n} + c/12 (m^3-m) delta", || {
                format!("m={m} n={n}")
            }, &s.label);
        }
        res
    })?;
    rep.absorb(results, opts.max_failures);

    if let Some(alt) = alt {
        let modes: Vec<i64> = (lo..=hi + 1).collect();
        let results = run_cells(spec, currents, opts, &modes, |ev, &n| {
            let mut res = CellResult::default();
            for s in &states {
                let a = ev.mode(s_field, n as i32 * den, &s.state);
                let b = ev.mode(alt, n as i32 * den, &s.state);
                res.record(spec, &a.sub(&b), "S[n] from currents = S[n] from free fields", || format!("n={n}"), &s.label);
            }
            res
        })?;
        rep.absorb(results, opts.max_failures);
    }
    Ok(rep)
}

/// `sum_s M(M-1)...(M-s+1) chi_s[M+n-s] v`.
fn commutator_formula(ev: &mut Evaluator, chi: &[FieldExpr], m: i32, n: i32, v: &FockState) -> FockState {
    let den = ev.spec().den();
    let mut out = FockState::zero();
    let mut fall = CycNum::one();
    for (s, c) in chi.iter().enumerate() {
        if s > 0 {
            fall = &fall * &CycNum::frac((m - (s as i32 - 1) * den) as i64, den as i64);
        }
        if fall.is_zero() {
            break;
        }
        if c.is_zero() {
            continue;
        }
        let r = ev.mode(c, m + n - s as i32 * den, v);
        out.add_scaled(&r, &fall);
    }
    out
}

fn generators(spec: &ModuleSpec) -> Vec<Gen> {
    let mut g: Vec<Gen> = (0..spec.n_alpha).map(|a| Gen::Q(a as u16)).collect();
    g.extend((0..spec.n_alpha).map(|a| Gen::P(a as u16)));
    g.extend((0..spec.n_j).map(|k| Gen::J(k as u16)));
    g
}

/// Consequences of the (twisted) Borcherds identity on the module:
/// the commutator formula for generator pairs and for generators against the
/// currents, and agreement of the two split conventions for every normal
/// product occurring in the currents.
pub fn verify_borcherds_consequences(
    r: &Realization,
    spec: &ModuleSpec,
    currents: &[FieldExpr],
    opts: &VerifyOptions,
) -> Result<CheckReport> {
    let states = sample_states(spec, opts, 0);
    let untwisted = r.currents()?;
    let lift = |e: &FieldExpr| -> Result<FieldExpr> {
        if spec.twisted {
            twist(r, e, SplitConvention::Standard)
        } else {
            Ok(e.clone())
        }
    };
    let gens = generators(spec);
    let (lo, hi) = opts.modes;
    let mut rep = CheckReport::new("borcherds", spec);

    // generator pairs
    let mut pairs = Vec::new();
    for &a in &gens {
        for &b in &gens {
            let chi = commutator_fields(r, Atom::new(a), &FieldExpr::gen(b, false))?;
            let chi: Vec<FieldExpr> = chi.iter().map(&lift).collect::<Result<_>>()?;
            pairs.push((a, FieldExpr::gen(b, spec.twisted), chi, format!("{a:?} {b:?}")));
        }
    }
    // generators against currents
    for &a in &gens {
        for (i, j) in untwisted.iter().enumerate() {
            let chi = commutator_fields(r, Atom::new(a), j)?;
            let chi: Vec<FieldExpr> = chi.iter().map(&lift).collect::<Result<_>>()?;
            pairs.push((a, currents[i].clone(), chi, format!("{a:?} J{}", i + 1)));
        }
    }
    let results = run_cells(spec, currents, opts, &pairs, |ev, (a, e, chi, label)| {
        let mut res = CellResult::default();
        let ca = spec.class_of(*a);
        let ce = e.terms.keys().next().map(|t| t.word.atoms().map(|x| spec.class_of(x.gen)).sum::<u32>() % spec.n).unwrap_or(0);
        let phi = FieldExpr::gen(*a, spec.twisted);
        for &m in &lattice_modes(spec, ca, lo, hi) {
            for &n in &lattice_modes(spec, ce, lo, hi) {
                for s in &states {
                    let v = &s.state;
                    let ev_n = ev.mode(e, n, v);
                    let mut lhs = ev.mode(&phi, m, &ev_n);
                    let pv = ev.mode(&phi, m, v);
                    lhs.add_scaled(&ev.mode(e, n, &pv), &-CycNum::one());
                    let rhs = commutator_formula(ev, chi, m, n, v);
                    res.record(spec, &lhs.sub(&rhs), "[phi[m], E[n]] = sum_s C(m,s) (phi_(s) E)[m+n-s]", || {
                        format!("{label} m={} n={}", mode_text(spec, m), mode_text(spec, n))
                    }, &s.label);
                }
            }
        }
        res
    })?;
    rep.absorb(results, opts.max_failures);

    if spec.twisted {
        // product relation: the twisted image of :phi X: does not depend on the split
        let mut words: Vec<Term> = Vec::new();
        for j in &untwisted {
            for t in j.terms.keys() {
                if t.word.head.is_some() && !words.contains(t) {
                    words.push(t.clone());
                }
            }
        }
        let mut cells = Vec::new();
        for t in words {
            let mut e = FieldExpr::zero(false);
            e.add_term(t.clone(), CycNum::one());
            let a = twist(r, &e, SplitConvention::Standard)?;
            let b = twist(r, &e, SplitConvention::Shifted)?;
            let class = t.word.atoms().map(|x| spec.class_of(x.gen)).sum::<u32>() % spec.n;
            cells.push((a, b, class, format!("{:?}", Word { split: 0, ..t.word.clone() })));
        }
        let results = run_cells(spec, currents, opts, &cells, |ev, (a, b, class, label)| {
            let mut res = CellResult::default();
            for &n in &lattice_modes(spec, *class, lo, hi) {
                for s in &states {
                    let x = ev.mode(a, n, &s.state);
                    let y = ev.mode(b, n, &s.state);
                    res.record(spec, &x.sub(&y), "twisted :phi X: independent of the split", || {
                        format!("{label} n={}", mode_text(spec, n))
                    }, &s.label);
                }
            }
            res
        })?;
        rep.absorb(results, opts.max_failures);
    }
    Ok(rep)
}

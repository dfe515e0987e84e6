use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::currents::{Gen, Realization};
use crate::exactnum::{CycNum, Mat};

/// Mode index `m` of `phi[m]`, with `phi(z) = sum_m phi[m] z^{-m-1}`.
pub type ModeIndex = Ratio<i64>;

/// Free-field generator modes: `q^alpha[m]`, `p_alpha[m]`, `j_k[m]`, with the
/// mode stored as a numerator over the module denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Op {
    pub gen: Gen,
    pub m: i32,
}

impl Op {
    fn key(&self) -> (Gen, i32) {
        (self.gen, -self.m)
    }
}

impl PartialOrd for Op {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Op {
    /// PBW order of creation operators: by generator, then by mode descending.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

/// Ordered product of creation operators applied to the vacuum.
pub type Mono = Vec<Op>;

/// Vector in the induced module, as a combination of PBW monomials.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FockState {
    pub terms: BTreeMap<Mono, CycNum>,
}

impl FockState {
    pub fn zero() -> Self {
        FockState::default()
    }

    pub fn vacuum() -> Self {
        Self::basis(Vec::new())
    }

    pub fn basis(m: Mono) -> Self {
        let mut s = Self::zero();
        s.terms.insert(m, CycNum::one());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&mut self, other: &FockState, c: &CycNum) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            let v = x * c;
            self.add_mono(m.clone(), v);
        }
    }

    pub fn add_mono(&mut self, m: Mono, c: CycNum) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn sub(&self, other: &FockState) -> FockState {
        let mut s = self.clone();
        s.add_scaled(other, &-CycNum::one());
        s
    }

    pub fn scale(&self, c: &CycNum) -> FockState {
        let mut s = Self::zero();
        s.add_scaled(self, c);
        s
    }

    /// Coefficient of the vacuum.
    pub fn vacuum_coeff(&self) -> CycNum {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(CycNum::zero)
    }
}

/// Data of the induced module: classes of the generators and the brackets of
/// the `j` currents. Non-negative modes annihilate the vacuum.
#[derive(Clone, Debug)]
pub struct ModuleSpec {
    pub twisted: bool,
    /// Order `N` of the twist.
    pub n: u32,
    pub n_alpha: usize,
    pub n_j: usize,
    pub q_class: Vec<u32>,
    pub p_class: Vec<u32>,
    pub j_class: Vec<u32>,
    /// Classes of the abstract currents `J_a`.
    pub cur_class: Vec<u32>,
    /// `[k][l] -> (m, <[D_k, D_l], D^m>)`.
    pub j_struct: Vec<Vec<Vec<(usize, CycNum)>>>,
    pub j_level: Mat,
}

impl ModuleSpec {
    pub fn new(r: &Realization, twisted: bool) -> Self {
        let g = &r.graded;
        let cls = |c: u32| if twisted { c } else { 0 };
        ModuleSpec {
            twisted,
            n: if twisted { g.n } else { 1 },
            n_alpha: g.n_minus,
            n_j: g.n_zero,
            q_class: (0..g.n_minus).map(|a| cls(g.q_class(a))).collect(),
            p_class: (0..g.n_minus).map(|a| cls(g.p_class(a))).collect(),
            j_class: (0..g.n_zero).map(|k| cls(g.d_class(k))).collect(),
            cur_class: g.class.iter().map(|&c| cls(c)).collect(),
            j_struct: (0..g.n_zero).map(|k| (0..g.n_zero).map(|l| r.j_structure(k, l)).collect()).collect(),
            j_level: r.j_level.clone(),
        }
    }

    /// Denominator of mode numerators.
    pub fn den(&self) -> i32 {
        self.n as i32
    }

    pub fn class_of(&self, g: Gen) -> u32 {
        match g {
            Gen::Q(a) => self.q_class[a as usize],
            Gen::P(a) => self.p_class[a as usize],
            Gen::J(k) => self.j_class[k as usize],
            Gen::Cur(a) => self.cur_class[a as usize],
        }
    }

    pub fn to_num(&self, m: &ModeIndex) -> Option<i32> {
        let x = m * Ratio::from_integer(self.den() as i64);
        x.is_integer().then(|| *x.numer() as i32)
    }

    pub fn to_mode(&self, num: i32) -> ModeIndex {
        Ratio::new(num as i64, self.den() as i64)
    }

    /// Whether `num / den` lies in `class/N + Z`.
    pub fn in_lattice(&self, class: u32, num: i32) -> bool {
        (num - class as i32).rem_euclid(self.den()) == 0
    }

    pub fn degree(&self, m: &Mono) -> i32 {
        m.iter().map(|o| -o.m).sum()
    }

    /// `[a, b] = sum c_i op_i + scalar`.
    pub fn commutator(&self, a: Op, b: Op) -> (Vec<(Op, CycNum)>, CycNum) {
        let den = self.den();
        match (a.gen, b.gen) {
            (Gen::Q(x), Gen::P(y)) if x == y && a.m + b.m == -den => (Vec::new(), CycNum::one()),
            (Gen::P(x), Gen::Q(y)) if x == y && a.m + b.m == -den => (Vec::new(), -CycNum::one()),
            (Gen::J(k), Gen::J(l)) => {
                let ops = self.j_struct[k as usize][l as usize]
                    .iter()
                    .map(|(m, c)| (Op { gen: Gen::J(*m as u16), m: a.m + b.m }, c.clone()))
                    .collect();
                let scalar = if a.m + b.m == 0 {
                    &self.j_level[(k as usize, l as usize)] * &CycNum::frac(a.m as i64, den as i64)
                } else {
                    CycNum::zero()
                };
                (ops, scalar)
            }
            _ => (Vec::new(), CycNum::zero()),
        }
    }

    pub fn op_text(&self, o: &Op) -> String {
        let (b, i) = match o.gen {
            Gen::Q(i) => ("q", i),
            Gen::P(i) => ("p", i),
            Gen::J(i) => ("j", i),
            Gen::Cur(i) => ("J", i),
        };
        let m = self.to_mode(o.m);
        format!("{b}{}[{}]", i + 1, m)
    }

    pub fn state_text(&self, s: &FockState) -> String {
        if s.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = s
            .terms
            .iter()
            .map(|(m, c)| {
                let ops: Vec<String> = m.iter().map(|o| self.op_text(o)).collect();
                format!("({c}) {}|0>", ops.join(" "))
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} terms", self.terms.len())
    }
}

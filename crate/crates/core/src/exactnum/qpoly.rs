use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::CycNum;

pub type Monomial = Vec<u16>;

/// Sparse polynomial in `nvars` commuting variables with cyclotomic coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, CycNum>,
}

impl QPoly {
    pub fn zero(nvars: usize) -> Self {
        QPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: CycNum) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, CycNum::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, CycNum::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, CycNum)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CycNum)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Monomial, c: CycNum) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, e: &[u16]) -> CycNum {
        self.terms.get(e).cloned().unwrap_or_else(CycNum::zero)
    }

    pub fn constant_term(&self) -> CycNum {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum()).max()
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), -c);
        }
        p
    }

    pub fn neg(&self) -> QPoly {
        QPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, s: &CycNum) -> QPoly {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        QPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        let mut p = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn partial(&self, i: usize) -> QPoly {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            p.add_term(f, c * &CycNum::from_int(e[i] as i64));
        }
        p
    }

    /// `P(s_1 q_1, ..., s_n q_n)`.
    pub fn substitute_scale(&self, scales: &[CycNum]) -> QPoly {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = c.clone();
            for (k, s) in e.iter().zip(scales) {
                if *k > 0 {
                    f = &f * &s.pow(*k as i64);
                }
            }
            p.add_term(e.clone(), f);
        }
        p
    }

    /// Adjoins a last variable `l` and substitutes `q_i -> l^{w_i} q_i`.
    pub fn substitute_weights(&self, weights: &[u16]) -> QPoly {
        let mut p = Self::zero(self.nvars + 1);
        for (e, c) in &self.terms {
            let w: u16 = e.iter().zip(weights).map(|(a, b)| a * b).sum();
            let mut f = e.clone();
            f.push(w);
            p.add_term(f, c.clone());
        }
        p
    }

    /// Adjoins a last variable `l` and multiplies by `l^w`.
    pub fn times_new_var_power(&self, w: u16) -> QPoly {
        let mut p = Self::zero(self.nvars + 1);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f.push(w);
            p.add_term(f, c.clone());
        }
        p
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(CycNum::is_rational)
    }

    pub fn fmt_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { names(i) } else { format!("{}^{}", names(i), x) })
                .collect();
            let (neg, mag) = if c.is_negative_rational() { (true, -c) } else { (false, c.clone()) };
            if k > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&format!("{mag}*"));
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&|i| format!("q{}", i + 1)))
    }
}

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::{smallvec, SmallVec};

use super::rational::{q_to_string, Q};

/// Element of the cyclotomic field `Q(zeta_M)`, stored in the power basis
/// `1, zeta, ..., zeta^(phi(M)-1)`.
///
/// Elements with different `M` are combined in `Q(zeta_lcm)`; rationals are
/// always kept at `M = 1`.
#[derive(Clone)]
pub struct CycNum {
    order: u32,
    coeffs: SmallVec<[Q; 2]>,
}

pub fn euler_phi(m: u32) -> usize {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn poly_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (constant term first) of the cyclotomic polynomial `Phi_m`.
pub fn cyclotomic_poly(m: u32) -> Arc<Vec<i64>> {
    assert!(m >= 1);
    if let Some(p) = poly_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if !m.is_multiple_of(d) {
            continue;
        }
        let div = cyclotomic_poly(d);
        let dd = div.len() - 1;
        let mut quot = vec![0i64; num.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = num[i + dd];
            quot[i] = c;
            for (j, dj) in div.iter().enumerate() {
                num[i + j] -= c * dj;
            }
        }
        debug_assert!(num.iter().all(|c| *c == 0));
        num = quot;
    }
    let p = Arc::new(num);
    poly_cache().lock().unwrap().insert(m, p.clone());
    p
}

/// Reduces `a` (any length) modulo the monic `Phi_m`, returning `phi(m)` coefficients.
fn reduce(mut a: Vec<Q>, m: u32) -> SmallVec<[Q; 2]> {
    let phi = cyclotomic_poly(m);
    let deg = phi.len() - 1;
    for i in (deg..a.len()).rev() {
        if a[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut a[i], Q::zero());
        for (j, pj) in phi.iter().enumerate().take(deg) {
            if *pj != 0 {
                a[i - deg + j] -= &c * Q::from_integer(BigInt::from(*pj));
            }
        }
    }
    a.truncate(deg);
    while a.len() < deg {
        a.push(Q::zero());
    }
    a.into_iter().collect()
}

/// `zeta_m^k`.
pub fn root_of_unity(k: i64, m: u32) -> CycNum {
    let e = k.rem_euclid(m as i64) as usize;
    let mut v = vec![Q::zero(); e.max(1) + 1];
    v[e] = Q::one();
    CycNum::normalized(m, reduce(v, m))
}

impl CycNum {
    fn normalized(order: u32, coeffs: SmallVec<[Q; 2]>) -> Self {
        let mut x = CycNum { order, coeffs };
        if x.order > 1 && x.coeffs[1..].iter().all(Zero::is_zero) {
            x.order = 1;
            x.coeffs.truncate(1);
        }
        x
    }

    pub fn from_q(x: Q) -> Self {
        CycNum { order: 1, coeffs: smallvec![x] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_q(Q::from_integer(BigInt::from(n)))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_q(super::rational::q(n, d))
    }

    /// Builds `sum c_i zeta_m^i` from arbitrary many coefficients.
    pub fn from_power_coeffs(m: u32, coeffs: Vec<Q>) -> Self {
        if coeffs.is_empty() {
            return Self::zero();
        }
        Self::normalized(m, reduce(coeffs, m))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_rational(&self) -> bool {
        self.order == 1
    }

    pub fn as_rational(&self) -> Option<&Q> {
        if self.order == 1 {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_one()
    }

    fn lifted(&self, m: u32) -> Vec<Q> {
        let step = (m / self.order) as usize;
        let mut v = vec![Q::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        v
    }

    fn common(&self, other: &Self) -> (u32, SmallVec<[Q; 2]>, SmallVec<[Q; 2]>) {
        if self.order == other.order {
            return (self.order, self.coeffs.clone(), other.coeffs.clone());
        }
        let m = self.order.lcm(&other.order);
        (m, reduce(self.lifted(m), m), reduce(other.lifted(m), m))
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inverse().expect("power of zero").pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.order == 1 {
            return Some(Self::from_q(self.coeffs[0].recip()));
        }
        // Solve (multiplication by self) c = 1 in the power basis.
        let d = self.coeffs.len();
        let mut cols: Vec<SmallVec<[Q; 2]>> = Vec::with_capacity(d);
        for j in 0..d {
            let mut v = vec![Q::zero(); d + j];
            for (i, c) in self.coeffs.iter().enumerate() {
                v[i + j] = c.clone();
            }
            cols.push(reduce(v, self.order));
        }
        let mut a: Vec<Vec<Q>> = (0..d)
            .map(|r| {
                let mut row: Vec<Q> = (0..d).map(|c| cols[c][r].clone()).collect();
                row.push(if r == 0 { Q::one() } else { Q::zero() });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            let inv = a[col][col].recip();
            for x in a[col].iter_mut() {
                *x *= &inv;
            }
            for r in 0..d {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in col..=d {
                        let t = &f * &a[col][c];
                        a[r][c] -= t;
                    }
                }
            }
        }
        Some(Self::normalized(self.order, a.into_iter().map(|row| row[d].clone()).collect()))
    }
}

impl Zero for CycNum {
    fn zero() -> Self {
        Self::from_q(Q::zero())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl One for CycNum {
    fn one() -> Self {
        Self::from_q(Q::one())
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        let (_, a, b) = self.common(other);
        a == b
    }
}

impl Eq for CycNum {}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        if self.order == 1 && rhs.order == 1 {
            return CycNum::from_q(&self.coeffs[0] + &rhs.coeffs[0]);
        }
        let (m, mut a, b) = self.common(rhs);
        for (x, y) in a.iter_mut().zip(b.iter()) {
            *x += y;
        }
        CycNum::normalized(m, a)
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        if self.order == 1 && rhs.order == 1 {
            return CycNum::from_q(&self.coeffs[0] - &rhs.coeffs[0]);
        }
        let (m, mut a, b) = self.common(rhs);
        for (x, y) in a.iter_mut().zip(b.iter()) {
            *x -= y;
        }
        CycNum::normalized(m, a)
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        if self.order == 1 {
            if self.coeffs[0].is_zero() {
                return CycNum::zero();
            }
            let c = &self.coeffs[0];
            return CycNum { order: rhs.order, coeffs: rhs.coeffs.iter().map(|x| x * c).collect() };
        }
        if rhs.order == 1 {
            return rhs * self;
        }
        let (m, a, b) = self.common(rhs);
        let mut prod = vec![Q::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        CycNum::normalized(m, reduce(prod, m))
    }
}

impl<'a> Div<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn div(self, rhs: &CycNum) -> CycNum {
        self * &rhs.inverse().expect("division by zero")
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { order: self.order, coeffs: self.coeffs.iter().map(|x| -x).collect() }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum { (&self).$m(rhs) }
        }
        impl<'a> $tr<CycNum> for &'a CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum { self.$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        if self.order == rhs.order {
            for (x, y) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
                *x += y;
            }
            if self.order > 1 && self.coeffs[1..].iter().all(Zero::is_zero) {
                self.order = 1;
                self.coeffs.truncate(1);
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl AddAssign<CycNum> for CycNum {
    fn add_assign(&mut self, rhs: CycNum) {
        *self += &rhs;
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        *self += &(-rhs);
    }
}

impl MulAssign<&CycNum> for CycNum {
    fn mul_assign(&mut self, rhs: &CycNum) {
        *self = &*self * rhs;
    }
}

impl From<Q> for CycNum {
    fn from(x: Q) -> Self {
        CycNum::from_q(x)
    }
}

impl From<i64> for CycNum {
    fn from(x: i64) -> Self {
        CycNum::from_int(x)
    }
}

impl fmt::Display for CycNum {
    /// Rationals print as `p/q`; otherwise `(c0 + c1*z6 + ...)` with `zM` the
    /// primitive root `exp(2 pi i / M)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 1 {
            return write!(f, "{}", q_to_string(&self.coeffs[0]));
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z = match i {
                0 => String::new(),
                1 => format!("z{}", self.order),
                _ => format!("z{}^{}", self.order, i),
            };
            let s = if i == 0 {
                q_to_string(c)
            } else if c.is_one() {
                z
            } else if (-c).is_one() {
                format!("-{z}")
            } else {
                format!("{}*{z}", q_to_string(c))
            };
            parts.push(s);
        }
        let mut out = String::from("(");
        for (i, p) in parts.iter().enumerate() {
            if i > 0 {
                if let Some(rest) = p.strip_prefix('-') {
                    out.push_str(" - ");
                    out.push_str(rest);
                    continue;
                }
                out.push_str(" + ");
            }
            out.push_str(p);
        }
        out.push(')');
        write!(f, "{out}")
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl CycNum {
    /// Sign used when printing a leading coefficient: rationals keep their sign.
    pub fn is_negative_rational(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_negative()
    }
}

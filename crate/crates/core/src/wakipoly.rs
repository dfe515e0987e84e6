//! Polynomial families in the `q^alpha` entering the free-field currents:
//! the transported pairings `T^a_b`, `U^alpha_b`, `L_{alpha,b}`, `D^k_a`,
//! the matrices `Phi`, `Psi`, the corrections `Lambda`, and the twisted
//! normal-ordering constants `Theta`.

use num_traits::{One, Zero};

use crate::error::{Result, WakiError};
use crate::exactnum::{root_of_unity, CycNum, QPoly};
use crate::liealg::GradedTwistData;
use crate::twistor::SplitConvention;

pub type PolyMatrix = Vec<Vec<QPoly>>;

fn pm_zero(r: usize, c: usize, nv: usize) -> PolyMatrix {
    vec![vec![QPoly::zero(nv); c]; r]
}

fn pm_identity(n: usize, nv: usize) -> PolyMatrix {
    let mut m = pm_zero(n, n, nv);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = QPoly::one(nv);
    }
    m
}

fn pm_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let nv = a[0][0].nvars();
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    let mut out = pm_zero(r, c, nv);
    for i in 0..r {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..c {
                if !b[l][j].is_zero() {
                    out[i][j] = out[i][j].add(&a[i][l].mul(&b[l][j]));
                }
            }
        }
    }
    out
}

fn pm_is_zero(a: &PolyMatrix) -> bool {
    a.iter().flatten().all(QPoly::is_zero)
}

fn pm_scale(a: &PolyMatrix, s: &CycNum) -> PolyMatrix {
    a.iter().map(|r| r.iter().map(|p| p.scale(s)).collect()).collect()
}

fn pm_add(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.add(q)).collect()).collect()
}

/// `sum_k c_k M^k` for nilpotent `M`, stopping at the first vanishing power.
fn nilpotent_series(m: &PolyMatrix, coeff: impl Fn(usize) -> CycNum) -> (PolyMatrix, usize) {
    let n = m.len();
    let nv = m[0][0].nvars();
    let mut power = pm_identity(n, nv);
    let mut acc = pm_scale(&power, &coeff(0));
    let mut k = 0;
    loop {
        power = pm_mul(&power, m);
        k += 1;
        if pm_is_zero(&power) {
            return (acc, k);
        }
        acc = pm_add(&acc, &pm_scale(&power, &coeff(k)));
    }
}

fn factorial(k: usize) -> CycNum {
    let mut f = CycNum::one();
    for i in 2..=k {
        f = &f * &CycNum::from_int(i as i64);
    }
    f
}

#[derive(Clone, Debug)]
pub struct WakiPolys {
    pub nvars: usize,
    /// `T^a_b = <exp(-ad q) T^a, T_b>`, indexed `[a][b]`.
    pub transport: PolyMatrix,
    /// `Phi_alpha^beta`, indexed `[alpha][beta]`.
    pub phi: PolyMatrix,
    /// `Psi_alpha^beta`, the inverse of `Phi`.
    pub psi: PolyMatrix,
    /// `Lambda_{alpha,b}`.
    pub lambda: PolyMatrix,
    /// `(Psi U)^beta_a = sum_alpha Psi_alpha^beta U^alpha_a`, the coefficient of `-p_beta`.
    pub p_coeff: PolyMatrix,
    /// Nilpotency index of `ad_q`.
    pub nilpotency: usize,
}

impl WakiPolys {
    pub fn build(g: &GradedTwistData) -> Result<Self> {
        let dim = g.dim();
        let nv = g.n_minus;
        if nv == 0 {
            return Err(WakiError::InvalidGrading("g_- is trivial".into()));
        }
        // ad_q in joint coordinates: column b is [q, T_b]
        let mut adq = pm_zero(dim, dim, nv);
        for alpha in 0..nv {
            let var = QPoly::var(nv, alpha);
            for b in 0..dim {
                for (c, f) in &g.structure[alpha][b] {
                    adq[*c][b] = adq[*c][b].add(&var.scale(f));
                }
            }
        }
        let (expm, nil) = nilpotent_series(&adq, |k| {
            let s = if k % 2 == 0 { CycNum::one() } else { -CycNum::one() };
            &s / &factorial(k)
        });
        let pair_with_basis = |v: &[QPoly], b: usize| -> QPoly {
            let mut acc = QPoly::zero(nv);
            for (c, p) in v.iter().enumerate() {
                let e = &g.eta[(c, b)];
                if !p.is_zero() && !e.is_zero() {
                    acc = acc.add(&p.scale(e));
                }
            }
            acc
        };
        let apply = |coords: &[CycNum]| -> Vec<QPoly> {
            (0..dim)
                .map(|r| {
                    let mut acc = QPoly::zero(nv);
                    for (c, x) in coords.iter().enumerate() {
                        if !x.is_zero() && !expm[r][c].is_zero() {
                            acc = acc.add(&expm[r][c].scale(x));
                        }
                    }
                    acc
                })
                .collect()
        };
        let mut transport = pm_zero(dim, dim, nv);
        for a in 0..dim {
            let v = apply(&g.eta_inv.col(a));
            for b in 0..dim {
                transport[a][b] = pair_with_basis(&v, b);
            }
        }
        let (f, _) = nilpotent_series(&adq, |k| CycNum::one() / factorial(k + 1));
        let mut phi = pm_zero(nv, nv, nv);
        for alpha in 0..nv {
            for beta in 0..nv {
                phi[alpha][beta] = f[beta][alpha].clone();
            }
        }
        let nmat: PolyMatrix = pm_identity(nv, nv)
            .iter()
            .zip(&phi)
            .map(|(i, p)| i.iter().zip(p).map(|(x, y)| x.sub(y)).collect())
            .collect();
        let (psi, _) = nilpotent_series(&nmat, |_| CycNum::one());

        // Lambda_{alpha,b} = d_alpha Psi_gamma^lambda Phi_lambda^rho <exp(-ad q)[U^gamma, L_rho], T_b>
        let mut brackets: Vec<Vec<Vec<QPoly>>> = Vec::with_capacity(nv);
        for gamma in 0..nv {
            let mut row = Vec::with_capacity(nv);
            for rho in 0..nv {
                let mut coords = vec![CycNum::zero(); dim];
                for (c, x) in &g.structure[g.u_index(gamma)][rho] {
                    coords[*c] = x.clone();
                }
                let v = apply(&coords);
                row.push((0..dim).map(|b| pair_with_basis(&v, b)).collect());
            }
            brackets.push(row);
        }
        let mut lambda = pm_zero(nv, dim, nv);
        for alpha in 0..nv {
            let dpsi: PolyMatrix =
                psi.iter().map(|r| r.iter().map(|p| p.partial(alpha)).collect()).collect();
            let x = pm_mul(&dpsi, &phi);
            for gamma in 0..nv {
                for rho in 0..nv {
                    if x[gamma][rho].is_zero() {
                        continue;
                    }
                    for b in 0..dim {
                        let t = &brackets[gamma][rho][b];
                        if !t.is_zero() {
                            lambda[alpha][b] = lambda[alpha][b].add(&x[gamma][rho].mul(t));
                        }
                    }
                }
            }
        }
        let mut p_coeff = pm_zero(nv, dim, nv);
        for beta in 0..nv {
            for a in 0..dim {
                let mut acc = QPoly::zero(nv);
                for alpha in 0..nv {
                    acc = acc.add(&psi[alpha][beta].mul(&transport[alpha][a]));
                }
                p_coeff[beta][a] = acc;
            }
        }
        Ok(WakiPolys { nvars: nv, transport, phi, psi, lambda, p_coeff, nilpotency: nil })
    }

    /// `U^alpha_b`.
    pub fn u(&self, alpha: usize, b: usize) -> &QPoly {
        &self.transport[alpha][b]
    }

    /// `L_{alpha,b}`.
    pub fn l(&self, g: &GradedTwistData, alpha: usize, b: usize) -> &QPoly {
        &self.transport[g.u_index(alpha)][b]
    }

    /// `D^k_a`.
    pub fn d(&self, g: &GradedTwistData, k: usize, a: usize) -> &QPoly {
        &self.transport[g.d_index(k)][a]
    }

    /// Coefficient of `d q^alpha` in the current `J_a`, without the level:
    /// returns `(sum_beta Phi_alpha^beta L_{beta,a}, Lambda_{alpha,a})`.
    pub fn dq_coeff(&self, g: &GradedTwistData, alpha: usize, a: usize) -> (QPoly, QPoly) {
        let mut acc = QPoly::zero(self.nvars);
        for beta in 0..self.nvars {
            acc = acc.add(&self.phi[alpha][beta].mul(self.l(g, beta, a)));
        }
        (acc, self.lambda[alpha][a].clone())
    }

    /// `Theta_a = -(r_beta / N) d_beta (Psi U)^beta_a`, where `r_beta` is the
    /// representative of the class of `p_beta` fixed by the split convention.
    pub fn theta(&self, g: &GradedTwistData, split: SplitConvention) -> Vec<QPoly> {
        (0..g.dim())
            .map(|a| {
                let mut acc = QPoly::zero(self.nvars);
                for beta in 0..self.nvars {
                    let r = split.representative(g.p_class(beta), g.n);
                    if r == 0 {
                        continue;
                    }
                    let c = CycNum::frac(-r, g.n as i64);
                    acc = acc.add(&self.p_coeff[beta][a].partial(beta).scale(&c));
                }
                acc
            })
            .collect()
    }
}

/// Entry of a polynomial family together with its expected covariance data.
pub struct FamilyEntry {
    pub label: String,
    pub poly: QPoly,
    /// Expected phase class under `q^alpha -> omega^alpha q^alpha`.
    pub class: u32,
    /// Expected weight under `q^alpha -> l^{h^alpha} q^alpha`.
    pub weight: i64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LemmaReport {
    pub checked: usize,
    /// `(lemma, family entry)` pairs that failed.
    pub failures: Vec<(String, String)>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All families with their expected classes and weights.
pub fn families(g: &GradedTwistData, w: &WakiPolys, theta: &[QPoly]) -> Vec<(String, Vec<FamilyEntry>)> {
    let n = g.n;
    let dim = g.dim();
    let nv = g.n_minus;
    let add = |a: u32, b: u32| (a + b) % n;
    let up = |a: usize| g.dual_class(a);
    let low = |a: usize| g.class[a];
    let hup = |a: usize| -g.grade[a];
    let hlow = |a: usize| g.grade[a];
    let mut out = Vec::new();
    let mut fam = Vec::new();
    for a in 0..dim {
        for b in 0..dim {
            fam.push(FamilyEntry {
                label: format!("T[{a}][{b}]"),
                poly: w.transport[a][b].clone(),
                class: add(up(a), low(b)),
                weight: hup(a) + hlow(b),
            });
        }
    }
    out.push(("transport".to_string(), fam));
    let mut fam = Vec::new();
    for al in 0..nv {
        for be in 0..nv {
            for (name, m) in [("Phi", &w.phi), ("Psi", &w.psi)] {
                fam.push(FamilyEntry {
                    label: format!("{name}[{al}][{be}]"),
                    poly: m[al][be].clone(),
                    class: add(low(al), up(be)),
                    weight: hlow(al) + hup(be),
                });
            }
        }
    }
    out.push(("phi_psi".to_string(), fam));
    let mut fam = Vec::new();
    for al in 0..nv {
        for b in 0..dim {
            fam.push(FamilyEntry {
                label: format!("Lambda[{al}][{b}]"),
                poly: w.lambda[al][b].clone(),
                class: add(low(al), low(b)),
                weight: hlow(al) + hlow(b),
            });
            fam.push(FamilyEntry {
                label: format!("PsiU[{al}][{b}]"),
                poly: w.p_coeff[al][b].clone(),
                class: add(up(al), low(b)),
                weight: hup(al) + hlow(b),
            });
        }
    }
    out.push(("lambda".to_string(), fam));
    let fam = (0..dim)
        .map(|a| FamilyEntry {
            label: format!("Theta[{a}]"),
            poly: theta[a].clone(),
            class: low(a),
            weight: hlow(a),
        })
        .collect();
    out.push(("theta".to_string(), fam));
    out
}

/// Twist covariance: `P(omega^alpha q^alpha) = omega^{class} P(q)`.
pub fn check_lemma1(g: &GradedTwistData, fams: &[(String, Vec<FamilyEntry>)]) -> LemmaReport {
    let scales: Vec<CycNum> = (0..g.n_minus).map(|al| root_of_unity(g.q_class(al) as i64, g.n)).collect();
    let mut rep = LemmaReport::default();
    for (_, fam) in fams {
        for e in fam {
            rep.checked += 1;
            let lhs = e.poly.substitute_scale(&scales);
            let rhs = e.poly.scale(&root_of_unity(e.class as i64, g.n));
            if lhs != rhs {
                rep.failures.push(("covariance".into(), e.label.clone()));
            }
        }
    }
    rep
}

/// Grading homogeneity: `P(l^{h^alpha} q^alpha) = l^w P(q)`, with `P = 0` when `w < 0`.
pub fn check_lemma2(g: &GradedTwistData, fams: &[(String, Vec<FamilyEntry>)]) -> LemmaReport {
    let weights: Vec<u16> = (0..g.n_minus).map(|al| g.grade[g.u_index(al)] as u16).collect();
    let mut rep = LemmaReport::default();
    for (_, fam) in fams {
        for e in fam {
            rep.checked += 1;
            let ok = if e.weight < 0 {
                e.poly.is_zero()
            } else {
                e.poly.substitute_weights(&weights) == e.poly.times_new_var_power(e.weight as u16)
            };
            if !ok {
                rep.failures.push(("homogeneity".into(), e.label.clone()));
            }
        }
    }
    rep
}

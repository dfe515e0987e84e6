//! Independent recomputations of the polynomial families.

mod common;

use num_traits::{One, Zero};

use wakimoto_core::currents::Realization;
use wakimoto_core::exactnum::{q, CycNum, Mat, QPoly};

type PM = Vec<Vec<QPoly>>;

fn pm_from(m: &Mat, nv: usize) -> PM {
    (0..m.rows).map(|i| (0..m.cols).map(|j| QPoly::constant(nv, m[(i, j)].clone())).collect()).collect()
}

fn pm_zero(n: usize, nv: usize) -> PM {
    vec![vec![QPoly::zero(nv); n]; n]
}

fn pm_eye(n: usize, nv: usize) -> PM {
    let mut m = pm_zero(n, nv);
    for i in 0..n {
        m[i][i] = QPoly::one(nv);
    }
    m
}

fn pm_mul(a: &PM, b: &PM) -> PM {
    let n = a.len();
    let nv = a[0][0].nvars();
    let mut out = vec![vec![QPoly::zero(nv); b[0].len()]; n];
    for i in 0..n {
        for k in 0..b.len() {
            for j in 0..b[0].len() {
                out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
            }
        }
    }
    out
}

fn pm_add(a: &PM, b: &PM, s: &CycNum) -> PM {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.add(&q.scale(s))).collect()).collect()
}

fn is_zero(a: &PM) -> bool {
    a.iter().flatten().all(QPoly::is_zero)
}

/// `sum_k c_k M^k` for nilpotent `M`.
fn series(m: &PM, c: impl Fn(usize) -> CycNum) -> PM {
    let nv = m[0][0].nvars();
    let mut power = pm_eye(m.len(), nv);
    let mut acc = pm_add(&pm_zero(m.len(), nv), &power, &c(0));
    for k in 1.. {
        power = pm_mul(&power, m);
        if is_zero(&power) {
            break;
        }
        acc = pm_add(&acc, &power, &c(k));
    }
    acc
}

fn factorial(k: usize) -> CycNum {
    (1..=k).fold(CycNum::one(), |f, i| &f * &CycNum::from_int(i as i64))
}

/// Defining-representation matrix of `L_alpha`.
fn l_matrix(r: &Realization, alpha: usize) -> Mat {
    let g = &r.graded;
    let mut e = vec![CycNum::zero(); g.dim()];
    e[g.l_index(alpha)] = CycNum::one();
    g.algebra.matrix_rep.as_ref().unwrap().to_matrix(&g.ambient(&e))
}

/// `M(q) = sum_alpha q^alpha L_alpha` in the defining representation.
fn q_matrix(r: &Realization) -> PM {
    let nv = r.polys.nvars;
    let size = l_matrix(r, 0).rows;
    let mut m = pm_zero(size, nv);
    for alpha in 0..nv {
        let l = pm_from(&l_matrix(r, alpha), nv);
        let var = QPoly::var(nv, alpha);
        for i in 0..size {
            for j in 0..size {
                m[i][j] = m[i][j].add(&l[i][j].mul(&var));
            }
        }
    }
    m
}

/// `(d_alpha e^M) e^{-M} = sum_beta Phi_alpha^beta L_beta`.
fn check_phi(r: &Realization) {
    let nv = r.polys.nvars;
    let m = q_matrix(r);
    let exp = series(&m, |k| CycNum::one() / factorial(k));
    let exp_neg = series(&m, |k| {
        let s = if k % 2 == 0 { CycNum::one() } else { -CycNum::one() };
        &s / &factorial(k)
    });
    assert_eq!(pm_mul(&exp, &exp_neg), pm_eye(m.len(), nv));
    for alpha in 0..nv {
        let d: PM = exp.iter().map(|row| row.iter().map(|p| p.partial(alpha)).collect()).collect();
        let lhs = pm_mul(&d, &exp_neg);
        let mut rhs = pm_zero(m.len(), nv);
        for beta in 0..nv {
            let l = pm_from(&l_matrix(r, beta), nv);
            for i in 0..m.len() {
                for j in 0..m.len() {
                    rhs[i][j] = rhs[i][j].add(&l[i][j].mul(&r.polys.phi[alpha][beta]));
                }
            }
        }
        assert_eq!(lhs, rhs, "Phi row {alpha}");
    }
}

fn bernoulli(n: usize) -> Vec<CycNum> {
    let mut b = vec![CycNum::one()];
    for m in 1..=n {
        let mut acc = CycNum::zero();
        let mut binom = CycNum::one();
        for (k, bk) in b.iter().enumerate() {
            acc += &(&binom * bk);
            // C(m+1, k+1) from C(m+1, k)
            binom = &(&binom * &CycNum::from_int((m + 1 - k) as i64)) / &CycNum::from_int((k + 1) as i64);
        }
        b.push(-&(&acc / &CycNum::from_int(m as i64 + 1)));
    }
    b
}

/// `Psi^T = ad_q / (e^{ad_q} - 1)` on `g_-`, from Bernoulli numbers.
fn check_psi(r: &Realization) {
    let g = &r.graded;
    let nv = r.polys.nvars;
    let mut adq = pm_zero(nv, nv);
    for alpha in 0..nv {
        let mut ea = vec![CycNum::zero(); g.dim()];
        ea[g.l_index(alpha)] = CycNum::one();
        for beta in 0..nv {
            let mut eb = vec![CycNum::zero(); g.dim()];
            eb[g.l_index(beta)] = CycNum::one();
            let br = g.joint_coords(&g.algebra.bracket(&g.ambient(&ea), &g.ambient(&eb)));
            for gamma in 0..nv {
                adq[gamma][beta] = adq[gamma][beta].add(&QPoly::var(nv, alpha).scale(&br[g.l_index(gamma)]));
            }
        }
    }
    let b = bernoulli(nv + 2);
    let gser = series(&adq, |k| &b[k] / &factorial(k));
    for alpha in 0..nv {
        for beta in 0..nv {
            assert_eq!(r.polys.psi[alpha][beta], gser[beta][alpha], "Psi[{alpha}][{beta}]");
        }
    }
    assert_eq!(pm_mul(&r.polys.phi, &r.polys.psi), pm_eye(nv, nv));
}

#[test]
fn bernoulli_numbers() {
    let b = bernoulli(6);
    assert_eq!(b[1], CycNum::frac(-1, 2));
    assert_eq!(b[2], CycNum::frac(1, 6));
    assert_eq!(b[4], CycNum::frac(-1, 30));
    assert!(b[3].is_zero() && b[5].is_zero());
}

#[test]
fn phi_psi_sl2_sl3_sl4() {
    for (name, k) in [("sl2_untwisted", "1"), ("sl3_inner", "1"), ("sl4_nu", "1"), ("sl4_mu", "1")] {
        let r = common::realization(name, k);
        check_phi(&r);
        check_psi(&r);
    }
}

#[test]
fn transport_of_sigma_plus() {
    // exp(-ad q) sigma+ = sigma+ + q sigma3 - q^2 sigma-
    let r = common::realization("sl2_untwisted", "1");
    let g = &r.graded;
    let alg = &g.algebra;
    assert_eq!(g.ambient(&[CycNum::one(), CycNum::zero(), CycNum::zero()]), alg.from_entries(&[(2, 1, q(1, 1))]).unwrap());
    let sp = alg.from_entries(&[(1, 2, q(1, 1))]).unwrap();
    let s3 = alg.from_entries(&[(1, 1, q(1, 1)), (2, 2, q(-1, 1))]).unwrap();
    let sm = alg.from_entries(&[(2, 1, q(1, 1))]).unwrap();
    // transport[a] carries the dual element T^a; the dual of L_1 = sigma- is sigma+
    let u = g.l_index(0);
    assert_eq!(g.dual[u], sp);
    let qv = QPoly::var(1, 0);
    for b in 0..3 {
        let mut eb = vec![CycNum::zero(); 3];
        eb[b] = CycNum::one();
        let tb = g.ambient(&eb);
        let expected = QPoly::constant(1, alg.pair(&sp, &tb))
            .add(&qv.scale(&alg.pair(&s3, &tb)))
            .sub(&qv.mul(&qv).scale(&alg.pair(&sm, &tb)));
        assert_eq!(r.polys.transport[u][b], expected, "component {b}");
    }
}

use num_traits::{One, Zero};
use proptest::prelude::*;

use wakimoto_core::exactnum::{binomial, parse_q, q, q_to_string, root_of_unity, CycNum, QPoly};

fn small_q() -> impl Strategy<Value = CycNum> {
    (-20i64..20, 1i64..7).prop_map(|(n, d)| CycNum::frac(n, d))
}

/// Random element of Q(zeta_m) for small m, as a combination of roots of unity.
fn cyc() -> impl Strategy<Value = CycNum> {
    (prop::sample::select(vec![1u32, 2, 3, 4, 6, 8, 12]), prop::collection::vec(small_q(), 1..5)).prop_map(|(m, cs)| {
        let mut acc = CycNum::zero();
        for (k, c) in cs.iter().enumerate() {
            acc += &(&root_of_unity(k as i64, m) * c);
        }
        acc
    })
}

proptest! {
    #[test]
    fn field_axioms(a in cyc(), b in cyc(), c in cyc()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, CycNum::zero());
        prop_assert_eq!(&a + &(-&a), CycNum::zero());
    }

    #[test]
    fn inverses(a in cyc()) {
        prop_assume!(!a.is_zero());
        let inv = a.inverse().unwrap();
        prop_assert!((&a * &inv).is_one());
        prop_assert_eq!(&(&a / &a), &CycNum::one());
    }

    #[test]
    fn roots_of_unity(k in -30i64..30, m in 1u32..13) {
        let z = root_of_unity(k, m);
        prop_assert!(z.pow(m as i64).is_one());
        prop_assert_eq!(z.pow(-1), root_of_unity(-k, m));
        // zeta_{lm}^{lk} = zeta_m^k
        prop_assert_eq!(root_of_unity(3 * k, 3 * m), z);
    }

    #[test]
    fn substitution_is_a_homomorphism(
        ca in prop::collection::vec((prop::collection::vec(0u16..3, 3), -5i64..5), 0..5),
        cb in prop::collection::vec((prop::collection::vec(0u16..3, 3), -5i64..5), 0..5),
        ks in prop::collection::vec(0i64..6, 3),
    ) {
        let mk = |t: &Vec<(Vec<u16>, i64)>| QPoly::from_terms(3, t.iter().map(|(e, c)| (e.clone(), CycNum::from_int(*c))));
        let (a, b) = (mk(&ca), mk(&cb));
        let scales: Vec<CycNum> = ks.iter().map(|&k| root_of_unity(k, 6)).collect();
        let s = |p: &QPoly| p.substitute_scale(&scales);
        prop_assert_eq!(s(&a.mul(&b)), s(&a).mul(&s(&b)));
        prop_assert_eq!(s(&a.add(&b)), s(&a).add(&s(&b)));
        // Leibniz rule
        for i in 0..3 {
            prop_assert_eq!(a.mul(&b).partial(i), a.partial(i).mul(&b).add(&a.mul(&b.partial(i))));
        }
    }

    #[test]
    fn weight_substitution_detects_degree(e in prop::collection::vec(0u16..4, 2), w in prop::collection::vec(0u16..3, 2)) {
        let p = QPoly::from_terms(2, [(e.clone(), CycNum::one())]);
        let deg = e[0] * w[0] + e[1] * w[1];
        prop_assert_eq!(p.substitute_weights(&w), p.times_new_var_power(deg));
    }
}

#[test]
fn mixed_orders_lift() {
    // i * zeta_3 lives in Q(zeta_12); zeta_4^2 = -1 is rational
    let i = root_of_unity(1, 4);
    let w = root_of_unity(1, 3);
    assert_eq!((&i * &w).pow(12), CycNum::one());
    assert_eq!(&i * &i, CycNum::from_int(-1));
    assert!((&i * &i).is_rational());
    // 1 + zeta_3 + zeta_3^2 = 0
    assert!((&(&CycNum::one() + &w) + &w.pow(2)).is_zero());
}

#[test]
fn rationals() {
    assert_eq!(parse_q("-6/4").unwrap(), q(-3, 2));
    assert_eq!(q_to_string(&q(5, 7)), "5/7");
    assert!(parse_q("1/0").is_err());
    assert!(parse_q("abc").is_err());
    assert_eq!(binomial(&q(1, 2), 2), q(-1, 8));
}

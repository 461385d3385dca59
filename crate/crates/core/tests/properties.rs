//! Randomized invariants of the exact layers.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use quadra::differential::random_allowed;
use quadra::finite_form::milgram_check;
use quadra::homotopy::{
    dold_kan_isomorphism, functor_class_group, gamma, normalize, random_chain_complex, random_two_term,
};
use quadra::lattice::{characteristic_vector, quadratic_refinement, refinement_defect, van_der_blij_check};
use quadra::linalg::{smith_normal_form, IntMatrix};
use quadra::rng::{random_cochain, trial_rng};
use quadra::selftest::{random_lattice, random_unimodular_lattice};
use quadra::series::FormalSeries;
use quadra::topology::{builtin, cup, IntCochain, SimplicialComplex};

fn int_matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-12i64..=12, c), r)
            .prop_map(|rows| IntMatrix::from_i64_rows(&rows).unwrap())
    })
}

fn complex_name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["s2", "rp2", "t2", "rp3", "cp2"])
}

fn complex(name: &str) -> Arc<SimplicialComplex> {
    builtin(name).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_factors(a in int_matrix(5)) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul_mat(&a).unwrap().mul_mat(&s.v).unwrap(), s.d.clone());
        prop_assert_eq!(s.u.mul_mat(&s.u_inv).unwrap(), IntMatrix::identity(a.rows()));
        prop_assert_eq!(s.v.mul_mat(&s.v_inv).unwrap(), IntMatrix::identity(a.cols()));
        let divs = s.elementary_divisors();
        for w in divs.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j {
                    prop_assert!(s.d[(i, j)].is_zero());
                }
            }
        }
    }

    #[test]
    fn refinement_is_quadratic(seed in any::<u64>(), xs in prop::collection::vec(-6i64..=6, 12)) {
        let l = random_lattice(&mut trial_rng(seed, 0), 6);
        let lambda = characteristic_vector(&l);
        let n = l.rank();
        let x: Vec<BigInt> = xs[..n].iter().map(|&v| v.into()).collect();
        let y: Vec<BigInt> = xs[6..6 + n].iter().map(|&v| v.into()).collect();
        prop_assert_eq!(refinement_defect(&l, &lambda, &x, &y).unwrap(), l.pairing(&x, &y).unwrap());
        let reflected: Vec<BigInt> = lambda.coords().iter().zip(&x).map(|(a, b)| a - b).collect();
        prop_assert_eq!(
            quadratic_refinement(&l, &lambda, &reflected).unwrap(),
            quadratic_refinement(&l, &lambda, &x).unwrap()
        );
    }

    #[test]
    fn milgram_holds(seed in any::<u64>()) {
        let l = random_lattice(&mut trial_rng(seed, 1), 4);
        let v = milgram_check(&l, &characteristic_vector(&l)).unwrap();
        prop_assert!(v.holds);
        prop_assert!(v.gauss.residual < 1e-6);
    }

    #[test]
    fn van_der_blij_on_unimodular(seed in any::<u64>()) {
        let l = random_unimodular_lattice(&mut trial_rng(seed, 2), 6).unwrap();
        prop_assert!(van_der_blij_check(&l, &characteristic_vector(&l)).unwrap().holds());
    }

    #[test]
    fn coboundary_squares_to_zero(name in complex_name(), seed in any::<u64>(), k in 0usize..3) {
        let cx = complex(name);
        let c: IntCochain = random_cochain(&mut trial_rng(seed, 3), &cx, k, 5);
        prop_assert!(c.coboundary().coboundary().is_zero());
    }

    #[test]
    fn cup_leibniz(name in complex_name(), seed in any::<u64>(), p in 0usize..3, q in 0usize..3) {
        let cx = complex(name);
        prop_assume!(p + q < cx.dim());
        let mut rng = trial_rng(seed, 4);
        let a: IntCochain = random_cochain(&mut rng, &cx, p, 3);
        let b: IntCochain = random_cochain(&mut rng, &cx, q, 3);
        let lhs = cup(&a, &b).unwrap().coboundary();
        let first = cup(&a.coboundary(), &b).unwrap();
        let second = cup(&a, &b.coboundary()).unwrap();
        let rhs = if p % 2 == 0 { first.add(&second) } else { first.sub(&second) }.unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
    }

    #[test]
    fn differential_squares_to_zero(name in complex_name(), seed in any::<u64>(), q in 1usize..4, k in 0usize..3) {
        let cx = complex(name);
        prop_assume!(k + 2 <= cx.dim());
        let x = random_allowed(&mut trial_rng(seed, 5), &cx, q, k).unwrap();
        let dd = x.d().unwrap().d().unwrap();
        prop_assert!(dd.c().is_zero());
        prop_assert!(dd.h().is_none_or(|h| h.is_zero()));
        prop_assert!(dd.omega().is_zero());
    }

    #[test]
    fn series_square_root(tail in prop::collection::vec((-9i64..=9, 1i64..=6), 8)) {
        let mut coeffs = vec![BigRational::one()];
        coeffs.extend(tail.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())));
        let s = FormalSeries::new(8, &coeffs);
        let r = s.sqrt().unwrap();
        prop_assert_eq!(r.mul(&r).unwrap(), s.clone());
        prop_assert_eq!(s.mul(&s.inverse().unwrap()).unwrap(), FormalSeries::one(8));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normalization_inverts_gamma(seed in any::<u64>()) {
        let c = random_chain_complex(&mut trial_rng(seed, 6), 3, 3).unwrap();
        prop_assert!(dold_kan_isomorphism(&c).is_ok());
        let back = normalize(gamma(&c, None).unwrap().group()).unwrap();
        for n in 0..=c.top() {
            prop_assert_eq!(back.complex().homology(n).unwrap(), c.homology(n).unwrap());
        }
    }

    #[test]
    fn class_group_is_additive(seed in any::<u64>(), free in any::<bool>()) {
        let mut rng = trial_rng(seed, 7);
        let a = random_two_term(&mut rng, 60, free).unwrap();
        let b = random_two_term(&mut rng, 60, free).unwrap();
        let sum = functor_class_group(&a.direct_sum(&b).unwrap()).unwrap().description();
        let parts = functor_class_group(&a).unwrap().description()
            .direct_sum(&functor_class_group(&b).unwrap().description());
        prop_assert_eq!(sum, parts);
    }
}

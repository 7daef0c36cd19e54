mod common;

use nalgebra::DMatrix;
use ncplush::calculus::{
    complex_hessian, full_derivative, full_hessian, pure_x_hessian, pure_xt_hessian,
};
use ncplush::freealg::{evaluate, Letter};
use ncplush::mmr::build_mmr;
use ncplush::wed::{antiderivative, is_complex_hessian};
use ncplush::{MatrixTuple, Monomial, NcPoly, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;

const G: usize = 2;

fn letter() -> impl Strategy<Value = Letter> {
    (1..=G as u32, any::<bool>()).prop_map(|(i, t)| if t { Letter::xt(i) } else { Letter::x(i) })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn poly_with(max_len: usize) -> impl Strategy<Value = NcPoly> {
    prop::collection::vec(
        (prop::collection::vec(letter(), 0..=max_len), rational()),
        0..5,
    )
    .prop_map(|terms| {
        let mut p = NcPoly::zero(G);
        for (w, c) in terms {
            p.add_term(Monomial::new(w), c);
        }
        p
    })
}

fn poly() -> impl Strategy<Value = NcPoly> {
    poly_with(3)
}

fn tuple(n: usize) -> impl Strategy<Value = MatrixTuple> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, n * n), G).prop_map(move |ms| {
        MatrixTuple::new(ms.into_iter().map(|v| DMatrix::from_vec(n, n, v)).collect()).unwrap()
    })
}

fn close(a: &DMatrix<f64>, b: &DMatrix<f64>) -> bool {
    (a - b).amax() <= 1e-9 * (1.0 + a.amax().max(b.amax()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &NcPoly::one(G), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn involution_is_an_anti_automorphism(a in poly(), b in poly()) {
        prop_assert_eq!((&a * &b).involution(), &b.involution() * &a.involution());
        prop_assert_eq!((&a + &b).involution(), &a.involution() + &b.involution());
        prop_assert_eq!(a.involution().involution(), a.clone());
        prop_assert!((&a + &a.involution()).is_symmetric());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(), b in poly(), x in tuple(3)) {
        let ea = evaluate(&a, &x, None).unwrap();
        let eb = evaluate(&b, &x, None).unwrap();
        prop_assert!(close(&evaluate(&(&a * &b), &x, None).unwrap(), &(&ea * &eb)));
        prop_assert!(close(&evaluate(&(&a + &b), &x, None).unwrap(), &(&ea + &eb)));
        prop_assert!(close(&evaluate(&a.involution(), &x, None).unwrap(), &ea.transpose()));
    }

    #[test]
    fn printing_round_trips(a in poly()) {
        prop_assert_eq!(NcPoly::parse(&a.to_string(), G).unwrap(), a);
    }

    #[test]
    fn derivatives_are_linear(a in poly(), b in poly(), c in rational()) {
        let combo = &a + &b.scale(&c);
        prop_assert_eq!(
            full_derivative(&combo).unwrap(),
            &full_derivative(&a).unwrap() + &full_derivative(&b).unwrap().scale(&c)
        );
        prop_assert_eq!(
            complex_hessian(&combo).unwrap(),
            &complex_hessian(&a).unwrap() + &complex_hessian(&b).unwrap().scale(&c)
        );
    }

    #[test]
    fn derivatives_preserve_symmetry(a in poly()) {
        let s = &a + &a.involution();
        prop_assert!(full_derivative(&s).unwrap().is_symmetric());
        prop_assert!(complex_hessian(&s).unwrap().is_symmetric());
        prop_assert!(full_hessian(&s).unwrap().is_symmetric());
    }

    #[test]
    fn hessian_splits(a in poly_with(4)) {
        let two = Rational::from_integer(2.into());
        let rhs = &(&complex_hessian(&a).unwrap().scale(&two) + &pure_x_hessian(&a).unwrap())
            + &pure_xt_hessian(&a).unwrap();
        prop_assert_eq!(full_hessian(&a).unwrap(), rhs);
    }

    #[test]
    fn every_hessian_is_recognized(a in poly_with(4)) {
        let q = complex_hessian(&a).unwrap();
        prop_assert!(is_complex_hessian(&q).holds());
    }

    #[test]
    fn antiderivative_inverts_derivative(a in poly_with(4)) {
        let no_const = a.filter(|m| !m.is_one());
        prop_assert_eq!(antiderivative(&full_derivative(&a).unwrap()).unwrap(), no_const);
    }

    #[test]
    fn middle_matrix_reproduces_hessian(a in poly_with(4)) {
        let s = &a + &a.involution();
        let q = complex_hessian(&s).unwrap();
        let r = build_mmr(&q).unwrap();
        prop_assert!(r.middle.is_symmetric());
        prop_assert_eq!(r.expand().unwrap(), q);
    }
}

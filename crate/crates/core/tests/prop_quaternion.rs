mod common;

use common::strategies::*;
use proptest::prelude::*;
use quatcramer::{Quaternion, Rational};

proptest! {
    #[test]
    fn conjugation_reverses_products(p in quaternion(), q in quaternion()) {
        prop_assert_eq!((&p * &q).conj(), &q.conj() * &p.conj());
    }

    #[test]
    fn inverse_is_two_sided(q in nonzero_quaternion()) {
        let inv = q.inv().unwrap();
        prop_assert_eq!(&q * &inv, Quaternion::one());
        prop_assert_eq!(&inv * &q, Quaternion::one());
    }

    #[test]
    fn rational_division_is_exact(p in quaternion(), q in nonzero_quaternion()) {
        prop_assert_eq!(&(&p * &q) * &q.inv().unwrap(), p);
    }

    #[test]
    fn float_inverse_within_tolerance(q in float_quaternion()) {
        prop_assume!(q.abs_f64() > 1e-3);
        let inv = q.inv().unwrap();
        for r in [&q * &inv, &inv * &q] {
            let err = (&r - &Quaternion::one()).abs_f64();
            prop_assert!(err <= 1e-14, "error {err}");
        }
    }

    #[test]
    fn norm_is_multiplicative(p in quaternion(), q in quaternion()) {
        prop_assert_eq!((&p * &q).norm2(), p.norm2() * q.norm2());
    }

    #[test]
    fn display_round_trips(q in quaternion()) {
        let back: Quaternion<Rational> = q.to_string().parse().unwrap();
        prop_assert_eq!(back, q);
    }

    #[test]
    fn multiplication_is_associative(p in quaternion(), q in quaternion(), r in quaternion()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
    }
}

#[test]
fn zero_has_no_inverse() {
    assert!(Quaternion::<Rational>::zero().inv().is_err());
}

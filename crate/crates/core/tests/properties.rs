//! Property tests: ring laws of the two-variable series arithmetic,
//! inversion round-trips, theta symmetries, and multiplicativity of the
//! extended quadratic symbol.

use mockjac_core::classical::theta_mr;
use mockjac_core::qf::{hurwitz_class_number, kronecker_symbol};
use mockjac_core::rational::rat;
use mockjac_core::series::{Convention, QYSeries, SeriesBox};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

const FP: Convention = Convention::FinitePolynomial;

fn poly(terms: Vec<(i64, i64, i64)>) -> QYSeries {
    let mut s = QYSeries::zero(1, 1, FP, SeriesBox::complete(rat(8)));
    for (q, y, c) in terms {
        s.add_term(q, y, rat(c));
    }
    s
}

fn poly_strategy() -> impl Strategy<Value = QYSeries> {
    prop::collection::vec((0i64..6, -3i64..=3, -5i64..=5), 0..8).prop_map(poly)
}

proptest! {
    #[test]
    fn addition_commutes(a in poly_strategy(), b in poly_strategy()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
    }

    #[test]
    fn multiplication_commutes(a in poly_strategy(), b in poly_strategy()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn multiplication_associates(
        a in poly_strategy(),
        b in poly_strategy(),
        c in poly_strategy(),
    ) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiplication_distributes(
        a in poly_strategy(),
        b in poly_strategy(),
        c in poly_strategy(),
    ) {
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn subtraction_cancels(a in poly_strategy()) {
        let z = a.sub(&a).unwrap();
        prop_assert!(z.iter_terms().next().is_none());
    }

    /// Units `1 + q (...)` invert exactly: the product with the inverse is
    /// 1 on the inverse's claimed box.
    #[test]
    fn unit_inversion_round_trips(tail in prop::collection::vec((1i64..6, -6i64..=6), 0..6)) {
        let mut a = QYSeries::zero(1, 1, FP, SeriesBox::complete(rat(8)));
        a.add_term(0, 0, rat(1));
        for (q, c) in tail {
            a.add_term(q, 0, rat(c));
        }
        let inv = a.invert(0).unwrap();
        let product = a.mul(&inv).unwrap();
        let mut terms = product.iter_terms();
        let (q0, y0, c0) = terms.next().unwrap();
        prop_assert_eq!((q0, y0, c0.clone()), (rat(0), rat(0), rat(1)));
        prop_assert!(terms.next().is_none());
    }

    /// `y -> 1/y` swaps the theta components `r` and `-r`.
    #[test]
    fn theta_component_reflection(m in 1i64..5, r in -6i64..=6) {
        let plus = theta_mr(m, r, 6, FP);
        let minus = theta_mr(m, -r, 6, FP).invert_y();
        prop_assert_eq!(plus, minus);
    }

    /// Theta components depend on `r` only mod `2m`.
    #[test]
    fn theta_component_periodicity(m in 1i64..5, r in -4i64..=4) {
        prop_assert_eq!(theta_mr(m, r, 6, FP), theta_mr(m, r + 2 * m, 6, FP));
    }

    /// Class numbers vanish off discriminants, are positive on them, and
    /// have denominator dividing 6.
    #[test]
    fn class_number_support_and_denominator(d in -600i64..0) {
        let h = hurwitz_class_number(d);
        if d.rem_euclid(4) <= 1 {
            prop_assert!(h.is_positive(), "H({}) = {}", d, h);
            prop_assert!((h * rat(6)).is_integer());
        } else {
            prop_assert!(h.is_zero());
        }
    }

    /// Complete multiplicativity of the extended quadratic symbol in the
    /// lower argument.
    #[test]
    fn kronecker_multiplicative(a in -50i64..50, m in 1i64..40, n in 1i64..40) {
        prop_assert_eq!(
            kronecker_symbol(a, m * n),
            kronecker_symbol(a, m) * kronecker_symbol(a, n)
        );
    }
}

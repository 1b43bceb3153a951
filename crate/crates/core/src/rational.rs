//! Exact rational scalars used for every series coefficient.

use num::BigRational;
use num_bigint::BigInt;

/// Coefficient field of all expansions. Always stored reduced with a
/// positive denominator (`BigRational` maintains both invariants).
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n / d`, `d != 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// True when the rational is an integer.
pub fn is_integer(x: &Rat) -> bool {
    x.is_integer()
}

/// Integer value of an integral rational, if it fits in i64.
pub fn to_i64(x: &Rat) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    num_traits::ToPrimitive::to_i64(x.numer())
}

/// Compact rendering: integers without denominator, otherwise `n/d`.
pub fn display_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_storage() {
        let x = ratio(6, -4);
        assert_eq!(x, ratio(-3, 2));
        assert!(x.denom() > &BigInt::from(0));
    }

    #[test]
    fn integer_detection() {
        assert_eq!(to_i64(&ratio(14, 7)), Some(2));
        assert_eq!(to_i64(&ratio(1, 3)), None);
    }
}

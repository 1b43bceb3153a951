//! Mock Jacobi forms of index 1 and 3 and the class-number identity that
//! connects them.
//!
//! Everything here lives in the annulus `|q| < |y| < 1`. The central
//! objects are the meromorphic Jacobi forms `psi1` (weight 1, index 1) and
//! `psi3` (weight 1, index 3), built from Jacobi theta functions, the
//! Dedekind eta function and the elliptic-genus Weierstrass combination.
//! Subtracting the averaged polar part from `psi1` leaves a finite part
//! whose coefficient at `q^n y^s` depends only on the discriminant
//! `s^2 - 4n`, and equals `24 H(s^2 - 4n)`; [`finite_part_table`] extracts
//! and cross-checks that table.
//!
//! All denominators are cleared with the rationalized first theta function
//! `S = i theta_1` (see the `classical` module), using
//! `1 / (y - 2 + 1/y) = y / (1 - y)^2 = sum_{k>=1} k y^k` for its zero at
//! `y = 1`; products of the remaining factors `(1 - q^n y^{+-1})^{-2}` are
//! expanded termwise, so no general series inversion is needed on the
//! two-variable side.

use num_traits::Zero;

use crate::classical::{
    averaging_operator, euler_product, jacobi_theta1_rationalized, jacobi_theta2, jacobi_theta3,
    jacobi_theta4, kernel_neg_y_over_one_plus_y_sq, kernel_y_over_one_minus_y_sq,
};
use crate::qf::hurwitz_class_number;
use crate::rational::{rat, Rat};
use crate::series::{Convention, QYSeries, SeriesBox, SeriesError};
use crate::table::JacobiCoeffTable;

const ANN: Convention = Convention::AnnulusQltYlt1;

/// Truncation parameters for the annulus expansions: exactness in `q`
/// below `q_max` and a working `y`-window `[-y_window, y_window]` which
/// products erode from both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BridgeParams {
    pub q_max: i64,
    pub y_window: i64,
}

impl Default for BridgeParams {
    fn default() -> Self {
        BridgeParams { q_max: 24, y_window: 64 }
    }
}

/// `y / (1 - y)^2 = sum_{k>=1} k y^k`, exact on `[-w, w]`.
fn expansion_kernel(p: BridgeParams) -> QYSeries {
    let bx = SeriesBox::windowed(rat(p.q_max), -p.y_window, p.y_window);
    let mut g = QYSeries::zero(1, 1, ANN, bx);
    for k in 1..=p.y_window {
        g.set_term(0, k, rat(k));
    }
    g
}

/// `(1 - q^n y^sign)^{-2} = sum_{k>=0} (k+1) q^{nk} y^{sign k}`, complete.
fn inverse_square_factor(n: i64, sign: i64, q_max: i64) -> QYSeries {
    let mut s = QYSeries::zero(1, 1, ANN, SeriesBox::complete(rat(q_max)));
    let mut k = 0;
    while n * k < q_max {
        s.set_term(n * k, sign * k, rat(k + 1));
        k += 1;
    }
    s
}

/// `prod_{n>=1} (1 - q^n y^sign)^{-2}`, complete below `q_max`.
fn inverse_square_product(sign: i64, q_max: i64) -> QYSeries {
    let mut s = QYSeries::one(ANN, SeriesBox::complete(rat(q_max)));
    for n in 1..q_max {
        s = s.mul(&inverse_square_factor(n, sign, q_max)).expect("complete product");
    }
    s
}

/// Weight-0 index-1 Weierstrass combination
/// `4 (ab + bc + ca)` with `x_j = theta_j(tau,z)^2 / theta_j(tau,0)^2` for
/// `j = 2, 3, 4`; its elliptic specialization `z = 0` is the constant 12.
/// Complete, with integer exponent grids.
pub fn weierstrass_combination(q_max: i64) -> Result<QYSeries, SeriesError> {
    let mut quotients = Vec::new();
    for theta in [jacobi_theta2, jacobi_theta3, jacobi_theta4] {
        let t = theta(q_max, ANN);
        let num = t.mul(&t)?;
        let null_sq = num.eval_y_one()?;
        quotients.push(num.mul(&null_sq.invert(0)?)?);
    }
    let [a, b, c] = &quotients[..] else { unreachable!() };
    let mut z = a.mul(b)?.add(&b.mul(c)?)?.add(&c.mul(a)?)?.scale(&rat(4));
    z.reduce_grids();
    Ok(z)
}

/// Weight 1, index 1: `psi1 = eta^6 Z / theta_1^2 = -eta^6 Z / S^2`,
/// expanded in the annulus. The eta and theta prefactors cancel to
/// `-Z * prod(1-q^n)^4 * [y/(1-y)^2] * prod(1-q^n y)^{-2} (1-q^n/y)^{-2}`.
pub fn psi_index1(p: BridgeParams) -> Result<QYSeries, SeriesError> {
    let z = weierstrass_combination(p.q_max)?;
    let f4 = euler_product(1, 4, p.q_max, ANN);
    let complete_part = z
        .mul(&f4)?
        .mul(&inverse_square_product(1, p.q_max))?
        .mul(&inverse_square_product(-1, p.q_max))?;
    Ok(expansion_kernel(p).mul(&complete_part)?.scale(&rat(-1)))
}

/// Weight 1, index 3: `psi3 = -S(tau, 2z) eta^3 Z / S(tau, z)^2`. The
/// prefactors cancel to
/// `-(y - 1/y) prod(1-q^n)^2 (1-q^n y^2)(1-q^n y^{-2}) * Z * [y/(1-y)^2]
///  * prod(1-q^n y)^{-2} (1-q^n/y)^{-2}`.
pub fn psi_index3(p: BridgeParams) -> Result<QYSeries, SeriesError> {
    let bx = SeriesBox::complete(rat(p.q_max));
    let mut lead = QYSeries::zero(1, 1, ANN, bx.clone());
    lead.set_term(0, 1, rat(1));
    lead.set_term(0, -1, rat(-1));
    let mut complete_part = lead.mul(&euler_product(1, 2, p.q_max, ANN))?;
    for n in 1..p.q_max {
        let mut up = QYSeries::one(ANN, complete_part.series_box().clone());
        up.set_term(n, 2, rat(-1));
        let mut down = QYSeries::one(ANN, complete_part.series_box().clone());
        down.set_term(n, -2, rat(-1));
        complete_part = complete_part.mul(&up)?.mul(&down)?;
    }
    complete_part = complete_part
        .mul(&weierstrass_combination(p.q_max)?)?
        .mul(&inverse_square_product(1, p.q_max))?
        .mul(&inverse_square_product(-1, p.q_max))?;
    Ok(expansion_kernel(p).mul(&complete_part)?.scale(&rat(-1)))
}

/// Polar part of `psi1`: `-12` times the index-1 average of
/// `y / (1 - y)^2`.
pub fn polar_part_index1(p: BridgeParams) -> QYSeries {
    averaging_operator(1, p.q_max, p.y_window, kernel_y_over_one_minus_y_sq).scale(&rat(-12))
}

/// Appell-type corrections `mu^{(1),k}` for `k = 0, 1`: half the sum and
/// difference of the averages of the two order-two kernels.
pub fn mu_series(k: u8, p: BridgeParams) -> QYSeries {
    assert!(k < 2);
    let a = averaging_operator(1, p.q_max, p.y_window, kernel_y_over_one_minus_y_sq);
    let b = averaging_operator(1, p.q_max, p.y_window, kernel_neg_y_over_one_plus_y_sq);
    let sign = if k == 0 { rat(1) } else { rat(-1) };
    a.add(&b.scale(&sign)).expect("same box").scale(&crate::rational::ratio(1, 2))
}

/// `psi1 + 12 mu^{(1),0} + 12 mu^{(1),1}`: the polar part cancels and a
/// holomorphic series with theta-decomposable coefficients remains.
pub fn identity_series(p: BridgeParams) -> Result<QYSeries, SeriesError> {
    let psi = psi_index1(p)?;
    let twelve = rat(12);
    psi.add(&mu_series(0, p).scale(&twelve))?
        .add(&mu_series(1, p).scale(&twelve))
}

/// Extract the discriminant-indexed coefficient table of the finite part:
/// entry `d` holds the coefficient of `q^n y^s` for any `(n, s)` with
/// `s^2 - 4n = d`. Errors if a coefficient violates `s^2 <= 4n`, if two
/// representatives of the same discriminant disagree, or if some
/// discriminant down to `d_min` has no representative inside the exact
/// box.
pub fn finite_part_table(p: BridgeParams, d_min: i64) -> Result<JacobiCoeffTable, SeriesError> {
    let fin = identity_series(p)?;
    finite_part_table_of(&fin, d_min)
}

/// As [`finite_part_table`], from an already computed identity series.
pub fn finite_part_table_of(
    fin: &QYSeries,
    d_min: i64,
) -> Result<JacobiCoeffTable, SeriesError> {
    let bx = fin.series_box().clone();
    let n_max = num_traits::ToPrimitive::to_i64(bx.q_max.ceil().numer()).unwrap() - 1;
    // Support check over the whole box.
    for (qe, ye, c) in fin.iter_terms() {
        if c.is_zero() {
            continue;
        }
        let n = &qe * rat(4);
        let s2 = &ye * &ye;
        if s2 > n {
            return Err(SeriesError::SupportViolation(format!(
                "nonzero coefficient at q-exponent {qe}, y-exponent {ye} outside s^2 <= 4n"
            )));
        }
    }
    let mut table = JacobiCoeffTable::zeros(d_min);
    for d in d_min..=0 {
        if !crate::table::is_discriminant(d) {
            continue;
        }
        let mut value: Option<Rat> = None;
        let mut s = d.rem_euclid(2);
        loop {
            let n = (s * s - d) / 4;
            if n > n_max {
                break;
            }
            for sgn in [1i64, -1] {
                let se = sgn * s;
                if !bx.contains(&rat(n), &rat(se)) {
                    continue;
                }
                let c = fin.coeff_int(n, se)?;
                match &value {
                    None => value = Some(c),
                    Some(v) if *v == c => {}
                    Some(v) => {
                        return Err(SeriesError::SupportViolation(format!(
                            "inconsistent coefficients for discriminant {d}: {v} vs {c} at (n, s) = ({n}, {se})"
                        )))
                    }
                }
                if s == 0 {
                    break;
                }
            }
            s += 2;
        }
        match value {
            Some(v) => table.set(d, v),
            None => {
                return Err(SeriesError::SupportViolation(format!(
                    "no representative of discriminant {d} inside the exact box"
                )))
            }
        }
    }
    Ok(table)
}

/// Verify `S(tau, 2z) * psi1 = eta^3 * psi3` on the common exact box,
/// the multiplicative form of the statement that the two mock Jacobi
/// forms determine each other.
pub fn bridge_identity_holds(p: BridgeParams) -> Result<bool, SeriesError> {
    let psi1 = psi_index1(p)?;
    let psi3 = psi_index3(p)?;
    let s2z = jacobi_theta1_rationalized(p.q_max, ANN).scale_y_exponents(2);
    let eta3 = crate::classical::eta(p.q_max, ANN).pow(3)?;
    let lhs = psi1.mul(&s2z)?;
    let rhs = psi3.mul(&eta3)?;
    let bx = SeriesBox {
        q_max: lhs.series_box().q_max.clone().min(rhs.series_box().q_max.clone()),
        y_lo: lhs.series_box().y_lo.max(rhs.series_box().y_lo),
        y_hi: lhs.series_box().y_hi.min(rhs.series_box().y_hi),
        y_complete: false,
    };
    let mut l = lhs;
    let mut r = rhs;
    l.shrink_box(bx.clone());
    r.shrink_box(bx);
    let diff = l.sub(&r)?;
    Ok(diff.is_zero())
}

/// Compare the finite part against `24 H`: returns the first mismatch, if
/// any, as `(n, s, found, expected)`.
pub fn class_number_identity_mismatch(
    fin: &QYSeries,
    n_max: i64,
) -> Result<Option<(i64, i64, Rat, Rat)>, SeriesError> {
    let bx = fin.series_box();
    for n in 0..=n_max {
        let mut s = -(bx.y_hi);
        while s <= bx.y_hi {
            if bx.contains(&rat(n), &rat(s)) {
                let found = fin.coeff_int(n, s)?;
                let expected = rat(24) * hurwitz_class_number(s * s - 4 * n);
                if found != expected {
                    return Ok(Some((n, s, found, expected)));
                }
            }
            s += 1;
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    const P: BridgeParams = BridgeParams { q_max: 12, y_window: 42 };

    #[test]
    fn weierstrass_combination_specializes_to_12() {
        let z = weierstrass_combination(10).unwrap();
        let at_one = z.eval_y_one().unwrap();
        assert_eq!(at_one.coeff_int(0, 0).unwrap(), rat(12));
        for n in 1..10 {
            assert_eq!(at_one.coeff_int(n, 0).unwrap(), rat(0), "q^{n}");
        }
        assert_eq!(z.q_den(), 1);
        assert_eq!(z.y_den(), 1);
    }

    #[test]
    fn psi1_leading_block() {
        // q^0 block: -2 - 12 sum_{k>=1} k y^k (from 24 H(0) = -2 and the
        // polar kernel), nothing at negative y.
        let psi = psi_index1(P).unwrap();
        assert_eq!(psi.coeff_int(0, 0).unwrap(), rat(-2));
        assert_eq!(psi.coeff_int(0, 1).unwrap(), rat(-12));
        assert_eq!(psi.coeff_int(0, 2).unwrap(), rat(-24));
        assert_eq!(psi.coeff_int(0, -1).unwrap(), rat(0));
        assert_eq!(psi.coeff_int(0, -2).unwrap(), rat(0));
    }

    #[test]
    fn finite_part_is_24_hurwitz() {
        let fin = identity_series(P).unwrap();
        assert!(class_number_identity_mismatch(&fin, 8).unwrap().is_none());
        let table = finite_part_table_of(&fin, -32).unwrap();
        assert_eq!(table.get(0), Some(&rat(-2)));
        assert_eq!(table.get(-3), Some(&rat(8)));
        assert_eq!(table.get(-4), Some(&rat(12)));
        assert_eq!(table.get(-23), Some(&rat(72)));
        assert_eq!(table.get(-27), Some(&rat(32)));
    }

    #[test]
    fn mu_series_split_polar_part() {
        let polar = polar_part_index1(P);
        let sum = mu_series(0, P).add(&mu_series(1, P)).unwrap().scale(&rat(-12));
        assert_eq!(polar, sum);
        // mu^{(1),0} keeps only even kernel modes at q^0.
        let mu0 = mu_series(0, P);
        assert_eq!(mu0.coeff_int(0, 1).unwrap(), rat(0));
        assert_eq!(mu0.coeff_int(0, 2).unwrap(), rat(2));
        assert_eq!(mu0.coeff_int(0, 3).unwrap(), rat(0));
        assert_eq!(mu0.coeff_int(0, 4).unwrap(), rat(4));
    }

    #[test]
    fn index3_determined_by_index1() {
        assert!(bridge_identity_holds(P).unwrap());
    }

    #[test]
    fn psi3_low_terms_are_integral_and_odd_in_y() {
        let psi3 = psi_index3(P).unwrap();
        let bx = psi3.series_box().clone();
        // Odd under y -> 1/y within the symmetric part of the window...
        let w = bx.y_lo.abs().min(bx.y_hi);
        for n in 0..4 {
            for s in 0..=w {
                let up = psi3.coeff_int(n, s).unwrap();
                let down = psi3.coeff_int(n, -s).unwrap();
                // ...up to the polar expansion artifacts at q^0.
                if n > 0 {
                    assert_eq!(up, ratio(-1, 1) * down, "(n, s) = ({n}, {s})");
                }
                assert!(up.is_integer());
            }
        }
    }

    #[test]
    fn double_window_agreement() {
        let small = psi_index1(BridgeParams { q_max: 8, y_window: 30 }).unwrap();
        let large = psi_index1(BridgeParams { q_max: 8, y_window: 40 }).unwrap();
        let bx = small.series_box().clone();
        for n in 0..8 {
            for s in bx.y_lo..=bx.y_hi {
                assert_eq!(
                    small.coeff_int(n, s).unwrap(),
                    large.coeff_int(n, s).unwrap(),
                    "(n, s) = ({n}, {s})"
                );
            }
        }
    }
}

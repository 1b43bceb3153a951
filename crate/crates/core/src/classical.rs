//! Classical modular building blocks: the Dedekind eta function, Eisenstein
//! series, congruence theta series and the Jacobi theta functions, plus the
//! index-`m` averaging operator used to build polar parts of mock Jacobi
//! forms.
//!
//! The first Jacobi theta function has purely imaginary Fourier
//! coefficients, which do not fit the rational coefficient field. We work
//! throughout with its rationalized companion
//! `S(tau, z) = i * theta_1(tau, z)`, so `theta_1^2 = -S^2`; every quantity
//! exported from this crate is a rational combination of such pieces.

use num_traits::Zero;

use crate::rational::{rat, ratio, Rat};
use crate::series::{Convention, QYSeries, SeriesBox};

/// Dedekind eta `q^{1/24} prod_{n>=1} (1 - q^n)`, exact below `q_max`.
pub fn eta(q_max: i64, convention: Convention) -> QYSeries {
    eta_scaled(1, q_max, convention)
}

/// `eta(t * tau)`: `q^{t/24} prod_{n>=1} (1 - q^{tn})`, exact below `q_max`.
pub fn eta_scaled(t: i64, q_max: i64, convention: Convention) -> QYSeries {
    assert!(t > 0 && q_max > 0);
    let bx = SeriesBox::complete(rat(q_max));
    let mut s = QYSeries::monomial(24, 1, t, 0, rat(1), convention, bx.clone());
    let mut factor = QYSeries::zero(1, 1, convention, bx);
    let mut n = 1;
    while t * n <= q_max {
        factor.set_term(0, 0, rat(1));
        factor.set_term(t * n, 0, rat(-1));
        s = s.mul(&factor).expect("eta factor product");
        factor = QYSeries::zero(1, 1, convention, s.series_box().clone());
        n += 1;
    }
    s
}

/// Euler product `prod_{n>=1} (1 - q^{tn})^e` for integer `e` (negative
/// exponents expand each factor as a binomial series). Exact below `q_max`.
pub fn euler_product(t: i64, e: i32, q_max: i64, convention: Convention) -> QYSeries {
    assert!(t > 0 && q_max > 0);
    let bx = SeriesBox::complete(rat(q_max));
    let mut s = QYSeries::one(convention, bx.clone());
    let mut n = 1;
    while t * n < q_max {
        let mut factor = QYSeries::zero(1, 1, convention, bx.clone());
        if e >= 0 {
            // (1 - q^{tn})^e by binomial coefficients.
            let mut c = rat(1);
            for k in 0..=e as i64 {
                if t * n * k >= q_max && k > 0 {
                    break;
                }
                factor.set_term(t * n * k, 0, if k % 2 == 0 { c.clone() } else { -c.clone() });
                c = c * ratio(e as i64 - k, k + 1);
            }
        } else {
            // (1 - q^{tn})^{-|e|} = sum_k binom(k + |e| - 1, |e| - 1) q^{tnk}.
            let a = (-e) as i64;
            let mut c = rat(1);
            let mut k = 0i64;
            while t * n * k < q_max {
                factor.set_term(t * n * k, 0, c.clone());
                c = c * ratio(k + a, k + 1);
                k += 1;
            }
        }
        s = s.mul(&factor).expect("euler factor product");
        n += 1;
    }
    s
}

/// Eisenstein series `E_4 = 1 + 240 sum sigma_3(n) q^n`, exact below `q_max`.
pub fn eisenstein_e4(q_max: i64, convention: Convention) -> QYSeries {
    let mut s = QYSeries::one(convention, SeriesBox::complete(rat(q_max)));
    for n in 1..q_max {
        let sigma3: i64 = (1..=n).filter(|d| n % d == 0).map(|d| d * d * d).sum();
        s.set_term(n, 0, rat(240 * sigma3));
    }
    s
}

/// Congruence theta series `theta_{m,r}(tau, z) = sum_{s = r mod 2m}
/// q^{s^2/4m} y^s`, exact below `q_max` with complete `y`-support.
pub fn theta_mr(m: i64, r: i64, q_max: i64, convention: Convention) -> QYSeries {
    assert!(m > 0);
    let bx = SeriesBox::complete(rat(q_max));
    let mut out = QYSeries::zero(4 * m, 1, convention, bx);
    // s^2 < 4m * q_max bounds the summation range.
    let bound = (0..).find(|s| s * s >= 4 * m * q_max).unwrap();
    for s in -bound..=bound {
        if s.rem_euclid(2 * m) == r.rem_euclid(2 * m) && s * s < 4 * m * q_max {
            out.add_term(s * s, s, rat(1));
        }
    }
    let mut out = out;
    out.reduce_grids();
    out
}

/// Nullwert `theta^0_{m,r}(tau) = theta_{m,r}(tau, 0)`, a pure `q`-series.
pub fn theta_mr_nullwert(m: i64, r: i64, q_max: i64, convention: Convention) -> QYSeries {
    theta_mr(m, r, q_max, convention)
        .eval_y_one()
        .expect("theta has complete support")
}

/// Jacobi `theta_2 = sum_{s odd} q^{s^2/8} y^{s/2}`.
pub fn jacobi_theta2(q_max: i64, convention: Convention) -> QYSeries {
    half_lattice_theta(q_max, convention, |s| {
        if s.rem_euclid(2) == 1 { Some(rat(1)) } else { None }
    })
}

/// Jacobi `theta_3 = sum_{s even} q^{s^2/8} y^{s/2}`.
pub fn jacobi_theta3(q_max: i64, convention: Convention) -> QYSeries {
    half_lattice_theta(q_max, convention, |s| {
        if s.rem_euclid(2) == 0 { Some(rat(1)) } else { None }
    })
}

/// Jacobi `theta_4 = sum_k (-1)^k q^{k^2/2} y^k`.
pub fn jacobi_theta4(q_max: i64, convention: Convention) -> QYSeries {
    half_lattice_theta(q_max, convention, |s| {
        if s.rem_euclid(2) == 0 {
            Some(if (s / 2).rem_euclid(2) == 0 { rat(1) } else { rat(-1) })
        } else {
            None
        }
    })
}

/// Rationalized first Jacobi theta function
/// `S = i * theta_1 = sum_{s odd} (-1)^{(s-1)/2} q^{s^2/8} y^{s/2}`.
pub fn jacobi_theta1_rationalized(q_max: i64, convention: Convention) -> QYSeries {
    half_lattice_theta(q_max, convention, |s| {
        if s.rem_euclid(2) == 1 {
            Some(if ((s - 1) / 2).rem_euclid(2) == 0 { rat(1) } else { rat(-1) })
        } else {
            None
        }
    })
}

/// Product form of [`jacobi_theta1_rationalized`]:
/// `q^{1/8} (y^{1/2} - y^{-1/2}) prod (1-q^n)(1-q^n y)(1-q^n y^{-1})`.
pub fn jacobi_theta1_rationalized_product(q_max: i64, convention: Convention) -> QYSeries {
    let bx = SeriesBox::complete(rat(q_max));
    let mut lead = QYSeries::zero(8, 2, convention, bx.clone());
    lead.set_term(1, 1, rat(1));
    lead.set_term(1, -1, rat(-1));
    let mut s = lead;
    for n in 1..q_max {
        let mut f = QYSeries::one(convention, bx.clone());
        f.set_term(n, 0, rat(-1));
        let mut fy = QYSeries::zero(1, 1, convention, bx.clone());
        fy.set_term(0, 0, rat(1));
        fy.set_term(n, 1, rat(-1));
        let mut fyi = QYSeries::zero(1, 1, convention, bx.clone());
        fyi.set_term(0, 0, rat(1));
        fyi.set_term(n, -1, rat(-1));
        s = s.mul(&f).unwrap().mul(&fy).unwrap().mul(&fyi).unwrap();
    }
    s
}

fn half_lattice_theta(
    q_max: i64,
    convention: Convention,
    weight: impl Fn(i64) -> Option<Rat>,
) -> QYSeries {
    let bx = SeriesBox::complete(rat(q_max));
    let mut out = QYSeries::zero(8, 2, convention, bx);
    // Exponent q^{s^2/8}: include all s with s^2 < 8 q_max.
    let bound = (1..).find(|s| s * s >= 8 * q_max).unwrap();
    for s in -bound..=bound {
        if s * s >= 8 * q_max {
            continue;
        }
        if let Some(c) = weight(s) {
            out.add_term(s * s, s, c);
        }
    }
    out.reduce_grids();
    out
}

/// Index-`m` averaging operator applied to a pure-`y` kernel
/// `F(y) = sum_{k>=1} c_k y^k` (its expansion for `|y| < 1`), where the
/// analytic kernel satisfies `F(1/y) = F(y)`:
///
/// `Av[F] = sum_{s in Z} q^{m s^2} y^{2ms} F(q^s y)`.
///
/// For `s < 0` the argument leaves `|q^s y| < 1`, so the symmetric
/// expansion `F(q^{-s} y^{-1})` is substituted; this is where the symmetry
/// assumption enters. The result is an annulus series, exact below `q_max`
/// on the `y`-window `[-y_window, y_window]`.
pub fn averaging_operator(
    m: i64,
    q_max: i64,
    y_window: i64,
    kernel: impl Fn(i64) -> Rat,
) -> QYSeries {
    assert!(m > 0 && q_max > 0 && y_window > 0);
    let bx = SeriesBox::windowed(rat(q_max), -y_window, y_window);
    let mut out = QYSeries::zero(1, 1, Convention::AnnulusQltYlt1, bx);
    let mut s = 0i64;
    loop {
        // Contributions of shift s: q^{m s^2 + |s| k} y^{sign(s)(2m|s| + k)}.
        let base = m * s * s;
        if base + s.abs() >= q_max && s > 0 {
            break;
        }
        for &sgn in if s == 0 { &[1i64][..] } else { &[1i64, -1][..] } {
            let mut k = 1i64;
            while base + s.abs() * k < q_max {
                let y = sgn * (2 * m * s.abs() + k);
                if y.abs() > y_window {
                    if s == 0 {
                        break;
                    }
                    k += 1;
                    continue;
                }
                let c = kernel(k);
                if !c.is_zero() {
                    out.add_term(base + s.abs() * k, y, c);
                }
                k += 1;
                if s == 0 && k > y_window {
                    break;
                }
            }
        }
        s += 1;
    }
    out
}

/// Kernel coefficients of `y / (1 - y)^2 = sum_{k>=1} k y^k`.
pub fn kernel_y_over_one_minus_y_sq(k: i64) -> Rat {
    rat(k)
}

/// Kernel coefficients of `-y / (1 + y)^2 = sum_{k>=1} (-1)^k k y^k`.
pub fn kernel_neg_y_over_one_plus_y_sq(k: i64) -> Rat {
    if k % 2 == 0 {
        rat(k)
    } else {
        rat(-k)
    }
}

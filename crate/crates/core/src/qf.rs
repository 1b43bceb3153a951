//! Binary quadratic forms and (generalized) Hurwitz class numbers.
//!
//! Class numbers are indexed here by the discriminant `d <= 0`,
//! `d = 0 or 1 mod 4`. Alongside the classical Hurwitz class number
//! `H(d)` (counting `SL_2(Z)`-classes of positive definite forms with
//! stabilizer weights) we compute its level-`N` refinement `H_N(d)`,
//! counting `Gamma_0(N)`-classes of forms whose leading coefficient is
//! divisible by `N`, the Cohen-Eisenstein coefficients at prime level, and
//! the rationalized level-`N` combination used by the McKay-Thompson
//! series.

use std::collections::HashMap;
use std::sync::Mutex;

use once_cell::sync::Lazy;

use crate::rational::{rat, ratio, Rat};

/// Integral binary quadratic form `a x^2 + b x y + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct BinaryQF {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl BinaryQF {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// Order of the stabilizer in `PSL_2(Z)` times two: 6 for multiples of
    /// `x^2+xy+y^2`, 4 for multiples of `x^2+y^2`, 2 otherwise.
    pub fn stabilizer_weight(&self) -> i64 {
        if self.a == self.b && self.b == self.c {
            6
        } else if self.b == 0 && self.a == self.c {
            4
        } else {
            2
        }
    }
}

/// All reduced positive definite forms of discriminant `d < 0`:
/// `|b| <= a <= c` with `b >= 0` whenever `|b| = a` or `a = c`.
pub fn reduced_forms(d: i64) -> Vec<BinaryQF> {
    assert!(d < 0 && d.rem_euclid(4) <= 1, "not a negative discriminant");
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a..=a {
            if (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * a);
            if c < a {
                continue;
            }
            if b < 0 && (b.abs() == a || a == c) {
                continue;
            }
            out.push(BinaryQF { a, b, c });
        }
        a += 1;
    }
    out
}

/// Hurwitz class number `H(d)` for `d <= 0`, with `H(0) = -1/12` and
/// `H(d) = 0` unless `d = 0 or 1 mod 4`. Positive arguments return 0.
pub fn hurwitz_class_number(d: i64) -> Rat {
    static CACHE: Lazy<Mutex<HashMap<i64, Rat>>> = Lazy::new(|| Mutex::new(HashMap::new()));
    if d > 0 || d.rem_euclid(4) > 1 {
        return Rat::zero();
    }
    if d == 0 {
        return ratio(-1, 12);
    }
    if let Some(v) = CACHE.lock().unwrap().get(&d) {
        return v.clone();
    }
    let v: Rat = reduced_forms(d)
        .iter()
        .map(|f| ratio(2, f.stabilizer_weight()))
        .sum();
    CACHE.lock().unwrap().insert(d, v.clone());
    v
}

/// Index `iota(N) = [SL_2(Z) : Gamma_0(N)] = N prod_{p | N} (1 + 1/p)`.
pub fn index_iota(n: i64) -> i64 {
    assert!(n > 0);
    let mut iota = n;
    for p in prime_factors(n) {
        iota = iota / p * (p + 1);
    }
    iota
}

/// Level-`N` Hurwitz class number `H_N(d)`: the weighted number of
/// `Gamma_0(N)`-classes of positive definite forms of discriminant `d`
/// whose leading coefficient is divisible by `N`. Computed as a mass over
/// `P^1(Z/N)`: for each reduced representative the cosets with divisible
/// leading coefficient correspond to projective points `(x : z)` with
/// `Q(x, z) = 0 mod N`. `H_N(0) = -iota(N)/12`.
pub fn hurwitz_class_number_level(n: i64, d: i64) -> Rat {
    static CACHE: Lazy<Mutex<HashMap<(i64, i64), Rat>>> =
        Lazy::new(|| Mutex::new(HashMap::new()));
    assert!(n > 0);
    if n == 1 {
        return hurwitz_class_number(d);
    }
    if d > 0 || d.rem_euclid(4) > 1 {
        return Rat::zero();
    }
    if d == 0 {
        return ratio(-index_iota(n), 12);
    }
    if let Some(v) = CACHE.lock().unwrap().get(&(n, d)) {
        return v.clone();
    }
    let phi = euler_phi(n);
    let mut total = Rat::zero();
    for f in reduced_forms(d) {
        // Count affine solutions with gcd(x, z, n) = 1; the unit group acts
        // freely on them, so dividing by phi(n) gives projective points.
        let mut affine = 0i64;
        for x in 0..n {
            for z in 0..n {
                if gcd(gcd(x, z), n) == 1 && f.eval(x, z).rem_euclid(n) == 0 {
                    affine += 1;
                }
            }
        }
        total += ratio(2, f.stabilizer_weight()) * ratio(affine, phi);
    }
    CACHE.lock().unwrap().insert((n, d), total.clone());
    total
}

/// Decompose a discriminant `d < 0` as `d = f^2 d0` with `d0` fundamental.
pub fn fundamental_decomposition(d: i64) -> (i64, i64) {
    assert!(d < 0 && d.rem_euclid(4) <= 1);
    let mut f = 1;
    let mut g = 1;
    while g * g <= -d {
        if d % (g * g) == 0 {
            let d0 = d / (g * g);
            if d0.rem_euclid(4) <= 1 {
                f = g;
            }
        }
        g += 1;
    }
    (d / (f * f), f)
}

/// Cohen-Eisenstein coefficient at prime level `p`: with `d = f^2 d0`,
/// `f'` the prime-to-`p` part of `f` and `d' = f'^2 d0`, the value is `0`,
/// `H(d')/2` or `H(d')` according to whether `d'` is split, ramified or
/// inert at `p`. At `d = 0` the value is `(p - 1)/24`.
pub fn cohen_eisenstein_coeff(p: i64, d: i64) -> Rat {
    assert!(is_prime(p));
    if d > 0 || d.rem_euclid(4) > 1 {
        return Rat::zero();
    }
    if d == 0 {
        return ratio(p - 1, 24);
    }
    let (d0, mut f) = fundamental_decomposition(d);
    while f % p == 0 {
        f /= p;
    }
    let dp = f * f * d0;
    match kronecker_symbol(dp, p) {
        1 => Rat::zero(),
        0 => hurwitz_class_number(dp) / rat(2),
        _ => hurwitz_class_number(dp),
    }
}

/// Rationalized level-`N` class number combination
/// `(12 / phi(N)) sum_{M | N} mu(N/M) (M / iota(M)) H_M(d)`.
/// Its constant term (`d = 0`) is `-1` for every `N`.
pub fn rationalized_class_combination(n: i64, d: i64) -> Rat {
    assert!(n > 0);
    let mut sum = Rat::zero();
    for m in divisors(n) {
        let mu = moebius(n / m);
        if mu == 0 {
            continue;
        }
        sum += rat(mu) * ratio(m, index_iota(m)) * hurwitz_class_number_level(m, d);
    }
    ratio(12, euler_phi(n)) * sum
}

/// Representatives `gamma` of the cosets `gamma Gamma_0(N)` in `SL_2(Z)`,
/// one per point of `P^1(Z/N)` read off the first column. Their count is
/// `iota(N)`.
pub fn coset_reps_gamma0(n: i64) -> Vec<[[i64; 2]; 2]> {
    assert!(n > 0);
    let mut seen: Vec<(i64, i64)> = Vec::new();
    let mut reps = Vec::new();
    let units: Vec<i64> = (1..=n).filter(|u| gcd(*u, n) == 1).collect();
    for x in 0..n {
        'points: for z in 0..n {
            if gcd(gcd(x, z), n) != 1 {
                continue;
            }
            for &u in &units {
                if seen.contains(&((u * x) % n, (u * z) % n)) {
                    continue 'points;
                }
            }
            seen.push((x, z));
            // Lift (x, z) to a coprime integer vector and complete to SL_2.
            let (mut a, mut c) = (x, z);
            'lift: for i in 0..n {
                for j in 0..n {
                    if gcd(x + i * n, z + j * n) == 1 {
                        a = x + i * n;
                        c = z + j * n;
                        break 'lift;
                    }
                }
            }
            let (_, b, d) = extended_gcd(a, c);
            // a * b' + c * d' = 1 => det [[a, -d'], [c, b']] = a b' + c d'.
            reps.push([[a, -d], [c, b]]);
        }
    }
    for m in &reps {
        debug_assert_eq!(m[0][0] * m[1][1] - m[0][1] * m[1][0], 1);
    }
    reps
}

/// Kronecker symbol `(a / n)`, extending the Jacobi symbol to all integers.
pub fn kronecker_symbol(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // Factor out twos from n: (a/2) = 0, 1, -1 for a even, ±1 mod 8, ±3 mod 8.
    while n % 2 == 0 {
        n /= 2;
        match a.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => result = -result,
            _ => return 0,
        }
    }
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            match n.rem_euclid(8) {
                3 | 5 => result = -result,
                _ => {}
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `(g, s, t)` with `a s + b t = g = gcd(a, b)`.
pub fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return (a.abs(), a.signum(), 0);
    }
    let (g, s, t) = extended_gcd(b, a % b);
    (g, t, s - (a / b) * t)
}

pub fn divisors(n: i64) -> Vec<i64> {
    let mut out: Vec<i64> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

pub fn prime_factors(n: i64) -> Vec<i64> {
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn moebius(n: i64) -> i64 {
    let mut n = n;
    let mut count = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            count += 1;
        }
        p += 1;
    }
    if n > 1 {
        count += 1;
    }
    if count % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: i64) -> i64 {
    let mut phi = n;
    for p in prime_factors(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

pub fn is_prime(n: i64) -> bool {
    n > 1 && prime_factors(n) == vec![n]
}

use num_traits::Zero;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_values() {
        assert_eq!(kronecker_symbol(-4, 3), -1);
        assert_eq!(kronecker_symbol(-4, 5), 1);
        assert_eq!(kronecker_symbol(-4, 2), 0);
        assert_eq!(kronecker_symbol(-8, 3), 1);
        assert_eq!(kronecker_symbol(5, 5), 0);
        assert_eq!(kronecker_symbol(2, 7), 1);
        assert_eq!(kronecker_symbol(2, 3), -1);
        assert_eq!(kronecker_symbol(-11, 3), 1);
        assert_eq!(kronecker_symbol(-3, 11), -1);
        assert_eq!(kronecker_symbol(-3, 7), 1);
    }

    #[test]
    fn hurwitz_small_values() {
        let cases = [
            (0, ratio(-1, 12)),
            (-3, ratio(1, 3)),
            (-4, ratio(1, 2)),
            (-7, rat(1)),
            (-8, rat(1)),
            (-11, rat(1)),
            (-12, ratio(4, 3)),
            (-15, rat(2)),
            (-16, ratio(3, 2)),
            (-19, rat(1)),
            (-20, rat(2)),
            (-23, rat(3)),
            (-24, rat(2)),
            (-27, ratio(4, 3)),
            (-28, rat(2)),
            (-1, Rat::zero()),
            (-2, Rat::zero()),
            (5, Rat::zero()),
        ];
        for (d, want) in cases {
            assert_eq!(hurwitz_class_number(d), want, "H({d})");
        }
    }

    #[test]
    fn hurwitz_heegner_discriminants() {
        // One-class fundamental discriminants have H = 1 (weight 2 forms).
        for d in [-43, -67, -163] {
            assert_eq!(hurwitz_class_number(d), rat(1), "H({d})");
        }
    }

    #[test]
    fn hurwitz_kronecker_relation() {
        // sum_{s in Z} H(4n - s^2) = 2 sigma_1(n) - sum_{d|n} min(d, n/d).
        for n in 1..=40i64 {
            let mut lhs = Rat::zero();
            let mut s = 0i64;
            while s * s <= 4 * n {
                let h = hurwitz_class_number(s * s - 4 * n);
                lhs += if s == 0 { h } else { rat(2) * h };
                s += 1;
            }
            let sigma: i64 = divisors(n).iter().sum();
            let min_sum: i64 = divisors(n).iter().map(|&d| d.min(n / d)).sum();
            assert_eq!(lhs, rat(2 * sigma - min_sum), "n={n}");
        }
    }

    #[test]
    fn iota_values() {
        for (n, want) in [(1, 1), (2, 3), (3, 4), (4, 6), (5, 6), (6, 12), (8, 12), (11, 12), (12, 24)] {
            assert_eq!(index_iota(n), want, "iota({n})");
        }
    }

    #[test]
    fn level_class_numbers() {
        assert_eq!(hurwitz_class_number_level(2, -4), ratio(1, 2));
        assert_eq!(hurwitz_class_number_level(4, -4), Rat::zero());
        assert_eq!(hurwitz_class_number_level(4, -12), rat(2));
        assert_eq!(hurwitz_class_number_level(8, -12), Rat::zero());
        assert_eq!(hurwitz_class_number_level(3, 0), ratio(-1, 3));
    }

    #[test]
    fn prime_level_decomposition_identity() {
        // H(d) = HCE_p(d) + H_p(d)/2 for prime p.
        for p in [2, 3, 5, 7, 11] {
            for dm in 0..=120i64 {
                let d = -dm;
                if d.rem_euclid(4) > 1 {
                    continue;
                }
                let lhs = hurwitz_class_number(d);
                let rhs =
                    cohen_eisenstein_coeff(p, d) + hurwitz_class_number_level(p, d) / rat(2);
                assert_eq!(lhs, rhs, "p={p} d={d}");
            }
        }
    }

    #[test]
    fn rationalized_combination_spot_values() {
        // Constant term is -1 at every level.
        for n in [1, 2, 3, 4, 5, 6, 8, 11] {
            assert_eq!(rationalized_class_combination(n, 0), rat(-1), "level {n}");
        }
        // Level 1 is 12 H.
        assert_eq!(rationalized_class_combination(1, -3), rat(4));
        // Doubled values at small discriminants.
        let two = rat(2);
        assert_eq!(two.clone() * rationalized_class_combination(2, -3), rat(-8));
        assert_eq!(two.clone() * rationalized_class_combination(3, -3), rat(-1));
        assert_eq!(two.clone() * rationalized_class_combination(6, -3), rat(1));
        assert_eq!(two.clone() * rationalized_class_combination(2, -4), rat(-4));
        assert_eq!(two.clone() * rationalized_class_combination(4, -4), rat(-4));
        assert_eq!(two.clone() * rationalized_class_combination(8, -12), rat(-8));
        assert_eq!(two.clone() * rationalized_class_combination(5, -23), rat(-18));
        assert_eq!(two * rationalized_class_combination(11, -11), ratio(-1, 5));
    }

    #[test]
    fn coset_reps_cover_projective_line() {
        for n in [2, 3, 4, 6, 8, 11, 12] {
            let reps = coset_reps_gamma0(n);
            assert_eq!(reps.len() as i64, index_iota(n), "count at level {n}");
            for m in &reps {
                assert_eq!(m[0][0] * m[1][1] - m[0][1] * m[1][0], 1);
            }
            // First columns are pairwise inequivalent in P^1(Z/n).
            for (i, m1) in reps.iter().enumerate() {
                for m2 in reps.iter().skip(i + 1) {
                    let equivalent = (1..=n).filter(|u| gcd(*u, n) == 1).any(|u| {
                        (u * m1[0][0]).rem_euclid(n) == m2[0][0].rem_euclid(n)
                            && (u * m1[1][0]).rem_euclid(n) == m2[1][0].rem_euclid(n)
                    });
                    assert!(!equivalent, "duplicate coset at level {n}");
                }
            }
        }
    }

    #[test]
    fn fundamental_decomposition_cases() {
        assert_eq!(fundamental_decomposition(-12), (-3, 2));
        assert_eq!(fundamental_decomposition(-16), (-4, 2));
        assert_eq!(fundamental_decomposition(-75), (-3, 5));
        assert_eq!(fundamental_decomposition(-7), (-7, 1));
        assert_eq!(fundamental_decomposition(-36), (-4, 3));
    }
}

//! Character theory of the Mathieu group M11: exact character values over
//! quadratic surds, orthogonality, virtual characters, and the rank-2 and
//! rank-4 lattices of optimal-module generators with their Gram forms.

use num_traits::Zero;
use once_cell::sync::Lazy;

use crate::rational::{rat, ratio, Rat};

/// Exact value `rational + surd * sqrt(-radicand)`, with `radicand` in
/// `{2, 11}` (or 0 when the surd part vanishes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicValue {
    rational: Rat,
    surd: Rat,
    radicand: i64,
}

impl AlgebraicValue {
    pub fn from_rational(r: Rat) -> Self {
        AlgebraicValue { rational: r, surd: Rat::zero(), radicand: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    /// `rational + surd * sqrt(-radicand)`.
    pub fn new(rational: Rat, surd: Rat, radicand: i64) -> Self {
        let mut v = AlgebraicValue { rational, surd, radicand };
        v.normalize();
        v
    }

    fn normalize(&mut self) {
        if self.surd.is_zero() {
            self.radicand = 0;
        }
    }

    pub fn rational_part(&self) -> &Rat {
        &self.rational
    }

    pub fn surd_part(&self) -> &Rat {
        &self.surd
    }

    pub fn radicand(&self) -> i64 {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    /// Complex conjugate: negates the surd part.
    pub fn conj(&self) -> Self {
        AlgebraicValue::new(self.rational.clone(), -self.surd.clone(), self.radicand)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.surd.is_zero() || other.surd.is_zero() || self.radicand == other.radicand {
            let radicand = if self.surd.is_zero() { other.radicand } else { self.radicand };
            AlgebraicValue::new(
                &self.rational + &other.rational,
                &self.surd + &other.surd,
                radicand,
            )
        } else {
            // Never reachable for class-wise sums over one column of the
            // character table; mixed radicands would need a larger field.
            panic!("cannot add values with distinct radicands");
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        AlgebraicValue::new(c * &self.rational, c * &self.surd, self.radicand)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert!(
            self.surd.is_zero() || other.surd.is_zero() || self.radicand == other.radicand,
            "cannot multiply values with distinct radicands"
        );
        let radicand = if self.surd.is_zero() { other.radicand } else { self.radicand };
        // (a + b w)(c + d w) with w^2 = -radicand.
        let rational =
            &self.rational * &other.rational - rat(radicand) * &self.surd * &other.surd;
        let surd = &self.rational * &other.surd + &self.surd * &other.rational;
        AlgebraicValue::new(rational, surd, radicand)
    }

    /// `|v|^2 = v * conj(v)`, always rational.
    pub fn norm(&self) -> Rat {
        let n = self.mul(&self.conj());
        debug_assert!(n.is_rational());
        n.rational
    }
}

impl std::fmt::Display for AlgebraicValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.surd.is_zero() {
            return write!(f, "{}", self.rational);
        }
        if self.rational.is_zero() {
            return write!(f, "{}*sqrt(-{})", self.surd, self.radicand);
        }
        write!(f, "{} + {}*sqrt(-{})", self.rational, self.surd, self.radicand)
    }
}

/// The ten conjugacy classes in their conventional order.
pub const CLASS_NAMES: [&str; 10] =
    ["1A", "2A", "3A", "4A", "5A", "6A", "8A", "8B", "11A", "11B"];

/// Element orders per class.
pub const CLASS_ORDERS: [i64; 10] = [1, 2, 3, 4, 5, 6, 8, 8, 11, 11];

/// Exact character table of M11 with derived centralizer orders.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    values: Vec<[AlgebraicValue; 10]>,
    centralizers: [i64; 10],
}

impl CharacterTable {
    /// Value `chi_i(g)` for irreducible index `i` (1-based) and class index
    /// (0-based into [`CLASS_NAMES`]).
    pub fn value(&self, chi: usize, class: usize) -> &AlgebraicValue {
        &self.values[chi - 1][class]
    }

    pub fn centralizer_order(&self, class: usize) -> i64 {
        self.centralizers[class]
    }

    pub fn class_size(&self, class: usize) -> i64 {
        self.centralizers[0] / self.centralizers[class]
    }

    pub fn class_index(name: &str) -> Option<usize> {
        CLASS_NAMES.iter().position(|c| c.eq_ignore_ascii_case(name))
    }

    /// `sum_g x(g) conj(y(g)) / |C(g)|` over the ten classes.
    pub fn inner_product(
        &self,
        x: &dyn Fn(usize) -> AlgebraicValue,
        y: &dyn Fn(usize) -> AlgebraicValue,
    ) -> AlgebraicValue {
        let mut acc = AlgebraicValue::from_int(0);
        for g in 0..10 {
            let term = x(g).mul(&y(g).conj()).scale(&ratio(1, self.centralizers[g]));
            acc = acc.add(&term);
        }
        acc
    }

    /// Exact row orthogonality: `<chi_i, chi_j> = delta_ij`.
    pub fn check_row_orthogonality(&self) -> Result<(), String> {
        for i in 1..=10 {
            for j in 1..=10 {
                let p = self.inner_product(
                    &|g| self.value(i, g).clone(),
                    &|g| self.value(j, g).clone(),
                );
                let want = AlgebraicValue::from_int(if i == j { 1 } else { 0 });
                if p != want {
                    return Err(format!("<chi_{i}, chi_{j}> = {p}, expected {want}"));
                }
            }
        }
        Ok(())
    }

    /// Exact column orthogonality: `sum_i chi_i(g) conj(chi_i(h))` is
    /// `|C(g)|` on the diagonal and 0 off it.
    pub fn check_column_orthogonality(&self) -> Result<(), String> {
        for g in 0..10 {
            for h in 0..10 {
                let mut acc = AlgebraicValue::from_int(0);
                for i in 1..=10 {
                    acc = acc.add(&self.value(i, g).mul(&self.value(i, h).conj()));
                }
                let want = AlgebraicValue::from_int(if g == h { self.centralizers[g] } else { 0 });
                if acc != want {
                    return Err(format!(
                        "column product at ({}, {}) = {acc}, expected {want}",
                        CLASS_NAMES[g], CLASS_NAMES[h]
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The character table of M11. Centralizer orders are derived from column
/// norms rather than hard-coded, so the value rows are the single source of
/// truth; both orthogonality relations are verified once at first use.
pub fn m11_character_table() -> &'static CharacterTable {
    static TABLE: Lazy<CharacterTable> = Lazy::new(|| {
        let r = AlgebraicValue::from_int;
        // a2 = sqrt(-2); b11 = -1/2 + 1/2 sqrt(-11).
        let a2 = AlgebraicValue::new(rat(0), rat(1), 2);
        let a2n = a2.scale(&rat(-1));
        let b11 = AlgebraicValue::new(ratio(-1, 2), ratio(1, 2), 11);
        let b11c = b11.conj();
        let values: Vec<[AlgebraicValue; 10]> = vec![
            [r(1), r(1), r(1), r(1), r(1), r(1), r(1), r(1), r(1), r(1)],
            [r(10), r(2), r(1), r(2), r(0), r(-1), r(0), r(0), r(-1), r(-1)],
            [r(10), r(-2), r(1), r(0), r(0), r(1), a2.clone(), a2n.clone(), r(-1), r(-1)],
            [r(10), r(-2), r(1), r(0), r(0), r(1), a2n, a2, r(-1), r(-1)],
            [r(11), r(3), r(2), r(-1), r(1), r(0), r(-1), r(-1), r(0), r(0)],
            [r(16), r(0), r(-2), r(0), r(1), r(0), r(0), r(0), b11.clone(), b11c.clone()],
            [r(16), r(0), r(-2), r(0), r(1), r(0), r(0), r(0), b11c, b11],
            [r(44), r(4), r(-1), r(0), r(-1), r(1), r(0), r(0), r(0), r(0)],
            [r(45), r(-3), r(0), r(1), r(0), r(0), r(-1), r(-1), r(1), r(1)],
            [r(55), r(-1), r(1), r(-1), r(0), r(-1), r(1), r(1), r(0), r(0)],
        ];
        let mut centralizers = [0i64; 10];
        for (g, cz) in centralizers.iter_mut().enumerate() {
            let norm: Rat = values.iter().map(|row| row[g].norm()).sum();
            assert!(norm.is_integer(), "non-integral centralizer order");
            *cz = crate::rational::to_i64(&norm).unwrap();
        }
        let table = CharacterTable { values, centralizers };
        table.check_row_orthogonality().expect("row orthogonality");
        table.check_column_orthogonality().expect("column orthogonality");
        table
    });
    &TABLE
}

/// Integer combination of the ten irreducible characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VirtualCharacter(pub [i64; 10]);

impl VirtualCharacter {
    pub fn eval(&self, table: &CharacterTable, class: usize) -> AlgebraicValue {
        let mut acc = AlgebraicValue::from_int(0);
        for (i, &m) in self.0.iter().enumerate() {
            if m != 0 {
                acc = acc.add(&table.value(i + 1, class).scale(&rat(m)));
            }
        }
        acc
    }
}

/// `<x, y>` for two virtual characters.
pub fn char_inner_product(
    table: &CharacterTable,
    x: &VirtualCharacter,
    y: &VirtualCharacter,
) -> AlgebraicValue {
    table.inner_product(&|g| x.eval(table, g), &|g| y.eval(table, g))
}

/// The combination supported on order-11 classes:
/// `11 delta_11 = 2 chi_1 - 2 chi_2 - 2 chi_3 - 2 chi_4 - chi_6 - chi_7 + 2 chi_9`.
pub const ELEVEN_DELTA_11: VirtualCharacter =
    VirtualCharacter([2, -2, -2, -2, 0, -1, -1, 0, 2, 0]);

/// The combination supported on order-8 classes:
/// `4 delta_8 = chi_1 - chi_5 - chi_9 + chi_10`.
pub const FOUR_DELTA_8: VirtualCharacter = VirtualCharacter([1, 0, 0, 0, -1, 0, 0, 0, -1, 1]);

/// First order-11 lattice generator `chi_1 - chi_2 - chi_3 - chi_4 - chi_6 + chi_9`.
pub const GEN_11_A: VirtualCharacter = VirtualCharacter([1, -1, -1, -1, 0, -1, 0, 0, 1, 0]);

/// Second order-11 lattice generator `chi_1 - chi_2 - chi_3 - chi_4 - chi_7 + chi_9`.
pub const GEN_11_B: VirtualCharacter = VirtualCharacter([1, -1, -1, -1, 0, 0, -1, 0, 1, 0]);

/// Order-8 generator `chi_3 - chi_4`.
pub const GEN_8_A: VirtualCharacter = VirtualCharacter([0, 0, 1, -1, 0, 0, 0, 0, 0, 0]);

/// Order-8 generator `chi_1 - chi_5 - chi_9 + chi_10`; equals `4 delta_8`.
pub const GEN_8_B: VirtualCharacter = FOUR_DELTA_8;

/// Verify the indicator identities: `11 delta_11` is 11 on order-11
/// classes and 0 elsewhere, `4 delta_8` is 4 on order-8 classes and 0
/// elsewhere, the two order-11 generators decompose as
/// `(11/2) delta_11 -+ (1/2) chi_6 +- (1/2) chi_7`, and the differences
/// `chi_6 - chi_7`, `chi_3 - chi_4` vanish away from orders 11 and 8.
pub fn delta_identities() -> Result<(), String> {
    let t = m11_character_table();
    for g in 0..10 {
        let d11 = ELEVEN_DELTA_11.eval(t, g);
        let want11 = AlgebraicValue::from_int(if CLASS_ORDERS[g] == 11 { 11 } else { 0 });
        if d11 != want11 {
            return Err(format!("11 delta_11 at {} = {d11}", CLASS_NAMES[g]));
        }
        let d8 = FOUR_DELTA_8.eval(t, g);
        let want8 = AlgebraicValue::from_int(if CLASS_ORDERS[g] == 8 { 4 } else { 0 });
        if d8 != want8 {
            return Err(format!("4 delta_8 at {} = {d8}", CLASS_NAMES[g]));
        }
        // chi_6 - chi_7 away from order 11, chi_3 - chi_4 away from order 8.
        let diff67 = t.value(6, g).sub(t.value(7, g));
        if CLASS_ORDERS[g] != 11 && !diff67.is_zero() {
            return Err(format!("chi_6 - chi_7 nonzero at {}", CLASS_NAMES[g]));
        }
        let diff34 = t.value(3, g).sub(t.value(4, g));
        if CLASS_ORDERS[g] != 8 && !diff34.is_zero() {
            return Err(format!("chi_3 - chi_4 nonzero at {}", CLASS_NAMES[g]));
        }
        // Generator decomposition (11/2) delta_11 -+ chi_6/2 +- chi_7/2.
        let half = ratio(1, 2);
        let base = d11.scale(&half);
        let gen_a = base
            .sub(&t.value(6, g).scale(&half))
            .add(&t.value(7, g).scale(&half));
        if gen_a != GEN_11_A.eval(t, g) {
            return Err(format!("order-11 generator A mismatch at {}", CLASS_NAMES[g]));
        }
        let gen_b = base
            .add(&t.value(6, g).scale(&half))
            .sub(&t.value(7, g).scale(&half));
        if gen_b != GEN_11_B.eval(t, g) {
            return Err(format!("order-11 generator B mismatch at {}", CLASS_NAMES[g]));
        }
    }
    Ok(())
}

/// Which optimal-module lattice to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeVariant {
    /// Trivial character assignment: rank 2, generators tensored with the
    /// level-11 cusp form.
    Default,
    /// Order-4/8-twisted assignment: rank 4, two extra generators tensored
    /// with the level-8 cusp form.
    Twisted,
}

/// Generators of the optimal-module lattice as (cusp form tag, virtual
/// character) pairs.
pub fn lattice_generators(variant: LatticeVariant) -> Vec<(&'static str, VirtualCharacter)> {
    match variant {
        LatticeVariant::Default => vec![("phi11", GEN_11_A), ("phi11", GEN_11_B)],
        LatticeVariant::Twisted => vec![
            ("phi84", GEN_8_A),
            ("phi84", GEN_8_B),
            ("phi11", GEN_11_A),
            ("phi11", GEN_11_B),
        ],
    }
}

/// Gram matrix of the character factors of [`lattice_generators`] under
/// [`char_inner_product`]; entries are rational integers.
pub fn lattice_gram(variant: LatticeVariant) -> Vec<Vec<i64>> {
    let t = m11_character_table();
    let gens = lattice_generators(variant);
    gens.iter()
        .map(|(_, a)| {
            gens.iter()
                .map(|(_, b)| {
                    let p = char_inner_product(t, a, b);
                    assert!(p.is_rational(), "non-rational Gram entry");
                    crate::rational::to_i64(p.rational_part()).expect("non-integral Gram entry")
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_orthogonal_with_derived_centralizers() {
        let t = m11_character_table();
        assert_eq!(
            (0..10).map(|g| t.centralizer_order(g)).collect::<Vec<_>>(),
            vec![7920, 48, 18, 8, 5, 6, 8, 8, 11, 11]
        );
        assert_eq!(t.class_size(1), 165);
        assert_eq!(t.value(10, 0), &AlgebraicValue::from_int(55));
        assert_eq!(
            t.value(6, 8),
            &AlgebraicValue::new(ratio(-1, 2), ratio(1, 2), 11)
        );
    }

    #[test]
    fn delta_identities_hold() {
        delta_identities().unwrap();
    }

    #[test]
    fn inner_products() {
        let t = m11_character_table();
        assert_eq!(
            char_inner_product(t, &GEN_8_A, &GEN_8_A),
            AlgebraicValue::from_int(2)
        );
        assert_eq!(
            char_inner_product(t, &GEN_8_B, &GEN_8_B),
            AlgebraicValue::from_int(4)
        );
        assert_eq!(
            char_inner_product(t, &GEN_8_A, &GEN_8_B),
            AlgebraicValue::from_int(0)
        );
        assert_eq!(
            char_inner_product(t, &GEN_11_A, &GEN_11_B),
            AlgebraicValue::from_int(5)
        );
    }

    #[test]
    fn gram_matrices() {
        assert_eq!(lattice_gram(LatticeVariant::Default), vec![vec![6, 5], vec![5, 6]]);
        assert_eq!(
            lattice_gram(LatticeVariant::Twisted),
            vec![
                vec![2, 0, 0, 0],
                vec![0, 4, 0, 0],
                vec![0, 0, 6, 5],
                vec![0, 0, 5, 6],
            ]
        );
    }

    #[test]
    fn surd_arithmetic() {
        let a2 = AlgebraicValue::new(rat(0), rat(1), 2);
        assert_eq!(a2.norm(), rat(2));
        let b11 = AlgebraicValue::new(ratio(-1, 2), ratio(1, 2), 11);
        assert_eq!(b11.norm(), rat(3));
        assert_eq!(b11.add(&b11.conj()), AlgebraicValue::from_int(-1));
        assert_eq!(b11.mul(&b11.conj()), AlgebraicValue::from_int(3));
    }
}

//! Tables of Fourier coefficients indexed by discriminant.
//!
//! A weight-3/2-type object in this crate (class number series,
//! McKay-Thompson series, multiplicity series) is determined by one
//! coefficient per discriminant `d <= 0`, `d = 0 or 1 mod 4`. The
//! [`JacobiCoeffTable`] holds such coefficients down to a bound and knows
//! how to render itself as CSV.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::qf;
use crate::rational::{Rat};

/// Coefficients `d -> c(d)` for discriminants `d_min <= d <= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiCoeffTable {
    d_min: i64,
    entries: BTreeMap<i64, Rat>,
}

/// Is `d` a valid (non-positive) discriminant index?
pub fn is_discriminant(d: i64) -> bool {
    d <= 0 && d.rem_euclid(4) <= 1
}

impl JacobiCoeffTable {
    /// Build a table by evaluating `f` at every discriminant in range.
    pub fn from_fn(d_min: i64, mut f: impl FnMut(i64) -> Rat) -> Self {
        assert!(d_min <= 0);
        let mut entries = BTreeMap::new();
        for d in (d_min..=0).rev() {
            if is_discriminant(d) {
                entries.insert(d, f(d));
            }
        }
        JacobiCoeffTable { d_min, entries }
    }

    /// Empty table over the given range (all coefficients zero).
    pub fn zeros(d_min: i64) -> Self {
        Self::from_fn(d_min, |_| Rat::zero())
    }

    pub fn d_min(&self) -> i64 {
        self.d_min
    }

    /// Coefficient at `d`; `None` when `d` is outside the stored range or
    /// not a discriminant.
    pub fn get(&self, d: i64) -> Option<&Rat> {
        self.entries.get(&d)
    }

    pub fn set(&mut self, d: i64, c: Rat) {
        assert!(is_discriminant(d) && d >= self.d_min, "index {d} outside table");
        self.entries.insert(d, c);
    }

    /// Iterate `(d, coefficient)` with `|d|` increasing.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rat)> + '_ {
        self.entries.iter().rev().map(|(&d, c)| (d, c))
    }

    /// Pointwise linear combination `self + lambda * other` on the common range.
    pub fn add_scaled(&self, other: &JacobiCoeffTable, lambda: &Rat) -> JacobiCoeffTable {
        let d_min = self.d_min.max(other.d_min);
        JacobiCoeffTable::from_fn(d_min, |d| {
            self.entries[&d].clone() + lambda * &other.entries[&d]
        })
    }

    pub fn scale(&self, lambda: &Rat) -> JacobiCoeffTable {
        JacobiCoeffTable::from_fn(self.d_min, |d| lambda * &self.entries[&d])
    }

    /// CSV rendering: header `D,coefficient`, one row per discriminant with
    /// `|D|` increasing. Integer coefficients print without denominator.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("D,coefficient\n");
        for (d, c) in self.iter() {
            let _ = writeln!(out, "{},{}", d, crate::rational::display_rat(c));
        }
        out
    }
}

use num_traits::Zero;

/// Which classical class-number series a table should hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassSeriesKind {
    /// Hurwitz class numbers `H(d)`.
    Hurwitz,
    /// Level-refined class numbers `H_N(d)`.
    Level(i64),
    /// Cohen-Eisenstein coefficients at a prime level.
    CohenEisenstein(i64),
    /// The rationalized level-`N` combination entering the McKay-Thompson
    /// series (see `qf::rationalized_class_combination`).
    Rationalized(i64),
}

/// Materialize a class-number series as a coefficient table.
pub fn class_number_table(kind: ClassSeriesKind, d_min: i64) -> JacobiCoeffTable {
    JacobiCoeffTable::from_fn(d_min, |d| match kind {
        ClassSeriesKind::Hurwitz => qf::hurwitz_class_number(d),
        ClassSeriesKind::Level(n) => qf::hurwitz_class_number_level(n, d),
        ClassSeriesKind::CohenEisenstein(p) => qf::cohen_eisenstein_coeff(p, d),
        ClassSeriesKind::Rationalized(n) => qf::rationalized_class_combination(n, d),
    })
}

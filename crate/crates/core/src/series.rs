//! Truncated two-variable Fourier expansions with exact rational coefficients.
//!
//! A [`QYSeries`] stores finitely many terms `c * q^(qn/qd) * y^(yn/yd)`.
//! Exponents live on fixed grids: every `q`-exponent is an integer multiple
//! of `1/q_den` and every `y`-exponent an integer multiple of `1/y_den`.
//! Alongside the terms we carry an exactness certificate, the [`SeriesBox`]:
//! the coefficients are correct for all `q`-exponents strictly below
//! `q_max` and all `y`-exponents inside the window (or for every
//! `y`-exponent when the window is marked complete). Arithmetic shrinks the
//! box according to conservative rules so that a coefficient read inside the
//! box of a derived series is always the true coefficient of the underlying
//! analytic object.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::rational::{rat, ratio, Rat};

/// Region in which a two-variable expansion converges and is compared.
///
/// Series may only be combined arithmetically when their conventions agree:
/// the coefficient-wise operations are the same, but the *meaning* of a
/// coefficient list differs between the two regions, so mixing them is
/// almost always a logic error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Convention {
    /// Finite Laurent polynomial in `y` at each `q`-order; valid for all `y`.
    FinitePolynomial,
    /// Expansion in the annulus `|q| < |y| < 1`, where `y`-support at a fixed
    /// `q`-order may be infinite in the positive `y`-direction.
    AnnulusQltYlt1,
}

/// Exactness certificate for a [`QYSeries`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesBox {
    /// Coefficients are exact for `q`-exponents `< q_max`.
    pub q_max: Rat,
    /// Inclusive window of exact `y`-exponents, ignored when `y_complete`.
    pub y_lo: i64,
    pub y_hi: i64,
    /// True when the stored support is the full support: coefficients are
    /// exact for *every* `y`-exponent (below `q_max`).
    pub y_complete: bool,
}

impl SeriesBox {
    /// Box exact for all `y` and for `q`-exponents below `q_max`.
    pub fn complete(q_max: Rat) -> Self {
        SeriesBox { q_max, y_lo: i64::MIN / 4, y_hi: i64::MAX / 4, y_complete: true }
    }

    /// Box exact on the inclusive `y`-window `[y_lo, y_hi]`.
    pub fn windowed(q_max: Rat, y_lo: i64, y_hi: i64) -> Self {
        SeriesBox { q_max, y_lo, y_hi, y_complete: false }
    }

    /// Does the box contain the exponent pair (`q`, `y`)?
    pub fn contains(&self, q_exp: &Rat, y_exp: &Rat) -> bool {
        if *q_exp >= self.q_max {
            return false;
        }
        if self.y_complete {
            return true;
        }
        rat(self.y_lo) <= *y_exp && *y_exp <= rat(self.y_hi)
    }

    fn intersect(&self, other: &SeriesBox) -> SeriesBox {
        let q_max = self.q_max.clone().min(other.q_max.clone());
        if self.y_complete && other.y_complete {
            return SeriesBox::complete(q_max);
        }
        SeriesBox {
            q_max,
            y_lo: self.y_lo.max(other.y_lo),
            y_hi: self.y_hi.min(other.y_hi),
            y_complete: false,
        }
    }
}

/// Errors raised by series construction and arithmetic.
#[derive(Debug, thiserror::Error)]
pub enum SeriesError {
    #[error("convention mismatch between operands")]
    ConventionMismatch,
    #[error("cannot multiply two y-windowed series; combine complete factors first")]
    WindowedProduct,
    #[error("series is not invertible: {0}")]
    NotInvertible(String),
    #[error("inverse failed multiply-back validation on the claimed box")]
    InverseValidation,
    #[error("exponent outside the exactness box")]
    OutsideBox,
    #[error("coefficient support extends outside the allowed region: {0}")]
    SupportViolation(String),
    #[error("malformed series text: {0}")]
    Parse(String),
}

/// Truncated exact series in `q` and `y`. See the module documentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QYSeries {
    q_den: i64,
    y_den: i64,
    convention: Convention,
    /// `(q_num, y_num) -> coefficient`; zero coefficients are never stored.
    terms: BTreeMap<(i64, i64), Rat>,
    bx: SeriesBox,
}

impl QYSeries {
    /// Zero series on the given grids.
    pub fn zero(q_den: i64, y_den: i64, convention: Convention, bx: SeriesBox) -> Self {
        assert!(q_den > 0 && y_den > 0);
        QYSeries { q_den, y_den, convention, terms: BTreeMap::new(), bx }
    }

    /// Constant one.
    pub fn one(convention: Convention, bx: SeriesBox) -> Self {
        let mut s = QYSeries::zero(1, 1, convention, bx);
        s.set_term(0, 0, rat(1));
        s
    }

    /// Single term `c * q^(q_num/q_den) * y^(y_num/y_den)`.
    pub fn monomial(
        q_den: i64,
        y_den: i64,
        q_num: i64,
        y_num: i64,
        c: Rat,
        convention: Convention,
        bx: SeriesBox,
    ) -> Self {
        let mut s = QYSeries::zero(q_den, y_den, convention, bx);
        s.set_term(q_num, y_num, c);
        s
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn q_den(&self) -> i64 {
        self.q_den
    }

    pub fn y_den(&self) -> i64 {
        self.y_den
    }

    pub fn series_box(&self) -> &SeriesBox {
        &self.bx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (necessarily nonzero) terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterate stored terms as (`q`-exponent, `y`-exponent, coefficient) in
    /// lexicographic (`q`, then `y`) order.
    pub fn iter_terms(&self) -> impl Iterator<Item = (Rat, Rat, &Rat)> + '_ {
        let (qd, yd) = (self.q_den, self.y_den);
        self.terms
            .iter()
            .map(move |(&(qn, yn), c)| (ratio(qn, qd), ratio(yn, yd), c))
    }

    /// Set one coefficient on the native grid, dropping it if zero or
    /// outside the box.
    pub fn set_term(&mut self, q_num: i64, y_num: i64, c: Rat) {
        let q_exp = ratio(q_num, self.q_den);
        let y_exp = ratio(y_num, self.y_den);
        if c.is_zero() || !self.bx.contains(&q_exp, &y_exp) {
            self.terms.remove(&(q_num, y_num));
        } else {
            self.terms.insert((q_num, y_num), c);
        }
    }

    /// Add to one coefficient on the native grid.
    pub fn add_term(&mut self, q_num: i64, y_num: i64, c: Rat) {
        let cur = self.terms.get(&(q_num, y_num)).cloned().unwrap_or_else(Rat::zero);
        self.set_term(q_num, y_num, cur + c);
    }

    /// Coefficient at exact exponents; `Err` when outside the box.
    pub fn coeff(&self, q_exp: &Rat, y_exp: &Rat) -> Result<Rat, SeriesError> {
        if !self.bx.contains(q_exp, y_exp) {
            return Err(SeriesError::OutsideBox);
        }
        let qn = q_exp * rat(self.q_den);
        let yn = y_exp * rat(self.y_den);
        if !qn.is_integer() || !yn.is_integer() {
            return Ok(Rat::zero()); // off-grid exponents carry coefficient 0
        }
        let key = (
            num_traits::ToPrimitive::to_i64(qn.numer()).expect("q exponent overflow"),
            num_traits::ToPrimitive::to_i64(yn.numer()).expect("y exponent overflow"),
        );
        Ok(self.terms.get(&key).cloned().unwrap_or_else(Rat::zero))
    }

    /// Convenience coefficient lookup at integer exponents.
    pub fn coeff_int(&self, q_exp: i64, y_exp: i64) -> Result<Rat, SeriesError> {
        self.coeff(&rat(q_exp), &rat(y_exp))
    }

    /// Minimum stored `q`-exponent, if any term exists.
    pub fn min_q_exp(&self) -> Option<Rat> {
        self.terms.keys().next().map(|&(qn, _)| ratio(qn, self.q_den))
    }

    /// Inclusive `y`-support bounds over all stored terms.
    pub fn y_support(&self) -> Option<(Rat, Rat)> {
        let mut lo: Option<i64> = None;
        let mut hi: Option<i64> = None;
        for &(_, yn) in self.terms.keys() {
            lo = Some(lo.map_or(yn, |v: i64| v.min(yn)));
            hi = Some(hi.map_or(yn, |v: i64| v.max(yn)));
        }
        Some((ratio(lo?, self.y_den), ratio(hi?, self.y_den)))
    }

    /// Rewrite onto coarser-compatible grids: divide out the gcd of all
    /// stored exponent numerators with the denominator. Purely cosmetic;
    /// the represented series and box are unchanged.
    pub fn reduce_grids(&mut self) {
        let gq = self.terms.keys().fold(self.q_den, |g, &(qn, _)| gcd_i64(g, qn));
        let gy = self.terms.keys().fold(self.y_den, |g, &(_, yn)| gcd_i64(g, yn));
        if gq <= 1 && gy <= 1 {
            return;
        }
        let old = std::mem::take(&mut self.terms);
        self.q_den /= gq;
        self.y_den /= gy;
        self.terms = old
            .into_iter()
            .map(|((qn, yn), c)| ((qn / gq, yn / gy), c))
            .collect();
    }

    /// Restrict the box (and drop now-uncertified terms). The new box must
    /// be contained in the old one, otherwise exactness would be overstated.
    pub fn shrink_box(&mut self, bx: SeriesBox) {
        assert!(bx.q_max <= self.bx.q_max, "box can only shrink");
        if self.bx.y_complete && !bx.y_complete {
            // A complete series restricted to a window stays exact there.
        } else if !self.bx.y_complete {
            assert!(!bx.y_complete, "cannot promote a window to complete");
            assert!(bx.y_lo >= self.bx.y_lo && bx.y_hi <= self.bx.y_hi, "box can only shrink");
        }
        self.bx = bx;
        self.retain_in_box();
    }

    fn retain_in_box(&mut self) {
        let (qd, yd) = (self.q_den, self.y_den);
        let bx = self.bx.clone();
        self.terms
            .retain(|&(qn, yn), _| bx.contains(&ratio(qn, qd), &ratio(yn, yd)));
    }

    fn lift_to_grids(&self, q_den: i64, y_den: i64) -> QYSeries {
        assert!(q_den % self.q_den == 0 && y_den % self.y_den == 0);
        let (fq, fy) = (q_den / self.q_den, y_den / self.y_den);
        QYSeries {
            q_den,
            y_den,
            convention: self.convention,
            terms: self
                .terms
                .iter()
                .map(|(&(qn, yn), c)| ((qn * fq, yn * fy), c.clone()))
                .collect(),
            bx: self.bx.clone(),
        }
    }

    fn unify(a: &QYSeries, b: &QYSeries) -> Result<(QYSeries, QYSeries), SeriesError> {
        if a.convention != b.convention {
            return Err(SeriesError::ConventionMismatch);
        }
        let qd = lcm_i64(a.q_den, b.q_den);
        let yd = lcm_i64(a.y_den, b.y_den);
        Ok((a.lift_to_grids(qd, yd), b.lift_to_grids(qd, yd)))
    }

    /// Sum; box is the intersection of the operand boxes.
    pub fn add(&self, other: &QYSeries) -> Result<QYSeries, SeriesError> {
        let (mut a, b) = QYSeries::unify(self, other)?;
        a.bx = a.bx.intersect(&b.bx);
        a.retain_in_box();
        for (&(qn, yn), c) in &b.terms {
            if a.bx.contains(&ratio(qn, a.q_den), &ratio(yn, a.y_den)) {
                a.add_term(qn, yn, c.clone());
            }
        }
        Ok(a)
    }

    /// Difference; box rules as for [`QYSeries::add`].
    pub fn sub(&self, other: &QYSeries) -> Result<QYSeries, SeriesError> {
        self.add(&other.scale(&rat(-1)))
    }

    /// Scalar multiple; the box is unchanged (still exact).
    pub fn scale(&self, c: &Rat) -> QYSeries {
        let mut out = self.clone();
        if c.is_zero() {
            out.terms.clear();
            return out;
        }
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    /// Product. `q`-exactness follows `min(qa + lb, qb + la)` where `la`,
    /// `lb` are the minimal stored `q`-exponents: a term of the product at
    /// `q`-order `n` is fully determined once every factor pairing landing
    /// on `n` lies inside both operand boxes. For the `y`-window, one
    /// operand must be complete (full known support `[bl, bh]`); the
    /// windowed operand's window then shifts to `[lo + bh, hi + bl]`.
    /// Multiplying two windowed series is rejected.
    pub fn mul(&self, other: &QYSeries) -> Result<QYSeries, SeriesError> {
        let (a, b) = QYSeries::unify(self, other)?;
        let q_max = mul_q_max(&a, &b);
        let bx = if a.bx.y_complete && b.bx.y_complete {
            SeriesBox::complete(q_max)
        } else if b.bx.y_complete {
            shifted_window(&a, &b, q_max)
        } else if a.bx.y_complete {
            shifted_window(&b, &a, q_max)
        } else {
            return Err(SeriesError::WindowedProduct);
        };
        Ok(raw_mul(&a, &b, bx))
    }

    /// Integer power via repeated multiplication.
    pub fn pow(&self, k: u32) -> Result<QYSeries, SeriesError> {
        let mut acc = QYSeries::one(self.convention, self.bx.clone());
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Substitute `q -> q^k`, `y -> y^k` (exponent scaling by a positive
    /// integer). The box scales accordingly.
    pub fn scale_exponents(&self, k: i64) -> QYSeries {
        assert!(k > 0);
        let mut out = self.clone();
        out.terms = self
            .terms
            .iter()
            .map(|(&(qn, yn), c)| ((qn * k, yn * k), c.clone()))
            .collect();
        out.bx.q_max = &self.bx.q_max * rat(k);
        if !out.bx.y_complete {
            out.bx.y_lo = self.bx.y_lo * k;
            out.bx.y_hi = self.bx.y_hi * k;
        }
        out
    }

    /// Substitute `y -> y^k` for a positive integer `k`, leaving `q` alone.
    pub fn scale_y_exponents(&self, k: i64) -> QYSeries {
        assert!(k > 0);
        let mut out = self.clone();
        out.terms = self
            .terms
            .iter()
            .map(|(&(qn, yn), c)| ((qn, yn * k), c.clone()))
            .collect();
        if !out.bx.y_complete {
            out.bx.y_lo = self.bx.y_lo * k;
            out.bx.y_hi = self.bx.y_hi * k;
        }
        out
    }

    /// Substitute `y -> 1/y`. Valid as a formal operation on both
    /// conventions (for annulus series the result is re-read in the same
    /// annulus, which is only meaningful for kernels with this symmetry;
    /// callers are responsible for that).
    pub fn invert_y(&self) -> QYSeries {
        let mut out = self.clone();
        out.terms = self
            .terms
            .iter()
            .map(|(&(qn, yn), c)| ((qn, -yn), c.clone()))
            .collect();
        if !out.bx.y_complete {
            out.bx.y_lo = -self.bx.y_hi;
            out.bx.y_hi = -self.bx.y_lo;
        }
        out
    }

    /// Specialize `y -> 1` (trace of the elliptic variable), producing a
    /// pure `q`-series. Only valid when every `q`-order has finite stored
    /// support that is known complete.
    pub fn eval_y_one(&self) -> Result<QYSeries, SeriesError> {
        if !self.bx.y_complete {
            return Err(SeriesError::SupportViolation(
                "y -> 1 specialization needs complete y-support".into(),
            ));
        }
        let mut out = QYSeries::zero(self.q_den, 1, self.convention, self.bx.clone());
        for (&(qn, _), c) in &self.terms {
            out.add_term(qn, 0, c.clone());
        }
        Ok(out)
    }

    /// Multiplicative inverse, when the series is a unit. The leading
    /// `q`-block is inverted first (choosing the expansion direction that
    /// is small in the series' region), then a geometric (Neumann) series
    /// removes the higher-order remainder. The result is validated by
    /// multiplying back: `self * inverse` must equal `1` on the entire
    /// claimed box, which fails if `y`-truncation leaked into it; callers
    /// pass `y_margin` to shrink the claimed window and absorb such leaks.
    pub fn invert(&self, y_margin: i64) -> Result<QYSeries, SeriesError> {
        series_invert(self, y_margin)
    }

    /// Canonical text form: one line per term, `q`-major lexicographic
    /// order, each line `qNum/qDen yExpNum/yExpDen coeffNum/coeffDen`.
    pub fn to_canonical_text(&self) -> String {
        let mut out = String::new();
        for (&(qn, yn), c) in &self.terms {
            let _ = writeln!(
                out,
                "{}/{} {}/{} {}/{}",
                qn,
                self.q_den,
                yn,
                self.y_den,
                c.numer(),
                c.denom()
            );
        }
        out
    }

    /// Parse the canonical text form produced by
    /// [`QYSeries::to_canonical_text`] into a series on the given grids
    /// with the given box.
    pub fn from_canonical_text(
        text: &str,
        convention: Convention,
        bx: SeriesBox,
    ) -> Result<QYSeries, SeriesError> {
        let mut q_den = 1i64;
        let mut y_den = 1i64;
        let mut parsed: Vec<(i64, i64, i64, i64, Rat)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = || SeriesError::Parse(format!("line {}", lineno + 1));
            let mut fields = line.split_whitespace();
            let next_pair = |fields: &mut dyn Iterator<Item = &str>| -> Result<(i64, i64), SeriesError> {
                let f = fields.next().ok_or_else(bad)?;
                let (n, d) = f.split_once('/').ok_or_else(bad)?;
                let n: i64 = n.parse().map_err(|_| bad())?;
                let d: i64 = d.parse().map_err(|_| bad())?;
                if d <= 0 {
                    return Err(bad());
                }
                Ok((n, d))
            };
            let (qn, qd) = next_pair(&mut fields)?;
            let (yn, yd) = next_pair(&mut fields)?;
            let (cn, cd) = next_pair(&mut fields)?;
            if fields.next().is_some() {
                return Err(bad());
            }
            q_den = lcm_i64(q_den, qd);
            y_den = lcm_i64(y_den, yd);
            parsed.push((qn, qd, yn, yd, ratio(cn, cd)));
        }
        let mut s = QYSeries::zero(q_den, y_den, convention, bx);
        for (qn, qd, yn, yd, c) in parsed {
            s.add_term(qn * (q_den / qd), yn * (y_den / yd), c);
        }
        Ok(s)
    }
}

/// `q`-exactness of a product, per the rule in [`QYSeries::mul`].
fn mul_q_max(a: &QYSeries, b: &QYSeries) -> Rat {
    let la = a.min_q_exp().unwrap_or_else(|| a.bx.q_max.clone());
    let lb = b.min_q_exp().unwrap_or_else(|| b.bx.q_max.clone());
    (&a.bx.q_max + lb).min(&b.bx.q_max + la)
}

/// Window of `windowed * complete`: support `[bl, bh]` of the complete
/// factor shifts the window to `[lo + bh, hi + bl]` (a product coefficient
/// at `y`-order inside the shifted window only draws on windowed-factor
/// coefficients inside `[lo, hi]`).
fn shifted_window(windowed: &QYSeries, complete: &QYSeries, q_max: Rat) -> SeriesBox {
    let (bl, bh) = match complete.y_support() {
        Some((lo, hi)) => (floor_i64(&lo), ceil_i64(&hi)),
        None => (0, 0),
    };
    SeriesBox::windowed(q_max, windowed.bx.y_lo.saturating_add(bh), windowed.bx.y_hi.saturating_add(bl))
}

/// Coefficient-wise product on unified grids, truncated to `bx`.
fn raw_mul(a: &QYSeries, b: &QYSeries, bx: SeriesBox) -> QYSeries {
    let mut out = QYSeries::zero(a.q_den, a.y_den, a.convention, bx);
    let q_max_num = &out.bx.q_max * rat(out.q_den);
    for (&(qa, ya), ca) in &a.terms {
        for (&(qb, yb), cb) in &b.terms {
            let qn = qa + qb;
            if rat(qn) >= q_max_num {
                continue;
            }
            let yn = ya + yb;
            if !out.bx.y_complete {
                let ye = ratio(yn, out.y_den);
                if ye < rat(out.bx.y_lo) || ye > rat(out.bx.y_hi) {
                    continue;
                }
            }
            out.add_term(qn, yn, ca * cb);
        }
    }
    out
}

/// See [`QYSeries::invert`].
fn series_invert(a: &QYSeries, y_margin: i64) -> Result<QYSeries, SeriesError> {
    if a.terms.is_empty() {
        return Err(SeriesError::NotInvertible("zero series".into()));
    }
    let q0 = *a.terms.keys().next().map(|(qn, _)| qn).unwrap();
    // Leading q-block as a Laurent polynomial in y.
    let block: Vec<(i64, Rat)> = a
        .terms
        .iter()
        .filter(|(&(qn, _), _)| qn == q0)
        .map(|(&(_, yn), c)| (yn, c.clone()))
        .collect();
    let (v, u) = (block[0].0, block[0].1.clone());
    // Invert the block as u * y^v * (1 + sum_{j>0} c_j y^j). The correction
    // monomials y^j (j > 0, q-order 0) are only small in the annulus
    // |q| < |y| < 1; for finite-polynomial series the block must be a
    // monomial. This is the one genuine branch choice of the expansion;
    // the remaining Neumann iteration is forced q-adically.
    let corrections: Vec<(i64, Rat)> = block
        .iter()
        .skip(1)
        .map(|(yn, c)| (yn - v, c / &u))
        .collect();
    if !corrections.is_empty() && a.convention == Convention::FinitePolynomial {
        return Err(SeriesError::NotInvertible(
            "leading q-block is not a monomial; expansion would not stay polynomial in y".into(),
        ));
    }
    let work_bx = a.bx.clone();
    let mut block_inv = QYSeries::monomial(
        a.q_den,
        a.y_den,
        -q0,
        -v,
        rat(1) / &u,
        a.convention,
        SeriesBox {
            q_max: &work_bx.q_max - ratio(q0, a.q_den),
            ..work_bx.clone()
        },
    );
    if !corrections.is_empty() {
        // Geometric series in the strictly positive y-shifts c_j y^j,
        // truncated at the storage window's upper edge.
        let min_shift = corrections.iter().map(|(j, _)| *j).min().unwrap();
        debug_assert!(min_shift > 0, "leading block must start at its minimal y-term");
        let span = if work_bx.y_complete {
            return Err(SeriesError::NotInvertible(
                "cannot certify complete y-support for a non-monomial leading block".into(),
            ));
        } else {
            (work_bx.y_hi - work_bx.y_lo).max(0)
        };
        let mut geo = QYSeries::zero(a.q_den, a.y_den, a.convention, block_inv.bx.clone());
        geo.set_term(0, 0, rat(1));
        let mut power = geo.clone();
        let mut shift_term = QYSeries::zero(a.q_den, a.y_den, a.convention, block_inv.bx.clone());
        for (j, c) in &corrections {
            shift_term.set_term(0, *j, -c.clone());
        }
        let max_pow = span / min_shift + 1;
        for _ in 0..max_pow {
            power = raw_mul(&power, &shift_term, block_inv.bx.clone());
            if power.is_zero() {
                break;
            }
            geo = geo.add(&power)?;
        }
        block_inv = raw_mul(&block_inv, &geo, block_inv.bx.clone());
    }
    // Neumann removal of the higher-order remainder r = 1 - a * block_inv.
    let one = QYSeries::one(a.convention, block_inv.bx.clone()).lift_to_grids(a.q_den, a.y_den);
    let prod = raw_mul(a, &block_inv, block_inv.bx.clone());
    let mut r = one.sub(&prod)?;
    // Truncating the block inverse at the window edge leaves q-order-zero
    // residue next to the edge. Discard it here; the shrunken claimed
    // window plus the multiply-back certificate below account for it. Any
    // nonpositive-q remainder *away* from the edge means a genuine
    // inversion failure.
    let stale: Vec<(i64, i64)> = r
        .terms
        .iter()
        .filter(|(&(qn, _), _)| qn <= 0)
        .map(|(&k, _)| k)
        .collect();
    for (qn, yn) in stale {
        let near_edge = !r.bx.y_complete
            && (yn >= (r.bx.y_hi - y_margin) * r.y_den || yn <= (r.bx.y_lo + y_margin) * r.y_den);
        if !near_edge {
            return Err(SeriesError::NotInvertible(
                "remainder after leading-block inversion has nonpositive q-order".into(),
            ));
        }
        r.terms.remove(&(qn, yn));
    }
    let mut acc = one.clone();
    let mut power = one.clone();
    loop {
        power = raw_mul(&power, &r, block_inv.bx.clone());
        if power.is_zero() {
            break;
        }
        acc = acc.add(&power)?;
    }
    let mut inv = raw_mul(&block_inv, &acc, block_inv.bx.clone());
    // Claim a window shrunk by the caller's margin, then certify it by
    // multiplying back: a * inv must be exactly 1 on a's box intersected
    // with the claimed (shifted) product window.
    if !inv.bx.y_complete {
        let claimed = SeriesBox::windowed(
            inv.bx.q_max.clone(),
            inv.bx.y_lo.saturating_add(y_margin),
            inv.bx.y_hi.saturating_sub(y_margin),
        );
        inv.shrink_box(claimed);
    }
    let check_bx = if inv.bx.y_complete {
        SeriesBox::complete(inv.bx.q_max.clone().min(a.bx.q_max.clone()))
    } else {
        // Product coefficients drawn from inv's claimed window and a's
        // stored support; exact there if the claimed window is honest.
        let (al, ah) = match a.y_support() {
            Some((lo, hi)) => (floor_i64(&lo), ceil_i64(&hi)),
            None => (0, 0),
        };
        SeriesBox::windowed(
            inv.bx.q_max.clone().min(a.bx.q_max.clone()),
            inv.bx.y_lo.saturating_add(ah),
            inv.bx.y_hi.saturating_add(al),
        )
    };
    let check = raw_mul(a, &inv, check_bx);
    let mut expect_one = QYSeries::one(a.convention, check.bx.clone());
    expect_one = expect_one.lift_to_grids(check.q_den, check.y_den);
    expect_one.retain_in_box();
    if check != expect_one {
        return Err(SeriesError::InverseValidation);
    }
    Ok(inv)
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm_i64(a: i64, b: i64) -> i64 {
    a / gcd_i64(a, b) * b
}

fn floor_i64(x: &Rat) -> i64 {
    num_traits::ToPrimitive::to_i64(x.floor().numer()).expect("exponent overflow")
}

fn ceil_i64(x: &Rat) -> i64 {
    num_traits::ToPrimitive::to_i64(x.ceil().numer()).expect("exponent overflow")
}

/// Signum helper for tests and table code.
pub fn rat_sign(x: &Rat) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn fin_box(qmax: i64) -> SeriesBox {
        SeriesBox::complete(rat(qmax))
    }

    fn geom(qmax: i64) -> QYSeries {
        // 1 - q
        let mut s = QYSeries::zero(1, 1, Convention::FinitePolynomial, fin_box(qmax));
        s.set_term(0, 0, rat(1));
        s.set_term(1, 0, rat(-1));
        s
    }

    #[test]
    fn add_mul_basics() {
        let a = geom(10);
        let b = a.mul(&a).unwrap(); // (1-q)^2
        assert_eq!(b.coeff_int(0, 0).unwrap(), rat(1));
        assert_eq!(b.coeff_int(1, 0).unwrap(), rat(-2));
        assert_eq!(b.coeff_int(2, 0).unwrap(), rat(1));
        assert_eq!(b.coeff_int(3, 0).unwrap(), rat(0));
        let c = a.add(&a).unwrap();
        assert_eq!(c.coeff_int(0, 0).unwrap(), rat(2));
    }

    #[test]
    fn zero_coeffs_never_stored() {
        let a = geom(10);
        let d = a.sub(&a).unwrap();
        assert!(d.is_zero());
        assert_eq!(d.term_count(), 0);
    }

    #[test]
    fn invert_pure_q_unit() {
        let a = geom(12);
        let inv = a.invert(0).unwrap();
        for n in 0..12 {
            assert_eq!(inv.coeff_int(n, 0).unwrap(), rat(1), "1/(1-q) at q^{n}");
        }
    }

    #[test]
    fn invert_requires_unit() {
        let mut a = QYSeries::zero(1, 1, Convention::FinitePolynomial, fin_box(5));
        a.set_term(0, 0, rat(1));
        a.set_term(0, 1, rat(1)); // 1 + y: not invertible as a finite polynomial
        assert!(a.invert(0).is_err());
    }

    #[test]
    fn invert_annulus_y_block() {
        // y - 2 + 1/y inverts to y/(1-y)^2 = sum_{k>=1} k y^k in |q|<|y|<1.
        let mut a = QYSeries::zero(
            1,
            1,
            Convention::AnnulusQltYlt1,
            SeriesBox::windowed(rat(6), -12, 12),
        );
        a.set_term(0, -1, rat(1));
        a.set_term(0, 0, rat(-2));
        a.set_term(0, 1, rat(1));
        let inv = a.invert(2).unwrap();
        for k in 1..=8 {
            assert_eq!(inv.coeff_int(0, k).unwrap(), rat(k), "kernel coefficient k={k}");
        }
        assert_eq!(inv.coeff_int(0, 0).unwrap(), rat(0));
    }

    #[test]
    fn mul_q_exactness_uses_min_exponents() {
        // a = q^2 * (1/(1-q)) exact below 10; b = 1 - q exact below 3.
        let mut a = QYSeries::zero(1, 1, Convention::FinitePolynomial, fin_box(10));
        for n in 2..10 {
            a.set_term(n, 0, rat(1));
        }
        let b = geom(3);
        let p = a.mul(&b).unwrap();
        // Exact below min(10 + 0, 3 + 2) = 5.
        assert_eq!(p.series_box().q_max, rat(5));
        assert_eq!(p.coeff_int(2, 0).unwrap(), rat(1));
        assert_eq!(p.coeff_int(3, 0).unwrap(), rat(0));
        assert_eq!(p.coeff_int(4, 0).unwrap(), rat(0));
        assert!(p.coeff_int(5, 0).is_err());
    }

    #[test]
    fn windowed_times_windowed_rejected() {
        let bx = SeriesBox::windowed(rat(4), -3, 3);
        let mut a = QYSeries::zero(1, 1, Convention::AnnulusQltYlt1, bx.clone());
        a.set_term(0, 1, rat(1));
        assert!(matches!(a.mul(&a), Err(SeriesError::WindowedProduct)));
    }

    #[test]
    fn windowed_times_complete_shifts_window() {
        let mut w = QYSeries::zero(1, 1, Convention::AnnulusQltYlt1, SeriesBox::windowed(rat(4), -5, 5));
        w.set_term(0, 1, rat(1));
        let mut c = QYSeries::zero(1, 1, Convention::AnnulusQltYlt1, SeriesBox::complete(rat(4)));
        c.set_term(0, -1, rat(1));
        c.set_term(0, 2, rat(3));
        let p = w.mul(&c).unwrap();
        assert_eq!((p.series_box().y_lo, p.series_box().y_hi), (-3, 4));
    }

    #[test]
    fn canonical_text_round_trip() {
        let mut a = QYSeries::zero(8, 2, Convention::AnnulusQltYlt1, SeriesBox::windowed(rat(3), -4, 4));
        a.set_term(1, 1, ratio(3, 2));
        a.set_term(9, -2, rat(-5));
        let text = a.to_canonical_text();
        assert_eq!(text, "1/8 1/2 3/2\n9/8 -2/2 -5/1\n");
        let b = QYSeries::from_canonical_text(&text, Convention::AnnulusQltYlt1, a.series_box().clone())
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn grid_unification_lcm() {
        let mut a = QYSeries::zero(8, 1, Convention::FinitePolynomial, fin_box(3));
        a.set_term(1, 0, rat(1)); // q^{1/8}
        let mut b = QYSeries::zero(24, 1, Convention::FinitePolynomial, fin_box(3));
        b.set_term(1, 0, rat(1)); // q^{1/24}
        let s = a.add(&b).unwrap();
        assert_eq!(s.q_den(), 24);
        assert_eq!(s.coeff(&ratio(1, 8), &rat(0)).unwrap(), rat(1));
        assert_eq!(s.coeff(&ratio(1, 24), &rat(0)).unwrap(), rat(1));
        assert_eq!(s.coeff(&ratio(1, 12), &rat(0)).unwrap(), rat(0));
    }

    #[test]
    fn convention_mismatch_rejected() {
        let a = geom(4);
        let mut b = QYSeries::zero(1, 1, Convention::AnnulusQltYlt1, fin_box(4));
        b.set_term(0, 0, rat(1));
        assert!(matches!(a.add(&b), Err(SeriesError::ConventionMismatch)));
    }
}

//! The two optimal M11 module families: McKay-Thompson coefficient tables,
//! the auxiliary cusp-form tables at levels 8 and 11, multiplicity
//! generating functions, and diffing against the bundled reference tables.
//!
//! Reference data lives under `src/data/` and is compiled in; set the
//! `MOCKJAC_DATA_DIR` environment variable to load the files from another
//! directory instead (same names, same format).

use std::collections::BTreeMap;
use std::sync::Mutex;

use num_traits::Zero;
use once_cell::sync::Lazy;

use crate::chars::{m11_character_table, CLASS_ORDERS};
use crate::classical::{euler_product, theta_mr, theta_mr_nullwert};
use crate::qf::rationalized_class_combination;
use crate::rational::{rat, ratio, to_i64, Rat};
use crate::series::{Convention, QYSeries};
use crate::table::{is_discriminant, JacobiCoeffTable};

/// Errors from table construction and reference diffing.
#[derive(Debug, thiserror::Error)]
pub enum MoonshineError {
    #[error("discriminant range to {requested} exceeds bundled data (limit {available})")]
    Range { requested: i64, available: i64 },
    #[error("normalization check failed: {0}")]
    Normalization(String),
    #[error("non-integral value where an integer is required: {0}")]
    NonIntegral(String),
    #[error("inconsistent coefficients: {0}")]
    Inconsistent(String),
    #[error("unknown class or character label: {0}")]
    UnknownClass(String),
    #[error("malformed bundled data: {0}")]
    Data(String),
}

/// Which of the two module families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtVariant {
    /// Trivial character assignment on every class.
    Default,
    /// Nontrivial characters on the order-4 and order-8 classes.
    Twisted,
}

/// Load a bundled data file, honoring the `MOCKJAC_DATA_DIR` override.
fn data_file(name: &str) -> Result<String, MoonshineError> {
    if let Ok(dir) = std::env::var("MOCKJAC_DATA_DIR") {
        return std::fs::read_to_string(std::path::Path::new(&dir).join(name))
            .map_err(|e| MoonshineError::Data(format!("{name}: {e}")));
    }
    let builtin = match name {
        "table2.csv" => include_str!("data/table2.csv"),
        "table3.csv" => include_str!("data/table3.csv"),
        "table4.csv" => include_str!("data/table4.csv"),
        "table5.csv" => include_str!("data/table5.csv"),
        "phi11.csv" => include_str!("data/phi11.csv"),
        _ => return Err(MoonshineError::Data(format!("no bundled file {name}"))),
    };
    Ok(builtin.to_string())
}

/// A bundled reference table: column labels plus one row of rational values
/// per discriminant `-108 <= d <= 0`.
#[derive(Debug, Clone)]
pub struct ReferenceTable {
    pub columns: Vec<String>,
    rows: BTreeMap<i64, Vec<Rat>>,
}

impl ReferenceTable {
    pub fn value(&self, d: i64, column: &str) -> Option<&Rat> {
        let idx = self.columns.iter().position(|c| c == column)?;
        self.rows.get(&d).map(|row| &row[idx])
    }

    pub fn discriminants(&self) -> impl Iterator<Item = i64> + '_ {
        self.rows.keys().rev().copied()
    }
}

fn parse_reference_csv(text: &str) -> Result<ReferenceTable, MoonshineError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| MoonshineError::Data("empty file".into()))?;
    let mut columns: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let key = columns.remove(0);
    let negate = match key.as_str() {
        "absD" => true,
        "D" => false,
        other => return Err(MoonshineError::Data(format!("bad key column {other}"))),
    };
    let mut rows = BTreeMap::new();
    for line in lines {
        let mut fields = line.split(',').map(str::trim);
        let d: i64 = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| MoonshineError::Data(format!("bad row: {line}")))?;
        let d = if negate { -d } else { d };
        let values: Vec<Rat> = fields
            .map(|f| {
                let (n, den) = f.split_once('/').unwrap_or((f, "1"));
                Ok(ratio(
                    n.parse().map_err(|_| MoonshineError::Data(format!("bad value {f}")))?,
                    den.parse().map_err(|_| MoonshineError::Data(format!("bad value {f}")))?,
                ))
            })
            .collect::<Result<_, MoonshineError>>()?;
        if values.len() != columns.len() {
            return Err(MoonshineError::Data(format!("row width mismatch: {line}")));
        }
        rows.insert(d, values);
    }
    Ok(ReferenceTable { columns, rows })
}

/// Bundled reference table 2, 3, 4 or 5 (coefficients of the default and
/// twisted families and their multiplicity functions, `|d| <= 108`).
pub fn reference_table(which: u8) -> Result<&'static ReferenceTable, MoonshineError> {
    static TABLES: Lazy<Mutex<BTreeMap<u8, &'static ReferenceTable>>> =
        Lazy::new(|| Mutex::new(BTreeMap::new()));
    let mut guard = TABLES.lock().unwrap();
    if let Some(t) = guard.get(&which) {
        return Ok(t);
    }
    if !(2..=5).contains(&which) {
        return Err(MoonshineError::Data(format!("no reference table {which}")));
    }
    let parsed = parse_reference_csv(&data_file(&format!("table{which}.csv"))?)?;
    let leaked: &'static ReferenceTable = Box::leak(Box::new(parsed));
    guard.insert(which, leaked);
    Ok(leaked)
}

/// Coefficient `a(n)` of the eta quotient
/// `eta(4 tau)^5 eta(16 tau) / (eta(2 tau)^2 eta(8 tau)) = sum a(n) q^n`,
/// supported on odd `n >= 1`. Memoized; the expansion order grows on
/// demand.
pub fn tunnell_a(n: i64) -> i64 {
    static CACHE: Lazy<Mutex<(i64, Vec<i64>)>> = Lazy::new(|| Mutex::new((0, Vec::new())));
    assert!(n >= 1);
    let mut guard = CACHE.lock().unwrap();
    if n >= guard.0 {
        let order = (n + 1).max(256);
        const FP: Convention = Convention::FinitePolynomial;
        let quotient = euler_product(4, 5, order, FP)
            .mul(&euler_product(16, 1, order, FP))
            .and_then(|s| s.mul(&euler_product(2, -2, order, FP)))
            .and_then(|s| s.mul(&euler_product(8, -1, order, FP)))
            .expect("eta quotient product");
        let mut coeffs = vec![0i64; order as usize];
        for (qe, _, c) in quotient.iter_terms() {
            // The q^1 prefactor from the eta leading exponents shifts
            // everything up by one.
            let k = to_i64(&qe).expect("integral exponent") + 1;
            if k < order {
                coeffs[k as usize] = to_i64(c).expect("integral coefficient");
            }
        }
        *guard = (order, coeffs);
    }
    guard.1[n as usize]
}

/// Coefficient table of the level-8 cusp form: `C(d) = a(|d|)/2` for
/// `d = 5 mod 8`, and 0 for `d = 1 mod 8` and for all even `d`. The
/// leading coefficient `C(-3) = 1` is enforced.
pub fn phi84_table(d_min: i64) -> Result<JacobiCoeffTable, MoonshineError> {
    if tunnell_a(3) != 2 {
        return Err(MoonshineError::Normalization(format!(
            "level-8 cusp form leading coefficient: a(3) = {}, expected 2",
            tunnell_a(3)
        )));
    }
    Ok(JacobiCoeffTable::from_fn(d_min, |d| {
        if d.rem_euclid(8) == 5 {
            ratio(tunnell_a(-d), 2)
        } else {
            Rat::zero()
        }
    }))
}

/// Coefficient value of the level-8 cusp form at one discriminant.
pub fn phi84_coeff(d: i64) -> Rat {
    if d <= 0 && d.rem_euclid(8) == 5 {
        ratio(tunnell_a(-d), 2)
    } else {
        Rat::zero()
    }
}

const PHI11_D_MIN: i64 = -108;

/// Coefficient table of the level-11 cusp form over `-108 <= d <= 0`,
/// bundled as derived data (see `data/phi11.csv` for the deriving
/// formula). Validated at load: integral entries, leading coefficients
/// `C(-3) = 1` and `C(-4) = -1`, and agreement with the deriving formula
/// against the order-11 reference column.
pub fn phi11_table(d_min: i64) -> Result<&'static JacobiCoeffTable, MoonshineError> {
    static TABLE: Lazy<Result<JacobiCoeffTable, MoonshineError>> = Lazy::new(load_phi11);
    if d_min < PHI11_D_MIN {
        return Err(MoonshineError::Range { requested: d_min, available: PHI11_D_MIN });
    }
    match &*TABLE {
        Ok(t) => Ok(t),
        Err(e) => Err(MoonshineError::Data(e.to_string())),
    }
}

fn load_phi11() -> Result<JacobiCoeffTable, MoonshineError> {
    let parsed = parse_reference_csv(&data_file("phi11.csv")?)?;
    let reference = reference_table(2)?;
    let mut table = JacobiCoeffTable::zeros(PHI11_D_MIN);
    for d in (PHI11_D_MIN..=0).rev() {
        if !is_discriminant(d) {
            continue;
        }
        let c = parsed
            .value(d, "coefficient")
            .ok_or_else(|| MoonshineError::Data(format!("phi11 missing d = {d}")))?
            .clone();
        if !c.is_integer() {
            return Err(MoonshineError::NonIntegral(format!("phi11 at {d}: {c}")));
        }
        // Re-derive: C(d) = (5/11) (2 R_11(d) - reference coefficient).
        let derived = ratio(5, 11)
            * (rat(2) * rationalized_class_combination(11, d)
                - reference.value(d, "11AB").unwrap().clone());
        if c != derived {
            return Err(MoonshineError::Inconsistent(format!(
                "phi11 at {d}: bundled {c}, derived {derived}"
            )));
        }
        table.set(d, c);
    }
    if table.get(-3) != Some(&rat(1)) || table.get(-4) != Some(&rat(-1)) {
        return Err(MoonshineError::Normalization(
            "phi11 leading coefficients must be 1 at -3 and -1 at -4".into(),
        ));
    }
    Ok(table)
}

/// Read a discriminant-indexed coefficient table off a pure power series
/// with complete support, checking that all representatives `(n, s)` of a
/// discriminant agree.
fn series_to_disc_table(
    series: &QYSeries,
    d_min: i64,
) -> Result<JacobiCoeffTable, MoonshineError> {
    let n_max = to_i64(&(series.series_box().q_max.clone() - rat(1))).unwrap_or(0);
    let mut table = JacobiCoeffTable::zeros(d_min);
    for d in d_min..=0 {
        if !is_discriminant(d) {
            continue;
        }
        let mut value: Option<Rat> = None;
        let mut s = d.rem_euclid(2);
        loop {
            let n = (s * s - d) / 4;
            if n > n_max {
                break;
            }
            for se in [s, -s] {
                let c = series.coeff_int(n, se).map_err(|e| {
                    MoonshineError::Inconsistent(format!("coefficient read at ({n}, {se}): {e}"))
                })?;
                match &value {
                    None => value = Some(c),
                    Some(v) if *v == c => {}
                    Some(v) => {
                        return Err(MoonshineError::Inconsistent(format!(
                            "discriminant {d}: {v} vs {c} at (n, s) = ({n}, {se})"
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
                return Err(MoonshineError::Range { requested: d, available: -4 * n_max })
            }
        }
    }
    Ok(table)
}

/// The order-4 / order-8 twisted series
/// `-2 theta^0_{1,0} (theta^0_{m,0} - theta^0_{m,m})^2 theta_{1,0}(tau, z)`
/// with `m = 4` for order 4 and `m = 16` for order 8. Supported on even
/// discriminants only.
fn twisted_theta_table(m: i64, d_min: i64) -> Result<JacobiCoeffTable, MoonshineError> {
    const FP: Convention = Convention::FinitePolynomial;
    let q_max = -d_min / 4 + 30;
    let nullwert = theta_mr_nullwert(1, 0, q_max, FP);
    let diff = theta_mr_nullwert(m, 0, q_max, FP)
        .sub(&theta_mr_nullwert(m, m, q_max, FP))
        .expect("same grid");
    let series = nullwert
        .mul(&diff)
        .and_then(|s| s.mul(&diff))
        .and_then(|s| s.mul(&theta_mr(1, 0, q_max, FP)))
        .expect("theta product")
        .scale(&rat(-2));
    series_to_disc_table(&series, d_min)
}

fn class_order(label: &str) -> Result<i64, MoonshineError> {
    let canon = label.to_ascii_uppercase();
    let stripped = canon.trim_end_matches(|c: char| c.is_ascii_alphabetic());
    let order: i64 = stripped
        .parse()
        .map_err(|_| MoonshineError::UnknownClass(label.to_string()))?;
    let suffix = &canon[stripped.len()..];
    let valid = matches!(
        (order, suffix),
        (1 | 2 | 3 | 4 | 5 | 6, "A") | (8 | 11, "A" | "B" | "AB") | (1..=6, "")
            | (8 | 11, "")
    );
    if !valid {
        return Err(MoonshineError::UnknownClass(label.to_string()));
    }
    Ok(order)
}

/// McKay-Thompson coefficient table for one class of the chosen family.
/// Classes are named by order with letter suffix (`"3A"`, `"8AB"`, ...);
/// classes of equal order share one table in both families.
pub fn mt_series(
    variant: MtVariant,
    class: &str,
    d_min: i64,
) -> Result<JacobiCoeffTable, MoonshineError> {
    let order = class_order(class)?;
    mt_series_by_order(variant, order, d_min)
}

/// As [`mt_series`], keyed directly by element order.
pub fn mt_series_by_order(
    variant: MtVariant,
    order: i64,
    d_min: i64,
) -> Result<JacobiCoeffTable, MoonshineError> {
    if !CLASS_ORDERS.contains(&order) {
        return Err(MoonshineError::UnknownClass(format!("order {order}")));
    }
    match (variant, order) {
        (MtVariant::Twisted, 4) => twisted_theta_table(4, d_min),
        (MtVariant::Twisted, 8) => {
            let theta = twisted_theta_table(16, d_min)?;
            let phi = phi84_table(d_min)?;
            Ok(theta.add_scaled(&phi, &rat(-4)))
        }
        (_, 11) => {
            let phi = phi11_table(d_min)?;
            let r = JacobiCoeffTable::from_fn(d_min, |d| {
                rat(2) * rationalized_class_combination(11, d)
            });
            Ok(r.add_scaled(phi, &ratio(-11, 5)))
        }
        (_, n) => Ok(JacobiCoeffTable::from_fn(d_min, |d| {
            rat(2) * rationalized_class_combination(n, d)
        })),
    }
}

/// Multiplicity generating table of the `chi`-th irreducible (1-based) in
/// the graded module of the chosen family:
/// `m_chi(W_d) = sum_g conj(chi(g)) C_g(d) / |C(g)|`. Every value must
/// come out a rational integer; anything else signals corrupted data.
pub fn multiplicity_series(
    variant: MtVariant,
    chi: usize,
    d_min: i64,
) -> Result<JacobiCoeffTable, MoonshineError> {
    assert!((1..=10).contains(&chi));
    let t = m11_character_table();
    // One coefficient table per distinct element order.
    let mut by_order: BTreeMap<i64, JacobiCoeffTable> = BTreeMap::new();
    for &order in CLASS_ORDERS.iter() {
        if let std::collections::btree_map::Entry::Vacant(e) = by_order.entry(order) {
            e.insert(mt_series_by_order(variant, order, d_min)?);
        }
    }
    let mut table = JacobiCoeffTable::zeros(d_min);
    for d in d_min..=0 {
        if !is_discriminant(d) {
            continue;
        }
        let mut acc = crate::chars::AlgebraicValue::from_int(0);
        for g in 0..10 {
            let c = by_order[&CLASS_ORDERS[g]].get(d).unwrap();
            let weight = c / rat(t.centralizer_order(g));
            acc = acc.add(&t.value(chi, g).conj().scale(&weight));
        }
        if !acc.is_rational() || !acc.rational_part().is_integer() {
            return Err(MoonshineError::NonIntegral(format!(
                "multiplicity of chi_{chi} at {d}: {acc}"
            )));
        }
        table.set(d, acc.rational_part().clone());
    }
    Ok(table)
}

/// One cell mismatch from a reference diff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableMismatch {
    pub d: i64,
    pub column: String,
    pub expected: Rat,
    pub got: Rat,
}

/// Recompute a full appendix table over `|d| <= 108` and diff it against
/// the bundled reference; an empty list means exact agreement.
pub fn recompute_and_diff(which: u8) -> Result<Vec<TableMismatch>, MoonshineError> {
    let reference = reference_table(which)?;
    let d_min = PHI11_D_MIN;
    let mut mismatches = Vec::new();
    let mut diff_column = |column: &str, computed: &JacobiCoeffTable| {
        for (d, got) in computed.iter() {
            let expected = reference.value(d, column).expect("reference cell");
            if expected != got {
                mismatches.push(TableMismatch {
                    d,
                    column: column.to_string(),
                    expected: expected.clone(),
                    got: got.clone(),
                });
            }
        }
    };
    match which {
        2 | 4 => {
            let variant = if which == 2 { MtVariant::Default } else { MtVariant::Twisted };
            for column in ["1A", "2A", "3A", "4A", "5A", "6A", "8AB", "11AB"] {
                let computed = mt_series(variant, column, d_min)?;
                diff_column(column, &computed);
            }
        }
        3 | 5 => {
            let variant = if which == 3 { MtVariant::Default } else { MtVariant::Twisted };
            for chi in 1..=10 {
                let computed = multiplicity_series(variant, chi, d_min)?;
                diff_column(&format!("chi{chi}"), &computed);
            }
        }
        other => return Err(MoonshineError::Data(format!("no reference table {other}"))),
    }
    Ok(mismatches)
}

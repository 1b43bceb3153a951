//! Command-line front end: class-number queries, coefficient-table dumps,
//! reference-table diffing, the congruent-number certifier, and the
//! invariant verification suites.
//!
//! Exit codes: 0 on success, 1 when a verification or diff fails, 2 on
//! usage errors. Set `MOCKJAC_DATA_DIR` to load the bundled data files
//! from another directory.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use mockjac_core::congruent::certify;
use mockjac_core::moonshine::{
    self, multiplicity_series, phi11_table, phi84_table, MoonshineError, MtVariant,
};
use mockjac_core::table::{class_number_table, ClassSeriesKind, JacobiCoeffTable};
use mockjac_core::verify::{self, CheckResult};
use mockjac_core::{display_rat, qf};

#[derive(Parser)]
#[command(name = "mockjac", version, about = "Exact Hurwitz class numbers, mock Jacobi forms and M11 moonshine tables")]
struct Cli {
    /// Emit JSON instead of CSV / plain text.
    #[arg(long, global = true)]
    json: bool,
    /// q-expansion order for series-based verification (verify bridge).
    #[arg(long, global = true)]
    qmax: Option<i64>,
    /// Most negative discriminant included in coefficient dumps.
    #[arg(long, global = true, default_value_t = -108, allow_hyphen_values = true)]
    dmin: i64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassKind {
    /// Hurwitz class numbers H(D).
    #[value(name = "H")]
    H,
    /// Level-refined class numbers H_N(D) (needs --level).
    #[value(name = "H_N")]
    Level,
    /// Cohen-Eisenstein coefficients at a prime level (needs --level).
    #[value(name = "HCE_N")]
    CohenEisenstein,
    /// Rationalized level-N combination (needs --level).
    #[value(name = "R_N")]
    Rationalized,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dump a class-number series as CSV, one row per discriminant.
    Classnum {
        #[arg(long, value_enum, default_value = "h")]
        kind: ClassKind,
        /// Level N for the refined kinds.
        #[arg(long)]
        level: Option<i64>,
        /// Largest discriminant included.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        dmax: i64,
    },
    /// Dump one coefficient series. Selectors: H, H_<N>, HCE_<N>, R_<N>,
    /// phi11, phi84, mt:<default|twisted>:<class>, mult:<default|twisted>:<1-10>.
    Series { selector: String },
    /// Recompute an appendix table (2-5, or "all") and diff it against the
    /// bundled reference. Exit 1 on any mismatch.
    Tables { which: String },
    /// Congruent-number certifier for a positive integer n.
    Congruent {
        n: i64,
        /// Real part of the module parameter (even; the bundled module has -4).
        #[arg(long, default_value_t = -4, allow_hyphen_values = true)]
        re_lambda: i64,
    },
    /// Run an invariant suite: classnum, bridge, moonshine, lattice, or all.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
}

/// A usage error (exit 2), distinct from a verification failure (exit 1).
struct UsageError(String);

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Classnum { kind, level, dmax } => cmd_classnum(&cli, *kind, *level, *dmax),
        Cmd::Series { selector } => cmd_series(&cli, selector),
        Cmd::Tables { which } => cmd_tables(&cli, which),
        Cmd::Congruent { n, re_lambda } => cmd_congruent(&cli, *n, *re_lambda),
        Cmd::Verify { suite } => cmd_verify(&cli, suite),
    };
    match result {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn validated_kind(kind: ClassKind, level: Option<i64>) -> Result<ClassSeriesKind, UsageError> {
    let need_level = || level.ok_or_else(|| usage("this kind requires --level"));
    match kind {
        ClassKind::H => {
            if level.is_some() {
                return Err(usage("--level is only meaningful for refined kinds"));
            }
            Ok(ClassSeriesKind::Hurwitz)
        }
        ClassKind::Level => {
            let n = need_level()?;
            if n < 1 {
                return Err(usage("level must be positive"));
            }
            Ok(ClassSeriesKind::Level(n))
        }
        ClassKind::CohenEisenstein => {
            let p = need_level()?;
            if !qf::is_prime(p) {
                return Err(usage("Cohen-Eisenstein coefficients need a prime level"));
            }
            Ok(ClassSeriesKind::CohenEisenstein(p))
        }
        ClassKind::Rationalized => {
            let n = need_level()?;
            if n < 1 {
                return Err(usage("level must be positive"));
            }
            Ok(ClassSeriesKind::Rationalized(n))
        }
    }
}

fn cmd_classnum(
    cli: &Cli,
    kind: ClassKind,
    level: Option<i64>,
    dmax: i64,
) -> Result<ExitCode, UsageError> {
    if cli.dmin > dmax || dmax > 0 {
        return Err(usage("need dmin <= dmax <= 0"));
    }
    let kind = validated_kind(kind, level)?;
    let table = class_number_table(kind, cli.dmin);
    let rows: Vec<(i64, &mockjac_core::Rat)> =
        table.iter().filter(|&(d, _)| d <= dmax).collect();
    if cli.json {
        let entries: Vec<_> =
            rows.iter().map(|(d, c)| json!({"d": d, "value": display_rat(c)})).collect();
        println!(
            "{}",
            json!({"kind": kind_name(kind), "d_min": cli.dmin, "d_max": dmax, "entries": entries})
        );
    } else {
        print!("D,coefficient\n");
        for (d, c) in rows {
            println!("{},{}", d, display_rat(c));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn kind_name(kind: ClassSeriesKind) -> String {
    match kind {
        ClassSeriesKind::Hurwitz => "H".into(),
        ClassSeriesKind::Level(n) => format!("H_{n}"),
        ClassSeriesKind::CohenEisenstein(p) => format!("HCE_{p}"),
        ClassSeriesKind::Rationalized(n) => format!("R_{n}"),
    }
}

fn moonshine_usage(e: MoonshineError) -> UsageError {
    usage(e.to_string())
}

fn parse_variant(tag: &str) -> Result<MtVariant, UsageError> {
    match tag {
        "default" => Ok(MtVariant::Default),
        "twisted" => Ok(MtVariant::Twisted),
        other => Err(usage(format!("unknown family {other} (default | twisted)"))),
    }
}

fn select_series(selector: &str, d_min: i64) -> Result<JacobiCoeffTable, UsageError> {
    if let Some(rest) = selector.strip_prefix("mt:") {
        let (variant, class) = rest
            .split_once(':')
            .ok_or_else(|| usage("selector shape is mt:<variant>:<class>"))?;
        return moonshine::mt_series(parse_variant(variant)?, class, d_min)
            .map_err(moonshine_usage);
    }
    if let Some(rest) = selector.strip_prefix("mult:") {
        let (variant, chi) = rest
            .split_once(':')
            .ok_or_else(|| usage("selector shape is mult:<variant>:<chi>"))?;
        let chi: usize = chi
            .parse()
            .ok()
            .filter(|c| (1..=10).contains(c))
            .ok_or_else(|| usage("character index must be 1..10"))?;
        return multiplicity_series(parse_variant(variant)?, chi, d_min)
            .map_err(moonshine_usage);
    }
    match selector {
        "H" => Ok(class_number_table(ClassSeriesKind::Hurwitz, d_min)),
        "phi11" => Ok(phi11_table(d_min).map_err(moonshine_usage)?.clone()),
        "phi84" => phi84_table(d_min).map_err(moonshine_usage),
        other => {
            let (prefix, n) = other
                .rsplit_once('_')
                .ok_or_else(|| usage(format!("unknown selector {other}")))?;
            let n: i64 = n
                .parse()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| usage(format!("bad level in selector {other}")))?;
            let kind = match prefix {
                "H" => ClassSeriesKind::Level(n),
                "HCE" if qf::is_prime(n) => ClassSeriesKind::CohenEisenstein(n),
                "HCE" => return Err(usage("HCE_<N> needs a prime N")),
                "R" => ClassSeriesKind::Rationalized(n),
                _ => return Err(usage(format!("unknown selector {other}"))),
            };
            Ok(class_number_table(kind, d_min))
        }
    }
}

fn cmd_series(cli: &Cli, selector: &str) -> Result<ExitCode, UsageError> {
    if cli.dmin > 0 {
        return Err(usage("dmin must be non-positive"));
    }
    let table = select_series(selector, cli.dmin)?;
    if cli.json {
        let entries: Vec<_> = table
            .iter()
            .map(|(d, c)| json!({"d": d, "value": display_rat(c)}))
            .collect();
        println!(
            "{}",
            json!({"selector": selector, "d_min": cli.dmin, "entries": entries})
        );
    } else {
        print!("{}", table.to_csv());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_tables(cli: &Cli, which: &str) -> Result<ExitCode, UsageError> {
    let targets: Vec<u8> = match which {
        "all" => vec![2, 3, 4, 5],
        _ => vec![which
            .parse()
            .ok()
            .filter(|w| (2..=5).contains(w))
            .ok_or_else(|| usage("table must be 2, 3, 4, 5 or all"))?],
    };
    let mut clean = true;
    let mut reports = Vec::new();
    for t in targets {
        let mismatches = moonshine::recompute_and_diff(t).map_err(moonshine_usage)?;
        clean &= mismatches.is_empty();
        if cli.json {
            let list: Vec<_> = mismatches
                .iter()
                .map(|m| {
                    json!({
                        "d": m.d,
                        "column": m.column,
                        "expected": display_rat(&m.expected),
                        "got": display_rat(&m.got),
                    })
                })
                .collect();
            reports.push(json!({"table": t, "matches": list.is_empty(), "mismatches": list}));
        } else if mismatches.is_empty() {
            println!("table {t}: OK (all cells match, |D| <= 108)");
        } else {
            println!("table {t}: {} mismatching cells", mismatches.len());
            for m in &mismatches {
                println!(
                    "  d = {}, column {}: expected {}, got {}",
                    m.d,
                    m.column,
                    display_rat(&m.expected),
                    display_rat(&m.got)
                );
            }
        }
    }
    if cli.json {
        println!("{}", json!(reports));
    }
    Ok(if clean { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_congruent(_cli: &Cli, n: i64, re_lambda: i64) -> Result<ExitCode, UsageError> {
    if n < 1 {
        return Err(usage("n must be a positive integer"));
    }
    if re_lambda % 2 != 0 {
        return Err(usage("the module parameter real part must be even"));
    }
    let record = certify(n, re_lambda);
    // The record is the JSON contract regardless of --json.
    println!("{}", serde_json::to_string_pretty(&record).expect("serializable record"));
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cli: &Cli, suite: &str) -> Result<ExitCode, UsageError> {
    let results: Vec<CheckResult> = match (suite, cli.qmax) {
        ("bridge", Some(q)) if q >= 1 => verify::suite_bridge_to(q),
        ("bridge", Some(_)) => return Err(usage("qmax must be positive")),
        _ => verify::run_suite(suite)
            .ok_or_else(|| usage("suite must be classnum, bridge, moonshine, lattice or all"))?,
    };
    let all_passed = results.iter().all(|r| r.passed);
    if cli.json {
        let list: Vec<_> = results
            .iter()
            .map(|r| {
                json!({
                    "suite": r.suite,
                    "name": r.name,
                    "passed": r.passed,
                    "detail": r.detail,
                })
            })
            .collect();
        println!("{}", json!({"passed": all_passed, "checks": list}));
    } else {
        for r in &results {
            let tag = if r.passed { "PASS" } else { "FAIL" };
            println!("{tag} [{}] {}: {}", r.suite, r.name, r.detail);
        }
    }
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

//! Acceptance gate: the eight release criteria, one test (and one
//! pass/fail line) each. Every comparison is exact; a single differing
//! coefficient anywhere fails the gate.

use std::time::{Duration, Instant};

use mockjac_core::bridge::{class_number_identity_mismatch, identity_series, BridgeParams};
use mockjac_core::chars::{delta_identities, lattice_gram, m11_character_table, LatticeVariant};
use mockjac_core::congruent::{certify_default, Verdict};
use mockjac_core::moonshine::{multiplicity_series, recompute_and_diff, MtVariant};
use mockjac_core::qf::rationalized_class_combination;
use mockjac_core::rat;
use mockjac_core::table::is_discriminant;
use mockjac_core::verify::{rationalized5_nonintegral_witness, suite_classnum};

fn finish(name: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    println!("PASS {name} ({elapsed:.2?})");
    assert!(elapsed < budget, "{name}: {elapsed:?} over budget {budget:?}");
}

#[test]
fn criterion_1_default_family_table_reproduces() {
    let start = Instant::now();
    let mismatches = recompute_and_diff(2).expect("recompute default family");
    assert!(mismatches.is_empty(), "default family: {:?}", mismatches.first());
    finish("criterion 1: default-family coefficient table", start, Duration::from_secs(10));
}

#[test]
fn criterion_2_twisted_family_table_reproduces() {
    let start = Instant::now();
    let mismatches = recompute_and_diff(4).expect("recompute twisted family");
    assert!(mismatches.is_empty(), "twisted family: {:?}", mismatches.first());
    finish("criterion 2: twisted-family coefficient table", start, Duration::from_secs(10));
}

#[test]
fn criterion_3_multiplicity_tables_reproduce_and_are_integral() {
    let start = Instant::now();
    for which in [3u8, 5] {
        let mismatches = recompute_and_diff(which).expect("recompute multiplicities");
        assert!(mismatches.is_empty(), "table {which}: {:?}", mismatches.first());
    }
    // Integrality over the full range is enforced inside
    // multiplicity_series; exercise it directly for every character.
    for variant in [MtVariant::Default, MtVariant::Twisted] {
        for chi in 1..=10 {
            multiplicity_series(variant, chi, -108)
                .unwrap_or_else(|e| panic!("{variant:?} chi_{chi}: {e}"));
        }
    }
    finish("criterion 3: multiplicity tables, integral throughout", start, Duration::from_secs(30));
}

#[test]
fn criterion_4_finite_part_is_24_hurwitz() {
    let start = Instant::now();
    let fin = identity_series(BridgeParams::default()).expect("identity series");
    let mismatch = class_number_identity_mismatch(&fin, 20).expect("coefficient scan");
    assert!(mismatch.is_none(), "finite part vs 24 H: {mismatch:?}");
    finish("criterion 4: finite part equals 24 H to q-order 20", start, Duration::from_secs(30));
}

#[test]
fn criterion_5_class_number_identities() {
    let start = Instant::now();
    for r in suite_classnum() {
        assert!(r.passed, "{}: {}", r.name, r.detail);
    }
    finish("criterion 5: class-number identities to |d| = 500", start, Duration::from_secs(30));
}

#[test]
fn criterion_6_congruent_number_certifier() {
    let start = Instant::now();
    let r3 = certify_default(3);
    assert_eq!((r3.verdict, r3.m55), (Verdict::NotCongruentCertified, rat(-1)));
    let r51 = certify_default(51);
    assert_eq!((r51.verdict, r51.m55), (Verdict::NotCongruentCertified, rat(-2)));
    let r219 = certify_default(219);
    assert_eq!(r219.verdict, Verdict::Inconclusive);
    assert_eq!(r219.c84, rat(0));
    assert_eq!(certify_default(59).verdict, Verdict::HypothesisNotMet);
    assert_eq!(certify_default(5).verdict, Verdict::HypothesisNotMet);
    finish("criterion 6: congruent-number certifier", start, Duration::from_secs(5));
}

#[test]
fn criterion_7_character_suite_and_gram_matrices() {
    let start = Instant::now();
    let t = m11_character_table();
    t.check_row_orthogonality().expect("row orthogonality");
    t.check_column_orthogonality().expect("column orthogonality");
    delta_identities().expect("indicator and generator identities");
    assert_eq!(lattice_gram(LatticeVariant::Default), vec![vec![6, 5], vec![5, 6]]);
    assert_eq!(
        lattice_gram(LatticeVariant::Twisted),
        vec![vec![2, 0, 0, 0], vec![0, 4, 0, 0], vec![0, 0, 6, 5], vec![0, 0, 5, 6]]
    );
    finish("criterion 7: character suite and Gram matrices", start, Duration::from_secs(10));
}

#[test]
fn criterion_8_constant_terms_and_level5_scan() {
    let start = Instant::now();
    for variant in [MtVariant::Default, MtVariant::Twisted] {
        for class in ["1A", "2A", "3A", "4A", "5A", "6A", "8AB", "11AB"] {
            let t = mockjac_core::moonshine::mt_series(variant, class, -4).unwrap();
            assert_eq!(t.get(0), Some(&rat(-2)), "{variant:?} {class}");
        }
    }
    let fin = identity_series(BridgeParams { q_max: 4, y_window: 16 }).unwrap();
    let table = mockjac_core::bridge::finite_part_table_of(&fin, -4).unwrap();
    assert_eq!(table.get(0), Some(&rat(-2)), "identity-series constant term");
    for n in [1i64, 2, 3, 4, 5, 6, 7, 8, 11] {
        assert_eq!(rationalized_class_combination(n, 0), rat(-1), "N = {n}");
    }
    // Witness-or-absence report for the minimality of the factor 2 on the
    // level-5 combination.
    match rationalized5_nonintegral_witness(-10_000) {
        Some(d) => {
            assert!(is_discriminant(d));
            println!(
                "level-5 scan: non-integral coefficient witnessed at d = {d} \
                 ({})",
                rationalized_class_combination(5, d)
            );
        }
        None => println!("level-5 scan: no non-integral coefficient for |d| <= 10000"),
    }
    finish("criterion 8: constant terms and level-5 scan", start, Duration::from_secs(60));
}

//! Acceptance suite for the scenario harness: criteria 2, 5, 10 and 11.
//! The core library's criteria (1, 3, 4, 6, 7, 8, 9) live in the core
//! crate's own acceptance suite.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::BTreeMap;
use std::fs;

use roadlink_harness::{band_report, load_bundled, prt_sweep, run_scenario, BUNDLED};

fn report(criterion: u32, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("acceptance criterion {criterion}: {status} - {detail}");
    assert!(pass, "criterion {criterion} failed: {detail}");
}

/// Criterion 2: the band report reproduces all 15 table cells, with the
/// wavelengths within 0.5% of 33, 12.5 and 5.172 cm.
#[test]
fn criterion_2_band_table() {
    let rows = band_report();
    let expected = [
        (900.0, 930.0, 30.0, 33.0, "Not effective"),
        (2400.0, 2480.0, 80.0, 12.5, "Effective"),
        (5760.0, 5840.0, 80.0, 5.172, "More effective"),
    ];
    let mut cells_ok = 0;
    let mut lambda_ok = 0;
    for (row, exp) in rows.iter().zip(&expected) {
        cells_ok += usize::from(row.span_mhz.0 == exp.0)
            + usize::from(row.span_mhz.1 == exp.1)
            + usize::from(row.delta_f_mhz == exp.2)
            + usize::from(row.lambda_cm == exp.3)
            + usize::from(row.space_diversity_verdict == exp.4);
        if (row.lambda_cm / exp.3 - 1.0).abs() <= 0.005 {
            lambda_ok += 1;
        }
    }
    report(
        2,
        rows.len() == 3 && cells_ok == 15 && lambda_ok == 3,
        &format!("{cells_ok}/15 cells match, {lambda_ok}/3 wavelengths within 0.5%"),
    );
}

/// Criterion 5: the bundled two-path scenario with 30 dB fade depth yields
/// all three region labels with disjoint II and III intervals.
#[test]
fn criterion_5_region_reproduction() {
    let config = load_bundled("fig4_regions").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let artifacts = run_scenario(&config, dir.path()).unwrap();
    let csv = artifacts
        .files
        .iter()
        .find(|p| p.file_name().unwrap().to_str().unwrap().contains("regions"))
        .expect("region csv");
    let text = fs::read_to_string(csv).unwrap();

    let mut spans: BTreeMap<&str, (f64, f64)> = BTreeMap::new();
    let mut both_faded = 0usize;
    for line in text.lines().skip(2) {
        let fields: Vec<&str> = line.split(',').collect();
        let t: f64 = fields[0].parse().unwrap();
        match fields[3] {
            "both-faded" => both_faded += 1,
            label @ ("I" | "II" | "III") => {
                let key: &str = match label {
                    "I" => "I",
                    "II" => "II",
                    _ => "III",
                };
                spans
                    .entry(key)
                    .and_modify(|(lo, hi)| {
                        *lo = lo.min(t);
                        *hi = hi.max(t);
                    })
                    .or_insert((t, t));
            }
            other => panic!("unexpected region label {other:?}"),
        }
    }
    let all_present = ["I", "II", "III"].iter().all(|k| spans.contains_key(*k));
    let disjoint = match (spans.get("II"), spans.get("III")) {
        (Some(&(lo2, hi2)), Some(&(lo3, hi3))) => hi2 < lo3 || hi3 < lo2,
        _ => false,
    };
    report(
        5,
        all_present && disjoint && both_faded == 0,
        &format!(
            "labels I/II/III present = {all_present}, II span {:?} and III span {:?} disjoint = {disjoint}, both-faded samples = {both_faded}",
            spans.get("II"),
            spans.get("III")
        ),
    );
}

/// Criterion 10: the PRT sweep flags exactly [350, 600] us as valid and the
/// unambiguous range at 350 us is 52.46 km within 0.01 km.
#[test]
fn criterion_10_prt_window() {
    let config = load_bundled("fig6_prt_sweep").unwrap();
    let spec = config.sweep.clone().unwrap();
    let prt_s: Vec<f64> = spec.prt_us.iter().map(|us| us * 1e-6).collect();
    let rows = prt_sweep(&prt_s, &config).unwrap();

    let flags_ok = spec
        .prt_us
        .iter()
        .zip(&rows)
        .all(|(&us, row)| row.valid == (350.0..=600.0).contains(&us));
    let at_350 = rows
        .iter()
        .zip(&spec.prt_us)
        .find(|(_, &us)| us == 350.0)
        .map(|(row, _)| row.max_unambiguous_range_m)
        .expect("350 us row");
    let range_ok = (at_350 / 1000.0 - 52.46).abs() <= 0.01;
    report(
        10,
        flags_ok && range_ok,
        &format!(
            "valid flags match the [350, 600] us window = {flags_ok}, range at 350 us = {:.3} km (52.46 +- 0.01)",
            at_350 / 1000.0
        ),
    );
}

/// Criterion 11: every bundled scenario, run twice with the same seed,
/// produces byte-identical CSVs.
#[test]
fn criterion_11_determinism() {
    let mut checked = 0usize;
    let mut identical = true;
    let mut detail = String::new();
    for (name, _) in BUNDLED {
        let config = load_bundled(name).unwrap();
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let run_a = run_scenario(&config, dir_a.path()).unwrap();
        let run_b = run_scenario(&config, dir_b.path()).unwrap();
        assert_eq!(run_a.files.len(), run_b.files.len());
        for (fa, fb) in run_a.files.iter().zip(&run_b.files) {
            assert_eq!(fa.file_name(), fb.file_name());
            let bytes_a = fs::read(fa).unwrap();
            let bytes_b = fs::read(fb).unwrap();
            if bytes_a != bytes_b {
                identical = false;
                detail = format!("{} differs between runs", fa.display());
            }
            checked += 1;
        }
    }
    report(
        11,
        identical,
        &if identical {
            format!(
                "{checked} output files across {} bundled scenarios byte-identical on re-run",
                BUNDLED.len()
            )
        } else {
            detail
        },
    );
}

//! The ISM-band comparison table that motivates operating at 5.8 GHz.

use std::fmt::Write as _;

/// One candidate ISM band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandInfo {
    /// Band edges in MHz.
    pub span_mhz: (f64, f64),
    /// Bandwidth available for frequency diversity, MHz.
    pub delta_f_mhz: f64,
    /// Nominal wavelength in cm, rounded reference values computed with
    /// c = 3e8 m/s; `signal::wavelength` gives the exact physical value.
    pub lambda_cm: f64,
    pub space_diversity_verdict: &'static str,
    pub remark: &'static str,
}

/// The three license-free candidate bands. Verdicts and rounded wavelengths
/// are reference data, not derived: the effectiveness judgement is
/// qualitative (more bandwidth and less wavelength are both better for a
/// 25 cm two-antenna rig).
pub fn band_report() -> Vec<BandInfo> {
    vec![
        BandInfo {
            span_mhz: (900.0, 930.0),
            delta_f_mhz: 30.0,
            lambda_cm: 33.0,
            space_diversity_verdict: "Not effective",
            remark: "Delta-f less, lambda more.",
        },
        BandInfo {
            span_mhz: (2400.0, 2480.0),
            delta_f_mhz: 80.0,
            lambda_cm: 12.5,
            space_diversity_verdict: "Effective",
            remark: "Delta-f more, lambda less",
        },
        BandInfo {
            span_mhz: (5760.0, 5840.0),
            delta_f_mhz: 80.0,
            lambda_cm: 5.172,
            space_diversity_verdict: "More effective",
            remark: "Delta-f more, lambda least",
        },
    ]
}

pub const BANDS_CSV_HEADER: &str =
    "span_low_mhz,span_high_mhz,delta_f_mhz,lambda_cm,space_diversity_verdict,remark";

pub fn bands_csv() -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{BANDS_CSV_HEADER}");
    for band in band_report() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            band.span_mhz.0,
            band.span_mhz.1,
            band.delta_f_mhz,
            band.lambda_cm,
            band.space_diversity_verdict,
            band.remark
        );
    }
    out
}

/// Plain-text table for the CLI.
pub fn bands_table() -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<12} {:>12} {:>11} {:<16} {}",
        "Band (MHz)", "Delta-f MHz", "lambda cm", "Space diversity", "Remark"
    );
    for band in band_report() {
        let _ = writeln!(
            out,
            "{:<12} {:>12} {:>11} {:<16} {}",
            format!("{}-{}", band.span_mhz.0, band.span_mhz.1),
            band.delta_f_mhz,
            band.lambda_cm,
            band.space_diversity_verdict,
            band.remark
        );
    }
    out
}

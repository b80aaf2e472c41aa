//! Space-diversity antenna selection, antenna-separation bookkeeping, and the
//! three-region classifier for complementary fading at two carriers.

use std::fmt;
use std::io::Write;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::signal::{is_no_signal, wavelength};
use crate::util::{derive_seed, median};

/// An RSSI-versus-time record.
#[derive(Debug, Clone, PartialEq)]
pub struct RssiTrace {
    times_s: Vec<f64>,
    levels_db: Vec<f64>,
}

impl RssiTrace {
    pub fn new(times_s: Vec<f64>, levels_db: Vec<f64>) -> Result<Self> {
        if times_s.len() != levels_db.len() {
            return Err(Error::param(format!(
                "times ({}) and levels ({}) must have equal length",
                times_s.len(),
                levels_db.len()
            )));
        }
        if times_s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("times must be strictly increasing"));
        }
        Ok(RssiTrace { times_s, levels_db })
    }

    pub fn times_s(&self) -> &[f64] {
        &self.times_s
    }

    pub fn levels_db(&self) -> &[f64] {
        &self.levels_db
    }

    pub fn len(&self) -> usize {
        self.times_s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times_s.is_empty()
    }
}

/// The three reception regions seen when watching two carriers at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionLabel {
    /// Both carriers stable and normal.
    I,
    /// Upper carrier faded, lower steady.
    II,
    /// Lower carrier faded, upper steady.
    III,
}

/// Per-sample classification outcome. Both carriers fading at once falls
/// outside the three-region taxonomy and is surfaced as its own diagnostic
/// rather than force-fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionOutcome {
    Label(RegionLabel),
    BothFaded,
}

impl fmt::Display for RegionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionOutcome::Label(RegionLabel::I) => f.write_str("I"),
            RegionOutcome::Label(RegionLabel::II) => f.write_str("II"),
            RegionOutcome::Label(RegionLabel::III) => f.write_str("III"),
            RegionOutcome::BothFaded => f.write_str("both-faded"),
        }
    }
}

/// Result of a preamble RSSI comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AntennaSelection {
    /// Chosen antenna, 0 or 1.
    pub index: usize,
    /// True when neither antenna saw any signal and the choice is arbitrary.
    pub blind: bool,
}

/// Picks the antenna with the larger preamble RSSI. Ties go to antenna 0.
/// Two no-signal sentinels also give antenna 0, flagged as a blind selection.
pub fn select_antenna(rssi_a_db: f64, rssi_b_db: f64) -> AntennaSelection {
    if is_no_signal(rssi_a_db) && is_no_signal(rssi_b_db) {
        return AntennaSelection {
            index: 0,
            blind: true,
        };
    }
    AntennaSelection {
        index: usize::from(rssi_b_db > rssi_a_db),
        blind: false,
    }
}

/// Antenna separation expressed in carrier wavelengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationReport {
    pub separation_m: f64,
    pub carrier_hz: f64,
    /// separation / wavelength.
    pub wavelengths: f64,
    /// Half a wavelength or more of separation counts as effective.
    pub effective: bool,
}

/// Reports how many wavelengths apart two antennas sit at a carrier and
/// whether that separation is enough for useful space diversity.
pub fn spatial_separation_report(separation_m: f64, carrier_hz: f64) -> Result<SeparationReport> {
    if !(separation_m > 0.0) || !separation_m.is_finite() {
        return Err(Error::param(format!(
            "separation must be positive, got {separation_m}"
        )));
    }
    let lambda = wavelength(carrier_hz)?;
    let wavelengths = separation_m / lambda;
    Ok(SeparationReport {
        separation_m,
        carrier_hz,
        wavelengths,
        effective: wavelengths >= 0.5,
    })
}

/// Classifies each time sample of two co-recorded RSSI traces into the
/// region taxonomy.
///
/// A carrier counts as faded when its level drops more than
/// `fade_threshold_db` below its own trace median, so the labels are
/// invariant under any constant calibration offset per trace.
pub fn classify_regions(
    trace_lo: &RssiTrace,
    trace_hi: &RssiTrace,
    fade_threshold_db: f64,
) -> Result<Vec<(f64, RegionOutcome)>> {
    if trace_lo.times_s() != trace_hi.times_s() {
        return Err(Error::param("traces must share the same time axis"));
    }
    if !(fade_threshold_db > 0.0) {
        return Err(Error::param("fade_threshold_db must be positive"));
    }
    let ref_lo = median(trace_lo.levels_db()) - fade_threshold_db;
    let ref_hi = median(trace_hi.levels_db()) - fade_threshold_db;
    Ok(trace_lo
        .times_s()
        .iter()
        .zip(trace_lo.levels_db())
        .zip(trace_hi.levels_db())
        .map(|((&t, &lo), &hi)| {
            let outcome = match (lo < ref_lo, hi < ref_hi) {
                (false, false) => RegionOutcome::Label(RegionLabel::I),
                (false, true) => RegionOutcome::Label(RegionLabel::II),
                (true, false) => RegionOutcome::Label(RegionLabel::III),
                (true, true) => RegionOutcome::BothFaded,
            };
            (t, outcome)
        })
        .collect())
}

/// Writes a region classification alongside its input traces as CSV:
/// time_s, level_lo_db, level_hi_db, region.
pub fn write_region_csv<W: Write>(
    mut w: W,
    trace_lo: &RssiTrace,
    trace_hi: &RssiTrace,
    regions: &[(f64, RegionOutcome)],
) -> std::io::Result<()> {
    writeln!(w, "time_s,level_lo_db,level_hi_db,region")?;
    for ((&lo, &hi), &(t, outcome)) in trace_lo
        .levels_db()
        .iter()
        .zip(trace_hi.levels_db())
        .zip(regions)
    {
        writeln!(w, "{t},{lo},{hi},{outcome}")?;
    }
    Ok(())
}

/// Monte Carlo outage estimate for two-branch selection diversity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    /// P(a single branch is below threshold).
    pub p_single: f64,
    /// P(the selected branch is below threshold), i.e. both branches faded.
    pub p_selected: f64,
    pub n_trials: usize,
}

/// Estimates single-branch and post-selection outage probabilities over
/// independent burst fades.
///
/// Branch gains are Rayleigh with unit mean power; branch B is mixed from
/// branch A and an independent draw with weight `decorrelation` (0 =
/// identical branches, 1 = independent, where the selected outage approaches
/// p_single squared). `fade_threshold_db` is the outage level relative to
/// the 0 dB mean power.
pub fn selection_outage_probability(
    fade_threshold_db: f64,
    n_trials: usize,
    decorrelation: f64,
    seed: u64,
) -> Result<OutageEstimate> {
    if n_trials < 1000 {
        return Err(Error::param(format!(
            "n_trials must be >= 1000, got {n_trials}"
        )));
    }
    if !(0.0..=1.0).contains(&decorrelation) {
        return Err(Error::param("decorrelation must be in [0, 1]"));
    }
    // Threshold on |g|^2 in linear units; -inf dB means outage never happens.
    let threshold_power = if fade_threshold_db == f64::NEG_INFINITY {
        0.0
    } else {
        10f64.powf(fade_threshold_db / 10.0)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[0x6F75]));
    let normal = Normal::new(0.0, (0.5f64).sqrt()).expect("valid sigma");
    let draw = |rng: &mut ChaCha8Rng| Complex64::new(normal.sample(rng), normal.sample(rng));

    let keep = (1.0 - decorrelation).sqrt();
    let mix = decorrelation.sqrt();
    let mut single = 0usize;
    let mut selected = 0usize;
    for _ in 0..n_trials {
        let ga = draw(&mut rng);
        let gb = keep * ga + mix * draw(&mut rng);
        let fade_a = ga.norm_sqr() < threshold_power;
        let fade_b = gb.norm_sqr() < threshold_power;
        single += usize::from(fade_a);
        selected += usize::from(fade_a && fade_b);
    }
    Ok(OutageEstimate {
        p_single: single as f64 / n_trials as f64,
        p_selected: selected as f64 / n_trials as f64,
        n_trials,
    })
}

/// Threshold (dB relative to mean power) at which a single Rayleigh branch
/// is in outage with the given probability. Used to pin scenarios like
/// "p_single around 0.1".
pub fn threshold_for_outage(p_single: f64) -> f64 {
    10.0 * (-(1.0 - p_single).ln()).log10()
}

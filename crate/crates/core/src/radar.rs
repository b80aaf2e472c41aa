//! Radar mode: transmit the coded burst, authenticate echoes (start marker
//! first, then the code), measure the delay of the nearest reflector and
//! convert it to range, bounded by the pulse repetition time.

use std::io::Write;

use crate::error::{Error, Result};
use crate::pn_code::correlate_complex;
use crate::signal::{rssi, Frame, IqBuffer, SPEED_OF_LIGHT_M_S};
use crate::diversity::select_antenna;

/// Default echo-acceptance threshold as a fraction of the noiseless
/// correlation peak. Above the worst-case normalized cross-correlation of
/// random wrong codes, below 1 to tolerate fading.
pub const DEFAULT_THRESHOLD_FRACTION: f64 = 0.6;

/// Marker and code peaks of one echo must agree in implied amplitude within
/// this relative tolerance. Both ride the same slow-fading channel gain, so
/// a mismatch means the code section is not the transmitted code; the gate
/// is what pushes the false-accept rate of random wrong codes below 1%.
pub const AMPLITUDE_MATCH_TOLERANCE: f64 = 0.25;

/// Burst timing parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadarTiming {
    /// Pulse repetition time in seconds.
    pub prt_s: f64,
    pub samples_per_chip: usize,
    pub chip_rate_hz: f64,
}

impl RadarTiming {
    pub fn new(prt_s: f64, samples_per_chip: usize, chip_rate_hz: f64) -> Result<Self> {
        if !(prt_s > 0.0) {
            return Err(Error::param("prt_s must be positive"));
        }
        if samples_per_chip == 0 {
            return Err(Error::param("samples_per_chip must be >= 1"));
        }
        if !(chip_rate_hz > 0.0) {
            return Err(Error::param("chip_rate_hz must be positive"));
        }
        Ok(RadarTiming {
            prt_s,
            samples_per_chip,
            chip_rate_hz,
        })
    }

    /// 500 us PRT, 4 samples per chip at 50 Mchip/s (200 MHz sample rate,
    /// 0.75 m range resolution).
    pub fn default_radar() -> Self {
        RadarTiming {
            prt_s: 500e-6,
            samples_per_chip: 4,
            chip_rate_hz: 50e6,
        }
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.chip_rate_hz * self.samples_per_chip as f64
    }

    /// The radio is rated for PRTs in [350, 600] us; values outside are
    /// allowed but flagged.
    pub fn prt_valid(&self) -> bool {
        (350e-6..=600e-6).contains(&self.prt_s)
    }
}

/// One authenticated range measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeEstimate {
    /// Two-way echo delay in seconds.
    pub delay_s: f64,
    /// c * delay / 2.
    pub range_m: f64,
    pub peak_magnitude: f64,
    /// False would mark an advisory-only measurement; estimates produced by
    /// [`estimate_nearest`] are always authenticated.
    pub authenticated: bool,
    pub antenna_used: usize,
    /// Later authenticated echoes (more distant reflectors) rejected from
    /// the estimate.
    pub rejected_peaks: usize,
}

impl RangeEstimate {
    /// CSV row: t_s, range_m, peak, authenticated, antenna, rejected_peaks.
    pub fn write_csv_row<W: Write>(&self, mut w: W, t_s: f64) -> std::io::Result<()> {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            t_s, self.range_m, self.peak_magnitude, self.authenticated, self.antenna_used,
            self.rejected_peaks
        )
    }

    pub const CSV_HEADER: &'static str = "t_s,range_m,peak,authenticated,antenna,rejected_peaks";
}

/// Converts a two-way echo delay to target range: c * delay / 2.
pub fn delay_to_range(delay_s: f64) -> Result<f64> {
    if delay_s < 0.0 || !delay_s.is_finite() {
        return Err(Error::param(format!(
            "delay must be >= 0, got {delay_s}"
        )));
    }
    Ok(SPEED_OF_LIGHT_M_S * delay_s / 2.0)
}

/// Maximum unambiguous range for a pulse repetition time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnambiguousRange {
    pub range_m: f64,
    /// True when the PRT sits inside the rated [350, 600] us window.
    pub prt_valid: bool,
}

/// c * PRT / 2, flagged against the rated PRT window.
pub fn max_unambiguous_range(prt_s: f64) -> Result<UnambiguousRange> {
    if !(prt_s > 0.0) || !prt_s.is_finite() {
        return Err(Error::param(format!("prt must be positive, got {prt_s}")));
    }
    Ok(UnambiguousRange {
        range_m: SPEED_OF_LIGHT_M_S * prt_s / 2.0,
        prt_valid: (350e-6..=600e-6).contains(&prt_s),
    })
}

/// Outcome of echo authentication.
#[derive(Debug, Clone, PartialEq)]
pub struct Authentication {
    pub authenticated: bool,
    /// Two-way delay of the earliest authenticated echo, when there is one.
    pub delay_s: Option<f64>,
    pub diagnostic: AuthDiagnostic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuthDiagnostic {
    Authenticated,
    /// No start marker correlation peak cleared the threshold.
    NoStartMarker,
    /// A start marker was found but the code that followed did not match.
    CodeMismatch,
}

/// One authenticated echo.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Echo {
    pub delay_s: f64,
    pub peak_magnitude: f64,
}

/// Finds every authenticated echo of `frame` in a received buffer.
///
/// Detection is two-stage, mirroring the transmitted burst layout: the start
/// marker is located by correlation with its chip waveform, and only in the
/// window immediately following each marker hit is the code's correlation
/// peak accepted. The code peak must clear
/// `threshold_fraction * code.len() * samples_per_chip` and its implied
/// amplitude must agree with the marker's within
/// [`AMPLITUDE_MATCH_TOLERANCE`]. Echo delays are reported at the marker
/// peak lag.
pub fn detect_echoes(
    received: &IqBuffer,
    frame: &Frame,
    timing: &RadarTiming,
    threshold_fraction: f64,
) -> Result<Vec<Echo>> {
    let (echoes, _) = scan_echoes(received, frame, timing, threshold_fraction)?;
    Ok(echoes)
}

fn scan_echoes(
    received: &IqBuffer,
    frame: &Frame,
    timing: &RadarTiming,
    threshold_fraction: f64,
) -> Result<(Vec<Echo>, bool)> {
    if !(0.0 < threshold_fraction && threshold_fraction < 1.0) {
        return Err(Error::param(
            "threshold_fraction must be strictly between 0 and 1",
        ));
    }
    let spc = timing.samples_per_chip;
    let fs = timing.sample_rate_hz();
    if (received.sample_rate_hz() - fs).abs() > 1e-6 * fs {
        return Err(Error::param(format!(
            "buffer sample rate {} does not match timing sample rate {}",
            received.sample_rate_hz(),
            fs
        )));
    }

    let marker = frame.marker_chips();
    let marker_len = marker.len() * spc;
    let code_len = frame.code().len() * spc;

    let marker_trace = correlate_complex(received, &marker, spc)?;
    let marker_threshold = threshold_fraction * marker_len as f64;
    let code_threshold = threshold_fraction * code_len as f64;

    // Local maxima of the marker correlation above threshold, with
    // non-maximum suppression over one chip so one echo yields one hit.
    let marker_mags: Vec<f64> = marker_trace.iter().map(|c| c.norm()).collect();
    let mut marker_hits: Vec<usize> = Vec::new();
    for (lag, &mag) in marker_mags.iter().enumerate() {
        if mag < marker_threshold {
            continue;
        }
        let lo = lag.saturating_sub(spc);
        let hi = (lag + spc + 1).min(marker_mags.len());
        let is_peak = marker_mags[lo..hi]
            .iter()
            .enumerate()
            .all(|(i, &m)| m < mag || (m == mag && lo + i >= lag));
        if is_peak {
            marker_hits.push(lag);
        }
    }
    let any_marker = !marker_hits.is_empty();

    let mut echoes = Vec::new();
    for &marker_lag in &marker_hits {
        let expected_code_lag = marker_lag + marker_len;
        // One sample of slack: sample-grid rounding can park the marker peak
        // one lag off its true position.
        let slack = 1usize;
        let lo = expected_code_lag.saturating_sub(slack);
        if lo + code_len > received.len() {
            continue;
        }
        let window = IqBuffer::new(
            received.samples()[lo..(expected_code_lag + slack + code_len).min(received.len())]
                .to_vec(),
            received.sample_rate_hz(),
        )?;
        let code_trace = correlate_complex(&window, frame.code(), spc)?;
        // Slow fading: one echo's marker and code ride the same channel gain,
        // so the code correlation must line up with the marker peak's phase.
        // The aligned (derotated real) component rejects sign-flipped and
        // otherwise mismatched codes that a bare magnitude test would pass.
        let marker_phase_unit = marker_trace[marker_lag] / marker_mags[marker_lag];
        let Some(aligned_peak) = code_trace
            .iter()
            .map(|c| (marker_phase_unit.conj() * c).re)
            .max_by(|a, b| a.partial_cmp(b).unwrap())
        else {
            continue;
        };
        if aligned_peak < code_threshold {
            continue;
        }
        let marker_amp = marker_mags[marker_lag] / marker_len as f64;
        let code_amp = aligned_peak / code_len as f64;
        if (code_amp - marker_amp).abs() > AMPLITUDE_MATCH_TOLERANCE * marker_amp {
            continue;
        }
        echoes.push(Echo {
            delay_s: marker_lag as f64 / fs,
            peak_magnitude: aligned_peak,
        });
    }
    Ok((echoes, any_marker))
}

/// Authenticates a received burst: requires the start marker and, right
/// after it, the expected code. Returns the earliest authenticated echo's
/// delay.
pub fn authenticate(
    received: &IqBuffer,
    frame: &Frame,
    timing: &RadarTiming,
    threshold_fraction: f64,
) -> Result<Authentication> {
    let (echoes, any_marker) = scan_echoes(received, frame, timing, threshold_fraction)?;
    match echoes.first() {
        Some(echo) => Ok(Authentication {
            authenticated: true,
            delay_s: Some(echo.delay_s),
            diagnostic: AuthDiagnostic::Authenticated,
        }),
        None => Ok(Authentication {
            authenticated: false,
            delay_s: None,
            diagnostic: if any_marker {
                AuthDiagnostic::CodeMismatch
            } else {
                AuthDiagnostic::NoStartMarker
            },
        }),
    }
}

/// Ranges the nearest reflector using both antennas.
///
/// The antenna with the larger burst RSSI is preferred; among its
/// authenticated echoes the earliest lag (nearest reflector) becomes the
/// estimate and later peaks are counted as rejected. If the preferred
/// antenna yields no authenticated echo the other antenna is tried.
/// Returns `None` when neither antenna authenticates anything - a no-target
/// outcome, distinct from a zero-delay echo.
pub fn estimate_nearest(
    received_a: &IqBuffer,
    received_b: &IqBuffer,
    frame: &Frame,
    timing: &RadarTiming,
) -> Result<Option<RangeEstimate>> {
    estimate_nearest_with(
        received_a,
        received_b,
        frame,
        timing,
        DEFAULT_THRESHOLD_FRACTION,
    )
}

/// [`estimate_nearest`] with an explicit acceptance threshold.
pub fn estimate_nearest_with(
    received_a: &IqBuffer,
    received_b: &IqBuffer,
    frame: &Frame,
    timing: &RadarTiming,
    threshold_fraction: f64,
) -> Result<Option<RangeEstimate>> {
    if received_a.len() != received_b.len()
        || received_a.sample_rate_hz() != received_b.sample_rate_hz()
    {
        return Err(Error::param(
            "antenna buffers must share length and sample rate",
        ));
    }
    let selection = select_antenna(rssi(received_a), rssi(received_b));
    let ordered = if selection.index == 0 {
        [(0usize, received_a), (1usize, received_b)]
    } else {
        [(1, received_b), (0, received_a)]
    };
    for (antenna, buffer) in ordered {
        let echoes = detect_echoes(buffer, frame, timing, threshold_fraction)?;
        let Some(nearest) = echoes
            .iter()
            .min_by(|a, b| a.delay_s.partial_cmp(&b.delay_s).unwrap())
        else {
            continue;
        };
        return Ok(Some(RangeEstimate {
            delay_s: nearest.delay_s,
            range_m: delay_to_range(nearest.delay_s)?,
            peak_magnitude: nearest.peak_magnitude,
            authenticated: true,
            antenna_used: antenna,
            rejected_peaks: echoes.len() - 1,
        }));
    }
    Ok(None)
}

//! The propagation environment: tap-delay-line multipath, slow Rayleigh
//! fading, the two-path frequency-selective model behind complementary
//! fading, interferers, and receiver noise.
//!
//! Fading is slow: channel gains are constant within one burst and redrawn
//! between bursts, which is what one call to [`apply_channel`] simulates.
//! All randomness flows from explicit seeds.

use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::signal::{IqBuffer, BAND_CENTER_HZ};
use crate::util::{bessel_j0, derive_seed};

const STREAM_FADE: u64 = 0x01;
const STREAM_FADE_ALT: u64 = 0x02;
const STREAM_PHASE: u64 = 0x03;
const STREAM_NOISE: u64 = 0x04;
const STREAM_INTERF: u64 = 0x05;

/// One propagation path.
///
/// A positive `doppler_hz` marks the tap as Rayleigh-fading: its gain is
/// multiplied by a unit-mean-power complex Gaussian coefficient redrawn per
/// burst. A zero `doppler_hz` keeps the gain static.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelTap {
    /// Path delay in seconds (>= 0).
    pub delay_s: f64,
    /// Complex path amplitude (linear).
    pub gain: Complex64,
    /// Doppler spread in Hz; > 0 enables per-burst fading on this tap.
    pub doppler_hz: f64,
}

impl ChannelTap {
    pub fn new(delay_s: f64, gain: Complex64, doppler_hz: f64) -> Result<Self> {
        let tap = ChannelTap {
            delay_s,
            gain,
            doppler_hz,
        };
        tap.validate()?;
        Ok(tap)
    }

    /// Static unit-gain tap at the given delay.
    pub fn direct(delay_s: f64) -> Result<Self> {
        ChannelTap::new(delay_s, Complex64::new(1.0, 0.0), 0.0)
    }

    fn validate(&self) -> Result<()> {
        if !(self.delay_s >= 0.0) || !self.delay_s.is_finite() {
            return Err(Error::param(format!(
                "tap delay must be >= 0, got {}",
                self.delay_s
            )));
        }
        if !self.gain.re.is_finite() || !self.gain.im.is_finite() {
            return Err(Error::param("tap gain must be finite"));
        }
        if !(self.doppler_hz >= 0.0) || !self.doppler_hz.is_finite() {
            return Err(Error::param("tap doppler must be >= 0"));
        }
        Ok(())
    }
}

/// Interferer classes: tones at zero / nonzero offset, or wideband noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterfererKind {
    CochannelTone,
    AdjacentTone,
    BroadbandJammer,
}

/// An active interference source.
///
/// `freq_offset_hz` is relative to the band center; with hopping, the tone
/// stays put while the receiver moves, so the baseband offset seen by a hop
/// at carrier f is `BAND_CENTER_HZ + freq_offset_hz - f`. A `power_db` of
/// negative infinity disables the interferer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interferer {
    pub kind: InterfererKind,
    pub freq_offset_hz: f64,
    /// Power in dB relative to a unit-power signal.
    pub power_db: f64,
}

impl Interferer {
    pub fn new(kind: InterfererKind, freq_offset_hz: f64, power_db: f64) -> Result<Self> {
        let itf = Interferer {
            kind,
            freq_offset_hz,
            power_db,
        };
        itf.validate()?;
        Ok(itf)
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            InterfererKind::CochannelTone if self.freq_offset_hz != 0.0 => Err(Error::param(
                "cochannel tone must have freq_offset_hz = 0",
            )),
            InterfererKind::AdjacentTone if self.freq_offset_hz == 0.0 => Err(Error::param(
                "adjacent tone must have freq_offset_hz != 0",
            )),
            _ => Ok(()),
        }
    }

    pub fn is_disabled(&self) -> bool {
        self.power_db == f64::NEG_INFINITY
    }

    /// Linear power of the interferer.
    pub fn power_linear(&self) -> f64 {
        if self.is_disabled() {
            0.0
        } else {
            10f64.powf(self.power_db / 10.0)
        }
    }
}

/// Complete propagation description for one link.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelModel {
    /// Propagation paths; at least one.
    pub taps: Vec<ChannelTap>,
    /// Complex white-noise variance per sample (both quadratures combined).
    pub noise_psd: f64,
    pub interferers: Vec<Interferer>,
    /// How differently antenna 1 sees the taps: 0 = identical to antenna 0,
    /// 1 = fully independent.
    pub antenna_decorrelation: f64,
}

impl ChannelModel {
    /// Distortion-free channel: one direct tap, no noise, no interference.
    pub fn identity() -> Self {
        ChannelModel {
            taps: vec![ChannelTap {
                delay_s: 0.0,
                gain: Complex64::new(1.0, 0.0),
                doppler_hz: 0.0,
            }],
            noise_psd: 0.0,
            interferers: Vec::new(),
            antenna_decorrelation: 0.0,
        }
    }

    /// AWGN-only channel with the given per-sample noise variance.
    pub fn awgn(noise_psd: f64) -> Self {
        ChannelModel {
            noise_psd,
            ..ChannelModel::identity()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.taps.is_empty() {
            return Err(Error::param("channel model needs at least one tap"));
        }
        for tap in &self.taps {
            tap.validate()?;
        }
        if !(0.0..=1.0).contains(&self.antenna_decorrelation) {
            return Err(Error::param(format!(
                "antenna_decorrelation must be in [0, 1], got {}",
                self.antenna_decorrelation
            )));
        }
        if !(self.noise_psd >= 0.0) || !self.noise_psd.is_finite() {
            return Err(Error::param("noise_psd must be >= 0"));
        }
        for itf in &self.interferers {
            itf.validate()?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Two-path interference
// ---------------------------------------------------------------------------

/// Magnitude of the two-path channel response at a carrier frequency:
/// `|g1 e^{-j2πfτ1} + g2 e^{-j2πfτ2}|`.
///
/// With equal unit gains the response is 2 when `f·Δτ` is an integer
/// (additive) and 0 at half-integers (subtractive), which is the mechanism
/// behind complementary fading at two carriers sharing one path geometry.
pub fn two_path_gain(freq_hz: f64, tap1: &ChannelTap, tap2: &ChannelTap) -> f64 {
    let phasor = |tap: &ChannelTap| {
        tap.gain * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * freq_hz * tap.delay_s)
    };
    (phasor(tap1) + phasor(tap2)).norm()
}

// ---------------------------------------------------------------------------
// Rayleigh fading trace
// ---------------------------------------------------------------------------

/// A complex channel-gain time series with unit mean power.
#[derive(Debug, Clone, PartialEq)]
pub struct FadeTrace {
    sample_interval_s: f64,
    gains: Vec<Complex64>,
}

impl FadeTrace {
    pub fn gains(&self) -> &[Complex64] {
        &self.gains
    }

    pub fn sample_interval_s(&self) -> f64 {
        self.sample_interval_s
    }

    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }

    pub fn time_s(&self, index: usize) -> f64 {
        index as f64 * self.sample_interval_s
    }

    /// Envelope in dB relative to the unit mean power.
    pub fn envelope_db(&self) -> Vec<f64> {
        self.gains
            .iter()
            .map(|g| {
                let p = g.norm_sqr();
                if p == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    10.0 * p.log10()
                }
            })
            .collect()
    }

    pub fn mean_power(&self) -> f64 {
        self.gains.iter().map(|g| g.norm_sqr()).sum::<f64>() / self.gains.len() as f64
    }

    /// CSV export: time_s, gain_real, gain_imag, envelope_db.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "time_s,gain_real,gain_imag,envelope_db")?;
        for (i, g) in self.gains.iter().enumerate() {
            let p = g.norm_sqr();
            let db = if p == 0.0 {
                f64::NEG_INFINITY
            } else {
                10.0 * p.log10()
            };
            writeln!(w, "{},{},{},{}", self.time_s(i), g.re, g.im, db)?;
        }
        Ok(())
    }
}

/// Generates a Rayleigh-envelope complex gain time series.
///
/// The process is a stationary first-order Gauss-Markov chain whose lag-one
/// autocorrelation matches the Clarke/Jakes value `J0(2π f_d Δt)`, so every
/// sample is exactly complex Gaussian with unit mean power (Rayleigh
/// envelope) and the trace decorrelates on the Doppler time scale.
/// Deterministic per seed.
pub fn rayleigh_fade_trace(
    doppler_hz: f64,
    duration_s: f64,
    sample_interval_s: f64,
    seed: u64,
) -> Result<FadeTrace> {
    if !(doppler_hz > 0.0) {
        return Err(Error::param("doppler_hz must be positive"));
    }
    if !(duration_s > 0.0) {
        return Err(Error::param("duration_s must be positive"));
    }
    if !(sample_interval_s > 0.0) {
        return Err(Error::param("sample_interval_s must be positive"));
    }
    let n = ((duration_s / sample_interval_s).round() as usize).max(1);
    let rho = bessel_j0(2.0 * std::f64::consts::PI * doppler_hz * sample_interval_s)
        .clamp(-0.999_999, 0.999_999);
    let innovation = (1.0 - rho * rho).sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[STREAM_FADE]));
    let normal = Normal::new(0.0, (0.5f64).sqrt()).expect("valid sigma");
    let draw = |rng: &mut ChaCha8Rng| Complex64::new(normal.sample(rng), normal.sample(rng));

    let mut gains = Vec::with_capacity(n);
    let mut g = draw(&mut rng);
    gains.push(g);
    for _ in 1..n {
        g = rho * g + innovation * draw(&mut rng);
        gains.push(g);
    }
    Ok(FadeTrace {
        sample_interval_s,
        gains,
    })
}

// ---------------------------------------------------------------------------
// Burst channel application
// ---------------------------------------------------------------------------

/// Passes a transmit buffer through the channel as seen by one antenna
/// during one burst.
///
/// Each tap contributes its gain times the input delayed by the nearest
/// whole sample, with the carrier phase `e^{-j2πf_cτ}` of the exact delay
/// applied on top. Fading taps get a fresh unit-power Rayleigh coefficient
/// per (seed, tap). Antenna 1 sees the taps re-drawn with weight
/// `antenna_decorrelation`: 0 reproduces antenna 0 exactly, 1 is fully
/// independent. Interference and complex white noise are added last; both
/// are identical across antennas for a given seed.
pub fn apply_channel(
    tx: &IqBuffer,
    model: &ChannelModel,
    carrier_hz: f64,
    antenna_index: usize,
    seed: u64,
) -> Result<IqBuffer> {
    model.validate()?;
    if antenna_index > 1 {
        return Err(Error::param(format!(
            "antenna_index must be 0 or 1, got {antenna_index}"
        )));
    }
    if tx.is_empty() {
        return Err(Error::param("transmit buffer must be nonempty"));
    }
    let fs = tx.sample_rate_hz();
    let n = tx.len();
    let decorrelation = model.antenna_decorrelation;
    let mut out = vec![Complex64::new(0.0, 0.0); n];

    for (ti, tap) in model.taps.iter().enumerate() {
        let lag = (tap.delay_s * fs).round() as usize;
        if lag >= n {
            return Err(Error::DelayBeyondBuffer {
                delay_samples: lag,
                buffer_len: n,
            });
        }
        let mut gain = tap.gain;
        if tap.doppler_hz > 0.0 {
            // Slow fading: one coefficient per burst. The base draw is shared
            // by both antennas so decorrelation = 0 keeps them identical.
            let base = complex_gaussian(derive_seed(seed, &[STREAM_FADE, ti as u64]));
            gain *= if antenna_index == 1 && decorrelation > 0.0 {
                let alt = complex_gaussian(derive_seed(seed, &[STREAM_FADE_ALT, ti as u64]));
                (1.0 - decorrelation).sqrt() * base + decorrelation.sqrt() * alt
            } else {
                base
            };
        } else if antenna_index == 1 && decorrelation > 0.0 {
            // Static tap: antenna separation shows up as a path phase offset.
            let mut rng =
                ChaCha8Rng::seed_from_u64(derive_seed(seed, &[STREAM_PHASE, ti as u64]));
            let u: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            gain *= Complex64::from_polar(1.0, decorrelation * u);
        }
        let carrier_phase =
            Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * carrier_hz * tap.delay_s);
        let weight = gain * carrier_phase;
        let tx_samples = tx.samples();
        for i in lag..n {
            out[i] += weight * tx_samples[i - lag];
        }
    }

    for (ki, itf) in model.interferers.iter().enumerate() {
        let itf_seed = derive_seed(seed, &[STREAM_INTERF, ki as u64]);
        add_interference_into(&mut out, fs, itf, carrier_hz, itf_seed);
    }

    if model.noise_psd > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[STREAM_NOISE]));
        let normal = Normal::new(0.0, (model.noise_psd / 2.0).sqrt()).expect("valid sigma");
        for s in &mut out {
            *s += Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng));
        }
    }

    IqBuffer::new(out, fs)
}

fn complex_gaussian(seed: u64) -> Complex64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, (0.5f64).sqrt()).expect("valid sigma");
    Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng))
}

/// Adds one interferer to a buffer.
///
/// Tones are complex exponentials whose baseband frequency accounts for the
/// current carrier (`BAND_CENTER_HZ + freq_offset_hz - carrier_hz`) with a
/// seeded random start phase; the broadband jammer is complex white noise.
/// Output power is input power plus interferer power. A disabled interferer
/// returns the input unchanged.
pub fn add_interference(
    buffer: &IqBuffer,
    interferer: &Interferer,
    carrier_hz: f64,
    seed: u64,
) -> IqBuffer {
    let mut samples = buffer.samples().to_vec();
    add_interference_into(&mut samples, buffer.sample_rate_hz(), interferer, carrier_hz, seed);
    IqBuffer::new(samples, buffer.sample_rate_hz()).expect("interference keeps samples finite")
}

fn add_interference_into(
    samples: &mut [Complex64],
    sample_rate_hz: f64,
    interferer: &Interferer,
    carrier_hz: f64,
    seed: u64,
) {
    if interferer.is_disabled() {
        return;
    }
    let power = interferer.power_linear();
    match interferer.kind {
        InterfererKind::CochannelTone | InterfererKind::AdjacentTone => {
            let baseband_hz = BAND_CENTER_HZ + interferer.freq_offset_hz - carrier_hz;
            let amplitude = power.sqrt();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let phase0: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let step = std::f64::consts::TAU * baseband_hz / sample_rate_hz;
            for (i, s) in samples.iter_mut().enumerate() {
                *s += Complex64::from_polar(amplitude, phase0 + step * i as f64);
            }
        }
        InterfererKind::BroadbandJammer => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let normal = Normal::new(0.0, (power / 2.0).sqrt()).expect("valid sigma");
            for s in samples.iter_mut() {
                *s += Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng));
            }
        }
    }
}

//! Baseband waveform construction: complex sample buffers, spreading and
//! despreading, burst framing with the start marker, FHSS hop planning, and
//! RSSI measurement.
//!
//! The simulation runs entirely at complex baseband; the carrier frequency is
//! metadata that enters only through channel phase terms and the wavelength
//! math.

use std::io::{BufRead, Write};

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pn_code::{self, ChipSequence};

/// Exact speed of light in m/s.
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Lower edge of the operating band, Hz.
pub const BAND_LOW_HZ: f64 = 5.76e9;
/// Upper edge of the operating band, Hz.
pub const BAND_HIGH_HZ: f64 = 5.84e9;
/// Band center, Hz. Default carrier when hopping is disabled.
pub const BAND_CENTER_HZ: f64 = 5.8e9;

/// Burst start marker: 11101, the bit image of the length-5 Barker code.
/// Chosen to not prefix-match the bit image of the 13-chip ranging code.
pub const DEFAULT_START_MARKER: [u8; 5] = [1, 1, 1, 0, 1];

// ---------------------------------------------------------------------------
// IqBuffer
// ---------------------------------------------------------------------------

/// A complex baseband sample stream at a stated sample rate.
///
/// Invariants: the sample rate is positive and every sample is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct IqBuffer {
    samples: Vec<Complex64>,
    sample_rate_hz: f64,
}

impl IqBuffer {
    pub fn new(samples: Vec<Complex64>, sample_rate_hz: f64) -> Result<Self> {
        if !(sample_rate_hz > 0.0) || !sample_rate_hz.is_finite() {
            return Err(Error::param(format!(
                "sample_rate_hz must be positive and finite, got {sample_rate_hz}"
            )));
        }
        if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(Error::param("buffer contains non-finite samples"));
        }
        Ok(IqBuffer {
            samples,
            sample_rate_hz,
        })
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    /// Writes the buffer as CSV with columns index, real, imag. A leading
    /// comment line records the sample rate.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# sample_rate_hz={}", self.sample_rate_hz)?;
        writeln!(w, "index,real,imag")?;
        for (i, s) in self.samples.iter().enumerate() {
            writeln!(w, "{},{},{}", i, s.re, s.im)?;
        }
        Ok(())
    }

    /// Reads a buffer previously written by [`IqBuffer::write_csv`].
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut sample_rate_hz = None;
        let mut samples = Vec::new();
        for line in r.lines() {
            let line = line.map_err(|e| Error::param(format!("csv read: {e}")))?;
            let line = line.trim();
            if line.is_empty() || line == "index,real,imag" {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(v) = rest.trim().strip_prefix("sample_rate_hz=") {
                    sample_rate_hz = Some(
                        v.parse::<f64>()
                            .map_err(|e| Error::param(format!("bad sample rate: {e}")))?,
                    );
                }
                continue;
            }
            let mut fields = line.split(',');
            let _index = fields.next();
            let re: f64 = fields
                .next()
                .ok_or_else(|| Error::param("missing real column"))?
                .parse()
                .map_err(|e| Error::param(format!("bad real value: {e}")))?;
            let im: f64 = fields
                .next()
                .ok_or_else(|| Error::param("missing imag column"))?
                .parse()
                .map_err(|e| Error::param(format!("bad imag value: {e}")))?;
            samples.push(Complex64::new(re, im));
        }
        let rate = sample_rate_hz.ok_or_else(|| Error::param("missing sample_rate_hz header"))?;
        IqBuffer::new(samples, rate)
    }
}

// ---------------------------------------------------------------------------
// Frame
// ---------------------------------------------------------------------------

/// One transmit burst: a start marker, the spreading/ranging code and an
/// optional data payload (empty in radar mode).
///
/// The receiver authenticates an echo by finding the marker first and only
/// then checking for the code, so the marker must not look like the start of
/// the code.
#[derive(Debug, Clone)]
pub struct Frame {
    start_marker: Vec<u8>,
    code: ChipSequence,
    payload_bits: Vec<u8>,
}

impl Frame {
    pub fn new(start_marker: Vec<u8>, code: ChipSequence, payload_bits: Vec<u8>) -> Result<Self> {
        if start_marker.is_empty() {
            return Err(Error::param("start marker must be nonempty"));
        }
        validate_bits(&start_marker)?;
        validate_bits(&payload_bits)?;
        let code_bits = code.bits();
        let prefix_len = start_marker.len().min(code_bits.len());
        if start_marker[..prefix_len] == code_bits[..prefix_len] {
            return Err(Error::param(
                "start marker must differ from the leading bits of the code",
            ));
        }
        Ok(Frame {
            start_marker,
            code,
            payload_bits,
        })
    }

    /// Radar-mode frame: default marker, no payload.
    pub fn radar(code: ChipSequence) -> Result<Self> {
        Frame::new(DEFAULT_START_MARKER.to_vec(), code, Vec::new())
    }

    pub fn start_marker(&self) -> &[u8] {
        &self.start_marker
    }

    pub fn code(&self) -> &ChipSequence {
        &self.code
    }

    pub fn payload_bits(&self) -> &[u8] {
        &self.payload_bits
    }

    /// Marker bits as a bipolar chip sequence (1 -> +1, 0 -> -1).
    pub fn marker_chips(&self) -> ChipSequence {
        ChipSequence::new(
            self.start_marker
                .iter()
                .map(|&b| if b == 1 { 1i8 } else { -1i8 })
                .collect(),
        )
        .expect("marker is nonempty and binary")
    }

    /// Full burst waveform: marker chips, then the bare code, then the
    /// spread payload. Both marker and code run at the chip rate with each
    /// chip held `samples_per_chip` samples.
    pub fn waveform(&self, samples_per_chip: usize, sample_rate_hz: f64) -> Result<IqBuffer> {
        if samples_per_chip == 0 {
            return Err(Error::param("samples_per_chip must be >= 1"));
        }
        let mut samples = Vec::with_capacity(
            (self.start_marker.len() + self.code.len() * (1 + self.payload_bits.len()))
                * samples_per_chip,
        );
        push_chips(&mut samples, self.marker_chips().chips(), samples_per_chip);
        push_chips(&mut samples, self.code.chips(), samples_per_chip);
        if !self.payload_bits.is_empty() {
            let payload = spread(
                &self.payload_bits,
                &self.code,
                samples_per_chip,
                sample_rate_hz,
            )?;
            samples.extend_from_slice(payload.samples());
        }
        IqBuffer::new(samples, sample_rate_hz)
    }

    /// Number of samples in the marker-plus-code section of the burst.
    pub fn sync_len_samples(&self, samples_per_chip: usize) -> usize {
        (self.start_marker.len() + self.code.len()) * samples_per_chip
    }
}

fn validate_bits(bits: &[u8]) -> Result<()> {
    if let Some(bad) = bits.iter().find(|&&b| b > 1) {
        return Err(Error::param(format!("bits must be 0 or 1, got {bad}")));
    }
    Ok(())
}

fn push_chips(samples: &mut Vec<Complex64>, chips: &[i8], samples_per_chip: usize) {
    for &c in chips {
        let v = Complex64::new(f64::from(c), 0.0);
        for _ in 0..samples_per_chip {
            samples.push(v);
        }
    }
}

// ---------------------------------------------------------------------------
// Spreading
// ---------------------------------------------------------------------------

/// Spreads data bits with a bipolar code.
///
/// Each bit b in {0, 1} emits `code * (2b - 1)` with every chip held
/// `samples_per_chip` samples, so the output length is
/// `bits.len() * code.len() * samples_per_chip`.
pub fn spread(
    bits: &[u8],
    code: &ChipSequence,
    samples_per_chip: usize,
    sample_rate_hz: f64,
) -> Result<IqBuffer> {
    if bits.is_empty() {
        return Err(Error::param("bits must be nonempty"));
    }
    if samples_per_chip == 0 {
        return Err(Error::param("samples_per_chip must be >= 1"));
    }
    validate_bits(bits)?;
    let mut samples = Vec::with_capacity(bits.len() * code.len() * samples_per_chip);
    for &b in bits {
        let sign = f64::from(i16::from(b) * 2 - 1);
        for &c in code.chips() {
            let v = Complex64::new(sign * f64::from(c), 0.0);
            for _ in 0..samples_per_chip {
                samples.push(v);
            }
        }
    }
    IqBuffer::new(samples, sample_rate_hz)
}

/// Despreads a buffer produced by [`spread`]: per bit period, the sign of the
/// real correlation with the code decides the bit.
pub fn despread(
    buffer: &IqBuffer,
    code: &ChipSequence,
    samples_per_chip: usize,
) -> Result<Vec<u8>> {
    if samples_per_chip == 0 {
        return Err(Error::param("samples_per_chip must be >= 1"));
    }
    let bit_period = code.len() * samples_per_chip;
    if buffer.len() % bit_period != 0 || buffer.is_empty() {
        return Err(Error::FrameMisalignment {
            len: buffer.len(),
            bit_period,
        });
    }
    let mut bits = Vec::with_capacity(buffer.len() / bit_period);
    for chunk in buffer.samples().chunks_exact(bit_period) {
        let mut acc = 0.0;
        for (ci, &chip) in code.chips().iter().enumerate() {
            let sign = f64::from(chip);
            for s in &chunk[ci * samples_per_chip..(ci + 1) * samples_per_chip] {
                acc += sign * s.re;
            }
        }
        bits.push(u8::from(acc > 0.0));
    }
    Ok(bits)
}

// ---------------------------------------------------------------------------
// Hop planning
// ---------------------------------------------------------------------------

/// A frequency-hopping schedule over the operating band.
#[derive(Debug, Clone, PartialEq)]
pub struct HopPlan {
    carriers_hz: Vec<f64>,
    dwell_s: f64,
    band_low_hz: f64,
    band_high_hz: f64,
}

impl HopPlan {
    /// Hop order for one full cycle; the schedule repeats it.
    pub fn carriers_hz(&self) -> &[f64] {
        &self.carriers_hz
    }

    pub fn dwell_s(&self) -> f64 {
        self.dwell_s
    }

    pub fn band_hz(&self) -> (f64, f64) {
        (self.band_low_hz, self.band_high_hz)
    }

    /// Carrier used by the k-th dwell (cycling through the plan).
    pub fn carrier_for_slot(&self, slot: usize) -> f64 {
        self.carriers_hz[slot % self.carriers_hz.len()]
    }
}

/// Builds a pseudorandom hop plan of `n_channels` equally spaced carriers
/// inside [5.76, 5.84] GHz. The order is a seeded permutation, repeated each
/// full cycle; a given seed always yields the same plan.
pub fn make_hop_plan(n_channels: usize, dwell_s: f64, seed: u64) -> Result<HopPlan> {
    if n_channels == 0 {
        return Err(Error::param("n_channels must be >= 1"));
    }
    if !(dwell_s > 0.0) {
        return Err(Error::param("dwell_s must be positive"));
    }
    let band_width = BAND_HIGH_HZ - BAND_LOW_HZ;
    let spacing = band_width / n_channels as f64;
    if spacing < 1e6 {
        return Err(Error::param(format!(
            "{n_channels} channels gives {:.0} kHz spacing; minimum is 1 MHz",
            spacing / 1e3
        )));
    }
    let mut carriers: Vec<f64> = (0..n_channels)
        .map(|i| BAND_LOW_HZ + (i as f64 + 0.5) * spacing)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    carriers.shuffle(&mut rng);
    debug_assert!(carriers
        .iter()
        .all(|&c| (BAND_LOW_HZ..=BAND_HIGH_HZ).contains(&c)));
    Ok(HopPlan {
        carriers_hz: carriers,
        dwell_s,
        band_low_hz: BAND_LOW_HZ,
        band_high_hz: BAND_HIGH_HZ,
    })
}

// ---------------------------------------------------------------------------
// RSSI and wavelength
// ---------------------------------------------------------------------------

/// Received signal strength in dB: `10 log10(mean |sample|^2)`.
///
/// An all-zero (or empty) buffer reports the no-signal sentinel,
/// negative infinity.
pub fn rssi(buffer: &IqBuffer) -> f64 {
    if buffer.is_empty() {
        return f64::NEG_INFINITY;
    }
    let mean_power: f64 =
        buffer.samples().iter().map(|s| s.norm_sqr()).sum::<f64>() / buffer.len() as f64;
    if mean_power == 0.0 {
        f64::NEG_INFINITY
    } else {
        10.0 * mean_power.log10()
    }
}

/// Returns true when an RSSI value is the no-signal sentinel.
pub fn is_no_signal(rssi_db: f64) -> bool {
    rssi_db == f64::NEG_INFINITY
}

/// RSSI per non-overlapping window of `window` samples (trailing partial
/// window dropped). Used to turn a faded waveform into an RSSI-vs-time trace.
pub fn windowed_rssi(buffer: &IqBuffer, window: usize) -> Vec<f64> {
    if window == 0 {
        return Vec::new();
    }
    buffer
        .samples()
        .chunks_exact(window)
        .map(|chunk| {
            let p: f64 = chunk.iter().map(|s| s.norm_sqr()).sum::<f64>() / window as f64;
            if p == 0.0 {
                f64::NEG_INFINITY
            } else {
                10.0 * p.log10()
            }
        })
        .collect()
}

/// Free-space wavelength c/f in meters, with c exact.
pub fn wavelength(freq_hz: f64) -> Result<f64> {
    if !(freq_hz > 0.0) || !freq_hz.is_finite() {
        return Err(Error::param(format!(
            "frequency must be positive, got {freq_hz}"
        )));
    }
    Ok(SPEED_OF_LIGHT_M_S / freq_hz)
}

/// Re-export of the matched filter so waveform consumers have the whole
/// burst toolkit in one place.
pub use pn_code::correlate;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pn_code::barker13;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn spread_single_one_bit_is_the_code() {
        let code = barker13();
        let buf = spread(&[1], &code, 1, 1.0).unwrap();
        assert_eq!(buf.len(), 13);
        for (s, &c) in buf.samples().iter().zip(code.chips()) {
            assert_eq!(s.re, f64::from(c));
            assert_eq!(s.im, 0.0);
        }
    }

    #[test]
    fn spread_zero_bit_is_negated_code() {
        let code = barker13();
        let buf = spread(&[0], &code, 1, 1.0).unwrap();
        for (s, &c) in buf.samples().iter().zip(code.chips()) {
            assert_eq!(s.re, -f64::from(c));
        }
    }

    #[test]
    fn spread_length_formula() {
        let code = barker13();
        let buf = spread(&[1, 0], &code, 4, 1.0).unwrap();
        assert_eq!(buf.len(), 104);
    }

    #[test]
    fn spread_rejects_empty_and_bad_bits() {
        let code = barker13();
        assert!(spread(&[], &code, 1, 1.0).is_err());
        assert!(spread(&[2], &code, 1, 1.0).is_err());
        assert!(spread(&[1], &code, 0, 1.0).is_err());
    }

    #[test]
    fn despread_inverts_spread_noiselessly() {
        let code = barker13();
        let bits = [1u8, 0, 1, 1, 0, 0, 1];
        for spc in [1usize, 2, 4, 8] {
            let tx = spread(&bits, &code, spc, 1.0).unwrap();
            assert_eq!(despread(&tx, &code, spc).unwrap(), bits);
        }
    }

    #[test]
    fn despread_flips_all_bits_when_input_negated() {
        let code = barker13();
        let bits = [1u8, 0, 1, 1];
        let tx = spread(&bits, &code, 2, 1.0).unwrap();
        let negated =
            IqBuffer::new(tx.samples().iter().map(|s| -s).collect(), 1.0).unwrap();
        let rx = despread(&negated, &code, 2).unwrap();
        let flipped: Vec<u8> = bits.iter().map(|b| 1 - b).collect();
        assert_eq!(rx, flipped);
    }

    #[test]
    fn despread_detects_misalignment() {
        let code = barker13();
        let tx = spread(&[1, 0], &code, 2, 1.0).unwrap();
        let truncated = IqBuffer::new(tx.samples()[..40].to_vec(), 1.0).unwrap();
        let err = despread(&truncated, &code, 2).unwrap_err();
        assert!(err.to_string().contains("frame misalignment"));
    }

    #[test]
    fn hop_plan_single_channel_is_band_center() {
        let plan = make_hop_plan(1, 1e-3, 0).unwrap();
        assert_eq!(plan.carriers_hz().len(), 1);
        assert_relative_eq!(plan.carriers_hz()[0], BAND_CENTER_HZ, epsilon = 1.0);
    }

    #[test]
    fn hop_plan_is_a_permutation_of_distinct_carriers() {
        let plan = make_hop_plan(8, 1e-3, 99).unwrap();
        let mut sorted = plan.carriers_hz().to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(sorted.len(), 8);
        for w in sorted.windows(2) {
            assert!(w[1] - w[0] > 9.9e6, "carriers not distinct: {w:?}");
        }
        for &c in plan.carriers_hz() {
            assert!((BAND_LOW_HZ..=BAND_HIGH_HZ).contains(&c));
        }
    }

    #[test]
    fn hop_plan_deterministic_per_seed() {
        let a = make_hop_plan(8, 1e-3, 42).unwrap();
        let b = make_hop_plan(8, 1e-3, 42).unwrap();
        assert_eq!(a, b);
        let c = make_hop_plan(8, 1e-3, 43).unwrap();
        assert_ne!(a.carriers_hz(), c.carriers_hz());
    }

    #[test]
    fn hop_plan_rejects_absurd_channel_counts() {
        // 81 channels over 80 MHz -> spacing below 1 MHz.
        assert!(make_hop_plan(81, 1e-3, 0).is_err());
        assert!(make_hop_plan(0, 1e-3, 0).is_err());
    }

    #[test]
    fn rssi_unit_power_is_zero_db() {
        let buf = IqBuffer::new(vec![Complex64::new(1.0, 0.0); 64], 1.0).unwrap();
        assert_relative_eq!(rssi(&buf), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rssi_scaling_law() {
        let buf = IqBuffer::new(
            (0..50)
                .map(|i| Complex64::new(0.3 + 0.01 * i as f64, -0.2))
                .collect(),
            1.0,
        )
        .unwrap();
        let scaled =
            IqBuffer::new(buf.samples().iter().map(|s| s * 10.0).collect(), 1.0).unwrap();
        assert_relative_eq!(rssi(&scaled) - rssi(&buf), 20.0, epsilon = 1e-9);
    }

    #[test]
    fn rssi_no_signal_sentinel() {
        let buf = IqBuffer::new(vec![Complex64::new(0.0, 0.0); 8], 1.0).unwrap();
        assert!(is_no_signal(rssi(&buf)));
    }

    #[test]
    fn windowed_rssi_of_faded_carrier_shows_deep_dips() {
        // A unit carrier scaled by a slow Rayleigh gain: the per-window RSSI
        // trace must swing at least 20 dB between its quietest fade and its
        // strongest peak.
        let trace =
            crate::channel::rayleigh_fade_trace(30.0, 20.0, 1e-3, 12).unwrap();
        let samples_per_gain = 8;
        let samples: Vec<Complex64> = trace
            .gains()
            .iter()
            .flat_map(|&g| std::iter::repeat(g).take(samples_per_gain))
            .collect();
        let buf = IqBuffer::new(samples, 8e3).unwrap();
        let levels = windowed_rssi(&buf, samples_per_gain);
        assert_eq!(levels.len(), trace.len());
        let max = levels.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = levels.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(
            max - min >= 20.0,
            "RSSI span {:.1} dB too small for a deep-fade trace",
            max - min
        );
    }

    #[test]
    fn wavelength_matches_band_table_values() {
        // 5.8 GHz: 5.17 cm, within 0.5% of the 5.172 cm quoted for the band
        // (tables rounded with c = 3e8).
        let lam = wavelength(5.8e9).unwrap();
        assert!((lam - 0.0517).abs() < 1e-4);
        assert!((lam / 0.05172 - 1.0).abs() < 0.005);
        // 900 MHz: 33.3 cm, near the quoted 33 cm.
        let lam = wavelength(900e6).unwrap();
        assert_relative_eq!(lam, 0.333_103, epsilon = 1e-6);
        assert!((lam / 0.33 - 1.0).abs() < 0.015);
        // 2.4 GHz: 12.5 cm.
        let lam = wavelength(2.4e9).unwrap();
        assert!((lam / 0.125 - 1.0).abs() < 0.005);
    }

    #[test]
    fn wavelength_strictly_decreasing() {
        let freqs = [0.9e9, 2.4e9, 5.8e9, 12.5e9];
        for w in freqs.windows(2) {
            assert!(wavelength(w[0]).unwrap() > wavelength(w[1]).unwrap());
        }
        assert!(wavelength(0.0).is_err());
        assert!(wavelength(-1.0).is_err());
    }

    #[test]
    fn frame_rejects_marker_matching_code_prefix() {
        // Barker-13 bit image starts 11111.
        let err = Frame::new(vec![1, 1, 1, 1, 1], barker13(), vec![]).unwrap_err();
        assert!(err.to_string().contains("start marker"));
        assert!(Frame::new(vec![], barker13(), vec![]).is_err());
        assert!(Frame::radar(barker13()).is_ok());
    }

    #[test]
    fn frame_waveform_layout() {
        let frame = Frame::radar(barker13()).unwrap();
        let spc = 2;
        let wf = frame.waveform(spc, 1.0).unwrap();
        assert_eq!(wf.len(), (5 + 13) * spc);
        assert_eq!(frame.sync_len_samples(spc), wf.len());
        // Marker chips first: 1,1,1,-1,1 held twice each.
        assert_eq!(wf.samples()[0].re, 1.0);
        assert_eq!(wf.samples()[6].re, -1.0);
        assert_eq!(wf.samples()[7].re, -1.0);
    }

    #[test]
    fn iq_csv_round_trip() {
        let buf = IqBuffer::new(
            vec![Complex64::new(1.5, -0.25), Complex64::new(0.0, 3.0)],
            250e6,
        )
        .unwrap();
        let mut out = Vec::new();
        buf.write_csv(&mut out).unwrap();
        let parsed = IqBuffer::read_csv(out.as_slice()).unwrap();
        assert_eq!(parsed, buf);
    }

    #[test]
    fn iq_buffer_rejects_non_finite() {
        assert!(IqBuffer::new(vec![Complex64::new(f64::NAN, 0.0)], 1.0).is_err());
        assert!(IqBuffer::new(vec![], 0.0).is_err());
    }

    proptest! {
        #[test]
        fn prop_spread_despread_round_trip(
            bits in proptest::collection::vec(0u8..=1, 1..40),
            spc in 1usize..=8,
        ) {
            let code = barker13();
            let tx = spread(&bits, &code, spc, 1.0).unwrap();
            prop_assert_eq!(despread(&tx, &code, spc).unwrap(), bits);
        }

        #[test]
        fn prop_rssi_shift(alpha in 0.01f64..100.0) {
            let buf = IqBuffer::new(
                (0..32).map(|i| Complex64::new(1.0 + i as f64 * 0.1, -0.5)).collect(),
                1.0,
            ).unwrap();
            let scaled = IqBuffer::new(
                buf.samples().iter().map(|s| s * alpha).collect(),
                1.0,
            ).unwrap();
            let delta = rssi(&scaled) - rssi(&buf);
            prop_assert!((delta - 20.0 * alpha.log10()).abs() < 1e-9);
        }
    }
}

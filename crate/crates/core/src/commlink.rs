//! Communication mode: frame transport over the channel, BER measurement,
//! and the jamming-margin (interference suppression) curve.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{add_interference, ChannelModel, Interferer, InterfererKind};
use crate::error::{Error, Result};
use crate::pn_code::ChipSequence;
use crate::radar::RadarTiming;
use crate::signal::{rssi, spread, HopPlan, IqBuffer, BAND_CENTER_HZ};
use crate::util::derive_seed;

const STREAM_BURST: u64 = 0x10;
const STREAM_TONE_JITTER: u64 = 0x11;
const STREAM_TONE_PHASE: u64 = 0x12;
const STREAM_PROBE_BITS: u64 = 0x13;

/// Tone interferers in a link run are realized with a per-burst frequency
/// jitter of up to this fraction of the chip rate on either side. A
/// mathematically exact CW tone pinned to the carrier would interact only
/// with the code's DC content; a real interferer's oscillator wanders within
/// the spread bandwidth, which is what makes despreading suppress it by the
/// processing gain.
pub const TONE_JITTER_FRACTION: f64 = 1.0 / 8.0;

/// Outcome of one link simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkResult {
    pub bits_sent: u64,
    pub bit_errors: u64,
    /// bit_errors / bits_sent.
    pub ber: f64,
    /// Per-sample chip SNR in dB implied by the channel noise floor.
    pub snr_db: f64,
    /// Strongest enabled interferer, when the channel has one.
    pub jammer_power_db: Option<f64>,
}

/// Knobs for the burst pipeline. The defaults match the bundled scenarios.
#[derive(Debug, Clone)]
pub struct LinkOptions {
    /// Data bits per burst; fading redraws between bursts.
    pub burst_bits: usize,
    /// Known leading bits per burst, used for the phase reference and the
    /// preamble RSSI comparison. Not counted in the BER.
    pub pilot_bits: usize,
    /// Hop plan; bursts cycle through it. None pins the band center.
    pub hop_plan: Option<HopPlan>,
    /// Two-antenna preamble selection. With a decorrelation of zero both
    /// antennas are identical and the second one is skipped.
    pub diversity: bool,
}

impl Default for LinkOptions {
    fn default() -> Self {
        LinkOptions {
            burst_bits: 32,
            pilot_bits: 4,
            hop_plan: None,
            diversity: true,
        }
    }
}

/// Simulates one coded link: spread, per-burst channel with antenna
/// selection, coherent despreading, error counting. Deterministic per seed.
pub fn run_link(
    bits: &[u8],
    code: &ChipSequence,
    model: &ChannelModel,
    timing: &RadarTiming,
    seed: u64,
) -> Result<LinkResult> {
    run_link_with(bits, code, model, timing, &LinkOptions::default(), seed)
}

/// [`run_link`] with explicit pipeline options.
pub fn run_link_with(
    bits: &[u8],
    code: &ChipSequence,
    model: &ChannelModel,
    timing: &RadarTiming,
    options: &LinkOptions,
    seed: u64,
) -> Result<LinkResult> {
    if bits.is_empty() {
        return Err(Error::param("bits must be nonempty"));
    }
    if options.burst_bits == 0 {
        return Err(Error::param("burst_bits must be >= 1"));
    }
    model.validate()?;

    let spc = timing.samples_per_chip;
    let fs = timing.sample_rate_hz();
    let bit_period = code.len() * spc;

    // Interferers are realized per burst (jittered tones), so strip them
    // from the model handed to apply_channel.
    let mut bare_model = model.clone();
    bare_model.interferers.clear();
    let skip_second_antenna = model.antenna_decorrelation == 0.0;

    let pilots = vec![1u8; options.pilot_bits];
    let mut bit_errors = 0u64;

    for (burst_idx, chunk) in bits.chunks(options.burst_bits).enumerate() {
        let burst_seed = derive_seed(seed, &[STREAM_BURST, burst_idx as u64]);
        let carrier = options
            .hop_plan
            .as_ref()
            .map_or(BAND_CENTER_HZ, |p| p.carrier_for_slot(burst_idx));

        let mut tx_bits = pilots.clone();
        tx_bits.extend_from_slice(chunk);
        let tx = spread(&tx_bits, code, spc, fs)?;

        let realized: Vec<Interferer> = model
            .interferers
            .iter()
            .enumerate()
            .map(|(k, itf)| realize_interferer(itf, timing, burst_seed, k as u64))
            .collect();

        let preamble_len = if options.pilot_bits > 0 {
            options.pilot_bits * bit_period
        } else {
            tx.len()
        };

        let antennas = if options.diversity && !skip_second_antenna {
            2
        } else {
            1
        };
        let mut selected: Option<(f64, IqBuffer)> = None;
        for antenna in 0..antennas {
            let mut rx = crate::channel::apply_channel(&tx, &bare_model, carrier, antenna, burst_seed)?;
            for (k, itf) in realized.iter().enumerate() {
                rx = add_interference(
                    &rx,
                    itf,
                    carrier,
                    derive_seed(burst_seed, &[STREAM_TONE_PHASE, k as u64]),
                );
            }
            let preamble = IqBuffer::new(
                rx.samples()[..preamble_len.min(rx.len())].to_vec(),
                fs,
            )?;
            let level = rssi(&preamble);
            if selected.as_ref().map_or(true, |(best, _)| level > *best) {
                selected = Some((level, rx));
            }
        }
        let (_, rx) = selected.expect("at least one antenna");

        let corrs = bit_correlations(&rx, code, spc)?;
        // Phase reference from the known pilots; falls back to the raw real
        // part when there are none.
        let phase_ref = if options.pilot_bits > 0 {
            let sum: Complex64 = corrs[..options.pilot_bits].iter().sum();
            if sum.norm() > 0.0 {
                sum / sum.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        } else {
            Complex64::new(1.0, 0.0)
        };
        for (j, &b) in chunk.iter().enumerate() {
            let decision = (phase_ref.conj() * corrs[options.pilot_bits + j]).re;
            let detected = u8::from(decision > 0.0);
            bit_errors += u64::from(detected != b);
        }
    }

    let snr_db = if model.noise_psd > 0.0 {
        -10.0 * model.noise_psd.log10()
    } else {
        f64::INFINITY
    };
    let jammer_power_db = model
        .interferers
        .iter()
        .filter(|i| !i.is_disabled())
        .map(|i| i.power_db)
        .fold(None, |acc: Option<f64>, p| Some(acc.map_or(p, |a| a.max(p))));
    Ok(LinkResult {
        bits_sent: bits.len() as u64,
        bit_errors,
        ber: bit_errors as f64 / bits.len() as f64,
        snr_db,
        jammer_power_db,
    })
}

/// Per-bit complex correlations against the code template.
fn bit_correlations(
    buffer: &IqBuffer,
    code: &ChipSequence,
    samples_per_chip: usize,
) -> Result<Vec<Complex64>> {
    let bit_period = code.len() * samples_per_chip;
    if buffer.len() % bit_period != 0 || buffer.is_empty() {
        return Err(Error::FrameMisalignment {
            len: buffer.len(),
            bit_period,
        });
    }
    Ok(buffer
        .samples()
        .chunks_exact(bit_period)
        .map(|chunk| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (ci, &chip) in code.chips().iter().enumerate() {
                let sign = f64::from(chip);
                for s in &chunk[ci * samples_per_chip..(ci + 1) * samples_per_chip] {
                    acc += sign * s;
                }
            }
            acc
        })
        .collect())
}

fn realize_interferer(
    itf: &Interferer,
    timing: &RadarTiming,
    burst_seed: u64,
    index: u64,
) -> Interferer {
    match itf.kind {
        InterfererKind::BroadbandJammer => *itf,
        InterfererKind::CochannelTone | InterfererKind::AdjacentTone => {
            let width = TONE_JITTER_FRACTION * timing.chip_rate_hz;
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
                burst_seed,
                &[STREAM_TONE_JITTER, index],
            ));
            let jitter = rng.gen_range(-width..width);
            Interferer {
                kind: itf.kind,
                freq_offset_hz: itf.freq_offset_hz + jitter,
                power_db: itf.power_db,
            }
        }
    }
}

/// Despreading SNR improvement: 10 log10(code length) dB.
pub fn processing_gain_db(code_length: usize) -> Result<f64> {
    if code_length == 0 {
        return Err(Error::param("code length must be >= 1"));
    }
    Ok(10.0 * (code_length as f64).log10())
}

/// Noise variance per complex sample that puts the post-despreading Eb/N0 at
/// the given level for unit-amplitude chips.
pub fn noise_psd_for_ebn0_db(ebn0_db: f64, code_length: usize, samples_per_chip: usize) -> f64 {
    (code_length * samples_per_chip) as f64 / 10f64.powf(ebn0_db / 10.0)
}

/// One point of the jamming-free boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JammingMarginPoint {
    pub offset_hz: f64,
    /// Largest tone power (dB relative to the unit signal) that keeps the
    /// BER at or below the ceiling.
    pub max_jammer_power_db: f64,
}

/// Search bounds for the jammer power, dB.
const JAMMER_SEARCH_LO_DB: f64 = -20.0;
const JAMMER_SEARCH_HI_DB: f64 = 45.0;
/// Stop once the boundary is bracketed this tightly, dB.
const JAMMER_SEARCH_RESOLUTION_DB: f64 = 0.5;
/// Baseline Eb/N0 for margin probes; BER of roughly 8e-4, comfortably under
/// any sensible ceiling, so the jammer is what pushes the link over.
const MARGIN_PROBE_EBN0_DB: f64 = 7.0;
const MARGIN_PROBE_BITS: usize = 16384;
const MARGIN_PROBE_SPC: usize = 2;

/// Traces the jamming-free boundary: for each tone offset, binary-search the
/// largest jammer power that keeps the BER at or below `ber_ceiling`.
///
/// Common random numbers: every probe reuses the same seed and data bits, so
/// the search sees a monotone BER-vs-power curve instead of Monte Carlo
/// noise. Hopping is disabled; [`jamming_margin_curve_hopped`] adds it.
pub fn jamming_margin_curve(
    code: &ChipSequence,
    jammer_freq_offsets_hz: &[f64],
    ber_ceiling: f64,
    seed: u64,
) -> Result<Vec<JammingMarginPoint>> {
    jamming_margin_curve_with(code, jammer_freq_offsets_hz, ber_ceiling, None, seed)
}

/// Jamming margin with the receiver hopping over the given plan; the tone
/// stays at its absolute frequency, so it only lands in some hops and the
/// margin improves by roughly the hop-averaging factor.
pub fn jamming_margin_curve_hopped(
    code: &ChipSequence,
    jammer_freq_offsets_hz: &[f64],
    ber_ceiling: f64,
    hop_plan: &HopPlan,
    seed: u64,
) -> Result<Vec<JammingMarginPoint>> {
    jamming_margin_curve_with(
        code,
        jammer_freq_offsets_hz,
        ber_ceiling,
        Some(hop_plan.clone()),
        seed,
    )
}

fn jamming_margin_curve_with(
    code: &ChipSequence,
    jammer_freq_offsets_hz: &[f64],
    ber_ceiling: f64,
    hop_plan: Option<HopPlan>,
    seed: u64,
) -> Result<Vec<JammingMarginPoint>> {
    if !(ber_ceiling > 0.0 && ber_ceiling < 0.5) {
        return Err(Error::param("ber_ceiling must be in (0, 0.5)"));
    }
    let timing = RadarTiming::new(500e-6, MARGIN_PROBE_SPC, 50e6)?;
    let noise_psd = noise_psd_for_ebn0_db(MARGIN_PROBE_EBN0_DB, code.len(), MARGIN_PROBE_SPC);
    let options = LinkOptions {
        diversity: false,
        hop_plan,
        ..LinkOptions::default()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[STREAM_PROBE_BITS]));
    let bits: Vec<u8> = (0..MARGIN_PROBE_BITS).map(|_| rng.gen_range(0..=1)).collect();

    let mut points = Vec::with_capacity(jammer_freq_offsets_hz.len());
    for &offset in jammer_freq_offsets_hz {
        let kind = if offset == 0.0 {
            InterfererKind::CochannelTone
        } else {
            InterfererKind::AdjacentTone
        };
        let probe = |power_db: f64| -> Result<f64> {
            let model = ChannelModel {
                noise_psd,
                interferers: vec![Interferer {
                    kind,
                    freq_offset_hz: offset,
                    power_db,
                }],
                ..ChannelModel::identity()
            };
            Ok(run_link_with(&bits, code, &model, &timing, &options, seed)?.ber)
        };

        let mut lo = JAMMER_SEARCH_LO_DB;
        let mut hi = JAMMER_SEARCH_HI_DB;
        if probe(hi)? <= ber_ceiling {
            // Even the strongest probe power stays under the ceiling.
            points.push(JammingMarginPoint {
                offset_hz: offset,
                max_jammer_power_db: hi,
            });
            continue;
        }
        if probe(lo)? > ber_ceiling {
            points.push(JammingMarginPoint {
                offset_hz: offset,
                max_jammer_power_db: lo,
            });
            continue;
        }
        while hi - lo > JAMMER_SEARCH_RESOLUTION_DB {
            let mid = 0.5 * (lo + hi);
            if probe(mid)? <= ber_ceiling {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        points.push(JammingMarginPoint {
            offset_hz: offset,
            max_jammer_power_db: lo,
        });
    }
    Ok(points)
}

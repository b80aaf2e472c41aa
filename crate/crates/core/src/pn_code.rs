//! Bipolar spreading/ranging codes and matched-filter correlation.
//!
//! Both radio modes are built on the same short bipolar code: the radar mode
//! ranges on its correlation peak, the communication mode spreads data with
//! it. Codes are chips in {-1, +1} so correlation is a plain dot product.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::signal::IqBuffer;
use num_complex::Complex64;

/// An ordered bipolar chip sequence.
///
/// Invariants: every chip is exactly -1 or +1 and the sequence is nonempty,
/// so the zero-shift autocorrelation always equals the length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChipSequence {
    chips: Vec<i8>,
}

impl ChipSequence {
    pub fn new(chips: Vec<i8>) -> Result<Self> {
        if chips.is_empty() {
            return Err(Error::param("chip sequence must be nonempty"));
        }
        if let Some(bad) = chips.iter().find(|&&c| c != 1 && c != -1) {
            return Err(Error::param(format!(
                "chip values must be +1 or -1, got {bad}"
            )));
        }
        Ok(ChipSequence { chips })
    }

    pub fn chips(&self) -> &[i8] {
        &self.chips
    }

    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length >= 1 by construction
    }

    /// Chip signs as bits: +1 -> 1, -1 -> 0.
    pub fn bits(&self) -> Vec<u8> {
        self.chips.iter().map(|&c| u8::from(c > 0)).collect()
    }
}

/// Codes serialize as one text line of comma-separated +1/-1 values.
impl fmt::Display for ChipSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.chips.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", if *c > 0 { "+1" } else { "-1" })?;
        }
        Ok(())
    }
}

impl FromStr for ChipSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chips = s
            .split(',')
            .map(|tok| match tok.trim() {
                "+1" | "1" => Ok(1i8),
                "-1" => Ok(-1i8),
                other => Err(Error::param(format!("bad chip token {other:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        ChipSequence::new(chips)
    }
}

/// The length-13 Barker sequence.
///
/// Its aperiodic autocorrelation sidelobes all have magnitude <= 1, the best
/// known at this length, which makes the 13-chip ranging burst unambiguous.
pub fn barker13() -> ChipSequence {
    ChipSequence {
        chips: vec![1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1],
    }
}

/// Feedback tap masks of known-primitive polynomials, one per degree.
///
/// Bit `i` of the mask is the coefficient of `x^i` in the feedback polynomial
/// `x^d + ... + 1` (the `x^d` term is implicit). All entries are verified by
/// the full-period check in [`msequence`].
pub fn default_msequence_taps(degree: u32) -> Option<u32> {
    Some(match degree {
        2 => 0b11,      // x^2 + x + 1
        3 => 0b011,     // x^3 + x + 1
        4 => 0b0011,    // x^4 + x + 1
        5 => 0b00101,   // x^5 + x^2 + 1
        6 => 0b000011,  // x^6 + x + 1
        7 => 0b0001001, // x^7 + x^3 + 1
        8 => 0x1D,      // x^8 + x^4 + x^3 + x^2 + 1
        9 => 0x11,      // x^9 + x^4 + 1
        10 => 0x09,     // x^10 + x^3 + 1
        11 => 0x05,     // x^11 + x^2 + 1
        12 => 0x53,     // x^12 + x^6 + x^4 + x + 1
        13 => 0x1B,     // x^13 + x^4 + x^3 + x + 1
        14 => 0x443,    // x^14 + x^10 + x^6 + x + 1
        15 => 0x03,     // x^15 + x + 1
        16 => 0x100B,   // x^16 + x^12 + x^3 + x + 1
        _ => return None,
    })
}

/// Generates one period of a maximal-length LFSR sequence.
///
/// The Fibonacci LFSR starts from the all-ones state; the emitted bit is
/// state bit 0 and the feedback parity enters at the top. A full-period check
/// rejects non-primitive tap masks. Output bits map 0 -> +1, 1 -> -1, which
/// gives periodic autocorrelation of exactly -1 at every nonzero shift.
pub fn msequence(degree: u32, taps: u32) -> Result<ChipSequence> {
    if !(2..=16).contains(&degree) {
        return Err(Error::param(format!("degree {degree} outside 2..=16")));
    }
    let expected = (1usize << degree) - 1;
    if taps >> degree != 0 {
        return Err(Error::param(format!(
            "tap mask {taps:#x} has bits above degree {degree}"
        )));
    }

    let start: u32 = (1 << degree) - 1;
    let mut state = start;
    let mut chips = Vec::with_capacity(expected);
    for step in 0..=expected {
        if step > 0 && state == start {
            // Returned to the seed state: the period is `step`.
            if step == expected {
                return ChipSequence::new(chips);
            }
            return Err(Error::NonPrimitivePolynomial {
                period: step,
                expected,
            });
        }
        if step == expected {
            break; // never came back: degenerate (e.g. taps = 0)
        }
        let out = state & 1;
        chips.push(if out == 0 { 1 } else { -1 });
        let fb = (state & taps).count_ones() & 1;
        state = (state >> 1) | (fb << (degree - 1));
    }
    Err(Error::NonPrimitivePolynomial {
        period: expected + 1,
        expected,
    })
}

/// Matched-filter correlation of a received buffer against a code.
///
/// `trace[k] = |sum_i conj(template_i) * received_{k+i}|` where the template
/// is the code with each chip held for `samples_per_chip` samples. The lag
/// axis covers every full-overlap position, and the trace is linear in the
/// received amplitude.
pub fn correlate(
    received: &IqBuffer,
    code: &ChipSequence,
    samples_per_chip: usize,
) -> Result<Vec<f64>> {
    Ok(correlate_complex(received, code, samples_per_chip)?
        .into_iter()
        .map(|c| c.norm())
        .collect())
}

/// Complex-valued correlation trace; the public [`correlate`] returns its
/// magnitude. Internal consumers (despreading, echo authentication) keep the
/// phase.
pub(crate) fn correlate_complex(
    received: &IqBuffer,
    code: &ChipSequence,
    samples_per_chip: usize,
) -> Result<Vec<Complex64>> {
    if samples_per_chip == 0 {
        return Err(Error::param("samples_per_chip must be >= 1"));
    }
    let template_len = code.len() * samples_per_chip;
    let samples = received.samples();
    if samples.len() < template_len {
        return Err(Error::InsufficientSamples {
            got: samples.len(),
            needed: template_len,
        });
    }
    let n_lags = samples.len() - template_len + 1;
    let mut trace = Vec::with_capacity(n_lags);
    for k in 0..n_lags {
        let mut acc = Complex64::new(0.0, 0.0);
        let window = &samples[k..k + template_len];
        for (ci, &chip) in code.chips().iter().enumerate() {
            let sign = f64::from(chip);
            for s in &window[ci * samples_per_chip..(ci + 1) * samples_per_chip] {
                acc += sign * s;
            }
        }
        trace.push(acc);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::IqBuffer;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Brute-force aperiodic (zero-padded) autocorrelation.
    fn aperiodic_autocorr(chips: &[i8], shift: usize) -> i32 {
        chips
            .iter()
            .zip(chips.iter().skip(shift))
            .map(|(&a, &b)| i32::from(a) * i32::from(b))
            .sum()
    }

    /// Brute-force circular autocorrelation.
    fn periodic_autocorr(chips: &[i8], shift: usize) -> i32 {
        let n = chips.len();
        (0..n)
            .map(|i| i32::from(chips[i]) * i32::from(chips[(i + shift) % n]))
            .sum()
    }

    fn buffer_from_chips(chips: &[i8]) -> IqBuffer {
        let samples: Vec<Complex64> = chips
            .iter()
            .map(|&c| Complex64::new(f64::from(c), 0.0))
            .collect();
        IqBuffer::new(samples, 1.0).unwrap()
    }

    #[test]
    fn barker13_autocorr_peak_equals_length() {
        let code = barker13();
        assert_eq!(code.len(), 13);
        assert_eq!(aperiodic_autocorr(code.chips(), 0), 13);
    }

    #[test]
    fn barker13_sidelobes_bounded_by_one() {
        let code = barker13();
        let max_sidelobe = (1..13)
            .map(|s| aperiodic_autocorr(code.chips(), s).abs())
            .max()
            .unwrap();
        assert!(max_sidelobe <= 1, "sidelobe {max_sidelobe} > 1");
        // Peak-to-sidelobe ratio of at least 13.
        assert!(13 / max_sidelobe >= 13);
    }

    #[test]
    fn autocorr_peak_equals_length_for_any_sequence() {
        for seq in [
            barker13(),
            msequence(5, default_msequence_taps(5).unwrap()).unwrap(),
            ChipSequence::new(vec![1, -1, -1]).unwrap(),
        ] {
            assert_eq!(aperiodic_autocorr(seq.chips(), 0) as usize, seq.len());
        }
    }

    #[test]
    fn msequence_degree3_properties() {
        let seq = msequence(3, 0b011).unwrap();
        assert_eq!(seq.len(), 7);
        for shift in 1..7 {
            assert_eq!(periodic_autocorr(seq.chips(), shift), -1, "shift {shift}");
        }
    }

    #[test]
    fn msequence_balance_and_offpeak_for_all_degrees() {
        for degree in 2..=16 {
            let taps = default_msequence_taps(degree).unwrap();
            let seq = msequence(degree, taps).unwrap();
            assert_eq!(seq.len(), (1 << degree) - 1, "degree {degree}");
            let sum: i32 = seq.chips().iter().map(|&c| i32::from(c)).sum();
            assert_eq!(sum.abs(), 1, "degree {degree} unbalanced: {sum}");
            // Spot-check one nonzero shift per degree (full sweep is O(n^2)).
            assert_eq!(periodic_autocorr(seq.chips(), 1), -1);
        }
    }

    #[test]
    fn msequence_rejects_non_primitive_taps() {
        // fb = s0 alone keeps the all-ones state fixed: period 1.
        let err = msequence(3, 0b001).unwrap_err();
        assert!(matches!(err, Error::NonPrimitivePolynomial { .. }));
        assert!(err.to_string().contains("non-primitive feedback polynomial"));
        // Degenerate degree-2 masks.
        assert!(msequence(2, 0b01).is_err());
        assert!(msequence(2, 0b10).is_err());
        assert!(msequence(2, 0).is_err());
    }

    #[test]
    fn msequence_rejects_bad_degree() {
        assert!(msequence(1, 0b1).is_err());
        assert!(msequence(17, 0b11).is_err());
    }

    #[test]
    fn correlate_peaks_at_zero_lag_for_aligned_code() {
        let code = barker13();
        let rx = buffer_from_chips(code.chips());
        let trace = correlate(&rx, &code, 1).unwrap();
        assert_eq!(trace.len(), 1);
        assert!((trace[0] - 13.0).abs() < 1e-12);
    }

    #[test]
    fn correlate_peak_tracks_delay() {
        let code = barker13();
        for delay in [0usize, 3, 7, 20] {
            let mut samples = vec![Complex64::new(0.0, 0.0); delay];
            samples.extend(
                code.chips()
                    .iter()
                    .map(|&c| Complex64::new(f64::from(c), 0.0)),
            );
            samples.extend(vec![Complex64::new(0.0, 0.0); 5]);
            let rx = IqBuffer::new(samples, 1.0).unwrap();
            let trace = correlate(&rx, &code, 1).unwrap();
            let argmax = trace
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
            assert_eq!(argmax, delay);
        }
    }

    #[test]
    fn correlate_is_linear_in_amplitude() {
        let code = barker13();
        let rx = buffer_from_chips(code.chips());
        let scaled = IqBuffer::new(
            rx.samples().iter().map(|s| s * 2.0).collect(),
            rx.sample_rate_hz(),
        )
        .unwrap();
        let t1 = correlate(&rx, &code, 1).unwrap();
        let t2 = correlate(&scaled, &code, 1).unwrap();
        for (a, b) in t1.iter().zip(&t2) {
            assert!((2.0 * a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn correlate_shift_equivariance_random_delays_high_snr() {
        let code = barker13();
        let spc = 4;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let delay = rng.gen_range(0..200usize);
            let mut samples = vec![Complex64::new(0.0, 0.0); delay];
            for &c in code.chips() {
                for _ in 0..spc {
                    samples.push(Complex64::new(f64::from(c), 0.0));
                }
            }
            samples.extend(vec![Complex64::new(0.0, 0.0); 220 - delay]);
            // Mild noise, SNR well above 10 dB.
            for s in &mut samples {
                *s += Complex64::new(rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1));
            }
            let rx = IqBuffer::new(samples, 1.0).unwrap();
            let trace = correlate(&rx, &code, spc).unwrap();
            let argmax = trace
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
            assert_eq!(argmax, delay);
        }
    }

    #[test]
    fn correlate_rejects_short_buffer() {
        let code = barker13();
        let rx = buffer_from_chips(&code.chips()[..5]);
        let err = correlate(&rx, &code, 1).unwrap_err();
        assert!(err.to_string().contains("insufficient samples"));
    }

    #[test]
    fn chip_sequence_validation() {
        assert!(ChipSequence::new(vec![]).is_err());
        assert!(ChipSequence::new(vec![1, 0, -1]).is_err());
        assert!(ChipSequence::new(vec![1, -1]).is_ok());
    }

    #[test]
    fn text_line_round_trip() {
        let code = barker13();
        let line = code.to_string();
        assert!(line.starts_with("+1,+1,+1,+1,+1,-1"));
        let parsed: ChipSequence = line.parse().unwrap();
        assert_eq!(parsed, code);
    }
}

//! Acceptance suite: one test per numbered criterion, each printing a
//! pass/fail line with the measured value against its pinned tolerance.
//! Criteria 2, 5, 10 and 11 exercise the scenario harness and live in the
//! CLI crate's acceptance suite.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use roadlink_core::channel::{apply_channel, rayleigh_fade_trace, ChannelModel, ChannelTap};
use roadlink_core::commlink::{jamming_margin_curve, noise_psd_for_ebn0_db, run_link};
use roadlink_core::diversity::selection_outage_probability;
use roadlink_core::pn_code::{barker13, default_msequence_taps, msequence, ChipSequence};
use roadlink_core::radar::{authenticate, estimate_nearest, RadarTiming};
use roadlink_core::signal::{Frame, IqBuffer, BAND_CENTER_HZ, SPEED_OF_LIGHT_M_S};

fn report(criterion: u32, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("acceptance criterion {criterion}: {status} - {detail}");
    assert!(pass, "criterion {criterion} failed: {detail}");
}

/// Criterion 1: Barker-13 aperiodic sidelobes bounded by 1, by exhaustive
/// shift enumeration.
#[test]
fn criterion_1_barker_sidelobe_bound() {
    let code = barker13();
    let chips = code.chips();
    let zero_shift: i32 = chips.iter().map(|&c| i32::from(c) * i32::from(c)).sum();
    let max_sidelobe = (1..chips.len())
        .map(|s| {
            chips
                .iter()
                .zip(chips.iter().skip(s))
                .map(|(&a, &b)| i32::from(a) * i32::from(b))
                .sum::<i32>()
                .abs()
        })
        .max()
        .unwrap();
    report(
        1,
        zero_shift == 13 && max_sidelobe <= 1,
        &format!("autocorr(0) = {zero_shift}, max |sidelobe| = {max_sidelobe} (bound 1)"),
    );
}

/// Criterion 3: Rayleigh envelope passes a 1%-level KS test and the mean
/// power is 1 +- 0.05 over 1e5 samples.
#[test]
fn criterion_3_rayleigh_statistics() {
    // Samples spaced many coherence times apart so the KS test sees
    // effectively independent draws.
    let trace = rayleigh_fade_trace(100.0, 20_000.0, 0.2, 3).unwrap();
    assert_eq!(trace.len(), 100_000);
    let mean_power = trace.mean_power();

    let mut env: Vec<f64> = trace.gains().iter().map(|g| g.norm()).collect();
    env.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = env.len() as f64;
    let mut ks = 0.0f64;
    for (i, r) in env.iter().enumerate() {
        let cdf = 1.0 - (-r * r).exp();
        ks = ks.max(((i as f64 + 1.0) / n - cdf).max(cdf - i as f64 / n));
    }
    let critical = 1.6276 / n.sqrt();
    report(
        3,
        ks < critical && (mean_power - 1.0).abs() < 0.05,
        &format!(
            "KS statistic {ks:.5} vs 1% critical {critical:.5}, mean power {mean_power:.4} (1 +- 0.05)"
        ),
    );
}

/// Criterion 4: with independent branches and single-branch outage near 0.1,
/// selection brings the outage to p^2 +- 0.003 over 1e5 trials.
#[test]
fn criterion_4_selection_diversity_law() {
    // Threshold placed where a single Rayleigh branch fades 10% of the time.
    let est = selection_outage_probability(-9.7731, 100_000, 1.0, 2).unwrap();
    let pass = (est.p_single - 0.1).abs() < 0.01 && (est.p_selected - 0.01).abs() <= 0.003;
    report(
        4,
        pass,
        &format!(
            "p_single = {:.4}, p_selected = {:.4} (expected 0.01 +- 0.003)",
            est.p_single, est.p_selected
        ),
    );
}

/// Criterion 6: 100 random target delays at chip-SNR 10 dB, ranging error
/// within one sample period of range in at least 99 trials.
#[test]
fn criterion_6_ranging_accuracy() {
    let frame = Frame::radar(barker13()).unwrap();
    let timing = RadarTiming::default_radar();
    let fs = timing.sample_rate_hz();
    let resolution_m = SPEED_OF_LIGHT_M_S / (2.0 * fs);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let trials = 100;
    let mut ok = 0;
    for t in 0..trials {
        let true_range = rng.gen_range(5.0..400.0);
        let delay = 2.0 * true_range / SPEED_OF_LIGHT_M_S;
        let taps = vec![ChannelTap::new(delay, Complex64::new(1.0, 0.0), 0.0).unwrap()];
        let model = ChannelModel {
            taps,
            noise_psd: 0.1, // chip-SNR 10 dB
            interferers: Vec::new(),
            antenna_decorrelation: 0.0,
        };
        let wf = frame.waveform(timing.samples_per_chip, fs).unwrap();
        let mut samples = wf.into_samples();
        samples.extend(vec![Complex64::new(0.0, 0.0); 800]);
        let tx = IqBuffer::new(samples, fs).unwrap();
        let rx = apply_channel(&tx, &model, BAND_CENTER_HZ, 0, 1000 + t).unwrap();
        if let Some(est) = estimate_nearest(&rx, &rx, &frame, &timing).unwrap() {
            if (est.range_m - true_range).abs() <= resolution_m {
                ok += 1;
            }
        }
    }
    report(
        6,
        ok >= 99,
        &format!("{ok}/{trials} trials within {resolution_m:.3} m at chip-SNR 10 dB"),
    );
}

/// Criterion 7: random wrong 13-bit codes pass authentication in under 1% of
/// 1000 trials at threshold 0.6.
#[test]
fn criterion_7_authentication_false_accept() {
    let timing = RadarTiming::default_radar();
    let fs = timing.sample_rate_hz();
    let spc = timing.samples_per_chip;
    let frame = Frame::radar(barker13()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let trials = 1000;
    let mut accepted = 0;
    for _ in 0..trials {
        let chips: Vec<i8> = (0..13).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
        let code = ChipSequence::new(chips).unwrap();
        let Ok(wrong_frame) = Frame::new(frame.start_marker().to_vec(), code, vec![]) else {
            continue; // marker prefix collision; counts as a (rejected) trial
        };
        let mut samples = wrong_frame.waveform(spc, fs).unwrap().into_samples();
        samples.extend(vec![Complex64::new(0.0, 0.0); 64]);
        let rx = IqBuffer::new(samples, fs).unwrap();
        if authenticate(&rx, &frame, &timing, 0.6).unwrap().authenticated {
            accepted += 1;
        }
    }
    let rate = f64::from(accepted) / f64::from(trials);
    report(
        7,
        rate < 0.01,
        &format!("false-accept rate {rate:.4} over {trials} random codes (bound 0.01)"),
    );
}

/// Criterion 8: tolerable cochannel jammer power for length-127 vs length-13
/// codes differs by 9.9 +- 2 dB at BER ceiling 1e-2.
#[test]
fn criterion_8_processing_gain_law() {
    let short = barker13();
    let long = msequence(7, default_msequence_taps(7).unwrap()).unwrap();
    assert_eq!(long.len(), 127);
    let seeds = [21u64, 40, 99];
    let mut delta_sum = 0.0;
    for &seed in &seeds {
        let m13 = jamming_margin_curve(&short, &[0.0], 1e-2, seed).unwrap()[0];
        let m127 = jamming_margin_curve(&long, &[0.0], 1e-2, seed).unwrap()[0];
        delta_sum += m127.max_jammer_power_db - m13.max_jammer_power_db;
    }
    let delta = delta_sum / seeds.len() as f64;
    let expected = 10.0 * (127.0f64 / 13.0).log10();
    report(
        8,
        (delta - expected).abs() <= 2.0,
        &format!("margin difference {delta:.2} dB vs 10*log10(127/13) = {expected:.2} +- 2 dB"),
    );
}

/// Criterion 9: unfaded link at post-despreading Eb/N0 = 9.6 dB lands within
/// half a decade of BER 1e-5 over 1e7 bits.
#[test]
fn criterion_9_ber_sanity() {
    // Independent oracle: BPSK theory Q(sqrt(2 Eb/N0)) with erfc from the
    // Abramowitz-Stegun 7.1.26 rational approximation.
    fn erfc(x: f64) -> f64 {
        let t = 1.0 / (1.0 + 0.327_591_1 * x);
        let poly = t
            * (0.254_829_592
                + t * (-0.284_496_736
                    + t * (1.421_413_741 + t * (-1.453_152_027 + t * 1.061_405_429))));
        poly * (-x * x).exp()
    }
    fn q(x: f64) -> f64 {
        0.5 * erfc(x / std::f64::consts::SQRT_2)
    }

    let ebn0_db = 9.6;
    let ebn0 = 10f64.powf(ebn0_db / 10.0);
    let theory = q((2.0 * ebn0).sqrt());

    let code = barker13();
    let timing = RadarTiming::new(500e-6, 1, 50e6).unwrap();
    let model = ChannelModel::awgn(noise_psd_for_ebn0_db(ebn0_db, code.len(), 1));
    let n_bits = 10_000_000usize;
    let mut rng = ChaCha8Rng::seed_from_u64(90);
    let bits: Vec<u8> = (0..n_bits).map(|_| rng.gen_range(0..=1)).collect();
    let result = run_link(&bits, &code, &model, &timing, 90).unwrap();

    let lo = theory / 10f64.sqrt();
    let hi = theory * 10f64.sqrt();
    report(
        9,
        result.ber >= lo && result.ber <= hi,
        &format!(
            "BER {:.3e} over 1e7 bits vs theory {theory:.3e} (half-decade window [{lo:.3e}, {hi:.3e}])",
            result.ber
        ),
    );
}

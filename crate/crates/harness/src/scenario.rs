//! Scenario dispatch: turns a validated config into deterministic CSV files
//! plus a plain-text summary of the headline metrics.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use roadlink_core::channel::{apply_channel, rayleigh_fade_trace, ChannelTap};
use roadlink_core::commlink::{
    jamming_margin_curve, jamming_margin_curve_hopped, noise_psd_for_ebn0_db, run_link_with,
    LinkOptions,
};
use roadlink_core::derive_seed;
use roadlink_core::diversity::{
    classify_regions, selection_outage_probability, write_region_csv, RegionOutcome, RssiTrace,
};
use roadlink_core::radar::estimate_nearest_with;
use roadlink_core::signal::{make_hop_plan, Frame, IqBuffer};

use crate::config::{Mode, RadarSpec, ScenarioConfig};
use crate::error::{HarnessError, Result};
use crate::sweep::{prt_sweep, PRT_CSV_HEADER};

/// Everything one scenario run produced.
#[derive(Debug)]
pub struct RunArtifacts {
    pub scenario: String,
    pub files: Vec<PathBuf>,
    pub summary: String,
}

/// Bundled figure-reproduction scenarios, compiled in.
pub const BUNDLED: &[(&str, &str)] = &[
    ("fig2_fading", include_str!("../scenarios/fig2_fading.toml")),
    (
        "fig3_selection",
        include_str!("../scenarios/fig3_selection.toml"),
    ),
    ("fig4_regions", include_str!("../scenarios/fig4_regions.toml")),
    ("fig5_jamming", include_str!("../scenarios/fig5_jamming.toml")),
    (
        "fig5_jamming_fh",
        include_str!("../scenarios/fig5_jamming_fh.toml"),
    ),
    (
        "fig6_prt_sweep",
        include_str!("../scenarios/fig6_prt_sweep.toml"),
    ),
    ("radar_demo", include_str!("../scenarios/radar_demo.toml")),
    ("comm_ber", include_str!("../scenarios/comm_ber.toml")),
];

pub fn load_bundled(name: &str) -> Result<ScenarioConfig> {
    let Some((_, text)) = BUNDLED.iter().find(|(n, _)| *n == name) else {
        return Err(HarnessError::UnknownScenario(name.to_string()));
    };
    ScenarioConfig::from_toml(text)
}

/// Runs one scenario, writing its CSV artifacts under `out_dir`.
pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path) -> Result<RunArtifacts> {
    config.validate()?;
    fs::create_dir_all(out_dir)?;
    let mut run = Run::new(config, out_dir);
    match config.mode {
        Mode::Radar => run.radar()?,
        Mode::Comm => run.comm()?,
        Mode::FadingDemo => run.fading_demo()?,
        Mode::RegionDemo => run.region_demo()?,
        Mode::JammingDemo => run.jamming_demo()?,
        Mode::PrtSweep => run.prt_sweep_mode()?,
    }
    run.finish()
}

struct Run<'a> {
    config: &'a ScenarioConfig,
    out_dir: &'a Path,
    files: Vec<PathBuf>,
    summary: String,
}

impl<'a> Run<'a> {
    fn new(config: &'a ScenarioConfig, out_dir: &'a Path) -> Self {
        let mut summary = String::new();
        let _ = writeln!(
            summary,
            "scenario={} mode={} seed={}",
            config.name,
            config.mode.as_str(),
            config.master_seed()
        );
        Run {
            config,
            out_dir,
            files: Vec::new(),
            summary,
        }
    }

    fn sim<T>(&self, result: roadlink_core::Result<T>) -> Result<T> {
        result.map_err(|source| HarnessError::Simulation {
            scenario: self.config.name.clone(),
            source,
        })
    }

    fn header_comment(&self) -> String {
        format!(
            "# scenario={} seed={} tool=roadlink {}\n",
            self.config.name,
            self.config.master_seed(),
            env!("CARGO_PKG_VERSION")
        )
    }

    fn note(&mut self, line: impl AsRef<str>) {
        let _ = writeln!(self.summary, "{}", line.as_ref());
    }

    fn write_csv(&mut self, suffix: &str, body: &str) -> Result<()> {
        let path = self.out_dir.join(format!("{}_{suffix}.csv", self.config.name));
        write_atomic(&path, &format!("{}{body}", self.header_comment()))?;
        self.files.push(path);
        Ok(())
    }

    fn finish(mut self) -> Result<RunArtifacts> {
        let path = self
            .out_dir
            .join(format!("{}_summary.txt", self.config.name));
        write_atomic(&path, &self.summary)?;
        self.files.push(path);
        Ok(RunArtifacts {
            scenario: self.config.name.clone(),
            files: self.files,
            summary: self.summary,
        })
    }

    // -- radar ---------------------------------------------------------

    fn radar(&mut self) -> Result<()> {
        let config = self.config;
        let radar_spec = config.radar.clone().unwrap_or_else(|| RadarSpec {
            threshold_fraction: roadlink_core::radar::DEFAULT_THRESHOLD_FRACTION,
        });
        let code = self.sim(config.code.build())?;
        let timing = self.sim(config.timing.build())?;
        let frame = self.sim(Frame::radar(code))?;
        let model_a = self.sim(config.channel.build())?;
        let model_b = match &config.channel_b {
            Some(spec) => self.sim(spec.build())?,
            None => model_a.clone(),
        };
        let fs = timing.sample_rate_hz();
        let carrier = config.primary_carrier_hz();

        let max_delay = model_a
            .taps
            .iter()
            .chain(&model_b.taps)
            .map(|t| t.delay_s)
            .fold(0.0f64, f64::max);
        let pad = (max_delay * fs).ceil() as usize + 4 * frame.sync_len_samples(timing.samples_per_chip) + 256;
        let wf = self.sim(frame.waveform(timing.samples_per_chip, fs))?;
        let mut samples = wf.into_samples();
        samples.extend(vec![Complex64::new(0.0, 0.0); pad]);
        let tx = self.sim(IqBuffer::new(samples, fs))?;

        let mut body = format!("{}\n", roadlink_core::radar::RangeEstimate::CSV_HEADER);
        let mut ranges = Vec::new();
        let mut no_target = 0usize;
        for (i, &seed) in config.seeds.iter().enumerate() {
            let t_s = i as f64 * timing.prt_s;
            let rx_a = self.sim(apply_channel(&tx, &model_a, carrier, 0, seed))?;
            let rx_b = self.sim(apply_channel(&tx, &model_b, carrier, 1, seed))?;
            match self.sim(estimate_nearest_with(
                &rx_a,
                &rx_b,
                &frame,
                &timing,
                radar_spec.threshold_fraction,
            ))? {
                Some(est) => {
                    let _ = writeln!(
                        body,
                        "{},{},{},{},{},{}",
                        t_s,
                        est.range_m,
                        est.peak_magnitude,
                        est.authenticated,
                        est.antenna_used,
                        est.rejected_peaks
                    );
                    ranges.push(est);
                }
                None => {
                    no_target += 1;
                    let _ = writeln!(body, "{t_s},NaN,0,false,0,0");
                }
            }
        }
        self.write_csv("ranges", &body)?;

        if ranges.is_empty() {
            self.note("no authenticated target in any burst");
        } else {
            let mean_range: f64 =
                ranges.iter().map(|e| e.range_m).sum::<f64>() / ranges.len() as f64;
            let rejected: usize = ranges.iter().map(|e| e.rejected_peaks).sum();
            let from_b = ranges.iter().filter(|e| e.antenna_used == 1).count();
            self.note(format!(
                "bursts={} nearest_range_mean_m={:.3} rejected_peaks_total={} antenna_b_used={} no_target={}",
                config.seeds.len(),
                mean_range,
                rejected,
                from_b,
                no_target
            ));
        }
        Ok(())
    }

    // -- comm ----------------------------------------------------------

    fn comm(&mut self) -> Result<()> {
        let config = self.config;
        let spec = config.comm.clone().expect("validated");
        let code = self.sim(config.code.build())?;
        let timing = self.sim(config.timing.build())?;
        let base_model = self.sim(config.channel.build())?;

        let mut body =
            String::from("ebn0_db,seed,bits,errors_single,ber_single,errors_selected,ber_selected\n");
        for &ebn0 in &spec.ebn0_db {
            let mut model = base_model.clone();
            model.noise_psd = noise_psd_for_ebn0_db(ebn0, code.len(), timing.samples_per_chip);
            let mut single_sum = 0.0;
            let mut selected_sum = 0.0;
            for &seed in &config.seeds {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[0xB175]));
                let bits: Vec<u8> = (0..spec.bits).map(|_| rng.gen_range(0..=1)).collect();
                let single = self.sim(run_link_with(
                    &bits,
                    &code,
                    &model,
                    &timing,
                    &LinkOptions {
                        diversity: false,
                        ..LinkOptions::default()
                    },
                    seed,
                ))?;
                let selected = self.sim(run_link_with(
                    &bits,
                    &code,
                    &model,
                    &timing,
                    &LinkOptions::default(),
                    seed,
                ))?;
                single_sum += single.ber;
                selected_sum += selected.ber;
                let _ = writeln!(
                    body,
                    "{},{},{},{},{},{},{}",
                    ebn0,
                    seed,
                    spec.bits,
                    single.bit_errors,
                    single.ber,
                    selected.bit_errors,
                    selected.ber
                );
            }
            let n = config.seeds.len() as f64;
            self.note(format!(
                "ebn0_db={ebn0} ber_single={:.3e} ber_selected={:.3e}",
                single_sum / n,
                selected_sum / n
            ));
        }
        self.write_csv("ber", &body)?;

        if let Some(outage) = &spec.outage {
            let mut body = String::from("decorrelation,p_single,p_selected\n");
            for (i, d) in [0.0, 0.25, 0.5, 0.75, 1.0].into_iter().enumerate() {
                let est = self.sim(selection_outage_probability(
                    outage.fade_threshold_db,
                    outage.n_trials,
                    d,
                    derive_seed(config.master_seed(), &[0x0A7, i as u64]),
                ))?;
                let _ = writeln!(body, "{d},{},{}", est.p_single, est.p_selected);
                if d == 1.0 {
                    self.note(format!(
                        "outage at decorrelation 1: p_single={:.4} p_selected={:.4}",
                        est.p_single, est.p_selected
                    ));
                }
            }
            self.write_csv("outage", &body)?;
        }
        Ok(())
    }

    // -- fading demo ----------------------------------------------------

    fn fading_demo(&mut self) -> Result<()> {
        let config = self.config;
        let spec = config.fading.clone().expect("validated");
        let trace = self.sim(rayleigh_fade_trace(
            spec.doppler_hz,
            spec.duration_s,
            spec.sample_interval_s,
            config.master_seed(),
        ))?;
        let mut csv = Vec::new();
        trace.write_csv(&mut csv)?;
        self.write_csv("fade", std::str::from_utf8(&csv).expect("ascii csv"))?;

        let env = trace.envelope_db();
        let max = env.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = env.iter().cloned().fold(f64::INFINITY, f64::min);
        let deep = env.iter().filter(|&&l| l < -20.0).count() as f64 / env.len() as f64;
        self.note(format!(
            "samples={} mean_power={:.4} envelope_span_db={:.2} deep_fade_fraction={:.4}",
            trace.len(),
            trace.mean_power(),
            max - min,
            deep
        ));
        Ok(())
    }

    // -- region demo ----------------------------------------------------

    fn region_demo(&mut self) -> Result<()> {
        let config = self.config;
        let spec = config.region.clone().expect("validated");
        let f_lo = config.carriers_hz[0];
        let f_hi = config.carriers_hz[1];
        let n = spec.samples;
        let dt = spec.duration_s / (n - 1) as f64;

        let mut times = Vec::with_capacity(n);
        let mut levels_lo = Vec::with_capacity(n);
        let mut levels_hi = Vec::with_capacity(n);
        for i in 0..n {
            let t = i as f64 * dt;
            let frac = i as f64 / (n - 1) as f64;
            let dtau =
                (spec.delta_tau_start_ns + frac * (spec.delta_tau_end_ns - spec.delta_tau_start_ns))
                    * 1e-9;
            let direct = self.sim(ChannelTap::direct(0.0))?;
            let second = self.sim(ChannelTap::new(
                dtau,
                Complex64::new(spec.path_gain, 0.0),
                0.0,
            ))?;
            let level = |f: f64| {
                let g = roadlink_core::channel::two_path_gain(f, &direct, &second).max(1e-12);
                20.0 * g.log10()
            };
            times.push(t);
            levels_lo.push(level(f_lo));
            levels_hi.push(level(f_hi));
        }
        let trace_lo = self.sim(RssiTrace::new(times.clone(), levels_lo))?;
        let trace_hi = self.sim(RssiTrace::new(times, levels_hi))?;
        let regions = self.sim(classify_regions(&trace_lo, &trace_hi, spec.fade_threshold_db))?;

        let mut csv = Vec::new();
        write_region_csv(&mut csv, &trace_lo, &trace_hi, &regions)?;
        self.write_csv("regions", std::str::from_utf8(&csv).expect("ascii csv"))?;

        let count = |want: RegionOutcome| regions.iter().filter(|&&(_, r)| r == want).count();
        use roadlink_core::diversity::RegionLabel::{I, II, III};
        let (c1, c2, c3) = (
            count(RegionOutcome::Label(I)),
            count(RegionOutcome::Label(II)),
            count(RegionOutcome::Label(III)),
        );
        let both = count(RegionOutcome::BothFaded);
        self.note(format!(
            "region_durations_s: I={:.1} II={:.1} III={:.1} both_faded={:.1}",
            c1 as f64 * dt,
            c2 as f64 * dt,
            c3 as f64 * dt,
            both as f64 * dt
        ));
        self.note(format!(
            "region_samples: I={c1} II={c2} III={c3} both_faded={both}"
        ));
        Ok(())
    }

    // -- jamming demo ---------------------------------------------------

    fn jamming_demo(&mut self) -> Result<()> {
        let config = self.config;
        let spec = config.jamming.clone().expect("validated");
        let code = self.sim(config.code.build())?;
        let curve = if spec.hopping {
            let plan = self.sim(make_hop_plan(spec.n_channels, 1e-3, config.master_seed()))?;
            self.sim(jamming_margin_curve_hopped(
                &code,
                &spec.offsets_hz,
                spec.ber_ceiling,
                &plan,
                config.master_seed(),
            ))?
        } else {
            self.sim(jamming_margin_curve(
                &code,
                &spec.offsets_hz,
                spec.ber_ceiling,
                config.master_seed(),
            ))?
        };

        let mut body = String::from("offset_hz,max_jammer_db\n");
        for point in &curve {
            let _ = writeln!(body, "{},{}", point.offset_hz, point.max_jammer_power_db);
        }
        self.write_csv("jamming", &body)?;

        if let Some(center) = curve.iter().find(|p| p.offset_hz == 0.0) {
            self.note(format!(
                "cochannel_margin_db={:.2} hopping={}",
                center.max_jammer_power_db, spec.hopping
            ));
        }
        let best = curve
            .iter()
            .map(|p| p.max_jammer_power_db)
            .fold(f64::NEG_INFINITY, f64::max);
        self.note(format!("max_margin_db={best:.2} points={}", curve.len()));
        Ok(())
    }

    // -- prt sweep ------------------------------------------------------

    fn prt_sweep_mode(&mut self) -> Result<()> {
        let spec = self.config.sweep.clone().expect("validated");
        let prt_values: Vec<f64> = spec.prt_us.iter().map(|us| us * 1e-6).collect();
        let rows = prt_sweep(&prt_values, self.config)?;
        let mut body = format!("{PRT_CSV_HEADER}\n");
        for (us, row) in spec.prt_us.iter().zip(&rows) {
            let _ = writeln!(
                body,
                "{},{},{},{},{}",
                us,
                row.valid,
                row.max_unambiguous_range_m,
                row.mean_ranging_error_m,
                row.misses
            );
        }
        self.write_csv("prt", &body)?;

        let valid: Vec<f64> = spec
            .prt_us
            .iter()
            .zip(&rows)
            .filter(|(_, r)| r.valid)
            .map(|(&us, _)| us)
            .collect();
        let worst = rows
            .iter()
            .filter(|r| r.misses == 0)
            .map(|r| r.mean_ranging_error_m)
            .fold(0.0f64, f64::max);
        self.note(format!(
            "valid_prt_us={valid:?} worst_mean_ranging_error_m={worst:.3}"
        ));
        Ok(())
    }
}

/// Writes a file in one shot: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

//! Declarative scenario configuration.
//!
//! Scenarios are TOML files: one top-level table naming the experiment and
//! its mode, plus mode-specific sections. Validation is collected, not
//! fail-fast, so a bad config reports every violated field at once.

use num_complex::Complex64;
use serde::Deserialize;

use roadlink_core::channel::{ChannelModel, ChannelTap, Interferer, InterfererKind};
use roadlink_core::pn_code::{barker13, default_msequence_taps, msequence, ChipSequence};
use roadlink_core::radar::RadarTiming;
use roadlink_core::signal::BAND_CENTER_HZ;

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Radar,
    Comm,
    FadingDemo,
    RegionDemo,
    JammingDemo,
    PrtSweep,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Radar => "radar",
            Mode::Comm => "comm",
            Mode::FadingDemo => "fading_demo",
            Mode::RegionDemo => "region_demo",
            Mode::JammingDemo => "jamming_demo",
            Mode::PrtSweep => "prt_sweep",
        }
    }
}

/// One declarative experiment.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub mode: Mode,
    /// Master seeds; the first drives single-run modes, radar and comm
    /// modes emit one row per seed.
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Carriers in Hz. Single-carrier modes use the first entry; the region
    /// demo reads (low, high) from the first two.
    #[serde(default = "default_carriers")]
    pub carriers_hz: Vec<f64>,
    #[serde(default)]
    pub code: CodeSpec,
    #[serde(default)]
    pub timing: TimingSpec,
    #[serde(default)]
    pub channel: ChannelSpec,
    /// Channel seen by antenna B, when it differs from antenna A's.
    #[serde(default)]
    pub channel_b: Option<ChannelSpec>,
    #[serde(default)]
    pub radar: Option<RadarSpec>,
    #[serde(default)]
    pub comm: Option<CommSpec>,
    #[serde(default)]
    pub fading: Option<FadingSpec>,
    #[serde(default)]
    pub region: Option<RegionSpec>,
    #[serde(default)]
    pub jamming: Option<JammingSpec>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
}

fn default_seeds() -> Vec<u64> {
    vec![1]
}

fn default_carriers() -> Vec<f64> {
    vec![BAND_CENTER_HZ]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub struct CodeSpec {
    #[serde(default)]
    pub kind: CodeKind,
    /// LFSR degree for m-sequences.
    pub degree: Option<u32>,
    /// Feedback tap mask; defaults to a known primitive polynomial.
    pub taps: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeKind {
    #[default]
    Barker13,
    Msequence,
}

impl Default for CodeSpec {
    fn default() -> Self {
        CodeSpec {
            kind: CodeKind::Barker13,
            degree: None,
            taps: None,
        }
    }
}

impl CodeSpec {
    pub fn build(&self) -> roadlink_core::Result<ChipSequence> {
        match self.kind {
            CodeKind::Barker13 => Ok(barker13()),
            CodeKind::Msequence => {
                let degree = self.degree.unwrap_or(7);
                let taps = match self.taps {
                    Some(t) => t,
                    None => default_msequence_taps(degree).ok_or_else(|| {
                        roadlink_core::Error::InvalidParameter(format!(
                            "no default taps for degree {degree}"
                        ))
                    })?,
                };
                msequence(degree, taps)
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingSpec {
    #[serde(default = "default_prt_us")]
    pub prt_us: f64,
    #[serde(default = "default_spc")]
    pub samples_per_chip: usize,
    #[serde(default = "default_chip_rate")]
    pub chip_rate_hz: f64,
}

fn default_prt_us() -> f64 {
    500.0
}
fn default_spc() -> usize {
    4
}
fn default_chip_rate() -> f64 {
    50e6
}

impl Default for TimingSpec {
    fn default() -> Self {
        TimingSpec {
            prt_us: default_prt_us(),
            samples_per_chip: default_spc(),
            chip_rate_hz: default_chip_rate(),
        }
    }
}

impl TimingSpec {
    pub fn build(&self) -> roadlink_core::Result<RadarTiming> {
        RadarTiming::new(self.prt_us * 1e-6, self.samples_per_chip, self.chip_rate_hz)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    #[serde(default)]
    pub noise_psd: f64,
    #[serde(default)]
    pub antenna_decorrelation: f64,
    #[serde(default = "default_taps")]
    pub taps: Vec<TapSpec>,
    #[serde(default)]
    pub interferers: Vec<InterfererSpec>,
}

fn default_taps() -> Vec<TapSpec> {
    vec![TapSpec::default()]
}

impl Default for ChannelSpec {
    fn default() -> Self {
        ChannelSpec {
            noise_psd: 0.0,
            antenna_decorrelation: 0.0,
            taps: default_taps(),
            interferers: Vec::new(),
        }
    }
}

impl ChannelSpec {
    pub fn build(&self) -> roadlink_core::Result<ChannelModel> {
        let taps = self
            .taps
            .iter()
            .map(|t| t.build())
            .collect::<roadlink_core::Result<Vec<_>>>()?;
        let interferers = self
            .interferers
            .iter()
            .map(|i| i.build())
            .collect::<roadlink_core::Result<Vec<_>>>()?;
        let model = ChannelModel {
            taps,
            noise_psd: self.noise_psd,
            interferers,
            antenna_decorrelation: self.antenna_decorrelation,
        };
        model.validate()?;
        Ok(model)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TapSpec {
    #[serde(default)]
    pub delay_ns: f64,
    #[serde(default = "default_gain")]
    pub gain: f64,
    #[serde(default)]
    pub phase_deg: f64,
    #[serde(default)]
    pub doppler_hz: f64,
}

fn default_gain() -> f64 {
    1.0
}

impl Default for TapSpec {
    fn default() -> Self {
        TapSpec {
            delay_ns: 0.0,
            gain: 1.0,
            phase_deg: 0.0,
            doppler_hz: 0.0,
        }
    }
}

impl TapSpec {
    pub fn build(&self) -> roadlink_core::Result<ChannelTap> {
        ChannelTap::new(
            self.delay_ns * 1e-9,
            Complex64::from_polar(self.gain, self.phase_deg.to_radians()),
            self.doppler_hz,
        )
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterfererSpec {
    pub kind: InterfererKindSpec,
    #[serde(default)]
    pub freq_offset_hz: f64,
    pub power_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterfererKindSpec {
    CochannelTone,
    AdjacentTone,
    BroadbandJammer,
}

impl InterfererSpec {
    pub fn build(&self) -> roadlink_core::Result<Interferer> {
        let kind = match self.kind {
            InterfererKindSpec::CochannelTone => InterfererKind::CochannelTone,
            InterfererKindSpec::AdjacentTone => InterfererKind::AdjacentTone,
            InterfererKindSpec::BroadbandJammer => InterfererKind::BroadbandJammer,
        };
        Interferer::new(kind, self.freq_offset_hz, self.power_db)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadarSpec {
    #[serde(default = "default_threshold")]
    pub threshold_fraction: f64,
}

fn default_threshold() -> f64 {
    roadlink_core::radar::DEFAULT_THRESHOLD_FRACTION
}

impl Default for RadarSpec {
    fn default() -> Self {
        RadarSpec {
            threshold_fraction: default_threshold(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommSpec {
    #[serde(default = "default_comm_bits")]
    pub bits: usize,
    #[serde(default = "default_ebn0")]
    pub ebn0_db: Vec<f64>,
    /// Optional selection-outage Monte Carlo alongside the BER run.
    #[serde(default)]
    pub outage: Option<OutageSpec>,
}

fn default_comm_bits() -> usize {
    20_000
}
fn default_ebn0() -> Vec<f64> {
    vec![8.0]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutageSpec {
    #[serde(default = "default_outage_threshold")]
    pub fade_threshold_db: f64,
    #[serde(default = "default_outage_trials")]
    pub n_trials: usize,
}

fn default_outage_threshold() -> f64 {
    -9.7731 // single-branch Rayleigh outage of 10%
}
fn default_outage_trials() -> usize {
    100_000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FadingSpec {
    pub doppler_hz: f64,
    pub duration_s: f64,
    pub sample_interval_s: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    /// Second-path amplitude relative to the unit direct path.
    #[serde(default = "default_region_gain")]
    pub path_gain: f64,
    pub delta_tau_start_ns: f64,
    pub delta_tau_end_ns: f64,
    pub duration_s: f64,
    #[serde(default = "default_region_samples")]
    pub samples: usize,
    #[serde(default = "default_region_threshold")]
    pub fade_threshold_db: f64,
}

fn default_region_gain() -> f64 {
    0.97
}
fn default_region_samples() -> usize {
    2000
}
fn default_region_threshold() -> f64 {
    30.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JammingSpec {
    pub offsets_hz: Vec<f64>,
    #[serde(default = "default_ceiling")]
    pub ber_ceiling: f64,
    #[serde(default)]
    pub hopping: bool,
    #[serde(default = "default_n_channels")]
    pub n_channels: usize,
}

fn default_ceiling() -> f64 {
    1e-2
}
fn default_n_channels() -> usize {
    5
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub prt_us: Vec<f64>,
    #[serde(default = "default_target_range")]
    pub target_range_m: f64,
    #[serde(default = "default_sweep_trials")]
    pub trials: usize,
}

fn default_target_range() -> f64 {
    30.0
}
fn default_sweep_trials() -> usize {
    10
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ScenarioConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    /// Checks everything checkable before any simulation starts; returns the
    /// full list of violations.
    pub fn validate(&self) -> Result<()> {
        let mut violations = Vec::new();
        if self.name.trim().is_empty() {
            violations.push("name: must be nonempty".to_string());
        }
        if self.seeds.is_empty() {
            violations.push("seeds: must list at least one seed".to_string());
        }
        if self.carriers_hz.is_empty() {
            violations.push("carriers_hz: must list at least one carrier".to_string());
        }
        for (i, &c) in self.carriers_hz.iter().enumerate() {
            if !(c > 0.0) {
                violations.push(format!("carriers_hz[{i}]: must be positive, got {c}"));
            }
        }
        if let Err(e) = self.code.build() {
            violations.push(format!("code: {e}"));
        }
        if let Err(e) = self.timing.build() {
            violations.push(format!("timing: {e}"));
        }
        if let Err(e) = self.channel.build() {
            violations.push(format!("channel: {e}"));
        }
        if let Some(cb) = &self.channel_b {
            if let Err(e) = cb.build() {
                violations.push(format!("channel_b: {e}"));
            }
        }

        match self.mode {
            Mode::Radar => {
                let spec = self.radar.clone().unwrap_or_default();
                if !(0.0 < spec.threshold_fraction && spec.threshold_fraction < 1.0) {
                    violations.push(format!(
                        "radar.threshold_fraction: must be in (0, 1), got {}",
                        spec.threshold_fraction
                    ));
                }
            }
            Mode::Comm => {
                let Some(spec) = &self.comm else {
                    violations.push("comm: section required for mode = \"comm\"".to_string());
                    return fail_if_any(violations);
                };
                if spec.bits == 0 {
                    violations.push("comm.bits: must be >= 1".to_string());
                }
                if spec.ebn0_db.is_empty() {
                    violations.push("comm.ebn0_db: must list at least one point".to_string());
                }
                if let Some(outage) = &spec.outage {
                    if outage.n_trials < 1000 {
                        violations.push(format!(
                            "comm.outage.n_trials: must be >= 1000, got {}",
                            outage.n_trials
                        ));
                    }
                }
            }
            Mode::FadingDemo => {
                let Some(spec) = &self.fading else {
                    violations
                        .push("fading: section required for mode = \"fading_demo\"".to_string());
                    return fail_if_any(violations);
                };
                if !(spec.doppler_hz > 0.0) {
                    violations.push(format!(
                        "fading.doppler_hz: must be positive, got {}",
                        spec.doppler_hz
                    ));
                }
                if !(spec.duration_s > 0.0) {
                    violations.push(format!(
                        "fading.duration_s: must be positive, got {}",
                        spec.duration_s
                    ));
                }
                if !(spec.sample_interval_s > 0.0) {
                    violations.push(format!(
                        "fading.sample_interval_s: must be positive, got {}",
                        spec.sample_interval_s
                    ));
                }
            }
            Mode::RegionDemo => {
                let Some(spec) = &self.region else {
                    violations
                        .push("region: section required for mode = \"region_demo\"".to_string());
                    return fail_if_any(violations);
                };
                if self.carriers_hz.len() < 2 {
                    violations.push(
                        "carriers_hz: region_demo needs two carriers (low, high)".to_string(),
                    );
                }
                if !(spec.path_gain > 0.0 && spec.path_gain < 1.0) {
                    violations.push(format!(
                        "region.path_gain: must be in (0, 1), got {}",
                        spec.path_gain
                    ));
                }
                if !(spec.delta_tau_end_ns > spec.delta_tau_start_ns) {
                    violations.push("region.delta_tau_end_ns: must exceed start".to_string());
                }
                if spec.samples < 2 {
                    violations.push("region.samples: must be >= 2".to_string());
                }
                if !(spec.duration_s > 0.0) {
                    violations.push("region.duration_s: must be positive".to_string());
                }
                if !(spec.fade_threshold_db > 0.0) {
                    violations.push("region.fade_threshold_db: must be positive".to_string());
                }
            }
            Mode::JammingDemo => {
                let Some(spec) = &self.jamming else {
                    violations
                        .push("jamming: section required for mode = \"jamming_demo\"".to_string());
                    return fail_if_any(violations);
                };
                if spec.offsets_hz.is_empty() {
                    violations.push("jamming.offsets_hz: must list at least one offset".to_string());
                }
                if !(spec.ber_ceiling > 0.0 && spec.ber_ceiling < 0.5) {
                    violations.push(format!(
                        "jamming.ber_ceiling: must lie in (0, 0.5), got {}",
                        spec.ber_ceiling
                    ));
                }
                if spec.hopping && spec.n_channels == 0 {
                    violations.push("jamming.n_channels: must be >= 1 when hopping".to_string());
                }
            }
            Mode::PrtSweep => {
                let Some(spec) = &self.sweep else {
                    violations.push("sweep: section required for mode = \"prt_sweep\"".to_string());
                    return fail_if_any(violations);
                };
                if spec.prt_us.is_empty() {
                    violations.push("sweep.prt_us: must list at least one PRT".to_string());
                }
                for (i, &p) in spec.prt_us.iter().enumerate() {
                    if !(p > 0.0) {
                        violations.push(format!("sweep.prt_us[{i}]: must be positive, got {p}"));
                    }
                }
                if !(spec.target_range_m > 0.0) {
                    violations.push("sweep.target_range_m: must be positive".to_string());
                }
                if spec.trials == 0 {
                    violations.push("sweep.trials: must be >= 1".to_string());
                }
            }
        }
        fail_if_any(violations)
    }

    pub fn master_seed(&self) -> u64 {
        self.seeds.first().copied().unwrap_or(1)
    }

    pub fn primary_carrier_hz(&self) -> f64 {
        self.carriers_hz.first().copied().unwrap_or(BAND_CENTER_HZ)
    }
}

fn fail_if_any(violations: Vec<String>) -> Result<()> {
    if violations.is_empty() {
        Ok(())
    } else {
        Err(HarnessError::Validation(violations))
    }
}

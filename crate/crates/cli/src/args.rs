//! Command-line grammar. Every argument struct is serializable so a run can
//! be recorded in its manifest and replayed.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "rf-forster", version = crate::VERSION, about = "Rf-assisted Förster resonances of few Rydberg atoms")]
pub struct Cli {
    /// Parameter file (TOML). Falls back to $RF_FORSTER_PARAMS, then to the
    /// built-in Rb85 reference set.
    #[arg(long, global = true, env = "RF_FORSTER_PARAMS", value_name = "PATH")]
    pub params: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Floquet sideband amplitudes of one state.
    Sidebands(SidebandsArgs),
    /// Dc fields of rf-assisted resonances in a channel.
    Resonances(ResonancesArgs),
    /// Pair-state shift versus distance.
    PairShift(PairShiftArgs),
    /// Monte Carlo transfer spectra S_N(F_dc).
    Spectrum(SpectrumArgs),
    /// Collective Stark map of a channel with rf sideband ladders.
    StarkMap(StarkMapArgs),
    /// Re-run the command recorded in a metadata sidecar.
    #[serde(skip)]
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sidebands(_) => "sidebands",
            Command::Resonances(_) => "resonances",
            Command::PairShift(_) => "pair-shift",
            Command::Spectrum(_) => "spectrum",
            Command::StarkMap(_) => "stark-map",
            Command::Replay(_) => "replay",
        }
    }

    pub fn output(&self) -> Option<&OutputArgs> {
        match self {
            Command::Sidebands(a) => Some(&a.output),
            Command::Resonances(a) => Some(&a.output),
            Command::PairShift(a) => Some(&a.output),
            Command::Spectrum(a) => Some(&a.output),
            Command::StarkMap(a) => Some(&a.output),
            Command::Replay(_) => None,
        }
    }

    pub fn output_mut(&mut self) -> Option<&mut OutputArgs> {
        match self {
            Command::Sidebands(a) => Some(&mut a.output),
            Command::Resonances(a) => Some(&mut a.output),
            Command::PairShift(a) => Some(&mut a.output),
            Command::Spectrum(a) => Some(&mut a.output),
            Command::StarkMap(a) => Some(&mut a.output),
            Command::Replay(_) => None,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct OutputArgs {
    /// CSV output path; a `<stem>.meta.json` sidecar is written next to it.
    /// Without it the table goes to stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Also mirror the table as JSON (`<stem>.json`, or stdout without --out).
    #[arg(long)]
    pub json: bool,
    /// Record the wall-clock time in the sidecar (breaks byte-identical replay
    /// of the sidecar, not of the CSV).
    #[arg(long)]
    pub timestamp: bool,
}

/// rf drive. Amplitudes at the atoms are in V/cm; generator amplitudes in mV
/// are converted with `--rf-field-per-volt`.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct RfArgs {
    /// rf field amplitude at the atoms, V/cm.
    #[arg(long, value_name = "V/cm", conflicts_with = "rf_mv")]
    pub rf_amp: Option<f64>,
    /// rf generator amplitude, mV.
    #[arg(long, value_name = "mV")]
    pub rf_mv: Option<f64>,
    /// Field at the atoms per generator volt, (V/cm)/V.
    #[arg(long, value_name = "V/cm per V", default_value_t = 1.0)]
    pub rf_field_per_volt: f64,
    /// rf frequency, MHz.
    #[arg(long, value_name = "MHz")]
    pub rf_freq: Option<f64>,
}

impl RfArgs {
    /// Resolved rf field amplitude at the atoms, V/cm.
    pub fn amplitude(&self) -> f64 {
        match (self.rf_amp, self.rf_mv) {
            (Some(a), _) => a,
            (None, Some(mv)) => mv * 1e-3 * self.rf_field_per_volt,
            (None, None) => 0.0,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SidebandsArgs {
    /// State selector, e.g. `37P`, `38S1/2`, `37P3/2:1/2`.
    #[arg(long)]
    pub state: String,
    /// Dc field, V/cm.
    #[arg(long, value_name = "V/cm")]
    pub f_dc: f64,
    #[command(flatten)]
    pub rf: RfArgs,
    /// Truncation order; chosen automatically when absent.
    #[arg(long)]
    pub m_max: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ResonancesArgs {
    /// Channel label from the parameter file, e.g. `37P`.
    #[arg(long)]
    pub channel: String,
    #[command(flatten)]
    pub rf: RfArgs,
    /// Dc field range `lo:hi`, V/cm.
    #[arg(long, value_parser = parse_f64_range, allow_hyphen_values = true, default_value = "0:3")]
    pub f_range: (f64, f64),
    /// Order range `lo:hi`.
    #[arg(long, value_parser = parse_i32_range, allow_hyphen_values = true, default_value = "-6:6")]
    pub orders: (i32, i32),
    /// Include the cycle-averaged ac Stark shift of the rf field in the defect.
    #[arg(long)]
    pub ac_shift: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PairShiftArgs {
    /// Channel label from the parameter file, e.g. `37P`.
    #[arg(long)]
    pub channel: String,
    /// Distance range `lo:hi`, um.
    #[arg(long, value_parser = parse_f64_range, default_value = "2:40")]
    pub r_range: (f64, f64),
    /// Number of grid points.
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    /// Dc field at which the defect is evaluated, V/cm.
    #[arg(long, value_name = "V/cm", default_value_t = 0.0, conflicts_with = "delta")]
    pub f_dc: f64,
    /// Defect override, MHz.
    #[arg(long, value_name = "MHz", allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// cos of the angle between the pair axis and the field; orientation
    /// averaged when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub cos_theta: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendArg {
    Sideband,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeArg {
    SphereUniform,
    Gaussian,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SpectrumArgs {
    /// Channel label from the parameter file, e.g. `37P`.
    #[arg(long)]
    pub channel: String,
    /// Ensemble configuration file (TOML, fields of the ensemble config);
    /// individual flags below override it.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub rf: RfArgs,
    /// Dc field range `lo:hi`, V/cm.
    #[arg(long, value_parser = parse_f64_range, default_value = "1.6:2.0")]
    pub f_range: (f64, f64),
    /// Number of grid points.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Largest atom number N (spectra for 2..=N).
    #[arg(long)]
    pub atoms: Option<usize>,
    /// Monte Carlo samples per atom number.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Master seed; each sample draws from its own stream.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Excitation volume size, um.
    #[arg(long, value_name = "um")]
    pub volume_size: Option<f64>,
    #[arg(long, value_enum)]
    pub volume_shape: Option<ShapeArg>,
    /// Interaction time, us.
    #[arg(long, value_name = "us")]
    pub time: Option<f64>,
    /// Per-atom detection efficiency in (0, 1].
    #[arg(long)]
    pub detection_efficiency: Option<f64>,
    /// `sideband`: fast Floquet model; `oracle`: time-dependent integration.
    #[arg(long, value_enum, default_value = "sideband")]
    pub backend: BackendArg,
    /// Worker threads; does not change the output.
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct StarkMapArgs {
    /// Channel label from the parameter file, e.g. `37P`.
    #[arg(long)]
    pub channel: String,
    #[command(flatten)]
    pub rf: RfArgs,
    #[arg(long, value_parser = parse_f64_range, default_value = "0:3")]
    pub f_range: (f64, f64),
    /// Number of grid points.
    #[arg(long, default_value_t = 301)]
    pub points: usize,
    /// Number of sideband lines on each side of the initial-pair level.
    #[arg(long, default_value_t = 2)]
    pub sidebands: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    /// Metadata sidecar of an earlier run.
    #[arg(long, value_name = "PATH")]
    pub manifest: PathBuf,
    /// Write to this path instead of the recorded one.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

fn split_range(s: &str) -> Result<(&str, &str), String> {
    s.split_once(':').ok_or_else(|| format!("expected `lo:hi`, got `{s}`"))
}

pub fn parse_f64_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = split_range(s)?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("`{a}`: {e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("`{b}`: {e}"))?;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(format!("need finite lo < hi, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

pub fn parse_i32_range(s: &str) -> Result<(i32, i32), String> {
    let (a, b) = split_range(s)?;
    let lo: i32 = a.trim().parse().map_err(|e| format!("`{a}`: {e}"))?;
    let hi: i32 = b.trim().parse().map_err(|e| format!("`{b}`: {e}"))?;
    if hi < lo {
        return Err(format!("need lo <= hi, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_f64_range("0:2.5").unwrap(), (0.0, 2.5));
        assert_eq!(parse_i32_range("-6:6").unwrap(), (-6, 6));
        assert!(parse_f64_range("2:1").is_err());
        assert!(parse_f64_range("2").is_err());
        assert!(parse_i32_range("a:1").is_err());
    }

    #[test]
    fn millivolt_conversion() {
        let rf = RfArgs {
            rf_amp: None,
            rf_mv: Some(150.0),
            rf_field_per_volt: 1.0,
            rf_freq: Some(15.0),
        };
        assert!((rf.amplitude() - 0.15).abs() < 1e-15);
    }
}

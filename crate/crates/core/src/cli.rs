//! Batch command-line front end.
//!
//! Exit codes: 0 success (or a spectrum consistent with `n(∞) = 1`), 1 the audit
//! found a superluminal or amplifying branch (or could not decide), 2 bad input or
//! flags, 3 numerical failure. Results go to files (or stdout when `--out` is
//! omitted), diagnostics to stderr.

use std::ffi::OsString;
use std::fmt::Display;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::causality::{audit_with_floor, AuditError, Dichotomy};
use crate::kk::{
    kk_im_from_re, kk_re_from_im, kk_subtracted, kk_subtracted_at_infinity, KkError, KkOptions,
    SubtractionSpec,
};
use crate::models::{lorentz_index, LorentzOscillatorParams, ModelError, PhysicalConstants};
use crate::scharnhorst::{
    length_scale_table, light_clock_tick, table_to_csv, ClockComparison, ClockError, LightClockScenario,
    Orientation, ScharnhorstError,
};
use crate::spectra::{
    load_spectrum, spectrum_to_string, ComplexIndexSpectrum, FrequencyGrid, FrequencyUnit, SpectrumError,
    SpectrumFormat,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BRANCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Smallest grid the `model` subcommand will synthesize.
pub const MIN_SYNTH_COUNT: usize = 16;

#[derive(Debug, Parser)]
#[command(name = "kkdisp", version, about = "Dispersion relations, causality audits and plate-vacuum calculators")]
pub struct Cli {
    #[command(flatten)]
    pub constants: ConstantFlags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConstantFlags {
    /// Fine-structure constant
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Electron Compton wavelength in metres
    #[arg(long = "lambda-c", global = true, allow_hyphen_values = true)]
    pub lambda_c: Option<f64>,
    /// Prefactor k of the plate-vacuum shift
    #[arg(long = "k-coeff", global = true, allow_hyphen_values = true)]
    pub k_coeff: Option<f64>,
}

impl ConstantFlags {
    pub fn resolve(&self) -> Result<PhysicalConstants, ModelError> {
        let d = PhysicalConstants::default();
        let k = PhysicalConstants {
            alpha: self.alpha.unwrap_or(d.alpha),
            lambda_c: self.lambda_c.unwrap_or(d.lambda_c),
            k_coeff: self.k_coeff.unwrap_or(d.k_coeff),
            ..d
        };
        k.validate()?;
        Ok(k)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply a dispersion relation to a spectrum file
    Transform(TransformArgs),
    /// Audit a spectrum and write a JSON report
    Validate(ValidateArgs),
    /// Synthesize a model spectrum
    #[command(subcommand)]
    Model(ModelCommand),
    /// Tabulate the plate-vacuum shift against plate separation
    Scharnhorst(ScharnhorstArgs),
    /// Compare light-clock ticks between frames
    Clock(ClockArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    ReFromIm,
    ImFromRe,
    Subtracted,
    SubtractedAtInfinity,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, value_enum)]
    pub direction: Direction,
    /// Input spectrum (.csv or .json)
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Output spectrum (.csv or .json)
    #[arg(long)]
    pub out: PathBuf,
    /// Subtraction point for `subtracted`
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Re G(ω₀) for `subtracted`
    #[arg(long = "g0-re")]
    pub g0_re: Option<f64>,
    /// Im G(ω₀) for `subtracted`
    #[arg(long = "g0-im", default_value_t = 0.0)]
    pub g0_im: f64,
    /// Re n(∞) for `subtracted-at-infinity`
    #[arg(long = "re-inf", default_value_t = 1.0)]
    pub re_inf: f64,
    /// Im n(∞) for `subtracted-at-infinity`
    #[arg(long = "im-inf", default_value_t = 0.0)]
    pub im_inf: f64,
    /// Do not assume Im n is odd in ω (the relations then refuse to run)
    #[arg(long = "no-im-odd")]
    pub no_im_odd: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Report path; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Bound K₀ in |n|² ≤ K₀
    #[arg(long)]
    pub k0: Option<f64>,
    /// Ignore Im n above −floor when looking for gain
    #[arg(long, default_value_t = 0.0)]
    pub floor: f64,
}

#[derive(Debug, Subcommand)]
pub enum ModelCommand {
    /// Dilute single Lorentz oscillator
    Lorentz(LorentzArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitFlag {
    Normalized,
    Si,
}

#[derive(Debug, Args)]
pub struct LorentzArgs {
    #[arg(long = "omega-p")]
    pub omega_p: f64,
    #[arg(long = "omega-res")]
    pub omega_res: f64,
    #[arg(long)]
    pub gamma: f64,
    /// `log:MIN:MAX:COUNT` or `linear:MIN:MAX:COUNT`
    #[arg(long, default_value = "log:1e-2:1e2:2048")]
    pub grid: String,
    #[arg(long, value_enum, default_value_t = UnitFlag::Normalized)]
    pub unit: UnitFlag,
    /// Output spectrum; CSV on stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScharnhorstArgs {
    /// Plate separations in metres, comma separated
    #[arg(long = "L", value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub l: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrientationFlag {
    Perpendicular,
    Parallel,
}

#[derive(Debug, Args)]
pub struct ClockArgs {
    /// Rest-frame mirror separation in metres
    #[arg(long = "L", allow_hyphen_values = true)]
    pub l: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, value_enum)]
    pub orientation: OrientationFlag,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(e: impl Display) -> Self {
        Self {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }

    fn numerical(e: impl Display) -> Self {
        Self {
            code: EXIT_NUMERICAL,
            message: e.to_string(),
        }
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        Self::input(e)
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        Self::input(e)
    }
}

impl From<KkError> for CliError {
    fn from(e: KkError) -> Self {
        match e {
            KkError::Quad(_) => Self::numerical(e),
            _ => Self::input(e),
        }
    }
}

impl From<AuditError> for CliError {
    fn from(e: AuditError) -> Self {
        match e {
            AuditError::Kk(k) => k.into(),
            AuditError::ReUnknown => Self::input(e),
        }
    }
}

impl From<ScharnhorstError> for CliError {
    fn from(e: ScharnhorstError) -> Self {
        Self::input(e)
    }
}

impl From<ClockError> for CliError {
    fn from(e: ClockError) -> Self {
        match e {
            ClockError::Model(_) => Self::input(e),
            ClockError::BounceOrderDegenerate { .. } => Self::numerical(e),
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<ComplexIndexSpectrum, CliError> {
    load_spectrum(path, SpectrumFormat::from_path(path))
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn run_transform(a: &TransformArgs) -> Result<i32, CliError> {
    let s = load(&a.input)?;
    let opts = KkOptions {
        assume_im_odd: !a.no_im_odd,
        ..KkOptions::default()
    };
    let out = match a.direction {
        Direction::ReFromIm => kk_re_from_im(&s, &opts)?,
        Direction::ImFromRe => kk_im_from_re(&s, &opts)?,
        Direction::Subtracted => {
            let (Some(w0), Some(re0)) = (a.omega0, a.g0_re) else {
                return Err(CliError::input("--direction subtracted needs --omega0 and --g0-re"));
            };
            kk_subtracted(&s, &SubtractionSpec::finite(w0, re0, a.g0_im)?, &opts)?
        }
        Direction::SubtractedAtInfinity => {
            kk_subtracted_at_infinity(&s, &SubtractionSpec::infinity(a.re_inf, a.im_inf)?, &opts)?
        }
    };
    let text = spectrum_to_string(&out.spectrum, SpectrumFormat::from_path(&a.out));
    emit(Some(&a.out), &text)?;
    Ok(EXIT_OK)
}

pub fn run_validate(a: &ValidateArgs) -> Result<i32, CliError> {
    let s = load(&a.input)?;
    let opts = KkOptions {
        boundedness_constant: a.k0,
        ..KkOptions::default()
    };
    if !(a.floor.is_finite() && a.floor >= 0.0) {
        return Err(CliError::input(format!("--floor {} must be ≥ 0", a.floor)));
    }
    let report = audit_with_floor(&s, &opts, a.floor)?;
    emit(a.out.as_deref(), &report.to_json())?;
    eprintln!("dichotomy: {}", report.dichotomy.as_str());
    Ok(match report.dichotomy {
        Dichotomy::ConsistentWithUnity => EXIT_OK,
        _ => EXIT_BRANCH,
    })
}

pub fn run_model(m: &ModelCommand) -> Result<i32, CliError> {
    let ModelCommand::Lorentz(a) = m;
    let unit = match a.unit {
        UnitFlag::Normalized => FrequencyUnit::Normalized,
        UnitFlag::Si => FrequencyUnit::SiRadPerS,
    };
    let grid = FrequencyGrid::from_spec(&a.grid, unit)?;
    if grid.len() < MIN_SYNTH_COUNT {
        return Err(CliError::input(format!(
            "grid count {} below the minimum of {MIN_SYNTH_COUNT}",
            grid.len()
        )));
    }
    let p = LorentzOscillatorParams::new(a.omega_p, a.omega_res, a.gamma)?;
    let s = lorentz_index(&p, &grid);
    let format = a.out.as_deref().map_or(SpectrumFormat::Csv, SpectrumFormat::from_path);
    emit(a.out.as_deref(), &spectrum_to_string(&s, format))?;
    Ok(EXIT_OK)
}

pub fn run_scharnhorst(a: &ScharnhorstArgs, k: &PhysicalConstants) -> Result<i32, CliError> {
    let rows = length_scale_table(&a.l, k)?;
    emit(a.out.as_deref(), &table_to_csv(&rows, k))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ClockRun<'a> {
    schema: u32,
    scenario: &'a LightClockScenario,
    #[serde(flatten)]
    comparison: ClockComparison,
}

pub fn run_clock(a: &ClockArgs, k: &PhysicalConstants) -> Result<i32, CliError> {
    let orientation = match a.orientation {
        OrientationFlag::Perpendicular => Orientation::MotionPerpendicularToMirrors,
        OrientationFlag::Parallel => Orientation::MotionParallelToMirrors,
    };
    let sc = LightClockScenario::new(a.l, a.beta, orientation, *k)?;
    let comparison = light_clock_tick(&sc)?;
    let run = ClockRun {
        schema: 1,
        scenario: &sc,
        comparison,
    };
    emit(a.out.as_deref(), &crate::json::to_string(&run))?;
    Ok(EXIT_OK)
}

pub fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    let k = cli.constants.resolve()?;
    match &cli.command {
        Command::Transform(a) => run_transform(a),
        Command::Validate(a) => run_validate(a),
        Command::Model(m) => run_model(m),
        Command::Scharnhorst(a) => run_scharnhorst(a, &k),
        Command::Clock(a) => run_clock(a, &k),
    }
}

/// Parses `args` (program name first), runs, reports errors on stderr and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("kkdisp: {}", e.message);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parse_examples() {
        let c = Cli::try_parse_from(["kkdisp", "scharnhorst", "--L", "1e-6,1e-15"]).unwrap();
        match c.command {
            Command::Scharnhorst(a) => assert_eq!(a.l, vec![1e-6, 1e-15]),
            _ => panic!(),
        }
        let c = Cli::try_parse_from([
            "kkdisp", "clock", "--L", "1e-14", "--beta", "0.6", "--orientation", "perpendicular", "--k-coeff", "0",
        ])
        .unwrap();
        assert_eq!(c.constants.resolve().unwrap().k_coeff, 0.0);
        assert!(Cli::try_parse_from(["kkdisp", "clock", "--L", "1", "--bogus"]).is_err());
    }

    #[test]
    fn exit_codes_for_bad_flags() {
        assert_eq!(run(["kkdisp", "frobnicate"]), EXIT_INPUT);
        assert_eq!(run(["kkdisp", "scharnhorst", "--L", "-1"]), EXIT_INPUT);
        assert_eq!(run(["kkdisp", "--alpha", "-1", "scharnhorst", "--L", "1"]), EXIT_INPUT);
    }
}

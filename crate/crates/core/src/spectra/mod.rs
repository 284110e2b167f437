//! Frequency grids and sampled refractive-index spectra.
//!
//! Every constructor validates its invariants, so a value of any type in this
//! module is always well formed: grids are strictly increasing, non-negative and
//! finite, and spectra carry exactly one finite sample per grid node.

mod interp;
mod io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::models::PhysicalConstants;

pub use interp::{resample, MonotoneCubic};
pub(crate) use io::fmt_f64;
pub use io::{load_spectrum, parse_spectrum, spectrum_to_string, write_spectrum, SpectrumFormat};

/// Errors raised while building, loading or converting spectra.
///
/// Row numbers are 1-based and count data rows (header and comment lines excluded).
#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("need ≥ 2 samples (found {found})")]
    TooFewSamples { found: usize },
    #[error("non-monotone grid at row {row}")]
    NonMonotone { row: usize },
    #[error("negative frequency at row {row}")]
    NegativeFrequency { row: usize },
    #[error("non-finite value in column `{column}` at row {row}")]
    NonFinite { row: usize, column: &'static str },
    #[error("column `{column}` has {found} samples but the grid has {expected}")]
    LengthMismatch {
        column: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error("bad header: expected `omega,re_n,im_n`, found `{found}`")]
    Header { found: String },
    #[error("absorption conversion needs SI frequencies; grid is normalized")]
    NormalizedUnits,
    #[error("zero frequency at row {row}: drop the DC sample before converting absorption")]
    ZeroFrequency { row: usize },
    #[error("cannot extrapolate to ω = {omega} outside [{min}, {max}]")]
    Extrapolation { omega: f64, min: f64, max: f64 },
    #[error("invalid grid specification: {0}")]
    GridSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Unit tag of a frequency grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyUnit {
    /// Angular frequency in rad/s.
    SiRadPerS,
    /// Dimensionless frequency (any consistent scale).
    #[default]
    Normalized,
}

impl FrequencyUnit {
    pub fn as_str(self) -> &'static str {
        match self {
            FrequencyUnit::SiRadPerS => "si_rad_per_s",
            FrequencyUnit::Normalized => "normalized",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "si_rad_per_s" => Some(FrequencyUnit::SiRadPerS),
            "normalized" => Some(FrequencyUnit::Normalized),
            _ => None,
        }
    }
}

/// Strictly increasing, non-negative, finite frequency nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    values: Vec<f64>,
    unit: FrequencyUnit,
}

impl FrequencyGrid {
    pub fn new(values: Vec<f64>, unit: FrequencyUnit) -> Result<Self, SpectrumError> {
        if values.len() < 2 {
            return Err(SpectrumError::TooFewSamples {
                found: values.len(),
            });
        }
        for (i, &w) in values.iter().enumerate() {
            let row = i + 1;
            if !w.is_finite() {
                return Err(SpectrumError::NonFinite {
                    row,
                    column: "omega",
                });
            }
            if w < 0.0 {
                return Err(SpectrumError::NegativeFrequency { row });
            }
            if i > 0 && w <= values[i - 1] {
                return Err(SpectrumError::NonMonotone { row });
            }
        }
        Ok(Self { values, unit })
    }

    /// `count` equally spaced nodes on `[min, max]`.
    pub fn linear(
        min: f64,
        max: f64,
        count: usize,
        unit: FrequencyUnit,
    ) -> Result<Self, SpectrumError> {
        if count < 2 {
            return Err(SpectrumError::TooFewSamples { found: count });
        }
        let step = (max - min) / (count - 1) as f64;
        let mut values: Vec<f64> = (0..count).map(|i| min + step * i as f64).collect();
        values[count - 1] = max;
        Self::new(values, unit)
    }

    /// `count` log-spaced nodes on `[min, max]`, `min > 0`.
    pub fn log(min: f64, max: f64, count: usize, unit: FrequencyUnit) -> Result<Self, SpectrumError> {
        if count < 2 {
            return Err(SpectrumError::TooFewSamples { found: count });
        }
        if !(min > 0.0) {
            return Err(SpectrumError::GridSpec(format!(
                "log grid needs a positive lower bound, got {min}"
            )));
        }
        let (lo, hi) = (min.ln(), max.ln());
        let step = (hi - lo) / (count - 1) as f64;
        let mut values: Vec<f64> = (0..count).map(|i| (lo + step * i as f64).exp()).collect();
        values[0] = min;
        values[count - 1] = max;
        Self::new(values, unit)
    }

    /// Parses `log:MIN:MAX:COUNT` or `linear:MIN:MAX:COUNT`.
    pub fn from_spec(spec: &str, unit: FrequencyUnit) -> Result<Self, SpectrumError> {
        let parts: Vec<&str> = spec.split(':').collect();
        let bad = || SpectrumError::GridSpec(format!("`{spec}` (expected log|linear:MIN:MAX:COUNT)"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let min: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let max: f64 = parts[2].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[3].trim().parse().map_err(|_| bad())?;
        match parts[0].trim() {
            "log" => Self::log(min, max, count, unit),
            "linear" | "lin" => Self::linear(min, max, count, unit),
            _ => Err(bad()),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn unit(&self) -> FrequencyUnit {
        self.unit
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Number of decades spanned by the positive part of the grid.
    pub fn decades(&self) -> f64 {
        let lo = self.values.iter().copied().find(|&w| w > 0.0);
        match lo {
            Some(lo) => (self.max() / lo).log10(),
            None => 0.0,
        }
    }

    /// Grid with one extra node inserted in every interval (geometric midpoint where
    /// both ends are positive, arithmetic otherwise).
    pub fn refined(&self) -> Self {
        let mut values = Vec::with_capacity(2 * self.values.len() - 1);
        for w in self.values.windows(2) {
            values.push(w[0]);
            let mid = if w[0] > 0.0 {
                (w[0] * w[1]).sqrt()
            } else {
                0.5 * (w[0] + w[1])
            };
            values.push(mid);
        }
        values.push(self.max());
        Self {
            values,
            unit: self.unit,
        }
    }
}

/// Complex refractive index `n(ω) = re + i·im` sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexIndexSpectrum {
    grid: FrequencyGrid,
    re: Vec<f64>,
    im: Vec<f64>,
    re_known: bool,
}

fn check_column(column: &'static str, data: &[f64], expected: usize) -> Result<(), SpectrumError> {
    if data.len() != expected {
        return Err(SpectrumError::LengthMismatch {
            column,
            expected,
            found: data.len(),
        });
    }
    if let Some(i) = data.iter().position(|v| !v.is_finite()) {
        return Err(SpectrumError::NonFinite { row: i + 1, column });
    }
    Ok(())
}

impl ComplexIndexSpectrum {
    pub fn new(grid: FrequencyGrid, re: Vec<f64>, im: Vec<f64>) -> Result<Self, SpectrumError> {
        check_column("re_n", &re, grid.len())?;
        check_column("im_n", &im, grid.len())?;
        Ok(Self {
            grid,
            re,
            im,
            re_known: true,
        })
    }

    /// Samples `f(ω) -> (re, im)` at every node.
    pub fn from_fn(
        grid: FrequencyGrid,
        f: impl Fn(f64) -> (f64, f64),
    ) -> Result<Self, SpectrumError> {
        let (re, im) = grid.values().iter().map(|&w| f(w)).unzip();
        Self::new(grid, re, im)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn omega(&self) -> &[f64] {
        self.grid.values()
    }

    pub fn re(&self) -> &[f64] {
        &self.re
    }

    pub fn im(&self) -> &[f64] {
        &self.im
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// False when `re` is a placeholder (see [`im_from_absorption`]).
    pub fn re_known(&self) -> bool {
        self.re_known
    }

    pub fn with_re(&self, re: Vec<f64>) -> Result<Self, SpectrumError> {
        Self::new(self.grid.clone(), re, self.im.clone())
    }

    pub fn with_im(&self, im: Vec<f64>) -> Result<Self, SpectrumError> {
        let mut out = Self::new(self.grid.clone(), self.re.clone(), im)?;
        out.re_known = self.re_known;
        Ok(out)
    }

    pub(crate) fn mark_re_unknown(mut self) -> Self {
        self.re_known = false;
        self
    }
}

/// Absorption coefficient `α₀(ω)` in 1/m.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionSpectrum {
    grid: FrequencyGrid,
    alpha0: Vec<f64>,
}

impl AbsorptionSpectrum {
    pub fn new(grid: FrequencyGrid, alpha0: Vec<f64>) -> Result<Self, SpectrumError> {
        check_column("alpha0", &alpha0, grid.len())?;
        Ok(Self { grid, alpha0 })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn alpha0(&self) -> &[f64] {
        &self.alpha0
    }
}

/// `α₀ = 2 n_i ω / c`, element-wise. Requires an SI grid.
pub fn absorption_from_im(
    s: &ComplexIndexSpectrum,
    constants: &PhysicalConstants,
) -> Result<AbsorptionSpectrum, SpectrumError> {
    if s.grid().unit() != FrequencyUnit::SiRadPerS {
        return Err(SpectrumError::NormalizedUnits);
    }
    let alpha0 = s
        .omega()
        .iter()
        .zip(s.im())
        .map(|(&w, &ni)| 2.0 * ni * w / constants.c)
        .collect();
    AbsorptionSpectrum::new(s.grid().clone(), alpha0)
}

/// Inverse of [`absorption_from_im`]: `n_i = α₀ c / (2ω)`.
///
/// The real part cannot be recovered from absorption alone; it is filled with the
/// vacuum value 1 and the result reports `re_known() == false`.
pub fn im_from_absorption(
    a: &AbsorptionSpectrum,
    constants: &PhysicalConstants,
) -> Result<ComplexIndexSpectrum, SpectrumError> {
    if a.grid().unit() != FrequencyUnit::SiRadPerS {
        return Err(SpectrumError::NormalizedUnits);
    }
    if let Some(i) = a.grid().values().iter().position(|&w| w == 0.0) {
        return Err(SpectrumError::ZeroFrequency { row: i + 1 });
    }
    let im = a
        .grid()
        .values()
        .iter()
        .zip(a.alpha0())
        .map(|(&w, &al)| al * constants.c / (2.0 * w))
        .collect();
    let re = vec![1.0; a.grid().len()];
    Ok(ComplexIndexSpectrum::new(a.grid().clone(), re, im)?.mark_re_unknown())
}

//! Closed-form index models and physical constants.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectra::{ComplexIndexSpectrum, FrequencyGrid};

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
}

fn check(name: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<(), ModelError> {
    if value.is_finite() && ok {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}

/// Constants used by every unit-bearing calculation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Speed of light, m/s.
    pub c: f64,
    /// Fine-structure constant.
    pub alpha: f64,
    /// Electron Compton wavelength ħ/(mc), m.
    pub lambda_c: f64,
    /// Numerical prefactor `k` of the plate-vacuum velocity shift.
    pub k_coeff: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            c: 2.997_924_58e8,
            alpha: 1.0 / 137.0,
            lambda_c: 3.9e-13,
            k_coeff: 1e-2,
        }
    }
}

impl PhysicalConstants {
    /// All constants must be positive, except `k_coeff` which may be zero to switch the
    /// plate-vacuum shift off.
    pub fn validate(&self) -> Result<(), ModelError> {
        check("c", self.c, self.c > 0.0, "must be > 0")?;
        check("alpha", self.alpha, self.alpha > 0.0, "must be > 0")?;
        check("lambda_c", self.lambda_c, self.lambda_c > 0.0, "must be > 0")?;
        check("k_coeff", self.k_coeff, self.k_coeff >= 0.0, "must be ≥ 0")
    }

    /// `k α²`, the velocity shift at `L = λ_c`.
    pub fn k_alpha_sq(&self) -> f64 {
        self.k_coeff * self.alpha * self.alpha
    }
}

/// Single dilute Lorentz oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzOscillatorParams {
    pub omega_p: f64,
    pub omega_res: f64,
    pub gamma_d: f64,
}

impl LorentzOscillatorParams {
    pub fn new(omega_p: f64, omega_res: f64, gamma_d: f64) -> Result<Self, ModelError> {
        check("omega_p", omega_p, omega_p >= 0.0, "must be ≥ 0")?;
        check("omega_res", omega_res, omega_res > 0.0, "must be > 0")?;
        check("gamma_d", gamma_d, gamma_d > 0.0, "must be > 0")?;
        Ok(Self {
            omega_p,
            omega_res,
            gamma_d,
        })
    }
}

/// `n(ω) = 1 + (ωp²/2) / (ω₀² − ω² − iγω)` as `(Re n, Im n)`.
///
/// This is the dilute (linear in density) form, so `n − 1` is exactly a causal
/// response and satisfies the Kramers-Kronig pair. A Drude metal is the limit
/// `omega_res → 0`; pass a resonance far below the grid to approximate it.
pub fn lorentz_closed_form(p: &LorentzOscillatorParams, omega: f64) -> (f64, f64) {
    let a = 0.5 * p.omega_p * p.omega_p;
    let dr = p.omega_res * p.omega_res - omega * omega;
    let di = p.gamma_d * omega;
    let den = dr * dr + di * di;
    (1.0 + a * dr / den, a * di / den)
}

pub fn lorentz_index(p: &LorentzOscillatorParams, grid: &FrequencyGrid) -> ComplexIndexSpectrum {
    ComplexIndexSpectrum::from_fn(grid.clone(), |w| lorentz_closed_form(p, w))
        .expect("closed form is finite for valid parameters")
}

/// Low-frequency index normal to the plates: `1 − kα²(λ_c/L)⁴`.
///
/// Not clamped: for plate separations near the femtometre scale the shift exceeds one
/// and the returned value goes negative. For separations above ~10 pm the shift is
/// below `f64` resolution and the result rounds to exactly 1; use
/// [`scharnhorst_perp_deficit`] for `1 − n_⊥` itself.
pub fn scharnhorst_index_perp(l: f64, constants: &PhysicalConstants) -> Result<f64, ModelError> {
    check("L", l, l > 0.0, "plate separation must be > 0")?;
    Ok(1.0 - scharnhorst_perp_deficit(l, constants)?)
}

/// `1 − n_⊥ = kα²(λ_c/L)⁴`, computed without cancellation.
pub fn scharnhorst_perp_deficit(l: f64, constants: &PhysicalConstants) -> Result<f64, ModelError> {
    check("L", l, l > 0.0, "plate separation must be > 0")?;
    Ok(constants.k_alpha_sq() * (constants.lambda_c / l).powi(4))
}

/// Index parallel to the plates: exactly 1, independent of the separation.
pub fn scharnhorst_index_parallel() -> f64 {
    1.0
}

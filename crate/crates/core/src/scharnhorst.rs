//! Plate-vacuum light-speed shift and the numbers built on it.
//!
//! `δc/c = kα²(λ_c/L)⁴` for propagation normal to two plates at separation `L`. From
//! it: the velocity-measurement floor `δv = cλ/L`, the ratio `δv/δc`, the plate
//! separation at which the shift reaches a target, and a light-clock comparison
//! between frames.
//!
//! The literature quotes values for some of these that differ from the formula
//! (`REPORTED_*` below). They are carried as annotations only and never enter a
//! computation.

use serde::Serialize;
use thiserror::Error;

use crate::models::{scharnhorst_index_perp, scharnhorst_perp_deficit, ModelError, PhysicalConstants};
use crate::spectra::fmt_f64;

/// Reported `Δc/c` at `L = 1 µm`.
pub const REPORTED_DELTA_C_1UM: f64 = 1.6e-36;
/// Reported `Δc/c` at `L = 1 fm`.
pub const REPORTED_DELTA_C_1FM: f64 = 1.6;
/// Reported coefficient of `(L/λ_c)³` in `δv/δc`.
pub const REPORTED_MEASURABILITY_COEFF: f64 = 1.5e6;

pub const TABLE_HEADER: &str = "L_m,delta_c_over_c,measurability_ratio,n_perp";

#[derive(Debug, Error, PartialEq)]
pub enum ScharnhorstError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("k_coeff = 0 gives no shift, so no length reaches a positive target")]
    NoShift,
}

#[derive(Debug, Error, PartialEq)]
pub enum ClockError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(
        "bounce ordering degenerates: leg speed (1+δ)c = {leg_speed_factor:.6}c ≥ c/β with β = {beta}"
    )]
    BounceOrderDegenerate { leg_speed_factor: f64, beta: f64 },
}

fn positive(name: &'static str, v: f64) -> Result<(), ModelError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter {
            name,
            value: v,
            reason: "must be > 0",
        })
    }
}

/// `δc/c = kα²(λ_c/L)⁴`.
pub fn delta_c_over_c(l: f64, constants: &PhysicalConstants) -> Result<f64, ScharnhorstError> {
    constants.validate()?;
    Ok(scharnhorst_perp_deficit(l, constants)?)
}

/// `δv = cλ/L` in m/s.
pub fn delta_v(l: f64, lambda: f64, constants: &PhysicalConstants) -> Result<f64, ScharnhorstError> {
    positive("L", l)?;
    positive("lambda", lambda)?;
    constants.validate()?;
    Ok(constants.c * lambda / l)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScharnhorstScenario {
    pub l: f64,
    pub probe_wavelength: f64,
    pub constants: PhysicalConstants,
}

impl ScharnhorstScenario {
    /// `probe_wavelength` defaults to `λ_c`.
    pub fn new(
        l: f64,
        probe_wavelength: Option<f64>,
        constants: PhysicalConstants,
    ) -> Result<Self, ScharnhorstError> {
        constants.validate()?;
        let probe_wavelength = probe_wavelength.unwrap_or(constants.lambda_c);
        positive("L", l)?;
        positive("lambda", probe_wavelength)?;
        Ok(Self {
            l,
            probe_wavelength,
            constants,
        })
    }
}

/// `δv/δc = (λ/λ_c)(1/kα²)(L/λ_c)³`, infinite when `k = 0`.
pub fn measurability_ratio(s: &ScharnhorstScenario) -> Result<f64, ScharnhorstError> {
    let k = &s.constants;
    let dv = delta_v(s.l, s.probe_wavelength, k)?;
    let dc = delta_c_over_c(s.l, k)? * k.c;
    Ok(dv / dc)
}

/// Plate separation at which `δc/c` equals `target_ratio`.
pub fn invariant_length(target_ratio: f64, constants: &PhysicalConstants) -> Result<f64, ScharnhorstError> {
    positive("target_ratio", target_ratio)?;
    constants.validate()?;
    if constants.k_coeff == 0.0 {
        return Err(ScharnhorstError::NoShift);
    }
    Ok(constants.lambda_c * (constants.k_alpha_sq() / target_ratio).powf(0.25))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LengthScaleRow {
    pub l_m: f64,
    pub delta_c_over_c: f64,
    pub measurability_ratio: f64,
    pub n_perp: f64,
}

pub fn length_scale_table(
    l_values: &[f64],
    constants: &PhysicalConstants,
) -> Result<Vec<LengthScaleRow>, ScharnhorstError> {
    l_values
        .iter()
        .map(|&l| {
            let sc = ScharnhorstScenario::new(l, None, *constants)?;
            Ok(LengthScaleRow {
                l_m: l,
                delta_c_over_c: delta_c_over_c(l, constants)?,
                measurability_ratio: measurability_ratio(&sc)?,
                n_perp: scharnhorst_index_perp(l, constants)?,
            })
        })
        .collect()
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * b.abs()
}

/// `#` comment lines pairing reported values with the formula values.
pub fn table_annotations(rows: &[LengthScaleRow], constants: &PhysicalConstants) -> Vec<String> {
    let mut out = vec![format!(
        "# reported measurability coefficient 1/(k alpha^2): {:e}; formula: {}",
        REPORTED_MEASURABILITY_COEFF,
        fmt_f64(1.0 / constants.k_alpha_sq())
    )];
    for r in rows {
        for (l, reported) in [(1e-6, REPORTED_DELTA_C_1UM), (1e-15, REPORTED_DELTA_C_1FM)] {
            if near(r.l_m, l) {
                out.push(format!(
                    "# reported delta_c_over_c at L = {l:e} m: {reported:e}; formula: {}",
                    fmt_f64(r.delta_c_over_c)
                ));
            }
        }
    }
    out
}

/// CSV with annotations, header and one line per row, fixed 17-digit floats.
pub fn table_to_csv(rows: &[LengthScaleRow], constants: &PhysicalConstants) -> String {
    let mut out = String::new();
    for a in table_annotations(rows, constants) {
        out.push_str(&a);
        out.push('\n');
    }
    out.push_str(TABLE_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(r.l_m),
            fmt_f64(r.delta_c_over_c),
            fmt_f64(r.measurability_ratio),
            fmt_f64(r.n_perp)
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    MotionParallelToMirrors,
    MotionPerpendicularToMirrors,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LightClockScenario {
    pub l: f64,
    pub beta: f64,
    pub orientation: Orientation,
    pub constants: PhysicalConstants,
}

impl LightClockScenario {
    pub fn new(
        l: f64,
        beta: f64,
        orientation: Orientation,
        constants: PhysicalConstants,
    ) -> Result<Self, ClockError> {
        positive("L", l)?;
        constants.validate()?;
        if !(beta.is_finite() && (0.0..1.0).contains(&beta)) {
            return Err(ModelError::InvalidParameter {
                name: "beta",
                value: beta,
                reason: "must lie in [0, 1)",
            }
            .into());
        }
        Ok(Self {
            l,
            beta,
            orientation,
            constants,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClockComparison {
    pub tick_rest: f64,
    pub tick_moving_direct: f64,
    pub tick_moving_sr: f64,
    pub inconsistency: f64,
    /// `δ` at the rest separation.
    pub delta_rest: f64,
    /// `δ` used for the legs in the moving frame.
    pub delta_moving: f64,
}

/// Tick of a two-mirror light clock at rest and seen from a frame moving at `βc`.
///
/// The rest tick is `2L/(c(1+δ(L)))`. Moving perpendicular to the mirrors, the gap
/// contracts to `L/γ`; the photon's speed relative to the clock is taken as
/// `c(1+δ(L/γ))`, boosted by relativistic velocity addition, and the two legs chase and
/// meet the moving mirrors. Moving parallel to the mirrors, the gap stays `L` and the
/// photon runs the tilted path at `c(1+δ(L))`. The same `δ` applies to both legs.
/// The direct tick is compared to the time-dilated rest tick `γ·tick_rest`.
pub fn light_clock_tick(sc: &LightClockScenario) -> Result<ClockComparison, ClockError> {
    let k = &sc.constants;
    let (l, beta, c) = (sc.l, sc.beta, k.c);
    let gamma = 1.0 / (1.0 - beta * beta).sqrt();
    let delta_rest = scharnhorst_perp_deficit(l, k)?;
    let tick_rest = 2.0 * l / (c * (1.0 + delta_rest));
    let tick_moving_sr = gamma * tick_rest;
    let (tick_moving_direct, delta_moving) = match sc.orientation {
        Orientation::MotionPerpendicularToMirrors => {
            let lp = l / gamma;
            let d = scharnhorst_perp_deficit(lp, k)?;
            let leg = 1.0 + d;
            if leg * beta >= 1.0 {
                return Err(ClockError::BounceOrderDegenerate {
                    leg_speed_factor: leg,
                    beta,
                });
            }
            let (u, v) = (c * leg, c * beta);
            let forward = (u + v) / (1.0 + leg * beta);
            let backward = (u - v) / (1.0 - leg * beta);
            let t1 = lp / (forward - v);
            let t2 = lp / (backward + v);
            (t1 + t2, d)
        }
        Orientation::MotionParallelToMirrors => {
            // vertical lab speed c·sqrt((1+δ)² − β²) = (c/γ)·sqrt(1 + γ²δ(2+δ))
            let d = delta_rest;
            let s = (1.0 + gamma * gamma * d * (2.0 + d)).sqrt();
            (gamma * (2.0 * l / (c * s)), d)
        }
    };
    Ok(ClockComparison {
        tick_rest,
        tick_moving_direct,
        tick_moving_sr,
        inconsistency: (tick_moving_direct - tick_moving_sr).abs() / tick_moving_sr,
        delta_rest,
        delta_moving,
    })
}

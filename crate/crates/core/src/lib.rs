//! Numerical dispersion relations for complex refractive-index spectra.
//!
//! The crate is organised bottom-up:
//!
//! - [`spectra`]: frequency grids, complex index and absorption spectra, CSV/JSON I/O,
//!   monotone cubic resampling.
//! - [`pvquad`]: principal-value quadrature by singularity subtraction, power-law
//!   tail fitting and semi-infinite tail integrals.
//! - [`kk`]: the unsubtracted Kramers-Kronig pair and once-subtracted dispersion
//!   relations (finite subtraction point and subtraction at infinity).
//! - [`models`]: closed-form oracles (dilute Lorentz oscillator) and the
//!   Scharnhorst vacuum indices between parallel plates.
//! - [`causality`]: asymptote, passivity, boundedness and KK self-consistency audit.
//! - [`scharnhorst`]: velocity shift, measurability bound, invariant length and the
//!   light-clock frame-consistency calculation.
//! - [`cli`]: the batch front end used by the `kkdisp` binary.

pub mod causality;
pub mod cli;
mod json;
pub mod kk;
pub mod models;
pub mod pvquad;
pub mod scharnhorst;
pub mod spectra;

pub use causality::{audit, CausalityReport, Dichotomy};
pub use kk::{
    kk_im_from_re, kk_re_from_im, kk_subtracted, kk_subtracted_at_infinity, roundtrip_residual,
    KkOptions, KkOutput, SubtractionPoint, SubtractionSpec,
};
pub use models::{lorentz_index, LorentzOscillatorParams, PhysicalConstants};
pub use spectra::{AbsorptionSpectrum, ComplexIndexSpectrum, FrequencyGrid, FrequencyUnit};

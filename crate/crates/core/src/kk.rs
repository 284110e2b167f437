//! Kramers-Kronig transforms of refractive-index spectra.
//!
//! Four relations are provided, all evaluated on the input grid:
//!
//! - [`kk_re_from_im`]: `Re n(ω) = 1 + (2/π) P∫₀^∞ ν Im n(ν)/(ν² − ω²) dν`
//! - [`kk_im_from_re`]: `Im n(ω) = −(2/π) P∫₀^∞ ω [Re n(ν) − 1]/(ν² − ω²) dν`
//! - [`kk_subtracted`]: once-subtracted relation at a finite point ω₀,
//!   `Re G(ω) = Re G(ω₀) + ((ω−ω₀)/π) P∫ Im[(G(ν)−G(ω₀))/(ν−ω₀)] dν/(ν−ω)` over the
//!   whole real axis, the negative half supplied by `G(−ν) = conj G(ν)`.
//! - [`kk_subtracted_at_infinity`]: the ω₀ → ∞ limit,
//!   `Re n(ω) = Re n(∞) + (2/π) P∫₀^∞ [ν Im n(ν) − ω Im n(∞)]/(ν² − ω²) dν`.
//!   [`kk_barton_scharnhorst`] is its `Im n(∞) = 0` special case.
//!
//! The ν² − ω² kernels are split into partial fractions; the `1/(ν − ω)` piece goes
//! through the singularity-subtracted PV rule and the `1/(ν + ω)` piece is regular.
//! Below the first sample the integrand is continued to ν = 0 with the parity the
//! relation assumes (odd: linear through the origin; even: flat). Above the last sample
//! a fitted power law is sampled out to twice the grid top (so the top node is an
//! interior pole) and integrated analytically from there.

use serde::Serialize;
use thiserror::Error;

use crate::pvquad::{
    self, fit_tail, fit_tail_with, kk_odd_tail_integral, kk_tail_integral, subtracted_tail_integral,
    tail_integral, top_decade_start, QuadError, TailModel,
};
use crate::spectra::{ComplexIndexSpectrum, SpectrumError};

/// Slowest tail accepted by the subtracted relation (its kernel falls as ν⁻³).
pub const SUBTRACTED_MIN_TAIL_EXPONENT: f64 = -1.0;

const LOW_EXTENSION: [f64; 4] = [0.0, 0.25, 0.5, 0.75];
const HIGH_EXTENSION_NODES: usize = 16;
const HIGH_EXTENSION_FACTOR: f64 = 2.0;

#[derive(Debug, Error)]
pub enum KkError {
    #[error("this relation integrates over ν ≥ 0 only and needs assume_im_odd = true")]
    ImOddNotAssumed,
    #[error("Im n(0) = {value} but an odd Im n must vanish at ω = 0")]
    OddExtensionViolated { value: f64 },
    #[error("subtraction point ω₀ = {omega0} outside [0, {max}]")]
    SubtractionOutOfRange { omega0: f64, max: f64 },
    #[error("wrong subtraction point for this relation: {0}")]
    WrongSubtractionPoint(&'static str),
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error("Re n is unknown for this spectrum (derived from absorption)")]
    ReUnknown,
    #[error("grid has no interior nodes once the outer half-decades are excluded")]
    GridTooNarrow,
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "omega0", rename_all = "snake_case")]
pub enum SubtractionPoint {
    Finite(f64),
    Infinity,
}

/// Subtraction point and subtraction constant `G(ω₀)`. At infinity the constant is
/// `(Re n(∞), Im n(∞))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubtractionSpec {
    pub point: SubtractionPoint,
    pub constant_re: f64,
    pub constant_im: f64,
}

impl SubtractionSpec {
    pub fn finite(omega0: f64, constant_re: f64, constant_im: f64) -> Result<Self, KkError> {
        if !(omega0.is_finite() && omega0 >= 0.0) {
            return Err(KkError::InvalidOption(format!("ω₀ = {omega0} must be finite and ≥ 0")));
        }
        Self::checked(SubtractionPoint::Finite(omega0), constant_re, constant_im)
    }

    pub fn infinity(re_inf: f64, im_inf: f64) -> Result<Self, KkError> {
        Self::checked(SubtractionPoint::Infinity, re_inf, im_inf)
    }

    fn checked(point: SubtractionPoint, constant_re: f64, constant_im: f64) -> Result<Self, KkError> {
        if !(constant_re.is_finite() && constant_im.is_finite()) {
            return Err(KkError::InvalidOption("subtraction constant must be finite".into()));
        }
        Ok(Self {
            point,
            constant_re,
            constant_im,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KkOptions {
    /// Im n odd in ω (Re n even). The ν ≥ 0 forms of the relations require it.
    pub assume_im_odd: bool,
    /// Replaces the fitted tail; only exponent and amplitude are used.
    pub tail: Option<TailModel>,
    /// `K₀` in `|G(ω)|² ≤ K₀`, consumed by the causality audit.
    pub boundedness_constant: Option<f64>,
}

impl Default for KkOptions {
    fn default() -> Self {
        Self {
            assume_im_odd: true,
            tail: None,
            boundedness_constant: None,
        }
    }
}

impl KkOptions {
    pub fn validate(&self) -> Result<(), KkError> {
        match self.boundedness_constant {
            Some(k0) if !(k0.is_finite() && k0 > 0.0) => {
                Err(KkError::InvalidOption(format!("K₀ = {k0} must be > 0")))
            }
            _ => Ok(()),
        }
    }
}

/// Assumptions invoked by a transform, recorded in its output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Assumption {
    ImOddAssumed,
    ReEvenAssumed,
    CrossingSymmetryAssumed,
    PowerLawTail,
}

#[derive(Debug, Clone)]
pub struct KkOutput {
    pub spectrum: ComplexIndexSpectrum,
    /// Per-node quadrature error estimate of the transformed component.
    pub error_estimate: Vec<f64>,
    /// Tail used above the grid top.
    pub tail: TailModel,
    pub assumptions: Vec<Assumption>,
}

#[derive(Clone, Copy, PartialEq)]
enum Parity {
    Odd,
    Even,
}

/// Samples continued to ν = 0 below the grid and along the tail above it.
struct Extended {
    x: Vec<f64>,
    f: Vec<f64>,
    /// Tail integrated analytically beyond `x.last()`.
    tail: TailModel,
}

fn resolve_tail(omega: &[f64], f: &[f64], opts: &KkOptions, min_exponent: f64) -> Result<TailModel, KkError> {
    let top = omega[omega.len() - 1];
    if let Some(t) = opts.tail {
        return Ok(t.with_cutoff(top));
    }
    let start = top_decade_start(omega);
    let t = if min_exponent == pvquad::KK_MIN_TAIL_EXPONENT {
        fit_tail(&omega[start..], &f[start..])?
    } else {
        fit_tail_with(&omega[start..], &f[start..], min_exponent)?
    };
    Ok(t)
}

fn extend(omega: &[f64], f: &[f64], parity: Parity, tail: &TailModel) -> Result<Extended, KkError> {
    let n = omega.len();
    let mut x = Vec::with_capacity(n + LOW_EXTENSION.len() + HIGH_EXTENSION_NODES);
    let mut v = Vec::with_capacity(x.capacity());
    if omega[0] > 0.0 {
        for &t in &LOW_EXTENSION {
            x.push(t * omega[0]);
            v.push(match parity {
                Parity::Odd => t * f[0],
                Parity::Even => f[0],
            });
        }
        x.extend_from_slice(omega);
        v.extend_from_slice(f);
    } else {
        let mut f0 = f[0];
        if parity == Parity::Odd {
            let scale = f.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            if f0.abs() > 1e-12 * scale {
                return Err(KkError::OddExtensionViolated { value: f0 });
            }
            f0 = 0.0;
        }
        // densify [0, ω₁] so the first positive node has two neighbours below
        x.push(0.0);
        v.push(f0);
        if n > 1 {
            for &t in &LOW_EXTENSION[1..] {
                x.push(t * omega[1]);
                v.push(f0 + t * (f[1] - f0));
            }
        }
        x.extend_from_slice(&omega[1..]);
        v.extend_from_slice(&f[1..]);
    }
    let top = omega[n - 1];
    for k in 1..=HIGH_EXTENSION_NODES {
        let nu = top * HIGH_EXTENSION_FACTOR.powf(k as f64 / HIGH_EXTENSION_NODES as f64);
        x.push(nu);
        v.push(tail.eval(nu));
    }
    let cutoff = x[x.len() - 1];
    Ok(Extended {
        x,
        f: v,
        tail: tail.with_cutoff(cutoff),
    })
}

/// `∫₀^Λ f(ν)/ν dν` for odd `f` (regular: `f(ν)/ν → f'(0)`).
fn odd_over_nu(ext: &Extended) -> (f64, f64) {
    let (x, f) = (&ext.x, &ext.f);
    let m = 5.min(x.len());
    let slope0 = lagrange_slope_at_zero(&x[..m], &f[..m]);
    let g: Vec<f64> = x
        .iter()
        .zip(f)
        .map(|(&xi, &fi)| if xi == 0.0 { slope0 } else { fi / xi })
        .collect();
    pvquad::integrate_with_estimate(x, &g, None)
}

fn lagrange_slope_at_zero(x: &[f64], f: &[f64]) -> f64 {
    let m = x.len();
    let mut d = 0.0;
    for i in 0..m {
        let mut denom = 1.0;
        for j in 0..m {
            if j != i {
                denom *= x[i] - x[j];
            }
        }
        let mut dp = 0.0;
        for skip in 0..m {
            if skip == i {
                continue;
            }
            let mut p = 1.0;
            for j in 0..m {
                if j != i && j != skip {
                    p *= -x[j];
                }
            }
            dp += p;
        }
        d += f[i] * dp / denom;
    }
    d
}

/// Finite part of `(2/π) P∫₀^Λ ν f(ν)/(ν² − ω²) dν` for odd `f`, plus error estimate.
fn even_kernel_finite(ext: &Extended, omega: f64) -> Result<(f64, f64), KkError> {
    if omega == 0.0 {
        let (v, e) = odd_over_nu(ext);
        return Ok((2.0 * v / std::f64::consts::PI, 2.0 * e / std::f64::consts::PI));
    }
    let (pv, e1) = pvquad::pv_sampled(&ext.x, &ext.f, omega)?;
    let (reg, e2) = pvquad::regular_sampled(&ext.x, &ext.f, omega);
    Ok(((pv + reg) / std::f64::consts::PI, (e1 + e2) / std::f64::consts::PI))
}

fn check_odd(opts: &KkOptions) -> Result<(), KkError> {
    opts.validate()?;
    if opts.assume_im_odd {
        Ok(())
    } else {
        Err(KkError::ImOddNotAssumed)
    }
}

/// Real part from the imaginary part (unsubtracted, `n(∞) = 1`).
pub fn kk_re_from_im(s: &ComplexIndexSpectrum, opts: &KkOptions) -> Result<KkOutput, KkError> {
    check_odd(opts)?;
    let omega = s.omega();
    let tail = resolve_tail(omega, s.im(), opts, pvquad::KK_MIN_TAIL_EXPONENT)?;
    let ext = extend(omega, s.im(), Parity::Odd, &tail)?;
    let mut re = Vec::with_capacity(omega.len());
    let mut err = Vec::with_capacity(omega.len());
    for &w in omega {
        let (finite, e) = even_kernel_finite(&ext, w)?;
        let t = 2.0 * kk_tail_integral(&ext.tail, w)? / std::f64::consts::PI;
        re.push(1.0 + (finite + t));
        err.push(e);
    }
    Ok(KkOutput {
        spectrum: s.with_re(re)?,
        error_estimate: err,
        tail,
        assumptions: vec![Assumption::ImOddAssumed, Assumption::PowerLawTail],
    })
}

/// Imaginary part from the real part. Returns exactly 0 at ω = 0.
pub fn kk_im_from_re(s: &ComplexIndexSpectrum, opts: &KkOptions) -> Result<KkOutput, KkError> {
    check_odd(opts)?;
    if !s.re_known() {
        return Err(KkError::ReUnknown);
    }
    let omega = s.omega();
    let h: Vec<f64> = s.re().iter().map(|r| r - 1.0).collect();
    let tail = resolve_tail(omega, &h, opts, pvquad::KK_MIN_TAIL_EXPONENT)?;
    let ext = extend(omega, &h, Parity::Even, &tail)?;
    let mut im = Vec::with_capacity(omega.len());
    let mut err = Vec::with_capacity(omega.len());
    for &w in omega {
        if w == 0.0 {
            im.push(0.0);
            err.push(0.0);
            continue;
        }
        let (pv, e1) = pvquad::pv_sampled(&ext.x, &ext.f, w)?;
        let (reg, e2) = pvquad::regular_sampled(&ext.x, &ext.f, w);
        let t = 2.0 * kk_odd_tail_integral(&ext.tail, w)?;
        im.push(-((pv - reg) + t) / std::f64::consts::PI);
        err.push((e1 + e2) / std::f64::consts::PI);
    }
    Ok(KkOutput {
        spectrum: s.with_im(im)?,
        error_estimate: err,
        tail,
        assumptions: vec![
            Assumption::ReEvenAssumed,
            Assumption::ImOddAssumed,
            Assumption::PowerLawTail,
        ],
    })
}

/// Once-subtracted relation at a finite ω₀ for `G = g.re + i g.im`.
///
/// Under `G(−ν) = conj G(ν)` the whole-axis integral folds onto ν ≥ 0 and the two
/// poles separate: the result is `Re G(ω₀) + K(ω) − K(ω₀)` where
/// `K(x) = (2/π) P∫₀^∞ ν Im G(ν)/(ν² − x²) dν`, each `K` evaluated with its own
/// singularity subtraction. The divergent parts of the two `K` tails cancel, so `Im G`
/// may fall off slower than the unsubtracted transform allows, or even grow: fitted
/// tail exponents above [`SUBTRACTED_MIN_TAIL_EXPONENT`] are accepted.
/// `Im G(ω₀)` drops out of the real-axis relation under crossing symmetry.
pub fn kk_subtracted(
    g: &ComplexIndexSpectrum,
    sub: &SubtractionSpec,
    opts: &KkOptions,
) -> Result<KkOutput, KkError> {
    check_odd(opts)?;
    let omega0 = match sub.point {
        SubtractionPoint::Finite(w0) => w0,
        SubtractionPoint::Infinity => {
            return Err(KkError::WrongSubtractionPoint(
                "use kk_subtracted_at_infinity for ω₀ = ∞",
            ))
        }
    };
    let omega = g.omega();
    let top = omega[omega.len() - 1];
    if !(0.0..=top).contains(&omega0) {
        return Err(KkError::SubtractionOutOfRange { omega0, max: top });
    }
    let tail = resolve_tail(omega, g.im(), opts, SUBTRACTED_MIN_TAIL_EXPONENT)?;
    let ext = extend(omega, g.im(), Parity::Odd, &tail)?;
    let (k0, e0) = even_kernel_finite(&ext, omega0)?;
    let mut re = Vec::with_capacity(omega.len());
    let mut err = Vec::with_capacity(omega.len());
    for &w in omega {
        if w == omega0 {
            re.push(sub.constant_re);
            err.push(0.0);
            continue;
        }
        let (kw, e) = even_kernel_finite(&ext, w)?;
        let t = 2.0 * subtracted_tail_integral(&ext.tail, w, omega0)? / std::f64::consts::PI;
        re.push(sub.constant_re + ((kw - k0) + t));
        err.push(e + e0);
    }
    Ok(KkOutput {
        spectrum: g.with_re(re)?,
        error_estimate: err,
        tail,
        assumptions: vec![Assumption::CrossingSymmetryAssumed, Assumption::PowerLawTail],
    })
}

/// Subtraction at infinity with constants `Re n(∞)`, `Im n(∞)`.
///
/// The integrand is kept in the difference form `ν Im n(ν) − ω Im n(∞)`. The
/// `Im n(∞)` piece integrates to zero over [0, ∞) (`P∫₀^∞ dν/(ν² − ω²) = 0`); its grid
/// and tail parts are both done in closed form and cancel to rounding. With `Re n(∞) = 1`, `Im n(∞) = 0` this is
/// [`kk_re_from_im`].
pub fn kk_subtracted_at_infinity(
    s: &ComplexIndexSpectrum,
    sub: &SubtractionSpec,
    opts: &KkOptions,
) -> Result<KkOutput, KkError> {
    check_odd(opts)?;
    if sub.point != SubtractionPoint::Infinity {
        return Err(KkError::WrongSubtractionPoint("use kk_subtracted for finite ω₀"));
    }
    let (re_inf, im_inf) = (sub.constant_re, sub.constant_im);
    let omega = s.omega();
    let tail = resolve_tail(omega, s.im(), opts, pvquad::KK_MIN_TAIL_EXPONENT)?;
    let ext = extend(omega, s.im(), Parity::Odd, &tail)?;
    let cutoff = ext.tail.cutoff();
    let mut re = Vec::with_capacity(omega.len());
    let mut err = Vec::with_capacity(omega.len());
    for &w in omega {
        if w == 0.0 {
            let (finite, e) = even_kernel_finite(&ext, 0.0)?;
            let t = 2.0 * tail_integral(&ext.tail, 0.0)? / std::f64::consts::PI;
            re.push(re_inf + (finite + t));
            err.push(e);
            continue;
        }
        let (pv, e1) = pvquad::pv_sampled(&ext.x, &ext.f, w)?;
        let (reg, e2) = pvquad::regular_sampled(&ext.x, &ext.f, w);
        let finite = (pv + reg) / std::f64::consts::PI;
        let data_tail = 2.0 * kk_tail_integral(&ext.tail, w)? / std::f64::consts::PI;
        // constant part in closed form: −P∫₀^Λ c/(ν−ω) + ∫₀^Λ c/(ν+ω), then its tail
        let const_grid = im_inf * (((cutoff + w) / w).ln() - ((cutoff - w) / w).ln());
        let const_tail = -im_inf * ((cutoff + w) / (cutoff - w)).ln();
        re.push(re_inf + (finite + data_tail) + (const_grid + const_tail) / std::f64::consts::PI);
        err.push((e1 + e2) / std::f64::consts::PI);
    }
    Ok(KkOutput {
        spectrum: s.with_re(re)?,
        error_estimate: err,
        tail,
        assumptions: vec![Assumption::ImOddAssumed, Assumption::PowerLawTail],
    })
}

/// Real part with an asymptote `Re n(∞)` and `Im n(∞) = 0`: the simplified
/// relation, i.e. [`kk_subtracted_at_infinity`] with a vanishing imaginary constant.
pub fn kk_barton_scharnhorst(
    s: &ComplexIndexSpectrum,
    re_inf: f64,
    opts: &KkOptions,
) -> Result<KkOutput, KkError> {
    kk_subtracted_at_infinity(s, &SubtractionSpec::infinity(re_inf, 0.0)?, opts)
}

/// Indices of nodes inside `[lo·√10, hi/√10]`, `lo` the smallest positive node.
pub fn interior_nodes(omega: &[f64]) -> std::ops::Range<usize> {
    let lo = omega.iter().copied().find(|&w| w > 0.0).unwrap_or(0.0);
    let hi = omega[omega.len() - 1];
    let (a, b) = (lo * 10f64.sqrt(), hi / 10f64.sqrt());
    let start = omega.partition_point(|&w| w < a);
    let end = omega.partition_point(|&w| w <= b);
    start..end.max(start)
}

/// Largest `|Re n − KK[Im n]|` over interior nodes.
pub fn roundtrip_residual(s: &ComplexIndexSpectrum, opts: &KkOptions) -> Result<f64, KkError> {
    if !s.re_known() {
        return Err(KkError::ReUnknown);
    }
    let range = interior_nodes(s.omega());
    if range.is_empty() {
        return Err(KkError::GridTooNarrow);
    }
    let out = kk_re_from_im(s, opts)?;
    Ok(range
        .map(|i| (s.re()[i] - out.spectrum.re()[i]).abs())
        .fold(0.0, f64::max))
}

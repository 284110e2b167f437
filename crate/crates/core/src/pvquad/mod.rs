//! Principal-value quadrature for integrands with one simple pole.
//!
//! `P∫ f(ν)/(ν−ω) dν` is split by singularity subtraction into a regular integral
//! of `[f(ν) − f(ω)]/(ν − ω)` plus the closed form `f(ω)·ln|(b−ω)/(a−ω)|`. Sampled
//! integrands are integrated with an end-corrected (cubic Hermite) composite rule on
//! the given nodes, so arbitrary non-uniform and log grids work unchanged; the error
//! estimate compares against the same rule on every other node. Closures go through
//! adaptive Gauss–Kronrod on either side of the pole.

pub(crate) mod gk;
mod tail;

use thiserror::Error;

pub use tail::{
    fit_tail, fit_tail_with, kk_odd_tail_integral, kk_tail_integral, subtracted_tail_integral,
    tail_integral, top_decade_start, TailModel, KK_MIN_TAIL_EXPONENT, TAIL_FLOOR,
    TAIL_MIN_SAMPLES, TAIL_MIN_SPAN,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("pole ω = {pole} lies on the domain endpoint of [{lower}, {upper}]")]
    PoleAtEndpoint { pole: f64, lower: f64, upper: f64 },
    #[error("pole ω = {pole} is within half a grid spacing of the domain endpoint {endpoint}")]
    PoleNearEndpoint { pole: f64, endpoint: f64 },
    #[error("pole ω = {pole} needs ≥ 2 nodes on each side (found {below} below, {above} above)")]
    PoleNotBracketed {
        pole: f64,
        below: usize,
        above: usize,
    },
    #[error("invalid samples: {0}")]
    InvalidSamples(String),
    #[error("invalid tail model (p = {exponent}, A = {amplitude}, cutoff = {cutoff})")]
    InvalidTail {
        exponent: f64,
        amplitude: f64,
        cutoff: f64,
    },
    #[error("tail fit needs ≥ {needed} non-zero samples in the top decade (found {found})")]
    TooFewTailSamples { found: usize, needed: usize },
    #[error("tail fit samples span only a factor {span:.3} (need ≥ 4)")]
    TailSpanTooShort { span: f64 },
    #[error("tail changes sign: power-law extrapolation is invalid")]
    SignAlternatingTail,
    #[error("non-integrable tail: fitted exponent p = {exponent:.6} ≤ {min_exponent}")]
    NonIntegrableTail { exponent: f64, min_exponent: f64 },
    #[error("tail series diverges: |ω| = {pole} ≥ cutoff {cutoff}")]
    PoleBeyondCutoff { pole: f64, cutoff: f64 },
    #[error("tail series failed to converge")]
    SeriesDivergent,
}

/// Integrand data: samples on strictly increasing nodes, or a closure on `[lower, upper]`.
#[derive(Clone, Copy)]
pub enum Integrand<'a> {
    Sampled {
        nodes: &'a [f64],
        values: &'a [f64],
    },
    Function {
        f: &'a dyn Fn(f64) -> f64,
        lower: f64,
        upper: f64,
    },
}

/// `f(ν)/(ν − pole)` over the integrand's domain.
#[derive(Clone, Copy)]
pub struct PoleIntegrand<'a> {
    pub integrand: Integrand<'a>,
    pub pole: f64,
}

impl<'a> PoleIntegrand<'a> {
    pub fn sampled(nodes: &'a [f64], values: &'a [f64], pole: f64) -> Result<Self, QuadError> {
        check_samples(nodes, values)?;
        if !pole.is_finite() {
            return Err(QuadError::InvalidSamples(format!("pole {pole} is not finite")));
        }
        Ok(Self {
            integrand: Integrand::Sampled { nodes, values },
            pole,
        })
    }

    pub fn function(f: &'a dyn Fn(f64) -> f64, lower: f64, upper: f64, pole: f64) -> Result<Self, QuadError> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper && pole.is_finite()) {
            return Err(QuadError::InvalidSamples(format!(
                "domain [{lower}, {upper}] with pole {pole}"
            )));
        }
        Ok(Self {
            integrand: Integrand::Function { f, lower, upper },
            pole,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    /// Part of `value` contributed by an extrapolated tail (0 for finite domains).
    pub tail_contribution: f64,
}

fn check_samples(nodes: &[f64], values: &[f64]) -> Result<(), QuadError> {
    if nodes.len() != values.len() {
        return Err(QuadError::InvalidSamples(format!(
            "{} nodes but {} values",
            nodes.len(),
            values.len()
        )));
    }
    if nodes.len() < 2 {
        return Err(QuadError::InvalidSamples("need ≥ 2 nodes".into()));
    }
    if nodes.windows(2).any(|w| !(w[1] > w[0])) || nodes.iter().chain(values).any(|v| !v.is_finite()) {
        return Err(QuadError::InvalidSamples(
            "nodes must be finite and strictly increasing, values finite".into(),
        ));
    }
    Ok(())
}

/// `P∫ f(ν)/(ν − ω) dν` over the integrand's finite domain.
///
/// A pole on an endpoint, or within half a grid spacing of one, is rejected. For
/// sampled data an interior pole needs two nodes on each side; `f(ω)` between nodes
/// comes from the local cubic through the four nearest nodes.
pub fn pv_integrate(f: &PoleIntegrand) -> Result<QuadratureResult, QuadError> {
    let (value, error_estimate) = match f.integrand {
        Integrand::Sampled { nodes, values } => pv_sampled(nodes, values, f.pole)?,
        Integrand::Function { f: func, lower, upper } => pv_function(func, lower, upper, f.pole)?,
    };
    Ok(QuadratureResult {
        value,
        error_estimate,
        tail_contribution: 0.0,
    })
}

/// `P∫_{ν₀}^∞ f(ν)/(ν − ω) dν` for samples whose last decade follows a power law:
/// the finite part by [`pv_integrate`] and the remainder by [`tail_integral`] on a
/// tail fitted with exponent floor `min_exponent`.
pub fn pv_integrate_to_infinity(
    nodes: &[f64],
    values: &[f64],
    pole: f64,
    min_exponent: f64,
) -> Result<QuadratureResult, QuadError> {
    check_samples(nodes, values)?;
    let start = top_decade_start(nodes);
    let tail = fit_tail_with(&nodes[start..], &values[start..], min_exponent)?;
    let (value, err) = pv_sampled(nodes, values, pole)?;
    let t = tail_integral(&tail, pole)?;
    Ok(QuadratureResult {
        value: value + t,
        error_estimate: err,
        tail_contribution: t,
    })
}

/// Where a pole sits relative to a node set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum PoleSite {
    /// Exactly (to rounding) on node `k`.
    Node(usize),
    /// Between nodes `k − 1` and `k`.
    Between(usize),
    Outside,
}

pub(crate) fn locate_pole(nodes: &[f64], pole: f64) -> Result<PoleSite, QuadError> {
    let n = nodes.len();
    let (lo, hi) = (nodes[0], nodes[n - 1]);
    if pole == lo || pole == hi {
        return Err(QuadError::PoleAtEndpoint {
            pole,
            lower: lo,
            upper: hi,
        });
    }
    let half_lo = 0.5 * (nodes[1] - lo);
    let half_hi = 0.5 * (hi - nodes[n - 2]);
    if (pole - lo).abs() < half_lo {
        return Err(QuadError::PoleNearEndpoint { pole, endpoint: lo });
    }
    if (pole - hi).abs() < half_hi {
        return Err(QuadError::PoleNearEndpoint { pole, endpoint: hi });
    }
    if pole < lo || pole > hi {
        return Ok(PoleSite::Outside);
    }
    let k = nodes.partition_point(|&v| v < pole);
    let spacing = (nodes[k] - nodes[k - 1]).min(nodes.get(k + 1).map_or(f64::INFINITY, |v| v - nodes[k]));
    let site = if (nodes[k] - pole).abs() <= 1e-9 * spacing {
        PoleSite::Node(k)
    } else {
        PoleSite::Between(k)
    };
    let (below, above) = match site {
        PoleSite::Node(k) => (k, n - 1 - k),
        _ => (k, n - k),
    };
    if below < 2 || above < 2 {
        return Err(QuadError::PoleNotBracketed { pole, below, above });
    }
    Ok(site)
}

/// Lagrange interpolation weights (value, first derivative) at `t` for nodes `xs`.
fn lagrange_at(xs: &[f64], t: f64) -> (Vec<f64>, Vec<f64>) {
    let m = xs.len();
    let mut w = vec![0.0; m];
    let mut dw = vec![0.0; m];
    for i in 0..m {
        let mut denom = 1.0;
        for j in 0..m {
            if j != i {
                denom *= xs[i] - xs[j];
            }
        }
        let mut prod = 1.0;
        for j in 0..m {
            if j != i {
                prod *= t - xs[j];
            }
        }
        let mut dprod = 0.0;
        for skip in 0..m {
            if skip == i {
                continue;
            }
            let mut p = 1.0;
            for j in 0..m {
                if j != i && j != skip {
                    p *= t - xs[j];
                }
            }
            dprod += p;
        }
        w[i] = prod / denom;
        dw[i] = dprod / denom;
    }
    (w, dw)
}

/// `(f(ω), f'(ω))` from the local polynomial around the pole.
pub(crate) fn local_value_and_slope(nodes: &[f64], values: &[f64], site: PoleSite, pole: f64) -> (f64, f64) {
    let n = nodes.len();
    let (lo, hi) = match site {
        PoleSite::Node(k) => (k.saturating_sub(2), (k + 3).min(n)),
        PoleSite::Between(k) => (k.saturating_sub(2), (k + 2).min(n)),
        PoleSite::Outside => unreachable!("no local value outside the domain"),
    };
    let (w, dw) = lagrange_at(&nodes[lo..hi], pole);
    let vals = &values[lo..hi];
    let fv = match site {
        PoleSite::Node(k) => values[k],
        _ => w.iter().zip(vals).map(|(a, b)| a * b).sum(),
    };
    let slope = dw.iter().zip(vals).map(|(a, b)| a * b).sum();
    (fv, slope)
}

/// Composite rule on `(x, g)`: trapezoid plus the Hermite end-correction
/// `h²(g'ᵢ − g'ᵢ₊₁)/12`, with three-point slope estimates. Exact for quadratics.
pub(crate) fn hermite_integral(x: &[f64], g: &[f64]) -> f64 {
    let n = x.len();
    debug_assert!(n >= 2 && n == g.len());
    if n == 2 {
        return 0.5 * (x[1] - x[0]) * (g[0] + g[1]);
    }
    let slope = |i: usize| -> f64 {
        let (a, b, c) = if i == 0 {
            (0, 1, 2)
        } else if i == n - 1 {
            (n - 3, n - 2, n - 1)
        } else {
            (i - 1, i, i + 1)
        };
        let (xa, xb, xc) = (x[a], x[b], x[c]);
        let t = x[i];
        g[a] * ((t - xb) + (t - xc)) / ((xa - xb) * (xa - xc))
            + g[b] * ((t - xa) + (t - xc)) / ((xb - xa) * (xb - xc))
            + g[c] * ((t - xa) + (t - xb)) / ((xc - xa) * (xc - xb))
    };
    let mut total = 0.0;
    let mut d0 = slope(0);
    for i in 0..n - 1 {
        let h = x[i + 1] - x[i];
        let d1 = slope(i + 1);
        total += 0.5 * h * (g[i] + g[i + 1]) + h * h * (d0 - d1) / 12.0;
        d0 = d1;
    }
    total
}

/// Fine result and `|fine − coarse|`, the coarse rule using every other node (plus both
/// endpoints and `keep`).
pub(crate) fn integrate_with_estimate(x: &[f64], g: &[f64], keep: Option<usize>) -> (f64, f64) {
    let fine = hermite_integral(x, g);
    let n = x.len();
    let parity = keep.map_or(0, |k| k % 2);
    let idx: Vec<usize> = (0..n)
        .filter(|&i| i == 0 || i == n - 1 || i % 2 == parity)
        .collect();
    let xs: Vec<f64> = idx.iter().map(|&i| x[i]).collect();
    let gs: Vec<f64> = idx.iter().map(|&i| g[i]).collect();
    let coarse = hermite_integral(&xs, &gs);
    (fine, (fine - coarse).abs())
}

/// Singularity-subtracted principal value on samples; `(value, error_estimate)`.
pub(crate) fn pv_sampled(nodes: &[f64], values: &[f64], pole: f64) -> Result<(f64, f64), QuadError> {
    let site = locate_pole(nodes, pole)?;
    if site == PoleSite::Outside {
        let g: Vec<f64> = nodes.iter().zip(values).map(|(&x, &f)| f / (x - pole)).collect();
        return Ok(integrate_with_estimate(nodes, &g, None));
    }
    let (f0, slope) = local_value_and_slope(nodes, values, site, pole);
    let keep = match site {
        PoleSite::Node(k) => Some(k),
        _ => None,
    };
    let g: Vec<f64> = nodes
        .iter()
        .zip(values)
        .enumerate()
        .map(|(i, (&x, &f))| {
            if Some(i) == keep {
                slope
            } else {
                (f - f0) / (x - pole)
            }
        })
        .collect();
    let (regular, err) = integrate_with_estimate(nodes, &g, keep);
    let (lo, hi) = (nodes[0], nodes[nodes.len() - 1]);
    let log_term = f0 * ((hi - pole) / (pole - lo)).ln();
    Ok((regular + log_term, err))
}

/// `∫ f(ν)/(ν + shift) dν` on samples, no pole inside (`ν + shift > 0` everywhere).
pub(crate) fn regular_sampled(nodes: &[f64], values: &[f64], shift: f64) -> (f64, f64) {
    let g: Vec<f64> = nodes.iter().zip(values).map(|(&x, &f)| f / (x + shift)).collect();
    integrate_with_estimate(nodes, &g, None)
}

fn pv_function(f: &dyn Fn(f64) -> f64, lower: f64, upper: f64, pole: f64) -> Result<(f64, f64), QuadError> {
    const ABS: f64 = 1e-14;
    const REL: f64 = 1e-13;
    const MAX: usize = 2000;
    if pole == lower || pole == upper {
        return Err(QuadError::PoleAtEndpoint { pole, lower, upper });
    }
    if pole < lower || pole > upper {
        let g = |x: f64| f(x) / (x - pole);
        return Ok(gk::integrate(&g, lower, upper, ABS, REL, MAX));
    }
    let f0 = f(pole);
    let g = |x: f64| (f(x) - f0) / (x - pole);
    let (a, ea) = gk::integrate(&g, lower, pole, ABS, REL, MAX);
    let (b, eb) = gk::integrate(&g, pole, upper, ABS, REL, MAX);
    let log_term = f0 * ((upper - pole) / (pole - lower)).ln();
    Ok((a + b + log_term, ea + eb))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn symmetric_log_cancellation() {
        let x = linspace(0.0, 2.0, 41);
        let ones = vec![1.0; 41];
        let r = pv_integrate(&PoleIntegrand::sampled(&x, &ones, 1.0).unwrap()).unwrap();
        assert!(r.value.abs() < 1e-15);
        let one = |_: f64| 1.0;
        let r = pv_integrate(&PoleIntegrand::function(&one, 0.0, 2.0, 1.0).unwrap()).unwrap();
        assert!(r.value.abs() < 1e-15);
    }

    #[test]
    fn asymmetric_log() {
        let x = linspace(0.0, 3.0, 31);
        let ones = vec![1.0; 31];
        let r = pv_integrate(&PoleIntegrand::sampled(&x, &ones, 1.0).unwrap()).unwrap();
        assert!((r.value - std::f64::consts::LN_2).abs() < 1e-15);
        // pole between nodes
        let x = linspace(0.0, 3.0, 32);
        let r = pv_integrate(&PoleIntegrand::sampled(&x, &vec![1.0; 32], 1.0).unwrap()).unwrap();
        assert!((r.value - std::f64::consts::LN_2).abs() < 1e-14);
    }

    #[test]
    fn affine_is_exact() {
        let x: Vec<f64> = (0..50).map(|i| 2.0 * (i as f64 / 49.0).powf(1.7)).collect();
        let f: Vec<f64> = x.clone();
        let r = pv_integrate(&PoleIntegrand::sampled(&x, &f, 1.0).unwrap()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-13, "{}", r.value);
        let g: Vec<f64> = x.iter().map(|v| 3.0 - 0.5 * v).collect();
        // 3 − ν/2 = 2.5 − (ν − 1)/2: ∫ = −1 + 2.5·ln|1/−1| = −1 (on [0, 2])
        let r = pv_integrate(&PoleIntegrand::sampled(&x, &g, 1.0).unwrap()).unwrap();
        assert!((r.value + 1.0).abs() < 1e-13);
    }

    #[test]
    fn smooth_integrand_converges() {
        // P∫₀^π sin(ν)/(ν − 1) dν against the closure route
        let x = linspace(0.0, std::f64::consts::PI, 400);
        let f: Vec<f64> = x.iter().map(|v| v.sin()).collect();
        let s = pv_integrate(&PoleIntegrand::sampled(&x, &f, 1.0).unwrap()).unwrap();
        let sin = |v: f64| v.sin();
        let c = pv_integrate(&PoleIntegrand::function(&sin, 0.0, std::f64::consts::PI, 1.0).unwrap()).unwrap();
        assert!((s.value - c.value).abs() < 1e-8, "{} {}", s.value, c.value);
        assert!((s.value - c.value).abs() <= 2.0 * s.error_estimate + 1e-15);
    }

    #[test]
    fn pole_outside_domain() {
        let x = linspace(1.0, 2.0, 101);
        let f = vec![1.0; 101];
        let r = pv_integrate(&PoleIntegrand::sampled(&x, &f, -1.0).unwrap()).unwrap();
        assert!((r.value - (1.5f64).ln()).abs() < 1e-9);
    }

    #[test]
    fn rejections() {
        let x = linspace(0.0, 2.0, 21);
        let f = vec![1.0; 21];
        assert!(matches!(
            pv_sampled(&x, &f, 0.0),
            Err(QuadError::PoleAtEndpoint { .. })
        ));
        assert!(matches!(
            pv_sampled(&x, &f, 2.04),
            Err(QuadError::PoleNearEndpoint { .. })
        ));
        assert!(matches!(
            pv_sampled(&x, &f, 0.1),
            Err(QuadError::PoleNotBracketed { below: 1, .. })
        ));
        assert!(pv_sampled(&x, &f, 0.2).is_ok());
        assert!(PoleIntegrand::sampled(&x, &f[..3], 1.0).is_err());
        let one = |_: f64| 1.0;
        assert!(pv_integrate(&PoleIntegrand::function(&one, 0.0, 2.0, 2.0).unwrap()).is_err());
    }

    #[test]
    fn semi_infinite_identity_through_tail() {
        // P∫₀^∞ dν/(ν²−ω²) = 0, written as f(ν)/(ν−ω) with f = 1/(ν+ω)
        let w = 1.0;
        let mut x = vec![0.0];
        x.extend((0..3000).map(|i| 10f64.powf(-3.0 + 8.0 * i as f64 / 2999.0)));
        let f: Vec<f64> = x.iter().map(|v| 1.0 / (v + w)).collect();
        let r = pv_integrate_to_infinity(&x, &f, w, 0.0).unwrap();
        assert!(r.value.abs() < 1e-6, "{r:?}");
        assert!(r.tail_contribution > 0.0);
    }
}

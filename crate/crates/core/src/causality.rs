//! Real-axis causality checks and the superluminal/amplification classification.
//!
//! [`audit`] combines four checks on one spectrum:
//!
//! - the high-frequency asymptote `Re n(∞)` from a `n∞ + B/ω²` fit over the top decade,
//! - bands where `Im n < 0` (gain),
//! - the round-trip KK residual,
//! - the bound `|n|² ≤ K₀` when `K₀` is given.
//!
//! The classification only uses the first two. Decisions use a 3σ margin on `n∞`.

use serde::Serialize;
use thiserror::Error;

use crate::kk::{roundtrip_residual, Assumption, KkError, KkOptions};
use crate::pvquad::top_decade_start;
use crate::spectra::ComplexIndexSpectrum;

pub const REPORT_SCHEMA: u32 = 1;
/// Branch decisions require `n∞` to sit this many standard errors away from 1.
pub const SIGMA_THRESHOLD: f64 = 3.0;
/// Lower bound on the asymptote uncertainty (fit noise on exact data is ~0).
pub const MIN_UNCERTAINTY: f64 = 1e-9;
const MISFIT_FACTOR: f64 = 10.0;
const MIN_FIT_POINTS: usize = 4;

#[derive(Debug, Error, PartialEq)]
pub enum AsymptoteError {
    #[error("grid spans {decades:.3} decades; the asymptote needs ≥ 3")]
    GridTooShort { decades: f64 },
    #[error("only {found} nodes in the top decade (need ≥ {MIN_FIT_POINTS})")]
    TooFewPoints { found: usize },
    #[error("top-decade fit misfit: max residual {max_residual:.3e} exceeds {MISFIT_FACTOR}× residual std {std:.3e}")]
    Misfit { max_residual: f64, std: f64 },
}

#[derive(Debug, Error)]
pub enum AuditError {
    #[error("Re n is not known for this spectrum (derived from absorption); reconstruct it first")]
    ReUnknown,
    #[error(transparent)]
    Kk(#[from] KkError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Asymptote {
    pub value: f64,
    pub uncertainty: f64,
}

/// Maximal run of nodes `start_index..=end_index` with `Im n < −floor`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Band {
    pub start_index: usize,
    pub end_index: usize,
    pub omega_start: f64,
    pub omega_end: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Boundedness {
    /// `None` when no `K₀` was supplied.
    pub ok: Option<bool>,
    pub max_sq: f64,
    pub k0: Option<f64>,
}

/// Top-decade behaviour of `Im n`, reported without a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImTrend {
    pub value_at_top: f64,
    /// Log-log slope of `|Im n|` over the top decade; `None` if `Im n` vanishes or
    /// changes sign there.
    pub log_slope: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dichotomy {
    ConsistentWithUnity,
    SuperluminalBranch,
    AmplificationBranch,
    Both,
    Inconclusive,
}

impl Dichotomy {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ConsistentWithUnity => "consistent_with_unity",
            Self::SuperluminalBranch => "superluminal_branch",
            Self::AmplificationBranch => "amplification_branch",
            Self::Both => "both",
            Self::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CausalityReport {
    pub schema: u32,
    /// `None` when the fit failed; see `asymptote_error`.
    pub asymptote_re: Option<Asymptote>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymptote_error: Option<String>,
    pub im_trend: ImTrend,
    pub amplification_bands: Vec<Band>,
    pub kk_residual: f64,
    pub bounded: Boundedness,
    pub dichotomy: Dichotomy,
    pub assumptions: Vec<Assumption>,
}

impl CausalityReport {
    pub fn to_json(&self) -> String {
        crate::json::to_string(self)
    }
}

/// Least squares of `y` on the columns of `basis`, returning coefficients,
/// residuals and the intercept standard error.
fn least_squares(basis: &[Vec<f64>], y: &[f64]) -> (Vec<f64>, Vec<f64>, f64) {
    let m = basis.len();
    let n = y.len();
    let mut a = vec![vec![0.0; m + 1]; m];
    for i in 0..m {
        for j in 0..m {
            a[i][j] = (0..n).map(|k| basis[i][k] * basis[j][k]).sum();
        }
        a[i][m] = (0..n).map(|k| basis[i][k] * y[k]).sum();
    }
    let inv = invert(&a.iter().map(|r| r[..m].to_vec()).collect::<Vec<_>>());
    let coef: Vec<f64> = (0..m).map(|i| (0..m).map(|j| inv[i][j] * a[j][m]).sum()).collect();
    let res: Vec<f64> = (0..n)
        .map(|k| y[k] - (0..m).map(|i| coef[i] * basis[i][k]).sum::<f64>())
        .collect();
    let dof = (n - m).max(1) as f64;
    let s2 = res.iter().map(|r| r * r).sum::<f64>() / dof;
    let se0 = (s2 * inv[0][0]).max(0.0).sqrt();
    (coef, res, se0)
}

fn invert(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = a.len();
    let mut w: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..m).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..m {
        let p = (c..m)
            .max_by(|&i, &j| w[i][c].abs().total_cmp(&w[j][c].abs()))
            .expect("non-empty");
        w.swap(c, p);
        let d = w[c][c];
        for v in w[c].iter_mut() {
            *v /= d;
        }
        for r in 0..m {
            if r != c {
                let f = w[r][c];
                let pivot = w[c].clone();
                for (v, pv) in w[r].iter_mut().zip(pivot) {
                    *v -= f * pv;
                }
            }
        }
    }
    w.into_iter().map(|r| r[m..].to_vec()).collect()
}

/// Fits `Re n ≈ n∞ + B/ω²` over the top decade.
///
/// The uncertainty combines the intercept standard error with the shift in `n∞` when a
/// `C/ω⁴` term is added, so truncation bias of the two-term model is covered.
pub fn estimate_asymptote(s: &ComplexIndexSpectrum) -> Result<Asymptote, AsymptoteError> {
    let decades = s.grid().decades();
    if !(decades >= 3.0 - 1e-9) {
        return Err(AsymptoteError::GridTooShort { decades });
    }
    let start = top_decade_start(s.omega());
    let w = &s.omega()[start..];
    let y = &s.re()[start..];
    if w.len() < MIN_FIT_POINTS {
        return Err(AsymptoteError::TooFewPoints { found: w.len() });
    }
    // scale 1/ω² to O(1) to keep the normal equations well conditioned
    let top = w[w.len() - 1];
    let x: Vec<f64> = w.iter().map(|v| (top / v).powi(2)).collect();
    let ones = vec![1.0; w.len()];
    let (c2, res, se) = least_squares(&[ones.clone(), x.clone()], y);
    let x2: Vec<f64> = x.iter().map(|v| v * v).collect();
    let (c3, _, _) = least_squares(&[ones, x, x2], y);
    let n_inf = c2[0];

    let n = res.len() as f64;
    let std = (res.iter().map(|r| r * r).sum::<f64>() / n).sqrt();
    let max_residual = res.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    if max_residual > MISFIT_FACTOR * std && max_residual > 1e-12 * (1.0 + n_inf.abs()) {
        return Err(AsymptoteError::Misfit { max_residual, std });
    }
    let sys = (c3[0] - n_inf).abs();
    Ok(Asymptote {
        value: n_inf,
        uncertainty: (se * se + sys * sys).sqrt().max(MIN_UNCERTAINTY),
    })
}

/// Maximal node intervals where `Im n < −floor`. A negative or NaN floor counts as 0.
pub fn detect_amplification(s: &ComplexIndexSpectrum, floor: f64) -> Vec<Band> {
    let floor = floor.max(0.0);
    let (w, im) = (s.omega(), s.im());
    let mut bands = Vec::new();
    let mut start = None;
    for i in 0..=im.len() {
        let gain = i < im.len() && im[i] < -floor;
        match (gain, start) {
            (true, None) => start = Some(i),
            (false, Some(a)) => {
                bands.push(Band {
                    start_index: a,
                    end_index: i - 1,
                    omega_start: w[a],
                    omega_end: w[i - 1],
                });
                start = None;
            }
            _ => {}
        }
    }
    bands
}

/// `(max |n|² ≤ K₀, max |n|²)` over the nodes.
pub fn check_bounded(s: &ComplexIndexSpectrum, k0: f64) -> (bool, f64) {
    let max_sq = max_abs_sq(s);
    (max_sq <= k0, max_sq)
}

fn max_abs_sq(s: &ComplexIndexSpectrum) -> f64 {
    s.re()
        .iter()
        .zip(s.im())
        .map(|(r, i)| r * r + i * i)
        .fold(0.0, f64::max)
}

pub fn im_trend(s: &ComplexIndexSpectrum) -> ImTrend {
    let start = top_decade_start(s.omega());
    let w = &s.omega()[start..];
    let im = &s.im()[start..];
    let value_at_top = im[im.len() - 1];
    let same_sign = im.iter().all(|v| *v > 0.0) || im.iter().all(|v| *v < 0.0);
    let log_slope = (same_sign && w.len() >= 2 && w[0] > 0.0).then(|| {
        let lx: Vec<f64> = w.iter().map(|v| v.ln()).collect();
        let ly: Vec<f64> = im.iter().map(|v| v.abs().ln()).collect();
        let (c, _, _) = least_squares(&[vec![1.0; lx.len()], lx], &ly);
        c[1]
    });
    ImTrend {
        value_at_top,
        log_slope,
    }
}

fn classify(asymptote: Option<&Asymptote>, bands: &[Band]) -> Dichotomy {
    let Some(a) = asymptote else {
        return Dichotomy::Inconclusive;
    };
    let superluminal = a.value < 1.0 - SIGMA_THRESHOLD * a.uncertainty;
    match (superluminal, !bands.is_empty()) {
        (true, true) => Dichotomy::Both,
        (true, false) => Dichotomy::SuperluminalBranch,
        (false, true) => Dichotomy::AmplificationBranch,
        (false, false) => Dichotomy::ConsistentWithUnity,
    }
}

/// Full audit with the default gain floor of 0.
pub fn audit(s: &ComplexIndexSpectrum, opts: &KkOptions) -> Result<CausalityReport, AuditError> {
    audit_with_floor(s, opts, 0.0)
}

/// Full audit; `floor` is the noise level below which negative `Im n` is ignored.
pub fn audit_with_floor(
    s: &ComplexIndexSpectrum,
    opts: &KkOptions,
    floor: f64,
) -> Result<CausalityReport, AuditError> {
    if !s.re_known() {
        return Err(AuditError::ReUnknown);
    }
    opts.validate()?;
    let (asymptote_re, asymptote_error) = match estimate_asymptote(s) {
        Ok(a) => (Some(a), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let amplification_bands = detect_amplification(s, floor);
    let kk_residual = roundtrip_residual(s, opts)?;
    let max_sq = max_abs_sq(s);
    let bounded = Boundedness {
        ok: opts.boundedness_constant.map(|k0| max_sq <= k0),
        max_sq,
        k0: opts.boundedness_constant,
    };
    let dichotomy = classify(asymptote_re.as_ref(), &amplification_bands);
    Ok(CausalityReport {
        schema: REPORT_SCHEMA,
        asymptote_re,
        asymptote_error,
        im_trend: im_trend(s),
        amplification_bands,
        kk_residual,
        bounded,
        dichotomy,
        assumptions: vec![
            Assumption::ImOddAssumed,
            Assumption::ReEvenAssumed,
            Assumption::CrossingSymmetryAssumed,
            Assumption::PowerLawTail,
        ],
    })
}

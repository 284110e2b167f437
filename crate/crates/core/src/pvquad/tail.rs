//! Power-law tails `f(ν) ≈ A ν^(−p)` beyond the last sample.

use super::QuadError;

/// Smallest exponent accepted for an unsubtracted transform. `p ≤ 1` means the
/// spectrum needs a subtracted dispersion relation.
pub const KK_MIN_TAIL_EXPONENT: f64 = 1.0;

/// Samples with `|f|` at or below this are treated as zero (a few ulps of an O(1) index).
pub const TAIL_FLOOR: f64 = 1e-13;

/// Minimum number of non-zero samples and spectral span for a tail fit.
pub const TAIL_MIN_SAMPLES: usize = 8;
pub const TAIL_MIN_SPAN: f64 = 4.0;

const SERIES_REL_TOL: f64 = 1e-16;
const SERIES_MAX_TERMS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailModel {
    exponent: f64,
    amplitude: f64,
    cutoff: f64,
}

impl TailModel {
    pub fn new(exponent: f64, amplitude: f64, cutoff: f64) -> Result<Self, QuadError> {
        if !(exponent.is_finite() && amplitude.is_finite() && cutoff.is_finite() && cutoff > 0.0) {
            return Err(QuadError::InvalidTail {
                exponent,
                amplitude,
                cutoff,
            });
        }
        Ok(Self {
            exponent,
            amplitude,
            cutoff,
        })
    }

    /// A vanishing tail starting at `cutoff`.
    pub fn zero(cutoff: f64) -> Self {
        Self {
            exponent: 2.0,
            amplitude: 0.0,
            cutoff,
        }
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.amplitude == 0.0
    }

    pub fn eval(&self, nu: f64) -> f64 {
        if self.amplitude == 0.0 {
            0.0
        } else {
            self.amplitude * nu.powf(-self.exponent)
        }
    }

    /// Same power law, integrated from a different lower limit.
    pub fn with_cutoff(&self, cutoff: f64) -> Self {
        Self { cutoff, ..*self }
    }
}

/// Indices of the samples in the top decade `[ν_max/10, ν_max]`.
pub fn top_decade_start(nu: &[f64]) -> usize {
    let top = nu[nu.len() - 1];
    nu.partition_point(|&v| v < top / 10.0)
}

/// Fits `f ≈ A ν^(−p)` by least squares in log-log space and rejects `p ≤ 1`.
pub fn fit_tail(nu: &[f64], f: &[f64]) -> Result<TailModel, QuadError> {
    fit_tail_with(nu, f, KK_MIN_TAIL_EXPONENT)
}

/// [`fit_tail`] with a caller-chosen exponent floor (subtracted relations converge
/// for slower tails).
pub fn fit_tail_with(nu: &[f64], f: &[f64], min_exponent: f64) -> Result<TailModel, QuadError> {
    assert_eq!(nu.len(), f.len());
    let cutoff = match nu.last() {
        Some(&c) if c > 0.0 => c,
        _ => {
            return Err(QuadError::TooFewTailSamples {
                found: nu.len(),
                needed: TAIL_MIN_SAMPLES,
            })
        }
    };
    let live: Vec<(f64, f64)> = nu
        .iter()
        .zip(f)
        .filter(|(&x, &y)| x > 0.0 && y.abs() > TAIL_FLOOR)
        .map(|(&x, &y)| (x, y))
        .collect();
    if live.is_empty() {
        return Ok(TailModel::zero(cutoff));
    }
    let sign = live[0].1.signum();
    if live.iter().any(|&(_, y)| y.signum() != sign) {
        return Err(QuadError::SignAlternatingTail);
    }
    if live.len() < TAIL_MIN_SAMPLES {
        return Err(QuadError::TooFewTailSamples {
            found: live.len(),
            needed: TAIL_MIN_SAMPLES,
        });
    }
    let span = live[live.len() - 1].0 / live[0].0;
    if span < TAIL_MIN_SPAN {
        return Err(QuadError::TailSpanTooShort { span });
    }

    let m = live.len() as f64;
    let (mut sx, mut sy) = (0.0, 0.0);
    for &(x, y) in &live {
        sx += x.ln();
        sy += y.abs().ln();
    }
    let (mx, my) = (sx / m, sy / m);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in &live {
        let dx = x.ln() - mx;
        sxx += dx * dx;
        sxy += dx * (y.abs().ln() - my);
    }
    let slope = sxy / sxx;
    let exponent = -slope;
    if exponent <= min_exponent {
        return Err(QuadError::NonIntegrableTail {
            exponent,
            min_exponent,
        });
    }
    let amplitude = sign * (my - slope * mx).exp();
    TailModel::new(exponent, amplitude, cutoff)
}

fn sum_series(mut term: impl FnMut(usize) -> f64, start: usize, step: usize) -> Result<f64, QuadError> {
    let mut sum = 0.0;
    let mut j = start;
    let mut small_run = 0;
    while j < SERIES_MAX_TERMS {
        let t = term(j);
        sum += t;
        // two consecutive negligible terms: the ratio test has taken over
        if t.abs() <= SERIES_REL_TOL * sum.abs() || t == 0.0 {
            small_run += 1;
            if small_run >= 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
        j += step;
    }
    Err(QuadError::SeriesDivergent)
}

/// `∫_{cutoff}^∞ A ν^(−p) / (ν − pole) dν` for `|pole| < cutoff`, `p > 0`, by the
/// geometric expansion in `pole/ν`.
pub fn tail_integral(t: &TailModel, pole: f64) -> Result<f64, QuadError> {
    if t.is_zero() {
        return Ok(0.0);
    }
    if pole.abs() >= t.cutoff {
        return Err(QuadError::PoleBeyondCutoff {
            pole,
            cutoff: t.cutoff,
        });
    }
    if t.exponent <= 0.0 {
        return Err(QuadError::NonIntegrableTail {
            exponent: t.exponent,
            min_exponent: 0.0,
        });
    }
    let lead = t.amplitude * t.cutoff.powf(-t.exponent);
    let r = pole / t.cutoff;
    let mut rj = 1.0;
    sum_series(
        |j| {
            let term = lead * rj / (t.exponent + j as f64);
            rj *= r;
            term
        },
        0,
        1,
    )
}

/// Tail of the even Kramers-Kronig kernel, `∫_{cutoff}^∞ A ν^(−p) ν / (ν² − ω²) dν`.
pub fn kk_tail_integral(t: &TailModel, omega: f64) -> Result<f64, QuadError> {
    Ok(0.5 * (tail_integral(t, omega)? + tail_integral(t, -omega)?))
}

/// Tail of the odd Kramers-Kronig kernel, `∫_{cutoff}^∞ A ν^(−p) ω / (ν² − ω²) dν`.
pub fn kk_odd_tail_integral(t: &TailModel, omega: f64) -> Result<f64, QuadError> {
    if omega == 0.0 {
        return Ok(0.0);
    }
    Ok(0.5 * (tail_integral(t, omega)? - tail_integral(t, -omega)?))
}

/// `∫_{cutoff}^∞ A ν^(−p) [ν/(ν²−ω²) − ν/(ν²−ω₀²)] dν`, the tail left over by a
/// once-subtracted relation. Converges for `p > −2`.
pub fn subtracted_tail_integral(t: &TailModel, omega: f64, omega0: f64) -> Result<f64, QuadError> {
    if t.is_zero() || omega == omega0 {
        return Ok(0.0);
    }
    let reach = omega.abs().max(omega0.abs());
    if reach >= t.cutoff {
        return Err(QuadError::PoleBeyondCutoff {
            pole: reach,
            cutoff: t.cutoff,
        });
    }
    if t.exponent <= -2.0 {
        return Err(QuadError::NonIntegrableTail {
            exponent: t.exponent,
            min_exponent: -2.0,
        });
    }
    let lead = t.amplitude * t.cutoff.powf(-t.exponent);
    let (r, r0) = ((omega / t.cutoff).powi(2), (omega0 / t.cutoff).powi(2));
    let (mut rj, mut r0j) = (r, r0);
    sum_series(
        |j| {
            let term = lead * (rj - r0j) / (t.exponent + j as f64);
            rj *= r;
            r0j *= r0;
            term
        },
        2,
        2,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pvquad::gk;

    fn brute_tail(f: impl Fn(f64) -> f64, from: f64, to: f64) -> f64 {
        // split geometrically so each panel is well resolved
        let mut total = 0.0;
        let mut a = from;
        while a < to {
            let b = (a * 1.5).min(to);
            total += gk::integrate(&f, a, b, 1e-18, 1e-14, 100).0;
            a = b;
        }
        total
    }

    #[test]
    fn exact_power_law_fit() {
        let nu: Vec<f64> = (0..20).map(|i| 10f64.powf(1.0 + i as f64 / 19.0)).collect();
        let f: Vec<f64> = nu.iter().map(|x| x.powi(-3)).collect();
        let t = fit_tail(&nu, &f).unwrap();
        assert!((t.exponent() - 3.0).abs() < 1e-10);
        assert!((t.amplitude() - 1.0).abs() < 1e-10);
        assert_eq!(t.cutoff(), 100.0);

        let neg: Vec<f64> = f.iter().map(|v| -2.5 * v).collect();
        let t = fit_tail(&nu, &neg).unwrap();
        assert!((t.amplitude() + 2.5).abs() < 1e-9);
    }

    #[test]
    fn zero_tail() {
        let nu: Vec<f64> = (1..=10).map(|i| i as f64 * 10.0).collect();
        let t = fit_tail(&nu, &[0.0; 10]).unwrap();
        assert!(t.is_zero());
        assert_eq!(tail_integral(&t, 50.0).unwrap(), 0.0);
    }

    #[test]
    fn fit_rejections() {
        let nu: Vec<f64> = (0..20).map(|i| 10f64.powf(1.0 + i as f64 / 19.0)).collect();
        let slow: Vec<f64> = nu.iter().map(|x| x.powf(-0.5)).collect();
        match fit_tail(&nu, &slow) {
            Err(QuadError::NonIntegrableTail { exponent, .. }) => assert!((exponent - 0.5).abs() < 1e-10),
            other => panic!("{other:?}"),
        }
        assert!(fit_tail_with(&nu, &slow, 0.0).is_ok());
        let alt: Vec<f64> = nu.iter().enumerate().map(|(i, x)| if i % 2 == 0 { 1.0 } else { -1.0 } / x).collect();
        assert!(matches!(fit_tail(&nu, &alt), Err(QuadError::SignAlternatingTail)));
        assert!(matches!(
            fit_tail(&nu[..5], &slow[..5]),
            Err(QuadError::TooFewTailSamples { .. })
        ));
        let narrow: Vec<f64> = (0..10).map(|i| 10.0 + i as f64).collect();
        let fn_: Vec<f64> = narrow.iter().map(|x| x.powi(-3)).collect();
        assert!(matches!(fit_tail(&narrow, &fn_), Err(QuadError::TailSpanTooShort { .. })));
    }

    #[test]
    fn lorentz_tail_exponent() {
        use crate::models::{lorentz_closed_form, LorentzOscillatorParams};
        let p = LorentzOscillatorParams::new(1.0, 1.0, 0.1).unwrap();
        let nu: Vec<f64> = (0..512).map(|i| 10f64.powf(1.0 + i as f64 / 511.0)).collect();
        let im: Vec<f64> = nu.iter().map(|&w| lorentz_closed_form(&p, w).1).collect();
        let t = fit_tail(&nu, &im).unwrap();
        assert!((t.exponent() - 3.0).abs() < 0.15, "{}", t.exponent());
    }

    #[test]
    fn tail_integral_at_zero_pole() {
        let t = TailModel::new(2.0, 1.0, 10.0).unwrap();
        assert!((tail_integral(&t, 0.0).unwrap() - 0.005).abs() < 1e-15);
        assert!((kk_tail_integral(&t, 0.0).unwrap() - 0.005).abs() < 1e-15);
    }

    #[test]
    fn tail_integral_against_closed_form_and_brute_force() {
        // ∫₁₀^∞ ν⁻²/(ν−1) dν = −ln(0.9) − 0.1
        let t = TailModel::new(2.0, 1.0, 10.0).unwrap();
        let exact = -(0.9f64).ln() - 0.1;
        let series = tail_integral(&t, 1.0).unwrap();
        assert!((series - exact).abs() < 1e-15, "{series} {exact}");
        let brute = brute_tail(|x| 1.0 / (x * x * (x - 1.0)), 10.0, 1e6) + 0.5e-12;
        assert!((series - brute).abs() < 1e-9, "{series} {brute}");
        assert!((series - 0.005_360_5).abs() < 1e-7);

        // even kernel: ∫₁₀^∞ ν⁻² ν/(ν²−1) dν = −½ ln(0.99)
        let even = kk_tail_integral(&t, 1.0).unwrap();
        assert!((even + 0.5 * (0.99f64).ln()).abs() < 1e-15);
        assert!((even - 0.005_025_3).abs() < 2e-7);
        let brute = brute_tail(|x| 1.0 / (x * (x * x - 1.0)), 10.0, 1e6) + 0.5e-12;
        assert!((even - brute).abs() < 1e-9);
    }

    #[test]
    fn odd_and_subtracted_tails_against_brute_force() {
        let t = TailModel::new(1.7, -0.3, 20.0).unwrap();
        let (w, w0) = (7.0, 3.0);
        let odd = kk_odd_tail_integral(&t, w).unwrap();
        let brute = brute_tail(|x| t.eval(x) * w / (x * x - w * w), 20.0, 1e8);
        assert!((odd - brute).abs() < 1e-10 * brute.abs().max(1e-3), "{odd} {brute}");

        // constant tail: individually divergent, converges once subtracted
        let flat = TailModel::new(0.0, 0.4, 20.0).unwrap();
        let sub = subtracted_tail_integral(&flat, w, w0).unwrap();
        let k = |x: f64| 0.4 * (x / (x * x - w * w) - x / (x * x - w0 * w0));
        let brute = brute_tail(k, 20.0, 1e8) + 0.4 * (w * w - w0 * w0) / (2.0 * 1e16);
        assert!((sub - brute).abs() < 1e-12, "{sub} {brute}");
        assert!(tail_integral(&flat, w).is_err());
    }

    #[test]
    fn pole_beyond_cutoff() {
        let t = TailModel::new(2.0, 1.0, 10.0).unwrap();
        assert!(matches!(tail_integral(&t, 10.0), Err(QuadError::PoleBeyondCutoff { .. })));
        assert!(tail_integral(&t, -11.0).is_err());
    }
}

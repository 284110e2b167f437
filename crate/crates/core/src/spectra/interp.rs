use super::{ComplexIndexSpectrum, FrequencyGrid, SpectrumError};

/// Piecewise-cubic Hermite interpolant that never overshoots on monotone runs.
///
/// Node slopes are second-order three-point estimates. Where the data is locally
/// monotone the slope is limited to the Fritsch–Carlson region `[0, 3·min secant]`,
/// so a non-negative monotone stretch (an absorption wing) cannot dip below zero.
/// Slopes at local extrema are left untouched; flattening them costs a full order
/// of accuracy at resonance peaks.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    /// `x` must be strictly increasing with at least two nodes.
    pub fn new(x: &[f64], y: &[f64]) -> Self {
        assert!(x.len() >= 2 && x.len() == y.len());
        let n = x.len();
        let secant: Vec<f64> = (0..n - 1)
            .map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i]))
            .collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = secant[0];
            d[1] = secant[0];
        } else {
            for i in 1..n - 1 {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                d[i] = (h1 * secant[i - 1] + h0 * secant[i]) / (h0 + h1);
            }
            let (h0, h1) = (x[1] - x[0], x[2] - x[1]);
            d[0] = ((2.0 * h0 + h1) * secant[0] - h0 * secant[1]) / (h0 + h1);
            let (h0, h1) = (x[n - 1] - x[n - 2], x[n - 2] - x[n - 3]);
            d[n - 1] = ((2.0 * h0 + h1) * secant[n - 2] - h0 * secant[n - 3]) / (h0 + h1);
        }

        for i in 0..n {
            let left = if i > 0 { Some(secant[i - 1]) } else { None };
            let right = if i < n - 1 { Some(secant[i]) } else { None };
            d[i] = match (left, right) {
                (Some(a), Some(b)) if a == 0.0 || b == 0.0 => 0.0,
                (Some(a), Some(b)) if a.signum() == b.signum() => limit(d[i], a.abs().min(b.abs()), a),
                (Some(_), Some(_)) => d[i],
                (Some(s), None) | (None, Some(s)) => {
                    if s == 0.0 {
                        0.0
                    } else {
                        limit(d[i], s.abs(), s)
                    }
                }
                (None, None) => unreachable!(),
            };
        }
        Self {
            x: x.to_vec(),
            y: y.to_vec(),
            d,
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    /// Evaluates the interpolant; `t` outside the node range is clamped to the
    /// nearest end interval (callers check the domain).
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let k = self.x.partition_point(|&v| v < t);
        if k < n && self.x[k] == t {
            return self.y[k];
        }
        let i = k.clamp(1, n - 1) - 1;
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[i] + h10 * h * self.d[i] + h01 * self.y[i + 1] + h11 * h * self.d[i + 1]
    }
}

fn limit(d: f64, bound: f64, sign_of: f64) -> f64 {
    if d * sign_of <= 0.0 {
        0.0
    } else {
        sign_of.signum() * d.abs().min(3.0 * bound)
    }
}

/// Interpolates `re` and `im` onto `target`, which must lie inside the source range.
pub fn resample(
    s: &ComplexIndexSpectrum,
    target: &FrequencyGrid,
) -> Result<ComplexIndexSpectrum, SpectrumError> {
    let (lo, hi) = (s.grid().min(), s.grid().max());
    if let Some(&w) = target.values().iter().find(|&&w| w < lo || w > hi) {
        return Err(SpectrumError::Extrapolation {
            omega: w,
            min: lo,
            max: hi,
        });
    }
    if target.values() == s.omega() {
        return Ok(s.clone());
    }
    let re = MonotoneCubic::new(s.omega(), s.re());
    let im = MonotoneCubic::new(s.omega(), s.im());
    let grid = FrequencyGrid::new(target.values().to_vec(), s.grid().unit())?;
    let out = ComplexIndexSpectrum::new(
        grid,
        target.values().iter().map(|&w| re.eval(w)).collect(),
        target.values().iter().map(|&w| im.eval(w)).collect(),
    )?;
    Ok(if s.re_known() { out } else { out.mark_re_unknown() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{lorentz_closed_form, lorentz_index, LorentzOscillatorParams};
    use crate::spectra::FrequencyUnit;
    use proptest::prelude::*;

    #[test]
    fn identity_on_same_grid() {
        let g = FrequencyGrid::log(0.1, 10.0, 50, FrequencyUnit::Normalized).unwrap();
        let s = ComplexIndexSpectrum::from_fn(g.clone(), |w| (w.sin(), w.cos())).unwrap();
        assert_eq!(resample(&s, &g).unwrap(), s);
    }

    #[test]
    fn reproduces_linear_ramps() {
        let g = FrequencyGrid::log(0.1, 10.0, 37, FrequencyUnit::Normalized).unwrap();
        let s = ComplexIndexSpectrum::from_fn(g, |w| (w, 2.0 - 0.1 * w)).unwrap();
        let t = FrequencyGrid::linear(0.1, 10.0, 301, FrequencyUnit::Normalized).unwrap();
        let r = resample(&s, &t).unwrap();
        for ((w, re), im) in t.values().iter().zip(r.re()).zip(r.im()) {
            assert!((re - w).abs() < 1e-13, "{w} {re}");
            assert!((im - (2.0 - 0.1 * w)).abs() < 1e-13);
        }
    }

    #[test]
    fn extrapolation_rejected() {
        let g = FrequencyGrid::linear(1.0, 2.0, 5, FrequencyUnit::Normalized).unwrap();
        let s = ComplexIndexSpectrum::from_fn(g, |w| (w, 0.0)).unwrap();
        let t = FrequencyGrid::linear(0.5, 2.0, 5, FrequencyUnit::Normalized).unwrap();
        assert!(matches!(resample(&s, &t), Err(SpectrumError::Extrapolation { .. })));
    }

    #[test]
    fn lorentz_upsampling_matches_closed_form() {
        // Broad oscillator: a γ = 0.1 resonance is only ~2 nodes wide at N = 256
        // over four decades, beyond what any cubic can resolve to 1e-4.
        let p = LorentzOscillatorParams::new(1.0, 1.0, 1.0).unwrap();
        let coarse = FrequencyGrid::log(1e-2, 1e2, 256, FrequencyUnit::Normalized).unwrap();
        let fine = FrequencyGrid::log(1e-2, 1e2, 1024, FrequencyUnit::Normalized).unwrap();
        let r = resample(&lorentz_index(&p, &coarse), &fine).unwrap();
        let mut worst: f64 = 0.0;
        for ((&w, re), im) in fine.values().iter().zip(r.re()).zip(r.im()) {
            let (cr, ci) = lorentz_closed_form(&p, w);
            worst = worst.max((re - cr).abs()).max((im - ci).abs());
        }
        assert!(worst < 1e-4, "max error {worst}");
    }

    proptest! {
        #[test]
        fn monotone_data_stays_monotone(ys in prop::collection::vec(0.0f64..10.0, 3..30)) {
            let mut ys = ys;
            ys.sort_by(f64::total_cmp);
            let xs: Vec<f64> = (0..ys.len()).map(|i| (i as f64).powf(1.3)).collect();
            let c = MonotoneCubic::new(&xs, &ys);
            let mut prev = c.eval(xs[0]);
            let last = xs[xs.len() - 1];
            for k in 1..=400 {
                let v = c.eval(last * k as f64 / 400.0);
                prop_assert!(v >= prev - 1e-12);
                prop_assert!(v >= ys[0] - 1e-12 && v <= ys[ys.len() - 1] + 1e-12);
                prev = v;
            }
        }
    }
}

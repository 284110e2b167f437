// Once-subtracted dispersion relations: independence of the subtraction point, the
// subtraction at infinity, and a vacuum whose index tends to a value below one.

use kkdisp::kk::{interior_nodes, kk_barton_scharnhorst};
use kkdisp::models::lorentz_closed_form;
use kkdisp::{
    kk_re_from_im, kk_subtracted, kk_subtracted_at_infinity, lorentz_index, ComplexIndexSpectrum,
    FrequencyGrid, FrequencyUnit, KkOptions, LorentzOscillatorParams, SubtractionSpec,
};

pub struct PointComparison {
    pub omega0: (f64, f64),
    /// Largest interior difference of the two reconstructions.
    pub max_difference: f64,
    /// Largest interior sum of their error estimates.
    pub max_combined_error: f64,
}

fn g_spectrum() -> Result<(LorentzOscillatorParams, ComplexIndexSpectrum), Box<dyn std::error::Error>> {
    let p = LorentzOscillatorParams::new(1.0, 1.0, 0.1)?;
    let s = lorentz_index(&p, &FrequencyGrid::log(1e-2, 1e2, 2048, FrequencyUnit::Normalized)?);
    // G = n − 1
    let g = s.with_re(s.re().iter().map(|r| r - 1.0).collect())?;
    Ok((p, g))
}

/// Reconstructs `Re G` from subtraction points `points` and compares every pair.
pub fn subtraction_point_independence(points: &[f64]) -> Result<Vec<PointComparison>, Box<dyn std::error::Error>> {
    let (p, g) = g_spectrum()?;
    let mut runs = Vec::new();
    for &w0 in points {
        let (re0, im0) = lorentz_closed_form(&p, w0);
        let sub = SubtractionSpec::finite(w0, re0 - 1.0, im0)?;
        runs.push((w0, kk_subtracted(&g, &sub, &KkOptions::default())?));
    }
    let mut out = Vec::new();
    for a in 0..runs.len() {
        for b in a + 1..runs.len() {
            let (ra, rb) = (&runs[a].1, &runs[b].1);
            let mut diff: f64 = 0.0;
            let mut err: f64 = 0.0;
            for i in interior_nodes(g.omega()) {
                diff = diff.max((ra.spectrum.re()[i] - rb.spectrum.re()[i]).abs());
                err = err.max(ra.error_estimate[i] + rb.error_estimate[i]);
            }
            out.push(PointComparison {
                omega0: (runs[a].0, runs[b].0),
                max_difference: diff,
                max_combined_error: err,
            });
        }
    }
    Ok(out)
}

/// Largest node difference between the subtraction at infinity with `Re n(∞) = 1`,
/// `Im n(∞) = 0` and the unsubtracted transform.
pub fn infinity_reduction_gap() -> Result<f64, Box<dyn std::error::Error>> {
    let (_, g) = g_spectrum()?;
    let s = g.with_re(g.re().iter().map(|r| r + 1.0).collect())?;
    let a = kk_subtracted_at_infinity(&s, &SubtractionSpec::infinity(1.0, 0.0)?, &KkOptions::default())?;
    let b = kk_re_from_im(&s, &KkOptions::default())?;
    Ok(a
        .spectrum
        .re()
        .iter()
        .zip(b.spectrum.re())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for c in subtraction_point_independence(&[0.0, 0.5, 2.0])? {
        println!(
            "ω₀ = {} vs {}: max difference {:.2e}, combined error estimate {:.2e}",
            c.omega0.0, c.omega0.1, c.max_difference, c.max_combined_error
        );
    }
    println!("subtraction at infinity vs unsubtracted: {:.1e}", infinity_reduction_gap()?);

    // same absorption, asymptote 0.95 instead of 1: the whole curve shifts down
    let (_, g) = g_spectrum()?;
    let s = g.with_re(g.re().iter().map(|r| r + 1.0).collect())?;
    let low = kk_barton_scharnhorst(&s, 0.95, &KkOptions::default())?;
    let top = s.len() - 1;
    println!(
        "Re n(∞) = 0.95: Re n at ω = {} is {:.6} (closed form with n(∞) = 1: {:.6})",
        s.omega()[top],
        low.spectrum.re()[top],
        s.re()[top]
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

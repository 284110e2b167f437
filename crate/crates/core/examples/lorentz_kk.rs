// Kramers-Kronig transforms of a Lorentz oscillator checked against its closed form.

use std::time::Instant;

use kkdisp::kk::interior_nodes;
use kkdisp::{kk_im_from_re, kk_re_from_im, lorentz_index, FrequencyGrid, FrequencyUnit, KkOptions};
use kkdisp::LorentzOscillatorParams;

pub struct LorentzCheck {
    /// Largest interior `|Re n − KK[Im n]|`.
    pub re_error: f64,
    /// Largest interior `|Im n − KK[KK[Im n]]|`.
    pub roundtrip_error: f64,
    pub seconds: f64,
}

pub fn lorentz_check(count: usize) -> Result<LorentzCheck, Box<dyn std::error::Error>> {
    let p = LorentzOscillatorParams::new(1.0, 1.0, 0.1)?;
    let grid = FrequencyGrid::log(1e-2, 1e2, count, FrequencyUnit::Normalized)?;
    let s = lorentz_index(&p, &grid);

    let start = Instant::now();
    let re = kk_re_from_im(&s, &KkOptions::default())?;
    let im = kk_im_from_re(&re.spectrum, &KkOptions::default())?;
    let seconds = start.elapsed().as_secs_f64();

    let worst = |a: &[f64], b: &[f64]| {
        interior_nodes(s.omega())
            .map(|i| (a[i] - b[i]).abs())
            .fold(0.0, f64::max)
    };
    Ok(LorentzCheck {
        re_error: worst(re.spectrum.re(), s.re()),
        roundtrip_error: worst(im.spectrum.im(), s.im()),
        seconds,
    })
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for count in [512, 2048] {
        let c = lorentz_check(count)?;
        println!(
            "N = {count:>4}: Re error {:.2e}, round trip {:.2e}, {:.2} s",
            c.re_error, c.roundtrip_error, c.seconds
        );
    }

    let p = LorentzOscillatorParams::new(1.0, 1.0, 0.1)?;
    let s = lorentz_index(&p, &FrequencyGrid::log(1e-2, 1e2, 2048, FrequencyUnit::Normalized)?);
    let out = kk_re_from_im(&s, &KkOptions::default())?;
    println!(
        "tail above ω = {}: Im n ≈ {:.4e}·ω^-{:.4}",
        out.tail.cutoff(),
        out.tail.amplitude(),
        out.tail.exponent()
    );
    let i = s.omega().partition_point(|&w| w < 1.0);
    println!(
        "near resonance ω = {:.4}: Re n closed form {:.6}, transform {:.6} (± {:.1e})",
        s.omega()[i],
        s.re()[i],
        out.spectrum.re()[i],
        out.error_estimate[i]
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

// Spectra on disk: CSV and JSON round trips, resampling onto a finer grid, and the
// absorption-coefficient view of `Im n`.

use kkdisp::models::{lorentz_closed_form, PhysicalConstants};
use kkdisp::spectra::{
    absorption_from_im, im_from_absorption, load_spectrum, resample, write_spectrum, SpectrumFormat,
};
use kkdisp::{lorentz_index, ComplexIndexSpectrum, FrequencyGrid, FrequencyUnit, LorentzOscillatorParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("kkdisp-spectrum-io-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;

    let p = LorentzOscillatorParams::new(1.0, 1.0, 1.0)?;
    let grid = FrequencyGrid::from_spec("log:1e-2:1e2:256", FrequencyUnit::Normalized)?;
    let s = lorentz_index(&p, &grid);

    for (name, format) in [("lorentz.csv", SpectrumFormat::Csv), ("lorentz.json", SpectrumFormat::Json)] {
        let path = dir.join(name);
        write_spectrum(&s, &path, format)?;
        let back = load_spectrum(&path, SpectrumFormat::from_path(&path))?;
        println!("{name}: {} samples, bit-exact round trip: {}", back.len(), back == s);
        if back != s {
            return Err(format!("{name} did not round-trip").into());
        }
    }

    let fine = FrequencyGrid::log(1e-2, 1e2, 1024, FrequencyUnit::Normalized)?;
    let r = resample(&s, &fine)?;
    let err = r
        .omega()
        .iter()
        .zip(r.re().iter().zip(r.im()))
        .map(|(&w, (re, im))| {
            let (cre, cim) = lorentz_closed_form(&p, w);
            (re - cre).abs().max((im - cim).abs())
        })
        .fold(0.0, f64::max);
    println!("resampled 256 -> 1024 nodes, max error against closed form {err:.2e}");

    // absorption needs physical frequencies
    let k = PhysicalConstants::default();
    let si = FrequencyGrid::log(1e13, 1e17, 64, FrequencyUnit::SiRadPerS)?;
    let s = ComplexIndexSpectrum::from_fn(si, |w| (1.0, 1e-3 / (1.0 + (w / 1e15).powi(2))))?;
    let alpha = absorption_from_im(&s, &k)?;
    let back = im_from_absorption(&alpha, &k)?;
    let worst = s
        .im()
        .iter()
        .zip(back.im())
        .map(|(a, b)| ((a - b) / a).abs())
        .fold(0.0, f64::max);
    println!(
        "alpha0 at {:.1e} rad/s: {:.4e} 1/m; Im n recovered to {worst:.1e} relative, Re n known: {}",
        alpha.grid().values()[32],
        alpha.alpha0()[32],
        back.re_known()
    );

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

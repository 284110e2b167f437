// Auditing spectra for the two ways a vacuum could escape `n(∞) = 1`: a real part
// that settles below one, or gain (`Im n < 0`) somewhere.

use kkdisp::spectra::resample;
use kkdisp::{
    audit, lorentz_index, ComplexIndexSpectrum, Dichotomy, FrequencyGrid, FrequencyUnit, KkOptions,
    LorentzOscillatorParams,
};

pub struct Fixture {
    pub name: String,
    pub spectrum: ComplexIndexSpectrum,
    pub expected: Dichotomy,
}

fn grid() -> FrequencyGrid {
    FrequencyGrid::log(1e-2, 1e2, 2048, FrequencyUnit::Normalized).expect("valid grid")
}

fn lorentz(wp: f64, w0: f64, g: f64) -> ComplexIndexSpectrum {
    lorentz_index(&LorentzOscillatorParams::new(wp, w0, g).expect("valid params"), &grid())
}

fn flip_band(s: &ComplexIndexSpectrum, lo: f64, hi: f64) -> ComplexIndexSpectrum {
    let im = s
        .omega()
        .iter()
        .zip(s.im())
        .map(|(w, v)| if (lo..=hi).contains(w) { -v } else { *v })
        .collect();
    s.with_im(im).expect("same length")
}

/// Eight Lorentz oscillators, two spectra with a real part settling below one and two
/// with a gain band.
pub fn corpus() -> Vec<Fixture> {
    let mut out = Vec::new();
    for (wp, w0, g) in [
        (1.0, 1.0, 0.1),
        (0.5, 0.3, 0.05),
        (2.0, 1.5, 0.5),
        (1.0, 0.1, 0.02),
        (0.3, 2.0, 1.0),
        (1.5, 0.7, 0.2),
        (0.8, 0.05, 0.05),
        (1.0, 1.0, 1.0),
    ] {
        out.push(Fixture {
            name: format!("lorentz wp={wp} w0={w0} g={g}"),
            spectrum: lorentz(wp, w0, g),
            expected: Dichotomy::ConsistentWithUnity,
        });
    }
    out.push(Fixture {
        name: "constant n = 0.9".into(),
        spectrum: ComplexIndexSpectrum::from_fn(grid(), |_| (0.9, 0.0)).expect("finite"),
        expected: Dichotomy::SuperluminalBranch,
    });
    let shifted = lorentz(1.0, 1.0, 0.1);
    out.push(Fixture {
        name: "lorentz shifted down by 0.05".into(),
        spectrum: shifted
            .with_re(shifted.re().iter().map(|r| r - 0.05).collect())
            .expect("same length"),
        expected: Dichotomy::SuperluminalBranch,
    });
    out.push(Fixture {
        name: "lorentz with gain on [0.8, 1.25]".into(),
        spectrum: flip_band(&lorentz(1.0, 1.0, 0.1), 0.8, 1.25),
        expected: Dichotomy::AmplificationBranch,
    });
    out.push(Fixture {
        name: "lorentz with gain on [0.2, 0.4]".into(),
        spectrum: flip_band(&lorentz(0.5, 0.3, 0.05), 0.2, 0.4),
        expected: Dichotomy::AmplificationBranch,
    });
    out
}

/// `(name, expected, on the grid, on the 2× refined grid)` for every fixture.
pub fn classify_corpus() -> Result<Vec<(String, Dichotomy, Dichotomy, Dichotomy)>, Box<dyn std::error::Error>> {
    let opts = KkOptions::default();
    let mut out = Vec::new();
    for f in corpus() {
        let coarse = audit(&f.spectrum, &opts)?.dichotomy;
        let fine = resample(&f.spectrum, &f.spectrum.grid().refined())?;
        let refined = audit(&fine, &opts)?.dichotomy;
        out.push((f.name, f.expected, coarse, refined));
    }
    Ok(out)
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut misses = 0;
    for (name, expected, coarse, refined) in classify_corpus()? {
        let ok = expected == coarse && coarse == refined;
        misses += usize::from(!ok);
        println!(
            "{:<34} {:<22} refined {:<22} {}",
            name,
            coarse.as_str(),
            refined.as_str(),
            if ok { "ok" } else { "MISMATCH" }
        );
    }

    let opts = KkOptions {
        boundedness_constant: Some(40.0),
        ..KkOptions::default()
    };
    let report = audit(&lorentz(1.0, 1.0, 0.1), &opts)?;
    println!("{}", report.to_json());
    if misses > 0 {
        return Err(format!("{misses} fixtures misclassified").into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

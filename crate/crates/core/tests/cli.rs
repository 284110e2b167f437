use std::path::Path;
use std::process::{Command, Output};

use kkdisp::spectra::{load_spectrum, write_spectrum, SpectrumFormat};
use kkdisp::{lorentz_index, ComplexIndexSpectrum, FrequencyGrid, FrequencyUnit, LorentzOscillatorParams};

fn kkdisp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kkdisp"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn lorentz_file(dir: &Path, name: &str, n: usize) {
    let p = LorentzOscillatorParams::new(1.0, 1.0, 0.1).unwrap();
    let g = FrequencyGrid::log(1e-2, 1e2, n, FrequencyUnit::Normalized).unwrap();
    write_spectrum(&lorentz_index(&p, &g), dir.join(name), SpectrumFormat::from_path(Path::new(name))).unwrap();
}

#[test]
fn help_lists_every_flag() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &[&str]); 6] = [
        (&["transform"], &["--direction", "--in", "--out", "--omega0", "--g0-re", "--g0-im", "--re-inf", "--im-inf", "--no-im-odd"]),
        (&["validate"], &["--in", "--out", "--k0", "--floor"]),
        (&["model", "lorentz"], &["--omega-p", "--omega-res", "--gamma", "--grid", "--unit", "--out"]),
        (&["scharnhorst"], &["--L", "--out", "--alpha", "--lambda-c", "--k-coeff"]),
        (&["clock"], &["--L", "--beta", "--orientation", "--out"]),
        (&[], &["transform", "validate", "model", "scharnhorst", "clock"]),
    ];
    for (sub, flags) in cases {
        let mut args = sub.to_vec();
        args.push("--help");
        let o = kkdisp(dir.path(), &args);
        assert_eq!(code(&o), 0);
        let text = String::from_utf8_lossy(&o.stdout);
        for f in flags {
            assert!(text.contains(f), "{sub:?} help lacks {f}");
        }
    }
}

#[test]
fn unknown_flags_and_values_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&kkdisp(dir.path(), &["clock", "--L", "1e-14", "--beta", "0.1", "--orientation", "perpendicular", "--bogus"])), 2);
    assert_eq!(code(&kkdisp(dir.path(), &["clock", "--L", "1e-14", "--beta", "0.1", "--orientation", "sideways"])), 2);
    assert_eq!(code(&kkdisp(dir.path(), &["clock", "--L", "1e-14", "--beta", "1.0", "--orientation", "parallel"])), 2);
    assert_eq!(code(&kkdisp(dir.path(), &["scharnhorst", "--L", "1e-6,abc"])), 2);
    assert_eq!(code(&kkdisp(dir.path(), &["--k-coeff", "-1", "scharnhorst", "--L", "1e-6"])), 2);
    assert_eq!(code(&kkdisp(dir.path(), &[])), 2);
}

#[test]
fn model_writes_consistent_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let o = kkdisp(
        dir.path(),
        &["model", "lorentz", "--omega-p", "1", "--omega-res", "1", "--gamma", "0.1", "--grid", "log:1e-2:1e2:2048", "--out", "m.json"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let s = load_spectrum(dir.path().join("m.json"), SpectrumFormat::Json).unwrap();
    assert_eq!(s.len(), 2048);
    assert!(kkdisp::roundtrip_residual(&s, &kkdisp::KkOptions::default()).unwrap() < 1e-3);

    let o = kkdisp(dir.path(), &["model", "lorentz", "--omega-p", "1", "--omega-res", "1", "--gamma", "0.1", "--grid", "log:1e-2:1e2:8"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("minimum"));
    let o = kkdisp(dir.path(), &["model", "lorentz", "--omega-p", "1", "--omega-res", "0", "--gamma", "0.1"]);
    assert_eq!(code(&o), 2);
    let o = kkdisp(dir.path(), &["model", "lorentz", "--omega-p", "1", "--omega-res", "1", "--gamma", "0.1", "--grid", "cubic:1:2:30"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn transform_directions() {
    let dir = tempfile::tempdir().unwrap();
    lorentz_file(dir.path(), "l.csv", 1024);
    let ok: [&[&str]; 5] = [
        &["transform", "--direction", "re-from-im", "--in", "l.csv", "--out", "a.csv"],
        &["transform", "--direction", "im-from-re", "--in", "l.csv", "--out", "b.json"],
        &["transform", "--direction", "subtracted", "--in", "l.csv", "--out", "c.csv", "--omega0", "0.5", "--g0-re", "1.1"],
        &["transform", "--direction", "subtracted-at-infinity", "--in", "l.csv", "--out", "d.csv", "--re-inf", "0.95"],
        &["transform", "--direction", "subtracted-at-infinity", "--in", "l.csv", "--out", "e.csv"],
    ];
    for args in ok {
        let o = kkdisp(dir.path(), args);
        assert_eq!(code(&o), 0, "{args:?}: {}", stderr(&o));
    }
    let a = load_spectrum(dir.path().join("a.csv"), SpectrumFormat::Csv).unwrap();
    let e = load_spectrum(dir.path().join("e.csv"), SpectrumFormat::Csv).unwrap();
    assert_eq!(a, e);
    let d = load_spectrum(dir.path().join("d.csv"), SpectrumFormat::Csv).unwrap();
    assert!((a.re()[500] - d.re()[500] - 0.05).abs() < 1e-12);
    assert!(load_spectrum(dir.path().join("b.json"), SpectrumFormat::Json).is_ok());
}

#[test]
fn transform_input_and_numerical_errors() {
    let dir = tempfile::tempdir().unwrap();
    lorentz_file(dir.path(), "l.csv", 256);
    std::fs::write(dir.path().join("bad.csv"), "omega,re_n,im_n\n0.1,1,0\n0.3,1,0\n0.2,1,0\n").unwrap();

    let o = kkdisp(dir.path(), &["transform", "--direction", "re-from-im", "--in", "bad.csv", "--out", "x.csv"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("row 3"), "{}", stderr(&o));

    let o = kkdisp(dir.path(), &["transform", "--direction", "subtracted", "--in", "l.csv", "--out", "x.csv"]);
    assert_eq!(code(&o), 2);
    let o = kkdisp(dir.path(), &["transform", "--direction", "subtracted", "--in", "l.csv", "--out", "x.csv", "--omega0", "500", "--g0-re", "1"]);
    assert_eq!(code(&o), 2);
    let o = kkdisp(dir.path(), &["transform", "--direction", "re-from-im", "--in", "l.csv", "--out", "x.csv", "--no-im-odd"]);
    assert_eq!(code(&o), 2);

    let g = FrequencyGrid::log(1e-2, 1e2, 512, FrequencyUnit::Normalized).unwrap();
    let slow = ComplexIndexSpectrum::from_fn(g, |w| (1.0, 0.1 * w / (1.0 + w * w).powf(0.75))).unwrap();
    write_spectrum(&slow, dir.path().join("slow.csv"), SpectrumFormat::Csv).unwrap();
    let o = kkdisp(dir.path(), &["transform", "--direction", "re-from-im", "--in", "slow.csv", "--out", "x.csv"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("non-integrable tail"), "{}", stderr(&o));
    assert!(!dir.path().join("x.csv").exists());
}

#[test]
fn validate_reports() {
    let dir = tempfile::tempdir().unwrap();
    lorentz_file(dir.path(), "l.csv", 2048);
    let o = kkdisp(dir.path(), &["validate", "--in", "l.csv", "--out", "r.json", "--k0", "20"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["dichotomy"], "consistent_with_unity");
    assert_eq!(v["bounded"]["ok"], false);

    let c = ComplexIndexSpectrum::from_fn(FrequencyGrid::log(1e-2, 1e2, 256, FrequencyUnit::Normalized).unwrap(), |_| (0.9, 0.0)).unwrap();
    write_spectrum(&c, dir.path().join("c.json"), SpectrumFormat::Json).unwrap();
    let o = kkdisp(dir.path(), &["validate", "--in", "c.json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dichotomy"], "superluminal_branch");

    assert_eq!(code(&kkdisp(dir.path(), &["validate", "--in", "l.csv", "--floor", "-1"])), 2);
    assert_eq!(code(&kkdisp(dir.path(), &["validate", "--in", "l.csv", "--k0", "0"])), 2);
    assert_eq!(code(&kkdisp(dir.path(), &["validate", "--in", "nope.csv"])), 2);
}

#[test]
fn scharnhorst_and_clock_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = kkdisp(dir.path(), &["scharnhorst", "--L", "1e-6,1e-15"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "L_m,delta_c_over_c,measurability_ratio,n_perp");
    assert_eq!(data.len(), 3);
    assert!(text.contains("# reported delta_c_over_c at L = 1e-6 m: 1.6e-36"));
    assert!(text.contains("# reported delta_c_over_c at L = 1e-15 m: 1.6e0"));

    let base = kkdisp(dir.path(), &["scharnhorst", "--L", "1e-12"]);
    let o = kkdisp(dir.path(), &["--alpha", "0.01", "scharnhorst", "--L", "1e-12"]);
    assert_eq!(code(&o), 0);
    assert_ne!(o.stdout, base.stdout);

    let o = kkdisp(dir.path(), &["clock", "--L", "1e-14", "--beta", "0.3", "--orientation", "parallel"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["scenario"]["orientation"], "motion_parallel_to_mirrors");
    assert!(v["inconsistency"].as_f64().unwrap() > 0.0);

    let o = kkdisp(dir.path(), &["clock", "--L", "1e-14", "--beta", "0.9", "--orientation", "perpendicular", "--k-coeff", "0"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["inconsistency"].as_f64().unwrap() < 1e-12);

    let o = kkdisp(dir.path(), &["clock", "--L", "1e-14", "--beta", "0.6", "--orientation", "perpendicular"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("bounce ordering"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let runs: Vec<tempfile::TempDir> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
    for d in &runs {
        lorentz_file(d.path(), "l.csv", 512);
        for args in [
            &["transform", "--direction", "re-from-im", "--in", "l.csv", "--out", "t.json"][..],
            &["validate", "--in", "l.csv", "--out", "v.json"],
            &["scharnhorst", "--L", "1e-6,1e-9,1e-15", "--out", "s.csv"],
            &["clock", "--L", "2e-14", "--beta", "0.2", "--orientation", "perpendicular", "--out", "c.json"],
        ] {
            assert_eq!(code(&kkdisp(d.path(), args)), 0, "{args:?}");
        }
    }
    for f in ["t.json", "v.json", "s.csv", "c.json"] {
        assert_eq!(
            std::fs::read(runs[0].path().join(f)).unwrap(),
            std::fs::read(runs[1].path().join(f)).unwrap(),
            "{f}"
        );
    }
}

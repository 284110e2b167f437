//! CSV and JSON spectrum files.
//!
//! CSV: optional `#` comment lines, a `omega,re_n,im_n` header, one sample per line.
//! A comment of the form `# unit: si_rad_per_s` tags the grid unit (default
//! `normalized`). JSON: `{"unit", "omega", "re_n", "im_n"}`.
//!
//! Numbers are written with 17 significant digits, which round-trips every `f64`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ComplexIndexSpectrum, FrequencyGrid, FrequencyUnit, SpectrumError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumFormat {
    Csv,
    Json,
}

impl SpectrumFormat {
    /// `.json` selects JSON, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => SpectrumFormat::Json,
            _ => SpectrumFormat::Csv,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonSpectrum {
    #[serde(default)]
    unit: FrequencyUnit,
    omega: Vec<f64>,
    re_n: Vec<f64>,
    im_n: Vec<f64>,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    re_known: bool,
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

/// Formats a float with 17 significant digits.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn load_spectrum(
    path: impl AsRef<Path>,
    format: SpectrumFormat,
) -> Result<ComplexIndexSpectrum, SpectrumError> {
    let text = std::fs::read_to_string(path)?;
    parse_spectrum(&text, format)
}

pub fn parse_spectrum(text: &str, format: SpectrumFormat) -> Result<ComplexIndexSpectrum, SpectrumError> {
    match format {
        SpectrumFormat::Csv => parse_csv(text),
        SpectrumFormat::Json => parse_json(text),
    }
}

fn parse_json(text: &str) -> Result<ComplexIndexSpectrum, SpectrumError> {
    let raw: JsonSpectrum = serde_json::from_str(text)?;
    let grid = FrequencyGrid::new(raw.omega, raw.unit)?;
    let s = ComplexIndexSpectrum::new(grid, raw.re_n, raw.im_n)?;
    Ok(if raw.re_known { s } else { s.mark_re_unknown() })
}

fn unit_from_comments(text: &str) -> FrequencyUnit {
    text.lines()
        .filter_map(|l| l.trim_start().strip_prefix('#'))
        .filter_map(|c| c.trim().strip_prefix("unit:"))
        .find_map(FrequencyUnit::parse)
        .unwrap_or_default()
}

fn parse_csv(text: &str) -> Result<ComplexIndexSpectrum, SpectrumError> {
    let unit = unit_from_comments(text);
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());

    let header = reader
        .headers()
        .map_err(|e| SpectrumError::Parse {
            row: 0,
            message: e.to_string(),
        })?
        .clone();
    if header.iter().all(|h| h.is_empty()) {
        return Err(SpectrumError::TooFewSamples { found: 0 });
    }
    let cols: Vec<&str> = header.iter().collect();
    if cols != ["omega", "re_n", "im_n"] {
        return Err(SpectrumError::Header {
            found: cols.join(","),
        });
    }

    let (mut omega, mut re, mut im) = (Vec::new(), Vec::new(), Vec::new());
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| SpectrumError::Parse {
            row,
            message: e.to_string(),
        })?;
        if record.len() != 3 {
            return Err(SpectrumError::Parse {
                row,
                message: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let mut vals = [0.0; 3];
        for (slot, (field, name)) in vals
            .iter_mut()
            .zip(record.iter().zip(["omega", "re_n", "im_n"]))
        {
            *slot = field.parse::<f64>().map_err(|_| SpectrumError::Parse {
                row,
                message: format!("non-numeric {name} `{field}`"),
            })?;
        }
        omega.push(vals[0]);
        re.push(vals[1]);
        im.push(vals[2]);
    }
    let grid = FrequencyGrid::new(omega, unit)?;
    ComplexIndexSpectrum::new(grid, re, im)
}

pub fn spectrum_to_string(s: &ComplexIndexSpectrum, format: SpectrumFormat) -> String {
    match format {
        SpectrumFormat::Csv => {
            let mut out = String::new();
            let _ = writeln!(out, "# unit: {}", s.grid().unit().as_str());
            if !s.re_known() {
                out.push_str("# re_n: unknown (placeholder 1)\n");
            }
            out.push_str("omega,re_n,im_n\n");
            for ((w, r), i) in s.omega().iter().zip(s.re()).zip(s.im()) {
                let _ = writeln!(out, "{},{},{}", fmt_f64(*w), fmt_f64(*r), fmt_f64(*i));
            }
            out
        }
        SpectrumFormat::Json => {
            let raw = JsonSpectrum {
                unit: s.grid().unit(),
                omega: s.omega().to_vec(),
                re_n: s.re().to_vec(),
                im_n: s.im().to_vec(),
                re_known: s.re_known(),
            };
            crate::json::to_string(&raw)
        }
    }
}

pub fn write_spectrum(
    s: &ComplexIndexSpectrum,
    path: impl AsRef<Path>,
    format: SpectrumFormat,
) -> Result<(), SpectrumError> {
    std::fs::write(path, spectrum_to_string(s, format))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn three_row_csv() {
        let s = parse_spectrum(
            "omega,re_n,im_n\n1,1.5,0.1\n2,1.4,0.2\n3,1.3,0.1\n",
            SpectrumFormat::Csv,
        )
        .unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.re()[1], 1.4);
        assert_eq!(s.grid().unit(), FrequencyUnit::Normalized);
    }

    #[test]
    fn comments_units_and_scientific_notation() {
        let s = parse_spectrum(
            "# measured\n# unit: si_rad_per_s\nomega,re_n,im_n\n1e14, 1.5, 1E-3\n# mid comment\n2.5e14,1.4,0\n",
            SpectrumFormat::Csv,
        )
        .unwrap();
        assert_eq!(s.grid().unit(), FrequencyUnit::SiRadPerS);
        assert_eq!(s.omega(), &[1e14, 2.5e14]);
        assert_eq!(s.im()[0], 1e-3);
    }

    #[test]
    fn out_of_order_rows() {
        let err = parse_spectrum(
            "omega,re_n,im_n\n2,1.5,0.1\n1,1.4,0.2\n3,1.3,0.1\n",
            SpectrumFormat::Csv,
        )
        .unwrap_err();
        assert_eq!(err.to_string(), "non-monotone grid at row 2");
    }

    #[test]
    fn empty_file() {
        let err = parse_spectrum("", SpectrumFormat::Csv).unwrap_err();
        assert_eq!(err.to_string(), "need ≥ 2 samples (found 0)");
        let err = parse_spectrum("omega,re_n,im_n\n", SpectrumFormat::Csv).unwrap_err();
        assert!(err.to_string().starts_with("need ≥ 2 samples"));
    }

    #[test]
    fn malformed_rows_report_row_number() {
        let err = parse_spectrum("omega,re_n,im_n\n1,1,0\n2,abc,0\n", SpectrumFormat::Csv).unwrap_err();
        assert!(matches!(err, SpectrumError::Parse { row: 2, .. }), "{err}");
        let err = parse_spectrum("omega,re_n,im_n\n1,1,0\n2,1\n", SpectrumFormat::Csv).unwrap_err();
        assert!(matches!(err, SpectrumError::Parse { row: 2, .. }), "{err}");
        let err = parse_spectrum("omega,re_n,im_n\n-1,1,0\n2,1,0\n", SpectrumFormat::Csv).unwrap_err();
        assert_eq!(err.to_string(), "negative frequency at row 1");
        let err = parse_spectrum("w,n,k\n1,1,0\n2,1,0\n", SpectrumFormat::Csv).unwrap_err();
        assert!(matches!(err, SpectrumError::Header { .. }));
    }

    #[test]
    fn json_parse_and_errors() {
        let s = parse_spectrum(
            r#"{"unit":"si_rad_per_s","omega":[1,2],"re_n":[1,1],"im_n":[0,0.5]}"#,
            SpectrumFormat::Json,
        )
        .unwrap();
        assert_eq!(s.grid().unit(), FrequencyUnit::SiRadPerS);
        assert!(parse_spectrum(
            r#"{"unit":"normalized","omega":[2,1],"re_n":[1,1],"im_n":[0,0]}"#,
            SpectrumFormat::Json
        )
        .is_err());
        assert!(parse_spectrum("{", SpectrumFormat::Json).is_err());
    }

    #[test]
    fn placeholder_real_part_survives_json() {
        let g = FrequencyGrid::new(vec![1.0, 2.0], FrequencyUnit::Normalized).unwrap();
        let s = ComplexIndexSpectrum::new(g, vec![1.0; 2], vec![0.1; 2])
            .unwrap()
            .mark_re_unknown();
        let back = parse_spectrum(&spectrum_to_string(&s, SpectrumFormat::Json), SpectrumFormat::Json)
            .unwrap();
        assert!(!back.re_known());
    }

    fn arb_spectrum() -> impl Strategy<Value = ComplexIndexSpectrum> {
        (2usize..40, any::<bool>()).prop_flat_map(|(n, si)| {
            (
                prop::collection::vec(1e-300f64..1e300, n),
                prop::collection::vec(-1e6f64..1e6, n),
                prop::collection::vec(-1e-3f64..1e3, n),
            )
                .prop_map(move |(mut w, re, im)| {
                    w.sort_by(f64::total_cmp);
                    w.dedup();
                    let m = w.len();
                    let unit = if si { FrequencyUnit::SiRadPerS } else { FrequencyUnit::Normalized };
                    let grid = if m >= 2 {
                        FrequencyGrid::new(w, unit).unwrap()
                    } else {
                        FrequencyGrid::new(vec![0.0, 1.0], unit).unwrap()
                    };
                    let k = grid.len();
                    ComplexIndexSpectrum::new(grid, re[..k].to_vec(), im[..k].to_vec()).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn csv_and_json_roundtrip_bit_exactly(s in arb_spectrum()) {
            for format in [SpectrumFormat::Csv, SpectrumFormat::Json] {
                let text = spectrum_to_string(&s, format);
                let back = parse_spectrum(&text, format).unwrap();
                prop_assert_eq!(&back, &s);
                prop_assert_eq!(spectrum_to_string(&back, format), text);
            }
        }
    }
}

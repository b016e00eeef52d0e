//! Text and JSON forms of coefficient series.
//!
//! Text: one `n,re,im` line per coefficient with `n` strictly increasing
//! from 0. Indices that are skipped read as zero, as do trailing indices up
//! to an optional `# degree N` line. Blank lines and other `#` lines are
//! ignored.
//!
//! JSON: `{"degree": N, "coeffs": [[re, im], ...]}`.

use std::fmt::Write as _;
use std::path::Path;

use logbloch_core::{CoefficientSeries, Complex64};
use serde::{Deserialize, Serialize};

use crate::error::{io_at, Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct SeriesJson {
    degree: usize,
    coeffs: Vec<[f64; 2]>,
}

fn format_error(line: usize, reason: impl Into<String>) -> Error {
    Error::SeriesFormat {
        line,
        reason: reason.into(),
    }
}

pub fn parse_text(text: &str) -> Result<CoefficientSeries> {
    let mut coeffs: Vec<Complex64> = Vec::new();
    let mut declared = None;
    let mut last: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(d) = comment.trim().strip_prefix("degree") {
                let d = d.trim_start_matches([':', ' ', '=']).trim();
                declared = Some(d.parse::<usize>().map_err(|e| format_error(line_no, e.to_string()))?);
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(format_error(line_no, "expected `n,re,im`"));
        }
        let n: usize = fields[0]
            .parse()
            .map_err(|_| format_error(line_no, format!("bad index `{}`", fields[0])))?;
        if last.is_some_and(|p| n <= p) {
            return Err(format_error(line_no, "indices must be strictly increasing"));
        }
        let part = |s: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| format_error(line_no, format!("bad number `{s}`")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format_error(line_no, "coefficient is not finite"))
            }
        };
        let c = Complex64::new(part(fields[1])?, part(fields[2])?);
        coeffs.resize(n, Complex64::new(0.0, 0.0));
        coeffs.push(c);
        last = Some(n);
    }
    if let Some(d) = declared {
        if d + 1 < coeffs.len() {
            return Err(format_error(0, format!("index beyond declared degree {d}")));
        }
        coeffs.resize(d + 1, Complex64::new(0.0, 0.0));
    }
    if coeffs.is_empty() {
        return Err(format_error(0, "no coefficients"));
    }
    Ok(CoefficientSeries::new(coeffs)?)
}

/// Every coefficient on its own line, shortest round-trip formatting.
pub fn to_text(f: &CoefficientSeries) -> String {
    let mut out = String::with_capacity(24 * (f.degree() + 1));
    for (n, c) in f.coeffs().iter().enumerate() {
        let _ = writeln!(out, "{n},{},{}", c.re, c.im);
    }
    out
}

pub fn parse_json(text: &str) -> Result<CoefficientSeries> {
    let doc: SeriesJson = serde_json::from_str(text)?;
    if doc.coeffs.len() > doc.degree + 1 {
        return Err(format_error(0, "more coefficients than degree + 1"));
    }
    let mut coeffs: Vec<Complex64> = doc.coeffs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
    coeffs.resize(doc.degree + 1, Complex64::new(0.0, 0.0));
    Ok(CoefficientSeries::new(coeffs)?)
}

pub fn to_json(f: &CoefficientSeries) -> String {
    let doc = SeriesJson {
        degree: f.degree(),
        coeffs: f.coeffs().iter().map(|c| [c.re, c.im]).collect(),
    };
    serde_json::to_string(&doc).expect("finite coefficients serialize")
}

/// Reads either form; JSON is recognised by a leading `{`.
pub fn read_series(path: &Path) -> Result<CoefficientSeries> {
    let text = std::fs::read_to_string(path).map_err(io_at(path))?;
    if text.trim_start().starts_with('{') {
        parse_json(&text)
    } else {
        parse_text(&text)
    }
}

/// Writes JSON when the extension is `.json`, text otherwise.
pub fn write_series(path: &Path, f: &CoefficientSeries) -> Result<()> {
    let body = if path.extension().is_some_and(|e| e == "json") {
        to_json(f)
    } else {
        to_text(f)
    };
    std::fs::write(path, body).map_err(io_at(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaps_and_declared_degree_fill_with_zeros() {
        let f = parse_text("# degree 4\n0,1,0\n\n2,0.5,-1\n").unwrap();
        assert_eq!(f.degree(), 4);
        assert_eq!(f.coeff(1), Complex64::new(0.0, 0.0));
        assert_eq!(f.coeff(2), Complex64::new(0.5, -1.0));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(parse_text("0,1,0\n0,2,0"), Err(Error::SeriesFormat { line: 2, .. })));
        assert!(matches!(parse_text("0,1"), Err(Error::SeriesFormat { line: 1, .. })));
        assert!(matches!(parse_text("0,nan,0"), Err(Error::SeriesFormat { line: 1, .. })));
        assert!(parse_text("# nothing\n").is_err());
    }

    #[test]
    fn text_and_json_round_trip_exactly() {
        let f = CoefficientSeries::from_fn(20, |n| Complex64::new(1.0 / (n as f64 + 3.0), (n as f64).sin())).unwrap();
        assert_eq!(parse_text(&to_text(&f)).unwrap(), f);
        assert_eq!(parse_json(&to_json(&f)).unwrap(), f);
        let short = parse_json(r#"{"degree": 3, "coeffs": [[1, 0]]}"#).unwrap();
        assert_eq!(short.degree(), 3);
    }
}

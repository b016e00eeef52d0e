//! Ratio reports, pass rules and their JSON/CSV emission.

use std::cmp::Ordering;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{io_at, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub degree: usize,
    pub count: usize,
    pub ratio_min: f64,
    pub ratio_median: f64,
    pub ratio_max: f64,
}

impl DegreeStats {
    /// `None` when no ratio survived.
    pub fn from_ratios(degree: usize, ratios: &[f64]) -> Option<Self> {
        if ratios.is_empty() {
            return None;
        }
        let mut v = ratios.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        };
        Some(Self {
            degree,
            count: n,
            ratio_min: v[0],
            ratio_median: median,
            ratio_max: v[n - 1],
        })
    }

    pub fn width(&self) -> f64 {
        self.ratio_max / self.ratio_min
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub theorem_tag: String,
    pub variant: String,
    pub alpha: Option<f64>,
    pub degrees: Vec<usize>,
    pub stats: Vec<DegreeStats>,
    pub pass: bool,
    pub rule: String,
    pub notes: String,
}

/// How a ratio distribution is judged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PassRule {
    /// `max/min` at the top degree is at most `factor` times the same at
    /// the next lower degree.
    DoublingBand { factor: f64 },
    /// `max` at the top degree is at most `factor` times the same at the
    /// next lower degree.
    BoundedAbove { factor: f64 },
    /// `max/min` over every degree at most `band`.
    AbsoluteBand { band: f64 },
    /// Every ratio is at least `1 - tol`.
    AtLeastOne { tol: f64 },
    /// Every ratio within `tol` of 1.
    NearOne { tol: f64 },
    /// Top-degree max over lowest-degree max at least `factor`.
    Growth { factor: f64 },
}

impl PassRule {
    pub fn describe(&self) -> String {
        match self {
            PassRule::DoublingBand { factor } => {
                format!("band width at top degree <= {factor} x width at half degree")
            }
            PassRule::BoundedAbove { factor } => {
                format!("max ratio at top degree <= {factor} x max at half degree")
            }
            PassRule::AbsoluteBand { band } => format!("max/min over all ratios <= {band}"),
            PassRule::AtLeastOne { tol } => format!("every ratio >= 1 - {tol:e}"),
            PassRule::NearOne { tol } => format!("every |ratio - 1| <= {tol:e}"),
            PassRule::Growth { factor } => {
                format!("max ratio grows by >= {factor} x from lowest to top degree")
            }
        }
    }

    /// Verdict and an explanatory note.
    pub fn judge(&self, stats: &[DegreeStats]) -> (bool, String) {
        if stats.is_empty() {
            return (false, String::from("no ratios"));
        }
        let top = &stats[stats.len() - 1];
        let prev = (stats.len() >= 2).then(|| &stats[stats.len() - 2]);
        match *self {
            PassRule::DoublingBand { factor } => match prev {
                Some(p) => {
                    let (w1, w0) = (top.width(), p.width());
                    (w1 <= factor * w0, format!("width {} vs {}", fmt_sig(w1), fmt_sig(w0)))
                }
                None => (true, String::from("single degree; doubling rule vacuous")),
            },
            PassRule::BoundedAbove { factor } => match prev {
                Some(p) => (
                    top.ratio_max <= factor * p.ratio_max,
                    format!("max {} vs {}", fmt_sig(top.ratio_max), fmt_sig(p.ratio_max)),
                ),
                None => (true, String::from("single degree; doubling rule vacuous")),
            },
            PassRule::AbsoluteBand { band } => {
                let hi = stats.iter().map(|s| s.ratio_max).fold(0.0, f64::max);
                let lo = stats.iter().map(|s| s.ratio_min).fold(f64::INFINITY, f64::min);
                (hi / lo <= band, format!("max/min {}", fmt_sig(hi / lo)))
            }
            PassRule::AtLeastOne { tol } => {
                let lo = stats.iter().map(|s| s.ratio_min).fold(f64::INFINITY, f64::min);
                (lo >= 1.0 - tol, format!("min ratio {}", fmt_sig(lo)))
            }
            PassRule::NearOne { tol } => {
                let dev = stats
                    .iter()
                    .map(|s| (s.ratio_min - 1.0).abs().max((s.ratio_max - 1.0).abs()))
                    .fold(0.0, f64::max);
                (dev <= tol, format!("max |ratio - 1| {}", fmt_sig(dev)))
            }
            PassRule::Growth { factor } => {
                let g = top.ratio_max / stats[0].ratio_max;
                (g >= factor, format!("growth {}", fmt_sig(g)))
            }
        }
    }
}

/// Divergence demo output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub alpha: f64,
    pub eps: f64,
    pub rows: Vec<DivergenceRow>,
    pub strictly_increasing: bool,
    /// Last over first Libera value.
    pub growth: f64,
    /// Max over min frame norm.
    pub frame_band: f64,
    pub pass: bool,
    pub notes: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceRow {
    pub m: u32,
    pub r: f64,
    pub degree: usize,
    pub libera_at_zero: f64,
    pub frame_norm_b1: f64,
}

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub fn fmt_sig(x: f64) -> String {
    format!("{x:.11e}")
}

fn rounded(r: &EquivalenceReport) -> EquivalenceReport {
    let mut r = r.clone();
    r.alpha = r.alpha.map(round_sig);
    for s in &mut r.stats {
        s.ratio_min = round_sig(s.ratio_min);
        s.ratio_median = round_sig(s.ratio_median);
        s.ratio_max = round_sig(s.ratio_max);
    }
    r
}

pub fn rounded_divergence(d: &DivergenceReport) -> DivergenceReport {
    let mut d = d.clone();
    for row in &mut d.rows {
        row.r = round_sig(row.r);
        row.libera_at_zero = round_sig(row.libera_at_zero);
        row.frame_norm_b1 = round_sig(row.frame_norm_b1);
    }
    d.growth = round_sig(d.growth);
    d.frame_band = round_sig(d.frame_band);
    d
}

/// Sorts by tag, variant and `α`.
pub fn sort_reports(reports: &mut [EquivalenceReport]) {
    reports.sort_by(|a, b| {
        a.theorem_tag
            .cmp(&b.theorem_tag)
            .then_with(|| a.variant.cmp(&b.variant))
            .then_with(|| match (a.alpha, b.alpha) {
                (Some(x), Some(y)) => x.total_cmp(&y),
                (None, None) => Ordering::Equal,
                (None, Some(_)) => Ordering::Less,
                (Some(_), None) => Ordering::Greater,
            })
    });
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
        }
    }
}

pub const CSV_HEADER: [&str; 12] = [
    "theorem_tag",
    "variant",
    "alpha",
    "degree",
    "count",
    "ratio_min",
    "ratio_median",
    "ratio_max",
    "pass",
    "rule",
    "notes",
    "degrees",
];

pub fn reports_to_json(reports: &[EquivalenceReport]) -> Result<String> {
    let rounded: Vec<EquivalenceReport> = reports.iter().map(rounded).collect();
    let mut s = serde_json::to_string_pretty(&rounded)?;
    s.push('\n');
    Ok(s)
}

/// One row per report and degree; a report with no statistics still gets a
/// row with empty numeric fields.
pub fn reports_to_csv(reports: &[EquivalenceReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Config(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in reports {
        let alpha = r.alpha.map(fmt_sig).unwrap_or_default();
        let degrees = r
            .degrees
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let pass = r.pass.to_string();
        let mut rows: Vec<[String; 5]> = r
            .stats
            .iter()
            .map(|s| {
                [
                    s.degree.to_string(),
                    s.count.to_string(),
                    fmt_sig(s.ratio_min),
                    fmt_sig(s.ratio_median),
                    fmt_sig(s.ratio_max),
                ]
            })
            .collect();
        if rows.is_empty() {
            rows.push(Default::default());
        }
        for row in rows {
            let [degree, count, lo, med, hi] = row;
            w.write_record([
                r.theorem_tag.as_str(),
                r.variant.as_str(),
                &alpha,
                &degree,
                &count,
                &lo,
                &med,
                &hi,
                &pass,
                &r.rule,
                &r.notes,
                &degrees,
            ])
            .map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes `reports` to `path` in `format`.
pub fn emit_report(reports: &[EquivalenceReport], format: ReportFormat, path: &Path) -> Result<()> {
    let text = match format {
        ReportFormat::Json => reports_to_json(reports)?,
        ReportFormat::Csv => reports_to_csv(reports)?,
    };
    std::fs::write(path, text).map_err(io_at(path))
}

pub fn emit_divergence(report: &DivergenceReport, format: ReportFormat, path: &Path) -> Result<()> {
    let d = rounded_divergence(report);
    let text = match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&d)?;
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let mut s = String::from("m,r,degree,libera_at_zero,frame_norm_b1\n");
            for row in &d.rows {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.m,
                    fmt_sig(row.r),
                    row.degree,
                    fmt_sig(row.libera_at_zero),
                    fmt_sig(row.frame_norm_b1)
                ));
            }
            s
        }
    };
    std::fs::write(path, text).map_err(io_at(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> EquivalenceReport {
        EquivalenceReport {
            theorem_tag: String::from("thm1"),
            variant: String::from("s_alpha"),
            alpha: Some(-0.5),
            degrees: vec![1023, 2047],
            stats: vec![
                DegreeStats::from_ratios(1023, &[0.5, 1.0 / 3.0, 0.75]).unwrap(),
                DegreeStats::from_ratios(2047, &[0.5, 0.7]).unwrap(),
            ],
            pass: true,
            rule: PassRule::DoublingBand { factor: 1.2 }.describe(),
            notes: String::from("a, \"quoted\" note"),
        }
    }

    #[test]
    fn stats_are_ordered() {
        let s = DegreeStats::from_ratios(7, &[3.0, 1.0, 2.0, 10.0]).unwrap();
        assert_eq!((s.ratio_min, s.ratio_median, s.ratio_max), (1.0, 2.5, 10.0));
        assert!(DegreeStats::from_ratios(7, &[]).is_none());
    }

    #[test]
    fn rules_judge_as_documented() {
        let s = sample().stats;
        assert!(PassRule::DoublingBand { factor: 1.2 }.judge(&s).0);
        assert!(!PassRule::DoublingBand { factor: 0.5 }.judge(&s).0);
        assert!(!PassRule::AbsoluteBand { band: 2.0 }.judge(&s).0);
        assert!(PassRule::AbsoluteBand { band: 2.5 }.judge(&s).0);
        assert!(!PassRule::AtLeastOne { tol: 1e-9 }.judge(&s).0);
        assert!(!PassRule::Growth { factor: 10.0 }.judge(&s).0);
        assert!(PassRule::BoundedAbove { factor: 1.0 }.judge(&s).0);
        assert!(!PassRule::NearOne { tol: 1e-3 }.judge(&s).0);
        assert!(!PassRule::AtLeastOne { tol: 0.0 }.judge(&[]).0);
    }

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(fmt_sig(1234.5), "1.23450000000e3");
    }

    #[test]
    fn json_round_trips() {
        let text = reports_to_json(&[sample()]).unwrap();
        let back: Vec<EquivalenceReport> = serde_json::from_str(&text).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].stats[0].ratio_min, 0.333333333333);
        assert_eq!(back[0].notes, sample().notes);
        assert_eq!(reports_to_json(&[]).unwrap(), "[]\n");
    }

    #[test]
    fn csv_has_header_and_quoting() {
        assert_eq!(reports_to_csv(&[]).unwrap().lines().count(), 1);
        let text = reports_to_csv(&[sample()]).unwrap();
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 2);
        assert_eq!(&rows[0][10], "a, \"quoted\" note");
        assert_eq!(&rows[1][3], "2047");
    }

    #[test]
    fn emit_reports_path_on_failure() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("missing").join("r.json");
        let err = emit_report(&[], ReportFormat::Json, &bad).unwrap_err();
        assert!(err.to_string().contains("missing"));
        let ok = dir.path().join("r.csv");
        emit_report(&[sample()], ReportFormat::Csv, &ok).unwrap();
        assert!(std::fs::read_to_string(ok).unwrap().starts_with("theorem_tag,"));
    }
}

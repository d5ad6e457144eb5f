use std::cmp::Ordering;
use std::fmt::Write as _;

use super::experiment::ExperimentResult;
use crate::emolex::EmotionMode;
use crate::error::{Error, Result};
use crate::preprocess::Pipeline;

pub const REPORT_HEADER: [&str; 8] = [
    "dataset",
    "pipeline",
    "emotion_mode",
    "snippet_count",
    "seed",
    "f1_ce",
    "f1_e",
    "delta",
];

/// One line of a results table. Failed cells carry no scores.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub dataset: String,
    pub pipeline: String,
    pub emotion_mode: String,
    pub snippet_count: usize,
    pub seed: u64,
    /// `(f1_ce, f1_e)`.
    pub scores: Option<(f64, f64)>,
    /// Why the cell failed; not part of the CSV.
    pub error: Option<String>,
}

impl ReportRow {
    pub fn failed(
        dataset: &str,
        pipeline: &Pipeline,
        emotion_mode: EmotionMode,
        snippet_count: usize,
        seed: u64,
        error: String,
    ) -> Self {
        ReportRow {
            dataset: dataset.to_string(),
            pipeline: pipeline.to_string(),
            emotion_mode: emotion_mode.to_string(),
            snippet_count,
            seed,
            scores: None,
            error: Some(error),
        }
    }

    pub fn delta(&self) -> Option<f64> {
        self.scores.map(|(ce, e)| ce - e)
    }

    pub fn is_failed(&self) -> bool {
        self.scores.is_none()
    }
}

impl From<&ExperimentResult> for ReportRow {
    fn from(r: &ExperimentResult) -> Self {
        ReportRow {
            dataset: r.dataset.clone(),
            pipeline: r.pipeline.to_string(),
            emotion_mode: r.emotion_mode.to_string(),
            snippet_count: r.snippet_count,
            seed: r.seed,
            scores: Some((r.score_ce, r.score_e)),
            error: None,
        }
    }
}

/// Scores are printed with four decimals; the delta column is the
/// difference of the printed scores so the columns add up exactly.
fn ten_thousandths(x: f64) -> i64 {
    (x * 10_000.0).round() as i64
}

fn fixed4(units: i64) -> String {
    let sign = if units < 0 { "-" } else { "" };
    let abs = units.unsigned_abs();
    format!("{sign}{}.{:04}", abs / 10_000, abs % 10_000)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn new(rows: Vec<ReportRow>) -> Self {
        Report { rows }
    }

    pub fn has_failures(&self) -> bool {
        self.rows.iter().any(ReportRow::is_failed)
    }

    /// Delta descending, then f1_ce descending; failed rows last.
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| match (a.scores, b.scores) {
            (Some((ce_a, e_a)), Some((ce_b, e_b))) => (ce_b - e_b)
                .total_cmp(&(ce_a - e_a))
                .then(ce_b.total_cmp(&ce_a)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        });
    }

    fn fields(row: &ReportRow) -> [String; 8] {
        let (ce, e, d) = match row.scores {
            Some((ce, e)) => {
                let (ce, e) = (ten_thousandths(ce), ten_thousandths(e));
                (fixed4(ce), fixed4(e), fixed4(ce - e))
            }
            None => Default::default(),
        };
        [
            row.dataset.clone(),
            row.pipeline.clone(),
            row.emotion_mode.clone(),
            row.snippet_count.to_string(),
            row.seed.to_string(),
            ce,
            e,
            d,
        ]
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| Error::Report(e.to_string());
        w.write_record(REPORT_HEADER).map_err(err)?;
        for row in &self.rows {
            w.write_record(Self::fields(row)).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Report(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Report(e.to_string()))
    }

    /// Parse a CSV report, checking `delta == f1_ce - f1_e` on every row.
    pub fn from_csv(text: &str) -> Result<Report> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r.headers().map_err(|e| Error::Report(e.to_string()))?;
        if header.iter().ne(REPORT_HEADER) {
            return Err(Error::Report(format!("unexpected header {header:?}")));
        }
        let mut rows = Vec::new();
        for (i, record) in r.records().enumerate() {
            let line = i + 2;
            let record = record.map_err(|e| Error::Report(e.to_string()))?;
            let bad = |what: &str| Error::Report(format!("line {line}: bad {what}"));
            let num = |idx: usize, what: &str| -> Result<Option<f64>> {
                match &record[idx] {
                    "" => Ok(None),
                    s => s.parse().map(Some).map_err(|_| bad(what)),
                }
            };
            let scores = match (num(5, "f1_ce")?, num(6, "f1_e")?, num(7, "delta")?) {
                (Some(ce), Some(e), Some(d)) => {
                    if ten_thousandths(ce) - ten_thousandths(e) != ten_thousandths(d) {
                        return Err(Error::Report(format!(
                            "line {line}: delta {d} does not equal {ce} - {e}"
                        )));
                    }
                    Some((ce, e))
                }
                (None, None, None) => None,
                _ => return Err(bad("score columns (all or none must be present)")),
            };
            rows.push(ReportRow {
                dataset: record[0].to_string(),
                pipeline: record[1].to_string(),
                emotion_mode: record[2].to_string(),
                snippet_count: record[3].parse().map_err(|_| bad("snippet_count"))?,
                seed: record[4].parse().map_err(|_| bad("seed"))?,
                scores,
                error: None,
            });
        }
        Ok(Report { rows })
    }

    /// Space-aligned table for terminals; failed cells show their error.
    pub fn to_text(&self) -> String {
        let mut table: Vec<Vec<String>> =
            vec![REPORT_HEADER.iter().map(|s| s.to_string()).collect()];
        for row in &self.rows {
            let mut fields = Self::fields(row).to_vec();
            if let Some(err) = &row.error {
                fields[5] = "FAILED".into();
                fields[6] = err.clone();
            }
            table.push(fields);
        }
        let widths: Vec<usize> = (0..REPORT_HEADER.len())
            .map(|c| {
                table
                    .iter()
                    .map(|r| r[c].chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        for row in &table {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(f, &w)| format!("{f:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        out
    }
}

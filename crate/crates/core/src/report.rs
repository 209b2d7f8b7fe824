//! Report records and renderings. JSON is the canonical format; CSV and
//! markdown are renderings of the same record set. Rows are sorted by
//! (doc_id, task, method) and metric cells without a value render as `/`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Genre, LengthClass};
use crate::error::{Error, Result};
use crate::eval::{ConfusionCounts, NerReport, SrlReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(Error::validation(format!(
                "unknown report format `{other}` (expected json|csv|markdown)"
            ))),
        }
    }
}

/// One (document, method) row with the metric columns of its task family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub doc_id: String,
    pub genre: Option<Genre>,
    pub length_class: Option<LengthClass>,
    pub method: String,
    pub task: String,
    pub accuracy: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    #[serde(default)]
    pub rigid_accuracy: Option<f64>,
    #[serde(default)]
    pub predicate_accuracy: Option<f64>,
    #[serde(default)]
    pub argument_accuracy: Option<f64>,
    #[serde(default)]
    pub counts: Option<ConfusionCounts>,
}

impl ReportRow {
    pub fn from_ner(
        doc_id: &str,
        genre: Option<Genre>,
        length_class: Option<LengthClass>,
        method: &str,
        report: &NerReport,
        counts: ConfusionCounts,
    ) -> Self {
        ReportRow {
            doc_id: doc_id.to_string(),
            genre,
            length_class,
            method: method.to_string(),
            task: "ner".to_string(),
            accuracy: report.accuracy,
            precision: Some(report.precision),
            recall: Some(report.recall),
            f1: Some(report.f1),
            rigid_accuracy: None,
            predicate_accuracy: None,
            argument_accuracy: None,
            counts: Some(counts),
        }
    }

    pub fn from_srl(
        doc_id: &str,
        genre: Option<Genre>,
        length_class: Option<LengthClass>,
        method: &str,
        report: &SrlReport,
    ) -> Self {
        ReportRow {
            doc_id: doc_id.to_string(),
            genre,
            length_class,
            method: method.to_string(),
            task: "srl".to_string(),
            accuracy: Some(report.rigid_accuracy),
            precision: Some(report.overall.precision),
            recall: Some(report.overall.recall),
            f1: Some(report.overall.f1),
            rigid_accuracy: Some(report.rigid_accuracy),
            predicate_accuracy: Some(report.predicate_accuracy),
            argument_accuracy: Some(report.argument_accuracy),
            counts: Some(report.overall.counts),
        }
    }
}

/// A report: optional generation timestamp plus sorted rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// Unix seconds; suppressed (None) for byte-identical reruns.
    pub generated_at: Option<u64>,
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn new(mut rows: Vec<ReportRow>, with_timestamp: bool) -> Self {
        rows.sort_by(|a, b| {
            (&a.doc_id, &a.task, &a.method).cmp(&(&b.doc_id, &b.task, &b.method))
        });
        let generated_at = with_timestamp.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        Report { generated_at, rows }
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => {
                let mut out =
                    serde_json::to_string_pretty(self).expect("plain struct serializes");
                out.push('\n');
                out
            }
            ReportFormat::Csv => self.render_table(",", false),
            ReportFormat::Markdown => self.render_table(" | ", true),
        }
    }

    fn render_table(&self, sep: &str, markdown: bool) -> String {
        const COLUMNS: [&str; 12] = [
            "doc_id",
            "genre",
            "length",
            "method",
            "task",
            "accuracy",
            "precision",
            "recall",
            "f1",
            "rigid_accuracy",
            "predicate_accuracy",
            "argument_accuracy",
        ];
        let mut out = String::new();
        if let Some(ts) = self.generated_at {
            out.push_str(&format!("# generated_at: {ts}\n"));
        }
        let (open, close) = if markdown { ("| ", " |") } else { ("", "") };
        out.push_str(&format!("{open}{}{close}\n", COLUMNS.join(sep)));
        if markdown {
            out.push_str(&format!(
                "{open}{}{close}\n",
                COLUMNS.map(|_| "---").join(sep)
            ));
        }
        for row in &self.rows {
            let cells = [
                row.doc_id.clone(),
                row.genre.map(|g| g.to_string()).unwrap_or_else(cell_na),
                row.length_class
                    .map(|l| l.to_string())
                    .unwrap_or_else(cell_na),
                row.method.clone(),
                row.task.clone(),
                metric_cell(row.accuracy),
                metric_cell(row.precision),
                metric_cell(row.recall),
                metric_cell(row.f1),
                metric_cell(row.rigid_accuracy),
                metric_cell(row.predicate_accuracy),
                metric_cell(row.argument_accuracy),
            ];
            out.push_str(&format!("{open}{}{close}\n", cells.join(sep)));
        }
        out
    }
}

fn cell_na() -> String {
    "/".to_string()
}

fn metric_cell(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.4}"),
        None => cell_na(),
    }
}

pub fn parse_report_json(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(Error::Json)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_rows() -> Vec<ReportRow> {
        vec![
            ReportRow {
                doc_id: "b".to_string(),
                genre: Some(Genre::Domain),
                length_class: Some(LengthClass::Long),
                method: "symbolic".to_string(),
                task: "ner".to_string(),
                accuracy: None,
                precision: Some(0.0),
                recall: Some(0.0),
                f1: Some(0.0),
                rigid_accuracy: None,
                predicate_accuracy: None,
                argument_accuracy: None,
                counts: None,
            },
            ReportRow {
                doc_id: "a".to_string(),
                genre: Some(Genre::Generic),
                length_class: Some(LengthClass::Short),
                method: "symbolic".to_string(),
                task: "ner".to_string(),
                accuracy: Some(0.52),
                precision: Some(0.5114),
                recall: Some(0.9),
                f1: Some(0.6522),
                rigid_accuracy: None,
                predicate_accuracy: None,
                argument_accuracy: None,
                counts: None,
            },
        ]
    }

    #[test]
    fn rows_are_sorted_by_doc_id() {
        let report = Report::new(sample_rows(), false);
        assert_eq!(report.rows[0].doc_id, "a");
        assert_eq!(report.rows[1].doc_id, "b");
    }

    #[test]
    fn missing_accuracy_renders_as_slash() {
        let report = Report::new(sample_rows(), false);
        let csv = report.render(ReportFormat::Csv);
        let row_b = csv.lines().nth(2).unwrap();
        assert!(row_b.starts_with("b,domain,long,symbolic,ner,/"), "{row_b}");
    }

    #[test]
    fn json_round_trips() {
        let report = Report::new(sample_rows(), false);
        let text = report.render(ReportFormat::Json);
        let parsed = parse_report_json(&text).unwrap();
        assert_eq!(parsed, report);
    }

    #[test]
    fn suppressed_timestamp_renders_identically() {
        let report = Report::new(sample_rows(), false);
        assert_eq!(
            report.render(ReportFormat::Markdown),
            report.render(ReportFormat::Markdown)
        );
        assert_eq!(report.generated_at, None);
        let stamped = Report::new(sample_rows(), true);
        assert!(stamped.generated_at.is_some());
    }

    #[test]
    fn markdown_has_header_separator() {
        let report = Report::new(sample_rows(), false);
        let md = report.render(ReportFormat::Markdown);
        let second = md.lines().nth(1).unwrap();
        assert!(second.contains("---"));
    }
}

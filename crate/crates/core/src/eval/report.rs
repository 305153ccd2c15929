use std::io::{self, Write};

use serde::Serialize;

use super::{ClassifierKind, Representation, RunResult};

/// Row label in the results table, e.g. `FDA-Topics+A`.
pub fn model_name(classifier: ClassifierKind, representation: Representation, affect: bool) -> String {
    let clf = match classifier {
        ClassifierKind::FdaKnn => "FDA",
        ClassifierKind::Svm => "SVMs",
    };
    let repr = match representation {
        Representation::Text => "Text",
        Representation::Topics => "Topics",
    };
    format!("{clf}-{repr}{}", if affect { "+A" } else { "" })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub model: String,
    /// One entry per dataset, in `ResultsTable::datasets` order.
    pub results: Vec<RunResult>,
}

/// Models by datasets, each cell a precision/recall/accuracy triple.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ResultsTable {
    pub datasets: Vec<String>,
    pub rows: Vec<ResultRow>,
}

impl ResultsTable {
    pub fn new(datasets: Vec<String>) -> Self {
        ResultsTable { datasets, rows: vec![] }
    }

    pub fn push(&mut self, model: String, results: Vec<RunResult>) {
        assert_eq!(results.len(), self.datasets.len());
        self.rows.push(ResultRow { model, results });
    }

    /// Comma-separated, two header rows, two decimals.
    pub fn write_table<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "Model")?;
        for d in &self.datasets {
            write!(out, ",{d},,")?;
        }
        writeln!(out)?;
        for _ in &self.datasets {
            write!(out, ",Prec,Recall,Acc")?;
        }
        writeln!(out)?;
        for row in &self.rows {
            write!(out, "{}", row.model)?;
            for r in &row.results {
                write!(
                    out,
                    ",{:.2},{:.2},{:.2}",
                    r.mean.precision, r.mean.recall, r.mean.accuracy
                )?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// Full-precision JSON with per-run metrics and confusion counts.
    pub fn write_sidecar<W: Write>(&self, mut out: W) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)
    }
}

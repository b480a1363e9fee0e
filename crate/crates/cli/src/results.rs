//! Versioned result CSV and plot-ready long format.

use std::io::{BufRead, BufReader, Read, Write};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

pub const RESULTS_SCHEMA: &str = "# schema: hgpprep-results/1";
pub const PLOT_SCHEMA: &str = "# schema: hgpprep-plot/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub run_id: String,
    pub code_id: String,
    /// `protocol` or `baseline`.
    pub kind: String,
    pub thickening: String,
    pub experiment: String,
    pub p: f64,
    pub trials: u64,
    pub failures_x: u64,
    pub failures_z: u64,
    pub failures: u64,
    pub rate: f64,
    pub stderr: f64,
    pub wall_ms: u64,
}

const RESULT_COLUMNS: [&str; 13] = [
    "run_id",
    "code_id",
    "kind",
    "thickening",
    "experiment",
    "p",
    "trials",
    "failures_x",
    "failures_z",
    "failures",
    "rate",
    "stderr",
    "wall_ms",
];

/// Streams rows under a schema line and a header.
pub struct ResultWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> ResultWriter<W> {
    pub fn new(mut w: W) -> Result<Self> {
        writeln!(w, "{RESULTS_SCHEMA}")?;
        let mut inner = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        inner.write_record(RESULT_COLUMNS)?;
        inner.flush()?;
        Ok(Self { inner })
    }

    pub fn push(&mut self, row: &ResultRow) -> Result<()> {
        self.inner.serialize(row)?;
        self.inner.flush()?;
        Ok(())
    }
}

fn read_schema(reader: &mut impl BufRead, expected: &str) -> Result<()> {
    let mut first = String::new();
    reader.read_line(&mut first)?;
    let first = first.trim_end();
    if first != expected {
        bail!("unsupported schema line {first:?} (expected {expected:?})");
    }
    Ok(())
}

pub fn read_results(r: impl Read) -> Result<Vec<ResultRow>> {
    let mut reader = BufReader::new(r);
    read_schema(&mut reader, RESULTS_SCHEMA)?;
    let mut csv = csv::Reader::from_reader(reader);
    let mut rows = Vec::new();
    for (i, rec) in csv.deserialize().enumerate() {
        rows.push(rec.with_context(|| format!("result row {}", i + 1))?);
    }
    Ok(rows)
}

/// Grouping of plot series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Grouping {
    /// One series per (code, kind, thickening): rate against p for each thickness.
    Thickening,
    /// One series per (kind, thickening, code): rate against p for each code size.
    Code,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotRow {
    pub series: String,
    pub code_id: String,
    pub kind: String,
    pub thickening: String,
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    pub stderr: f64,
}

/// Long-format series sorted by series label, then `p`.
pub fn plot_rows(rows: &[ResultRow], grouping: Grouping) -> Vec<PlotRow> {
    let mut out: Vec<PlotRow> = rows
        .iter()
        .map(|r| {
            let series = match grouping {
                Grouping::Thickening => format!("{}|{}|{}", r.code_id, r.kind, r.thickening),
                Grouping::Code => format!("{}|{}|{}", r.kind, r.thickening, r.code_id),
            };
            PlotRow {
                series,
                code_id: r.code_id.clone(),
                kind: r.kind.clone(),
                thickening: r.thickening.clone(),
                p: r.p,
                trials: r.trials,
                failures: r.failures,
                rate: r.rate,
                stderr: r.stderr,
            }
        })
        .collect();
    out.sort_by(|a, b| a.series.cmp(&b.series).then(a.p.total_cmp(&b.p)));
    out
}

pub fn write_plot(rows: &[PlotRow], mut w: impl Write) -> Result<()> {
    writeln!(w, "{PLOT_SCHEMA}")?;
    let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    csv.write_record(["series", "code_id", "kind", "thickening", "p", "trials", "failures", "rate", "stderr"])?;
    for r in rows {
        csv.serialize(r)?;
    }
    csv.flush()?;
    Ok(())
}

//! CSV writers and readers for waypoints, convergence traces, cost
//! breakdowns, run records and benchmark summaries.
//!
//! Floats are written with fixed formatting so identical inputs always give
//! identical bytes. Infinite values are written as `inf`, undefined ones as
//! `NA`.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path as FsPath;

use thiserror::Error;

use crate::cost::{CostBreakdown, CostError, Path};
use crate::geometry::Point3;
use crate::optimizers::EvolutionTrace;
use crate::stats::Verdict;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error(transparent)]
    Path(#[from] CostError),
}

fn io_err(path: &FsPath) -> impl FnOnce(io::Error) -> ExportError + '_ {
    move |source| ExportError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Fixed-precision float, `inf`/`-inf` for infinities and `NA` for NaN.
pub fn format_float(x: f64, decimals: usize) -> String {
    if x.is_nan() {
        "NA".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        let s = format!("{x:.decimals$}");
        // avoid "-0.000000"
        if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
            s.trim_start_matches('-').to_string()
        } else {
            s
        }
    }
}

/// Inverse of [`format_float`].
pub fn parse_float(s: &str) -> Option<f64> {
    match s.trim() {
        "NA" => Some(f64::NAN),
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        t => t.parse().ok(),
    }
}

fn create(path: &FsPath) -> Result<csv::Writer<File>, ExportError> {
    let file = File::create(path).map_err(io_err(path))?;
    Ok(csv::Writer::from_writer(file))
}

fn open(path: &FsPath) -> Result<csv::Reader<File>, ExportError> {
    let file = File::open(path).map_err(io_err(path))?;
    Ok(csv::Reader::from_reader(file))
}

fn field(record: &csv::StringRecord, i: usize) -> Result<f64, ExportError> {
    let line = record.position().map_or(0, |p| p.line());
    let raw = record.get(i).ok_or(ExportError::Parse {
        line,
        message: format!("missing column {i}"),
    })?;
    parse_float(raw).ok_or(ExportError::Parse {
        line,
        message: format!("bad number {raw:?}"),
    })
}

fn finish<W: Write>(mut w: csv::Writer<W>) -> Result<(), ExportError> {
    w.flush().map_err(|source| ExportError::Io {
        path: "<csv>".into(),
        source,
    })
}

/// Header `index,x,y,z`, one row per waypoint, six decimals.
pub fn write_waypoints<W: Write>(path: &Path, out: W) -> Result<(), ExportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "x", "y", "z"])?;
    for (i, p) in path.waypoints().iter().enumerate() {
        w.write_record([
            i.to_string(),
            format_float(p.x, 6),
            format_float(p.y, 6),
            format_float(p.z, 6),
        ])?;
    }
    finish(w)
}

pub fn export_waypoints_csv(path: &Path, file: impl AsRef<FsPath>) -> Result<(), ExportError> {
    let file = file.as_ref();
    write_waypoints(path, File::create(file).map_err(io_err(file))?)
}

pub fn read_waypoints_csv(file: impl AsRef<FsPath>) -> Result<Path, ExportError> {
    let mut r = open(file.as_ref())?;
    let mut points = Vec::new();
    for record in r.records() {
        let record = record?;
        points.push(Point3::new(field(&record, 1)?, field(&record, 2)?, field(&record, 3)?));
    }
    Ok(Path::new(points)?)
}

/// Header `iteration,best_fitness`, iterations counted from 1.
pub fn write_convergence<W: Write>(trace: &EvolutionTrace, out: W) -> Result<(), ExportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["iteration", "best_fitness"])?;
    for (k, f) in trace.best_fitness.iter().enumerate() {
        w.write_record([(k + 1).to_string(), format_float(*f, 6)])?;
    }
    finish(w)
}

pub fn export_convergence_csv(trace: &EvolutionTrace, file: impl AsRef<FsPath>) -> Result<(), ExportError> {
    let file = file.as_ref();
    write_convergence(trace, File::create(file).map_err(io_err(file))?)
}

pub fn read_convergence_csv(file: impl AsRef<FsPath>) -> Result<Vec<f64>, ExportError> {
    let mut r = open(file.as_ref())?;
    r.records().map(|rec| field(&rec?, 1)).collect()
}

/// Header `f1,f2,f3,f4,total`, one row.
pub fn export_cost_csv(cost: &CostBreakdown, file: impl AsRef<FsPath>) -> Result<(), ExportError> {
    let mut w = create(file.as_ref())?;
    w.write_record(["f1", "f2", "f3", "f4", "total"])?;
    w.write_record([cost.f1, cost.f2, cost.f3, cost.f4, cost.total].map(|x| format_float(x, 6)))?;
    finish(w)
}

/// One line of the benchmark summary.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub scenario: String,
    pub algorithm: String,
    /// Over feasible runs; NaN when none was feasible.
    pub mean: f64,
    pub std: f64,
    pub t: f64,
    pub p: f64,
    pub verdict: Verdict,
    pub feasible: usize,
    pub runs: usize,
    /// Pairs left out of the t-test because either side failed.
    pub dropped: usize,
}

pub const SUMMARY_HEADER: [&str; 10] = [
    "scenario",
    "algorithm",
    "mean",
    "std",
    "t",
    "p",
    "verdict",
    "feasible",
    "runs",
    "dropped",
];

pub fn write_summary<W: Write>(rows: &[SummaryRow], out: W) -> Result<(), ExportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record([
            r.scenario.clone(),
            r.algorithm.clone(),
            format_float(r.mean, 6),
            format_float(r.std, 6),
            format_float(r.t, 6),
            format_float(r.p, 8),
            r.verdict.to_string(),
            r.feasible.to_string(),
            r.runs.to_string(),
            r.dropped.to_string(),
        ])?;
    }
    finish(w)
}

pub fn export_summary_csv(rows: &[SummaryRow], file: impl AsRef<FsPath>) -> Result<(), ExportError> {
    let file = file.as_ref();
    write_summary(rows, File::create(file).map_err(io_err(file))?)
}

pub fn read_summary_csv(file: impl AsRef<FsPath>) -> Result<Vec<SummaryRow>, ExportError> {
    let mut r = open(file.as_ref())?;
    let mut rows = Vec::new();
    for record in r.records() {
        let rec = record?;
        let line = rec.position().map_or(0, |p| p.line());
        let bad = |m: String| ExportError::Parse { line, message: m };
        let text = |i: usize| {
            rec.get(i)
                .map(str::to_string)
                .ok_or_else(|| bad(format!("missing column {i}")))
        };
        let count = |i: usize| -> Result<usize, ExportError> {
            let s = text(i)?;
            s.parse().map_err(|_| bad(format!("bad count {s:?}")))
        };
        let verdict = match text(6)?.as_str() {
            "D+" => Verdict::DPlus,
            "D-" => Verdict::DMinus,
            "N" => Verdict::N,
            "NA" => Verdict::NA,
            other => return Err(bad(format!("bad verdict {other:?}"))),
        };
        rows.push(SummaryRow {
            scenario: text(0)?,
            algorithm: text(1)?,
            mean: field(&rec, 2)?,
            std: field(&rec, 3)?,
            t: field(&rec, 4)?,
            p: field(&rec, 5)?,
            verdict,
            feasible: count(7)?,
            runs: count(8)?,
            dropped: count(9)?,
        });
    }
    Ok(rows)
}

/// Per-run bookkeeping, one row per optimization.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub scenario: String,
    pub algorithm: String,
    pub run: usize,
    pub seed: u64,
    pub final_fitness: f64,
    pub feasible: bool,
    pub evaluations: usize,
    pub wall_time_s: f64,
    pub trace_file: String,
}

pub fn export_run_records_csv(records: &[RunRecord], file: impl AsRef<FsPath>) -> Result<(), ExportError> {
    let mut w = create(file.as_ref())?;
    w.write_record([
        "scenario",
        "algorithm",
        "run",
        "seed",
        "final_fitness",
        "feasible",
        "evaluations",
        "wall_time_s",
        "trace_file",
    ])?;
    for r in records {
        w.write_record([
            r.scenario.clone(),
            r.algorithm.clone(),
            r.run.to_string(),
            r.seed.to_string(),
            format_float(r.final_fitness, 6),
            r.feasible.to_string(),
            r.evaluations.to_string(),
            format_float(r.wall_time_s, 3),
            r.trace_file.clone(),
        ])?;
    }
    finish(w)
}

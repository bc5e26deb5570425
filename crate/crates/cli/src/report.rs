//! CSV emission for grid reports, plus a strict parser used to cross-check
//! written files against the in-memory report.

use std::fmt::Write as _;
use std::path::Path;

use gridpick_core::{ClassCounts, GridReport, PoseClass};
use thiserror::Error;

/// Column order of the report table.
pub const CSV_HEADER: &str =
    "k,l,x,y,z,class_before,class_after,alpha0_rad,alpha1_rad,objective,residual_v_mm";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Malformed {
        path: String,
        line: usize,
        message: String,
    },
}

/// Renders the CSV body: header plus one row per grid point in k-major order
/// (the order the sweep emits).  Positions are mm with three decimals, angles
/// radians with nine, objective and residual in scientific notation.
pub fn render_report_csv(report: &GridReport) -> String {
    let mut out = String::with_capacity(64 * (report.points.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in &report.points {
        let _ = writeln!(
            out,
            "{},{},{:.3},{:.3},{:.3},{},{},{:.9},{:.9},{:.6e},{:.6e}",
            p.k,
            p.l,
            p.position.x,
            p.position.y,
            p.position.z,
            p.class_before,
            p.class_after,
            p.alpha.a0(),
            p.alpha.a1(),
            p.objective,
            p.residual_v,
        );
    }
    out
}

/// Writes the report table to `path`.
pub fn write_report_csv(report: &GridReport, path: &Path) -> Result<(), ReportError> {
    std::fs::write(path, render_report_csv(report)).map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// One parsed CSV row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReportRow {
    pub k: usize,
    pub l: usize,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub class_before: PoseClass,
    pub class_after: PoseClass,
    pub alpha0: f64,
    pub alpha1: f64,
    pub objective: f64,
    pub residual_v: f64,
}

fn parse_class(s: &str) -> Option<PoseClass> {
    match s {
        "red" => Some(PoseClass::Red),
        "blue" => Some(PoseClass::Blue),
        "black" => Some(PoseClass::Black),
        _ => None,
    }
}

fn malformed(origin: &str, line: usize, message: impl Into<String>) -> ReportError {
    ReportError::Malformed {
        path: origin.to_owned(),
        line,
        message: message.into(),
    }
}

/// Parses CSV text produced by [`render_report_csv`]; `origin` labels errors.
pub fn parse_report_csv(text: &str, origin: &str) -> Result<Vec<ReportRow>, ReportError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(malformed(origin, 1, format!("unexpected header {header:?}")))
        }
        None => return Err(malformed(origin, 1, "empty file")),
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(malformed(
                origin,
                lineno,
                format!("expected 11 fields, got {}", fields.len()),
            ));
        }
        let int = |i: usize| -> Result<usize, ReportError> {
            fields[i]
                .parse()
                .map_err(|_| malformed(origin, lineno, format!("bad integer {:?}", fields[i])))
        };
        let num = |i: usize| -> Result<f64, ReportError> {
            fields[i]
                .parse()
                .map_err(|_| malformed(origin, lineno, format!("bad number {:?}", fields[i])))
        };
        let class = |i: usize| -> Result<PoseClass, ReportError> {
            parse_class(fields[i])
                .ok_or_else(|| malformed(origin, lineno, format!("bad class {:?}", fields[i])))
        };
        rows.push(ReportRow {
            k: int(0)?,
            l: int(1)?,
            x: num(2)?,
            y: num(3)?,
            z: num(4)?,
            class_before: class(5)?,
            class_after: class(6)?,
            alpha0: num(7)?,
            alpha1: num(8)?,
            objective: num(9)?,
            residual_v: num(10)?,
        });
    }
    Ok(rows)
}

/// Rebuilds the before/after class tallies from parsed rows.
pub fn counts_of(rows: &[ReportRow]) -> (ClassCounts, ClassCounts) {
    let mut before = ClassCounts::default();
    let mut after = ClassCounts::default();
    for row in rows {
        before.add(row.class_before);
        after.add(row.class_after);
    }
    (before, after)
}

//! CSV and JSON encodings of the experiment tables and sketch reports.
//!
//! Floats are written with 17 significant digits so values round-trip
//! exactly.

use std::io::{Read, Write};

use adjfree_core::adjoint_free::{
    ConvergenceRow, ConvergenceTable, GreensErrorRow, SweepRow, SweepTable,
};
use adjfree_core::sketch::BoundReport;
use adjfree_core::DenseMatrix;
use serde::Serialize;

pub const CONVERGENCE_HEADER: [&str; 5] = ["n", "lambda_next", "err", "m_norm", "bound"];
pub const SWEEP_HEADER: [&str; 3] = ["c_mag", "err_at_n", "m_norm_final"];
pub const GREENS_ERROR_HEADER: [&str; 2] = ["n", "rel_l2_error"];
pub const LASTAR_HEADER: [&str; 2] = ["n", "m_norm"];
pub const KERNEL_HEADER: [&str; 4] = ["x", "y", "approx", "exact"];
pub const BOUND_HEADER: [&str; 4] = ["upper", "lower", "c_constant", "fx_norm"];

#[derive(Debug)]
pub enum FormatError {
    Io(std::io::Error),
    Csv(csv::Error),
    Json(serde_json::Error),
    Header {
        expected: Vec<String>,
        found: Vec<String>,
    },
    Field {
        line: usize,
        value: String,
    },
}

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormatError::Io(e) => write!(f, "io: {e}"),
            FormatError::Csv(e) => write!(f, "csv: {e}"),
            FormatError::Json(e) => write!(f, "json: {e}"),
            FormatError::Header { expected, found } => {
                write!(
                    f,
                    "header mismatch: expected {}, found {}",
                    expected.join(","),
                    found.join(",")
                )
            }
            FormatError::Field { line, value } => write!(f, "line {line}: cannot parse {value:?}"),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<csv::Error> for FormatError {
    fn from(e: csv::Error) -> Self {
        FormatError::Csv(e)
    }
}

impl From<std::io::Error> for FormatError {
    fn from(e: std::io::Error) -> Self {
        FormatError::Io(e)
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json(e)
    }
}

/// `{:.16e}`: 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_rows<W: Write>(
    out: W,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<(), FormatError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_convergence_csv<W: Write>(
    out: W,
    table: &ConvergenceTable,
) -> Result<(), FormatError> {
    write_rows(
        out,
        &CONVERGENCE_HEADER,
        table.rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                fmt_f64(r.lambda_next),
                fmt_f64(r.err),
                fmt_f64(r.m_norm),
                fmt_f64(r.bound),
            ]
        }),
    )
}

pub fn write_sweep_csv<W: Write>(out: W, table: &SweepTable) -> Result<(), FormatError> {
    write_rows(
        out,
        &SWEEP_HEADER,
        table.rows.iter().map(|r| {
            vec![
                fmt_f64(r.c_mag),
                fmt_f64(r.err_at_n),
                fmt_f64(r.m_norm_final),
            ]
        }),
    )
}

pub fn write_greens_error_csv<W: Write>(
    out: W,
    rows: &[GreensErrorRow],
) -> Result<(), FormatError> {
    write_rows(
        out,
        &GREENS_ERROR_HEADER,
        rows.iter()
            .map(|r| vec![r.n.to_string(), fmt_f64(r.rel_l2_error)]),
    )
}

pub fn write_lastar_csv<W: Write>(
    out: W,
    n_list: &[usize],
    m_norms: &[f64],
) -> Result<(), FormatError> {
    write_rows(
        out,
        &LASTAR_HEADER,
        n_list
            .iter()
            .zip(m_norms)
            .map(|(n, m)| vec![n.to_string(), fmt_f64(*m)]),
    )
}

/// Long-format kernel samples `x,y,approx,exact`, every `stride`-th node.
pub fn write_kernel_csv<W: Write>(
    out: W,
    coords: &[f64],
    approx: &DenseMatrix,
    exact: &DenseMatrix,
    stride: usize,
) -> Result<(), FormatError> {
    let stride = stride.max(1);
    let idx: Vec<usize> = (0..coords.len()).step_by(stride).collect();
    let rows = idx.iter().flat_map(|&i| {
        idx.iter().map(move |&j| {
            vec![
                fmt_f64(coords[i]),
                fmt_f64(coords[j]),
                fmt_f64(approx.get(i, j)),
                fmt_f64(exact.get(i, j)),
            ]
        })
    });
    write_rows(out, &KERNEL_HEADER, rows)
}

/// A dense matrix, one CSV line per row, no header.
pub fn write_matrix_csv<W: Write>(out: W, m: &DenseMatrix) -> Result<(), FormatError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for i in 0..m.rows() {
        w.write_record(m.row(i).iter().map(|v| fmt_f64(*v)))?;
    }
    w.flush()?;
    Ok(())
}

/// Single-row CSV; an absent upper bound is an empty field.
pub fn write_bound_csv<W: Write>(out: W, report: &BoundReport) -> Result<(), FormatError> {
    let upper = report.upper.map(fmt_f64).unwrap_or_default();
    write_rows(
        out,
        &BOUND_HEADER,
        std::iter::once(vec![
            upper,
            fmt_f64(report.lower),
            fmt_f64(report.c_constant),
            fmt_f64(report.fx_norm),
        ]),
    )
}

/// Pretty JSON followed by a newline.
pub fn write_json<W: Write, T: Serialize>(mut out: W, value: &T) -> Result<(), FormatError> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn read_records<R: Read>(input: R, header: &[&str]) -> Result<Vec<csv::StringRecord>, FormatError> {
    let mut r = csv::Reader::from_reader(input);
    let found: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if found != header {
        return Err(FormatError::Header {
            expected: header.iter().map(|s| s.to_string()).collect(),
            found,
        });
    }
    r.records()
        .map(|rec| rec.map_err(FormatError::from))
        .collect()
}

fn parse<T: std::str::FromStr>(
    rec: &csv::StringRecord,
    i: usize,
    line: usize,
) -> Result<T, FormatError> {
    let raw = rec.get(i).unwrap_or("");
    raw.parse().map_err(|_| FormatError::Field {
        line,
        value: raw.to_owned(),
    })
}

/// Reads a table written by [`write_convergence_csv`]. `n_queries` and
/// `m_norm_final` are not stored and come back as 0.
pub fn read_convergence_csv<R: Read>(input: R) -> Result<ConvergenceTable, FormatError> {
    let rows = read_records(input, &CONVERGENCE_HEADER)?
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            let line = i + 2;
            Ok(ConvergenceRow {
                n: parse(rec, 0, line)?,
                lambda_next: parse(rec, 1, line)?,
                err: parse(rec, 2, line)?,
                m_norm: parse(rec, 3, line)?,
                bound: parse(rec, 4, line)?,
            })
        })
        .collect::<Result<_, FormatError>>()?;
    Ok(ConvergenceTable {
        rows,
        n_queries: 0,
        m_norm_final: 0.0,
    })
}

/// Reads a table written by [`write_sweep_csv`]; `n_fixed` comes back as 0.
pub fn read_sweep_csv<R: Read>(input: R) -> Result<SweepTable, FormatError> {
    let rows = read_records(input, &SWEEP_HEADER)?
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            let line = i + 2;
            Ok(SweepRow {
                c_mag: parse(rec, 0, line)?,
                err_at_n: parse(rec, 1, line)?,
                m_norm_final: parse(rec, 2, line)?,
            })
        })
        .collect::<Result<_, FormatError>>()?;
    Ok(SweepTable { rows, n_fixed: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(14.098), "1.4098000000000001e1");
        for v in [std::f64::consts::PI, 1e-300, -2.5e17, 0.0] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn convergence_round_trip() {
        let table = ConvergenceTable {
            rows: vec![
                ConvergenceRow {
                    n: 1,
                    lambda_next: 39.47841760435743,
                    err: 0.1,
                    m_norm: 2.0,
                    bound: 0.3,
                },
                ConvergenceRow {
                    n: 2,
                    lambda_next: 88.82643960980423,
                    err: 1.0 / 3.0,
                    m_norm: 2.5,
                    bound: 0.2,
                },
            ],
            n_queries: 3,
            m_norm_final: 3.0,
        };
        let mut buf = Vec::new();
        write_convergence_csv(&mut buf, &table).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n,lambda_next,err,m_norm,bound\n1,"));
        let back = read_convergence_csv(buf.as_slice()).unwrap();
        assert_eq!(back.rows, table.rows);
    }

    #[test]
    fn sweep_round_trip() {
        let table = SweepTable {
            rows: vec![SweepRow {
                c_mag: 0.0,
                err_at_n: 1e-5,
                m_norm_final: 1.0,
            }],
            n_fixed: 100,
        };
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &table).unwrap();
        assert!(buf.starts_with(b"c_mag,err_at_n,m_norm_final\n"));
        assert_eq!(read_sweep_csv(buf.as_slice()).unwrap().rows, table.rows);
    }

    #[test]
    fn wrong_header_rejected() {
        let err = read_sweep_csv("c,err_at_n,m_norm_final\n0,1,1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, FormatError::Header { .. }));
    }

    #[test]
    fn bound_report_formats() {
        let report = BoundReport {
            upper: None,
            lower: 0.5,
            c_constant: 2.0,
            fx_norm: 1.0,
        };
        let mut buf = Vec::new();
        write_bound_csv(&mut buf, &report).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1).unwrap().split(',').next().unwrap(), "");
        let mut buf = Vec::new();
        write_json(&mut buf, &report).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert!(v["upper"].is_null());
        assert_eq!(v["c_constant"], 2.0);
        for key in ["upper", "lower", "c_constant", "fx_norm"] {
            assert!(v.get(key).is_some());
        }
    }
}

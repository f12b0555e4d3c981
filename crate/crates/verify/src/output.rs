//! CSV and JSON reports.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::Result;
use crate::run::ResultRow;

pub const CSV_HEADER: &str = "kind,p,s,q,r,d,m,poly,S_re,S_im,S_abs,weil,improved,main_re,main_im,residual,pass_weil,pass_improved,applicable,seconds";

/// Writes `rows` as CSV; `zero_seconds` blanks the wall-time column to `0` for byte-stable output.
pub fn write_csv<W: Write>(rows: &[ResultRow], out: W, zero_seconds: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        if zero_seconds {
            w.serialize(ResultRow {
                seconds: 0.0,
                ..row.clone()
            })?;
        } else {
            w.serialize(row)?;
        }
    }
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut rd = csv::Reader::from_reader(input);
    Ok(rd.deserialize().collect::<std::result::Result<Vec<ResultRow>, _>>()?)
}

pub fn write_json<W: Write>(rows: &[ResultRow], mut out: W, zero_seconds: bool) -> Result<()> {
    let rows: Vec<ResultRow> = rows
        .iter()
        .map(|r| {
            if zero_seconds {
                ResultRow {
                    seconds: 0.0,
                    ..r.clone()
                }
            } else {
                r.clone()
            }
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &rows)?;
    writeln!(out)?;
    Ok(())
}

/// Picks CSV or JSON from the extension of `path`.
pub fn write_file(rows: &[ResultRow], path: &Path, zero_seconds: bool) -> Result<()> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        write_json(rows, file, zero_seconds)
    } else {
        write_csv(rows, file, zero_seconds)
    }
}

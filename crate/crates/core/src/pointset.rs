//! Plain-text point-set files.
//!
//! One vector per row, comma separated, no header. Lines starting with `#`
//! are comments. Values are written in scientific notation with 17
//! significant digits, which round-trips every `f64` exactly.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Formats a value with 17 significant digits.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Rounds to `digits` significant digits and prints the shortest decimal
/// that represents the rounded value (`0.5`, not `5.00000000000e-1`).
pub fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), v)
        .parse()
        .expect("formatted float parses");
    format!("{rounded}")
}

/// Reads a point set. All rows must have the same, non-zero length.
pub fn read_points<R: Read>(reader: R) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let row = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| {
                    Error::Parse(format!("row {}: '{field}' is not a number", line + 1))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::Parse(format!(
                "row {}: non-finite value {bad}",
                line + 1
            )));
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse(format!(
                    "row {} has {} columns, expected {}",
                    line + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("point set is empty".into()));
    }
    Ok(rows)
}

pub fn read_points_file(path: &Path) -> Result<Vec<Vec<f64>>> {
    let file = File::open(path)
        .map_err(|e| Error::Parse(format!("cannot open {}: {e}", path.display())))?;
    read_points(file)
}

/// Writes comment lines (each prefixed with `# `) followed by the rows.
pub fn write_points<W: Write, R: AsRef<[f64]>>(
    mut out: W,
    comments: &[String],
    rows: &[R],
) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    for row in rows {
        let line: Vec<String> = row.as_ref().iter().map(|v| format_value(*v)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_points_file<R: AsRef<[f64]>>(
    path: &Path,
    comments: &[String],
    rows: &[R],
) -> Result<()> {
    let file = File::create(path)?;
    write_points(BufWriter::new(file), comments, rows)
}

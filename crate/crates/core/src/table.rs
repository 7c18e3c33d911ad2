//! Plain-text tables shared by every exporter: `#`-prefixed comment lines,
//! one header row, then comma-separated records.

use std::io::{self, Read, Write};

/// Writes `# line` comments, the header and the rows.
///
/// Floats are written with Rust's shortest round-trip formatting, so equal
/// inputs always give byte-identical files.
pub fn write_csv<W: Write>(
    mut out: W,
    comments: &[String],
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> io::Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()
}

/// Header and numeric records of a commented CSV.
pub fn read_numeric_csv<R: Read>(input: R) -> Result<(Vec<String>, Vec<Vec<f64>>), csv::Error> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let mut row = Vec::with_capacity(record.len());
        for (i, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                let line = record.position().map(|p| p.line()).unwrap_or(0);
                csv::Error::from(io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("line {line}, column {}: {field:?} is not a number", i + 1),
                ))
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Number following `key` (e.g. `"chord_m="`) in the first comment line
/// containing it.
pub fn comment_value(text: &str, key: &str) -> Option<f64> {
    text.lines()
        .filter(|l| l.trim_start().starts_with('#'))
        .find_map(|l| {
            let start = l.find(key)? + key.len();
            l[start..].split_whitespace().next()?.parse().ok()
        })
}

pub fn fmt(v: f64) -> String {
    format!("{v}")
}

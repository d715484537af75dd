//! Matrix and grouping file formats.
//!
//! * Dense matrix: CSV, `n` rows of `n` reals, no header.
//! * Sparse matrix: one `i j value` triplet per line, 1-based, whitespace
//!   separated. A pair may be given once; missing pairs are zero. Blank lines
//!   and lines starting with `#` are skipped.
//! * Grouping: CSV lines `unit_index,group_label`, both 1-based. A single
//!   non-numeric header line is tolerated.
//!
//! [`parse_matrix`] picks the dense format when the first data line contains
//! a comma and the triplet format otherwise.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{Grouping, SymmetricMatrix};

fn parse_error(source_name: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        source_name: source_name.to_string(),
        line,
        message: message.into(),
    }
}

fn first_data_line(text: &str) -> Option<&str> {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
}

/// Parses either matrix format. `n_hint` fixes the dimension of a triplet
/// file (e.g. from the grouping); it is ignored for dense input.
pub fn parse_matrix(text: &str, source_name: &str, n_hint: Option<usize>) -> Result<SymmetricMatrix> {
    match first_data_line(text) {
        Some(line) if line.contains(',') => parse_dense_csv(text, source_name),
        Some(_) => parse_triplets(text, source_name, n_hint),
        None => Err(Error::EmptyMatrix),
    }
}

pub fn parse_dense_csv(text: &str, source_name: &str) -> Result<SymmetricMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut lines: Vec<usize> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(source_name, line, e.to_string())
        })?;
        let line = record.position().map_or(rows.len() + 1, |p| p.line() as usize);
        let row = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                field.parse::<f64>().map_err(|_| {
                    parse_error(
                        source_name,
                        line,
                        format!("column {}: cannot parse {field:?} as a number", col + 1),
                    )
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
        lines.push(line);
    }

    let n = rows.len();
    if let Some(bad) = rows.iter().position(|r| r.len() != n) {
        return Err(parse_error(
            source_name,
            lines[bad],
            format!("row has {} columns, expected {n} (matrix must be square)", rows[bad].len()),
        ));
    }
    SymmetricMatrix::from_rows(rows)
}

pub fn parse_triplets(text: &str, source_name: &str, n_hint: Option<usize>) -> Result<SymmetricMatrix> {
    let mut triplets = Vec::new();
    let mut max_unit = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_error(
                source_name,
                line,
                format!("expected `i j value`, found {} fields", fields.len()),
            ));
        }
        let unit = |s: &str| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(u) if u >= 1 => Ok(u),
                _ => Err(parse_error(
                    source_name,
                    line,
                    format!("{s:?} is not a 1-based unit index"),
                )),
            }
        };
        let i = unit(fields[0])?;
        let j = unit(fields[1])?;
        let value: f64 = fields[2].parse().map_err(|_| {
            parse_error(source_name, line, format!("cannot parse {:?} as a number", fields[2]))
        })?;
        if let Some(n) = n_hint {
            if i.max(j) > n {
                return Err(parse_error(
                    source_name,
                    line,
                    format!("unit {} exceeds matrix size {n}", i.max(j)),
                ));
            }
        }
        max_unit = max_unit.max(i).max(j);
        triplets.push((i - 1, j - 1, value));
    }
    let n = n_hint.unwrap_or(max_unit);
    SymmetricMatrix::from_triplets(n, triplets)
}

pub fn parse_grouping(text: &str, source_name: &str) -> Result<Grouping> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());

    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(source_name, line, e.to_string())
        })?;
        let line = record.position().map_or(idx + 1, |p| p.line() as usize);
        if record.len() != 2 {
            return Err(parse_error(
                source_name,
                line,
                format!("expected `unit_index,group_label`, found {} fields", record.len()),
            ));
        }
        let parsed = (record[0].parse::<usize>(), record[1].parse::<usize>());
        match parsed {
            (Ok(unit), Ok(label)) if unit >= 1 && label >= 1 => pairs.push((line, unit, label)),
            (Err(_), Err(_)) if idx == 0 => continue,
            _ => {
                return Err(parse_error(
                    source_name,
                    line,
                    format!(
                        "expected positive integers, found {:?},{:?}",
                        &record[0], &record[1]
                    ),
                ))
            }
        }
    }

    let n = pairs.len();
    if n == 0 {
        return Err(parse_error(source_name, 1, "no assignments found"));
    }
    let mut labels: Vec<Option<usize>> = vec![None; n];
    for &(line, unit, label) in &pairs {
        if unit > n {
            return Err(parse_error(
                source_name,
                line,
                format!("unit {unit} exceeds the number of assigned units ({n})"),
            ));
        }
        if labels[unit - 1].replace(label - 1).is_some() {
            return Err(Error::DuplicateAssignment(unit));
        }
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or(Error::UnassignedUnit(i + 1)))
        .collect::<Result<Vec<_>>>()?;
    Grouping::from_labels(labels)
}

pub fn read_matrix(path: &Path, n_hint: Option<usize>) -> Result<SymmetricMatrix> {
    let text = fs::read_to_string(path)?;
    parse_matrix(&text, &path.display().to_string(), n_hint)
}

pub fn read_grouping(path: &Path) -> Result<Grouping> {
    let text = fs::read_to_string(path)?;
    parse_grouping(&text, &path.display().to_string())
}

pub fn write_dense_csv<W: Write>(matrix: &SymmetricMatrix, mut out: W) -> Result<()> {
    for row in matrix.to_rows() {
        let line: Vec<String> = row.iter().map(f64::to_string).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn write_grouping_csv<W: Write>(grouping: &Grouping, mut out: W) -> Result<()> {
    for (unit, &label) in grouping.labels().iter().enumerate() {
        writeln!(out, "{},{}", unit + 1, label + 1)?;
    }
    Ok(())
}

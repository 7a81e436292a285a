//! Text format for vector families.
//!
//! ```text
//! # optional comments
//! dim: 3
//! count: 2
//! weights: 0.5, 0.5
//! vectors:
//! 1, 0, 0
//! 0, 1, 0
//! ```
//!
//! `weights` is optional. A file whose first content line is not a
//! `key:` header is read as a plain table, one vector per line, with
//! commas or whitespace between coordinates.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::VectorFamily;

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyFile {
    pub family: VectorFamily,
    pub weights: Option<Vec<f64>>,
}

fn parse_error(line: usize, field: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

fn parse_row(text: &str, line: usize, field: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = if text.contains(',') {
        text.split(',').map(str::trim).collect()
    } else {
        text.split_whitespace().collect()
    };
    parts
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let x: f64 = s
                .parse()
                .map_err(|_| parse_error(line, field, format!("entry {} `{s}` is not a number", i + 1)))?;
            if !x.is_finite() {
                return Err(parse_error(line, field, format!("entry {} is not finite", i + 1)));
            }
            Ok(x)
        })
        .collect()
}

fn parse_count(value: &str, line: usize, field: &str) -> Result<usize> {
    value
        .trim()
        .parse()
        .map_err(|_| parse_error(line, field, format!("`{}` is not a non-negative integer", value.trim())))
}

pub fn parse_family(text: &str) -> Result<FamilyFile> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let Some(&(_, first)) = lines.first() else {
        return Err(parse_error(1, "vectors", "file contains no vectors"));
    };
    if first.contains(':') {
        parse_document(&lines)
    } else {
        parse_table(&lines)
    }
}

fn parse_table(lines: &[(usize, &str)]) -> Result<FamilyFile> {
    let mut rows = Vec::with_capacity(lines.len());
    for &(n, l) in lines {
        let row = parse_row(l, n, "vectors")?;
        if let Some(first) = rows.first().map(Vec::len) {
            if row.len() != first {
                return Err(parse_error(
                    n,
                    "vectors",
                    format!("{} coordinates, expected {first}", row.len()),
                ));
            }
        }
        rows.push(row);
    }
    let family = VectorFamily::new(rows).map_err(|e| parse_error(lines[0].0, "vectors", e.to_string()))?;
    Ok(FamilyFile { family, weights: None })
}

fn parse_document(lines: &[(usize, &str)]) -> Result<FamilyFile> {
    let mut dim = None;
    let mut count = None;
    let mut weights = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut vectors_line = None;
    for &(n, l) in lines {
        if vectors_line.is_some() {
            let row = parse_row(l, n, "vectors")?;
            if let Some((_, d)) = dim {
                if row.len() != d {
                    return Err(parse_error(
                        n,
                        "vectors",
                        format!("{} coordinates, expected dim = {d}", row.len()),
                    ));
                }
            }
            rows.push(row);
            continue;
        }
        let Some((key, value)) = l.split_once(':') else {
            return Err(parse_error(n, "header", format!("expected `key: value`, found `{l}`")));
        };
        match key.trim().to_ascii_lowercase().as_str() {
            "dim" => dim = Some((n, parse_count(value, n, "dim")?)),
            "count" => count = Some((n, parse_count(value, n, "count")?)),
            "weights" => weights = Some((n, parse_row(value, n, "weights")?)),
            "vectors" => {
                vectors_line = Some(n);
                if !value.trim().is_empty() {
                    rows.push(parse_row(value, n, "vectors")?);
                }
            }
            other => return Err(parse_error(n, other, "unknown field")),
        }
    }
    let last = lines.last().map_or(1, |l| l.0);
    let Some(vline) = vectors_line else {
        return Err(parse_error(last, "vectors", "missing `vectors:` section"));
    };
    let Some((dline, d)) = dim else {
        return Err(parse_error(1, "dim", "missing field"));
    };
    if d == 0 {
        return Err(parse_error(dline, "dim", "must be at least 1"));
    }
    if rows.is_empty() {
        return Err(parse_error(vline, "vectors", "no vectors listed"));
    }
    if let Some((cline, c)) = count {
        if c != rows.len() {
            return Err(parse_error(
                cline,
                "count",
                format!("declares {c} vectors but {} are listed", rows.len()),
            ));
        }
    }
    if let Some((wline, w)) = &weights {
        if w.len() != rows.len() {
            return Err(parse_error(
                *wline,
                "weights",
                format!("{} weights for {} vectors", w.len(), rows.len()),
            ));
        }
        if let Some(i) = w.iter().position(|x| *x <= 0.0) {
            return Err(parse_error(*wline, "weights", format!("weight {} is not positive", i + 1)));
        }
    }
    let family = VectorFamily::new(rows).map_err(|e| parse_error(vline, "vectors", e.to_string()))?;
    Ok(FamilyFile {
        family,
        weights: weights.map(|(_, w)| w),
    })
}

pub fn read_family(path: &std::path::Path) -> Result<(FamilyFile, Vec<u8>)> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| parse_error(1, "file", "not valid UTF-8"))?;
    Ok((parse_family(text)?, bytes))
}

/// 17 significant digits, so every `f64` reads back unchanged.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_family(family: &VectorFamily, weights: Option<&[f64]>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dim: {}", family.dim());
    let _ = writeln!(out, "count: {}", family.count());
    if let Some(w) = weights {
        let _ = writeln!(out, "weights: {}", join(w));
    }
    out.push_str("vectors:\n");
    for v in family.vectors() {
        let _ = writeln!(out, "{}", join(v));
    }
    out
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|&x| format_number(x)).collect::<Vec<_>>().join(", ")
}

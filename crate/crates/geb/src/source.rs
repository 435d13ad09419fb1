//! Resolving `--criterion` / `--plant-criterion` arguments.
//!
//! Accepted forms:
//! - `equality:<hex>`: match one dataset; hex digit `i` from the right
//!   holds bits `4i..4i+3`
//! - `cnf:<path>`: a DIMACS CNF file, variable `v` reads input bit `v - 1`
//! - `file:<path>` or a bare path: the line-oriented criterion text format

use std::path::Path;

use geb_core::{cnf_criterion, equality_criterion, Criterion, Literal};

use crate::error::{usage, CliError, Result};
use crate::store::{load_criterion, read_to_string};

pub fn resolve_criterion(source: &str, width: usize) -> Result<Criterion> {
    let criterion = if let Some(hex) = source.strip_prefix("equality:") {
        equality_criterion(&parse_hex_pattern(hex, width)?)?
    } else if let Some(path) = source.strip_prefix("cnf:") {
        let path = Path::new(path);
        let text = read_to_string(path)?;
        let clauses = parse_dimacs(&text, width).map_err(|source| CliError::Data {
            path: path.to_owned(),
            source,
        })?;
        cnf_criterion(&clauses, width)?
    } else {
        load_criterion(Path::new(source.strip_prefix("file:").unwrap_or(source)))?
    };
    if criterion.input_width() != width {
        return Err(usage(format!(
            "criterion reads {} bits but datasets have {width}",
            criterion.input_width()
        )));
    }
    Ok(criterion)
}

/// Hex value to `width` little-endian bits.
pub fn parse_hex_pattern(hex: &str, width: usize) -> Result<Vec<bool>> {
    let hex = hex.strip_prefix("0x").unwrap_or(hex);
    if hex.is_empty() {
        return Err(usage("empty equality pattern"));
    }
    let mut bits = vec![false; width];
    for (i, c) in hex.chars().rev().enumerate() {
        let nibble = c
            .to_digit(16)
            .ok_or_else(|| usage(format!("`{c}` is not a hex digit")))?;
        for b in 0..4 {
            if nibble >> b & 1 == 1 {
                let pos = 4 * i + b;
                if pos >= width {
                    return Err(usage(format!(
                        "pattern 0x{hex} does not fit in {width} bits"
                    )));
                }
                bits[pos] = true;
            }
        }
    }
    Ok(bits)
}

/// Clauses of a DIMACS CNF file whose variables must fit in `width` inputs.
pub fn parse_dimacs(text: &str, width: usize) -> geb_core::Result<Vec<Vec<Literal>>> {
    let err = |line: usize, reason: String| geb_core::Error::Parse { line, reason };
    let mut declared: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut last = 0;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        last = line_no;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let f: Vec<&str> = rest.split_whitespace().collect();
            match f.as_slice() {
                ["cnf", v, c] if declared.is_none() => {
                    let v = v
                        .parse()
                        .map_err(|_| err(line_no, format!("bad variable count `{v}`")))?;
                    let c = c
                        .parse()
                        .map_err(|_| err(line_no, format!("bad clause count `{c}`")))?;
                    if v > width {
                        return Err(err(line_no, format!("{v} variables exceed width {width}")));
                    }
                    declared = Some((v, c));
                }
                _ => {
                    return Err(err(
                        line_no,
                        "expected a single `p cnf <vars> <clauses>`".into(),
                    ))
                }
            }
            continue;
        }
        let Some((vars, _)) = declared else {
            return Err(err(line_no, "clause before `p cnf` header".into()));
        };
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| err(line_no, format!("bad literal `{tok}`")))?;
            if v == 0 {
                if current.is_empty() {
                    return Err(err(line_no, "empty clause".into()));
                }
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            let var = v.unsigned_abs() as usize;
            if var > vars {
                return Err(err(
                    line_no,
                    format!("variable {var} beyond declared {vars}"),
                ));
            }
            current.push(if v < 0 {
                Literal::neg(var - 1)
            } else {
                Literal::pos(var - 1)
            });
        }
    }
    let Some((_, count)) = declared else {
        return Err(err(last.max(1), "missing `p cnf` header".into()));
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != count {
        return Err(err(
            last,
            format!("header declares {count} clauses, found {}", clauses.len()),
        ));
    }
    Ok(clauses)
}

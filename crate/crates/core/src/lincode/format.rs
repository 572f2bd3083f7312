//! Generator-matrix text format.
//!
//! ```text
//! q length dim
//! g_11 g_12 ... g_1,length
//! ...
//! ```
//!
//! Symbols are decimal for prime fields and sums of terms `c*w^i` otherwise, where
//! `w` is the class of `X` modulo the field's smallest monic irreducible, e.g.
//! `1+1*w` in `GF(4)`; zero terms are left out and `0` is written as is.
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write;
use std::sync::Arc;

use super::LinearCode;
use crate::error::{Error, Result};
use crate::gf::{field_of_order, FieldSpec, Sym};

pub fn write_generator(code: &LinearCode) -> String {
    let f = code.field();
    let mut out = String::new();
    writeln!(out, "{} {} {}", f.q(), code.length(), code.dim()).unwrap();
    for i in 0..code.dim() {
        let row: Vec<String> = code
            .generator()
            .row(i)
            .iter()
            .map(|&c| f.format(c))
            .collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

/// Parses a generator matrix. `field` overrides the field implied by the
/// header, which must then agree with it on `q`.
pub fn read_generator(text: &str, field: Option<&Arc<FieldSpec>>) -> Result<LinearCode> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty generator file".into()))?;
    let nums: Vec<u64> = header
        .split_whitespace()
        .map(|t| t.parse::<u64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse(format!("bad header '{header}'")))?;
    let [q, length, dim] = nums[..] else {
        return Err(Error::Parse(format!(
            "header needs 'q length dim', got '{header}'"
        )));
    };
    let field = match field {
        Some(f) if f.q() as u64 == q => Arc::clone(f),
        Some(f) => {
            return Err(Error::Parse(format!(
                "header q = {q} but field has order {}",
                f.q()
            )))
        }
        None => field_of_order(q)?,
    };
    let length = length as usize;
    let mut rows = Vec::new();
    for line in lines {
        let row: Vec<Sym> = line
            .split_whitespace()
            .map(|t| field.parse(t))
            .collect::<Result<_>>()?;
        if row.len() != length {
            return Err(Error::Parse(format!(
                "row {} has {} symbols, expected {length}",
                rows.len() + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() as u64 != dim {
        return Err(Error::Parse(format!(
            "expected {dim} rows, found {}",
            rows.len()
        )));
    }
    let code = LinearCode::from_rows(&field, length, &rows);
    if code.dim() as u64 != dim {
        return Err(Error::Parse(format!(
            "rows span dimension {}, header says {dim}",
            code.dim()
        )));
    }
    Ok(code)
}

//! Field files: a header line `n=<int>` followed by either `n` text rows of
//! `n` decimals (row `j` = `y` index, ascending) or `8 n²` little-endian bytes.

use super::GridField;
use crate::error::{Error, Result};
use std::io::Write;
use std::path::Path;

pub fn write_field_text(path: &Path, f: &GridField) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "n={}", f.n())?;
    for row in f.values().chunks_exact(f.n()) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_field_binary(path: &Path, f: &GridField) -> Result<()> {
    let mut bytes = format!("n={}\n", f.n()).into_bytes();
    bytes.reserve(8 * f.values().len());
    for v in f.values() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

/// Reads either layout.
pub fn read_field(path: &Path) -> Result<GridField> {
    let bytes = std::fs::read(path)?;
    let nl = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::Format("missing header line".into()))?;
    let header = std::str::from_utf8(&bytes[..nl]).map_err(|e| Error::Format(e.to_string()))?;
    let n: usize = header
        .trim()
        .strip_prefix("n=")
        .and_then(|s| s.parse().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Format(format!("bad header `{header}`")))?;
    let body = &bytes[nl + 1..];
    if let Some(f) = parse_text(n, body)? {
        return Ok(f);
    }
    if body.len() == 8 * n * n {
        let values = body
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
            .collect();
        return Ok(GridField::from_values(n, values));
    }
    Err(Error::Format(format!("body matches neither layout for n={n}")))
}

fn parse_text(n: usize, body: &[u8]) -> Result<Option<GridField>> {
    let Ok(text) = std::str::from_utf8(body) else {
        return Ok(None);
    };
    let mut values = Vec::with_capacity(n * n);
    for tok in text.split_whitespace() {
        match tok.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) => return Ok(None),
        }
    }
    if values.len() != n * n {
        return Err(Error::Format(format!("expected {} values, found {}", n * n, values.len())));
    }
    Ok(Some(GridField::from_values(n, values)))
}

use rug::Float;
use serde::Serialize;

use fricke_core::real::{to_decimal, to_decimal_digits};

use crate::CliResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub(crate) const CSV_DIGITS: usize = 12;

pub(crate) fn json<T: Serialize + ?Sized>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub(crate) fn csv(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Full-precision decimal.
pub(crate) fn full(x: &Float) -> String {
    to_decimal(x)
}

/// CSV rounding.
pub(crate) fn short(x: &Float) -> String {
    to_decimal_digits(x, CSV_DIGITS)
}

/// Aligned `key = value` lines.
pub(crate) fn kv(pairs: &[(&str, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in pairs {
        s.push_str(&format!("{k:<width$} = {v}\n"));
    }
    s
}

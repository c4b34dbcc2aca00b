//! Input loading, CSV helpers and atomic report output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use mmf_core::function::{builtins, PositiveFunction};
use mmf_core::json::{format_complex, parse_complex};
use mmf_core::term::TermFunction;
use mmf_core::weights::{LogLinearFamily, SampledFamily, WeightFamily};
use mmf_core::Complex64;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// A builtin by name, otherwise an ansatz function read from a JSON file
/// (a bare term list or any report carrying a `solution`).
pub fn load_function(arg: &str) -> CliResult<Box<dyn PositiveFunction>> {
    let registry = builtins();
    if registry.contains(arg) {
        return Ok(registry.get(arg)?);
    }
    if !Path::new(arg).exists() {
        return Err(CliError::usage(format!(
            "'{arg}' is neither a builtin ({}) nor a readable file",
            registry.names().join(", ")
        )));
    }
    Ok(Box::new(load_terms_file(Path::new(arg))?))
}

pub fn load_terms(arg: &str) -> CliResult<TermFunction> {
    let f = load_function(arg)?;
    f.as_terms()
        .cloned()
        .ok_or_else(|| CliError::usage(format!("'{arg}' is not a term function")))
}

fn load_terms_file(path: &Path) -> CliResult<TermFunction> {
    let value: serde_json::Value = read_json(path)?;
    let value = match value {
        serde_json::Value::Object(mut map) if map.contains_key("solution") => {
            map.remove("solution").unwrap()
        }
        other => other,
    };
    serde_json::from_value(value)
        .map_err(|e| CliError::usage(format!("{}: terms: {e}", path.display())))
}

/// Weight families: a tagged JSON family, a bare `{rates, limit}` record, or a
/// numeric CSV whose first record lists λ and whose later records are the
/// `ω_j` rows (`#` starts a comment line).
pub fn load_family(path: &Path) -> CliResult<WeightFamily> {
    if is_csv(path) {
        let rows = read_real_rows(path)?;
        let mut iter = rows.into_iter();
        let lambdas = iter
            .next()
            .ok_or_else(|| CliError::usage(format!("{}: empty file", path.display())))?;
        let family = SampledFamily::new(lambdas, iter.collect())?;
        return Ok(WeightFamily::Sampled(family));
    }
    let value: serde_json::Value = read_json(path)?;
    let is_tagged = value.get("kind").is_some();
    let parsed = if is_tagged {
        serde_json::from_value::<WeightFamily>(value)
    } else {
        serde_json::from_value::<LogLinearFamily>(value).map(WeightFamily::LogLinear)
    };
    parsed.map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn csv_records(path: &Path) -> CliResult<Vec<Vec<String>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    reader
        .records()
        .map(|r| {
            r.map(|rec| rec.iter().map(str::to_string).collect())
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
        })
        .collect()
}

fn parse_grid<T>(
    path: &Path,
    records: Vec<Vec<String>>,
    parse: impl Fn(&str) -> Option<T>,
) -> CliResult<Vec<Vec<T>>> {
    records
        .into_iter()
        .enumerate()
        .map(|(row, rec)| {
            rec.iter()
                .enumerate()
                .map(|(col, field)| {
                    parse(field).ok_or_else(|| {
                        CliError::usage(format!(
                            "{}: row {row}, column {col}: cannot parse '{field}'",
                            path.display()
                        ))
                    })
                })
                .collect()
        })
        .collect()
}

fn read_real_rows(path: &Path) -> CliResult<Vec<Vec<f64>>> {
    let records = csv_records(path)?;
    parse_grid(path, records, |f| f.parse::<f64>().ok())
}

/// Complex matrix, rows `n`, columns λ, entries like `1.5-2i`.
pub fn read_complex_matrix(path: &Path) -> CliResult<Vec<Vec<Complex64>>> {
    let records = csv_records(path)?;
    parse_grid(path, records, |f| parse_complex(f).ok())
}

pub fn parse_complex_arg(text: &str) -> CliResult<Complex64> {
    parse_complex(text).map_err(|e| CliError::usage(format!("'{text}': {e}")))
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> CliResult<String> {
    let mut text = mmf_core::json::to_string_precise(value)
        .map_err(|e| CliError::Math(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// A CSV document from a header and rows of already formatted fields.
pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Math(format!("csv output failed: {e}"));
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(r).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Math(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Math(e.to_string()))
}

pub fn real_field(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn complex_field(z: Complex64) -> String {
    format_complex(z)
}

/// Writes to `path` through a temporary file in the same directory, or to
/// stdout when no path is given.
pub fn emit(path: Option<&PathBuf>, body: &str) -> CliResult<()> {
    let Some(path) = path else {
        print!("{body}");
        return Ok(());
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let io = |e: std::io::Error| CliError::usage(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(body.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

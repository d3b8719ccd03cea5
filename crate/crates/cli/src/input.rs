//! Result-pool ingestion from CSV (with header) and JSON lines.
//!
//! Every data row either becomes a record or is reported as a rejection with
//! its 1-based line number. Rejections abort loading unless the caller asks to
//! skip them.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use boon_core::{Direction, ResultPool, RunRecord};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PoolFormat {
    Csv,
    Jsonl,
}

impl PoolFormat {
    pub fn from_path(path: &Path) -> Self {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("jsonl") | Some("ndjson") => PoolFormat::Jsonl,
            _ => PoolFormat::Csv,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PoolFile {
    pub path: PathBuf,
    pub format: PoolFormat,
    pub validation_column: String,
    pub test_column: String,
    pub direction: Direction,
    pub metric_name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowRejection {
    /// 1-based line number in the input file.
    pub row: u64,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct LoadedPool {
    pub source: PoolFile,
    pub pool: ResultPool,
    pub rejected: Vec<RowRejection>,
}

pub fn load_pool(file: &PoolFile, skip_invalid: bool) -> Result<LoadedPool, CliError> {
    let unreadable = |source| CliError::Unreadable {
        path: file.path.clone(),
        source,
    };
    let handle = File::open(&file.path).map_err(unreadable)?;
    let (records, rejected) = match file.format {
        PoolFormat::Csv => read_csv(file, handle)?,
        PoolFormat::Jsonl => read_jsonl(file, handle)?,
    };
    if !rejected.is_empty() {
        if !skip_invalid {
            return Err(CliError::MalformedRows {
                path: file.path.clone(),
                rejections: rejected,
            });
        }
        for r in &rejected {
            log::warn!(
                "{}: skipping row {}: {}",
                file.path.display(),
                r.row,
                r.reason
            );
        }
    }
    if records.is_empty() {
        return Err(CliError::NoValidRows {
            path: file.path.clone(),
        });
    }
    let pool = ResultPool::new(records, file.direction)
        .map_err(|e| CliError::estimator(file.path.display().to_string(), e))?
        .with_metric_name(file.metric_name.clone());
    Ok(LoadedPool {
        source: file.clone(),
        pool,
        rejected,
    })
}

fn parse_score(raw: &str, column: &str) -> Result<f64, String> {
    let trimmed = raw.trim();
    match trimmed.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(format!("{column} value `{trimmed}` is not finite")),
        Err(_) => Err(format!("{column} value `{trimmed}` is not a number")),
    }
}

type Parsed = (Vec<RunRecord>, Vec<RowRejection>);

fn read_csv(file: &PoolFile, handle: File) -> Result<Parsed, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(handle);
    let headers = reader
        .headers()
        .map_err(|e| CliError::Unreadable {
            path: file.path.clone(),
            source: std::io::Error::other(e),
        })?
        .clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::UnknownColumn {
                path: file.path.clone(),
                column: name.to_string(),
                available: headers.iter().map(String::from).collect(),
            })
    };
    let vi = find(&file.validation_column)?;
    let ti = find(&file.test_column)?;

    let mut records = Vec::new();
    let mut rejected = Vec::new();
    for (i, row) in reader.records().enumerate() {
        // header is line 1; fall back to that when the reader has no position
        let fallback_line = i as u64 + 2;
        let row = match row {
            Ok(row) => row,
            Err(e) => {
                let line = e.position().map(|p| p.line()).unwrap_or(fallback_line);
                rejected.push(RowRejection {
                    row: line,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let line = row.position().map(|p| p.line()).unwrap_or(fallback_line);
        if row.iter().all(|f| f.is_empty()) {
            continue;
        }
        let field = |idx: usize, name: &str| {
            row.get(idx)
                .ok_or_else(|| format!("missing {name} field"))
                .and_then(|raw| parse_score(raw, name))
        };
        match (
            field(vi, &file.validation_column),
            field(ti, &file.test_column),
        ) {
            (Ok(v), Ok(t)) => records.push(RunRecord::new(v, t)),
            (Err(reason), _) | (_, Err(reason)) => {
                rejected.push(RowRejection { row: line, reason })
            }
        }
    }
    Ok((records, rejected))
}

fn json_score(
    obj: &serde_json::Map<String, serde_json::Value>,
    column: &str,
) -> Result<f64, String> {
    match obj.get(column) {
        None => Err(format!("missing {column} field")),
        Some(serde_json::Value::Number(n)) => n
            .as_f64()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("{column} value {n} is not a finite number")),
        Some(serde_json::Value::String(s)) => parse_score(s, column),
        Some(other) => Err(format!("{column} value {other} is not a number")),
    }
}

fn read_jsonl(file: &PoolFile, handle: File) -> Result<Parsed, CliError> {
    let mut records = Vec::new();
    let mut rejected = Vec::new();
    let mut columns_checked = false;
    for (i, line) in BufReader::new(handle).lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = line.map_err(|source| CliError::Unreadable {
            path: file.path.clone(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let obj = match serde_json::from_str::<serde_json::Value>(&line) {
            Ok(serde_json::Value::Object(obj)) => obj,
            Ok(_) => {
                rejected.push(RowRejection {
                    row: line_no,
                    reason: "not a JSON object".into(),
                });
                continue;
            }
            Err(e) => {
                rejected.push(RowRejection {
                    row: line_no,
                    reason: format!("invalid JSON: {e}"),
                });
                continue;
            }
        };
        if !columns_checked {
            // the first object defines the schema
            for column in [&file.validation_column, &file.test_column] {
                if !obj.contains_key(column.as_str()) {
                    return Err(CliError::UnknownColumn {
                        path: file.path.clone(),
                        column: column.clone(),
                        available: obj.keys().cloned().collect(),
                    });
                }
            }
            columns_checked = true;
        }
        match (
            json_score(&obj, &file.validation_column),
            json_score(&obj, &file.test_column),
        ) {
            (Ok(v), Ok(t)) => records.push(RunRecord::new(v, t)),
            (Err(reason), _) | (_, Err(reason)) => rejected.push(RowRejection {
                row: line_no,
                reason,
            }),
        }
    }
    Ok((records, rejected))
}

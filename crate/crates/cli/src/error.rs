use std::path::PathBuf;

use thiserror::Error;

use crate::input::RowRejection;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    /// Bad flags or flag combinations (also used by clap for parse failures).
    pub const USAGE: i32 = 2;
    pub const UNREADABLE: i32 = 3;
    pub const UNKNOWN_COLUMN: i32 = 4;
    pub const MALFORMED_ROWS: i32 = 5;
    pub const NO_VALID_ROWS: i32 = 6;
    pub const ESTIMATOR: i32 = 7;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {}: {source}", path.display())]
    Unreadable {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Unwritable {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: unknown column `{column}` (available: {})", path.display(), available.join(", "))]
    UnknownColumn {
        path: PathBuf,
        column: String,
        available: Vec<String>,
    },
    #[error("{}: {} malformed row(s): {}", path.display(), rejections.len(), summarize_rejections(rejections))]
    MalformedRows {
        path: PathBuf,
        rejections: Vec<RowRejection>,
    },
    #[error("{}: no valid rows", path.display())]
    NoValidRows { path: PathBuf },
    #[error("{context}: {source}{}", hint.map(|h| format!(" ({h})")).unwrap_or_default())]
    Estimator {
        context: String,
        source: boon_core::Error,
        hint: Option<&'static str>,
    },
}

fn summarize_rejections(rejections: &[RowRejection]) -> String {
    const SHOWN: usize = 5;
    let mut parts: Vec<String> = rejections
        .iter()
        .take(SHOWN)
        .map(|r| format!("row {}: {}", r.row, r.reason))
        .collect();
    if rejections.len() > SHOWN {
        parts.push(format!("... and {} more", rejections.len() - SHOWN));
    }
    parts.join("; ")
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Unreadable { .. } | CliError::Unwritable { .. } => exit::UNREADABLE,
            CliError::UnknownColumn { .. } => exit::UNKNOWN_COLUMN,
            CliError::MalformedRows { .. } => exit::MALFORMED_ROWS,
            CliError::NoValidRows { .. } => exit::NO_VALID_ROWS,
            CliError::Estimator { .. } => exit::ESTIMATOR,
        }
    }

    pub(crate) fn estimator(context: impl Into<String>, source: boon_core::Error) -> Self {
        let hint = match source {
            boon_core::Error::DegeneratePool { .. } | boon_core::Error::InsufficientData { .. } => {
                Some("the gaussian estimator needs at least 3 runs with varying scores; try --estimator nonparametric")
            }
            _ => None,
        };
        CliError::Estimator {
            context: context.into(),
            source,
            hint,
        }
    }
}

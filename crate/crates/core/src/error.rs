use thiserror::Error;

/// Errors raised while reading input systems or configuring the pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported input format {found:?}; expected one of .json, .csv, .tsv")]
    UnsupportedFormat { found: String },

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("input is not valid UTF-8 (byte offset {offset})")]
    Utf8 { offset: usize },

    #[error("input of {size} bytes exceeds the limit of {limit} bytes")]
    TooLarge { size: u64, limit: u64 },

    /// `record` is 1-based; 0 means the error is not tied to one record
    /// (header, top-level structure).
    #[error("parse error at record {record} (line {line}): {message}")]
    Parse {
        record: usize,
        line: u64,
        message: String,
    },

    #[error("duplicate type label {label:?}")]
    Duplicate { label: String },

    #[error("invalid value for {label:?}: {message}")]
    Value { label: String, message: String },

    #[error("input contains no types with positive counts")]
    Empty,

    #[error("invalid alpha {text:?}: {message}")]
    Alpha { text: String, message: String },

    #[error("invalid option: {0}")]
    Options(String),
}

impl Error {
    /// Short machine-readable code, used by the HTTP service.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnsupportedFormat { .. } => "unsupported_format",
            Error::Io { .. } => "io_error",
            Error::Utf8 { .. } => "invalid_utf8",
            Error::TooLarge { .. } => "too_large",
            Error::Parse { .. } => "parse_error",
            Error::Duplicate { .. } => "duplicate_label",
            Error::Value { .. } => "invalid_value",
            Error::Empty => "empty_input",
            Error::Alpha { .. } => "invalid_alpha",
            Error::Options(_) => "invalid_options",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

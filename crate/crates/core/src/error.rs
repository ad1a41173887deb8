use std::io;

/// Errors raised anywhere in the extraction and evaluation pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("ingestion failed for {document}: {reason}")]
    Ingest { document: String, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("structural error in sentence {sentence_id}: {reason}")]
    Structure { sentence_id: String, reason: String },

    #[error("alignment error at offset {offset}: {reason}")]
    Alignment { offset: usize, reason: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

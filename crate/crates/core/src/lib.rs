//! Agent-specific deontic modality extraction for legal contracts, with
//! corpus management and evaluation.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod ingest;
pub mod jsonl;
pub mod lingrep;
pub mod pipeline;
pub mod rules;

pub use error::{Error, Result};

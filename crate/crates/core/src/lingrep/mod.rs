//! Linguistic representations: tokens, dependency trees, completeness flags
//! and the CoNLL-U interchange format.

mod align;
mod conllu;
mod constituency;
mod labels;
mod token;

pub use align::align_tokens;
pub use conllu::{read_conllu, read_conllu_str, write_conllu};
pub use constituency::{is_complete_sentence, Completeness};
pub use labels::LabelMap;
pub use token::{ParsedSentence, Token};

use serde::{Deserialize, Serialize};

/// One row of the completeness sidecar file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletenessRecord {
    pub provision_key: String,
    pub complete: bool,
}

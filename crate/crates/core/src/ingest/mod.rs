//! Contract pre-processing: HTML to provisions, definitional filtering,
//! bullet merging, contract type and agent alias extraction, sentence
//! segmentation and per-agent duplication.

mod agents;
mod aliases;
mod bullets;
mod contract_type;
mod definitions;
mod html;
mod sentences;

pub use agents::{expand_per_agent, mentions_alias};
pub use aliases::{
    alias_candidates, extract_aliases, fallback_mentions, select_aliases, AgentAlias, AliasConfig, AliasExtraction,
    EntityKind, EntityMention,
};
pub use bullets::{is_sub_bullet, merge_bullets, CompletenessOracle};
pub use contract_type::{detect_contract_type, ContractType};
pub use definitions::{filter_definitions, filter_definitions_with_report, DefinitionDiscard, DEFINITION_CUES};
pub use html::extract_provisions;
pub use sentences::{segment_sentences, RuleSplitter, SentenceSplitter};

use serde::{Deserialize, Serialize};

/// Number of leading provisions scanned for the contract type and aliases.
pub const HEADER_WINDOW: usize = 20;

/// One paragraph-level unit of a contract.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provision {
    pub contract_id: String,
    /// 0-based ordinal in document order.
    pub index: usize,
    /// Tag-stripped text with whitespace collapsed to single spaces.
    pub text: String,
    /// Nesting level, 0 at the top.
    pub depth: usize,
    pub parent_index: Option<usize>,
}

impl Provision {
    /// Key used by the completeness sidecar: `<contract_id>:<index>`.
    pub fn key(&self) -> String {
        format!("{}:{}", self.contract_id, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub sentence_id: String,
    pub contract_id: String,
    pub provision_index: usize,
    /// Exactly `provision.text[char_span.0..char_span.1]`.
    pub text: String,
    /// UTF-8 byte offsets into the provision text, end exclusive.
    pub char_span: (usize, usize),
}

/// A sentence duplicated for one of the agents it mentions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentSentence {
    pub sentence_id: String,
    pub agent: AgentAlias,
    pub text: String,
}

/// Collapses every run of whitespace (including no-break spaces) into one
/// space and trims the ends.
pub fn normalize_whitespace(s: &str) -> String {
    s.split(|c: char| c.is_whitespace() || c == '\u{a0}')
        .filter(|w| !w.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

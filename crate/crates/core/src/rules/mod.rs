//! Deontic rule engine: trigger lexicon, dependency-pattern attachment,
//! label and tag conversion, and the majority baselines.

mod algorithm;
mod baseline;
mod deontic;
mod lexicon;
mod matcher;
mod resolve;
mod tags;

pub use algorithm::{apply_dependency_rules, extraction_spans, to_multilabel, Extraction};
pub use baseline::{majority_class_baseline, majority_span_baseline, SpanBaselineMap, TypeDistribution};
pub use deontic::DeonticType;
pub use lexicon::{LexiconEntry, TriggerLexicon, DEFAULT_LEXICON};
pub use matcher::{find_triggers, TriggerMatch};
pub use resolve::{precedence_rank, resolve_type, SyntacticContext, POLICY_ID};
pub use tags::{decode_spans, spans_to_tags, tags_to_spans, Span, Tag, TagSequence};

use crate::error::Result;
use crate::lingrep::{LabelMap, ParsedSentence};

/// Runs trigger matching and the attachment rules on one parse.
pub fn extract<S: AsRef<str>>(
    parsed: &ParsedSentence,
    lexicon: &TriggerLexicon,
    labels: &LabelMap,
    aliases: &[S],
) -> Result<Vec<Extraction>> {
    let normalized = labels.apply(parsed);
    let matches = find_triggers(&normalized.surfaces(), lexicon);
    apply_dependency_rules(&normalized, &matches, aliases)
}

use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::Provision;

/// Phrases marking a provision that defines a term.
pub const DEFINITION_CUES: [&str; 4] = ["shall mean", "means", "shall have the meaning", "has the meaning"];

fn cue_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        let alts: Vec<String> = DEFINITION_CUES
            .iter()
            .map(|c| c.split_whitespace().map(regex::escape).collect::<Vec<_>>().join(r"\s+"))
            .collect();
        Regex::new(&format!(r"(?i)\b(?:{})\b", alts.join("|"))).expect("valid cue regex")
    })
}

/// A provision dropped as definitional, with the cue that matched.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinitionDiscard {
    pub contract_id: String,
    pub index: usize,
    pub cue: String,
}

/// Drops provisions containing a definitional cue (case-insensitive, on
/// word boundaries). Survivors keep their order.
pub fn filter_definitions(provisions: &[Provision]) -> Vec<Provision> {
    filter_definitions_with_report(provisions).0
}

pub fn filter_definitions_with_report(provisions: &[Provision]) -> (Vec<Provision>, Vec<DefinitionDiscard>) {
    let re = cue_regex();
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for p in provisions {
        match re.find(&p.text) {
            Some(m) => dropped.push(DefinitionDiscard {
                contract_id: p.contract_id.clone(),
                index: p.index,
                cue: m.as_str().to_lowercase(),
            }),
            None => kept.push(p.clone()),
        }
    }
    (kept, dropped)
}

use serde::{Deserialize, Serialize};

use super::{Provision, HEADER_WINDOW};

/// Lowercased contract type, e.g. `lease` or `employment`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContractType(pub String);

impl ContractType {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl std::fmt::Display for ContractType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Scans the first [`HEADER_WINDOW`] provisions for an all-uppercase line
/// containing `AGREEMENT` and returns the word naming the agreement.
///
/// "All uppercase" means every letter is uppercase; digits and punctuation
/// are ignored. The type is the word right before `AGREEMENT`, or the word
/// after `AGREEMENT OF` when nothing precedes it.
pub fn detect_contract_type(provisions: &[Provision]) -> Option<ContractType> {
    provisions
        .iter()
        .take(HEADER_WINDOW)
        .find_map(|p| heading_type(&p.text))
}

fn heading_type(text: &str) -> Option<ContractType> {
    let mut letters = text.chars().filter(|c| c.is_alphabetic()).peekable();
    letters.peek()?;
    if !letters.all(|c| c.is_uppercase()) {
        return None;
    }
    let words: Vec<String> = text
        .split(|c: char| !(c.is_alphanumeric() || c == '-'))
        .map(|w| w.trim_matches('-'))
        .filter(|w| w.chars().any(char::is_alphabetic))
        .map(str::to_string)
        .collect();
    let at = words.iter().position(|w| w == "AGREEMENT")?;
    let word = if at > 0 {
        words[at - 1].clone()
    } else if words.get(at + 1).map(String::as_str) == Some("OF") {
        words.get(at + 2)?.clone()
    } else {
        return None;
    };
    Some(ContractType(word.to_lowercase()))
}

use std::collections::BTreeMap;

use serde::Serialize;

use super::resolve::precedence_rank;
use super::DeonticType;
use crate::error::{Error, Result};

/// The bundled heuristic trigger table.
pub const DEFAULT_LEXICON: &str = include_str!("../../data/triggers.tsv");

/// One expanded trigger pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LexiconEntry {
    /// Lowercased, whitespace-separated tokens. Never contains `/`.
    pub tokens: Vec<String>,
    /// Ordered by resolution precedence, never empty.
    pub candidate_types: Vec<DeonticType>,
}

impl LexiconEntry {
    pub fn pattern(&self) -> String {
        self.tokens.join(" ")
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Trigger lexicon, entries sorted longest-first.
#[derive(Debug, Clone, Serialize)]
pub struct TriggerLexicon {
    entries: Vec<LexiconEntry>,
}

impl TriggerLexicon {
    /// Parses a `type<TAB>pattern` table. Blank lines and `#` comments are
    /// skipped. Slash alternations are expanded per token (cartesian product)
    /// and duplicate patterns are merged.
    pub fn parse(source: &str) -> Result<Self> {
        let mut merged: BTreeMap<Vec<String>, Vec<DeonticType>> = BTreeMap::new();
        for (lineno, raw) in source.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (ty, pattern) = line
                .split_once('\t')
                .ok_or_else(|| Error::Parse {
                    line: lineno + 1,
                    reason: "expected `type<TAB>pattern`".into(),
                })?;
            let ty: DeonticType = ty.trim().parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                reason: format!("unknown deontic type `{}`", ty.trim()),
            })?;
            if ty.is_none() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    reason: "`None` cannot be a trigger type".into(),
                });
            }
            let expanded = expand_alternations(pattern);
            if expanded.is_empty() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    reason: "empty pattern".into(),
                });
            }
            for tokens in expanded {
                let types = merged.entry(tokens).or_default();
                if !types.contains(&ty) {
                    types.push(ty);
                }
            }
        }
        if merged.is_empty() {
            return Err(Error::Config("trigger lexicon is empty".into()));
        }
        let mut entries: Vec<LexiconEntry> = merged
            .into_iter()
            .map(|(tokens, mut candidate_types)| {
                candidate_types.sort_by_key(|t| precedence_rank(*t));
                LexiconEntry {
                    tokens,
                    candidate_types,
                }
            })
            .collect();
        // Longest first; ties keep lexicographic order from the map.
        entries.sort_by_key(|e| std::cmp::Reverse(e.tokens.len()));
        Ok(TriggerLexicon { entries })
    }

    pub fn bundled() -> Self {
        Self::parse(DEFAULT_LEXICON).expect("bundled lexicon is valid")
    }

    /// Bundled table plus user rows.
    pub fn with_extensions(extra: &str) -> Result<Self> {
        Self::parse(&format!("{DEFAULT_LEXICON}\n{extra}"))
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn get(&self, pattern: &str) -> Option<&LexiconEntry> {
        let tokens: Vec<String> = pattern.split_whitespace().map(str::to_lowercase).collect();
        self.entries.iter().find(|e| e.tokens == tokens)
    }

    pub fn max_len(&self) -> usize {
        self.entries.first().map_or(0, LexiconEntry::len)
    }
}

fn expand_alternations(pattern: &str) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = vec![Vec::new()];
    for token in pattern.split_whitespace() {
        let alts: Vec<String> = token
            .split('/')
            .filter(|a| !a.is_empty())
            .map(str::to_lowercase)
            .collect();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                alts.iter().map(move |alt| {
                    let mut next = prefix.clone();
                    next.push(alt.clone());
                    next
                })
            })
            .collect();
    }
    out.retain(|t| !t.is_empty());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slash_row_expands_to_two_patterns() {
        let lex = TriggerLexicon::parse("Obl\tshall/will be required").unwrap();
        let pats: Vec<String> = lex.entries().iter().map(LexiconEntry::pattern).collect();
        assert_eq!(pats.len(), 2);
        assert!(pats.contains(&"shall be required".to_string()));
        assert!(pats.contains(&"will be required".to_string()));
    }

    #[test]
    fn single_token_row() {
        let lex = TriggerLexicon::parse("Per\tmay").unwrap();
        assert_eq!(lex.entries().len(), 1);
        assert_eq!(lex.entries()[0].candidate_types, vec![DeonticType::Per]);
    }

    #[test]
    fn shared_pattern_merges_in_precedence_order() {
        let lex = TriggerLexicon::bundled();
        let e = lex.get("shall be paid").unwrap();
        assert_eq!(e.candidate_types, vec![DeonticType::Ent, DeonticType::Obl]);
        let e = lex.get("will be paid").unwrap();
        assert_eq!(e.candidate_types, vec![DeonticType::Ent, DeonticType::Obl]);
    }

    #[test]
    fn bundled_table_is_fully_expanded() {
        let lex = TriggerLexicon::bundled();
        assert!(lex.entries().iter().all(|e| e.tokens.iter().all(|t| !t.contains('/'))));
        // 41 rows; 17 carry one two-way alternation and one a four-way
        // alternation; the two `paid` patterns appear under two types.
        assert_eq!(lex.entries().len(), 41 + 17 + 3 - 2);
        for w in lex.entries().windows(2) {
            assert!(w[0].len() >= w[1].len());
        }
        for pat in ["shall not", "will not", "must not", "may not", "can not", "cannot"] {
            assert_eq!(lex.get(pat).unwrap().candidate_types, vec![DeonticType::Pro], "{pat}");
        }
    }

    #[test]
    fn empty_lexicon_is_config_error() {
        assert!(matches!(TriggerLexicon::parse("# nothing\n"), Err(Error::Config(_))));
    }
}

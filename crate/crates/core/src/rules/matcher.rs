use serde::{Deserialize, Serialize};

use super::{DeonticType, TriggerLexicon};

/// One trigger occurrence. `end` is inclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriggerMatch {
    pub pattern: String,
    pub start: usize,
    pub end: usize,
    pub candidate_types: Vec<DeonticType>,
}

impl TriggerMatch {
    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Case-insensitive, token-level, longest-match-first scan.
///
/// Matching proceeds left to right; at each position the longest pattern
/// wins and scanning resumes after it, so reported ranges never overlap and
/// each start index is reported at most once.
pub fn find_triggers<S: AsRef<str>>(tokens: &[S], lexicon: &TriggerLexicon) -> Vec<TriggerMatch> {
    let lowered: Vec<String> = tokens.iter().map(|t| t.as_ref().to_lowercase()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < lowered.len() {
        let hit = lexicon.entries().iter().find(|e| {
            e.len() <= lowered.len() - i
                && e.tokens.iter().zip(&lowered[i..]).all(|(p, t)| p == t)
        });
        match hit {
            Some(e) => {
                out.push(TriggerMatch {
                    pattern: e.pattern(),
                    start: i,
                    end: i + e.len() - 1,
                    candidate_types: e.candidate_types.clone(),
                });
                i += e.len();
            }
            None => i += 1,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    #[test]
    fn longer_pattern_beats_prefix() {
        let lex = TriggerLexicon::bundled();
        let m = find_triggers(&words("Tenant shall not sublet"), &lex);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].pattern, "shall not");
        assert_eq!((m[0].start, m[0].end), (1, 2));
        assert_eq!(m[0].candidate_types, vec![DeonticType::Pro]);
    }

    #[test]
    fn no_trigger_no_match() {
        let lex = TriggerLexicon::bundled();
        assert!(find_triggers(&words("The Premises are located downtown"), &lex).is_empty());
    }

    #[test]
    fn repeated_trigger_reported_per_occurrence() {
        let lex = TriggerLexicon::bundled();
        let m = find_triggers(&words("Tenant shall repair and shall restore"), &lex);
        let starts: Vec<usize> = m.iter().map(|m| m.start).collect();
        assert_eq!(starts, vec![1, 4]);
        assert!(m.iter().all(|m| m.pattern == "shall"));
    }

    #[test]
    fn case_insensitive() {
        let lex = TriggerLexicon::bundled();
        let m = find_triggers(&words("LESSEE SHALL BE PERMITTED to park"), &lex);
        assert_eq!(m[0].pattern, "shall be permitted");
        assert_eq!(m[0].candidate_types, vec![DeonticType::Per]);
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One token of a dependency-parsed sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// 0-based position in the sentence.
    pub index: usize,
    pub surface: String,
    /// Coarse universal part-of-speech tag (VERB, AUX, NOUN, ...).
    pub pos: String,
    /// 0-based index of the syntactic head; the root points at itself.
    pub head: usize,
    pub deprel: String,
    /// UTF-8 byte offsets into the sentence text, end exclusive.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub char_span: Option<(usize, usize)>,
}

impl Token {
    pub fn new(index: usize, surface: &str, pos: &str, head: usize, deprel: &str) -> Self {
        Token {
            index,
            surface: surface.to_string(),
            pos: pos.to_string(),
            head,
            deprel: deprel.to_string(),
            char_span: None,
        }
    }

    pub fn is_root(&self) -> bool {
        self.head == self.index
    }
}

/// A sentence with its dependency tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedSentence {
    pub sentence_id: String,
    pub tokens: Vec<Token>,
    /// Sentence completeness (root of the constituency parse is S).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete: Option<bool>,
    /// Raw sentence text when the source carried it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
}

impl ParsedSentence {
    pub fn new(sentence_id: impl Into<String>, tokens: Vec<Token>) -> Self {
        ParsedSentence {
            sentence_id: sentence_id.into(),
            tokens,
            complete: None,
            text: None,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn root(&self) -> Option<usize> {
        self.tokens.iter().position(Token::is_root)
    }

    /// Dependents of `head`, in sentence order.
    pub fn children(&self, head: usize) -> impl Iterator<Item = &Token> + '_ {
        self.tokens
            .iter()
            .filter(move |t| t.head == head && t.index != head)
    }

    pub fn children_with<'a>(&'a self, head: usize, deprel: &'a str) -> impl Iterator<Item = &'a Token> + 'a {
        self.children(head).filter(move |t| t.deprel == deprel)
    }

    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.surface.as_str()).collect()
    }

    /// Checks that indices are positional, heads are in range and the heads
    /// form a single-rooted acyclic tree.
    pub fn validate(&self) -> Result<()> {
        let err = |reason: String| Error::Structure {
            sentence_id: self.sentence_id.clone(),
            reason,
        };
        if self.tokens.is_empty() {
            return Err(err("sentence has no tokens".into()));
        }
        let n = self.tokens.len();
        for (i, t) in self.tokens.iter().enumerate() {
            if t.index != i {
                return Err(err(format!("token {i} carries index {}", t.index)));
            }
            if t.head >= n {
                return Err(err(format!("token {i} has head {} outside the sentence", t.head)));
            }
        }
        let roots = self.tokens.iter().filter(|t| t.is_root()).count();
        if roots != 1 {
            return Err(err(format!("expected exactly one root, found {roots}")));
        }
        for start in 0..n {
            let mut cur = start;
            let mut steps = 0;
            while !self.tokens[cur].is_root() {
                cur = self.tokens[cur].head;
                steps += 1;
                if steps > n {
                    return Err(err(format!("cyclic heads reachable from token {start}")));
                }
            }
        }
        if let Some(bad) = self.tokens.windows(2).find_map(|w| match (w[0].char_span, w[1].char_span) {
            (Some(a), Some(b)) if b.0 < a.1 => Some(w[1].index),
            _ => None,
        }) {
            return Err(err(format!("char span of token {bad} overlaps its predecessor")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tenant_pays() -> ParsedSentence {
        ParsedSentence::new(
            "s1",
            vec![
                Token::new(0, "Tenant", "PROPN", 1, "nsubj"),
                Token::new(1, "pays", "VERB", 1, "ROOT"),
            ],
        )
    }

    #[test]
    fn valid_tree() {
        let s = tenant_pays();
        s.validate().unwrap();
        assert_eq!(s.root(), Some(1));
        assert_eq!(s.children(1).map(|t| t.index).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn two_roots_rejected() {
        let mut s = tenant_pays();
        s.tokens[0].head = 0;
        assert!(matches!(s.validate(), Err(Error::Structure { .. })));
    }

    #[test]
    fn cycle_rejected() {
        let s = ParsedSentence::new(
            "cyc",
            vec![
                Token::new(0, "a", "X", 1, "dep"),
                Token::new(1, "b", "X", 0, "dep"),
                Token::new(2, "c", "X", 2, "ROOT"),
            ],
        );
        let e = s.validate().unwrap_err().to_string();
        assert!(e.contains("cyc") && e.contains("cyclic"), "{e}");
    }
}

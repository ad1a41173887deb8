use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rules::{spans_to_tags, DeonticType, Span, TagSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Dev, Split::Test];

    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Dev => "dev",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "train" | "training" => Ok(Split::Train),
            "dev" | "val" | "valid" | "validation" | "development" => Ok(Split::Dev),
            "test" => Ok(Split::Test),
            other => Err(Error::Validation(format!("unknown split `{other}`"))),
        }
    }
}

/// One annotated (sentence, agent) pair, possibly from a single annotator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub sentence_id: String,
    pub contract_id: String,
    pub agent: String,
    pub labels: BTreeSet<DeonticType>,
    /// Token spans, end inclusive.
    #[serde(default)]
    pub spans: Vec<Span>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotator_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<Split>,
    /// Sentence tokens the span indices refer to.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tokens: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
}

impl AnnotationRecord {
    pub fn is_none(&self) -> bool {
        self.labels.len() == 1 && self.labels.contains(&DeonticType::None)
    }

    /// Checks the label and span invariants. Bounds are only checked when
    /// tokens are present.
    pub fn validate(&self) -> Result<()> {
        let id = || format!("{}/{}", self.sentence_id, self.agent);
        if self.labels.is_empty() {
            return Err(Error::Validation(format!("{}: empty label set", id())));
        }
        if self.labels.contains(&DeonticType::None) && self.labels.len() > 1 {
            return Err(Error::Validation(format!("{}: None combined with other labels", id())));
        }
        if self.is_none() != self.spans.is_empty() {
            return Err(Error::Validation(format!(
                "{}: labels are {{None}} iff there are no spans",
                id()
            )));
        }
        for s in &self.spans {
            if !self.labels.contains(&s.ty) {
                return Err(Error::Validation(format!("{}: span type {} not in labels", id(), s.ty)));
            }
            if s.start > s.end || (!self.tokens.is_empty() && s.end >= self.tokens.len()) {
                return Err(Error::Validation(format!("{}: span {s:?} out of bounds", id())));
            }
        }
        for (i, a) in self.spans.iter().enumerate() {
            for b in &self.spans[i + 1..] {
                if a.ty == b.ty && a.overlaps(b) {
                    return Err(Error::Validation(format!("{}: overlapping spans {a:?} and {b:?}", id())));
                }
            }
        }
        Ok(())
    }

    /// Lowercased trigger text of a span.
    pub fn span_text(&self, span: &Span) -> Option<String> {
        self.tokens
            .get(span.start..=span.end)
            .map(|t| t.join(" ").to_lowercase())
    }

    /// BIOS tags over `tokens`.
    pub fn tags(&self) -> Result<TagSequence> {
        spans_to_tags(&self.spans, self.tokens.len())
            .map_err(|e| Error::Validation(format!("{}/{}: {e}", self.sentence_id, self.agent)))
    }
}

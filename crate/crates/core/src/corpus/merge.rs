use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::AnnotationRecord;
use crate::error::{Error, Result};
use crate::rules::{DeonticType, Span};

/// Result of majority voting over one (sentence, agent) triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum MergeOutcome {
    Merged {
        record: AnnotationRecord,
        /// Annotators disagreed on the spans of a majority type.
        span_flag: bool,
    },
    Discard {
        sentence_id: String,
        agent: String,
    },
}

/// Span union for the majority types.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanUnion {
    pub spans: Vec<Span>,
    /// Set when the annotators who marked a majority type did not all mark
    /// the same intervals for it.
    pub flagged: bool,
}

fn check_triple(annotations: &[AnnotationRecord]) -> Result<()> {
    if annotations.len() != 3 {
        return Err(Error::Usage(format!(
            "majority merge needs exactly 3 annotations, got {}",
            annotations.len()
        )));
    }
    let first = &annotations[0];
    for a in annotations {
        if a.sentence_id != first.sentence_id || a.agent != first.agent {
            return Err(Error::Usage(format!(
                "annotations mix ({}, {}) with ({}, {})",
                first.sentence_id, first.agent, a.sentence_id, a.agent
            )));
        }
        a.validate()?;
    }
    Ok(())
}

/// Keeps each type marked by at least two of the three annotators. None is
/// voted on like any other label and only wins when no real type does.
pub fn merge_majority(annotations: &[AnnotationRecord]) -> Result<MergeOutcome> {
    check_triple(annotations)?;
    let mut votes: BTreeMap<DeonticType, usize> = BTreeMap::new();
    for a in annotations {
        for t in &a.labels {
            *votes.entry(*t).or_default() += 1;
        }
    }
    let kept: BTreeSet<DeonticType> = votes
        .iter()
        .filter(|(t, &n)| !t.is_none() && n >= 2)
        .map(|(t, _)| *t)
        .collect();
    let first = &annotations[0];
    let (labels, union) = if !kept.is_empty() {
        let union = union_spans(annotations, &kept);
        (kept, union)
    } else if votes.get(&DeonticType::None).copied().unwrap_or(0) >= 2 {
        (BTreeSet::from([DeonticType::None]), SpanUnion::default())
    } else {
        return Ok(MergeOutcome::Discard {
            sentence_id: first.sentence_id.clone(),
            agent: first.agent.clone(),
        });
    };
    let tokens = annotations
        .iter()
        .map(|a| &a.tokens)
        .find(|t| !t.is_empty())
        .cloned()
        .unwrap_or_default();
    Ok(MergeOutcome::Merged {
        record: AnnotationRecord {
            sentence_id: first.sentence_id.clone(),
            contract_id: first.contract_id.clone(),
            agent: first.agent.clone(),
            labels,
            spans: union.spans,
            annotator_id: None,
            split: annotations.iter().find_map(|a| a.split),
            tokens,
            text: annotations.iter().find_map(|a| a.text.clone()),
        },
        span_flag: union.flagged,
    })
}

/// Unions the annotators' intervals per majority type, coalescing
/// intervals that overlap or touch. Gaps are never bridged.
pub fn union_spans(annotations: &[AnnotationRecord], majority_types: &BTreeSet<DeonticType>) -> SpanUnion {
    let mut spans = Vec::new();
    let mut flagged = false;
    for &ty in majority_types {
        let per_annotator: Vec<BTreeSet<(usize, usize)>> = annotations
            .iter()
            .map(|a| a.spans.iter().filter(|s| s.ty == ty).map(|s| (s.start, s.end)).collect())
            .filter(|set: &BTreeSet<_>| !set.is_empty())
            .collect();
        if per_annotator.windows(2).any(|w| w[0] != w[1]) {
            flagged = true;
        }
        let all: BTreeSet<(usize, usize)> = per_annotator.into_iter().flatten().collect();
        let mut cur: Option<(usize, usize)> = None;
        for (s, e) in all {
            cur = match cur {
                Some((cs, ce)) if s <= ce + 1 => Some((cs, ce.max(e))),
                Some((cs, ce)) => {
                    spans.push(Span::new(ty, cs, ce));
                    Some((s, e))
                }
                None => Some((s, e)),
            };
        }
        if let Some((cs, ce)) = cur {
            spans.push(Span::new(ty, cs, ce));
        }
    }
    spans.sort_by_key(|s| (s.start, s.end, s.ty));
    SpanUnion { spans, flagged }
}

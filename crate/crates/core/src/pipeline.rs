//! End-to-end glue shared by the command line and the browser demo.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::AnnotationRecord;
use crate::error::{Error, Result};
use crate::ingest::{
    detect_contract_type, expand_per_agent, extract_aliases, extract_provisions, fallback_mentions,
    filter_definitions_with_report, merge_bullets, segment_sentences, AgentAlias, AgentSentence, AliasConfig,
    AliasExtraction, CompletenessOracle, DefinitionDiscard, EntityMention, Provision, SentenceRecord,
    SentenceSplitter,
};
use crate::eval::{classification_metrics, span_metrics, MacroOver, MetricsReport, Mode};
use crate::lingrep::{align_tokens, LabelMap, ParsedSentence};
use crate::rules::{
    extract, extraction_spans, majority_class_baseline, majority_span_baseline, spans_to_tags, tags_to_spans,
    to_multilabel, DeonticType, Extraction, SpanBaselineMap, TagSequence, TriggerLexicon, TypeDistribution, POLICY_ID,
};

/// Everything `ingest` produces for one contract.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestOutput {
    pub contract_id: String,
    pub contract_type: Option<String>,
    pub provisions: Vec<Provision>,
    pub sentences: Vec<SentenceRecord>,
    pub discards: Vec<DefinitionDiscard>,
    /// Whether bullet merging ran (it needs completeness flags).
    pub bullets_merged: bool,
}

/// HTML to provisions and sentences. Without a completeness oracle the
/// bullet-merging step is skipped. A provision whose text was folded into a
/// merged child yields no sentences of its own.
pub fn ingest_contract<S: SentenceSplitter + ?Sized>(
    contract_id: &str,
    html: &[u8],
    completeness: Option<&dyn CompletenessOracle>,
    splitter: &S,
) -> Result<IngestOutput> {
    let raw = extract_provisions(contract_id, html)?;
    let contract_type = detect_contract_type(&raw).map(|t| t.0);
    let (kept, discards) = filter_definitions_with_report(&raw);
    let (provisions, absorbed) = match completeness {
        Some(oracle) => {
            let merged = merge_bullets(&kept, oracle)?;
            let original: BTreeMap<usize, &str> = kept.iter().map(|p| (p.index, p.text.as_str())).collect();
            let absorbed: BTreeSet<usize> = merged
                .iter()
                .filter(|p| original.get(&p.index).is_some_and(|t| *t != p.text))
                .filter_map(|p| p.parent_index)
                .collect();
            (merged, absorbed)
        }
        None => (kept, BTreeSet::new()),
    };
    let sentences = provisions
        .iter()
        .filter(|p| !absorbed.contains(&p.index))
        .flat_map(|p| segment_sentences(p, splitter))
        .map(|mut s| {
            let trimmed = s.text.trim_end();
            s.char_span.1 = s.char_span.0 + trimmed.len();
            s.text = trimmed.to_string();
            s
        })
        .filter(|s| !s.text.is_empty())
        .collect();
    Ok(IngestOutput {
        contract_id: contract_id.to_string(),
        contract_type,
        provisions,
        sentences,
        discards,
        bullets_merged: completeness.is_some(),
    })
}

/// Aliases from the header window, using `mentions` when given and the
/// capitalised-run fallback otherwise.
pub fn contract_aliases(provisions: &[Provision], mentions: Option<&[EntityMention]>, config: &AliasConfig) -> Result<AliasExtraction> {
    match mentions {
        Some(m) => extract_aliases(provisions, m, config),
        None => extract_aliases(provisions, &fallback_mentions(provisions), config),
    }
}

/// Per-agent copies of every sentence.
pub fn agent_sentences(sentences: &[SentenceRecord], aliases: &[AgentAlias]) -> Vec<AgentSentence> {
    sentences.iter().flat_map(|s| expand_per_agent(s, aliases)).collect()
}

/// Trigger span in a prediction file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedSpan {
    #[serde(rename = "type")]
    pub ty: DeonticType,
    pub start: usize,
    pub end: usize,
    pub text: String,
}

/// One prediction line. It also parses as an [`AnnotationRecord`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub sentence_id: String,
    pub contract_id: String,
    pub agent: String,
    pub labels: BTreeSet<DeonticType>,
    pub spans: Vec<PredictedSpan>,
}

/// Extractions for a sentence, tagged with its id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceExtractions {
    pub sentence_id: String,
    pub extractions: Vec<Extraction>,
}

/// Rule-based prediction for `agent` on one parse; `aliases` is the full
/// alias list of the contract.
pub fn rule_prediction<S: AsRef<str>>(
    parsed: &ParsedSentence,
    contract_id: &str,
    agent: &str,
    aliases: &[S],
    lexicon: &TriggerLexicon,
    labels: &LabelMap,
) -> Result<(Prediction, Vec<Extraction>)> {
    let extractions = extract(parsed, lexicon, labels, aliases)?;
    let spans = extraction_spans(&extractions, agent)
        .into_iter()
        .map(|s| PredictedSpan {
            ty: s.ty,
            start: s.start,
            end: s.end,
            text: parsed.tokens[s.start..=s.end]
                .iter()
                .map(|t| t.surface.as_str())
                .collect::<Vec<_>>()
                .join(" "),
        })
        .collect();
    Ok((
        Prediction {
            sentence_id: parsed.sentence_id.clone(),
            contract_id: contract_id.to_string(),
            agent: agent.to_string(),
            labels: to_multilabel(&extractions, agent),
            spans,
        },
        extractions,
    ))
}

/// Predictions for every corpus record whose sentence has a parse. The
/// alias list of a contract is the set of agents annotated in it.
pub fn predict_corpus(
    records: &[AnnotationRecord],
    parses: &BTreeMap<String, ParsedSentence>,
    lexicon: &TriggerLexicon,
    labels: &LabelMap,
) -> Result<Vec<Prediction>> {
    let mut aliases: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for r in records {
        aliases.entry(&r.contract_id).or_default().insert(&r.agent);
    }
    records
        .iter()
        .map(|r| {
            let parsed = parses.get(&r.sentence_id).ok_or_else(|| {
                Error::Validation(format!("no parse for sentence {}", r.sentence_id))
            })?;
            if !r.tokens.is_empty() && r.tokens.len() != parsed.tokens.len() {
                return Err(Error::Validation(format!(
                    "sentence {}: parse has {} tokens, record has {}",
                    r.sentence_id,
                    parsed.tokens.len(),
                    r.tokens.len()
                )));
            }
            let list: Vec<&str> = aliases[r.contract_id.as_str()].iter().copied().collect();
            rule_prediction(parsed, &r.contract_id, &r.agent, &list, lexicon, labels).map(|(p, _)| p)
        })
        .collect()
}

/// BIOS tags of a prediction over `n` tokens. Spans that collide with an
/// earlier one are dropped so the sequence stays valid.
pub fn prediction_tags(spans: &[(DeonticType, usize, usize)], n: usize) -> Result<TagSequence> {
    let mut kept: Vec<crate::rules::Span> = Vec::new();
    for &(ty, s, e) in spans {
        let span = crate::rules::Span::new(ty, s, e);
        if e < n && kept.iter().all(|k| !k.overlaps(&span)) {
            kept.push(span);
        }
    }
    spans_to_tags(&kept, n)
}

/// Rule-based predictions for every (sentence, alias) pair. Sentences
/// mentioning no alias are skipped; each remaining sentence needs a parse
/// whose tokens align with its text.
pub fn predict_sentences(
    sentences: &[SentenceRecord],
    aliases: &[AgentAlias],
    parses: &BTreeMap<String, ParsedSentence>,
    lexicon: &TriggerLexicon,
    labels: &LabelMap,
) -> Result<(Vec<Prediction>, Vec<SentenceExtractions>)> {
    let names: Vec<&str> = aliases.iter().map(|a| a.alias.as_str()).collect();
    let mut predictions = Vec::new();
    let mut traces = Vec::new();
    for s in sentences {
        let agents = expand_per_agent(s, aliases);
        if agents.is_empty() {
            continue;
        }
        let parsed = parses
            .get(&s.sentence_id)
            .ok_or_else(|| Error::Validation(format!("no parse for sentence {}", s.sentence_id)))?;
        let parsed = align_tokens(&s.text, parsed).map_err(|e| match e {
            Error::Alignment { offset, reason } => Error::Alignment {
                offset,
                reason: format!("sentence {}: {reason}", s.sentence_id),
            },
            other => other,
        })?;
        let extractions = extract(&parsed, lexicon, labels, &names)?;
        for a in agents {
            let (p, _) = rule_prediction(&parsed, &s.contract_id, &a.agent.alias, &names, lexicon, labels)?;
            predictions.push(p);
        }
        traces.push(SentenceExtractions {
            sentence_id: s.sentence_id.clone(),
            extractions,
        });
    }
    Ok((predictions, traces))
}

/// Pairs each gold record with the prediction for the same (sentence,
/// agent). A gold record without prediction is an error.
pub fn pair_records<'a>(
    predictions: &'a [AnnotationRecord],
    golds: &'a [AnnotationRecord],
) -> Result<Vec<(&'a AnnotationRecord, &'a AnnotationRecord)>> {
    let index: BTreeMap<(&str, &str), &AnnotationRecord> = predictions
        .iter()
        .map(|p| ((p.sentence_id.as_str(), p.agent.as_str()), p))
        .collect();
    golds
        .iter()
        .map(|g| {
            index
                .get(&(g.sentence_id.as_str(), g.agent.as_str()))
                .map(|p| (*p, g))
                .ok_or_else(|| Error::Usage(format!("no prediction for ({}, {})", g.sentence_id, g.agent)))
        })
        .collect()
}

/// Group name used for pooled records.
pub const POOLED_GROUP: &str = "Both";

/// Metrics per agent group plus the pooled group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationSummary {
    pub mode: Mode,
    pub policy_id: String,
    pub groups: BTreeMap<String, MetricsReport>,
}

impl EvaluationSummary {
    /// `group,mode,accuracy,precision,recall,f1`, values in percent.
    pub fn csv(&self) -> String {
        let mode = match self.mode {
            Mode::Classification => "classification",
            Mode::SpanLabeled => "labeled",
            Mode::SpanUnlabeled => "unlabeled",
        };
        let mut out = String::from("group,mode,accuracy,precision,recall,f1\n");
        for (g, r) in &self.groups {
            out.push_str(&format!("{g},{mode},{}\n", r.csv_values()));
        }
        out
    }
}

fn grouped<'a, F: Fn(&str) -> String>(
    pairs: Vec<(&'a AnnotationRecord, &'a AnnotationRecord)>,
    group_of: F,
) -> BTreeMap<String, Vec<(&'a AnnotationRecord, &'a AnnotationRecord)>> {
    let mut out: BTreeMap<String, Vec<_>> = BTreeMap::new();
    for (p, g) in pairs {
        out.entry(group_of(&g.agent)).or_default().push((p, g));
        out.entry(POOLED_GROUP.to_string()).or_default().push((p, g));
    }
    out
}

/// Classification metrics per agent group and pooled.
pub fn evaluate_classification<F: Fn(&str) -> String>(
    predictions: &[AnnotationRecord],
    golds: &[AnnotationRecord],
    group_of: F,
) -> Result<EvaluationSummary> {
    let mut groups = BTreeMap::new();
    for (name, pairs) in grouped(pair_records(predictions, golds)?, group_of) {
        let p: Vec<_> = pairs.iter().map(|(p, _)| p.labels.clone()).collect();
        let g: Vec<_> = pairs.iter().map(|(_, g)| g.labels.clone()).collect();
        groups.insert(name, classification_metrics(&p, &g)?);
    }
    Ok(EvaluationSummary {
        mode: Mode::Classification,
        policy_id: POLICY_ID.to_string(),
        groups,
    })
}

/// Span metrics per agent group and pooled. Gold records need tokens;
/// predicted spans are laid over the gold token count.
pub fn evaluate_spans<F: Fn(&str) -> String>(
    predictions: &[AnnotationRecord],
    golds: &[AnnotationRecord],
    mode: Mode,
    macro_over: MacroOver,
    group_of: F,
) -> Result<EvaluationSummary> {
    let mut groups = BTreeMap::new();
    for (name, pairs) in grouped(pair_records(predictions, golds)?, group_of) {
        let tagged = pairs
            .iter()
            .map(|(p, g)| {
                if g.tokens.is_empty() {
                    return Err(Error::Validation(format!("gold record {}/{} has no tokens", g.sentence_id, g.agent)));
                }
                let spans: Vec<_> = p.spans.iter().map(|s| (s.ty, s.start, s.end)).collect();
                Ok((prediction_tags(&spans, g.tokens.len())?, g.tags()?))
            })
            .collect::<Result<Vec<_>>>()?;
        groups.insert(name, span_metrics(&tagged, mode, macro_over)?);
    }
    Ok(EvaluationSummary {
        mode,
        policy_id: POLICY_ID.to_string(),
        groups,
    })
}

/// Majority-class predictions: the train-split majority label of the
/// record's agent group.
pub fn majority_class_predictions<F: Fn(&str) -> String>(
    train: &[AnnotationRecord],
    targets: &[AnnotationRecord],
    group_of: F,
) -> Result<Vec<AnnotationRecord>> {
    let mut dist = TypeDistribution::default();
    for r in train {
        dist.add(&group_of(&r.agent), &r.labels);
    }
    targets
        .iter()
        .map(|r| {
            let labels = majority_class_baseline(&group_of(&r.agent), &dist)?;
            Ok(AnnotationRecord {
                labels,
                spans: Vec::new(),
                annotator_id: None,
                ..r.clone()
            })
        })
        .collect()
}

/// Majority span predictions: every `shall` gets the group's single tag.
pub fn majority_span_predictions<F: Fn(&str) -> String>(
    targets: &[AnnotationRecord],
    map: &SpanBaselineMap,
    group_of: F,
) -> Result<Vec<AnnotationRecord>> {
    targets
        .iter()
        .map(|r| {
            let tags = majority_span_baseline(&r.tokens, &group_of(&r.agent), map)?;
            let spans = tags_to_spans(&tags);
            let labels = if spans.is_empty() {
                BTreeSet::from([DeonticType::None])
            } else {
                spans.iter().map(|s| s.ty).collect()
            };
            Ok(AnnotationRecord {
                labels,
                spans,
                annotator_id: None,
                ..r.clone()
            })
        })
        .collect()
}

/// Pretty JSON with a trailing newline, the format of every report file.
pub fn report_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::RuleSplitter;
    use std::collections::HashMap;

    #[test]
    fn merged_parent_yields_no_sentence() {
        let html = b"<p>Tenant shall provide the following:</p><p>(a) proof of insurance.</p>";
        let flags: HashMap<String, bool> = [("c:0".to_string(), true), ("c:1".to_string(), false)].into();
        let out = ingest_contract("c", html, Some(&flags), &RuleSplitter::default()).unwrap();
        let texts: Vec<&str> = out.sentences.iter().map(|s| s.text.as_str()).collect();
        assert_eq!(texts, vec!["Tenant shall provide (a) proof of insurance."]);
        let skipped = ingest_contract("c", html, None, &RuleSplitter::default()).unwrap();
        assert_eq!(skipped.sentences.len(), 2);
        assert!(!skipped.bullets_merged);
    }
}

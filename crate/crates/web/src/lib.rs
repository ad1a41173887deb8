//! Browser bindings: rule extraction on pasted CoNLL-U, Krippendorff's
//! alpha on a reliability matrix, and span scoring of BIOS tag lines.
//! Every entry point returns JSON; failures come back as `{"error": ...}`.

use std::collections::BTreeMap;

use deontic_core::corpus::krippendorff_alpha_nominal;
use deontic_core::eval::{span_metrics, MacroOver, MetricsReport, Mode};
use deontic_core::lingrep::{read_conllu_str, LabelMap};
use deontic_core::rules::{extract, extraction_spans, spans_to_tags, to_multilabel, DeonticType, Extraction, TagSequence, TriggerLexicon};
use serde::Serialize;
use serde_json::Value;
use wasm_bindgen::prelude::wasm_bindgen;

#[derive(Debug, Serialize)]
pub struct AgentView {
    pub labels: Vec<DeonticType>,
    pub tags: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct SentenceView {
    pub sentence_id: String,
    pub tokens: Vec<String>,
    pub extractions: Vec<Extraction>,
    pub agents: BTreeMap<String, AgentView>,
}

/// Runs the rule engine on every sentence of `conllu` for the
/// comma-separated `aliases`. UD labels are mapped to the classic set.
pub fn extract_sentences(conllu: &str, aliases: &str) -> Result<Vec<SentenceView>, String> {
    let aliases: Vec<&str> = aliases.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
    if aliases.is_empty() {
        return Err("give at least one agent alias".into());
    }
    let lexicon = TriggerLexicon::bundled();
    let labels = LabelMap::default();
    let parsed = read_conllu_str(conllu).map_err(|e| e.to_string())?;
    parsed
        .iter()
        .map(|p| {
            let extractions = extract(p, &lexicon, &labels, &aliases).map_err(|e| e.to_string())?;
            let agents = aliases
                .iter()
                .map(|a| {
                    let spans = extraction_spans(&extractions, a);
                    let tags = spans_to_tags(&spans, p.tokens.len()).map_err(|e| e.to_string())?;
                    let view = AgentView {
                        labels: to_multilabel(&extractions, a).into_iter().collect(),
                        tags: tags.to_strings(),
                    };
                    Ok((a.to_string(), view))
                })
                .collect::<Result<_, String>>()?;
            Ok(SentenceView {
                sentence_id: p.sentence_id.clone(),
                tokens: p.tokens.iter().map(|t| t.surface.clone()).collect(),
                extractions,
                agents,
            })
        })
        .collect()
}

/// Alpha for a JSON matrix of items x annotators; cells are strings,
/// numbers or null for a missing value.
pub fn alpha_of(matrix: &str) -> Result<f64, String> {
    let rows: Vec<Vec<Value>> = serde_json::from_str(matrix).map_err(|e| format!("matrix: {e}"))?;
    let data: Vec<Vec<Option<String>>> = rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|c| match c {
                    Value::Null => None,
                    Value::String(s) => Some(s),
                    other => Some(other.to_string()),
                })
                .collect()
        })
        .collect();
    krippendorff_alpha_nominal(&data).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct Scores {
    pub labeled: MetricsReport,
    pub unlabeled: MetricsReport,
}

fn tag_lines(text: &str) -> Result<Vec<TagSequence>, String> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| {
            TagSequence::parse(&l.split_whitespace().collect::<Vec<_>>()).map_err(|e| format!("line {}: {e}", i + 1))
        })
        .collect()
}

/// Labeled and unlabeled span scores; one sentence per line, tags
/// separated by spaces.
pub fn score_tag_lines(pred: &str, gold: &str) -> Result<Scores, String> {
    let (p, g) = (tag_lines(pred)?, tag_lines(gold)?);
    if p.len() != g.len() {
        return Err(format!("{} predicted lines for {} gold lines", p.len(), g.len()));
    }
    let pairs: Vec<_> = p.into_iter().zip(g).collect();
    let run = |mode| span_metrics(&pairs, mode, MacroOver::Supported).map_err(|e| e.to_string());
    Ok(Scores {
        labeled: run(Mode::SpanLabeled)?,
        unlabeled: run(Mode::SpanUnlabeled)?,
    })
}

fn respond<T: Serialize>(r: Result<T, String>) -> String {
    let v = match r {
        Ok(v) => serde_json::to_value(v).unwrap_or_else(|e| serde_json::json!({ "error": e.to_string() })),
        Err(e) => serde_json::json!({ "error": e }),
    };
    v.to_string()
}

#[wasm_bindgen]
pub fn extract_json(conllu: &str, aliases: &str) -> String {
    respond(extract_sentences(conllu, aliases))
}

#[wasm_bindgen]
pub fn alpha_json(matrix: &str) -> String {
    respond(alpha_of(matrix).map(|a| serde_json::json!({ "alpha": a })))
}

#[wasm_bindgen]
pub fn score_json(pred: &str, gold: &str) -> String {
    respond(score_tag_lines(pred, gold))
}

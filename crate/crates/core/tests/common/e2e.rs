//! The bundled lease contract run through the library, artifact by artifact.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use deontic_core::corpus::AnnotationRecord;
use deontic_core::eval::{MacroOver, Mode};
use deontic_core::ingest::{AliasConfig, RuleSplitter};
use deontic_core::jsonl;
use deontic_core::lingrep::{read_conllu_str, CompletenessRecord, LabelMap};
use deontic_core::pipeline::*;
use deontic_core::rules::TriggerLexicon;

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/contract")
}

pub fn golden_dir() -> PathBuf {
    fixture_dir().join("golden")
}

/// (file name, content) for every artifact of the run.
pub fn artifacts() -> Vec<(String, String)> {
    let dir = fixture_dir();
    let read = |name: &str| std::fs::read_to_string(dir.join(name)).unwrap();
    let flags: HashMap<String, bool> = jsonl::read_str::<CompletenessRecord>(&read("lease.completeness.jsonl"))
        .unwrap()
        .into_iter()
        .map(|r| (r.provision_key, r.complete))
        .collect();
    let html = std::fs::read(dir.join("lease.html")).unwrap();
    let ingest = ingest_contract("lease", &html, Some(&flags), &RuleSplitter::default()).unwrap();
    let config = AliasConfig { threshold: 1, ..AliasConfig::default() };
    let aliases = contract_aliases(&ingest.provisions, None, &config).unwrap().aliases;
    let parses: BTreeMap<_, _> = read_conllu_str(&read("lease.conllu"))
        .unwrap()
        .into_iter()
        .map(|p| (p.sentence_id.clone(), p))
        .collect();
    let (predictions, extractions) =
        predict_sentences(&ingest.sentences, &aliases, &parses, &TriggerLexicon::bundled(), &LabelMap::default())
            .unwrap();
    let predicted: Vec<AnnotationRecord> = jsonl::read_str(&jsonl::to_string(&predictions).unwrap()).unwrap();
    let gold: Vec<AnnotationRecord> = jsonl::read_str(&read("lease.gold.jsonl")).unwrap();
    let group = |a: &str| config.group_of(a);
    let cls = evaluate_classification(&predicted, &gold, group).unwrap();
    let labeled = evaluate_spans(&predicted, &gold, Mode::SpanLabeled, MacroOver::Supported, group).unwrap();
    let unlabeled = evaluate_spans(&predicted, &gold, Mode::SpanUnlabeled, MacroOver::Supported, group).unwrap();
    vec![
        ("provisions.jsonl".into(), jsonl::to_string(&ingest.provisions).unwrap()),
        ("sentences.jsonl".into(), jsonl::to_string(&ingest.sentences).unwrap()),
        ("discards.jsonl".into(), jsonl::to_string(&ingest.discards).unwrap()),
        ("aliases.jsonl".into(), jsonl::to_string(&aliases).unwrap()),
        ("agent_sentences.jsonl".into(), jsonl::to_string(&agent_sentences(&ingest.sentences, &aliases)).unwrap()),
        ("extractions.jsonl".into(), jsonl::to_string(&extractions).unwrap()),
        ("predictions.jsonl".into(), jsonl::to_string(&predictions).unwrap()),
        ("eval_cls.json".into(), report_json(&cls).unwrap()),
        ("eval_cls.csv".into(), cls.csv()),
        ("eval_span_labeled.json".into(), report_json(&labeled).unwrap()),
        ("eval_span_labeled.csv".into(), labeled.csv()),
        ("eval_span_unlabeled.json".into(), report_json(&unlabeled).unwrap()),
        ("eval_span_unlabeled.csv".into(), unlabeled.csv()),
    ]
}

/// Names of artifacts whose content differs from the golden copy.
pub fn golden_mismatches(produced: &[(String, String)]) -> Vec<String> {
    produced
        .iter()
        .filter(|(name, content)| std::fs::read_to_string(golden_dir().join(name)).ok().as_deref() != Some(content))
        .map(|(name, _)| name.clone())
        .collect()
}

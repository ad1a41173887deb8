use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::AnnotationRecord;
use crate::rules::DeonticType;

/// Closed list used to call a trigger modal: it contains one of these
/// tokens.
pub const MODAL_AUXILIARIES: [&str; 10] = [
    "shall", "will", "may", "must", "can", "could", "should", "would", "might", "ought",
];

/// Counts for one split.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCounts {
    /// (sentence, agent) records.
    pub records: usize,
    pub unique_sentences: usize,
    /// Trigger spans plus records labelled None.
    pub spans: usize,
    /// Trigger spans per type; the None entry counts None records.
    pub per_type: BTreeMap<DeonticType, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriggerCount {
    pub trigger: String,
    pub count: usize,
}

/// Corpus statistics. Rates are fractions in [0, 1].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub records: usize,
    pub unique_sentences: usize,
    pub contracts: usize,
    /// Keyed by split name, `unassigned`, and `all`.
    pub splits: BTreeMap<String, SplitCounts>,
    /// Agent group to per-type span counts (None counts records).
    pub type_distribution: BTreeMap<String, BTreeMap<DeonticType, usize>>,
    pub top_triggers: BTreeMap<DeonticType, Vec<TriggerCount>>,
    pub annotated_triggers: usize,
    pub unique_triggers: usize,
    /// Every trigger by descending count.
    pub trigger_counts: Vec<TriggerCount>,
    pub shall_share: f64,
    pub multi_trigger_rate: f64,
    pub multi_type_given_multi_trigger: f64,
    pub none_rate: f64,
    pub non_modal_unique_share: f64,
    pub non_modal_span_share: f64,
    /// Spans whose text could not be read because tokens were missing.
    pub spans_without_text: usize,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

pub fn is_modal(trigger: &str) -> bool {
    trigger.split_whitespace().any(|w| MODAL_AUXILIARIES.contains(&w))
}

fn sort_counts(map: BTreeMap<String, usize>) -> Vec<TriggerCount> {
    let mut v: Vec<TriggerCount> = map.into_iter().map(|(trigger, count)| TriggerCount { trigger, count }).collect();
    v.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.trigger.cmp(&b.trigger)));
    v
}

/// Statistics over merged records; `group_of` maps an agent alias to its
/// reporting group.
pub fn compute_stats<F: Fn(&str) -> String>(records: &[AnnotationRecord], group_of: F, top_k: usize) -> StatsReport {
    let mut report = StatsReport {
        records: records.len(),
        ..StatsReport::default()
    };
    let mut sentences_by_split: BTreeMap<String, BTreeSet<&str>> = BTreeMap::new();
    let mut contracts = BTreeSet::new();
    let mut per_type_triggers: BTreeMap<DeonticType, BTreeMap<String, usize>> = BTreeMap::new();
    let mut all_triggers: BTreeMap<String, usize> = BTreeMap::new();
    let mut multi_trigger = 0;
    let mut multi_type = 0;
    let mut none_records = 0;
    let mut modal_spans = 0;

    for r in records {
        contracts.insert(r.contract_id.as_str());
        let split = r.split.map(|s| s.name().to_string()).unwrap_or_else(|| "unassigned".into());
        for key in [split, "all".to_string()] {
            let c = report.splits.entry(key.clone()).or_default();
            c.records += 1;
            sentences_by_split.entry(key).or_default().insert(&r.sentence_id);
            if r.is_none() {
                c.spans += 1;
                *c.per_type.entry(DeonticType::None).or_default() += 1;
            }
            for s in &r.spans {
                c.spans += 1;
                *c.per_type.entry(s.ty).or_default() += 1;
            }
        }
        let dist = report.type_distribution.entry(group_of(&r.agent)).or_default();
        if r.is_none() {
            none_records += 1;
            *dist.entry(DeonticType::None).or_default() += 1;
        }
        for s in &r.spans {
            *dist.entry(s.ty).or_default() += 1;
            report.annotated_triggers += 1;
            match r.span_text(s) {
                Some(text) => {
                    if is_modal(&text) {
                        modal_spans += 1;
                    }
                    *per_type_triggers.entry(s.ty).or_default().entry(text.clone()).or_default() += 1;
                    *all_triggers.entry(text).or_default() += 1;
                }
                None => report.spans_without_text += 1,
            }
        }
        if r.spans.len() >= 2 {
            multi_trigger += 1;
            if r.spans.iter().map(|s| s.ty).collect::<BTreeSet<_>>().len() >= 2 {
                multi_type += 1;
            }
        }
    }
    for (key, set) in sentences_by_split {
        if let Some(c) = report.splits.get_mut(&key) {
            c.unique_sentences = set.len();
        }
    }
    report.unique_sentences = report.splits.get("all").map_or(0, |c| c.unique_sentences);
    report.contracts = contracts.len();
    report.unique_triggers = all_triggers.len();
    let with_text = report.annotated_triggers - report.spans_without_text;
    report.shall_share = ratio(all_triggers.get("shall").copied().unwrap_or(0), with_text);
    report.non_modal_unique_share = ratio(all_triggers.keys().filter(|t| !is_modal(t)).count(), all_triggers.len());
    report.non_modal_span_share = ratio(with_text - modal_spans, with_text);
    report.multi_trigger_rate = ratio(multi_trigger, records.len());
    report.multi_type_given_multi_trigger = ratio(multi_type, multi_trigger);
    report.none_rate = ratio(none_records, records.len());
    report.top_triggers = per_type_triggers
        .into_iter()
        .map(|(ty, m)| (ty, sort_counts(m).into_iter().take(top_k).collect()))
        .collect();
    report.trigger_counts = sort_counts(all_triggers);
    report
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl StatsReport {
    /// Split, record and span counts followed by per-type columns.
    pub fn split_table_csv(&self) -> String {
        let mut out = String::from("split,sentences,spans");
        for t in DeonticType::ALL {
            write!(out, ",{}", t.name()).unwrap();
        }
        out.push('\n');
        let order = ["train", "dev", "test", "unassigned", "all"];
        for key in order {
            if let Some(c) = self.splits.get(key) {
                write!(out, "{key},{},{}", c.records, c.spans).unwrap();
                for t in DeonticType::ALL {
                    write!(out, ",{}", c.per_type.get(&t).copied().unwrap_or(0)).unwrap();
                }
                out.push('\n');
            }
        }
        out
    }

    /// One row per (type, rank) of the top triggers.
    pub fn trigger_table_csv(&self) -> String {
        let mut out = String::from("type,rank,trigger,count\n");
        for (ty, list) in &self.top_triggers {
            for (i, t) in list.iter().enumerate() {
                writeln!(out, "{},{},{},{}", ty.name(), i + 1, csv_field(&t.trigger), t.count).unwrap();
            }
        }
        out
    }
}

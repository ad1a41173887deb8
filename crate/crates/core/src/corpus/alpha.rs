use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::AnnotationRecord;
use crate::error::{Error, Result};
use crate::rules::{DeonticType, Span};

/// Items x annotators matrix of nominal values; `None` marks a missing
/// annotation.
pub type ReliabilityData<V> = Vec<Vec<Option<V>>>;

/// Nominal Krippendorff's alpha from the coincidence matrix.
///
/// Only items with at least two values are pairable. With no pairable
/// values alpha is undefined; with a single distinct value it is 1.
pub fn krippendorff_alpha_nominal<V: Ord + Clone>(data: &[Vec<Option<V>>]) -> Result<f64> {
    let mut coincidence: BTreeMap<(V, V), f64> = BTreeMap::new();
    for unit in data {
        let values: Vec<&V> = unit.iter().flatten().collect();
        let m = values.len();
        if m < 2 {
            continue;
        }
        let w = 1.0 / (m - 1) as f64;
        for (i, a) in values.iter().enumerate() {
            for (j, b) in values.iter().enumerate() {
                if i != j {
                    *coincidence.entry(((*a).clone(), (*b).clone())).or_default() += w;
                }
            }
        }
    }
    let mut marginals: BTreeMap<&V, f64> = BTreeMap::new();
    for ((c, _), o) in &coincidence {
        *marginals.entry(c).or_default() += o;
    }
    let n: f64 = marginals.values().sum();
    if n < 2.0 {
        return Err(Error::Undefined(
            "alpha needs at least two pairable values (an item coded by two annotators)".into(),
        ));
    }
    if marginals.len() == 1 {
        return Ok(1.0);
    }
    let observed: f64 = coincidence.iter().filter(|((c, k), _)| c != k).map(|(_, o)| o).sum::<f64>() / n;
    let sum_sq: f64 = marginals.values().map(|nc| nc * nc).sum();
    let expected = (n * n - sum_sq) / (n * (n - 1.0));
    if expected <= 0.0 {
        return Err(Error::Internal("zero expected disagreement with several values".into()));
    }
    Ok(1.0 - observed / expected)
}

/// One sentence's spans from each annotator (`None` when that annotator
/// did not see it).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenAnnotations {
    pub n_tokens: usize,
    pub majority_types: BTreeSet<DeonticType>,
    pub annotators: Vec<Option<Vec<Span>>>,
}

/// Per-token values: the covering span's type if it is a majority type,
/// otherwise `O`.
pub fn token_reliability(items: &[TokenAnnotations]) -> ReliabilityData<String> {
    let mut data = Vec::new();
    for item in items {
        for tok in 0..item.n_tokens {
            data.push(
                item.annotators
                    .iter()
                    .map(|spans| {
                        spans.as_ref().map(|spans| {
                            spans
                                .iter()
                                .find(|s| s.start <= tok && tok <= s.end && item.majority_types.contains(&s.ty))
                                .map(|s| s.ty.tag_suffix().to_string())
                                .unwrap_or_else(|| "O".to_string())
                        })
                    })
                    .collect(),
            );
        }
    }
    data
}

pub fn token_alpha(items: &[TokenAnnotations]) -> Result<f64> {
    krippendorff_alpha_nominal(&token_reliability(items))
}

/// One unit per (sentence, agent, type) with presence/absence per
/// annotator, annotators ordered by id. All seven labels are units.
pub fn type_reliability(records: &[AnnotationRecord]) -> ReliabilityData<bool> {
    let annotators: BTreeSet<&str> = records.iter().filter_map(|r| r.annotator_id.as_deref()).collect();
    let mut items: BTreeMap<(&str, &str), BTreeMap<&str, &BTreeSet<DeonticType>>> = BTreeMap::new();
    for r in records {
        if let Some(a) = r.annotator_id.as_deref() {
            items
                .entry((r.sentence_id.as_str(), r.agent.as_str()))
                .or_default()
                .insert(a, &r.labels);
        }
    }
    let mut data = Vec::new();
    for by_annotator in items.values() {
        for ty in DeonticType::ALL {
            data.push(
                annotators
                    .iter()
                    .map(|a| by_annotator.get(a).map(|labels| labels.contains(&ty)))
                    .collect(),
            );
        }
    }
    data
}

pub fn type_alpha(records: &[AnnotationRecord]) -> Result<f64> {
    krippendorff_alpha_nominal(&type_reliability(records))
}

/// Token-level items built from per-annotator records, restricted to the
/// given majority types per (sentence, agent). Items lacking a majority
/// entry or tokens are skipped.
pub fn token_items(
    records: &[AnnotationRecord],
    majority: &BTreeMap<(String, String), BTreeSet<DeonticType>>,
) -> Vec<TokenAnnotations> {
    let annotators: BTreeSet<&str> = records.iter().filter_map(|r| r.annotator_id.as_deref()).collect();
    // (sentence, agent) -> (token count, annotator -> spans)
    type Item<'a> = (usize, BTreeMap<&'a str, &'a Vec<Span>>);
    let mut items: BTreeMap<(&str, &str), Item> = BTreeMap::new();
    for r in records {
        if let Some(a) = r.annotator_id.as_deref() {
            let e = items.entry((r.sentence_id.as_str(), r.agent.as_str())).or_default();
            e.0 = e.0.max(r.tokens.len());
            e.1.insert(a, &r.spans);
        }
    }
    items
        .into_iter()
        .filter_map(|((sid, agent), (n, spans))| {
            let types = majority.get(&(sid.to_string(), agent.to_string()))?;
            (n > 0).then(|| TokenAnnotations {
                n_tokens: n,
                majority_types: types.clone(),
                annotators: annotators.iter().map(|a| spans.get(a).map(|s| (*s).clone())).collect(),
            })
        })
        .collect()
}

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::report::{macro_average, ClassMetrics, MetricsReport, Mode};
use crate::error::{Error, Result};
use crate::rules::{decode_spans, DeonticType, Tag, TagSequence};

/// Entities read from a tag sequence, with the number of repairs made.
pub fn extract_entities(tags: &TagSequence) -> (BTreeSet<(DeonticType, usize, usize)>, usize) {
    let (spans, repairs) = decode_spans(tags.tags(), |t| t);
    (spans.into_iter().collect(), repairs)
}

/// Entities with types erased before decoding.
pub fn extract_unlabeled(tags: &TagSequence) -> (BTreeSet<(usize, usize)>, usize) {
    let (spans, repairs) = decode_spans(tags.tags(), |_| ());
    (spans.into_iter().map(|((), s, e)| (s, e)).collect(), repairs)
}

/// Which span types enter the labeled macro average.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MacroOver {
    /// Types with gold or predicted entities.
    #[default]
    Supported,
    /// All six span types.
    AllTypes,
}

fn erase(t: Tag) -> u8 {
    match t {
        Tag::O => 0,
        Tag::B(_) => 1,
        Tag::I(_) => 2,
        Tag::S(_) => 3,
    }
}

/// Entity-level scores over aligned (prediction, gold) tag sequences.
///
/// Labeled mode matches (type, start, end) and reports per-type scores.
/// Unlabeled mode matches (start, end) after erasing types from the tags;
/// it has a single class, so its macro equals its micro score. Accuracy is
/// the token tag accuracy, on type-erased tags in unlabeled mode.
pub fn span_metrics(pairs: &[(TagSequence, TagSequence)], mode: Mode, macro_over: MacroOver) -> Result<MetricsReport> {
    let mut tokens = 0usize;
    let mut correct_tokens = 0usize;
    let mut repairs = 0usize;
    // type -> (tp, predicted, gold)
    let mut counts: BTreeMap<DeonticType, (usize, usize, usize)> = BTreeMap::new();
    let mut unlabeled = (0usize, 0usize, 0usize);
    for (i, (pred, gold)) in pairs.iter().enumerate() {
        if pred.len() != gold.len() {
            return Err(Error::Usage(format!(
                "sentence {i}: {} predicted tags for {} gold tags",
                pred.len(),
                gold.len()
            )));
        }
        tokens += gold.len();
        match mode {
            Mode::SpanUnlabeled => {
                correct_tokens += pred.tags().iter().zip(gold.tags()).filter(|(p, g)| erase(**p) == erase(**g)).count();
                let (p, rp) = extract_unlabeled(pred);
                let (g, rg) = extract_unlabeled(gold);
                repairs += rp + rg;
                unlabeled.0 += p.intersection(&g).count();
                unlabeled.1 += p.len();
                unlabeled.2 += g.len();
            }
            _ => {
                correct_tokens += pred.tags().iter().zip(gold.tags()).filter(|(p, g)| p == g).count();
                let (p, rp) = extract_entities(pred);
                let (g, rg) = extract_entities(gold);
                repairs += rp + rg;
                for e in &p {
                    let c = counts.entry(e.0).or_default();
                    c.1 += 1;
                    if g.contains(e) {
                        c.0 += 1;
                    }
                }
                for e in &g {
                    counts.entry(e.0).or_default().2 += 1;
                }
            }
        }
    }
    let accuracy = if tokens == 0 { 0.0 } else { correct_tokens as f64 / tokens as f64 };
    let mut notes = vec![format!("{repairs} tag repairs (I without an open span read as B)")];
    let report = match mode {
        Mode::SpanUnlabeled => {
            let micro = ClassMetrics::from_counts(unlabeled.0, unlabeled.1, unlabeled.2);
            notes.push("unlabeled: single class, macro equals micro".into());
            MetricsReport {
                mode,
                records: pairs.len(),
                per_class: BTreeMap::new(),
                macro_avg: micro.prf(),
                macro_classes: Vec::new(),
                micro,
                accuracy,
                repairs,
                notes,
            }
        }
        _ => {
            let per_class: BTreeMap<DeonticType, ClassMetrics> = DeonticType::SPAN_TYPES
                .iter()
                .map(|t| {
                    let (tp, p, g) = counts.get(t).copied().unwrap_or_default();
                    (*t, ClassMetrics::from_counts(tp, p, g))
                })
                .collect();
            let macro_classes: Vec<DeonticType> = per_class
                .iter()
                .filter(|(_, c)| macro_over == MacroOver::AllTypes || c.support + c.predicted > 0)
                .map(|(t, _)| *t)
                .collect();
            notes.push(match macro_over {
                MacroOver::Supported => "macro over span types with gold or predicted entities".into(),
                MacroOver::AllTypes => "macro over all 6 span types".into(),
            });
            let (tp, p, g) = counts
                .values()
                .fold((0, 0, 0), |a, c| (a.0 + c.0, a.1 + c.1, a.2 + c.2));
            MetricsReport {
                mode: Mode::SpanLabeled,
                records: pairs.len(),
                macro_avg: macro_average(macro_classes.iter().map(|t| &per_class[t])),
                macro_classes,
                per_class,
                micro: ClassMetrics::from_counts(tp, p, g),
                accuracy,
                repairs,
                notes,
            }
        }
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use DeonticType::*;

    fn tags(s: &str) -> TagSequence {
        TagSequence::parse(&s.split(' ').collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn direct_read() {
        let (e, r) = extract_entities(&tags("O B-OBL I-OBL O S-PER"));
        assert_eq!(e, BTreeSet::from([(Obl, 1, 2), (Per, 4, 4)]));
        assert_eq!(r, 0);
        assert!(extract_entities(&tags("O O O")).0.is_empty());
    }

    #[test]
    fn orphan_inside_is_repaired() {
        let (e, r) = extract_entities(&tags("O I-OBL O"));
        assert_eq!(e, BTreeSet::from([(Obl, 1, 1)]));
        assert_eq!(r, 1);
    }

    #[test]
    fn perfect_prediction() {
        let g = tags("O B-OBL I-OBL O S-PER");
        for mode in [Mode::SpanLabeled, Mode::SpanUnlabeled] {
            let r = span_metrics(&[(g.clone(), g.clone())], mode, MacroOver::Supported).unwrap();
            assert_eq!((r.macro_avg.precision, r.macro_avg.recall, r.macro_avg.f1), (1.0, 1.0, 1.0));
            assert_eq!(r.accuracy, 1.0);
        }
    }

    #[test]
    fn wrong_type_right_boundaries() {
        let pair = (tags("O S-ENT O"), tags("O S-OBL O"));
        let l = span_metrics(std::slice::from_ref(&pair), Mode::SpanLabeled, MacroOver::Supported).unwrap();
        let u = span_metrics(&[pair], Mode::SpanUnlabeled, MacroOver::Supported).unwrap();
        assert_eq!(l.micro.f1, 0.0);
        assert_eq!(u.micro.f1, 1.0);
        assert_eq!(l.macro_classes, vec![Obl, Ent]);
        assert!((l.accuracy - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(u.accuracy, 1.0);
    }

    #[test]
    fn macro_switch() {
        let g = tags("S-OBL O");
        let r = span_metrics(&[(g.clone(), g.clone())], Mode::SpanLabeled, MacroOver::AllTypes).unwrap();
        assert!((r.macro_avg.f1 - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn length_mismatch() {
        assert!(span_metrics(&[(tags("O"), tags("O O"))], Mode::SpanLabeled, MacroOver::Supported).is_err());
    }
}

use std::collections::BTreeSet;

use super::report::{macro_average, ClassMetrics, MetricsReport, Mode};
use crate::error::{Error, Result};
use crate::rules::DeonticType;

fn check(set: &BTreeSet<DeonticType>, which: &str, i: usize) -> Result<()> {
    if set.is_empty() || (set.contains(&DeonticType::None) && set.len() > 1) {
        return Err(Error::Validation(format!(
            "{which} label set {i} must be non-empty with None exclusive"
        )));
    }
    Ok(())
}

/// Per-class scores from binary presence of each of the seven labels,
/// macro over all seven, and subset accuracy.
pub fn classification_metrics(
    predictions: &[BTreeSet<DeonticType>],
    golds: &[BTreeSet<DeonticType>],
) -> Result<MetricsReport> {
    if predictions.len() != golds.len() {
        return Err(Error::Usage(format!(
            "{} predictions for {} gold records",
            predictions.len(),
            golds.len()
        )));
    }
    for (i, (p, g)) in predictions.iter().zip(golds).enumerate() {
        check(p, "predicted", i)?;
        check(g, "gold", i)?;
    }
    let mut per_class = std::collections::BTreeMap::new();
    let (mut tp_all, mut pred_all, mut gold_all) = (0, 0, 0);
    for t in DeonticType::ALL {
        let tp = predictions.iter().zip(golds).filter(|(p, g)| p.contains(&t) && g.contains(&t)).count();
        let predicted = predictions.iter().filter(|p| p.contains(&t)).count();
        let support = golds.iter().filter(|g| g.contains(&t)).count();
        tp_all += tp;
        pred_all += predicted;
        gold_all += support;
        per_class.insert(t, ClassMetrics::from_counts(tp, predicted, support));
    }
    let exact = predictions.iter().zip(golds).filter(|(p, g)| p == g).count();
    Ok(MetricsReport {
        mode: Mode::Classification,
        records: golds.len(),
        macro_avg: macro_average(per_class.values()),
        macro_classes: DeonticType::ALL.to_vec(),
        per_class,
        micro: ClassMetrics::from_counts(tp_all, pred_all, gold_all),
        accuracy: if golds.is_empty() { 0.0 } else { exact as f64 / golds.len() as f64 },
        repairs: 0,
        notes: vec![
            "macro averages all 7 classes including None".into(),
            "zero denominators score 0 and are flagged per class".into(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use DeonticType::*;

    fn s(t: &[DeonticType]) -> BTreeSet<DeonticType> {
        t.iter().copied().collect()
    }

    #[test]
    fn perfect() {
        let g = vec![s(&[Obl]), s(&[None]), s(&[Ent, Per])];
        let r = classification_metrics(&g, &g).unwrap();
        assert_eq!(r.accuracy, 1.0);
        // Classes without support score 0 under the zero-division rule.
        for t in [Obl, Ent, Per, None] {
            assert_eq!(r.per_class[&t].f1, 1.0);
        }
        assert_eq!(r.per_class[&Pro].f1, 0.0);
    }

    #[test]
    fn partial_set_is_not_exact() {
        let r = classification_metrics(&[s(&[Obl])], &[s(&[Obl, Per])]).unwrap();
        assert_eq!(r.accuracy, 0.0);
        assert_eq!(r.per_class[&Obl].f1, 1.0);
        assert_eq!(r.per_class[&Per].recall, 0.0);
    }

    #[test]
    fn four_record_hand_count() {
        // Obl: tp 2 (r1, r3), fp 1 (r4), fn 0 -> P 2/3, R 1
        // Per: tp 0, fp 0, fn 1 (r1) -> 0
        // None: tp 1 (r2), fp 0, fn 1 (r4) -> P 1, R 1/2
        let preds = vec![s(&[Obl]), s(&[None]), s(&[Obl, Ent]), s(&[Obl])];
        let golds = vec![s(&[Obl, Per]), s(&[None]), s(&[Obl, Ent]), s(&[None])];
        let r = classification_metrics(&preds, &golds).unwrap();
        assert_eq!(r.accuracy, 0.5);
        assert!((r.per_class[&Obl].precision - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.per_class[&Obl].recall, 1.0);
        assert_eq!(r.per_class[&Per].f1, 0.0);
        assert_eq!(r.per_class[&Ent].f1, 1.0);
        assert_eq!(r.per_class[&None].recall, 0.5);
        let f_obl = 2.0 * (2.0 / 3.0) / (2.0 / 3.0 + 1.0);
        let f_none = 2.0 * 0.5 / 1.5;
        assert!((r.macro_avg.f1 - (f_obl + 1.0 + f_none) / 7.0).abs() < 1e-12);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(classification_metrics(&[s(&[Obl])], &[]), Err(Error::Usage(_))));
    }

    #[test]
    fn invalid_sets_rejected() {
        assert!(classification_metrics(&[s(&[Obl, None])], &[s(&[Obl])]).is_err());
        assert!(classification_metrics(&[s(&[])], &[s(&[Obl])]).is_err());
    }
}

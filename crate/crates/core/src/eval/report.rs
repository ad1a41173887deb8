use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::rules::DeonticType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Classification,
    SpanLabeled,
    SpanUnlabeled,
}

/// Precision, recall and F1 as fractions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Counts and scores for one class.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Gold occurrences.
    pub support: usize,
    pub predicted: usize,
    pub true_positives: usize,
    /// Scores that hit a zero denominator and were set to 0.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub zero_division: Vec<String>,
}

impl ClassMetrics {
    pub fn from_counts(tp: usize, predicted: usize, support: usize) -> Self {
        let mut zero_division = Vec::new();
        let mut div = |num: usize, den: usize, name: &str| {
            if den == 0 {
                zero_division.push(name.to_string());
                0.0
            } else {
                num as f64 / den as f64
            }
        };
        let precision = div(tp, predicted, "precision");
        let recall = div(tp, support, "recall");
        // 2PR/(P+R) written over counts: 2tp / (predicted + gold).
        let f1 = div(2 * tp, predicted + support, "f1");
        ClassMetrics {
            precision,
            recall,
            f1,
            support,
            predicted,
            true_positives: tp,
            zero_division,
        }
    }

    pub fn prf(&self) -> Prf {
        Prf {
            precision: self.precision,
            recall: self.recall,
            f1: self.f1,
        }
    }
}

/// Unweighted mean of per-class scores.
pub fn macro_average<'a>(classes: impl IntoIterator<Item = &'a ClassMetrics>) -> Prf {
    let mut n = 0usize;
    let mut sum = Prf::default();
    for c in classes {
        n += 1;
        sum.precision += c.precision;
        sum.recall += c.recall;
        sum.f1 += c.f1;
    }
    if n == 0 {
        return Prf::default();
    }
    Prf {
        precision: sum.precision / n as f64,
        recall: sum.recall / n as f64,
        f1: sum.f1 / n as f64,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub mode: Mode,
    pub records: usize,
    pub per_class: BTreeMap<DeonticType, ClassMetrics>,
    #[serde(rename = "macro")]
    pub macro_avg: Prf,
    /// Classes included in the macro average.
    pub macro_classes: Vec<DeonticType>,
    pub micro: ClassMetrics,
    /// Subset accuracy for classification, token tag accuracy for spans.
    pub accuracy: f64,
    /// Tag repairs applied while reading entities.
    pub repairs: usize,
    pub notes: Vec<String>,
}

/// Percent with two decimals.
pub fn pct(x: f64) -> String {
    format!("{:.2}", x * 100.0)
}

impl MetricsReport {
    /// `accuracy,precision,recall,f1` (macro) as percentages.
    pub fn csv_values(&self) -> String {
        format!(
            "{},{},{},{}",
            pct(self.accuracy),
            pct(self.macro_avg.precision),
            pct(self.macro_avg.recall),
            pct(self.macro_avg.f1)
        )
    }

    /// Per-class rows: `class,precision,recall,f1,support`.
    pub fn per_class_csv(&self) -> String {
        let mut out = String::from("class,precision,recall,f1,support\n");
        for (t, c) in &self.per_class {
            writeln!(out, "{},{},{},{},{}", t.name(), pct(c.precision), pct(c.recall), pct(c.f1), c.support).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_division_flags() {
        let c = ClassMetrics::from_counts(0, 0, 0);
        assert_eq!((c.precision, c.recall, c.f1), (0.0, 0.0, 0.0));
        assert_eq!(c.zero_division, vec!["precision", "recall", "f1"]);
        let c = ClassMetrics::from_counts(1, 2, 4);
        assert!((c.f1 - 2.0 * 0.5 * 0.25 / 0.75).abs() < 1e-12);
        let c = ClassMetrics::from_counts(0, 3, 2);
        assert_eq!(c.f1, 0.0);
        assert!(c.zero_division.is_empty());
        assert!(c.zero_division.is_empty());
    }

    #[test]
    fn percent_rounding() {
        assert_eq!(pct(0.34375), "34.38");
        assert_eq!(pct(1.0), "100.00");
    }
}

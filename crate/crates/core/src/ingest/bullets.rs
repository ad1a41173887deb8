use std::collections::HashMap;
use std::sync::OnceLock;

use regex::Regex;

use super::Provision;
use crate::error::{Error, Result};

/// Supplies the "is a complete sentence" flag per provision.
pub trait CompletenessOracle {
    fn is_complete(&self, provision: &Provision) -> Option<bool>;
}

/// Keyed by [`Provision::key`].
impl CompletenessOracle for HashMap<String, bool> {
    fn is_complete(&self, provision: &Provision) -> Option<bool> {
        self.get(&provision.key()).copied()
    }
}

impl<F: Fn(&Provision) -> Option<bool>> CompletenessOracle for F {
    fn is_complete(&self, provision: &Provision) -> Option<bool> {
        self(provision)
    }
}

fn bullet_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^\([ivx]+|^\([a-zA-Z]+|^[\d.\d]+").expect("valid bullet regex"))
}

fn enumerator_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^(?:\([A-Za-z0-9]+\)?|[\d.]+)\s*").expect("valid enumerator regex"))
}

/// Whether the text opens with a sub-bullet enumerator: `(iv`, `(b`, `3.`,
/// `1.2`.
pub fn is_sub_bullet(text: &str) -> bool {
    bullet_regex().is_match(text)
}

fn starts_lowercase(child: &str) -> bool {
    let body = enumerator_regex().replace(child, "");
    body.chars().next().is_some_and(char::is_lowercase)
}

fn strip_colon(parent: &str) -> &str {
    let t = parent.trim_end();
    t.strip_suffix(':').unwrap_or(t).trim_end()
}

fn join(head: &str, child: &str) -> String {
    format!("{} {}", head.trim_end(), child)
}

/// Folds sub-bullets into their parent provision in one sequential pass.
///
/// The parent of a bullet is the provision named by its `parent_index`, or
/// else the nearest earlier provision that is neither a bullet nor the
/// result of a merge. The first rule that applies wins:
///
/// 1. incomplete child, complete parent, parent mentions neither "follow"
///    nor "below:": drop the parent's trailing `:` and merge;
/// 2. child text starts lowercase after its enumerator, parent mentions
///    neither: drop `:` and merge;
/// 3. parent ends with "the following:": drop that phrase if the child is
///    incomplete, keep it otherwise, and append the child;
/// 4. parent ends with `:`: append the child.
///
/// A merged bullet keeps its own index and becomes a child of the parent
/// (`depth = parent.depth + 1`). Parents stay in the output. Child text is
/// always carried verbatim.
pub fn merge_bullets<O: CompletenessOracle + ?Sized>(provisions: &[Provision], completeness: &O) -> Result<Vec<Provision>> {
    let mut out: Vec<Provision> = Vec::with_capacity(provisions.len());
    let mut merged: Vec<bool> = Vec::with_capacity(provisions.len());
    for p in provisions {
        if !is_sub_bullet(&p.text) {
            out.push(p.clone());
            merged.push(false);
            continue;
        }
        let parent_pos = match p.parent_index {
            Some(pi) => out.iter().rposition(|q| q.index == pi),
            None => (0..out.len())
                .rev()
                .find(|&i| !merged[i] && !is_sub_bullet(&out[i].text)),
        };
        let Some(pp) = parent_pos else {
            out.push(p.clone());
            merged.push(false);
            continue;
        };
        let parent = &out[pp];
        let lookup = |q: &Provision| {
            completeness.is_complete(q).ok_or_else(|| {
                Error::Config(format!("no completeness value for provision {}", q.key()))
            })
        };
        let child_complete = lookup(p)?;
        let parent_complete = lookup(parent)?;
        let text = combine(&parent.text, &p.text, child_complete, parent_complete);
        let attached = Provision {
            contract_id: p.contract_id.clone(),
            index: p.index,
            text: text.clone().unwrap_or_else(|| p.text.clone()),
            depth: parent.depth + 1,
            parent_index: Some(parent.index),
        };
        merged.push(text.is_some());
        out.push(attached);
    }
    Ok(out)
}

fn combine(parent: &str, child: &str, child_complete: bool, parent_complete: bool) -> Option<String> {
    let lower = parent.to_lowercase();
    let mentions_follow = lower.contains("follow") || lower.contains("below:");
    if !child_complete && parent_complete && !mentions_follow {
        return Some(join(strip_colon(parent), child));
    }
    if starts_lowercase(child) && !mentions_follow {
        return Some(join(strip_colon(parent), child));
    }
    let trimmed = parent.trim_end();
    if lower.trim_end().ends_with("the following:") {
        if child_complete {
            return Some(join(trimmed, child));
        }
        let head = &trimmed[..trimmed.len() - "the following:".len()];
        return Some(join(head, child));
    }
    if trimmed.ends_with(':') {
        return Some(join(trimmed, child));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prov(i: usize, text: &str) -> Provision {
        Provision {
            contract_id: "c".into(),
            index: i,
            text: text.into(),
            depth: 0,
            parent_index: None,
        }
    }

    fn flags(pairs: &[(usize, bool)]) -> HashMap<String, bool> {
        pairs.iter().map(|(i, b)| (format!("c:{i}"), *b)).collect()
    }

    #[test]
    fn bullet_patterns() {
        for t in ["(a) proof", "(iv) thing", "(B) Item", "3. Rent", "1.2 Term", ".5 acres"] {
            assert!(is_sub_bullet(t), "{t}");
        }
        for t in ["Tenant shall pay", "a) odd", "[a] x", ""] {
            assert!(!is_sub_bullet(t), "{t}");
        }
    }

    #[test]
    fn the_following_removed_for_incomplete_child() {
        let p = vec![prov(0, "Tenant shall provide the following:"), prov(1, "(a) proof of insurance")];
        let out = merge_bullets(&p, &flags(&[(0, true), (1, false)])).unwrap();
        assert_eq!(out[1].text, "Tenant shall provide (a) proof of insurance");
        assert_eq!((out[1].depth, out[1].parent_index), (1, Some(0)));
        assert_eq!(out[0], p[0]);
    }

    #[test]
    fn no_children_unchanged() {
        let p = vec![prov(0, "Tenant shall pay rent."), prov(1, "Landlord shall repair.")];
        assert_eq!(merge_bullets(&p, &flags(&[])).unwrap(), p);
    }

    #[test]
    fn colon_parent_with_complete_child_concatenates() {
        // Rule 1 needs an incomplete child, rule 2 a lowercase child and
        // rule 3 "the following:"; rule 4 applies and keeps the colon.
        let p = vec![prov(0, "Landlord agrees that:"), prov(1, "(a) Tenant may use the roof.")];
        let out = merge_bullets(&p, &flags(&[(0, false), (1, true)])).unwrap();
        assert_eq!(out[1].text, "Landlord agrees that: (a) Tenant may use the roof.");
    }

    #[test]
    fn incomplete_child_merges_into_complete_parent() {
        let p = vec![prov(0, "Tenant shall maintain:"), prov(1, "(a) The roof and gutters;")];
        let out = merge_bullets(&p, &flags(&[(0, true), (1, false)])).unwrap();
        assert_eq!(out[1].text, "Tenant shall maintain (a) The roof and gutters;");
    }

    #[test]
    fn lowercase_child_merges_regardless_of_completeness() {
        let p = vec![prov(0, "Tenant shall keep the Premises clean, and"), prov(1, "(b) tenant shall remove trash.")];
        let out = merge_bullets(&p, &flags(&[(0, false), (1, true)])).unwrap();
        assert_eq!(out[1].text, "Tenant shall keep the Premises clean, and (b) tenant shall remove trash.");
    }

    #[test]
    fn following_with_complete_child_keeps_phrase() {
        let p = vec![prov(0, "Tenant agrees to the following:"), prov(1, "(a) Tenant shall pay rent.")];
        let out = merge_bullets(&p, &flags(&[(0, false), (1, true)])).unwrap();
        assert_eq!(out[1].text, "Tenant agrees to the following: (a) Tenant shall pay rent.");
    }

    #[test]
    fn siblings_share_the_original_parent() {
        let p = vec![
            prov(0, "Tenant shall provide the following:"),
            prov(1, "(a) proof of insurance;"),
            prov(2, "(b) a deposit."),
        ];
        let out = merge_bullets(&p, &flags(&[(0, true), (1, false), (2, false)])).unwrap();
        assert_eq!(out[2].text, "Tenant shall provide (b) a deposit.");
        assert_eq!(out[2].parent_index, Some(0));
    }

    #[test]
    fn unmatched_bullet_is_kept_and_attached() {
        let p = vec![prov(0, "Section 5 Repairs."), prov(1, "(a) Tenant shall repair the roof.")];
        let out = merge_bullets(&p, &flags(&[(0, true), (1, true)])).unwrap();
        assert_eq!(out[1].text, p[1].text);
        assert_eq!(out[1].parent_index, Some(0));
    }

    #[test]
    fn missing_completeness_is_config_error() {
        let p = vec![prov(0, "Tenant shall provide:"), prov(1, "(a) insurance")];
        assert!(matches!(merge_bullets(&p, &flags(&[(0, true)])), Err(Error::Config(_))));
    }
}

//! Dependency-pattern rules attaching deontic triggers to contract agents.
//!
//! Every rule looks at a head word `w` that is the sentence root or a
//! VERB/AUX, its direct dependents, and at most one `conj` hop from those
//! dependents. Rule numbers are kept on each [`Extraction`] for audit.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::resolve::{resolve_type, SyntacticContext};
use super::{DeonticType, TriggerMatch};
use crate::error::{Error, Result};
use crate::lingrep::{ParsedSentence, Token};

/// One (type, trigger, agent, start) attachment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    pub deontic_type: DeonticType,
    pub trigger: String,
    pub agent: String,
    /// Token index of the first trigger token.
    pub start_index: usize,
    /// Token index of the last trigger token.
    pub end_index: usize,
    /// Number of the rule that produced the attachment (1-8).
    pub rule: u8,
    pub context: SyntacticContext,
}

/// Applies the eight attachment rules to one sentence.
///
/// `parsed` must already use the classic label inventory (see
/// [`crate::lingrep::LabelMap`]). Output is sorted by start index, agent and
/// type, and duplicates produced by several rules keep the lowest rule
/// number, so the result does not depend on the order of `aliases`.
pub fn apply_dependency_rules<S: AsRef<str>>(
    parsed: &ParsedSentence,
    candidates: &[TriggerMatch],
    aliases: &[S],
) -> Result<Vec<Extraction>> {
    let n = parsed.tokens.len();
    for m in candidates {
        if m.start >= n || m.end >= n || m.end < m.start {
            return Err(Error::Internal(format!(
                "trigger `{}` at {}..={} lies outside sentence {} of {n} tokens",
                m.pattern, m.start, m.end, parsed.sentence_id
            )));
        }
    }
    let engine = Engine {
        sentence: parsed,
        aliases: aliases
            .iter()
            .map(|a| {
                let words = a.as_ref().split_whitespace().map(str::to_lowercase).collect();
                (a.as_ref().to_string(), words)
            })
            .collect(),
        by_start: candidates.iter().map(|m| (m.start, m)).collect(),
        lowered: parsed.tokens.iter().map(|t| t.surface.to_lowercase()).collect(),
    };
    let mut out = Vec::new();
    for w in parsed.tokens.iter().filter(|t| is_head_word(t)) {
        for m in candidates {
            engine.rules_for_trigger(w, m, &mut out);
        }
        engine.rule6(w, &mut out);
    }
    out.sort_by(|a, b| {
        (a.start_index, &a.agent, a.deontic_type, a.rule).cmp(&(b.start_index, &b.agent, b.deontic_type, b.rule))
    });
    out.dedup_by(|b, a| a.start_index == b.start_index && a.agent == b.agent && a.deontic_type == b.deontic_type);
    Ok(out)
}

fn is_head_word(t: &Token) -> bool {
    t.deprel == "ROOT" || t.is_root() || t.pos == "VERB" || t.pos == "AUX"
}

struct Engine<'a> {
    sentence: &'a ParsedSentence,
    /// (alias as given, lowercased words)
    aliases: Vec<(String, Vec<String>)>,
    by_start: BTreeMap<usize, &'a TriggerMatch>,
    lowered: Vec<String>,
}

impl<'a> Engine<'a> {
    fn children(&self, i: usize) -> impl Iterator<Item = &'a Token> + 'a {
        self.sentence.children(i)
    }

    fn children_with(&self, i: usize, rel: &'static str) -> impl Iterator<Item = &'a Token> + 'a {
        self.sentence.children(i).filter(move |t| t.deprel == rel)
    }

    /// Aliases whose last word is token `i` and whose earlier words precede it.
    fn aliases_at(&self, i: usize) -> Vec<&str> {
        self.aliases
            .iter()
            .filter(|(_, words)| {
                let k = words.len();
                k > 0
                    && k <= i + 1
                    && words
                        .iter()
                        .rev()
                        .enumerate()
                        .all(|(j, w)| self.lowered[i - j] == *w)
            })
            .map(|(a, _)| a.as_str())
            .collect()
    }

    /// The aux dependent of `w` that starts trigger `m`, if any.
    fn trigger_aux(&self, w: usize, m: &TriggerMatch) -> Option<&'a Token> {
        self.children_with(w, "aux").find(|c| c.index == m.start)
    }

    /// Conjoined verbs of `w` with their aux dependents that start a trigger.
    fn conjoined_triggers(&self, w: usize) -> Vec<(&'a Token, &'a TriggerMatch)> {
        let mut out = Vec::new();
        for v in self.children_with(w, "conj").filter(|v| v.pos == "VERB") {
            for aux in self.children_with(v.index, "aux") {
                if let Some(t1) = self.by_start.get(&aux.index) {
                    out.push((v, *t1));
                }
            }
        }
        out
    }

    /// Nominals under an `agent` dependent: its own dependents, plus the
    /// dependent itself when the parse attaches the noun directly.
    fn agent_nominals(&self, agent: &'a Token) -> Vec<&'a Token> {
        let mut v: Vec<&Token> = self.children(agent.index).collect();
        v.push(agent);
        v
    }

    fn emit(&self, out: &mut Vec<Extraction>, m: &TriggerMatch, agent: &str, rule: u8, context: SyntacticContext) {
        let trigger = self.sentence.tokens[m.start..=m.end]
            .iter()
            .map(|t| t.surface.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        out.push(Extraction {
            deontic_type: resolve_type(&m.pattern, &m.candidate_types, context),
            trigger,
            agent: agent.to_string(),
            start_index: m.start,
            end_index: m.end,
            rule,
            context,
        });
    }

    fn rules_for_trigger(&self, w: &Token, m: &TriggerMatch, out: &mut Vec<Extraction>) {
        use SyntacticContext::*;
        let Some(_aux) = self.trigger_aux(w.index, m) else {
            return;
        };
        let mut bound: Vec<String> = Vec::new();

        // Rule 1: alias is the (passive) subject of w, trigger is w's aux.
        // Rule 2: aliases conjoined to that subject share the trigger.
        for subj in self
            .children(w.index)
            .filter(|c| c.deprel == "nsubj" || c.deprel == "nsubjpass")
        {
            let subj_aliases = self.aliases_at(subj.index);
            if subj_aliases.is_empty() {
                continue;
            }
            for a1 in subj_aliases {
                self.emit(out, m, a1, 1, ActiveSubject);
                bound.push(a1.to_string());
            }
            for conj in self.children_with(subj.index, "conj") {
                for a2 in self.aliases_at(conj.index) {
                    self.emit(out, m, a2, 2, Conjunct);
                    bound.push(a2.to_string());
                }
            }
        }

        let conj_triggers = self.conjoined_triggers(w.index);

        // Rule 3: alias under an `agent` dependent of w.
        // Rule 4: an alias conjoined to it takes the conjoined verb's trigger.
        // Rule 5: otherwise the conjoined alias shares the trigger.
        for agent in self.children_with(w.index, "agent") {
            for nominal in self.agent_nominals(agent) {
                let found = self.aliases_at(nominal.index);
                if found.is_empty() {
                    continue;
                }
                for a1 in found {
                    self.emit(out, m, a1, 3, PassiveAgent);
                    bound.push(a1.to_string());
                }
                let conj_aliases: Vec<&str> = self
                    .children_with(nominal.index, "conj")
                    .flat_map(|c| self.aliases_at(c.index))
                    .collect();
                let mut rule4 = false;
                for a2 in &conj_aliases {
                    for (_, t1) in &conj_triggers {
                        self.emit(out, t1, a2, 4, Conjunct);
                        rule4 = true;
                    }
                }
                if !rule4 {
                    for a2 in conj_aliases {
                        self.emit(out, m, a2, 5, PassiveAgent);
                        bound.push(a2.to_string());
                    }
                }
            }
        }

        // Rule 7: a conjoined verb with its own aux trigger has an `agent`
        // dependent holding an alias; that alias takes w's trigger.
        // Rule 8: otherwise the conjoined verb's trigger goes to the agents
        // already bound to w's trigger.
        for (v, t1) in &conj_triggers {
            let mut rule7 = false;
            for agent in self.children_with(v.index, "agent") {
                for nominal in self.agent_nominals(agent) {
                    for a2 in self.aliases_at(nominal.index) {
                        self.emit(out, m, a2, 7, PassiveAgent);
                        rule7 = true;
                    }
                }
            }
            if !rule7 {
                for a in &bound {
                    self.emit(out, t1, a, 8, Conjunct);
                }
            }
        }
    }

    /// Rule 6: an alias conjoined under a `pobj`/`dobj` dependent of w takes
    /// the aux trigger of a verb conjoined to w.
    fn rule6(&self, w: &Token, out: &mut Vec<Extraction>) {
        let conj_triggers = self.conjoined_triggers(w.index);
        if conj_triggers.is_empty() {
            return;
        }
        for obj in self
            .children(w.index)
            .filter(|c| c.deprel == "pobj" || c.deprel == "dobj")
        {
            let mut holders: Vec<&Token> = vec![obj];
            holders.extend(self.children(obj.index));
            let found: Vec<&str> = holders
                .iter()
                .flat_map(|h| self.children_with(h.index, "conj"))
                .flat_map(|c| self.aliases_at(c.index))
                .collect();
            for a1 in found {
                for (_, t1) in &conj_triggers {
                    self.emit(out, t1, a1, 6, SyntacticContext::Conjunct);
                }
            }
        }
    }
}

/// Union of deontic types attached to `agent`; `{None}` when nothing is.
pub fn to_multilabel(extractions: &[Extraction], agent: &str) -> std::collections::BTreeSet<DeonticType> {
    let mut set: std::collections::BTreeSet<DeonticType> = extractions
        .iter()
        .filter(|e| e.agent.eq_ignore_ascii_case(agent))
        .map(|e| e.deontic_type)
        .filter(|t| !t.is_none())
        .collect();
    if set.is_empty() {
        set.insert(DeonticType::None);
    }
    set
}

/// Trigger spans attached to `agent`. Where several types land on the same
/// trigger, the one from the lowest-numbered rule is kept.
pub fn extraction_spans(extractions: &[Extraction], agent: &str) -> Vec<super::Span> {
    let mut by_start: BTreeMap<usize, &Extraction> = BTreeMap::new();
    for e in extractions.iter().filter(|e| e.agent.eq_ignore_ascii_case(agent)) {
        by_start
            .entry(e.start_index)
            .and_modify(|cur| {
                if (e.rule, e.deontic_type) < (cur.rule, cur.deontic_type) {
                    *cur = e;
                }
            })
            .or_insert(e);
    }
    by_start
        .values()
        .map(|e| super::Span::new(e.deontic_type, e.start_index, e.end_index))
        .collect()
}

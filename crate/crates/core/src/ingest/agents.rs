use regex::RegexBuilder;

use super::{AgentAlias, AgentSentence, SentenceRecord};

/// Whether `alias` occurs in `text` as a whole word, ignoring case.
pub fn mentions_alias(text: &str, alias: &str) -> bool {
    let alias = alias.trim();
    if alias.is_empty() {
        return false;
    }
    let pattern = format!(r"(?:^|\W){}(?:\W|$)", regex::escape(alias));
    RegexBuilder::new(&pattern)
        .case_insensitive(true)
        .build()
        .map(|re| re.is_match(text))
        .unwrap_or(false)
}

/// One copy of the sentence per distinct alias it mentions. Aliases are
/// distinct by case-insensitive surface; the first listed wins. Sentences
/// without any alias yield nothing.
pub fn expand_per_agent(sentence: &SentenceRecord, aliases: &[AgentAlias]) -> Vec<AgentSentence> {
    let mut seen: Vec<String> = Vec::new();
    let mut out = Vec::new();
    for a in aliases {
        let key = a.alias.trim().to_lowercase();
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        if mentions_alias(&sentence.text, &a.alias) {
            out.push(AgentSentence {
                sentence_id: sentence.sentence_id.clone(),
                agent: a.clone(),
                text: sentence.text.clone(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sentence(text: &str) -> SentenceRecord {
        SentenceRecord {
            sentence_id: "s".into(),
            contract_id: "c".into(),
            provision_index: 0,
            text: text.into(),
            char_span: (0, text.len()),
        }
    }

    fn alias(a: &str, g: &str) -> AgentAlias {
        AgentAlias {
            alias: a.into(),
            canonical_group: g.into(),
            frequency: 1,
        }
    }

    fn aliases() -> Vec<AgentAlias> {
        vec![alias("Tenant", "Tenant"), alias("Landlord", "Landlord")]
    }

    #[test]
    fn both_agents() {
        let out = expand_per_agent(&sentence("Tenant shall pay the rent to the Landlord."), &aliases());
        let names: Vec<&str> = out.iter().map(|a| a.agent.alias.as_str()).collect();
        assert_eq!(names, vec!["Tenant", "Landlord"]);
    }

    #[test]
    fn agentless_sentence_dropped() {
        let s = sentence("Any such month-to-month tenancy shall be subject to every other term of this Lease.");
        assert!(expand_per_agent(&s, &aliases()).is_empty());
    }

    #[test]
    fn repeated_alias_once() {
        let s = sentence("Tenant shall notify Landlord before tenant leaves.");
        let out = expand_per_agent(&s, &[alias("Tenant", "Tenant"), alias("TENANT", "Tenant")]);
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn word_boundary() {
        assert!(!mentions_alias("The Subtenant shall pay.", "Tenant"));
        assert!(mentions_alias("the tenant's duties", "Tenant"));
        assert!(mentions_alias("(Tenant)", "Tenant"));
    }
}

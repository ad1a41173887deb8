use serde::{Deserialize, Serialize};

use super::DeonticType;

/// Identifier of the resolution policy, copied into every report.
pub const POLICY_ID: &str = "precedence-v1";

/// Where the agent sits relative to the trigger when a rule fires.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SyntacticContext {
    ActiveSubject,
    PassiveAgent,
    Conjunct,
}

/// Rank in the fixed precedence: negated types, then prohibition,
/// permission, entitlement and obligation. Lower wins.
pub fn precedence_rank(ty: DeonticType) -> u8 {
    match ty {
        DeonticType::Nobl => 0,
        DeonticType::Nent => 1,
        DeonticType::Pro => 2,
        DeonticType::Per => 3,
        DeonticType::Ent => 4,
        DeonticType::Obl => 5,
        DeonticType::None => u8::MAX,
    }
}

fn is_payment_like(pattern: &str) -> bool {
    pattern
        .split_whitespace()
        .any(|t| matches!(t, "paid" | "payable" | "pay" | "pays"))
}

/// Picks one deontic type for a trigger that may express several.
///
/// Passive-agent attachments of payment patterns ("shall be paid by X")
/// resolve to `Ent`; other passive-agent attachments prefer `Obl`. In every
/// other case the fixed precedence decides.
pub fn resolve_type(
    pattern: &str,
    candidates: &[DeonticType],
    context: SyntacticContext,
) -> DeonticType {
    match candidates {
        [] => DeonticType::None,
        [only] => *only,
        _ => {
            if context == SyntacticContext::PassiveAgent {
                let preferred = if is_payment_like(pattern) {
                    DeonticType::Ent
                } else {
                    DeonticType::Obl
                };
                if candidates.contains(&preferred) {
                    return preferred;
                }
            }
            candidates
                .iter()
                .copied()
                .min_by_key(|t| precedence_rank(*t))
                .unwrap_or(DeonticType::None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use DeonticType::*;
    use SyntacticContext::*;

    #[test]
    fn single_candidate_passes_through() {
        for ctx in [ActiveSubject, PassiveAgent, Conjunct] {
            assert_eq!(resolve_type("may", &[Per], ctx), Per);
        }
        assert_eq!(resolve_type("shall not", &[Pro], ActiveSubject), Pro);
    }

    // Policy-dependent: changes if POLICY_ID changes.
    #[test]
    fn passive_payment_prefers_entitlement() {
        assert_eq!(resolve_type("shall be paid", &[Ent, Obl], PassiveAgent), Ent);
        assert_eq!(resolve_type("shall be paid", &[Ent, Obl], ActiveSubject), Ent);
        assert_eq!(resolve_type("shall be kept", &[Ent, Obl], PassiveAgent), Obl);
    }

    #[test]
    fn precedence_orders_negations_first() {
        assert_eq!(resolve_type("x", &[Obl, Pro, Nent], ActiveSubject), Nent);
        assert_eq!(resolve_type("x", &[Obl, Per], Conjunct), Per);
        assert_eq!(resolve_type("x", &[Ent, Obl], Conjunct), Ent);
    }
}

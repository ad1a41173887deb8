use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Deontic modality expressed towards an agent.
///
/// The variant order is the fixed tie-break order used by the majority
/// baselines and by every report that iterates over types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DeonticType {
    Obl,
    Ent,
    Pro,
    Per,
    Nobl,
    Nent,
    None,
}

impl DeonticType {
    pub const ALL: [DeonticType; 7] = [
        DeonticType::Obl,
        DeonticType::Ent,
        DeonticType::Pro,
        DeonticType::Per,
        DeonticType::Nobl,
        DeonticType::Nent,
        DeonticType::None,
    ];

    /// The six types that can carry a trigger span.
    pub const SPAN_TYPES: [DeonticType; 6] = [
        DeonticType::Obl,
        DeonticType::Ent,
        DeonticType::Pro,
        DeonticType::Per,
        DeonticType::Nobl,
        DeonticType::Nent,
    ];

    pub fn is_none(self) -> bool {
        self == DeonticType::None
    }

    pub fn is_negated(self) -> bool {
        matches!(self, DeonticType::Nobl | DeonticType::Nent)
    }

    /// Suffix used in BIOS tags, e.g. `OBL`.
    pub fn tag_suffix(self) -> &'static str {
        match self {
            DeonticType::Obl => "OBL",
            DeonticType::Ent => "ENT",
            DeonticType::Pro => "PRO",
            DeonticType::Per => "PER",
            DeonticType::Nobl => "NOBL",
            DeonticType::Nent => "NENT",
            DeonticType::None => "NONE",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DeonticType::Obl => "Obl",
            DeonticType::Ent => "Ent",
            DeonticType::Pro => "Pro",
            DeonticType::Per => "Per",
            DeonticType::Nobl => "Nobl",
            DeonticType::Nent => "Nent",
            DeonticType::None => "None",
        }
    }
}

impl fmt::Display for DeonticType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DeonticType {
    type Err = Error;

    /// Accepts short names (`Obl`, `OBL`, `obl`) and long names
    /// (`obligation`, `no obligation`, `no-entitlement`, ...).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .trim()
            .chars()
            .filter(|c| c.is_alphanumeric())
            .flat_map(char::to_lowercase)
            .collect();
        let ty = match key.as_str() {
            "obl" | "obligation" => DeonticType::Obl,
            "ent" | "entitlement" => DeonticType::Ent,
            "pro" | "prohibition" => DeonticType::Pro,
            "per" | "permission" => DeonticType::Per,
            "nobl" | "noobligation" => DeonticType::Nobl,
            "nent" | "noentitlement" => DeonticType::Nent,
            "none" => DeonticType::None,
            _ => return Err(Error::Validation(format!("unknown deontic type `{s}`"))),
        };
        Ok(ty)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_short_and_long_names() {
        assert_eq!("OBL".parse::<DeonticType>().unwrap(), DeonticType::Obl);
        assert_eq!("no-obligation".parse::<DeonticType>().unwrap(), DeonticType::Nobl);
        assert_eq!("No Entitlement".parse::<DeonticType>().unwrap(), DeonticType::Nent);
        assert!("duty".parse::<DeonticType>().is_err());
    }

    #[test]
    fn enum_order_is_tie_break_order() {
        let mut v = DeonticType::ALL.to_vec();
        v.reverse();
        v.sort();
        assert_eq!(v, DeonticType::ALL.to_vec());
    }
}

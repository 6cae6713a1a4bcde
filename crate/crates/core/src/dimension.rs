//! The closed vocabulary of 13 commonsense knowledge dimensions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A commonsense knowledge dimension.
///
/// Variants are declared in the canonical reporting order, which is also the
/// `Ord` order. Serialized names are lowercase and hyphenated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dimension {
    Lexical,
    Similarity,
    Distinctness,
    Taxonomic,
    PartWhole,
    Spatial,
    Creation,
    Utility,
    DesireGoal,
    Quality,
    Comparative,
    Temporal,
    RelationalOther,
}

impl Dimension {
    pub const COUNT: usize = 13;

    pub const ALL: [Dimension; Self::COUNT] = [
        Dimension::Lexical,
        Dimension::Similarity,
        Dimension::Distinctness,
        Dimension::Taxonomic,
        Dimension::PartWhole,
        Dimension::Spatial,
        Dimension::Creation,
        Dimension::Utility,
        Dimension::DesireGoal,
        Dimension::Quality,
        Dimension::Comparative,
        Dimension::Temporal,
        Dimension::RelationalOther,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Dimension::Lexical => "lexical",
            Dimension::Similarity => "similarity",
            Dimension::Distinctness => "distinctness",
            Dimension::Taxonomic => "taxonomic",
            Dimension::PartWhole => "part-whole",
            Dimension::Spatial => "spatial",
            Dimension::Creation => "creation",
            Dimension::Utility => "utility",
            Dimension::DesireGoal => "desire-goal",
            Dimension::Quality => "quality",
            Dimension::Comparative => "comparative",
            Dimension::Temporal => "temporal",
            Dimension::RelationalOther => "relational-other",
        }
    }

    /// Position in the canonical order, in `0..13`.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Dimension> {
        Self::ALL.get(index).copied()
    }

    /// Comma-separated list of every legal name, for error messages.
    pub fn legal_names() -> String {
        Self::ALL.map(Dimension::name).join(", ")
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Dimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .iter()
            .copied()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::UnknownDimension { name: s.to_owned() })
    }
}

impl Serialize for Dimension {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Dimension {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vocabulary_is_closed_and_round_trips() {
        assert_eq!(Dimension::ALL.len(), 13);
        for (i, d) in Dimension::ALL.iter().enumerate() {
            assert_eq!(d.index(), i);
            assert_eq!(d.name().parse::<Dimension>().unwrap(), *d);
            assert_eq!(d.name(), d.name().to_lowercase());
        }
        let mut names: Vec<_> = Dimension::ALL.iter().map(|d| d.name()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 13);
    }

    #[test]
    fn unknown_name_lists_legal_names() {
        let err = "spatial-temporal".parse::<Dimension>().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("unknown dimension"));
        for d in Dimension::ALL {
            assert!(msg.contains(d.name()));
        }
    }

    #[test]
    fn serde_uses_hyphenated_names() {
        let json = serde_json::to_string(&Dimension::DesireGoal).unwrap();
        assert_eq!(json, "\"desire-goal\"");
        let back: Dimension = serde_json::from_str("\"relational-other\"").unwrap();
        assert_eq!(back, Dimension::RelationalOther);
    }
}

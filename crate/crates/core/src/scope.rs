use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

/// Highlighting label of a token.
///
/// `Plain` is reserved for text inside a region that carries a syntax
/// diagnostic; every other token receives one of the remaining labels.
/// `DefinitionKeyword` covers `define`/`domain`/`problem` and the built-in
/// logical, temporal, numeric and constraint operators. `Constant` covers
/// object and constant names, domain/problem names, and preference names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scope {
    DefinitionKeyword,
    SectionKeyword,
    RequirementFlag,
    TypeName,
    Variable,
    PredicateName,
    FunctionName,
    ActionName,
    Constant,
    Number,
    Comment,
    Punctuation,
    Plain,
}

impl Scope {
    pub const ALL: [Scope; 13] = [
        Scope::DefinitionKeyword,
        Scope::SectionKeyword,
        Scope::RequirementFlag,
        Scope::TypeName,
        Scope::Variable,
        Scope::PredicateName,
        Scope::FunctionName,
        Scope::ActionName,
        Scope::Constant,
        Scope::Number,
        Scope::Comment,
        Scope::Punctuation,
        Scope::Plain,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scope::DefinitionKeyword => "definition-keyword",
            Scope::SectionKeyword => "section-keyword",
            Scope::RequirementFlag => "requirement-flag",
            Scope::TypeName => "type-name",
            Scope::Variable => "variable",
            Scope::PredicateName => "predicate-name",
            Scope::FunctionName => "function-name",
            Scope::ActionName => "action-name",
            Scope::Constant => "constant",
            Scope::Number => "number",
            Scope::Comment => "comment",
            Scope::Punctuation => "punctuation",
            Scope::Plain => "plain",
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("unknown scope `{0}`")]
pub struct UnknownScope(pub String);

impl FromStr for Scope {
    type Err = UnknownScope;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scope::ALL
            .into_iter()
            .find(|sc| sc.as_str() == s)
            .ok_or_else(|| UnknownScope(s.to_string()))
    }
}

impl Serialize for Scope {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Scope::ALL {
            assert_eq!(s.as_str().parse::<Scope>().unwrap(), s);
        }
        assert!("keyword".parse::<Scope>().is_err());
    }
}

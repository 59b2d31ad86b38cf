//! Templates for common constructs.
//!
//! Bodies contain `${n:key}` placeholders. A key may occur several times; all
//! occurrences take the same value, and unfilled keys become `<key>`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io;
use std::path::Path;

use crate::ast::is_identifier;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SnippetError {
    #[error("unknown snippet `{name}` (available: {})", available.join(", "))]
    UnknownSnippet { name: String, available: Vec<String> },
    #[error("snippet `{snippet}` has no placeholder `{key}` (placeholders: {})", keys.join(", "))]
    UnknownPlaceholder { snippet: String, key: String, keys: Vec<String> },
    #[error("`{value}` is not a valid value for `{key}`: expected a PDDL name")]
    InvalidPlaceholderValue { key: String, value: String },
}

/// The grammar element a snippet instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConstructKind {
    Domain,
    Problem,
    Action,
    DurativeAction,
    TypesSection,
    PredicatesSection,
    FunctionsSection,
    DerivedPredicate,
    /// User-supplied snippet with no known construct.
    Custom,
}

impl ConstructKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstructKind::Domain => "domain",
            ConstructKind::Problem => "problem",
            ConstructKind::Action => "action",
            ConstructKind::DurativeAction => "durative-action",
            ConstructKind::TypesSection => "types-section",
            ConstructKind::PredicatesSection => "predicates-section",
            ConstructKind::FunctionsSection => "functions-section",
            ConstructKind::DerivedPredicate => "derived-predicate",
            ConstructKind::Custom => "custom",
        }
    }

    /// Wrap `body` in the smallest file in which it is complete.
    pub fn host(self, body: &str) -> String {
        match self {
            ConstructKind::Domain | ConstructKind::Problem | ConstructKind::Custom => body.to_string(),
            _ => format!("(define (domain host)\n{body}\n)\n"),
        }
    }
}

impl fmt::Display for ConstructKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

const SHIPPED: [(&str, ConstructKind, &str); 8] = [
    ("action", ConstructKind::Action, include_str!("../snippets/action.pddl")),
    ("derived", ConstructKind::DerivedPredicate, include_str!("../snippets/derived.pddl")),
    ("domain", ConstructKind::Domain, include_str!("../snippets/domain.pddl")),
    ("durative-action", ConstructKind::DurativeAction, include_str!("../snippets/durative-action.pddl")),
    ("functions", ConstructKind::FunctionsSection, include_str!("../snippets/functions.pddl")),
    ("predicates", ConstructKind::PredicatesSection, include_str!("../snippets/predicates.pddl")),
    ("problem", ConstructKind::Problem, include_str!("../snippets/problem.pddl")),
    ("types", ConstructKind::TypesSection, include_str!("../snippets/types.pddl")),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snippet {
    pub name: String,
    pub kind: ConstructKind,
    pub body: String,
}

/// A placeholder occurrence: `${number:key}` at `start..end` of the body.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Placeholder {
    start: usize,
    end: usize,
    number: u32,
    key: String,
}

fn placeholders(body: &str) -> Vec<Placeholder> {
    let mut out = Vec::new();
    let mut from = 0;
    while let Some(rel) = body[from..].find("${") {
        let start = from + rel;
        let inner_start = start + 2;
        let parsed = body[inner_start..].find('}').and_then(|close| {
            let (num, key) = body[inner_start..inner_start + close].split_once(':')?;
            let number = num.parse().ok()?;
            (!key.is_empty()).then(|| (close, number, key.to_string()))
        });
        match parsed {
            Some((close, number, key)) => {
                let end = inner_start + close + 1;
                out.push(Placeholder { start, end, number, key });
                from = end;
            }
            None => from = inner_start,
        }
    }
    out
}

impl Snippet {
    /// Distinct placeholder keys, by placeholder number.
    pub fn keys(&self) -> Vec<String> {
        let mut seen = BTreeMap::new();
        for p in placeholders(&self.body) {
            seen.entry(p.key).or_insert(p.number);
        }
        let mut keys: Vec<(u32, String)> = seen.into_iter().map(|(k, n)| (n, k)).collect();
        keys.sort();
        keys.into_iter().map(|(_, k)| k).collect()
    }

    /// Substitute `params` (by key or by number); unfilled keys become `<key>`.
    pub fn render(&self, params: &BTreeMap<String, String>) -> Result<String, SnippetError> {
        let found = placeholders(&self.body);
        let known: BTreeSet<String> = found
            .iter()
            .flat_map(|p| [p.key.clone(), p.number.to_string()])
            .collect();
        for (key, value) in params {
            if !known.contains(key) {
                return Err(SnippetError::UnknownPlaceholder {
                    snippet: self.name.clone(),
                    key: key.clone(),
                    keys: self.keys(),
                });
            }
            if !is_identifier(value) {
                return Err(SnippetError::InvalidPlaceholderValue { key: key.clone(), value: value.clone() });
            }
        }
        let mut out = String::with_capacity(self.body.len());
        let mut pos = 0;
        for p in &found {
            out.push_str(&self.body[pos..p.start]);
            let value = params.get(&p.key).or_else(|| params.get(&p.number.to_string()));
            match value {
                Some(v) => out.push_str(v),
                None => {
                    out.push('<');
                    out.push_str(&p.key);
                    out.push('>');
                }
            }
            pos = p.end;
        }
        out.push_str(&self.body[pos..]);
        Ok(out)
    }
}

/// The shipped snippets, optionally extended or replaced from a directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnippetSet {
    snippets: BTreeMap<String, Snippet>,
}

impl Default for SnippetSet {
    fn default() -> Self {
        let snippets = SHIPPED
            .iter()
            .map(|(name, kind, body)| {
                let s = Snippet { name: name.to_string(), kind: *kind, body: body.to_string() };
                (s.name.clone(), s)
            })
            .collect();
        SnippetSet { snippets }
    }
}

impl SnippetSet {
    /// Every `<name>.pddl` in `dir` replaces the shipped snippet of that name
    /// or adds a custom one.
    pub fn with_overrides(dir: &Path) -> io::Result<SnippetSet> {
        let mut set = SnippetSet::default();
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().is_none_or(|e| e != "pddl") {
                continue;
            }
            let Some(name) = path.file_stem().and_then(|s| s.to_str()).map(str::to_string) else {
                continue;
            };
            let body = std::fs::read_to_string(&path)?;
            let kind = set.snippets.get(&name).map_or(ConstructKind::Custom, |s| s.kind);
            set.snippets.insert(name.clone(), Snippet { name, kind, body });
        }
        Ok(set)
    }

    /// `(name, kind)` in lexicographic order.
    pub fn list(&self) -> Vec<(&str, ConstructKind)> {
        self.snippets.values().map(|s| (s.name.as_str(), s.kind)).collect()
    }

    pub fn snippet(&self, name: &str) -> Result<&Snippet, SnippetError> {
        self.snippets.get(name).ok_or_else(|| SnippetError::UnknownSnippet {
            name: name.to_string(),
            available: self.snippets.keys().cloned().collect(),
        })
    }

    pub fn get(&self, name: &str, params: &BTreeMap<String, String>) -> Result<String, SnippetError> {
        self.snippet(name)?.render(params)
    }
}

pub fn list_snippets() -> Vec<(String, ConstructKind)> {
    SnippetSet::default()
        .list()
        .into_iter()
        .map(|(n, k)| (n.to_string(), k))
        .collect()
}

pub fn get_snippet(name: &str, params: &BTreeMap<String, String>) -> Result<String, SnippetError> {
    SnippetSet::default().get(name, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_domain, parse_problem};

    fn params(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn listing_is_sorted_and_complete() {
        let names: Vec<String> = list_snippets().into_iter().map(|(n, _)| n).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        for wanted in ["domain", "problem", "action", "durative-action", "types", "predicates", "functions"] {
            assert!(names.iter().any(|n| n == wanted), "{wanted}");
        }
    }

    #[test]
    fn filled_snippets_parse_in_their_host() {
        for (name, kind) in list_snippets() {
            let s = SnippetSet::default().snippet(&name).unwrap().clone();
            let filled: BTreeMap<String, String> =
                s.keys().into_iter().enumerate().map(|(i, k)| (k, format!("id{i}"))).collect();
            let text = kind.host(&s.render(&filled).unwrap());
            let diags = match kind {
                ConstructKind::Problem => parse_problem(&text).diagnostics,
                _ => parse_domain(&text).diagnostics,
            };
            assert!(diags.is_empty(), "{name}: {diags:?}\n{text}");
        }
    }

    #[test]
    fn domain_with_name() {
        let text = get_snippet("domain", &params(&[("name", "d")])).unwrap();
        assert!(parse_domain(&text.replace("<", "x").replace(">", "")).diagnostics.is_empty());
        assert!(text.starts_with("(define (domain d)"));
    }

    #[test]
    fn defaults_and_numbers() {
        let text = get_snippet("action", &BTreeMap::new()).unwrap();
        for section in [":parameters", ":precondition", ":effect"] {
            assert!(text.contains(section));
        }
        assert!(text.contains("(:action <name>"));
        let text = get_snippet("action", &params(&[("1", "move")])).unwrap();
        assert!(text.starts_with("(:action move"));
    }

    #[test]
    fn errors() {
        assert!(matches!(get_snippet("nope", &BTreeMap::new()), Err(SnippetError::UnknownSnippet { .. })));
        assert!(matches!(
            get_snippet("action", &params(&[("name", "two words")])),
            Err(SnippetError::InvalidPlaceholderValue { .. })
        ));
        assert!(matches!(
            get_snippet("action", &params(&[("colour", "red")])),
            Err(SnippetError::UnknownPlaceholder { .. })
        ));
    }

    #[test]
    fn placeholder_scanning() {
        let p = placeholders("a ${1:x} ${oops} ${2:y}}");
        assert_eq!(p.len(), 2);
        assert_eq!((p[0].number, p[0].key.as_str()), (1, "x"));
        assert_eq!((p[1].number, p[1].key.as_str()), (2, "y"));
    }
}

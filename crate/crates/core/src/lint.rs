//! Scope classification and linting.
//!
//! Correct constructs get a highlighting scope; everything inside a region
//! that carries a diagnostic is `plain`. The two views are computed from the
//! same parse, so a token is `plain` exactly when it intersects a diagnostic.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::diagnostic::{self, Code, Diagnostic};
use crate::keywords;
use crate::lexer::{Token, TokenKind};
use crate::parser::{self, Analysis};
use crate::scope::Scope;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScopedToken {
    pub token: Token,
    pub scope: Scope,
}

/// All syntax diagnostics of a file, sorted by start offset, one per region.
pub fn lint(text: &str) -> Vec<Diagnostic> {
    lint_analysis(&parser::analyze(text))
}

fn lint_analysis(a: &Analysis) -> Vec<Diagnostic> {
    let mut all = a.diagnostics.clone();
    let covered = |t: &Token| a.diagnostics.iter().any(|d| d.span.contains(&t.span));
    for t in &a.tokens {
        let lexical = match t.kind {
            TokenKind::InvalidChar => Some(Diagnostic::error(
                Code::InvalidChar,
                t.span,
                format!("character `{}` is not allowed in PDDL", t.text.escape_debug()),
            )),
            TokenKind::Keyword if !keywords::is_known(&t.text) => {
                let msg = match keywords::near_miss_any(&t.text) {
                    Some(k) => format!("unknown keyword `{}`; did you mean `{k}`?", t.text),
                    None => format!("unknown keyword `{}`", t.text),
                };
                Some(Diagnostic::error(Code::UnknownKeyword, t.span, msg))
            }
            _ => None,
        };
        if let Some(d) = lexical.filter(|_| !covered(t)) {
            all.push(d);
        }
    }
    diagnostic::normalize(all)
}

/// Scope of every non-whitespace token, in source order.
pub fn classify(text: &str) -> Vec<ScopedToken> {
    let a = parser::analyze(text);
    let diags = lint_analysis(&a);
    classify_with(a, &diags)
}

/// Classification together with the diagnostics it was derived from.
pub fn classify_and_lint(text: &str) -> (Vec<ScopedToken>, Vec<Diagnostic>) {
    let a = parser::analyze(text);
    let diags = lint_analysis(&a);
    (classify_with(a, &diags), diags)
}

fn classify_with(a: Analysis, diags: &[Diagnostic]) -> Vec<ScopedToken> {
    a.tokens
        .into_iter()
        .zip(a.scopes)
        .filter_map(|(token, scope)| {
            let scope = scope?;
            let scope = if diags.iter().any(|d| d.span.intersects(&token.span)) {
                Scope::Plain
            } else {
                scope
            };
            Some(ScopedToken { token, scope })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScopeFormat {
    Json,
    Ansi,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("unknown output format `{0}` (expected `json` or `ansi`)")]
pub struct UnknownFormat(pub String);

impl FromStr for ScopeFormat {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ScopeFormat::Json),
            "ansi" => Ok(ScopeFormat::Ansi),
            _ => Err(UnknownFormat(s.to_string())),
        }
    }
}

/// An SGR parameter string such as `34` or `1;31`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnsiColor(String);

impl AnsiColor {
    pub fn sgr(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("unknown color `{0}`")]
pub struct UnknownColor(pub String);

const BASE_COLORS: [&str; 8] = ["black", "red", "green", "yellow", "blue", "magenta", "cyan", "white"];

impl FromStr for AnsiColor {
    type Err = UnknownColor;

    /// Accepts a color name (`blue`), a `bright-`/`bold-` prefixed name, or
    /// raw SGR parameters (`1;34`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let base = |name: &str| BASE_COLORS.iter().position(|c| *c == name);
        let sgr = if let Some(n) = s.strip_prefix("bright-").and_then(base) {
            format!("{}", 90 + n)
        } else if let Some(n) = s.strip_prefix("bold-").and_then(base) {
            format!("1;{}", 30 + n)
        } else if let Some(n) = base(s) {
            format!("{}", 30 + n)
        } else if !s.is_empty() && s.split(';').all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit())) {
            s.to_string()
        } else {
            return Err(UnknownColor(s.to_string()));
        };
        Ok(AnsiColor(sgr))
    }
}

/// Scope to terminal color. Scopes without an entry are written uncolored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ColorMap(pub BTreeMap<Scope, AnsiColor>);

impl ColorMap {
    pub fn empty() -> ColorMap {
        ColorMap::default()
    }

    /// Built-in palette. `plain` stays uncolored, so errors show as default text.
    pub fn default_palette() -> ColorMap {
        let entries = [
            (Scope::DefinitionKeyword, "magenta"),
            (Scope::SectionKeyword, "bold-blue"),
            (Scope::RequirementFlag, "cyan"),
            (Scope::TypeName, "green"),
            (Scope::Variable, "yellow"),
            (Scope::PredicateName, "blue"),
            (Scope::FunctionName, "bright-cyan"),
            (Scope::ActionName, "bold-red"),
            (Scope::Constant, "bright-green"),
            (Scope::Number, "bright-magenta"),
            (Scope::Comment, "bright-black"),
            (Scope::Punctuation, "bright-black"),
        ];
        ColorMap(
            entries
                .into_iter()
                .map(|(s, c)| (s, c.parse().expect("built-in color")))
                .collect(),
        )
    }
}

#[derive(Serialize)]
struct Record<'a> {
    text: &'a str,
    scope: Scope,
    start: usize,
    end: usize,
}

/// Render classified tokens. `source` supplies the whitespace between tokens.
pub fn emit_scopes(source: &str, scoped: &[ScopedToken], format: ScopeFormat, colors: &ColorMap) -> String {
    match format {
        ScopeFormat::Json => {
            let records: Vec<Record> = scoped
                .iter()
                .map(|s| Record {
                    text: &s.token.text,
                    scope: s.scope,
                    start: s.token.span.start_byte,
                    end: s.token.span.end_byte,
                })
                .collect();
            serde_json::to_string(&records).expect("records serialize")
        }
        ScopeFormat::Ansi => {
            let mut out = String::with_capacity(source.len());
            let mut pos = 0;
            for s in scoped {
                let span = s.token.span;
                out.push_str(&source[pos..span.start_byte]);
                match colors.0.get(&s.scope) {
                    Some(c) => {
                        let _ = write!(out, "\x1b[{}m{}\x1b[0m", c.sgr(), s.token.text);
                    }
                    None => out.push_str(&s.token.text),
                }
                pos = span.end_byte;
            }
            out.push_str(&source[pos..]);
            out
        }
    }
}

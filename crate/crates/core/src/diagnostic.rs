use std::fmt;

use serde::Serialize;

use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// Closed set of diagnostic codes.
///
/// | code | meaning |
/// |------|---------|
/// | `unbalanced-paren` | missing `)` (span runs to where the list was force-closed, or end of file) or a stray `)` |
/// | `invalid-char` | character outside the PDDL alphabet |
/// | `unknown-keyword` | `:keyword` not in the PDDL 3.1 keyword set; names the closest candidate when one is near |
/// | `misplaced-keyword` | known keyword in a context where it is not allowed |
/// | `unknown-requirement` | requirement flag not defined by PDDL 3.1 |
/// | `invalid-syntax` | element does not match the grammar at its position |
/// | `missing-element` | a required part (name, section, value) is absent |
/// | `duplicate-declaration` | a type or section declared twice |
/// | `unbound-variable` | variable not bound by parameters or an enclosing quantifier |
/// | `non-ground-init` | variable inside a problem's `:init` |
/// | `wrong-file-kind` | a problem given where a domain is expected, or vice versa |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Code {
    #[serde(rename = "unbalanced-paren")]
    UnbalancedParen,
    #[serde(rename = "invalid-char")]
    InvalidChar,
    #[serde(rename = "unknown-keyword")]
    UnknownKeyword,
    #[serde(rename = "misplaced-keyword")]
    MisplacedKeyword,
    #[serde(rename = "unknown-requirement")]
    UnknownRequirement,
    #[serde(rename = "invalid-syntax")]
    InvalidSyntax,
    #[serde(rename = "missing-element")]
    MissingElement,
    #[serde(rename = "duplicate-declaration")]
    DuplicateDeclaration,
    #[serde(rename = "unbound-variable")]
    UnboundVariable,
    #[serde(rename = "non-ground-init")]
    NonGroundInit,
    #[serde(rename = "wrong-file-kind")]
    WrongFileKind,
}

impl Code {
    pub const ALL: [Code; 11] = [
        Code::UnbalancedParen,
        Code::InvalidChar,
        Code::UnknownKeyword,
        Code::MisplacedKeyword,
        Code::UnknownRequirement,
        Code::InvalidSyntax,
        Code::MissingElement,
        Code::DuplicateDeclaration,
        Code::UnboundVariable,
        Code::NonGroundInit,
        Code::WrongFileKind,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Code::UnbalancedParen => "unbalanced-paren",
            Code::InvalidChar => "invalid-char",
            Code::UnknownKeyword => "unknown-keyword",
            Code::MisplacedKeyword => "misplaced-keyword",
            Code::UnknownRequirement => "unknown-requirement",
            Code::InvalidSyntax => "invalid-syntax",
            Code::MissingElement => "missing-element",
            Code::DuplicateDeclaration => "duplicate-declaration",
            Code::UnboundVariable => "unbound-variable",
            Code::NonGroundInit => "non-ground-init",
            Code::WrongFileKind => "wrong-file-kind",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub span: SourceSpan,
    pub severity: Severity,
    pub code: Code,
    pub message: String,
}

impl Diagnostic {
    pub fn error(code: Code, span: SourceSpan, message: impl Into<String>) -> Diagnostic {
        let message = message.into();
        debug_assert!(!message.is_empty());
        Diagnostic {
            span,
            severity: Severity::Error,
            code,
            message,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}[{}]: {}",
            self.span.start_line, self.span.start_col, self.severity, self.code, self.message
        )
    }
}

/// Sort by start (outer regions first on ties) and drop every diagnostic
/// whose span lies inside an already kept one, so each region reports once.
pub fn normalize(mut diagnostics: Vec<Diagnostic>) -> Vec<Diagnostic> {
    diagnostics.sort_by(|a, b| {
        a.span
            .start_byte
            .cmp(&b.span.start_byte)
            .then(b.span.end_byte.cmp(&a.span.end_byte))
            .then(a.code.cmp(&b.code))
    });
    let mut kept: Vec<Diagnostic> = Vec::with_capacity(diagnostics.len());
    let mut reach = 0usize;
    for d in diagnostics {
        let covered = !kept.is_empty() && d.span.end_byte <= reach;
        if covered {
            continue;
        }
        reach = reach.max(d.span.end_byte);
        kept.push(d);
    }
    kept
}

//! PDDL 3.1 authoring toolkit: lossless lexing, error-tolerant parsing,
//! scope classification and linting, type-hierarchy diagrams, project
//! scaffolding, snippets and distance preprocessing.

pub mod ast;
pub mod diagnostic;
pub mod distance;
pub mod hierarchy;
pub mod keywords;
pub mod lexer;
pub mod lint;
pub mod parser;
pub mod printer;
pub mod render;
pub mod scaffold;
pub mod scope;
pub mod sexp;
pub mod snapshot;
pub mod snippets;
pub mod span;
#[cfg(feature = "proptest")]
pub mod strategies;

pub use ast::{Domain, Problem};
pub use diagnostic::{Code, Diagnostic, Severity};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse_domain, parse_problem, ParseResult};
pub use scope::Scope;
pub use span::SourceSpan;

//! Parenthesis tree over the significant tokens, with recovery for
//! unbalanced input.
//!
//! Balanced input is grouped by plain bracket matching. When brackets do not
//! balance the tree is rebuilt with two extra kinds of evidence:
//!
//! * synchronization keywords: a `(:section` list can only appear directly
//!   inside `define`, and `:parameters`/`:precondition`/… only directly
//!   inside an action, so meeting one deeper than that closes the lists in
//!   between;
//! * layout: inside a section, a line that starts with `(` at or left of the
//!   column of a still-open list closes that list, and a `)` followed by a
//!   line indented past the list it would close is treated as stray.
//!
//! Each recovery emits one `unbalanced-paren` diagnostic covering the list
//! that lacked its `)` (or the stray `)` itself).

use crate::diagnostic::{Code, Diagnostic};
use crate::keywords;
use crate::lexer::{Token, TokenKind};
use crate::span::{LineIndex, SourceSpan};

#[derive(Debug, Clone)]
pub enum Sexp {
    /// Index into the token vector.
    Atom(usize),
    List(List),
}

#[derive(Debug, Clone)]
pub struct List {
    pub open: usize,
    /// `None` when the list was closed by recovery.
    pub close: Option<usize>,
    pub items: Vec<Sexp>,
    pub span: SourceSpan,
}

impl Sexp {
    pub fn span(&self, tokens: &[Token]) -> SourceSpan {
        match self {
            Sexp::Atom(i) => tokens[*i].span,
            Sexp::List(l) => l.span,
        }
    }

    pub fn as_list(&self) -> Option<&List> {
        match self {
            Sexp::List(l) => Some(l),
            Sexp::Atom(_) => None,
        }
    }

    pub fn as_atom(&self) -> Option<usize> {
        match self {
            Sexp::Atom(i) => Some(*i),
            Sexp::List(_) => None,
        }
    }
}

#[derive(Debug)]
pub struct Tree {
    pub items: Vec<Sexp>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Depth at which layout-based recovery applies: lists nested inside a
/// section of a `define`.
const LAYOUT_DEPTH: usize = 3;

pub fn build(text: &str, tokens: &[Token]) -> Tree {
    let strict = Builder::new(text, tokens, false).run();
    if strict.diagnostics.is_empty() {
        strict
    } else {
        Builder::new(text, tokens, true).run()
    }
}

struct Frame {
    open: usize,
    items: Vec<Sexp>,
}

struct Builder<'a> {
    text: &'a str,
    tokens: &'a [Token],
    /// Indices of significant tokens.
    sig: Vec<usize>,
    layout: bool,
    index: LineIndex<'a>,
    stack: Vec<Frame>,
    root: Vec<Sexp>,
    diagnostics: Vec<Diagnostic>,
}

impl<'a> Builder<'a> {
    fn new(text: &'a str, tokens: &'a [Token], layout: bool) -> Self {
        let sig = tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.kind.is_trivia())
            .map(|(i, _)| i)
            .collect();
        Builder {
            text,
            tokens,
            sig,
            layout,
            index: LineIndex::new(text),
            stack: Vec::new(),
            root: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    fn run(mut self) -> Tree {
        for pos in 0..self.sig.len() {
            let i = self.sig[pos];
            let next = self.sig.get(pos + 1).copied();
            match self.tokens[i].kind {
                TokenKind::LParen => {
                    self.sync_section(next);
                    if self.layout {
                        self.layout_open(i);
                    }
                    self.stack.push(Frame {
                        open: i,
                        items: Vec::new(),
                    });
                }
                TokenKind::RParen => {
                    let after = self.sig[pos + 1..]
                        .iter()
                        .copied()
                        .find(|&j| self.tokens[j].kind != TokenKind::RParen);
                    self.close(i, next, after)
                }
                _ => {
                    self.sync_action_keyword(i);
                    self.push_item(Sexp::Atom(i));
                }
            }
        }
        if let Some(outer) = (!self.stack.is_empty()).then_some(0) {
            let open = self.stack[outer].open;
            let span = self.index.span(self.tokens[open].span.start_byte, self.text.len());
            self.diagnostics.push(Diagnostic::error(
                Code::UnbalancedParen,
                span,
                "missing `)`: list is never closed",
            ));
            self.force_close_to(0);
        }
        Tree {
            items: self.root,
            diagnostics: self.diagnostics,
        }
    }

    fn push_item(&mut self, item: Sexp) {
        match self.stack.last_mut() {
            Some(frame) => frame.items.push(item),
            None => self.root.push(item),
        }
    }

    /// `next` is the token right after `i`; `after` the first one that is not `)`.
    fn close(&mut self, i: usize, next: Option<usize>, after: Option<usize>) {
        let Some(top) = self.stack.last() else {
            self.diagnostics.push(Diagnostic::error(
                Code::UnbalancedParen,
                self.tokens[i].span,
                "unexpected `)` with no open list",
            ));
            return;
        };
        if self.layout && self.closes_action_too_early(top, next) {
            self.diagnostics.push(Diagnostic::error(
                Code::UnbalancedParen,
                self.tokens[i].span,
                "extra `)`: the action continues after it",
            ));
            return;
        }
        if self.layout && self.stack.len() >= 2 {
            let open = &self.tokens[top.open].span;
            if let Some(after) = after.filter(|&n| self.line_leading(n)) {
                let next_span = &self.tokens[after].span;
                if next_span.start_line > self.tokens[i].span.end_line
                    && next_span.start_col > open.start_col
                {
                    self.diagnostics.push(Diagnostic::error(
                        Code::UnbalancedParen,
                        self.tokens[i].span,
                        "extra `)`: the following lines still belong to this list",
                    ));
                    return;
                }
            }
        }
        let frame = self.stack.pop().expect("checked above");
        let span = self.tokens[frame.open].span.cover(&self.tokens[i].span);
        self.push_item(Sexp::List(List {
            open: frame.open,
            close: Some(i),
            items: frame.items,
            span,
        }));
    }

    /// A `(:section` list closes everything nested deeper than `define`.
    fn sync_section(&mut self, next: Option<usize>) {
        let Some(next) = next else { return };
        let tok = &self.tokens[next];
        if tok.kind != TokenKind::Keyword || !keywords::is_section(&tok.text) {
            return;
        }
        if self.stack.len() > 1 {
            self.report_and_close(1, "missing `)` before the next section");
        }
    }

    /// `:parameters`, `:effect`, … close everything nested inside the
    /// enclosing action.
    fn sync_action_keyword(&mut self, i: usize) {
        let tok = &self.tokens[i];
        if tok.kind != TokenKind::Keyword || !keywords::is_action_body(&tok.text) {
            return;
        }
        let action = self.stack.iter().rposition(|f| {
            self.head_token(f)
                .is_some_and(|h| h.kind == TokenKind::Keyword && keywords::is_structure(&h.text))
        });
        if let Some(depth) = action {
            if depth + 1 < self.stack.len() {
                self.report_and_close(depth + 1, "missing `)` before this action keyword");
            }
        }
    }

    /// Closing an action right before one of its own body keywords.
    fn closes_action_too_early(&self, top: &Frame, next: Option<usize>) -> bool {
        let is_action = self
            .head_token(top)
            .is_some_and(|h| h.kind == TokenKind::Keyword && keywords::is_structure(&h.text));
        is_action
            && next.is_some_and(|n| {
                let t = &self.tokens[n];
                t.kind == TokenKind::Keyword && keywords::is_action_body(&t.text)
            })
    }

    fn layout_open(&mut self, i: usize) {
        if !self.line_leading(i) {
            return;
        }
        let span = self.tokens[i].span;
        let first_closed = (LAYOUT_DEPTH - 1..self.stack.len()).find(|&d| {
            let open = &self.tokens[self.stack[d].open].span;
            open.start_line < span.start_line && open.start_col >= span.start_col
        });
        if let Some(depth) = first_closed {
            self.report_and_close(depth, "missing `)`: a later line starts at or left of this list");
        }
    }

    fn head_token(&self, frame: &Frame) -> Option<&Token> {
        frame.items.first().and_then(Sexp::as_atom).map(|i| &self.tokens[i])
    }

    fn line_leading(&self, i: usize) -> bool {
        let start = self.tokens[i].span.start_byte;
        self.text[..start]
            .rsplit('\n')
            .next()
            .is_some_and(|prefix| prefix.chars().all(char::is_whitespace))
    }

    /// Close every frame at index `depth` and above, reporting the outermost.
    fn report_and_close(&mut self, depth: usize, message: &str) {
        let frame = &self.stack[depth];
        let start = self.tokens[frame.open].span;
        let end = frame.items.last().map_or(start, |s| s.span(self.tokens));
        self.diagnostics
            .push(Diagnostic::error(Code::UnbalancedParen, start.cover(&end), message));
        self.force_close_to(depth);
    }

    fn force_close_to(&mut self, depth: usize) {
        while self.stack.len() > depth {
            let frame = self.stack.pop().expect("non-empty");
            let start = self.tokens[frame.open].span;
            let end = frame.items.last().map_or(start, |s| s.span(self.tokens));
            self.push_item(Sexp::List(List {
                open: frame.open,
                close: None,
                items: frame.items,
                span: start.cover(&end),
            }));
        }
    }
}
